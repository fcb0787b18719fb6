//! Shared plumbing for the acceptance suite: one-line verdict printing and a
//! memoized noisy sweep reused by several checks.

use std::sync::OnceLock;

use qutrit_battery::experiments::{parse_config, run_sweep, SweepPoint, SweepPointFailure};

/// Print a single verdict line for one acceptance check and panic on failure.
///
/// Run the suite with `--nocapture` to see the PASS lines too; the standard
/// harness only replays output of failing tests.
pub fn conclude(number: u32, name: &str, details: String, failures: Vec<String>) {
    if failures.is_empty() {
        println!("criterion {number:02} ({name}): PASS ({details})");
    } else {
        let violated = failures.join("; ");
        println!("criterion {number:02} ({name}): FAIL ({details}; violated: {violated})");
        panic!("criterion {number} failed: {violated}");
    }
}

/// Format a bound check as `label = value (bound)` for the details string.
pub fn detail(label: &str, value: f64, bound: &str) -> String {
    format!("{label} = {value:.4e} ({bound})")
}

/// Record `message` when `ok` is false.
pub fn require(failures: &mut Vec<String>, ok: bool, message: String) {
    if !ok {
        failures.push(message);
    }
}

/// The decay-ladder sweep over the default grid, shared between the checks
/// that look at its peak. Computed once per test binary.
pub fn noisy_sweep_rows() -> &'static [Result<SweepPoint, SweepPointFailure>] {
    static ROWS: OnceLock<Vec<Result<SweepPoint, SweepPointFailure>>> = OnceLock::new();
    ROWS.get_or_init(|| {
        let config =
            parse_config("preset = transmon\ngamma21 = 0.01\n").expect("noisy sweep config parses");
        run_sweep(&config, None).expect("noisy sweep runs")
    })
}

/// The successful row with the largest stored work, with its grid index.
pub fn peak_row(rows: &[Result<SweepPoint, SweepPointFailure>]) -> (usize, SweepPoint) {
    rows.iter()
        .enumerate()
        .filter_map(|(i, r)| r.as_ref().ok().map(|p| (i, *p)))
        .max_by(|a, b| a.1.ergotropy.total_cmp(&b.1.ergotropy))
        .expect("sweep has at least one successful row")
}
