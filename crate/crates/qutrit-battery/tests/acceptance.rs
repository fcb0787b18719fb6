//! Acceptance suite: one test per release gate, each printing a single
//! PASS/FAIL verdict line (run with `--nocapture` to see them all).
//!
//! Every check exercises the library through its public surface and compares
//! against closed forms, an independent exponential-map propagator, or
//! physical bounds that the three-level battery must respect.

mod common;

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{conclude, detail, noisy_sweep_rows, peak_row, require};
use qutrit_battery::discharge::{ergotropy_closed_form, populations_closed_form};
use qutrit_battery::experiments::{
    parse_config, run_charge, run_self_discharge, run_sweep, write_charge_csv, write_discharge_csv,
    write_sweep_csv,
};
use qutrit_battery::linalg::{eig3_hermitian, DensityMatrix};
use qutrit_battery::lindblad::{
    evolve, propagate_piecewise_constant, DriveSegment, EvolutionTrace, EvolveOptions, NoiseRates,
};
use qutrit_battery::model::{
    coupling_hamiltonian, eigensystem, Direction, Protocol, Ramp, Spectrum,
};
use qutrit_battery::observables::ergotropy;
use qutrit_battery::C64;

/// Samples of the stored work once the drive fields are frozen.
fn hold_work(trace: &EvolutionTrace, ramp_end: f64) -> Vec<(f64, f64)> {
    trace
        .samples()
        .iter()
        .filter(|s| s.t >= ramp_end)
        .map(|s| (s.t, s.ergotropy))
        .collect()
}

/// Angular frequency estimated from interior local maxima of a sampled signal.
fn measured_angular_frequency(signal: &[(f64, f64)]) -> Option<f64> {
    let mut peaks = Vec::new();
    for i in 1..signal.len().saturating_sub(1) {
        if signal[i].1 > signal[i - 1].1 && signal[i].1 > signal[i + 1].1 {
            peaks.push(signal[i].0);
        }
    }
    (peaks.len() >= 2).then(|| {
        2.0 * std::f64::consts::PI * (peaks.len() - 1) as f64
            / (peaks.last().unwrap() - peaks.first().unwrap())
    })
}

#[test]
fn criterion_01_dark_state_charge_reaches_capacity_and_holds() {
    let mut failures = Vec::new();

    let config = parse_config("tau = 100\n").unwrap();
    let capacity = config.spectrum().max_ergotropy();
    let charged = run_charge(&config).unwrap().last().ergotropy;
    let ratio = charged / capacity;
    require(
        &mut failures,
        ratio >= 0.99,
        format!("stored work reached only {ratio:.6} of capacity (need >= 0.99)"),
    );

    let held = run_charge(&parse_config("tau = 100\nhold = 200\n").unwrap()).unwrap();
    let work: Vec<f64> = hold_work(&held, 100.0).iter().map(|&(_, w)| w).collect();
    let lo = work.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = work.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let variation = hi - lo;
    require(
        &mut failures,
        variation < 1e-4 * capacity,
        format!(
            "work varied by {variation:.3e} over the hold (need < {:.3e})",
            1e-4 * capacity
        ),
    );

    conclude(
        1,
        "dark-state charge and hold",
        format!(
            "{} after the ramp; {} over a hold of twice the ramp",
            detail("C/C_max", ratio, ">= 0.99"),
            detail("variation", variation, "< 1e-4 C_max"),
        ),
        failures,
    );
}

#[test]
fn criterion_02_bright_path_hold_oscillates_at_twice_the_gap() {
    let mut failures = Vec::new();

    let config = parse_config("direction = unstable\ntau = 100\nhold = 200\n").unwrap();
    let capacity = config.spectrum().max_ergotropy();
    let trace = run_charge(&config).unwrap();
    let signal = hold_work(&trace, 100.0);

    let values: Vec<f64> = signal.iter().map(|&(_, w)| w).collect();
    let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let amplitude = hi - lo;
    require(
        &mut failures,
        amplitude >= 0.5 * capacity,
        format!(
            "peak-to-trough swing {amplitude:.6} is below half the capacity {:.6}",
            0.5 * capacity
        ),
    );

    let expected = 2.0 * config.protocol().unwrap().gap(100.0).unwrap();
    let omega = measured_angular_frequency(&signal).expect("hold shows repeated peaks");
    let frequency_error = (omega - expected).abs() / expected;
    require(
        &mut failures,
        frequency_error <= 0.02,
        format!("angular frequency {omega:.6} deviates from {expected:.6} by more than 2%"),
    );

    conclude(
        2,
        "bright-path hold oscillation",
        format!(
            "{}; {}",
            detail("swing/C_max", amplitude / capacity, ">= 0.5"),
            detail("frequency error", frequency_error, "<= 0.02"),
        ),
        failures,
    );
}

#[test]
fn criterion_03_dark_state_is_annihilated_for_random_drives() {
    let mut failures = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(0x0d2a);

    let mut worst_residual: f64 = 0.0;
    let mut worst_energy: f64 = 0.0;
    let mut checked = 0;
    while checked < 1000 {
        let omega12: f64 = rng.gen_range(-4.0..4.0);
        let omega23: f64 = rng.gen_range(-4.0..4.0);
        if omega12.hypot(omega23) < 1e-3 {
            continue;
        }
        checked += 1;

        let system = eigensystem(omega12, omega23).unwrap();
        let h = coupling_hamiltonian(omega12, omega23);

        let mut residual_sq = 0.0;
        for i in 0..3 {
            let mut acc = C64::new(0.0, 0.0);
            for j in 0..3 {
                acc += h[(i, j)] * system.dark[j];
            }
            residual_sq += acc.norm_sqr();
        }
        worst_residual = worst_residual.max(residual_sq.sqrt());

        let eigen = eig3_hermitian(&h, 1e-12).unwrap();
        let expected = [-system.delta, 0.0, system.delta];
        for (got, want) in eigen.values.iter().zip(expected) {
            worst_energy = worst_energy.max((got - want).abs());
        }
    }

    require(
        &mut failures,
        worst_residual < 1e-12,
        format!("largest |H dark| residual {worst_residual:.3e} exceeds 1e-12"),
    );
    require(
        &mut failures,
        worst_energy < 1e-10,
        format!("largest eigenvalue deviation {worst_energy:.3e} exceeds 1e-10"),
    );

    conclude(
        3,
        "dark state annihilated over 1000 random drives",
        format!(
            "{}; {}",
            detail("max |H dark|", worst_residual, "< 1e-12"),
            detail("max eigenvalue error", worst_energy, "< 1e-10"),
        ),
        failures,
    );
}

#[test]
fn criterion_04_trajectories_stay_on_the_physical_manifold() {
    let mut failures = Vec::new();

    let configs = [
        "tau = 100\nhold = 200\n",
        "direction = unstable\ntau = 100\nhold = 200\n",
        "preset = transmon\ngamma21 = 0.01\ntau = 100\n",
    ];

    let mut worst_trace: f64 = 0.0;
    let mut worst_herm: f64 = 0.0;
    let mut worst_eig: f64 = 0.0;
    for text in configs {
        let trace = run_charge(&parse_config(text).unwrap()).unwrap();
        worst_trace = worst_trace.max(trace.max_trace_error());
        worst_herm = worst_herm.max(trace.max_hermiticity_drift());
        worst_eig = worst_eig.min(trace.min_eigenvalue());
    }

    require(
        &mut failures,
        worst_trace < 1e-9,
        format!("trace error reached {worst_trace:.3e} (need < 1e-9)"),
    );
    require(
        &mut failures,
        worst_herm < 1e-12,
        format!("hermiticity drift reached {worst_herm:.3e} (need < 1e-12)"),
    );
    require(
        &mut failures,
        worst_eig >= -1e-8,
        format!("eigenvalue dipped to {worst_eig:.3e} (need >= -1e-8)"),
    );

    conclude(
        4,
        "trajectories stay physical",
        format!(
            "{}; {}; {}",
            detail("max trace error", worst_trace, "< 1e-9"),
            detail("max hermiticity drift", worst_herm, "< 1e-12"),
            detail("min eigenvalue", worst_eig, ">= -1e-8"),
        ),
        failures,
    );
}

#[test]
fn criterion_05_integrator_agrees_with_exponential_map_and_converges() {
    let mut failures = Vec::new();

    let spectrum = Spectrum::transmon();
    let tau = 50.0;
    let protocol = Protocol::new(1.0, tau, Ramp::Linear, Direction::Stable, 0.0).unwrap();
    let ground = DensityMatrix::pure(1).unwrap();

    let segments: Vec<DriveSegment> = (0..1000)
        .map(|i| {
            let dt = tau / 1000.0;
            let (omega12, omega23) = protocol.drives((i as f64 + 0.5) * dt).unwrap();
            DriveSegment {
                omega12,
                omega23,
                dt,
            }
        })
        .collect();

    let mut gaps = Vec::new();
    for (label, rates) in [
        ("noiseless", NoiseRates::none()),
        ("decaying", NoiseRates::transmon(1e-2).unwrap()),
    ] {
        let staircase = propagate_piecewise_constant(&ground, &segments, &rates).unwrap();
        let options = EvolveOptions::new(tau, 100_000, 100_000);
        let trace = evolve(&ground, Some(&protocol), &rates, &spectrum, &options).unwrap();
        let gap = (trace.last().ergotropy - ergotropy(&staircase, &spectrum)).abs();
        require(
            &mut failures,
            gap < 1e-4,
            format!("{label}: integrator vs exponential map differ by {gap:.3e} (need < 1e-4)"),
        );
        gaps.push(gap);
    }

    // Fourth-order self-convergence: halving the step size should shrink the
    // endpoint error by about 2^4 until roundoff takes over.
    let reference = {
        let options = EvolveOptions::new(tau, 256_000, 256_000);
        evolve(
            &ground,
            Some(&protocol),
            &NoiseRates::none(),
            &spectrum,
            &options,
        )
        .unwrap()
        .last()
        .ergotropy
    };
    let errors: Vec<f64> = [2000usize, 4000, 8000]
        .iter()
        .map(|&steps| {
            let options = EvolveOptions::new(tau, steps, steps);
            let work = evolve(
                &ground,
                Some(&protocol),
                &NoiseRates::none(),
                &spectrum,
                &options,
            )
            .unwrap()
            .last()
            .ergotropy;
            (work - reference).abs()
        })
        .collect();
    let ratios = [errors[0] / errors[1], errors[1] / errors[2]];
    for ratio in ratios {
        require(
            &mut failures,
            (12.0..=20.0).contains(&ratio),
            format!("error ratio per halving {ratio:.2} is outside 16 +/- 4"),
        );
    }

    conclude(
        5,
        "independent propagator and convergence order",
        format!(
            "{}; {}; halving ratios {:.2} and {:.2} (16 +/- 4)",
            detail("noiseless gap", gaps[0], "< 1e-4"),
            detail("decaying gap", gaps[1], "< 1e-4"),
            ratios[0],
            ratios[1],
        ),
        failures,
    );
}

#[test]
fn criterion_06_noiseless_sweep_power_envelope() {
    let mut failures = Vec::new();
    let started = Instant::now();

    let config = parse_config("").unwrap();
    let rows = run_sweep(&config, None).unwrap();
    let points: Vec<_> = rows
        .iter()
        .map(|r| r.as_ref().expect("noiseless sweep points all succeed"))
        .collect();

    let best = points
        .iter()
        .max_by(|a, b| a.power_ratio.total_cmp(&b.power_ratio))
        .unwrap();
    require(
        &mut failures,
        (0.35..=0.65).contains(&best.power_ratio),
        format!(
            "peak power ratio {:.4} is outside 0.5 +/- 0.15",
            best.power_ratio
        ),
    );

    let first_full = points
        .iter()
        .find(|p| p.ergotropy_ratio >= 0.99)
        .expect("some ramp time reaches 99% of capacity");
    require(
        &mut failures,
        (0.15..=0.35).contains(&first_full.power_ratio),
        format!(
            "power ratio {:.4} at the shortest full-charge ramp is outside 0.25 +/- 0.1",
            first_full.power_ratio
        ),
    );

    let elapsed = started.elapsed().as_secs_f64();
    require(
        &mut failures,
        elapsed < 300.0,
        format!("sweep took {elapsed:.1} s (need < 300 s)"),
    );

    conclude(
        6,
        "noiseless power envelope",
        format!(
            "peak P/P_max = {:.4} at tau = {:.3}; P/P_max = {:.4} at the shortest full-charge ramp tau = {:.3}; {elapsed:.1} s",
            best.power_ratio, best.tau, first_full.power_ratio, first_full.tau,
        ),
        failures,
    );
}

#[test]
fn criterion_07_decay_creates_an_interior_optimum() {
    let mut failures = Vec::new();

    let rows = noisy_sweep_rows();
    let errored = rows.iter().filter(|r| r.is_err()).count();
    require(
        &mut failures,
        errored == 0,
        format!("{errored} sweep points failed to integrate"),
    );

    let (index, peak) = peak_row(rows);
    let first = rows
        .first()
        .unwrap()
        .as_ref()
        .expect("first point succeeds");
    let last = rows.last().unwrap().as_ref().expect("last point succeeds");

    require(
        &mut failures,
        index > 0 && index < rows.len() - 1,
        format!("best ramp time sits on the grid edge (index {index})"),
    );
    require(
        &mut failures,
        peak.ergotropy > first.ergotropy && peak.ergotropy > last.ergotropy,
        format!(
            "peak work {:.6} does not exceed both endpoints ({:.6}, {:.6})",
            peak.ergotropy, first.ergotropy, last.ergotropy
        ),
    );

    conclude(
        7,
        "interior optimum under decay",
        format!(
            "C/C_max = {:.4} at tau = {:.2} vs {:.4} at tau = {:.2} and {:.4} at tau = {:.2}",
            peak.ergotropy_ratio,
            peak.tau,
            first.ergotropy_ratio,
            first.tau,
            last.ergotropy_ratio,
            last.tau,
        ),
        failures,
    );
}

#[test]
fn criterion_08_free_decay_matches_closed_forms() {
    let mut failures = Vec::new();

    let spectrum = Spectrum::transmon();
    let rates = NoiseRates::new(1.0, 2.0, 0.0, 0.0, 0.0).unwrap();

    // Closed forms against the analytic two-exponential solution at t = 1.
    let (p2, p3) = populations_closed_form(&rates, 1.0, (0.0, 1.0)).unwrap();
    let p3_exact = (-2.0f64).exp();
    let p2_exact = 2.0 * ((-1.0f64).exp() - (-2.0f64).exp());
    let work = ergotropy_closed_form(&spectrum, &rates, 1.0).unwrap();
    let work_exact = spectrum.gap21() * p2_exact + spectrum.gap31() * p3_exact;

    // Numeric free decay through the full integrator.
    let options = EvolveOptions::new(1.0, 20_000, 20_000);
    let trace = evolve(
        &DensityMatrix::pure(3).unwrap(),
        None,
        &rates,
        &spectrum,
        &options,
    )
    .unwrap();
    let end = trace.last();

    let checks = [
        ("closed-form P2", (p2 - p2_exact).abs()),
        ("closed-form P3", (p3 - p3_exact).abs()),
        ("closed-form work", (work - work_exact).abs()),
        ("numeric P2", (end.populations[1] - p2_exact).abs()),
        ("numeric P3", (end.populations[2] - p3_exact).abs()),
        ("numeric work", (end.ergotropy - work_exact).abs()),
    ];
    let mut worst: f64 = 0.0;
    for (label, gap) in checks {
        worst = worst.max(gap);
        require(
            &mut failures,
            gap < 1e-6,
            format!("{label} deviates by {gap:.3e} (need < 1e-6)"),
        );
    }

    // Equal decay rates fall onto a dedicated confluent branch; crossing the
    // branch threshold must not move the curve by more than 1e-6.
    let nearly_equal = NoiseRates::new(1.0, 1.0 + 1.2e-6, 0.0, 0.0, 0.0).unwrap();
    let equal = NoiseRates::new(1.0, 1.0, 0.0, 0.0, 0.0).unwrap();
    let mut worst_branch_gap: f64 = 0.0;
    for k in 0..=50 {
        let t = 0.1 * k as f64;
        let general = ergotropy_closed_form(&spectrum, &nearly_equal, t).unwrap();
        let confluent = ergotropy_closed_form(&spectrum, &equal, t).unwrap();
        worst_branch_gap = worst_branch_gap.max((general - confluent).abs());
    }
    require(
        &mut failures,
        worst_branch_gap < 1e-6,
        format!("branch crossing moves the curve by {worst_branch_gap:.3e} (need < 1e-6)"),
    );

    // Inside the threshold both rate pairs evaluate the same branch exactly.
    let inside = NoiseRates::new(1.0, 1.0 + 1e-8, 0.0, 0.0, 0.0).unwrap();
    let same = ergotropy_closed_form(&spectrum, &inside, 1.3).unwrap()
        == ergotropy_closed_form(&spectrum, &equal, 1.3).unwrap();
    require(
        &mut failures,
        same,
        "rates inside the degenerate threshold do not reuse the confluent branch".to_string(),
    );

    conclude(
        8,
        "free decay closed forms",
        format!(
            "{}; {}",
            detail("max closed-form vs numeric gap", worst, "< 1e-6"),
            detail("branch continuity gap", worst_branch_gap, "< 1e-6"),
        ),
        failures,
    );
}

#[test]
fn criterion_09_slower_second_decay_keeps_more_work() {
    let mut failures = Vec::new();

    let config = parse_config("preset = transmon\ngamma21 = 0.01\n").unwrap();
    let curves = run_self_discharge(&config).unwrap();

    // The default horizon of 5 decay times over 201 samples puts scaled time
    // 1.0 exactly on the grid.
    let at_unit: Vec<(f64, f64)> = curves
        .iter()
        .map(|c| {
            let sample = &c.curve.samples()[40];
            assert!((sample.scaled_time - 1.0).abs() < 1e-12);
            (c.gap_ratio, sample.normalized)
        })
        .collect();

    for pair in at_unit.windows(2) {
        require(
            &mut failures,
            pair[0].1 > pair[1].1,
            format!(
                "normalized work {:.6} at gap ratio {} does not exceed {:.6} at {}",
                pair[0].1, pair[0].0, pair[1].1, pair[1].0
            ),
        );
    }

    let listed = at_unit
        .iter()
        .map(|(g, v)| format!("{v:.4} at ratio {g}"))
        .collect::<Vec<_>>()
        .join(", ");
    conclude(
        9,
        "gap ratio orders retained work",
        format!("normalized work after one decay time: {listed}"),
        failures,
    );
}

#[test]
fn criterion_10_direct_top_to_bottom_leak_is_negligible() {
    let mut failures = Vec::new();

    let (_, peak) = peak_row(noisy_sweep_rows());
    let config = parse_config(&format!(
        "preset = transmon\ngamma21 = 0.01\ngamma31 = 0.0001\ntau = {}\n",
        peak.tau
    ))
    .unwrap();
    let with_leak = run_charge(&config).unwrap().last().ergotropy;
    let relative = (with_leak - peak.ergotropy).abs() / peak.ergotropy;

    require(
        &mut failures,
        relative < 0.01,
        format!("direct leak moved the peak work by {relative:.3e} (need < 1e-2 relative)"),
    );

    conclude(
        10,
        "weak direct leak barely moves the optimum",
        format!(
            "work {:.6} -> {:.6} at tau = {:.2}; {}",
            peak.ergotropy,
            with_leak,
            peak.tau,
            detail("relative change", relative, "< 1e-2"),
        ),
        failures,
    );
}

#[test]
fn criterion_11_identical_configs_produce_identical_bytes() {
    let mut failures = Vec::new();

    let render = |write: &dyn Fn(&mut Vec<u8>)| {
        let mut bytes = Vec::new();
        write(&mut bytes);
        bytes
    };

    let charge_config = parse_config("tau = 20\n").unwrap();
    let charge = |buf: &mut Vec<u8>| {
        let trace = run_charge(&charge_config).unwrap();
        write_charge_csv(buf, &trace).unwrap();
    };
    let charge_a = render(&charge);
    let charge_b = render(&charge);
    require(
        &mut failures,
        charge_a == charge_b && !charge_a.is_empty(),
        "charge CSV differs between identical runs".to_string(),
    );

    let sweep_config = parse_config("tau_min = 1\ntau_max = 10\ntau_points = 4\n").unwrap();
    let sweep_serial = render(&|buf: &mut Vec<u8>| {
        write_sweep_csv(buf, &run_sweep(&sweep_config, Some(1)).unwrap()).unwrap();
    });
    let sweep_parallel = render(&|buf: &mut Vec<u8>| {
        write_sweep_csv(buf, &run_sweep(&sweep_config, Some(2)).unwrap()).unwrap();
    });
    require(
        &mut failures,
        sweep_serial == sweep_parallel && !sweep_serial.is_empty(),
        "sweep CSV depends on the worker count".to_string(),
    );

    let discharge_config = parse_config("preset = transmon\ngamma21 = 0.01\n").unwrap();
    let discharge = |buf: &mut Vec<u8>| {
        write_discharge_csv(buf, &run_self_discharge(&discharge_config).unwrap()).unwrap();
    };
    let discharge_a = render(&discharge);
    let discharge_b = render(&discharge);
    require(
        &mut failures,
        discharge_a == discharge_b && !discharge_a.is_empty(),
        "discharge CSV differs between identical runs".to_string(),
    );

    conclude(
        11,
        "byte-identical CSV output",
        format!(
            "charge {} bytes, sweep {} bytes (1 vs 2 workers), discharge {} bytes",
            charge_a.len(),
            sweep_serial.len(),
            discharge_a.len(),
        ),
        failures,
    );
}
