//! Three-level quantum battery simulator: charge a qutrit through its dark
//! state, watch the charge survive (or not), and measure what noise costs.
//!
//! A ladder of three levels is driven by two resonant tones. Routing the
//! population through the zero-energy dark state leaves nothing in the lossy
//! intermediate level and freezes the stored work once the drive stops; the
//! opposite ordering charges faster but oscillates and decays. This crate
//! implements both protocols with closed-form adiabatic predictions, a
//! Lindblad integrator for the real dynamics (relaxation + dephasing), an
//! independent superoperator-exponential propagator for cross-checking, and
//! closed-form self-discharge of the disconnected battery.
//!
//! The best way in is the `examples/` directory — one runnable program per
//! capability:
//!
//! - **`stable_charging`** — dark-state protocol: ergotropy ramps to
//!   capacity and stays put during a hold.
//! - **`unstable_charging`** — bright-path protocol: faster but the stored
//!   work oscillates at twice the drive gap.
//! - **`dark_state`** — the driven Hamiltonian's eigensystem and the state
//!   the drive cannot touch.
//! - **`noisy_sweep`** — charging-duration sweep under transmon-like noise;
//!   the slow/lossy trade-off has an interior optimum.
//! - **`self_discharge`** — closed-form decay of a charged battery for
//!   several level-spacing choices.
//! - **`oracle_propagator`** — fixed-step integration vs. the vectorized
//!   matrix-exponential route on the same physics.
//!
//! ```bash
//! cargo run --release -p qutrit-battery --example stable_charging
//! cargo run --release -p qutrit-battery --example noisy_sweep
//! ```
//!
//! The same machinery is scriptable through a thin CLI (`charge`, `sweep`,
//! `self-discharge`, `validate-config`) that reads a `key = value` config
//! and emits deterministic CSV.
//!
//! Units: the drive amplitude sets the clock (`hbar = 1`, amplitudes and
//! rates in units of the peak drive, times in its inverse).
//!
//! # Library example
//!
//! ```
//! use qutrit_battery::model::{Direction, Protocol, Ramp, Spectrum};
//! use qutrit_battery::linalg::DensityMatrix;
//! use qutrit_battery::lindblad::{evolve, EvolveOptions, NoiseRates};
//!
//! let spectrum = Spectrum::transmon();
//! let protocol = Protocol::new(1.0, 20.0, Ramp::Linear, Direction::Stable, 0.0)?;
//! let options = EvolveOptions::new(protocol.total_duration(), 40_000, 400);
//! let trace = evolve(
//!     &DensityMatrix::pure(1)?,
//!     Some(&protocol),
//!     &NoiseRates::none(),
//!     &spectrum,
//!     &options,
//! )?;
//! let stored = trace.last().ergotropy;
//! assert!(stored > 0.9 * spectrum.max_ergotropy());
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

pub mod adiabatic;
pub mod discharge;
pub mod experiments;
pub mod linalg;
pub mod lindblad;
pub mod model;
pub mod observables;

pub use linalg::{DensityMatrix, Matrix3, C64};
pub use lindblad::{evolve, EvolutionTrace, EvolveOptions, NoiseRates};
pub use model::{Direction, Protocol, Ramp, Spectrum};
