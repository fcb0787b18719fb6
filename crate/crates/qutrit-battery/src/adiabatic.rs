//! Closed-form adiabatic predictions for both charging orderings.
//!
//! In the adiabatic limit the driven battery follows an instantaneous
//! eigenbranch of the coupling Hamiltonian, and both the state and its
//! stored work admit closed forms in the drive amplitudes plus one
//! accumulated dynamical phase. These formulas are the analytic reference
//! the numerical integrator is checked against, and they are exact for
//! frozen fields (the hold phase).

use num_complex::Complex64;

use crate::linalg::Vector3;
use crate::model::{eigensystem, Direction, ModelError, Protocol, Spectrum};
use thiserror::Error;

/// Default number of Simpson panels for the accumulated-phase quadrature.
/// The integrand is smooth, so this is far more resolution than the 1e-10
/// accuracy target needs; the cost is negligible next to time evolution.
pub const DEFAULT_PHASE_PANELS: usize = 4096;

/// Errors from adiabatic closed-form evaluation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum AdiabaticError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("quadrature requires at least one Simpson panel, got {0}")]
    NoPanels(usize),
    #[error("formula applies to the {expected:?} ordering but the protocol uses {actual:?}")]
    DirectionMismatch {
        expected: Direction,
        actual: Direction,
    },
}

/// Dynamical phase accumulated by the driven eigenbranches up to time `t`:
/// the integral of the instantaneous gap `delta(xi)` from 0 to `t`.
///
/// The ramp part is integrated with composite Simpson quadrature on
/// `panels` panels; past the end of the ramp the gap is constant and the
/// remainder is added exactly.
pub fn phase(protocol: &Protocol, t: f64, panels: usize) -> Result<f64, AdiabaticError> {
    if panels == 0 {
        return Err(AdiabaticError::NoPanels(panels));
    }
    // Validates the time against the protocol domain.
    protocol.drives(t)?;

    let ramp_end = t.min(protocol.tau());
    let mut phi = simpson_gap(protocol, ramp_end, panels)?;
    if t > protocol.tau() {
        phi += protocol.gap(t)? * (t - protocol.tau());
    }
    Ok(phi)
}

/// Composite Simpson integral of the gap over `[0, end]` with `end <= tau`.
fn simpson_gap(protocol: &Protocol, end: f64, panels: usize) -> Result<f64, AdiabaticError> {
    if end == 0.0 {
        return Ok(0.0);
    }
    let n = 2 * panels;
    let h = end / n as f64;
    let mut sum = protocol.gap(0.0)? + protocol.gap(end)?;
    for i in 1..n {
        // Stage positions as exact fractions of the interval keep the final
        // node inside the protocol domain.
        let x = end * (i as f64 / n as f64);
        let weight = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += weight * protocol.gap(x)?;
    }
    Ok(sum * h / 3.0)
}

/// Adiabatic state of the unstable (intuitive) ordering given raw drive
/// amplitudes and accumulated phase:
///
/// `cos(phi)/delta * (omega12 |1> + omega23 |3>) - i sin(phi) |2>`.
///
/// Exact for frozen fields; adiabatic approximation otherwise.
pub fn unstable_state_from(
    omega12: f64,
    omega23: f64,
    phi: f64,
) -> Result<Vector3, AdiabaticError> {
    // Reuse the degenerate-drive check.
    let sys = eigensystem(omega12, omega23)?;
    let (c, s) = (phi.cos(), phi.sin());
    Ok([
        Complex64::new(c * omega12 / sys.delta, 0.0),
        Complex64::new(0.0, -s),
        Complex64::new(c * omega23 / sys.delta, 0.0),
    ])
}

/// Stored work along the unstable ordering from raw drive amplitudes and
/// accumulated phase:
///
/// `cos^2(phi) (omega1 w12^2 + omega3 w23^2) / delta^2 + omega2 sin^2(phi) - omega1`.
pub fn unstable_ergotropy_from(
    omega12: f64,
    omega23: f64,
    phi: f64,
    spectrum: &Spectrum,
) -> Result<f64, AdiabaticError> {
    let sys = eigensystem(omega12, omega23)?;
    let c2 = phi.cos().powi(2);
    let s2 = phi.sin().powi(2);
    let bright = (spectrum.omega1() * omega12 * omega12 + spectrum.omega3() * omega23 * omega23)
        / (sys.delta * sys.delta);
    Ok(c2 * bright + s2 * spectrum.omega2() - spectrum.omega1())
}

/// Adiabatic state of an unstable protocol at time `t`.
pub fn unstable_state(
    protocol: &Protocol,
    t: f64,
    panels: usize,
) -> Result<Vector3, AdiabaticError> {
    require_direction(protocol, Direction::Unstable)?;
    let (omega12, omega23) = protocol.drives(t)?;
    let phi = phase(protocol, t, panels)?;
    unstable_state_from(omega12, omega23, phi)
}

/// Stored work of an unstable protocol at time `t`.
pub fn unstable_ergotropy(
    protocol: &Protocol,
    spectrum: &Spectrum,
    t: f64,
    panels: usize,
) -> Result<f64, AdiabaticError> {
    require_direction(protocol, Direction::Unstable)?;
    let (omega12, omega23) = protocol.drives(t)?;
    let phi = phase(protocol, t, panels)?;
    unstable_ergotropy_from(omega12, omega23, phi, spectrum)
}

/// Stored work along the stable (dark-state) ordering from raw drive
/// amplitudes: `(omega3 - omega1) * omega12^2 / delta^2`. Phase-free because
/// the dark state carries zero instantaneous energy.
pub fn stable_ergotropy_from(
    omega12: f64,
    omega23: f64,
    spectrum: &Spectrum,
) -> Result<f64, AdiabaticError> {
    let sys = eigensystem(omega12, omega23)?;
    Ok(spectrum.gap31() * omega12 * omega12 / (sys.delta * sys.delta))
}

/// Adiabatic state of a stable protocol at time `t`: the instantaneous dark
/// state of the drive.
pub fn stable_state(protocol: &Protocol, t: f64) -> Result<Vector3, AdiabaticError> {
    require_direction(protocol, Direction::Stable)?;
    let (omega12, omega23) = protocol.drives(t)?;
    Ok(eigensystem(omega12, omega23)?.dark)
}

/// Stored work of a stable protocol at time `t`.
pub fn stable_ergotropy(
    protocol: &Protocol,
    spectrum: &Spectrum,
    t: f64,
) -> Result<f64, AdiabaticError> {
    require_direction(protocol, Direction::Stable)?;
    let (omega12, omega23) = protocol.drives(t)?;
    stable_ergotropy_from(omega12, omega23, spectrum)
}

fn require_direction(protocol: &Protocol, expected: Direction) -> Result<(), AdiabaticError> {
    if protocol.direction() != expected {
        return Err(AdiabaticError::DirectionMismatch {
            expected,
            actual: protocol.direction(),
        });
    }
    Ok(())
}
