//! Energy, extractable work, and charging-power figures of merit.
//!
//! For the charging protocols in this crate the battery state is always
//! reachable from the ground level by a cyclic unitary, so the extractable
//! work ("ergotropy") of a state is its mean bare energy measured from the
//! bottom of the spectrum. The quantum speed limit turns that energy into a
//! protocol-independent power ceiling used to normalize sweep results.

use thiserror::Error;

use crate::linalg::DensityMatrix;
use crate::model::Spectrum;

/// Errors from observable evaluation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ObservablesError {
    #[error("charging duration must be positive and finite, got {0}")]
    NonpositiveDuration(f64),
}

/// Mean bare energy `tr(H0 rho) = sum_n omega_n rho_nn`.
pub fn energy(rho: &DensityMatrix, spectrum: &Spectrum) -> f64 {
    let p = rho.populations();
    let w = spectrum.energies();
    w[0] * p[0] + w[1] * p[1] + w[2] * p[2]
}

/// Extractable work stored in the battery: mean energy above the ground
/// level, `energy(rho) - omega1`. Zero for the discharged state `|1><1|`,
/// and at most [`Spectrum::max_ergotropy`] for any unit-trace state.
pub fn ergotropy(rho: &DensityMatrix, spectrum: &Spectrum) -> f64 {
    energy(rho, spectrum) - spectrum.omega1()
}

/// Average charging power of a run that stored `ergotropy` in time `tau`.
pub fn charging_power(ergotropy: f64, tau: f64) -> Result<f64, ObservablesError> {
    if !tau.is_finite() || tau <= 0.0 {
        return Err(ObservablesError::NonpositiveDuration(tau));
    }
    Ok(ergotropy / tau)
}

/// Quantum-speed-limit power ceiling `pi / (2 (omega3 - omega1))` for unit
/// peak drive amplitude (hbar = Omega0 = 1). No charging protocol of this
/// three-level battery can beat it.
pub fn max_power(spectrum: &Spectrum) -> f64 {
    std::f64::consts::PI / (2.0 * spectrum.gap31())
}

/// Summary of one completed charging run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChargeReport {
    /// Work stored at the end of the ramp.
    pub ergotropy: f64,
    /// Stored work divided by ramp duration.
    pub power: f64,
    /// Power as a fraction of the speed-limit ceiling.
    pub power_ratio: f64,
    /// Level occupations at the end of the ramp.
    pub populations: [f64; 3],
}

/// Evaluate a [`ChargeReport`] from the final state of a ramp of duration
/// `tau`.
pub fn charge_report(
    rho: &DensityMatrix,
    spectrum: &Spectrum,
    tau: f64,
) -> Result<ChargeReport, ObservablesError> {
    let stored = ergotropy(rho, spectrum);
    let power = charging_power(stored, tau)?;
    Ok(ChargeReport {
        ergotropy: stored,
        power,
        power_ratio: power / max_power(spectrum),
        populations: rho.populations(),
    })
}
