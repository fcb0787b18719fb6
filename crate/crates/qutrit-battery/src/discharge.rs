//! Closed-form self-discharge of a charged battery.
//!
//! Once the drive is off, the sequential decay channels 3 -> 2 -> 1 form a
//! linear cascade whose populations solve in closed form (two exponentials,
//! or the confluent limit when the two rates coincide). These expressions
//! quantify how fast stored work leaks out of an unprotected charged state
//! and how the leak depends on the level spacing; they ignore dephasing,
//! which cannot move population out of a charged (diagonal) state, and the
//! weak direct 3 -> 1 channel.

use thiserror::Error;

use crate::lindblad::NoiseRates;
use crate::model::Spectrum;

/// Relative gap between the two decay rates below which the closed forms
/// switch to their confluent (equal-rate) limit. Keeps the general
/// expression away from its 0/0 cancellation.
pub const DEGENERATE_RATE_TOL: f64 = 1e-6;

/// Errors from closed-form discharge evaluation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum DischargeError {
    #[error("closed-form discharge needs positive decay rates, got decay_21 = {decay_21}, decay_32 = {decay_32}")]
    NonpositiveRates { decay_21: f64, decay_32: f64 },
    #[error("time must be non-negative and finite, got {0}")]
    NegativeTime(f64),
    #[error("initial populations (p2, p3) = ({p2}, {p3}) are not a physical occupation pair")]
    InvalidInitialPopulations { p2: f64, p3: f64 },
    #[error("discharge horizon must be positive and finite, got {0}")]
    NonpositiveHorizon(f64),
    #[error("a discharge curve needs at least two samples, got {0}")]
    TooFewSamples(usize),
}

fn check_rates(rates: &NoiseRates) -> Result<(f64, f64), DischargeError> {
    let g21 = rates.decay_21();
    let g32 = rates.decay_32();
    if g21 <= 0.0 || g32 <= 0.0 {
        return Err(DischargeError::NonpositiveRates {
            decay_21: g21,
            decay_32: g32,
        });
    }
    Ok((g21, g32))
}

fn check_time(t: f64) -> Result<(), DischargeError> {
    if !t.is_finite() || t < 0.0 {
        return Err(DischargeError::NegativeTime(t));
    }
    Ok(())
}

/// Excited-level populations `(p2, p3)` at time `t` of the free decay
/// cascade, starting from `(p2_initial, p3_initial)` at `t = 0`.
///
/// General solution of `dp3 = -G32 p3`, `dp2 = G32 p3 - G21 p2`:
///
/// ```text
/// p3(t) = p3_0 exp(-G32 t)
/// p2(t) = p2_0 exp(-G21 t) + p3_0 G32 (exp(-G32 t) - exp(-G21 t)) / (G21 - G32)
/// ```
///
/// switching to the confluent limit `p2 = (p2_0 + G t p3_0) exp(-G t)` when
/// the rates agree to within [`DEGENERATE_RATE_TOL`] (relative to `G21`).
pub fn populations_closed_form(
    rates: &NoiseRates,
    t: f64,
    initial: (f64, f64),
) -> Result<(f64, f64), DischargeError> {
    let (g21, g32) = check_rates(rates)?;
    check_time(t)?;
    let (p2_0, p3_0) = initial;
    let physical = p2_0 >= -1e-12
        && p3_0 >= -1e-12
        && p2_0.is_finite()
        && p3_0.is_finite()
        && p2_0 + p3_0 <= 1.0 + 1e-9;
    if !physical {
        return Err(DischargeError::InvalidInitialPopulations { p2: p2_0, p3: p3_0 });
    }

    let p3 = p3_0 * (-g32 * t).exp();
    let p2 = if (g21 - g32).abs() < DEGENERATE_RATE_TOL * g21 {
        (p2_0 + g21 * t * p3_0) * (-g21 * t).exp()
    } else {
        p2_0 * (-g21 * t).exp() + p3_0 * g32 * ((-g32 * t).exp() - (-g21 * t).exp()) / (g21 - g32)
    };
    Ok((p2, p3))
}

/// Stored work remaining at time `t` of a fully charged battery (all
/// population in level 3 at `t = 0`) left to decay freely:
///
/// ```text
/// C(t) = [exp(-G32 t) (G21 D31 - G32 D32) - exp(-G21 t) D21 G32] / (G21 - G32)
/// ```
///
/// with level gaps `Dmn = omega_m - omega_n`, and the confluent limit
/// `C(t) = exp(-G t) (D31 + G t D21)` for equal rates. `C(0)` is the full
/// capacity `D31`.
pub fn ergotropy_closed_form(
    spectrum: &Spectrum,
    rates: &NoiseRates,
    t: f64,
) -> Result<f64, DischargeError> {
    let (g21, g32) = check_rates(rates)?;
    check_time(t)?;
    let d21 = spectrum.gap21();
    let d32 = spectrum.gap32();
    let d31 = spectrum.gap31();
    let c = if (g21 - g32).abs() < DEGENERATE_RATE_TOL * g21 {
        (-g21 * t).exp() * (d31 + g21 * t * d21)
    } else {
        ((-g32 * t).exp() * (g21 * d31 - g32 * d32) - (-g21 * t).exp() * d21 * g32) / (g21 - g32)
    };
    Ok(c)
}

/// One sample of a discharge curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DischargeSample {
    /// Dimensionless time `decay_21 * t`.
    pub scaled_time: f64,
    /// Occupation of level 2.
    pub p2: f64,
    /// Occupation of level 3.
    pub p3: f64,
    /// Remaining stored work.
    pub ergotropy: f64,
    /// Stored work as a fraction of the initial capacity.
    pub normalized: f64,
}

/// Uniformly sampled decay of a fully charged battery.
#[derive(Debug, Clone)]
pub struct DischargeCurve {
    samples: Vec<DischargeSample>,
}

impl DischargeCurve {
    pub fn samples(&self) -> &[DischargeSample] {
        &self.samples
    }
}

/// Sample the fully-charged closed forms on `n_samples` points spanning
/// `decay_21 * t` in `[0, horizon]`.
pub fn discharge_curve(
    spectrum: &Spectrum,
    rates: &NoiseRates,
    horizon: f64,
    n_samples: usize,
) -> Result<DischargeCurve, DischargeError> {
    let (g21, _) = check_rates(rates)?;
    if !horizon.is_finite() || horizon <= 0.0 {
        return Err(DischargeError::NonpositiveHorizon(horizon));
    }
    if n_samples < 2 {
        return Err(DischargeError::TooFewSamples(n_samples));
    }
    let capacity = spectrum.max_ergotropy();
    let mut samples = Vec::with_capacity(n_samples);
    for k in 0..n_samples {
        let scaled_time = horizon * (k as f64 / (n_samples - 1) as f64);
        let t = scaled_time / g21;
        let (p2, p3) = populations_closed_form(rates, t, (0.0, 1.0))?;
        let ergotropy = ergotropy_closed_form(spectrum, rates, t)?;
        samples.push(DischargeSample {
            scaled_time,
            p2,
            p3,
            ergotropy,
            normalized: ergotropy / capacity,
        });
    }
    Ok(DischargeCurve { samples })
}
