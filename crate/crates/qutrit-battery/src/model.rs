//! Three-level battery model: energy spectrum, drive protocol, and the
//! instantaneous eigensystem of the driven Hamiltonian.
//!
//! The battery is a ladder of three levels with energies `omega1 < omega2 <
//! omega3` (hbar = 1 throughout). Charging drives the 1-2 and 2-3 transitions
//! with two envelope pulses of peak amplitude `omega0`; all carrier phases are
//! already rotated away, so the drive Hamiltonian is the real symmetric
//! tridiagonal matrix of the two instantaneous Rabi amplitudes.

use num_complex::Complex64;
use thiserror::Error;

use crate::linalg::{Matrix3, Vector3};

/// Numerical slack allowed on the ramp boundary conditions f(0) = 0, f(1) = 1.
pub const RAMP_ENDPOINT_TOL: f64 = 1e-12;

/// Errors from model construction or evaluation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("level energies must be finite and strictly ordered, got ({0}, {1}, {2})")]
    UnorderedSpectrum(f64, f64, f64),
    #[error("peak drive amplitude must be positive and finite, got {0}")]
    InvalidDriveAmplitude(f64),
    #[error("ramp duration must be positive and finite, got {0}")]
    InvalidRampDuration(f64),
    #[error("hold duration must be non-negative and finite, got {0}")]
    InvalidHoldDuration(f64),
    #[error("ramp violates boundary conditions: f(0) = {at_start:.3e}, f(1) = {at_end}")]
    RampBoundary { at_start: f64, at_end: f64 },
    #[error("time {t} outside protocol domain [0, {end}]")]
    TimeOutOfRange { t: f64, end: f64 },
    #[error("drive amplitudes ({0}, {1}) are both zero; the driven eigensystem is degenerate")]
    DegenerateDrive(f64, f64),
}

/// Strictly ordered level energies of the battery, in units of the peak Rabi
/// amplitude (hbar = 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spectrum {
    omega1: f64,
    omega2: f64,
    omega3: f64,
}

impl Spectrum {
    /// Validated constructor: energies must be finite with
    /// `omega1 < omega2 < omega3`.
    pub fn new(omega1: f64, omega2: f64, omega3: f64) -> Result<Self, ModelError> {
        let finite = omega1.is_finite() && omega2.is_finite() && omega3.is_finite();
        if !finite || !(omega1 < omega2 && omega2 < omega3) {
            return Err(ModelError::UnorderedSpectrum(omega1, omega2, omega3));
        }
        Ok(Self {
            omega1,
            omega2,
            omega3,
        })
    }

    /// Slightly anharmonic ladder typical of a transmon circuit:
    /// (0, 1, 1.95).
    pub fn transmon() -> Self {
        Self {
            omega1: 0.0,
            omega2: 1.0,
            omega3: 1.95,
        }
    }

    pub fn omega1(&self) -> f64 {
        self.omega1
    }

    pub fn omega2(&self) -> f64 {
        self.omega2
    }

    pub fn omega3(&self) -> f64 {
        self.omega3
    }

    pub fn energies(&self) -> [f64; 3] {
        [self.omega1, self.omega2, self.omega3]
    }

    /// Gap between levels 2 and 1.
    pub fn gap21(&self) -> f64 {
        self.omega2 - self.omega1
    }

    /// Gap between levels 3 and 2.
    pub fn gap32(&self) -> f64 {
        self.omega3 - self.omega2
    }

    /// Gap between levels 3 and 1: the capacity of the battery.
    pub fn gap31(&self) -> f64 {
        self.omega3 - self.omega1
    }

    /// Largest extractable energy, reached when all population sits in the
    /// top level.
    pub fn max_ergotropy(&self) -> f64 {
        self.gap31()
    }

    /// Bare Hamiltonian `diag(omega1, omega2, omega3)`.
    pub fn bare_hamiltonian(&self) -> Matrix3 {
        Matrix3::diagonal(self.energies())
    }
}

/// Which transition the ramp feeds first.
///
/// `Stable` rides the dark state of the driven Hamiltonian (the
/// counter-intuitive pulse order of stimulated Raman adiabatic passage):
/// the 2-3 coupling starts at full strength and hands over to the 1-2
/// coupling. `Unstable` is the intuitive order, which transports the state
/// along a bright superposition instead.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Stable,
    Unstable,
}

/// Normalized ramp shape f: [0, 1] -> [0, 1] with f(0) = 0 and f(1) = 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ramp {
    /// f(u) = u.
    Linear,
    /// f(u) = 3u^2 - 2u^3: zero slope at both ends.
    Smoothstep,
}

impl Ramp {
    /// Evaluate the normalized shape at u in [0, 1].
    pub fn shape(&self, u: f64) -> f64 {
        match self {
            Ramp::Linear => u,
            Ramp::Smoothstep => u * u * (3.0 - 2.0 * u),
        }
    }
}

/// Complete description of one charging run: peak amplitude, ramp duration,
/// ramp shape, pulse ordering, and an optional hold with the fields frozen at
/// their end-of-ramp values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Protocol {
    omega0: f64,
    tau: f64,
    ramp: Ramp,
    direction: Direction,
    hold: f64,
}

impl Protocol {
    /// Validated constructor. Checks positivity of the amplitudes and
    /// durations and the ramp boundary conditions.
    pub fn new(
        omega0: f64,
        tau: f64,
        ramp: Ramp,
        direction: Direction,
        hold: f64,
    ) -> Result<Self, ModelError> {
        if !omega0.is_finite() || omega0 <= 0.0 {
            return Err(ModelError::InvalidDriveAmplitude(omega0));
        }
        if !tau.is_finite() || tau <= 0.0 {
            return Err(ModelError::InvalidRampDuration(tau));
        }
        if !hold.is_finite() || hold < 0.0 {
            return Err(ModelError::InvalidHoldDuration(hold));
        }
        let at_start = ramp.shape(0.0);
        let at_end = ramp.shape(1.0);
        if at_start.abs() > RAMP_ENDPOINT_TOL || (at_end - 1.0).abs() > RAMP_ENDPOINT_TOL {
            return Err(ModelError::RampBoundary { at_start, at_end });
        }
        Ok(Self {
            omega0,
            tau,
            ramp,
            direction,
            hold,
        })
    }

    pub fn omega0(&self) -> f64 {
        self.omega0
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn ramp(&self) -> Ramp {
        self.ramp
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn hold(&self) -> f64 {
        self.hold
    }

    /// Ramp plus hold.
    pub fn total_duration(&self) -> f64 {
        self.tau + self.hold
    }

    /// Instantaneous drive amplitudes `(omega12, omega23)` at time t.
    ///
    /// During the ramp the stable ordering returns
    /// `(omega0 f, omega0 (1 - f))` and the unstable ordering the swapped
    /// pair; past `tau` the fields stay frozen at their end-of-ramp values.
    /// Times outside `[0, tau + hold]` are an error.
    pub fn drives(&self, t: f64) -> Result<(f64, f64), ModelError> {
        let end = self.total_duration();
        if !t.is_finite() || t < 0.0 || t > end {
            return Err(ModelError::TimeOutOfRange { t, end });
        }
        let f = if t >= self.tau {
            1.0
        } else {
            self.ramp.shape(t / self.tau)
        };
        let rising = self.omega0 * f;
        let falling = self.omega0 * (1.0 - f);
        Ok(match self.direction {
            Direction::Stable => (rising, falling),
            Direction::Unstable => (falling, rising),
        })
    }

    /// Root-sum-square Rabi amplitude at time t: half the spectral gap of the
    /// driven Hamiltonian.
    pub fn gap(&self, t: f64) -> Result<f64, ModelError> {
        let (omega12, omega23) = self.drives(t)?;
        Ok(omega12.hypot(omega23))
    }
}

/// Drive Hamiltonian in the rotating frame: real symmetric coupling of the
/// 1-2 and 2-3 transitions,
///
/// ```text
///         [ 0        omega12  0       ]
///         [ omega12  0        omega23 ]
///         [ 0        omega23  0       ]
/// ```
pub fn coupling_hamiltonian(omega12: f64, omega23: f64) -> Matrix3 {
    let mut h = Matrix3::zero();
    h[(0, 1)] = Complex64::new(omega12, 0.0);
    h[(1, 0)] = Complex64::new(omega12, 0.0);
    h[(1, 2)] = Complex64::new(omega23, 0.0);
    h[(2, 1)] = Complex64::new(omega23, 0.0);
    h
}

/// Instantaneous eigensystem of [`coupling_hamiltonian`]: energies
/// `(-delta, 0, +delta)` with `delta = hypot(omega12, omega23)`.
///
/// The zero-energy `dark` state has no amplitude on the lossy middle level;
/// `lower` and `upper` are the bright superpositions at `-delta` and
/// `+delta`.
#[derive(Debug, Clone, Copy)]
pub struct EigenSystem {
    pub delta: f64,
    pub lower: Vector3,
    pub dark: Vector3,
    pub upper: Vector3,
}

impl EigenSystem {
    pub fn energies(&self) -> [f64; 3] {
        [-self.delta, 0.0, self.delta]
    }
}

/// Closed-form eigensystem of the driven Hamiltonian.
///
/// `delta^2 = omega12^2 + omega23^2` must be nonzero. All three vectors are
/// unit-normalized:
///
/// * dark:  `(omega23 |1> - omega12 |3>) / delta`
/// * bright: `(omega12 |1> +- delta |2> + omega23 |3>) / (sqrt(2) delta)`
pub fn eigensystem(omega12: f64, omega23: f64) -> Result<EigenSystem, ModelError> {
    let delta = omega12.hypot(omega23);
    if delta == 0.0 || !delta.is_finite() {
        return Err(ModelError::DegenerateDrive(omega12, omega23));
    }
    let re = |x: f64| Complex64::new(x, 0.0);
    let inv = 1.0 / delta;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let dark = [re(omega23 * inv), re(0.0), re(-omega12 * inv)];
    let lower = [re(s * omega12 * inv), re(-s), re(s * omega23 * inv)];
    let upper = [re(s * omega12 * inv), re(s), re(s * omega23 * inv)];
    Ok(EigenSystem {
        delta,
        lower,
        dark,
        upper,
    })
}
