//! Open-system time evolution: Lindblad dissipators, a fixed-step RK4
//! integrator for the master equation, and an independent 9x9 superoperator
//! propagator used as a cross-checking oracle.
//!
//! Relaxation is modeled as sequential downhill decay (3 -> 2 and 2 -> 1,
//! optionally the weak direct 3 -> 1 channel) and pure dephasing acts on the
//! two excited levels. The charging drive enters through the rotating-frame
//! coupling Hamiltonian; free decay is integrated in the interaction picture
//! of the bare Hamiltonian, where the closed decay equations hold and the
//! bare-energy commutator drops out.

use thiserror::Error;

use crate::linalg::{
    commutator, DensityMatrix, DmTolerances, LinalgError, Matrix3, ValidationReport, C64,
};
use crate::model::{coupling_hamiltonian, ModelError, Protocol, Spectrum};
use crate::observables;

/// Errors from dissipative evolution.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum LindbladError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("{name} must be non-negative and finite, got {value}")]
    InvalidRate { name: &'static str, value: f64 },
    #[error("evolution duration must be positive and finite, got {0}")]
    NonpositiveDuration(f64),
    #[error("integrator needs at least one step")]
    ZeroSteps,
    #[error("sampling stride must be at least one")]
    ZeroSampleStride,
    #[error("duration {duration} exceeds the protocol window {available}")]
    DurationBeyondProtocol { duration: f64, available: f64 },
    #[error("state left the physical manifold at t = {t}: {report}")]
    IntegrationDiverged { t: f64, report: ValidationReport },
    #[error("piecewise-constant segment {index} has invalid duration {dt}")]
    InvalidSegment { index: usize, dt: f64 },
    #[error("matrix exponential did not converge (generator norm {norm:.3e})")]
    ExponentialDiverged { norm: f64 },
}

/// Decay and dephasing rates of the three-level battery. All rates are
/// non-negative; zero disables a channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseRates {
    decay_21: f64,
    decay_32: f64,
    decay_31: f64,
    dephasing_2: f64,
    dephasing_3: f64,
}

impl NoiseRates {
    /// Validated constructor; every rate must be finite and non-negative.
    pub fn new(
        decay_21: f64,
        decay_32: f64,
        decay_31: f64,
        dephasing_2: f64,
        dephasing_3: f64,
    ) -> Result<Self, LindbladError> {
        let check = |name: &'static str, value: f64| {
            if !value.is_finite() || value < 0.0 {
                Err(LindbladError::InvalidRate { name, value })
            } else {
                Ok(value)
            }
        };
        Ok(Self {
            decay_21: check("decay_21", decay_21)?,
            decay_32: check("decay_32", decay_32)?,
            decay_31: check("decay_31", decay_31)?,
            dephasing_2: check("dephasing_2", dephasing_2)?,
            dephasing_3: check("dephasing_3", dephasing_3)?,
        })
    }

    /// Closed-system limit: every channel off.
    pub fn none() -> Self {
        Self {
            decay_21: 0.0,
            decay_32: 0.0,
            decay_31: 0.0,
            dephasing_2: 0.0,
            dephasing_3: 0.0,
        }
    }

    /// Transmon-like noise model controlled by the single knob `decay_21`:
    /// the upper transition decays twice as fast (`decay_32 = 2 decay_21`)
    /// and dephasing mirrors the relaxation (`dephasing_2 = decay_21`,
    /// `dephasing_3 = 2 decay_21`). The direct 3 -> 1 channel stays off.
    pub fn transmon(decay_21: f64) -> Result<Self, LindbladError> {
        Self::new(decay_21, 2.0 * decay_21, 0.0, decay_21, 2.0 * decay_21)
    }

    /// Replace the direct 3 -> 1 decay rate, keeping everything else.
    pub fn with_decay_31(mut self, decay_31: f64) -> Result<Self, LindbladError> {
        if !decay_31.is_finite() || decay_31 < 0.0 {
            return Err(LindbladError::InvalidRate {
                name: "decay_31",
                value: decay_31,
            });
        }
        self.decay_31 = decay_31;
        Ok(self)
    }

    pub fn decay_21(&self) -> f64 {
        self.decay_21
    }

    pub fn decay_32(&self) -> f64 {
        self.decay_32
    }

    pub fn decay_31(&self) -> f64 {
        self.decay_31
    }

    pub fn dephasing_2(&self) -> f64 {
        self.dephasing_2
    }

    pub fn dephasing_3(&self) -> f64 {
        self.dephasing_3
    }

    pub fn is_none(&self) -> bool {
        self.decay_21 == 0.0
            && self.decay_32 == 0.0
            && self.decay_31 == 0.0
            && self.dephasing_2 == 0.0
            && self.dephasing_3 == 0.0
    }
}

/// Relaxation dissipator: for each decay channel upper -> lower with rate
/// `G`, add `G (|l><u| rho |u><l| - {|u><u|, rho} / 2)`. Traceless by
/// construction; populations flow strictly downhill.
pub fn relaxation_dissipator(rho: &Matrix3, rates: &NoiseRates) -> Matrix3 {
    let mut out = Matrix3::zero();
    // (upper, lower, rate), zero-based level indices.
    let channels = [
        (1usize, 0usize, rates.decay_21),
        (2, 1, rates.decay_32),
        (2, 0, rates.decay_31),
    ];
    for (u, l, rate) in channels {
        if rate == 0.0 {
            continue;
        }
        let flow = rho[(u, u)] * rate;
        out[(l, l)] += flow;
        out[(u, u)] -= flow;
        for m in 0..3 {
            if m == u {
                continue;
            }
            out[(u, m)] -= rho[(u, m)] * (0.5 * rate);
            out[(m, u)] -= rho[(m, u)] * (0.5 * rate);
        }
    }
    out
}

/// Pure-dephasing dissipator on the two excited levels: coherences touching
/// level `j` decay at `dephasing_j / 2` while every population is left
/// exactly unchanged (the diagonal of the output is identically zero).
pub fn dephasing_dissipator(rho: &Matrix3, rates: &NoiseRates) -> Matrix3 {
    let mut out = Matrix3::zero();
    for (j, rate) in [(1usize, rates.dephasing_2), (2, rates.dephasing_3)] {
        if rate == 0.0 {
            continue;
        }
        for m in 0..3 {
            if m == j {
                continue;
            }
            out[(j, m)] -= rho[(j, m)] * (0.5 * rate);
            out[(m, j)] -= rho[(m, j)] * (0.5 * rate);
        }
    }
    out
}

/// Master-equation right-hand side for frozen drive amplitudes.
fn rhs_frozen(rho: &Matrix3, omega12: f64, omega23: f64, rates: &NoiseRates) -> Matrix3 {
    let h = coupling_hamiltonian(omega12, omega23);
    let coherent = commutator(&h, rho).scale_complex(C64::new(0.0, -1.0));
    coherent + relaxation_dissipator(rho, rates) + dephasing_dissipator(rho, rates)
}

/// Full master-equation right-hand side at time `t`.
///
/// With a drive the generator is `-i [H(t), rho]` plus both dissipators,
/// where `H(t)` is the rotating-frame coupling Hamiltonian at the protocol's
/// instantaneous amplitudes. Without a drive the state decays freely; in the
/// interaction picture of the bare Hamiltonian the commutator vanishes from
/// the populations of interest and only the dissipators act.
pub fn lindblad_rhs(
    t: f64,
    rho: &Matrix3,
    drive: Option<&Protocol>,
    rates: &NoiseRates,
) -> Result<Matrix3, LindbladError> {
    match drive {
        Some(protocol) => {
            let (omega12, omega23) = protocol.drives(t)?;
            Ok(rhs_frozen(rho, omega12, omega23, rates))
        }
        None => Ok(relaxation_dissipator(rho, rates) + dephasing_dissipator(rho, rates)),
    }
}

/// Step count that keeps the per-step phase of the fastest coherent scale
/// well below one: `max(20000, ceil(2000 * omega0 * duration * max(1, omega0)))`.
pub fn default_step_count(omega0: f64, duration: f64) -> usize {
    let proposed = (2000.0 * omega0 * duration * omega0.max(1.0)).ceil();
    (proposed as usize).max(20_000)
}

/// Integration settings for [`evolve`].
#[derive(Debug, Clone, Copy)]
pub struct EvolveOptions {
    /// Total integration time; with a drive it must not exceed the protocol
    /// window (ramp plus hold).
    pub duration: f64,
    /// Number of fixed RK4 steps.
    pub steps: usize,
    /// Record every n-th step (the initial and final states are always
    /// recorded).
    pub sample_every: usize,
    /// Physicality thresholds enforced at every recorded sample.
    pub tolerances: DmTolerances,
}

impl EvolveOptions {
    pub fn new(duration: f64, steps: usize, sample_every: usize) -> Self {
        Self {
            duration,
            steps,
            sample_every,
            tolerances: DmTolerances::default(),
        }
    }
}

/// One recorded point of a trajectory.
#[derive(Debug, Clone, Copy)]
pub struct EvolutionSample {
    pub t: f64,
    pub state: DensityMatrix,
    /// Level occupations, `rho_11 .. rho_33`.
    pub populations: [f64; 3],
    /// Stored work at this instant.
    pub ergotropy: f64,
    /// `|tr(rho) - 1|`.
    pub trace_error: f64,
    /// Hermiticity deviation of the raw integrator output at this step,
    /// measured before the Hermitian projection that follows every step.
    pub hermiticity_drift: f64,
    /// Smallest eigenvalue of the (Hermitized) state.
    pub min_eigenvalue: f64,
}

/// Time-ordered record of an integrated trajectory.
#[derive(Debug, Clone)]
pub struct EvolutionTrace {
    samples: Vec<EvolutionSample>,
}

impl EvolutionTrace {
    pub fn samples(&self) -> &[EvolutionSample] {
        &self.samples
    }

    /// Final recorded sample; traces always hold at least the initial state.
    pub fn last(&self) -> &EvolutionSample {
        self.samples.last().expect("trace is never empty")
    }

    /// Largest occupation of one level (1-based) over the trajectory.
    pub fn max_population(&self, level: usize) -> Result<f64, LinalgError> {
        if !(1..=3).contains(&level) {
            return Err(LinalgError::InvalidLevel { level });
        }
        Ok(self
            .samples
            .iter()
            .map(|s| s.populations[level - 1])
            .fold(f64::NEG_INFINITY, f64::max))
    }

    /// Largest `|tr(rho) - 1|` over the trajectory.
    pub fn max_trace_error(&self) -> f64 {
        self.samples
            .iter()
            .map(|s| s.trace_error)
            .fold(0.0, f64::max)
    }

    /// Largest pre-projection Hermiticity deviation over the trajectory.
    pub fn max_hermiticity_drift(&self) -> f64 {
        self.samples
            .iter()
            .map(|s| s.hermiticity_drift)
            .fold(0.0, f64::max)
    }

    /// Smallest state eigenvalue seen anywhere on the trajectory.
    pub fn min_eigenvalue(&self) -> f64 {
        self.samples
            .iter()
            .map(|s| s.min_eigenvalue)
            .fold(f64::INFINITY, f64::min)
    }
}

/// Integrate the master equation with classical fixed-step RK4.
///
/// Every step ends with a projection onto the Hermitian part, and every
/// recorded sample is validated against `options.tolerances`; a violation
/// aborts with [`LindbladError::IntegrationDiverged`] carrying the failing
/// report. The trace always contains the initial state and the final state.
pub fn evolve(
    initial: &DensityMatrix,
    drive: Option<&Protocol>,
    rates: &NoiseRates,
    spectrum: &Spectrum,
    options: &EvolveOptions,
) -> Result<EvolutionTrace, LindbladError> {
    if !options.duration.is_finite() || options.duration <= 0.0 {
        return Err(LindbladError::NonpositiveDuration(options.duration));
    }
    if options.steps == 0 {
        return Err(LindbladError::ZeroSteps);
    }
    if options.sample_every == 0 {
        return Err(LindbladError::ZeroSampleStride);
    }
    if let Some(protocol) = drive {
        let available = protocol.total_duration();
        if options.duration > available {
            return Err(LindbladError::DurationBeyondProtocol {
                duration: options.duration,
                available,
            });
        }
    }
    let report = initial.validate(&options.tolerances);
    if !report.ok {
        return Err(LindbladError::IntegrationDiverged { t: 0.0, report });
    }

    let n = options.steps;
    let h = options.duration / n as f64;
    let mut rho = *initial.matrix();
    let mut samples = Vec::with_capacity(n / options.sample_every + 2);
    record_sample(&mut samples, 0.0, &rho, 0.0, spectrum, &options.tolerances)?;

    for i in 0..n {
        // Stage times as exact fractions of the duration keep the last stage
        // from overshooting the protocol domain.
        let t0 = options.duration * (i as f64 / n as f64);
        let t1 = options.duration * ((i + 1) as f64 / n as f64);
        let tm = 0.5 * (t0 + t1);

        let k1 = lindblad_rhs(t0, &rho, drive, rates)?;
        let k2 = lindblad_rhs(tm, &(rho + k1.scale(0.5 * h)), drive, rates)?;
        let k3 = lindblad_rhs(tm, &(rho + k2.scale(0.5 * h)), drive, rates)?;
        let k4 = lindblad_rhs(t1, &(rho + k3.scale(h)), drive, rates)?;

        let raw = rho + (k1 + k2.scale(2.0) + k3.scale(2.0) + k4).scale(h / 6.0);
        let drift = raw.hermiticity_error();
        rho = raw.hermitize();

        if (i + 1) % options.sample_every == 0 || i + 1 == n {
            record_sample(&mut samples, t1, &rho, drift, spectrum, &options.tolerances)?;
        }
    }

    Ok(EvolutionTrace { samples })
}

fn record_sample(
    samples: &mut Vec<EvolutionSample>,
    t: f64,
    rho: &Matrix3,
    drift: f64,
    spectrum: &Spectrum,
    tolerances: &DmTolerances,
) -> Result<(), LindbladError> {
    let state = DensityMatrix::from_matrix_unchecked(*rho);
    let report = state.validate(tolerances);
    if !report.ok || drift > tolerances.hermiticity {
        let mut failing = report;
        failing.hermiticity_error = failing.hermiticity_error.max(drift);
        failing.ok = false;
        return Err(LindbladError::IntegrationDiverged { t, report: failing });
    }
    samples.push(EvolutionSample {
        t,
        state,
        populations: state.populations(),
        ergotropy: observables::ergotropy(&state, spectrum),
        trace_error: report.trace_error,
        hermiticity_drift: drift,
        min_eigenvalue: report.min_eigenvalue,
    });
    Ok(())
}

// ---------------------------------------------------------------------------
// Vectorized superoperator oracle
// ---------------------------------------------------------------------------

/// Dense 9x9 complex matrix acting on column-stacked density matrices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Superoperator {
    entries: [[C64; 9]; 9],
}

/// Column-stack a 3x3 matrix: `v[3 j + i] = m[i][j]`.
pub fn vectorize(m: &Matrix3) -> [C64; 9] {
    let mut v = [C64::new(0.0, 0.0); 9];
    for j in 0..3 {
        for i in 0..3 {
            v[3 * j + i] = m[(i, j)];
        }
    }
    v
}

/// Inverse of [`vectorize`].
pub fn unvectorize(v: &[C64; 9]) -> Matrix3 {
    let mut m = Matrix3::zero();
    for j in 0..3 {
        for i in 0..3 {
            m[(i, j)] = v[3 * j + i];
        }
    }
    m
}

impl Superoperator {
    pub fn zero() -> Self {
        Self {
            entries: [[C64::new(0.0, 0.0); 9]; 9],
        }
    }

    pub fn identity() -> Self {
        let mut s = Self::zero();
        for i in 0..9 {
            s.entries[i][i] = C64::new(1.0, 0.0);
        }
        s
    }

    /// Kronecker product compatible with column stacking:
    /// `kron(x, y)[3 r1 + r2][3 c1 + c2] = x[r1][c1] y[r2][c2]`, so that
    /// `kron(b^T, a) vec(rho) = vec(a rho b)`.
    pub fn kron(x: &Matrix3, y: &Matrix3) -> Self {
        let mut s = Self::zero();
        for r1 in 0..3 {
            for c1 in 0..3 {
                let factor = x[(r1, c1)];
                if factor == C64::new(0.0, 0.0) {
                    continue;
                }
                for r2 in 0..3 {
                    for c2 in 0..3 {
                        s.entries[3 * r1 + r2][3 * c1 + c2] = factor * y[(r2, c2)];
                    }
                }
            }
        }
        s
    }

    /// Superoperator of left multiplication, `rho -> a rho`.
    pub fn left_mul(a: &Matrix3) -> Self {
        Self::kron(&Matrix3::identity(), a)
    }

    /// Superoperator of right multiplication, `rho -> rho b`.
    pub fn right_mul(b: &Matrix3) -> Self {
        Self::kron(&transpose(b), &Matrix3::identity())
    }

    /// Superoperator of the two-sided product `rho -> l rho r`.
    pub fn sandwich(l: &Matrix3, r: &Matrix3) -> Self {
        Self::kron(&transpose(r), l)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut s = *self;
        for i in 0..9 {
            for j in 0..9 {
                s.entries[i][j] += other.entries[i][j];
            }
        }
        s
    }

    pub fn scale(&self, factor: C64) -> Self {
        let mut s = *self;
        for row in &mut s.entries {
            for e in row {
                *e *= factor;
            }
        }
        s
    }

    pub fn matmul(&self, other: &Self) -> Self {
        let mut s = Self::zero();
        for i in 0..9 {
            for k in 0..9 {
                let a = self.entries[i][k];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..9 {
                    s.entries[i][j] += a * other.entries[k][j];
                }
            }
        }
        s
    }

    pub fn apply_vec(&self, v: &[C64; 9]) -> [C64; 9] {
        let mut out = [C64::new(0.0, 0.0); 9];
        for (o, row) in out.iter_mut().zip(&self.entries) {
            for (entry, x) in row.iter().zip(v) {
                *o += entry * x;
            }
        }
        out
    }

    /// Apply to a 3x3 matrix through vectorization.
    pub fn apply(&self, rho: &Matrix3) -> Matrix3 {
        unvectorize(&self.apply_vec(&vectorize(rho)))
    }

    /// Maximum absolute column sum.
    pub fn one_norm(&self) -> f64 {
        let mut worst = 0.0f64;
        for j in 0..9 {
            let mut sum = 0.0;
            for i in 0..9 {
                sum += self.entries[i][j].norm();
            }
            worst = worst.max(sum);
        }
        worst
    }

    /// Matrix exponential by scaling and squaring with a Taylor series
    /// truncated at order 16. The generator is halved until its 1-norm drops
    /// below 1/2, where the truncation error is far below double precision.
    pub fn exp(&self) -> Result<Self, LindbladError> {
        let norm = self.one_norm();
        if !norm.is_finite() {
            return Err(LindbladError::ExponentialDiverged { norm });
        }
        let mut squarings = 0u32;
        let mut scaled_norm = norm;
        while scaled_norm >= 0.5 {
            squarings += 1;
            scaled_norm *= 0.5;
        }
        let scaled = self.scale(C64::new(1.0 / f64::powi(2.0, squarings as i32), 0.0));

        let mut result = Superoperator::identity();
        let mut term = Superoperator::identity();
        for order in 1..=16 {
            term = term
                .matmul(&scaled)
                .scale(C64::new(1.0 / order as f64, 0.0));
            result = result.add(&term);
        }
        for _ in 0..squarings {
            result = result.matmul(&result);
        }
        if !result.one_norm().is_finite() {
            return Err(LindbladError::ExponentialDiverged { norm });
        }
        Ok(result)
    }
}

fn transpose(m: &Matrix3) -> Matrix3 {
    let mut t = Matrix3::zero();
    for i in 0..3 {
        for j in 0..3 {
            t[(i, j)] = m[(j, i)];
        }
    }
    t
}

/// Full Lindblad generator for frozen drive amplitudes as a 9x9 matrix on
/// column-stacked states: `L vec(rho) = vec(-i [H, rho] + D_rel + D_deph)`.
pub fn liouvillian_matrix(omega12: f64, omega23: f64, rates: &NoiseRates) -> Superoperator {
    let h = coupling_hamiltonian(omega12, omega23);
    let minus_i = C64::new(0.0, -1.0);
    let mut l = Superoperator::left_mul(&h)
        .add(&Superoperator::right_mul(&h).scale(C64::new(-1.0, 0.0)))
        .scale(minus_i);

    let projector = |level: usize| {
        let mut p = Matrix3::zero();
        p[(level, level)] = C64::new(1.0, 0.0);
        p
    };

    let channels = [
        (1usize, 0usize, rates.decay_21),
        (2, 1, rates.decay_32),
        (2, 0, rates.decay_31),
    ];
    for (u, lo, rate) in channels {
        if rate == 0.0 {
            continue;
        }
        let mut jump = Matrix3::zero();
        jump[(lo, u)] = C64::new(1.0, 0.0);
        let p_u = projector(u);
        let gain = Superoperator::sandwich(&jump, &jump.adjoint());
        let loss = Superoperator::left_mul(&p_u)
            .add(&Superoperator::right_mul(&p_u))
            .scale(C64::new(-0.5, 0.0));
        l = l.add(&gain.add(&loss).scale(C64::new(rate, 0.0)));
    }

    for (j, rate) in [(1usize, rates.dephasing_2), (2, rates.dephasing_3)] {
        if rate == 0.0 {
            continue;
        }
        let p = projector(j);
        let gain = Superoperator::sandwich(&p, &p);
        let loss = Superoperator::left_mul(&p)
            .add(&Superoperator::right_mul(&p))
            .scale(C64::new(-0.5, 0.0));
        l = l.add(&gain.add(&loss).scale(C64::new(rate, 0.0)));
    }

    l
}

/// One piecewise-constant drive segment: amplitudes held for `dt`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriveSegment {
    pub omega12: f64,
    pub omega23: f64,
    pub dt: f64,
}

/// Propagate through a staircase of frozen-field segments with exact matrix
/// exponentials of the corresponding Liouvillians. Independent of the RK4
/// path (different discretization, different linear algebra), which makes it
/// a genuine cross-check oracle. An empty schedule returns the input state.
pub fn propagate_piecewise_constant(
    initial: &DensityMatrix,
    schedule: &[DriveSegment],
    rates: &NoiseRates,
) -> Result<DensityMatrix, LindbladError> {
    let mut v = vectorize(initial.matrix());
    for (index, segment) in schedule.iter().enumerate() {
        if !segment.dt.is_finite() || segment.dt <= 0.0 {
            return Err(LindbladError::InvalidSegment {
                index,
                dt: segment.dt,
            });
        }
        let generator = liouvillian_matrix(segment.omega12, segment.omega23, rates)
            .scale(C64::new(segment.dt, 0.0));
        v = generator.exp()?.apply_vec(&v);
    }
    let rho = unvectorize(&v).hermitize();
    Ok(DensityMatrix::new(rho, &DmTolerances::default())?)
}
