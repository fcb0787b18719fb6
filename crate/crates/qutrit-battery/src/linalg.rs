//! Fixed-size complex linear algebra for three-level systems.
//!
//! Everything here is specialized to 3x3 Hermitian problems: the state of a
//! qutrit is a 3x3 density matrix and every operator acting on it fits in a
//! [`Matrix3`]. Keeping the dimension in the type lets the integrator run on
//! stack arrays with no allocation, and a hand-rolled cyclic Jacobi
//! eigensolver covers the only decomposition the toolkit needs.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;
use thiserror::Error;

/// Double-precision complex scalar used throughout the crate.
pub type C64 = Complex64;

/// Complex 3-vector, used for pure states and eigenvectors.
pub type Vector3 = [C64; 3];

/// Convergence threshold on the off-diagonal Frobenius norm of the Jacobi
/// iteration. Quadratic convergence makes this reachable in a handful of
/// sweeps for any well-scaled Hermitian input.
pub const JACOBI_OFF_DIAGONAL_TOL: f64 = 1e-13;

/// Hard cap on Jacobi sweeps before reporting a convergence failure.
pub const JACOBI_MAX_SWEEPS: usize = 100;

/// Default tolerance on the Hermiticity check performed before an
/// eigendecomposition.
pub const HERMITICITY_TOL: f64 = 1e-10;

/// Errors from construction or decomposition of 3x3 operators and states.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error(
        "matrix is not Hermitian: max |M - M^dag| entry = {deviation:.3e} exceeds {tolerance:.3e}"
    )]
    NotHermitian { deviation: f64, tolerance: f64 },
    #[error("Jacobi eigensolver failed to converge after {sweeps} sweeps (off-diagonal norm {off_diagonal:.3e})")]
    EigenConvergence { sweeps: usize, off_diagonal: f64 },
    #[error("level index {level} out of range (valid levels are 1, 2, 3)")]
    InvalidLevel { level: usize },
    #[error("state vector is not normalized: |v| = {norm:.12e}")]
    UnnormalizedState { norm: f64 },
    #[error("populations {populations:?} do not form a probability distribution")]
    InvalidPopulations { populations: [f64; 3] },
    #[error("matrix fails density-matrix validation: {report}")]
    InvalidDensityMatrix { report: ValidationReport },
}

/// Dense complex 3x3 matrix stored row-major on the stack.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Matrix3 {
    entries: [[C64; 3]; 3],
}

impl Matrix3 {
    /// All-zero matrix.
    pub fn zero() -> Self {
        Self {
            entries: [[C64::new(0.0, 0.0); 3]; 3],
        }
    }

    /// Identity matrix.
    pub fn identity() -> Self {
        let mut m = Self::zero();
        for i in 0..3 {
            m.entries[i][i] = C64::new(1.0, 0.0);
        }
        m
    }

    /// Matrix from explicit rows.
    pub fn from_rows(rows: [[C64; 3]; 3]) -> Self {
        Self { entries: rows }
    }

    /// Real diagonal matrix.
    pub fn diagonal(d: [f64; 3]) -> Self {
        let mut m = Self::zero();
        for (i, &value) in d.iter().enumerate() {
            m.entries[i][i] = C64::new(value, 0.0);
        }
        m
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut m = Self::zero();
        for i in 0..3 {
            for j in 0..3 {
                m.entries[i][j] = self.entries[j][i].conj();
            }
        }
        m
    }

    /// Sum of diagonal entries.
    pub fn trace(&self) -> C64 {
        self.entries[0][0] + self.entries[1][1] + self.entries[2][2]
    }

    /// Hermitian part `(M + M^dag) / 2`.
    pub fn hermitize(&self) -> Self {
        let adj = self.adjoint();
        let mut m = Self::zero();
        for i in 0..3 {
            for j in 0..3 {
                m.entries[i][j] = 0.5 * (self.entries[i][j] + adj.entries[i][j]);
            }
        }
        m
    }

    /// Largest entry modulus of `M - M^dag`; zero iff the matrix is Hermitian.
    pub fn hermiticity_error(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..3 {
            for j in 0..3 {
                let dev = (self.entries[i][j] - self.entries[j][i].conj()).norm();
                worst = worst.max(dev);
            }
        }
        worst
    }

    /// Frobenius norm of the strictly off-diagonal part.
    pub fn off_diagonal_norm(&self) -> f64 {
        let mut sum = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    sum += self.entries[i][j].norm_sqr();
                }
            }
        }
        sum.sqrt()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        let mut worst = 0.0f64;
        for row in &self.entries {
            for e in row {
                worst = worst.max(e.norm());
            }
        }
        worst
    }

    /// Largest entry modulus of the difference `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..3 {
            for j in 0..3 {
                worst = worst.max((self.entries[i][j] - other.entries[i][j]).norm());
            }
        }
        worst
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, v: &Vector3) -> Vector3 {
        let mut out = [C64::new(0.0, 0.0); 3];
        for (o, row) in out.iter_mut().zip(&self.entries) {
            for (entry, x) in row.iter().zip(v) {
                *o += entry * x;
            }
        }
        out
    }

    /// Entry-wise scaling by a real factor.
    pub fn scale(&self, factor: f64) -> Self {
        let mut m = *self;
        for row in &mut m.entries {
            for e in row {
                *e *= factor;
            }
        }
        m
    }

    /// Entry-wise scaling by a complex factor.
    pub fn scale_complex(&self, factor: C64) -> Self {
        let mut m = *self;
        for row in &mut m.entries {
            for e in row {
                *e *= factor;
            }
        }
        m
    }
}

impl Index<(usize, usize)> for Matrix3 {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.entries[i][j]
    }
}

impl IndexMut<(usize, usize)> for Matrix3 {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.entries[i][j]
    }
}

impl Add for Matrix3 {
    type Output = Matrix3;

    fn add(self, rhs: Matrix3) -> Matrix3 {
        let mut m = self;
        for i in 0..3 {
            for j in 0..3 {
                m.entries[i][j] += rhs.entries[i][j];
            }
        }
        m
    }
}

impl Sub for Matrix3 {
    type Output = Matrix3;

    fn sub(self, rhs: Matrix3) -> Matrix3 {
        let mut m = self;
        for i in 0..3 {
            for j in 0..3 {
                m.entries[i][j] -= rhs.entries[i][j];
            }
        }
        m
    }
}

impl Mul for Matrix3 {
    type Output = Matrix3;

    fn mul(self, rhs: Matrix3) -> Matrix3 {
        let mut m = Matrix3::zero();
        for i in 0..3 {
            for k in 0..3 {
                let a = self.entries[i][k];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..3 {
                    m.entries[i][j] += a * rhs.entries[k][j];
                }
            }
        }
        m
    }
}

/// Commutator `[a, b] = a b - b a`.
pub fn commutator(a: &Matrix3, b: &Matrix3) -> Matrix3 {
    *a * *b - *b * *a
}

/// Hermitian inner product, conjugate-linear in the first argument.
pub fn dot(a: &Vector3, b: &Vector3) -> C64 {
    a[0].conj() * b[0] + a[1].conj() * b[1] + a[2].conj() * b[2]
}

/// Euclidean norm of a complex 3-vector.
pub fn norm(v: &Vector3) -> f64 {
    dot(v, v).re.sqrt()
}

/// Outer product `|a><b|`.
pub fn outer(a: &Vector3, b: &Vector3) -> Matrix3 {
    let mut m = Matrix3::zero();
    for i in 0..3 {
        for j in 0..3 {
            m[(i, j)] = a[i] * b[j].conj();
        }
    }
    m
}

/// Eigendecomposition of a Hermitian 3x3 matrix: real eigenvalues in
/// ascending order with matching orthonormal eigenvectors.
#[derive(Debug, Clone, Copy)]
pub struct Eigen3 {
    pub values: [f64; 3],
    pub vectors: [Vector3; 3],
}

/// Eigendecomposition by cyclic complex Jacobi rotations.
///
/// The input must be Hermitian within `hermiticity_tol` (entry-wise modulus
/// of `M - M^dag`). Rotations sweep the pivots (0,1), (0,2), (1,2) until the
/// off-diagonal Frobenius norm drops below [`JACOBI_OFF_DIAGONAL_TOL`].
/// Eigenvalues are sorted ascending; each eigenvector's phase is fixed by
/// making its first significant component real and positive, so repeated
/// calls on the same input are bit-identical.
pub fn eig3_hermitian(m: &Matrix3, hermiticity_tol: f64) -> Result<Eigen3, LinalgError> {
    let deviation = m.hermiticity_error();
    if deviation.is_nan() || deviation > hermiticity_tol {
        return Err(LinalgError::NotHermitian {
            deviation,
            tolerance: hermiticity_tol,
        });
    }
    jacobi_hermitian(&m.hermitize())
}

/// Jacobi iteration on an exactly Hermitian matrix (no input check).
fn jacobi_hermitian(m: &Matrix3) -> Result<Eigen3, LinalgError> {
    let mut a = *m;
    let mut v = Matrix3::identity();

    let mut off = a.off_diagonal_norm();
    let mut sweeps = 0;
    while off > JACOBI_OFF_DIAGONAL_TOL {
        if sweeps >= JACOBI_MAX_SWEEPS {
            return Err(LinalgError::EigenConvergence {
                sweeps,
                off_diagonal: off,
            });
        }
        for (p, q) in [(0usize, 1usize), (0, 2), (1, 2)] {
            let g = a[(p, q)];
            let mag = g.norm();
            if mag == 0.0 {
                continue;
            }
            // Unitary plane rotation zeroing the (p, q) entry. With
            // tan(2*theta) set by the diagonal gap, the smaller-angle root
            // keeps the iteration stable.
            let tau = (a[(q, q)].re - a[(p, p)].re) / (2.0 * mag);
            let t = if tau >= 0.0 {
                1.0 / (tau + (1.0 + tau * tau).sqrt())
            } else {
                -1.0 / (-tau + (1.0 + tau * tau).sqrt())
            };
            let c = 1.0 / (1.0 + t * t).sqrt();
            let s = c * t;
            let phase = g / mag;

            let mut j = Matrix3::identity();
            j[(p, p)] = C64::new(c, 0.0);
            j[(q, q)] = C64::new(c, 0.0);
            j[(p, q)] = phase * s;
            j[(q, p)] = -phase.conj() * s;

            a = j.adjoint() * a * j;
            v = v * j;
        }
        sweeps += 1;
        off = a.off_diagonal_norm();
    }

    let mut pairs: [(f64, Vector3); 3] = [
        (a[(0, 0)].re, [v[(0, 0)], v[(1, 0)], v[(2, 0)]]),
        (a[(1, 1)].re, [v[(0, 1)], v[(1, 1)], v[(2, 1)]]),
        (a[(2, 2)].re, [v[(0, 2)], v[(1, 2)], v[(2, 2)]]),
    ];
    pairs.sort_by(|x, y| x.0.partial_cmp(&y.0).expect("eigenvalues are finite"));

    let mut values = [0.0; 3];
    let mut vectors = [[C64::new(0.0, 0.0); 3]; 3];
    for (k, (value, vector)) in pairs.iter().enumerate() {
        values[k] = *value;
        vectors[k] = fix_phase(vector);
    }
    Ok(Eigen3 { values, vectors })
}

/// Rotate a vector's global phase so its first component with modulus above
/// 1e-10 becomes real and positive.
fn fix_phase(v: &Vector3) -> Vector3 {
    for component in v {
        let mag = component.norm();
        if mag > 1e-10 {
            let phase = component.conj() / mag;
            return [v[0] * phase, v[1] * phase, v[2] * phase];
        }
    }
    *v
}

/// Acceptance thresholds for density-matrix validation.
#[derive(Debug, Clone, Copy)]
pub struct DmTolerances {
    /// Allowed `|tr(rho) - 1|`.
    pub trace: f64,
    /// Allowed entry-wise deviation from Hermiticity.
    pub hermiticity: f64,
    /// Allowed negative excursion of the smallest eigenvalue.
    pub positivity: f64,
}

impl Default for DmTolerances {
    fn default() -> Self {
        Self {
            trace: 1e-9,
            hermiticity: 1e-12,
            positivity: 1e-8,
        }
    }
}

/// Outcome of density-matrix validation. Always produced; `ok` summarizes
/// whether every metric met its tolerance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidationReport {
    pub trace_error: f64,
    pub hermiticity_error: f64,
    pub min_eigenvalue: f64,
    pub ok: bool,
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "trace error {:.3e}, hermiticity error {:.3e}, min eigenvalue {:.3e} ({})",
            self.trace_error,
            self.hermiticity_error,
            self.min_eigenvalue,
            if self.ok { "ok" } else { "violated" }
        )
    }
}

/// Qutrit state: a unit-trace, Hermitian, positive 3x3 matrix.
///
/// Construction either asserts validity ([`DensityMatrix::new`]) or defers
/// it to the caller ([`DensityMatrix::from_matrix_unchecked`], used inside
/// integrators that re-validate at sampling points).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix {
    matrix: Matrix3,
}

impl DensityMatrix {
    /// Pure basis state `|level><level|` for `level` in 1..=3.
    pub fn pure(level: usize) -> Result<Self, LinalgError> {
        if !(1..=3).contains(&level) {
            return Err(LinalgError::InvalidLevel { level });
        }
        let mut m = Matrix3::zero();
        m[(level - 1, level - 1)] = C64::new(1.0, 0.0);
        Ok(Self { matrix: m })
    }

    /// Diagonal mixed state from level populations. The populations must be
    /// non-negative (within 1e-12) and sum to one (within 1e-9).
    pub fn from_populations(populations: [f64; 3]) -> Result<Self, LinalgError> {
        let sum: f64 = populations.iter().sum();
        let negative = populations.iter().any(|p| *p < -1e-12 || !p.is_finite());
        if negative || (sum - 1.0).abs() > 1e-9 {
            return Err(LinalgError::InvalidPopulations { populations });
        }
        Ok(Self {
            matrix: Matrix3::diagonal(populations),
        })
    }

    /// Projector `|v><v|` onto a normalized pure state (norm within 1e-9).
    pub fn from_state(v: &Vector3) -> Result<Self, LinalgError> {
        let n = norm(v);
        if (n - 1.0).abs() > 1e-9 {
            return Err(LinalgError::UnnormalizedState { norm: n });
        }
        Ok(Self {
            matrix: outer(v, v),
        })
    }

    /// Validated construction from an arbitrary matrix.
    pub fn new(matrix: Matrix3, tolerances: &DmTolerances) -> Result<Self, LinalgError> {
        let candidate = Self { matrix };
        let report = candidate.validate(tolerances);
        if report.ok {
            Ok(candidate)
        } else {
            Err(LinalgError::InvalidDensityMatrix { report })
        }
    }

    /// Wrap a matrix without checking it. Callers take responsibility for
    /// validating before the state escapes to observables.
    pub fn from_matrix_unchecked(matrix: Matrix3) -> Self {
        Self { matrix }
    }

    pub fn matrix(&self) -> &Matrix3 {
        &self.matrix
    }

    /// Real part of the diagonal: occupation probability of each level.
    pub fn populations(&self) -> [f64; 3] {
        [
            self.matrix[(0, 0)].re,
            self.matrix[(1, 1)].re,
            self.matrix[(2, 2)].re,
        ]
    }

    /// Occupation of one level, 1-based.
    pub fn population(&self, level: usize) -> Result<f64, LinalgError> {
        if !(1..=3).contains(&level) {
            return Err(LinalgError::InvalidLevel { level });
        }
        Ok(self.matrix[(level - 1, level - 1)].re)
    }

    /// Purity `tr(rho^2)`, 1 for pure states, 1/3 for the maximally mixed state.
    pub fn purity(&self) -> f64 {
        (self.matrix * self.matrix).trace().re
    }

    /// Measure trace, Hermiticity, and positivity against tolerances.
    ///
    /// The positivity check diagonalizes the Hermitian part, so a slightly
    /// non-Hermitian matrix still yields a full report instead of an error.
    pub fn validate(&self, tolerances: &DmTolerances) -> ValidationReport {
        let trace_error = (self.matrix.trace() - C64::new(1.0, 0.0)).norm();
        let hermiticity_error = self.matrix.hermiticity_error();
        let min_eigenvalue = match jacobi_hermitian(&self.matrix.hermitize()) {
            Ok(eig) => eig.values[0],
            // Non-convergence on a bounded 3x3 Hermitian matrix signals NaN
            // or Inf entries; report the worst possible eigenvalue so the
            // state is flagged invalid.
            Err(_) => f64::NEG_INFINITY,
        };
        let ok = trace_error <= tolerances.trace
            && hermiticity_error <= tolerances.hermiticity
            && min_eigenvalue >= -tolerances.positivity;
        ValidationReport {
            trace_error,
            hermiticity_error,
            min_eigenvalue,
            ok,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    /// Hermitian matrix from 3 real diagonal entries and 3 complex
    /// off-diagonal entries (upper triangle).
    fn hermitian(d: [f64; 3], u01: C64, u02: C64, u12: C64) -> Matrix3 {
        Matrix3::from_rows([
            [c(d[0], 0.0), u01, u02],
            [u01.conj(), c(d[1], 0.0), u12],
            [u02.conj(), u12.conj(), c(d[2], 0.0)],
        ])
    }

    fn random_hermitian(rng: &mut impl Rng, scale: f64) -> Matrix3 {
        let mut r = || rng.gen_range(-scale..scale);
        let d = [r(), r(), r()];
        hermitian(d, c(r(), r()), c(r(), r()), c(r(), r()))
    }

    #[test]
    fn diagonal_matrix_eigenvalues_are_sorted_diagonal() {
        let m = Matrix3::diagonal([1.95, 0.0, 1.0]);
        let eig = eig3_hermitian(&m, HERMITICITY_TOL).unwrap();
        assert!((eig.values[0] - 0.0).abs() < 1e-14);
        assert!((eig.values[1] - 1.0).abs() < 1e-14);
        assert!((eig.values[2] - 1.95).abs() < 1e-14);
    }

    #[test]
    fn tridiagonal_coupling_matrix_has_symmetric_spectrum() {
        // Off-diagonal couplings (1, 1): eigenvalues -sqrt(2), 0, +sqrt(2).
        let m = hermitian([0.0, 0.0, 0.0], c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0));
        let eig = eig3_hermitian(&m, HERMITICITY_TOL).unwrap();
        let s = 2.0f64.sqrt();
        assert!((eig.values[0] + s).abs() < 1e-12);
        assert!(eig.values[1].abs() < 1e-12);
        assert!((eig.values[2] - s).abs() < 1e-12);
    }

    #[test]
    fn eigendecomposition_reconstructs_random_hermitian_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x51_3a7e);
        for _ in 0..200 {
            let m = random_hermitian(&mut rng, 3.0);
            let eig = eig3_hermitian(&m, HERMITICITY_TOL).unwrap();

            // Reconstruction: sum_k lambda_k |v_k><v_k| == M.
            let mut rebuilt = Matrix3::zero();
            for k in 0..3 {
                rebuilt = rebuilt + outer(&eig.vectors[k], &eig.vectors[k]).scale(eig.values[k]);
            }
            assert!(
                rebuilt.max_abs_diff(&m) < 1e-11,
                "reconstruction error {:.3e}",
                rebuilt.max_abs_diff(&m)
            );

            // Orthonormality of the eigenbasis.
            for i in 0..3 {
                for j in 0..3 {
                    let overlap = dot(&eig.vectors[i], &eig.vectors[j]);
                    let expected = if i == j { 1.0 } else { 0.0 };
                    assert!(
                        (overlap - c(expected, 0.0)).norm() < 1e-12,
                        "overlap ({i},{j}) = {overlap}"
                    );
                }
            }

            // Eigenvalue equation residual.
            for k in 0..3 {
                let mv = m.mul_vec(&eig.vectors[k]);
                for (lhs, component) in mv.iter().zip(&eig.vectors[k]) {
                    let residual = (lhs - component * eig.values[k]).norm();
                    assert!(residual < 1e-10 * (1.0 + m.max_abs()));
                }
            }

            // Ascending order.
            assert!(eig.values[0] <= eig.values[1] && eig.values[1] <= eig.values[2]);

            // Trace identity.
            assert!((eig.values.iter().sum::<f64>() - m.trace().re).abs() < 1e-11);
        }
    }

    #[test]
    fn eigenvector_phase_is_deterministic() {
        let mut rng = ChaCha8Rng::seed_from_u64(0xfeed);
        for _ in 0..50 {
            let m = random_hermitian(&mut rng, 2.0);
            let eig = eig3_hermitian(&m, HERMITICITY_TOL).unwrap();
            for v in &eig.vectors {
                let first = v
                    .iter()
                    .find(|component| component.norm() > 1e-10)
                    .expect("unit vector has a significant component");
                assert!(first.im.abs() < 1e-12, "phase not fixed: {first}");
                assert!(first.re > 0.0);
            }
            // Bit-determinism across repeated calls.
            let again = eig3_hermitian(&m, HERMITICITY_TOL).unwrap();
            assert_eq!(eig.values, again.values);
            assert_eq!(eig.vectors, again.vectors);
        }
    }

    #[test]
    fn non_hermitian_input_is_rejected() {
        let mut m = Matrix3::diagonal([1.0, 2.0, 3.0]);
        m[(0, 1)] = c(0.5, 0.0);
        let err = eig3_hermitian(&m, HERMITICITY_TOL).unwrap_err();
        assert!(matches!(err, LinalgError::NotHermitian { .. }));
    }

    #[test]
    fn pure_states_are_valid_projectors() {
        for level in 1..=3 {
            let dm = DensityMatrix::pure(level).unwrap();
            let report = dm.validate(&DmTolerances::default());
            assert!(report.ok, "level {level}: {report}");
            assert_eq!(dm.population(level).unwrap(), 1.0);
            assert!((dm.purity() - 1.0).abs() < 1e-15);
        }
        assert!(matches!(
            DensityMatrix::pure(0),
            Err(LinalgError::InvalidLevel { level: 0 })
        ));
        assert!(matches!(
            DensityMatrix::pure(4),
            Err(LinalgError::InvalidLevel { level: 4 })
        ));
    }

    #[test]
    fn validation_flags_negative_eigenvalue() {
        // Unit trace and Hermitian, but indefinite.
        let dm = DensityMatrix::from_matrix_unchecked(Matrix3::diagonal([0.6, 0.6, -0.2]));
        let report = dm.validate(&DmTolerances::default());
        assert!(!report.ok);
        assert!((report.min_eigenvalue + 0.2).abs() < 1e-12);
        assert!(report.trace_error < 1e-15);
        assert!(report.hermiticity_error < 1e-15);
    }

    #[test]
    fn validation_reports_trace_and_hermiticity_errors() {
        let mut m = Matrix3::diagonal([0.5, 0.3, 0.3]);
        m[(0, 1)] = c(0.0, 1e-3);
        let dm = DensityMatrix::from_matrix_unchecked(m);
        let report = dm.validate(&DmTolerances::default());
        assert!(!report.ok);
        assert!((report.trace_error - 0.1).abs() < 1e-12);
        assert!((report.hermiticity_error - 1e-3).abs() < 1e-15);
    }

    #[test]
    fn mixed_state_from_populations() {
        let dm = DensityMatrix::from_populations([0.2, 0.3, 0.5]).unwrap();
        assert_eq!(dm.populations(), [0.2, 0.3, 0.5]);
        assert!(DensityMatrix::from_populations([0.6, 0.6, -0.2]).is_err());
        assert!(DensityMatrix::from_populations([0.2, 0.2, 0.2]).is_err());
    }

    #[test]
    fn projector_from_state_requires_normalization() {
        let v = [c(0.6, 0.0), c(0.0, 0.8), c(0.0, 0.0)];
        let dm = DensityMatrix::from_state(&v).unwrap();
        assert!((dm.population(1).unwrap() - 0.36).abs() < 1e-15);
        assert!((dm.population(2).unwrap() - 0.64).abs() < 1e-15);
        assert!(DensityMatrix::from_state(&[c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]).is_err());
    }

    #[test]
    fn hermitize_halves_the_deviation() {
        let mut m = Matrix3::zero();
        m[(0, 1)] = c(1.0, 0.0);
        // M - M^dag has entries of modulus 1; the Hermitian part is symmetric.
        assert!((m.hermiticity_error() - 1.0).abs() < 1e-15);
        assert!(m.hermitize().hermiticity_error() == 0.0);
    }

    proptest! {
        #[test]
        fn prop_eigensolver_invariants(
            d in proptest::array::uniform3(-5.0f64..5.0),
            re in proptest::array::uniform3(-5.0f64..5.0),
            im in proptest::array::uniform3(-5.0f64..5.0),
        ) {
            let m = hermitian(
                d,
                c(re[0], im[0]),
                c(re[1], im[1]),
                c(re[2], im[2]),
            );
            let eig = eig3_hermitian(&m, HERMITICITY_TOL).unwrap();

            let mut rebuilt = Matrix3::zero();
            for k in 0..3 {
                rebuilt = rebuilt + outer(&eig.vectors[k], &eig.vectors[k]).scale(eig.values[k]);
            }
            prop_assert!(rebuilt.max_abs_diff(&m) < 1e-10 * (1.0 + m.max_abs()));
            prop_assert!((eig.values.iter().sum::<f64>() - m.trace().re).abs() < 1e-10);
            prop_assert!(eig.values[0] <= eig.values[1] && eig.values[1] <= eig.values[2]);
        }

        #[test]
        fn prop_purity_bounded_for_valid_states(
            p0 in 0.0f64..1.0,
            split in 0.0f64..1.0,
        ) {
            let p1 = (1.0 - p0) * split;
            let p2 = 1.0 - p0 - p1;
            let dm = DensityMatrix::from_populations([p0, p1, p2]).unwrap();
            let purity = dm.purity();
            prop_assert!(purity <= 1.0 + 1e-12);
            prop_assert!(purity >= 1.0 / 3.0 - 1e-12);
        }
    }
}
