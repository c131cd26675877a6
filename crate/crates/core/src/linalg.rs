//! Dense complex matrix kernel.
//!
//! Hamiltonians and gates are carried as validated newtypes over
//! `nalgebra::DMatrix<Complex64>`. The exponential of a Hermitian operator
//! is taken through its eigendecomposition, and the principal logarithm of
//! a unitary through its complex Schur form (diagonal for normal matrices).

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector, Schur, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{invalid, Error, Result};

pub type Matrix = DMatrix<Complex64>;

/// Hermiticity tolerance per unit of dimension.
pub const HERMITICITY_TOL: f64 = 1e-10;
/// Unitarity tolerance per unit of dimension.
pub const UNITARITY_TOL: f64 = 1e-9;
/// Round-trip guarantee of [`logm_unitary`] per unit of dimension.
pub const LOGM_ROUNDTRIP_TOL: f64 = 1e-8;

const EIG_EPS: f64 = 1e-15;
const EIG_MAX_ITER: usize = 10_000;

/// Square complex matrix with finite entries.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix(Matrix);

impl ComplexMatrix {
    pub fn new(m: Matrix) -> Result<Self> {
        if m.nrows() == 0 || m.nrows() != m.ncols() {
            return invalid(format!("matrix must be square and non-empty, got {}x{}", m.nrows(), m.ncols()));
        }
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return invalid("matrix has non-finite entries");
        }
        Ok(Self(m))
    }

    /// Builds a `dim x dim` matrix from row-major entries.
    pub fn from_row_major(dim: usize, entries: &[Complex64]) -> Result<Self> {
        if entries.len() != dim * dim {
            return invalid(format!("expected {} entries for dim {dim}, got {}", dim * dim, entries.len()));
        }
        Self::new(DMatrix::from_row_slice(dim, dim, entries))
    }

    pub fn identity(dim: usize) -> Self {
        Self(DMatrix::identity(dim, dim))
    }

    pub fn zeros(dim: usize) -> Self {
        Self(DMatrix::zeros(dim, dim))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn into_inner(self) -> Matrix {
        self.0
    }

    /// Row-major copy of the entries.
    pub fn row_major(&self) -> Vec<Complex64> {
        let n = self.dim();
        (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|ij| self.0[ij]).collect()
    }
}

/// Hermitian operator (a Hamiltonian).
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    matrix: ComplexMatrix,
}

impl HermitianOperator {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let m = matrix.as_matrix();
        let dev = (m - m.adjoint()).norm();
        let tol = HERMITICITY_TOL * matrix.dim() as f64;
        if dev > tol {
            return invalid(format!("matrix is not Hermitian: |M - M^+|_F = {dev:e} > {tol:e}"));
        }
        Ok(Self { matrix })
    }

    pub fn from_matrix(m: Matrix) -> Result<Self> {
        Self::new(ComplexMatrix::new(m)?)
    }

    /// Projects onto the Hermitian part, `(M + M^+)/2`.
    pub(crate) fn symmetrized(m: Matrix) -> Self {
        let h = (&m + m.adjoint()).scale(0.5);
        Self { matrix: ComplexMatrix(h) }
    }

    pub fn zeros(dim: usize) -> Self {
        Self { matrix: ComplexMatrix::zeros(dim) }
    }

    pub fn identity(dim: usize) -> Self {
        Self { matrix: ComplexMatrix::identity(dim) }
    }

    pub fn pauli_x() -> Self {
        let (o, l) = (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0));
        Self { matrix: ComplexMatrix(DMatrix::from_row_slice(2, 2, &[o, l, l, o])) }
    }

    pub fn pauli_y() -> Self {
        let (o, i) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 1.0));
        Self { matrix: ComplexMatrix(DMatrix::from_row_slice(2, 2, &[o, -i, i, o])) }
    }

    pub fn pauli_z() -> Self {
        let (o, l) = (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0));
        Self { matrix: ComplexMatrix(DMatrix::from_row_slice(2, 2, &[l, o, o, -l])) }
    }

    /// Real diagonal operator.
    pub fn diagonal(values: &[f64]) -> Result<Self> {
        if values.is_empty() {
            return invalid("diagonal operator needs at least one entry");
        }
        let d = DVector::from_iterator(values.len(), values.iter().map(|&v| Complex64::new(v, 0.0)));
        Self::from_matrix(DMatrix::from_diagonal(&d))
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn as_matrix(&self) -> &Matrix {
        self.matrix.as_matrix()
    }

    pub fn scale(&self, c: f64) -> Self {
        Self { matrix: ComplexMatrix(self.as_matrix().scale(c)) }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_same_dim(self.dim(), other.dim())?;
        Ok(Self { matrix: ComplexMatrix(self.as_matrix() + other.as_matrix()) })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        check_same_dim(self.dim(), other.dim())?;
        Ok(Self { matrix: ComplexMatrix(self.as_matrix() - other.as_matrix()) })
    }

    /// Trace, which is real for a Hermitian operator.
    pub fn trace(&self) -> f64 {
        self.as_matrix().trace().re
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.as_matrix().norm()
    }

    /// Trace inner product `tr(AB)`.
    pub fn trace_inner(&self, other: &Self) -> f64 {
        // tr(AB) = sum_ij A_ij conj(B_ij) for Hermitian B.
        self.as_matrix().iter().zip(other.as_matrix().iter()).map(|(a, b)| (a * b.conj()).re).sum()
    }

    /// Removes the identity component, `H - tr(H)/N * I`.
    pub fn traceless_part(&self) -> Self {
        let n = self.dim();
        let shift = self.trace() / n as f64;
        let mut m = self.as_matrix().clone();
        for i in 0..n {
            m[(i, i)] -= Complex64::new(shift, 0.0);
        }
        Self { matrix: ComplexMatrix(m) }
    }

    /// Largest absolute eigenvalue.
    pub fn operator_norm(&self) -> Result<f64> {
        let eig = hermitian_eigen(self.as_matrix())?;
        Ok(eig.eigenvalues.iter().fold(0.0_f64, |acc, v| acc.max(v.abs())))
    }
}

/// Unitary operator (a gate, or a product of gates).
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryOperator {
    matrix: ComplexMatrix,
}

impl UnitaryOperator {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let tol = UNITARITY_TOL * matrix.dim() as f64;
        let dev = unitarity_deviation(matrix.as_matrix());
        if dev > tol {
            return invalid(format!("matrix is not unitary: |M^+M - I|_F = {dev:e} > {tol:e}"));
        }
        Ok(Self { matrix })
    }

    pub fn from_matrix(m: Matrix) -> Result<Self> {
        Self::new(ComplexMatrix::new(m)?)
    }

    pub(crate) fn from_matrix_unchecked(m: Matrix) -> Self {
        Self { matrix: ComplexMatrix(m) }
    }

    pub fn identity(dim: usize) -> Self {
        Self { matrix: ComplexMatrix::identity(dim) }
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn as_matrix(&self) -> &Matrix {
        self.matrix.as_matrix()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_matrix_unchecked(self.as_matrix().adjoint())
    }

    /// Operator product `self * rhs` (`rhs` acts first).
    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        check_same_dim(self.dim(), rhs.dim())?;
        Ok(Self::from_matrix_unchecked(self.as_matrix() * rhs.as_matrix()))
    }

    /// Multiplies by the global phase `e^{i phi}`.
    pub fn with_phase(&self, phi: f64) -> Self {
        Self::from_matrix_unchecked(self.as_matrix() * Complex64::from_polar(1.0, phi))
    }

    /// `self^exp` by repeated squaring.
    pub fn pow(&self, mut exp: u64) -> Self {
        let n = self.dim();
        let mut result = DMatrix::<Complex64>::identity(n, n);
        let mut base = self.as_matrix().clone();
        while exp > 0 {
            if exp & 1 == 1 {
                result = &result * &base;
            }
            exp >>= 1;
            if exp > 0 {
                base = &base * &base;
            }
        }
        Self::from_matrix_unchecked(result)
    }
}

fn check_same_dim(a: usize, b: usize) -> Result<()> {
    if a != b {
        return invalid(format!("dimension mismatch: {a} vs {b}"));
    }
    Ok(())
}

fn unitarity_deviation(m: &Matrix) -> f64 {
    let n = m.nrows();
    (m.adjoint() * m - DMatrix::<Complex64>::identity(n, n)).norm()
}

fn hermitian_eigen(m: &Matrix) -> Result<SymmetricEigen<Complex64, nalgebra::Dyn>> {
    SymmetricEigen::try_new(m.clone(), EIG_EPS, EIG_MAX_ITER)
        .ok_or_else(|| Error::Numeric("Hermitian eigendecomposition did not converge".into()))
}

/// `exp(i H t)` through the eigendecomposition of `H`.
pub fn expm_hermitian(h: &HermitianOperator, t: f64) -> Result<UnitaryOperator> {
    if !t.is_finite() {
        return invalid("evolution time must be finite");
    }
    let eig = hermitian_eigen(h.as_matrix())?;
    let w = &eig.eigenvectors;
    let phases = DVector::from_iterator(
        h.dim(),
        eig.eigenvalues.iter().map(|&lambda| Complex64::from_polar(1.0, lambda * t)),
    );
    let u = w * DMatrix::from_diagonal(&phases) * w.adjoint();
    let tol = UNITARITY_TOL * h.dim() as f64;
    let dev = unitarity_deviation(&u);
    if dev > tol {
        return Err(Error::Numeric(format!("exponential lost unitarity ({dev:e})")));
    }
    Ok(UnitaryOperator::from_matrix_unchecked(u))
}

/// Principal Hermitian logarithm: returns `H` with `exp(i H) = U` and
/// eigenphases in `(-pi, pi]`.
pub fn logm_unitary(u: &UnitaryOperator) -> Result<HermitianOperator> {
    let n = u.dim();
    let tol = UNITARITY_TOL * n as f64;
    let schur = Schur::try_new(u.as_matrix().clone(), EIG_EPS, EIG_MAX_ITER)
        .ok_or_else(|| Error::Numeric("Schur decomposition did not converge".into()))?;
    let (q, t) = schur.unpack();

    let mut phases = Vec::with_capacity(n);
    for j in 0..n {
        let lambda = t[(j, j)];
        if (lambda.norm() - 1.0).abs() > tol {
            return invalid(format!("eigenvalue {lambda} is off the unit circle"));
        }
        phases.push(principal_phase(lambda.arg()));
    }
    let d = DVector::from_iterator(n, phases.iter().map(|&p| Complex64::new(p, 0.0)));
    let h = HermitianOperator::symmetrized(&q * DMatrix::from_diagonal(&d) * q.adjoint());

    // A non-normal remainder in T would break the round trip; catch it here.
    let back = expm_hermitian(&h, 1.0)?;
    let err = (back.as_matrix() - u.as_matrix()).norm();
    if err > LOGM_ROUNDTRIP_TOL * n as f64 {
        return Err(Error::Numeric(format!("logarithm round trip error {err:e}")));
    }
    Ok(h)
}

/// Maps an angle from `[-pi, pi]` onto `(-pi, pi]`; `-pi` (eigenvalue `-1`) becomes `+pi`.
fn principal_phase(theta: f64) -> f64 {
    if theta <= -PI + 1e-12 {
        PI.min(theta + 2.0 * PI)
    } else {
        theta
    }
}

/// `i(AB - BA)`, symmetrized to stay exactly Hermitian.
pub fn commutator_h(a: &HermitianOperator, b: &HermitianOperator) -> Result<HermitianOperator> {
    check_same_dim(a.dim(), b.dim())?;
    let (am, bm) = (a.as_matrix(), b.as_matrix());
    let c = (am * bm - bm * am) * Complex64::new(0.0, 1.0);
    Ok(HermitianOperator::symmetrized(c))
}

/// Global-phase-invariant distance `min_phi |U - e^{i phi} V|_F`,
/// equal to `sqrt(max(0, 2N - 2|tr(V^+ U)|))`.
pub fn operator_distance(u: &UnitaryOperator, v: &UnitaryOperator) -> Result<f64> {
    check_same_dim(u.dim(), v.dim())?;
    let overlap = (v.as_matrix().adjoint() * u.as_matrix()).trace();
    // The minimizing phase is arg tr(V^+ U); evaluating the norm directly keeps
    // full relative precision for nearly equal operators.
    let phase = if overlap.norm() > 0.0 { Complex64::from_polar(1.0, overlap.arg()) } else { Complex64::new(1.0, 0.0) };
    Ok((u.as_matrix() - v.as_matrix() * phase).norm())
}

pub fn check_unitary(m: &ComplexMatrix, tol: f64) -> bool {
    unitarity_deviation(m.as_matrix()) <= tol
}
