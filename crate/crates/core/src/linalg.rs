//! Small dense complex linear algebra for the 2×2, 4×4 and 6×6 matrices that
//! carry every group and algebra element in this crate.
//!
//! The exponential and the principal logarithm both go through a unitary
//! eigendecomposition rather than Padé scaling-and-squaring. At these sizes the
//! cost is irrelevant, and the eigen route gives direct control over the
//! branch cut at eigenphase ±π.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, Schur, SymmetricEigen};
use num_complex::Complex64;
use thiserror::Error;

/// Default tolerance for constructing group elements.
pub const CONSTRUCTION_TOL: f64 = 1e-12;
/// Default tolerance for verification of unitarity and round trips.
pub const VERIFICATION_TOL: f64 = 1e-10;
/// Default tolerance for end-to-end round trips.
pub const ROUNDTRIP_TOL: f64 = 1e-9;
/// Eigenphases closer than this to ±π are treated as sitting on the branch cut.
pub const BRANCH_TOL: f64 = 1e-8;

const SUPPORTED_DIMS: [usize; 3] = [2, 4, 6];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("unsupported matrix dimension {0} (expected 2, 4 or 6)")]
    InvalidDimension(usize),
    #[error("expected {expected} entries, got {got}")]
    ShapeMismatch { expected: usize, got: usize },
    #[error("matrix contains a non-finite entry")]
    NonFinite,
    #[error("matrix is not skew-Hermitian (defect {defect:.3e})")]
    NonSkewHermitian { defect: f64 },
    #[error("matrix is not unitary (defect {defect:.3e})")]
    NotUnitary { defect: f64 },
    #[error("eigenphase {phase:.15} lies on the branch cut of the principal logarithm")]
    BranchPoint { phase: f64 },
    #[error("eigendecomposition did not converge")]
    NoConvergence,
}

/// Dense square complex matrix of dimension 2, 4 or 6 with finite entries.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    inner: DMatrix<Complex64>,
}

impl ComplexMatrix {
    fn check_dim(dim: usize) -> Result<(), LinalgError> {
        if SUPPORTED_DIMS.contains(&dim) {
            Ok(())
        } else {
            Err(LinalgError::InvalidDimension(dim))
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Self::check_dim(dim).expect("unsupported dimension");
        Self {
            inner: DMatrix::zeros(dim, dim),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::check_dim(dim).expect("unsupported dimension");
        Self {
            inner: DMatrix::identity(dim, dim),
        }
    }

    /// Builds a matrix entry by entry; `f(row, col)`, zero-based.
    pub fn from_fn(dim: usize, f: impl FnMut(usize, usize) -> Complex64) -> Self {
        Self::check_dim(dim).expect("unsupported dimension");
        Self {
            inner: DMatrix::from_fn(dim, dim, f),
        }
    }

    pub fn from_diagonal(diag: &[Complex64]) -> Self {
        Self::from_fn(diag.len(), |r, c| {
            if r == c {
                diag[r]
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    /// Row-major construction with validation of size and finiteness.
    pub fn from_row_slice(dim: usize, entries: &[Complex64]) -> Result<Self, LinalgError> {
        Self::check_dim(dim)?;
        if entries.len() != dim * dim {
            return Err(LinalgError::ShapeMismatch {
                expected: dim * dim,
                got: entries.len(),
            });
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(LinalgError::NonFinite);
        }
        Ok(Self {
            inner: DMatrix::from_row_slice(dim, dim, entries),
        })
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self, LinalgError> {
        let dim = rows.len();
        let entries: Vec<Complex64> = rows
            .iter()
            .flat_map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)))
            .collect();
        Self::from_row_slice(dim, &entries)
    }

    pub(crate) fn from_dmatrix(inner: DMatrix<Complex64>) -> Self {
        debug_assert!(inner.is_square());
        Self { inner }
    }

    pub fn dim(&self) -> usize {
        self.inner.nrows()
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.inner[(row, col)]
    }

    pub fn as_dmatrix(&self) -> &DMatrix<Complex64> {
        &self.inner
    }

    pub fn rows(&self) -> Vec<Vec<Complex64>> {
        (0..self.dim())
            .map(|r| (0..self.dim()).map(|c| self.inner[(r, c)]).collect())
            .collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_dmatrix(self.inner.adjoint())
    }

    pub fn transpose(&self) -> Self {
        Self::from_dmatrix(self.inner.transpose())
    }

    pub fn trace(&self) -> Complex64 {
        self.inner.trace()
    }

    pub fn determinant(&self) -> Complex64 {
        self.inner.clone().determinant()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.inner.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Frobenius distance `‖self − other‖_F`.
    pub fn distance(&self, other: &Self) -> f64 {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch");
        self.inner
            .iter()
            .zip(other.inner.iter())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self::from_dmatrix(self.inner.map(|z| z * factor))
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        self.scale(Complex64::new(factor, 0.0))
    }

    /// Kronecker product; the result must again have a supported dimension.
    pub fn kron(&self, other: &Self) -> Self {
        Self::check_dim(self.dim() * other.dim()).expect("unsupported Kronecker dimension");
        Self::from_dmatrix(self.inner.kronecker(&other.inner))
    }

    pub fn commutator(&self, other: &Self) -> Self {
        self * other - other * self
    }

    pub fn anticommutator(&self, other: &Self) -> Self {
        self * other + other * self
    }

    /// `‖X + X†‖_F`.
    pub fn skew_hermitian_defect(&self) -> f64 {
        (self + &self.adjoint()).frobenius_norm()
    }

    /// `‖U†U − I‖_F`.
    pub fn unitarity_defect(&self) -> f64 {
        (&self.adjoint() * self)
            .distance(&Self::identity(self.dim()))
    }

    pub fn is_finite(&self) -> bool {
        self.inner.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn max_abs_imag(&self) -> f64 {
        self.inner.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{}) [", self.dim(), self.dim())?;
        for row in self.rows() {
            let cells: Vec<String> = row
                .iter()
                .map(|z| format!("{:+.6}{:+.6}i", z.re, z.im))
                .collect();
            writeln!(f, "  {}", cells.join("  "))?;
        }
        write!(f, "]")
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim(), rhs.dim(), "dimension mismatch");
        ComplexMatrix::from_dmatrix(&self.inner * &rhs.inner)
    }
}

impl Mul for ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: ComplexMatrix) -> ComplexMatrix {
        &self * &rhs
    }
}

impl Mul<&ComplexMatrix> for ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        &self * rhs
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim(), rhs.dim(), "dimension mismatch");
        ComplexMatrix::from_dmatrix(&self.inner + &rhs.inner)
    }
}

impl Add for ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: ComplexMatrix) -> ComplexMatrix {
        &self + &rhs
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim(), rhs.dim(), "dimension mismatch");
        ComplexMatrix::from_dmatrix(&self.inner - &rhs.inner)
    }
}

impl Sub for ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: ComplexMatrix) -> ComplexMatrix {
        &self - &rhs
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        ComplexMatrix::from_dmatrix(-&self.inner)
    }
}

impl Neg for ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        -&self
    }
}

/// Result of [`check_special_unitary`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitaryCheckReport {
    /// `‖U†U − I‖_F`
    pub unitarity_defect: f64,
    /// `|det U − 1|`
    pub det_defect: f64,
    pub passed: bool,
}

pub fn check_special_unitary(u: &ComplexMatrix, tol: f64) -> UnitaryCheckReport {
    let unitarity_defect = u.unitarity_defect();
    let det_defect = (u.determinant() - Complex64::new(1.0, 0.0)).norm();
    UnitaryCheckReport {
        unitarity_defect,
        det_defect,
        passed: unitarity_defect <= tol && det_defect <= tol,
    }
}

/// Matrix exponential of a skew-Hermitian matrix.
pub fn expm(x: &ComplexMatrix) -> Result<ComplexMatrix, LinalgError> {
    expm_with_tol(x, CONSTRUCTION_TOL)
}

pub fn expm_with_tol(x: &ComplexMatrix, tol: f64) -> Result<ComplexMatrix, LinalgError> {
    if !x.is_finite() {
        return Err(LinalgError::NonFinite);
    }
    let defect = x.skew_hermitian_defect();
    if defect > tol {
        return Err(LinalgError::NonSkewHermitian { defect });
    }
    // iX is Hermitian; symmetrize away the admitted defect before diagonalizing.
    let i = Complex64::new(0.0, 1.0);
    let h = x.as_dmatrix().map(|z| z * i);
    let h = (&h + h.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = SymmetricEigen::new(h);
    let v = &eig.eigenvectors;
    let phases = eig
        .eigenvalues
        .map(|lambda| Complex64::from_polar(1.0, -lambda));
    let scaled = DMatrix::from_fn(v.nrows(), v.ncols(), |r, c| v[(r, c)] * phases[c]);
    Ok(ComplexMatrix::from_dmatrix(&scaled * v.adjoint()))
}

/// Unitary eigendecomposition `U = V·diag(e^{iφ_k})·V†`.
#[derive(Debug, Clone)]
pub struct UnitaryEigen {
    /// Eigenphases in (−π, π], sorted ascending.
    pub phases: Vec<f64>,
    /// Unitary matrix whose columns are the matching eigenvectors.
    pub vectors: ComplexMatrix,
}

impl UnitaryEigen {
    pub fn reconstruct(&self) -> ComplexMatrix {
        let diag: Vec<Complex64> = self
            .phases
            .iter()
            .map(|&p| Complex64::from_polar(1.0, p))
            .collect();
        &(&self.vectors * &ComplexMatrix::from_diagonal(&diag)) * &self.vectors.adjoint()
    }
}

/// Principal eigenphase in (−π, π]; `−π` is mapped to `+π`.
fn principal_phase(z: Complex64) -> f64 {
    let p = z.arg();
    if p <= -PI {
        PI
    } else {
        p
    }
}

pub fn eig_unitary(u: &ComplexMatrix) -> Result<UnitaryEigen, LinalgError> {
    eig_unitary_with_tol(u, VERIFICATION_TOL)
}

pub fn eig_unitary_with_tol(u: &ComplexMatrix, tol: f64) -> Result<UnitaryEigen, LinalgError> {
    if !u.is_finite() {
        return Err(LinalgError::NonFinite);
    }
    let defect = u.unitarity_defect();
    if defect > tol {
        return Err(LinalgError::NotUnitary { defect });
    }
    // A unitary matrix is normal, so its complex Schur form is diagonal up to
    // rounding and the Schur vectors are eigenvectors.
    let schur = Schur::try_new(u.as_dmatrix().clone(), f64::EPSILON, 10_000)
        .ok_or(LinalgError::NoConvergence)?;
    let (q, t) = schur.unpack();
    let n = u.dim();
    let mut order: Vec<(f64, usize)> = (0..n).map(|k| (principal_phase(t[(k, k)]), k)).collect();
    order.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let phases = order.iter().map(|&(p, _)| p).collect();
    let vectors = DMatrix::from_fn(n, n, |r, c| q[(r, order[c].1)]);
    Ok(UnitaryEigen {
        phases,
        vectors: ComplexMatrix::from_dmatrix(vectors),
    })
}

/// Principal logarithm of a unitary matrix: the skew-Hermitian `X` with
/// `expm(X) = U` and every eigenvalue of `X` in `i·(−π, π)`.
pub fn logm_principal(u: &ComplexMatrix) -> Result<ComplexMatrix, LinalgError> {
    logm_principal_with_tol(u, VERIFICATION_TOL, BRANCH_TOL)
}

pub fn logm_principal_with_tol(
    u: &ComplexMatrix,
    unitary_tol: f64,
    branch_tol: f64,
) -> Result<ComplexMatrix, LinalgError> {
    let eig = eig_unitary_with_tol(u, unitary_tol)?;
    if let Some(&phase) = eig.phases.iter().find(|p| p.abs() >= PI - branch_tol) {
        return Err(LinalgError::BranchPoint { phase });
    }
    let diag: Vec<Complex64> = eig.phases.iter().map(|&p| Complex64::new(0.0, p)).collect();
    let x = &(&eig.vectors * &ComplexMatrix::from_diagonal(&diag)) * &eig.vectors.adjoint();
    // Remove the rounding-level Hermitian part so downstream checks see an exact algebra element.
    Ok((&x - &x.adjoint()).scale_real(0.5))
}
