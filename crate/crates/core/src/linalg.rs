//! Dense complex linear algebra used everywhere else in the crate.
//!
//! [`ComplexMatrix`] is a thin newtype over `nalgebra::DMatrix<Complex64>`
//! that adds the structural predicates (self-adjoint, unitary,
//! antisymmetric) evaluated against [`TOL`], the Hermitian spectral sign,
//! and a Parlett-Reid Pfaffian. Anti-linear maps are stored as
//! [`AntiLinearOp`], always acting as `v ↦ M·conj(v)` in the standard basis.

use std::fmt;
use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub};

use nalgebra as na;
use num_complex::Complex64;
use rand::Rng;
use thiserror::Error;

/// Tolerance for structural predicates.
pub const TOL: f64 = 1e-10;
/// Tolerance for determinant-level identities.
pub const DET_TOL: f64 = 1e-8;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("odd dimension {0}")]
    OddDimension(usize),
    #[error("matrix is not antisymmetric (residual {0:.3e})")]
    NotAntisymmetric(f64),
    #[error("matrix is not self-adjoint (residual {0:.3e})")]
    NotSelfAdjoint(f64),
    #[error("spectrum is not gapped at zero (min |eigenvalue| = {0:.3e})")]
    Gapless(f64),
    #[error("matrix is singular")]
    Singular,
}

pub type Result<T> = std::result::Result<T, LinalgError>;

/// Dense complex matrix.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix(na::DMatrix<Complex64>);

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.nrows(), self.ncols())?;
        for i in 0..self.nrows() {
            write!(f, "  ")?;
            for j in 0..self.ncols() {
                let z = self[(i, j)];
                write!(f, "{:>9.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self(na::DMatrix::zeros(rows, cols))
    }

    pub fn identity(n: usize) -> Self {
        Self(na::DMatrix::identity(n, n))
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl FnMut(usize, usize) -> Complex64) -> Self {
        Self(na::DMatrix::from_fn(rows, cols, f))
    }

    /// Builds a matrix from row vectors. Panics on ragged input.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == ncols), "ragged rows");
        Self::from_fn(nrows, ncols, |i, j| rows[i][j])
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == ncols), "ragged rows");
        Self::from_fn(nrows, ncols, |i, j| Complex64::new(rows[i][j], 0.0))
    }

    pub fn diag(entries: &[Complex64]) -> Self {
        let n = entries.len();
        Self::from_fn(n, n, |i, j| if i == j { entries[i] } else { ZERO })
    }

    pub fn real_diag(entries: &[f64]) -> Self {
        let n = entries.len();
        Self::from_fn(n, n, |i, j| {
            if i == j {
                Complex64::new(entries[i], 0.0)
            } else {
                ZERO
            }
        })
    }

    pub fn from_dmatrix(m: na::DMatrix<Complex64>) -> Self {
        Self(m)
    }

    pub fn as_dmatrix(&self) -> &na::DMatrix<Complex64> {
        &self.0
    }

    pub fn into_dmatrix(self) -> na::DMatrix<Complex64> {
        self.0
    }

    pub fn nrows(&self) -> usize {
        self.0.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.0.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.nrows() == self.ncols()
    }

    /// Side length of a square matrix.
    pub fn dim(&self) -> usize {
        debug_assert!(self.is_square());
        self.nrows()
    }

    pub fn require_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.nrows())
        } else {
            Err(LinalgError::NotSquare {
                rows: self.nrows(),
                cols: self.ncols(),
            })
        }
    }

    pub fn require_dim(&self, n: usize) -> Result<()> {
        let d = self.require_square()?;
        if d == n {
            Ok(())
        } else {
            Err(LinalgError::DimensionMismatch {
                expected: n,
                found: d,
            })
        }
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn transpose(&self) -> Self {
        Self(self.0.transpose())
    }

    pub fn conj(&self) -> Self {
        Self(self.0.map(|z| z.conj()))
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self(self.0.map(|z| z * s))
    }

    pub fn scale_real(&self, s: f64) -> Self {
        Self(self.0.map(|z| z * s))
    }

    pub fn trace(&self) -> Complex64 {
        self.0.trace()
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest singular value.
    pub fn op_norm(&self) -> f64 {
        if self.nrows() == 0 || self.ncols() == 0 {
            return 0.0;
        }
        let svd = self.0.clone().svd(false, false);
        svd.singular_values.iter().cloned().fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Frobenius distance between two matrices of the same shape.
    pub fn distance(&self, other: &Self) -> f64 {
        (self - other).norm()
    }

    pub fn self_adjoint_residual(&self) -> f64 {
        (self - &self.adjoint()).norm()
    }

    pub fn unitary_residual(&self) -> f64 {
        let n = self.nrows();
        (&(self * &self.adjoint()) - &Self::identity(n)).norm()
    }

    pub fn antisymmetric_residual(&self) -> f64 {
        (self + &self.transpose()).norm()
    }

    pub fn is_self_adjoint(&self) -> bool {
        self.is_square() && self.self_adjoint_residual() < TOL * self.norm().max(1.0)
    }

    pub fn is_unitary(&self) -> bool {
        self.is_square() && self.unitary_residual() < TOL * (self.nrows().max(1) as f64)
    }

    pub fn is_antisymmetric(&self) -> bool {
        self.is_square() && self.antisymmetric_residual() < TOL * self.norm().max(1.0)
    }

    /// Returns `Some(λ)` when the matrix equals `λ·Id` within [`TOL`].
    pub fn as_scalar(&self) -> Option<Complex64> {
        if !self.is_square() {
            return None;
        }
        let n = self.nrows();
        if n == 0 {
            return Some(ONE);
        }
        let lambda = self.trace() / n as f64;
        let resid = (self - &Self::identity(n).scale(lambda)).norm();
        (resid < TOL * self.norm().max(1.0)).then_some(lambda)
    }

    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    pub fn anticommutator(&self, other: &Self) -> Self {
        &(self * other) + &(other * self)
    }

    /// Kronecker product `self ⊗ other`; `self` indexes the outer blocks.
    pub fn kron(&self, other: &Self) -> Self {
        Self(self.0.kronecker(&other.0))
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let (r1, c1) = (self.nrows(), self.ncols());
        let (r2, c2) = (other.nrows(), other.ncols());
        let mut out = Self::zeros(r1 + r2, c1 + c2);
        out.set_block(0, 0, self);
        out.set_block(r1, c1, other);
        out
    }

    /// Assembles a 2x2 block matrix.
    pub fn block2(a: &Self, b: &Self, c: &Self, d: &Self) -> Self {
        let (r, c0) = (a.nrows(), a.ncols());
        let mut out = Self::zeros(r + c.nrows(), c0 + b.ncols());
        out.set_block(0, 0, a);
        out.set_block(0, c0, b);
        out.set_block(r, 0, c);
        out.set_block(r, c0, d);
        out
    }

    pub fn set_block(&mut self, row: usize, col: usize, block: &Self) {
        self.0
            .view_mut((row, col), (block.nrows(), block.ncols()))
            .copy_from(&block.0);
    }

    pub fn block(&self, row: usize, col: usize, nrows: usize, ncols: usize) -> Self {
        Self(self.0.view((row, col), (nrows, ncols)).into_owned())
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        self.0.column(j).iter().cloned().collect()
    }

    pub fn from_columns(nrows: usize, cols: &[Vec<Complex64>]) -> Self {
        Self::from_fn(nrows, cols.len(), |i, j| cols[j][i])
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.ncols());
        (0..self.nrows())
            .map(|i| (0..self.ncols()).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    pub fn determinant(&self) -> Result<Complex64> {
        self.require_square()?;
        Ok(self.0.clone().determinant())
    }

    pub fn inverse(&self) -> Result<Self> {
        self.require_square()?;
        self.0.clone().try_inverse().map(Self).ok_or(LinalgError::Singular)
    }

    /// Eigendecomposition of a Hermitian matrix: eigenvalues in ascending
    /// order and the matching orthonormal eigenvectors as columns.
    pub fn eigh(&self) -> Result<(Vec<f64>, Self)> {
        let n = self.require_square()?;
        let resid = self.self_adjoint_residual();
        if resid >= TOL * self.norm().max(1.0) {
            return Err(LinalgError::NotSelfAdjoint(resid));
        }
        if n == 0 {
            return Ok((vec![], Self::zeros(0, 0)));
        }
        // symmetrize so tiny anti-Hermitian noise cannot bias the solver
        let h = (&self.0 + &self.0.adjoint()) * Complex64::new(0.5, 0.0);
        let eig = h.symmetric_eigen();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
        let vectors = Self::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
        Ok((values, vectors))
    }

    pub fn eigenvalues_hermitian(&self) -> Result<Vec<f64>> {
        Ok(self.eigh()?.0)
    }

    /// Smallest |eigenvalue| of a Hermitian matrix.
    pub fn spectral_gap(&self) -> Result<f64> {
        Ok(self
            .eigenvalues_hermitian()?
            .into_iter()
            .map(f64::abs)
            .fold(f64::INFINITY, f64::min))
    }

    /// Rank over ℂ from singular values above `tol` (relative to the largest).
    pub fn rank(&self, tol: f64) -> usize {
        if self.nrows() == 0 || self.ncols() == 0 {
            return 0;
        }
        let svd = self.0.clone().svd(false, false);
        let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
        if smax == 0.0 {
            return 0;
        }
        svd.singular_values.iter().filter(|&&s| s > tol * smax).count()
    }

    pub fn map(&self, f: impl FnMut(Complex64) -> Complex64) -> Self {
        Self(self.0.map(f))
    }

    /// Hermitian part `(A + A†)/2`.
    pub fn hermitian_part(&self) -> Self {
        (self + &self.adjoint()).scale_real(0.5)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, idx: (usize, usize)) -> &Complex64 {
        &self.0[idx]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, idx: (usize, usize)) -> &mut Complex64 {
        &mut self.0[idx]
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait<&ComplexMatrix> for &ComplexMatrix {
            type Output = ComplexMatrix;
            fn $method(self, rhs: &ComplexMatrix) -> ComplexMatrix {
                ComplexMatrix(&self.0 $op &rhs.0)
            }
        }
        impl $trait<ComplexMatrix> for ComplexMatrix {
            type Output = ComplexMatrix;
            fn $method(self, rhs: ComplexMatrix) -> ComplexMatrix {
                ComplexMatrix(self.0 $op rhs.0)
            }
        }
        impl $trait<&ComplexMatrix> for ComplexMatrix {
            type Output = ComplexMatrix;
            fn $method(self, rhs: &ComplexMatrix) -> ComplexMatrix {
                ComplexMatrix(self.0 $op &rhs.0)
            }
        }
        impl $trait<ComplexMatrix> for &ComplexMatrix {
            type Output = ComplexMatrix;
            fn $method(self, rhs: ComplexMatrix) -> ComplexMatrix {
                ComplexMatrix(&self.0 $op rhs.0)
            }
        }
    };
}

binop!(Add, add, +);
binop!(Sub, sub, -);
binop!(Mul, mul, *);

impl AddAssign<&ComplexMatrix> for ComplexMatrix {
    fn add_assign(&mut self, rhs: &ComplexMatrix) {
        self.0 += &rhs.0;
    }
}

impl Neg for ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        ComplexMatrix(-self.0)
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        ComplexMatrix(-&self.0)
    }
}

/// Spectral flattening `h|h|⁻¹` of a self-adjoint invertible matrix.
///
/// Eigenvalues below zero map to −1 and those above map to +1, so the
/// result is `1 − 2·p_F` with `p_F` the projector onto the negative
/// spectrum.
pub fn spectral_sign(h: &ComplexMatrix) -> Result<ComplexMatrix> {
    let (values, vecs) = h.eigh()?;
    let gap = values.iter().map(|v| v.abs()).fold(f64::INFINITY, f64::min);
    if gap <= TOL {
        return Err(LinalgError::Gapless(gap));
    }
    let signs: Vec<f64> = values.iter().map(|v| v.signum()).collect();
    Ok(&(&vecs * &ComplexMatrix::real_diag(&signs)) * &vecs.adjoint())
}

/// Pfaffian of an even-dimensional antisymmetric matrix by skew-symmetric
/// Gaussian elimination with pivoting (Parlett-Reid).
pub fn pfaffian(a: &ComplexMatrix) -> Result<Complex64> {
    let n = a.require_square()?;
    if n % 2 == 1 {
        return Err(LinalgError::OddDimension(n));
    }
    let resid = a.antisymmetric_residual();
    if resid >= TOL * a.norm().max(1.0) {
        return Err(LinalgError::NotAntisymmetric(resid));
    }
    let mut m = a.0.clone();
    let mut pf = ONE;
    let mut k = 0;
    while k + 1 < n {
        // pivot: largest entry in column k below the diagonal
        let mut kp = k + 1;
        let mut best = m[(k + 1, k)].norm();
        for i in (k + 2)..n {
            let v = m[(i, k)].norm();
            if v > best {
                best = v;
                kp = i;
            }
        }
        if kp != k + 1 {
            m.swap_rows(k + 1, kp);
            m.swap_columns(k + 1, kp);
            pf = -pf;
        }
        let pivot = m[(k, k + 1)];
        if pivot == ZERO {
            return Ok(ZERO);
        }
        pf *= pivot;
        if k + 2 < n {
            let tau: Vec<Complex64> = ((k + 2)..n).map(|j| m[(k, j)] / pivot).collect();
            let col: Vec<Complex64> = ((k + 2)..n).map(|i| m[(i, k + 1)]).collect();
            for (ii, i) in ((k + 2)..n).enumerate() {
                for (jj, j) in ((k + 2)..n).enumerate() {
                    m[(i, j)] += tau[ii] * col[jj] - col[ii] * tau[jj];
                }
            }
        }
        k += 2;
    }
    Ok(pf)
}

/// Anti-linear operator `v ↦ mat·conj(v)`.
#[derive(Clone, PartialEq)]
pub struct AntiLinearOp {
    mat: ComplexMatrix,
    inv: ComplexMatrix,
}

impl fmt::Debug for AntiLinearOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AntiLinearOp(conj ∘ {:?})", self.mat)
    }
}

impl AntiLinearOp {
    pub fn new(mat: ComplexMatrix) -> Result<Self> {
        let inv = mat.inverse()?;
        Ok(Self { mat, inv })
    }

    /// Plain complex conjugation on ℂⁿ.
    pub fn conjugation(n: usize) -> Self {
        Self {
            mat: ComplexMatrix::identity(n),
            inv: ComplexMatrix::identity(n),
        }
    }

    pub fn mat(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        let cv: Vec<Complex64> = v.iter().map(|z| z.conj()).collect();
        self.mat.apply(&cv)
    }

    /// `self ∘ self`, a linear operator.
    pub fn square(&self) -> ComplexMatrix {
        &self.mat * &self.mat.conj()
    }

    pub fn is_unitary(&self) -> bool {
        self.mat.is_unitary()
    }

    pub fn is_real_structure(&self) -> bool {
        let sq = self.square();
        (&sq - &ComplexMatrix::identity(self.dim())).norm() < TOL * (self.dim().max(1) as f64)
    }

    pub fn is_quaternionic(&self) -> bool {
        let sq = self.square();
        (&sq + &ComplexMatrix::identity(self.dim())).norm() < TOL * (self.dim().max(1) as f64)
    }

    /// The inverse map, again anti-linear.
    pub fn inverse(&self) -> Self {
        Self {
            mat: self.inv.conj(),
            inv: self.mat.conj(),
        }
    }

    /// `self ∘ l` for a linear `l`; the result is anti-linear.
    pub fn after_linear(&self, l: &ComplexMatrix) -> Result<Self> {
        l.require_dim(self.dim())?;
        Self::new(&self.mat * &l.conj())
    }

    /// `l ∘ self` for a linear `l`; the result is anti-linear.
    pub fn then_linear(&self, l: &ComplexMatrix) -> Result<Self> {
        l.require_dim(self.dim())?;
        Self::new(l * &self.mat)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            mat: self.mat.scale(s),
            inv: self.inv.scale(ONE / s),
        }
    }

    /// `Ad(x) = K·x·K⁻¹`, an anti-linear algebra automorphism of the
    /// matrix algebra.
    pub fn conjugate(&self, x: &ComplexMatrix) -> ComplexMatrix {
        &(&self.mat * &x.conj()) * &self.inv
    }

    /// Tensor product of two anti-linear maps, `(A⊗B)(v⊗w) = Av ⊗ Bw`.
    pub fn kron(&self, other: &Self) -> Self {
        Self {
            mat: self.mat.kron(&other.mat),
            inv: self.inv.kron(&other.inv),
        }
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        Self {
            mat: self.mat.direct_sum(&other.mat),
            inv: self.inv.direct_sum(&other.inv),
        }
    }
}

/// Matrix of the linear operator `a ∘ b` for two anti-linear operators.
pub fn compose_antilinear(a: &AntiLinearOp, b: &AntiLinearOp) -> Result<ComplexMatrix> {
    if a.dim() != b.dim() {
        return Err(LinalgError::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    Ok(&a.mat * &b.mat.conj())
}

/// A linear or anti-linear invertible operator.
#[derive(Debug, Clone, PartialEq)]
pub enum Operator {
    Linear(ComplexMatrix),
    AntiLinear(AntiLinearOp),
}

impl Operator {
    pub fn dim(&self) -> usize {
        match self {
            Operator::Linear(m) => m.dim(),
            Operator::AntiLinear(a) => a.dim(),
        }
    }

    pub fn is_antilinear(&self) -> bool {
        matches!(self, Operator::AntiLinear(_))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        match self {
            Operator::Linear(m) => m,
            Operator::AntiLinear(a) => a.mat(),
        }
    }

    /// `Ad_op(x) = op·x·op⁻¹`.
    pub fn conjugate(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        match self {
            Operator::Linear(u) => Ok(&(u * x) * &u.inverse()?),
            Operator::AntiLinear(a) => Ok(a.conjugate(x)),
        }
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        match self {
            Operator::Linear(m) => m.apply(v),
            Operator::AntiLinear(a) => a.apply(v),
        }
    }

    pub fn is_unitary(&self) -> bool {
        self.matrix().is_unitary()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Operator) -> Result<Operator> {
        Ok(match (self, other) {
            (Operator::Linear(a), Operator::Linear(b)) => Operator::Linear(a * b),
            (Operator::Linear(a), Operator::AntiLinear(b)) => Operator::AntiLinear(b.then_linear(a)?),
            (Operator::AntiLinear(a), Operator::Linear(b)) => Operator::AntiLinear(a.after_linear(b)?),
            (Operator::AntiLinear(a), Operator::AntiLinear(b)) => {
                Operator::Linear(compose_antilinear(a, b)?)
            }
        })
    }

    pub fn direct_sum(&self, other: &Operator) -> Option<Operator> {
        match (self, other) {
            (Operator::Linear(a), Operator::Linear(b)) => Some(Operator::Linear(a.direct_sum(b))),
            (Operator::AntiLinear(a), Operator::AntiLinear(b)) => {
                Some(Operator::AntiLinear(a.direct_sum(b)))
            }
            _ => None,
        }
    }
}

pub fn complex_vec(rng: &mut impl Rng, n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect()
}

pub fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    })
}

pub fn random_hermitian(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    random_matrix(rng, n, n).hermitian_part()
}

pub fn random_antisymmetric(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    let a = random_matrix(rng, n, n);
    (&a - &a.transpose()).scale_real(0.5)
}

/// Random unitary from the eigenvectors of a random Hermitian matrix.
pub fn random_unitary(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    random_hermitian(rng, n)
        .eigh()
        .expect("hermitian by construction")
        .1
}

pub fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]])
}

pub fn pauli_y() -> ComplexMatrix {
    ComplexMatrix::from_rows(&[vec![ZERO, -I], vec![I, ZERO]])
}

pub fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]])
}

/// `iσ_y = [[0, 1], [−1, 0]]`.
pub fn i_sigma_y() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[-1.0, 0.0]])
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn j2() -> ComplexMatrix {
        i_sigma_y()
    }

    /// Cofactor expansion along the first row.
    fn pfaffian_cofactor(a: &ComplexMatrix) -> Complex64 {
        let n = a.nrows();
        if n == 0 {
            return ONE;
        }
        let mut total = ZERO;
        for j in 1..n {
            let keep: Vec<usize> = (1..n).filter(|&k| k != j).collect();
            let minor = ComplexMatrix::from_fn(keep.len(), keep.len(), |r, c| a[(keep[r], keep[c])]);
            let sign = if j % 2 == 1 { 1.0 } else { -1.0 };
            total += a[(0, j)] * sign * pfaffian_cofactor(&minor);
        }
        total
    }

    #[test]
    fn pfaffian_base_cases() {
        assert!((pfaffian(&j2()).unwrap() - ONE).norm() < TOL);
        assert!((pfaffian(&j2().direct_sum(&j2())).unwrap() - ONE).norm() < TOL);
        assert_eq!(pfaffian(&ComplexMatrix::zeros(0, 0)).unwrap(), ONE);
    }

    #[test]
    fn pfaffian_errors() {
        assert_eq!(
            pfaffian(&ComplexMatrix::zeros(3, 3)),
            Err(LinalgError::OddDimension(3))
        );
        assert!(matches!(
            pfaffian(&ComplexMatrix::identity(2)),
            Err(LinalgError::NotAntisymmetric(_))
        ));
    }

    #[test]
    fn pfaffian_matches_cofactor_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in [2, 4, 6, 8] {
            let a = random_antisymmetric(&mut rng, n);
            let fast = pfaffian(&a).unwrap();
            let slow = pfaffian_cofactor(&a);
            assert!((fast - slow).norm() < DET_TOL * slow.norm().max(1.0), "n={n}");
            let det = a.determinant().unwrap();
            assert!((fast * fast - det).norm() < DET_TOL * det.norm().max(1.0));
        }
    }

    #[test]
    fn pfaffian_zero_pivot_column() {
        // first column is entirely zero
        let a = ComplexMatrix::from_real_rows(&[
            &[0.0, 0.0, 0.0, 0.0],
            &[0.0, 0.0, 1.0, 2.0],
            &[0.0, -1.0, 0.0, 3.0],
            &[0.0, -2.0, -3.0, 0.0],
        ]);
        assert_eq!(pfaffian(&a).unwrap(), ZERO);
    }

    #[test]
    fn spectral_sign_examples() {
        let h = ComplexMatrix::real_diag(&[2.0, -3.0]);
        let s = spectral_sign(&h).unwrap();
        assert!((&s - &ComplexMatrix::real_diag(&[1.0, -1.0])).norm() < TOL);

        let flat = pauli_x();
        assert!((&spectral_sign(&flat).unwrap() - &flat).norm() < TOL);

        assert!(matches!(
            spectral_sign(&ComplexMatrix::real_diag(&[1.0, 0.0])),
            Err(LinalgError::Gapless(_))
        ));
        assert!(matches!(
            spectral_sign(&i_sigma_y()),
            Err(LinalgError::NotSelfAdjoint(_))
        ));
    }

    #[test]
    fn spectral_sign_matches_eigen_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let h = random_hermitian(&mut rng, 4);
        let s = spectral_sign(&h).unwrap();
        // oracle: h (h²)^{-1/2} via eigenvalues of h² computed separately
        let h2 = &h * &h;
        let (vals, vecs) = h2.eigh().unwrap();
        let inv_sqrt: Vec<f64> = vals.iter().map(|v| 1.0 / v.sqrt()).collect();
        let abs_inv = &(&vecs * &ComplexMatrix::real_diag(&inv_sqrt)) * &vecs.adjoint();
        let oracle = &h * &abs_inv;
        assert!((&s - &oracle).norm() < 1e-8);
        assert!(s.is_self_adjoint() && s.is_unitary());
        assert!(h.commutator(&s).norm() < 1e-9);
    }

    #[test]
    fn antilinear_composition_examples() {
        let c = AntiLinearOp::conjugation(2);
        let id = compose_antilinear(&c, &c).unwrap();
        assert!((&id - &ComplexMatrix::identity(2)).norm() < TOL);

        let t = AntiLinearOp::new(i_sigma_y()).unwrap();
        let tt = compose_antilinear(&t, &t).unwrap();
        assert!((&tt + &ComplexMatrix::identity(2)).norm() < TOL);
        assert!(t.is_quaternionic() && !t.is_real_structure());
        assert!(c.is_real_structure());

        let other = AntiLinearOp::conjugation(3);
        assert!(matches!(
            compose_antilinear(&c, &other),
            Err(LinalgError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn antilinear_inverse_and_conjugate() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let k = AntiLinearOp::new(random_unitary(&mut rng, 3)).unwrap();
        let back = compose_antilinear(&k, &k.inverse()).unwrap();
        assert!((&back - &ComplexMatrix::identity(3)).norm() < 1e-9);
        // Ad_K is multiplicative and anti-linear
        let x = random_matrix(&mut rng, 3, 3);
        let y = random_matrix(&mut rng, 3, 3);
        let lhs = k.conjugate(&(&x * &y));
        let rhs = &k.conjugate(&x) * &k.conjugate(&y);
        assert!((&lhs - &rhs).norm() < 1e-9);
        let ix = k.conjugate(&x.scale(I));
        assert!((&ix - &k.conjugate(&x).scale(-I)).norm() < 1e-9);
    }
}
