//! Fermionic Fock space Λℂⁿ in the occupation-number basis.
//!
//! Basis vectors are indexed by bit-masks `0..2ⁿ` in increasing order; bit
//! `j` set means `e_{j+1}` is present in the wedge word, and words are kept
//! in increasing index order.

use num_complex::Complex64;
use thiserror::Error;

use crate::linalg::{ComplexMatrix, ONE, TOL, ZERO};

/// Largest supported single-particle dimension (Fock dimension 4096).
pub const MAX_MODES: usize = 12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FockError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("{0} modes exceed the supported maximum of {MAX_MODES}")]
    TooLarge(usize),
    #[error("Θ is not self-adjoint (residual {0:.3e})")]
    NotSelfAdjointTheta(f64),
    #[error("Ξ is not antisymmetric (residual {0:.3e})")]
    NotAntisymmetricXi(f64),
}

pub type Result<T> = std::result::Result<T, FockError>;

/// Operators on Λℂⁿ are plain matrices of size 2ⁿ.
pub type FockOperator = ComplexMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FockSpace {
    n: usize,
}

impl FockSpace {
    pub fn new(n: usize) -> Result<Self> {
        if n > MAX_MODES {
            return Err(FockError::TooLarge(n));
        }
        Ok(Self { n })
    }

    pub fn modes(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    fn check_vec(&self, x: &[Complex64]) -> Result<()> {
        if x.len() == self.n {
            Ok(())
        } else {
            Err(FockError::DimensionMismatch {
                expected: self.n,
                found: x.len(),
            })
        }
    }

    /// `c†_{e_{j+1}}`.
    pub fn creator_basis(&self, j: usize) -> FockOperator {
        assert!(j < self.n);
        let dim = self.dim();
        let bit = 1usize << j;
        let below = bit - 1;
        let mut m = ComplexMatrix::zeros(dim, dim);
        for mask in 0..dim {
            if mask & bit == 0 {
                let sign = if (mask & below).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
                m[(mask | bit, mask)] = Complex64::new(sign, 0.0);
            }
        }
        m
    }

    /// `c_{e_{j+1}}`.
    pub fn annihilator_basis(&self, j: usize) -> FockOperator {
        self.creator_basis(j).transpose()
    }

    /// `c†_x = Σ x_j c†_j`, linear in `x`.
    pub fn creator(&self, x: &[Complex64]) -> Result<FockOperator> {
        self.check_vec(x)?;
        let mut out = ComplexMatrix::zeros(self.dim(), self.dim());
        for (j, &xj) in x.iter().enumerate() {
            if xj != ZERO {
                out += &self.creator_basis(j).scale(xj);
            }
        }
        Ok(out)
    }

    /// `c_x = Σ conj(x_j) c_j`, anti-linear in `x`.
    pub fn annihilator(&self, x: &[Complex64]) -> Result<FockOperator> {
        self.check_vec(x)?;
        let mut out = ComplexMatrix::zeros(self.dim(), self.dim());
        for (j, &xj) in x.iter().enumerate() {
            if xj != ZERO {
                out += &self.annihilator_basis(j).scale(xj.conj());
            }
        }
        Ok(out)
    }

    pub fn vacuum(&self) -> Vec<Complex64> {
        let mut v = vec![ZERO; self.dim()];
        v[0] = ONE;
        v
    }

    /// Coordinates of `x₁∧…∧x_k` obtained as `c†_{x₁}⋯c†_{x_k}|0⟩`.
    pub fn wedge(&self, xs: &[Vec<Complex64>]) -> Result<Vec<Complex64>> {
        let mut v = self.vacuum();
        for x in xs.iter().rev() {
            v = self.creator(x)?.apply(&v);
        }
        Ok(v)
    }

    pub fn number_operator(&self) -> FockOperator {
        let entries: Vec<f64> = (0..self.dim()).map(|m| m.count_ones() as f64).collect();
        ComplexMatrix::real_diag(&entries)
    }

    /// `(−1)^N`.
    pub fn parity_operator(&self) -> FockOperator {
        let entries: Vec<f64> = (0..self.dim())
            .map(|m| if m.count_ones() % 2 == 0 { 1.0 } else { -1.0 })
            .collect();
        ComplexMatrix::real_diag(&entries)
    }

    /// `H = Σ Θ_lm c†_l c_m + ½ Σ (Ξ_lm c†_l c†_m + h.c.) − ½ tr Θ`.
    ///
    /// The constant makes `H` the symmetrized form `½(c†, c) h (c, c†)ᵀ`
    /// with `h = [[Θ, Ξ], [Ξ†, −Θᵀ]]`.
    pub fn build_quadratic_hamiltonian(
        &self,
        theta: &ComplexMatrix,
        xi: &ComplexMatrix,
    ) -> Result<FockOperator> {
        for m in [theta, xi] {
            if !m.is_square() || m.nrows() != self.n {
                return Err(FockError::DimensionMismatch {
                    expected: self.n,
                    found: m.nrows(),
                });
            }
        }
        let r = theta.self_adjoint_residual();
        if r >= TOL * theta.norm().max(1.0) {
            return Err(FockError::NotSelfAdjointTheta(r));
        }
        let r = xi.antisymmetric_residual();
        if r >= TOL * xi.norm().max(1.0) {
            return Err(FockError::NotAntisymmetricXi(r));
        }
        let cd: Vec<FockOperator> = (0..self.n).map(|j| self.creator_basis(j)).collect();
        let c: Vec<FockOperator> = cd.iter().map(ComplexMatrix::transpose).collect();
        let dim = self.dim();
        let mut h = ComplexMatrix::identity(dim).scale(-theta.trace() * 0.5);
        for l in 0..self.n {
            for m in 0..self.n {
                let t = theta[(l, m)];
                if t != ZERO {
                    h += &(&cd[l] * &c[m]).scale(t);
                }
                let x = xi[(l, m)];
                if x != ZERO {
                    h += &(&cd[l] * &cd[m]).scale(x * 0.5);
                    h += &(&c[m] * &c[l]).scale(x.conj() * 0.5);
                }
            }
        }
        Ok(h)
    }
}

/// `⟨x₁∧…∧x_k, y₁∧…∧y_l⟩ = det(⟨x_i, y_j⟩)`, zero when `k ≠ l`.
pub fn wedge_inner_product(xs: &[Vec<Complex64>], ys: &[Vec<Complex64>]) -> Complex64 {
    if xs.len() != ys.len() {
        return ZERO;
    }
    let k = xs.len();
    if k == 0 {
        return ONE;
    }
    let gram = ComplexMatrix::from_fn(k, k, |i, j| inner(&xs[i], &ys[j]));
    gram.determinant().expect("square gram matrix")
}

/// Standard inner product, anti-linear in the first slot.
pub fn inner(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    x.iter().zip(y).map(|(a, b)| a.conj() * b).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{complex_vec, random_antisymmetric, random_hermitian, I};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn e(n: usize, k: usize) -> Vec<Complex64> {
        let mut v = vec![ZERO; n];
        v[k] = ONE;
        v
    }

    #[test]
    fn wedge_inner_product_examples() {
        assert_eq!(wedge_inner_product(&[e(2, 0)], &[e(2, 0)]), ONE);
        let v = wedge_inner_product(&[e(2, 0), e(2, 1)], &[e(2, 1), e(2, 0)]);
        assert!((v + ONE).norm() < TOL);
        assert_eq!(wedge_inner_product(&[e(2, 0)], &[]), ZERO);
    }

    #[test]
    fn wedge_inner_product_matches_fock_vectors() {
        // oracle: build both wedge words in Fock space and take the plain inner product
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let f = FockSpace::new(4).unwrap();
        for k in 0..=3 {
            let xs: Vec<_> = (0..k).map(|_| complex_vec(&mut rng, 4)).collect();
            let ys: Vec<_> = (0..k).map(|_| complex_vec(&mut rng, 4)).collect();
            let lhs = wedge_inner_product(&xs, &ys);
            let rhs = inner(&f.wedge(&xs).unwrap(), &f.wedge(&ys).unwrap());
            assert!((lhs - rhs).norm() < 1e-10, "k={k}");
        }
    }

    #[test]
    fn two_by_two_permutation_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let x: Vec<_> = (0..2).map(|_| complex_vec(&mut rng, 3)).collect();
        let y: Vec<_> = (0..2).map(|_| complex_vec(&mut rng, 3)).collect();
        let perm_sum = inner(&x[0], &y[0]) * inner(&x[1], &y[1]) - inner(&x[0], &y[1]) * inner(&x[1], &y[0]);
        assert!((wedge_inner_product(&x, &y) - perm_sum).norm() < 1e-12);
    }

    #[test]
    fn creator_single_mode() {
        let f = FockSpace::new(1).unwrap();
        let c = f.creator(&[ONE]).unwrap();
        assert_eq!(c, ComplexMatrix::from_real_rows(&[&[0.0, 0.0], &[1.0, 0.0]]));
        let a = f.annihilator(&[ONE]).unwrap();
        assert_eq!(a, ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]));
    }

    #[test]
    fn creator_sign_matches_insertion_parity() {
        // e2 ∧ e1 = −e1 ∧ e2, and mask {e1,e2} is stored as e1 ∧ e2
        let f = FockSpace::new(3).unwrap();
        let out = f.creator_basis(1).apply(&{
            let mut v = vec![ZERO; 8];
            v[0b001] = ONE;
            v
        });
        assert_eq!(out[0b011], -ONE);
        // e1 ∧ e2 starting from e2
        let out = f.creator_basis(0).apply(&{
            let mut v = vec![ZERO; 8];
            v[0b010] = ONE;
            v
        });
        assert_eq!(out[0b011], ONE);
    }

    #[test]
    fn creator_squares_to_zero_and_adjoint() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let f = FockSpace::new(3).unwrap();
        let x = complex_vec(&mut rng, 3);
        let c = f.creator(&x).unwrap();
        assert!((&c * &c).norm() < TOL);
        let a = f.annihilator(&x).unwrap();
        assert!((&a - &c.adjoint()).norm() < TOL);
        let ix: Vec<_> = x.iter().map(|z| z * I).collect();
        assert!((&f.annihilator(&ix).unwrap() - &a.scale(-I)).norm() < TOL);
        assert!((&f.creator(&ix).unwrap() - &c.scale(I)).norm() < TOL);
    }

    #[test]
    fn fock_car() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let f = FockSpace::new(3).unwrap();
        let x = complex_vec(&mut rng, 3);
        let y = complex_vec(&mut rng, 3);
        let anti = f.annihilator(&y).unwrap().anticommutator(&f.creator(&x).unwrap());
        let expect = ComplexMatrix::identity(8).scale(inner(&y, &x));
        assert!((&anti - &expect).norm() < TOL);
        let cc = f.creator(&x).unwrap().anticommutator(&f.creator(&y).unwrap());
        assert!(cc.norm() < TOL);
    }

    #[test]
    fn single_mode_hamiltonian() {
        let f = FockSpace::new(1).unwrap();
        let eps = 1.7;
        let h = f
            .build_quadratic_hamiltonian(
                &ComplexMatrix::real_diag(&[eps]),
                &ComplexMatrix::zeros(1, 1),
            )
            .unwrap();
        let expect = ComplexMatrix::real_diag(&[-eps / 2.0, eps / 2.0]);
        assert!((&h - &expect).norm() < TOL);
    }

    #[test]
    fn number_operator_spectrum() {
        for n in 1..=4 {
            let f = FockSpace::new(n).unwrap();
            let h = f
                .build_quadratic_hamiltonian(&ComplexMatrix::identity(n), &ComplexMatrix::zeros(n, n))
                .unwrap();
            let expect = &f.number_operator() - &ComplexMatrix::identity(f.dim()).scale_real(n as f64 / 2.0);
            assert!((&h - &expect).norm() < TOL);
        }
        let f = FockSpace::new(2).unwrap();
        let h = f
            .build_quadratic_hamiltonian(&ComplexMatrix::zeros(2, 2), &ComplexMatrix::zeros(2, 2))
            .unwrap();
        assert_eq!(h.norm(), 0.0);
    }

    #[test]
    fn hamiltonian_is_self_adjoint_and_even() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let f = FockSpace::new(3).unwrap();
        let h = f
            .build_quadratic_hamiltonian(&random_hermitian(&mut rng, 3), &random_antisymmetric(&mut rng, 3))
            .unwrap();
        assert!(h.is_self_adjoint());
        assert!(h.commutator(&f.parity_operator()).norm() < TOL);
    }

    #[test]
    fn hamiltonian_input_errors() {
        let f = FockSpace::new(2).unwrap();
        let z = ComplexMatrix::zeros(2, 2);
        let bad = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert!(matches!(
            f.build_quadratic_hamiltonian(&bad, &z),
            Err(FockError::NotSelfAdjointTheta(_))
        ));
        assert!(matches!(
            f.build_quadratic_hamiltonian(&z, &bad),
            Err(FockError::NotAntisymmetricXi(_))
        ));
        assert!(matches!(
            f.creator(&[ONE]),
            Err(FockError::DimensionMismatch { .. })
        ));
        assert!(FockSpace::new(13).is_err());
    }
}
