//! Nambu space `W = ℂⁿ ⊕ (ℂⁿ)*` and Bogoliubov-de Gennes Hamiltonians.
//!
//! The dual is identified with ℂⁿ through the standard basis, so a Nambu
//! vector is a `2n` coordinate vector `(x, y)` and the field operator is
//! `η(x, y) = Σ x_i c†_i + y_i c_i`. In these coordinates the canonical real
//! structure is `γ(x, y) = (ȳ, x̄)` and `q((x, y), (x', y')) = y·x' + y'·x`.

use num_complex::Complex64;
use thiserror::Error;

use crate::fock::{FockError, FockOperator, FockSpace};
use crate::linalg::{spectral_sign, AntiLinearOp, ComplexMatrix, LinalgError, TOL, ZERO};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NambuError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("P block is not self-adjoint (residual {0:.3e})")]
    NotSelfAdjoint(f64),
    #[error("Δ block is not antisymmetric (residual {0:.3e})")]
    NotAntisymmetric(f64),
    #[error("matrix is not of BdG block form (residual {0:.3e})")]
    NotBdgForm(f64),
    #[error("commutator with H leaves the field operators (residual {0:.3e})")]
    NotFreeFermion(f64),
    #[error("BdG Hamiltonian is not gapped (min |eigenvalue| = {0:.3e})")]
    Gapless(f64),
    #[error(transparent)]
    Fock(#[from] FockError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

pub type Result<T> = std::result::Result<T, NambuError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NambuSpace {
    n: usize,
}

impl NambuSpace {
    pub fn new(n: usize) -> Self {
        Self { n }
    }

    pub fn modes(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        2 * self.n
    }

    /// `[[0, 1], [1, 0]]`, the matrix of γ (which acts as `swap ∘ conj`).
    pub fn swap(&self) -> ComplexMatrix {
        let n = self.n;
        let z = ComplexMatrix::zeros(n, n);
        let id = ComplexMatrix::identity(n);
        ComplexMatrix::block2(&z, &id, &id, &z)
    }

    pub fn gamma(&self) -> AntiLinearOp {
        AntiLinearOp::new(self.swap()).expect("swap is invertible")
    }

    /// Charge operator `Q = diag(1, −1)`.
    pub fn charge(&self) -> ComplexMatrix {
        let mut d = vec![1.0; self.n];
        d.extend(std::iter::repeat(-1.0).take(self.n));
        ComplexMatrix::real_diag(&d)
    }

    fn check(&self, w: &[Complex64]) -> Result<()> {
        if w.len() == self.dim() {
            Ok(())
        } else {
            Err(NambuError::DimensionMismatch {
                expected: self.dim(),
                found: w.len(),
            })
        }
    }

    /// Symmetric bilinear form `q(x + φ, x' + φ') = φ(x') + φ'(x)`.
    pub fn q_form(&self, w: &[Complex64], w2: &[Complex64]) -> Result<Complex64> {
        self.check(w)?;
        self.check(w2)?;
        let n = self.n;
        Ok((0..n).map(|i| w[n + i] * w2[i] + w2[n + i] * w[i]).sum())
    }

    /// `η(x + φ) = c†_x + c_{ρ⁻¹φ}` for `w = (x, y)` with `φ = yᵀ·`.
    pub fn eta(&self, fock: &FockSpace, w: &[Complex64]) -> Result<FockOperator> {
        self.check(w)?;
        if fock.modes() != self.n {
            return Err(NambuError::DimensionMismatch {
                expected: self.n,
                found: fock.modes(),
            });
        }
        let n = self.n;
        let x = &w[..n];
        let y_conj: Vec<Complex64> = w[n..].iter().map(|z| z.conj()).collect();
        Ok(fock.creator(x)? + fock.annihilator(&y_conj)?)
    }

    fn basis_vector(&self, k: usize) -> Vec<Complex64> {
        let mut v = vec![ZERO; self.dim()];
        v[k] = Complex64::new(1.0, 0.0);
        v
    }

    /// Matrix of `η⁻¹ ∘ [H, η(·)]` in the basis `{(e_i, 0)} ∪ {(0, e_i)}`.
    pub fn extract_bdg(&self, fock: &FockSpace, h: &FockOperator) -> Result<BdGHamiltonian> {
        h.require_dim(fock.dim())?;
        let resid = h.self_adjoint_residual();
        if resid >= TOL * h.norm().max(1.0) {
            return Err(NambuError::Linalg(LinalgError::NotSelfAdjoint(resid)));
        }
        let d = self.dim();
        let fields: Vec<FockOperator> = (0..d)
            .map(|k| self.eta(fock, &self.basis_vector(k)))
            .collect::<Result<_>>()?;
        // field operators are Hilbert-Schmidt orthogonal with norm² 2ⁿ⁻¹
        let hs_norm = (fock.dim() / 2) as f64;
        let mut full = ComplexMatrix::zeros(d, d);
        let mut worst = 0.0f64;
        for (k, fk) in fields.iter().enumerate() {
            let comm = h.commutator(fk);
            let mut rest = comm.clone();
            for (a, fa) in fields.iter().enumerate() {
                let coeff = hs_inner(fa, &comm) / hs_norm;
                full[(a, k)] = coeff;
                if coeff != ZERO {
                    rest = rest - fa.scale(coeff);
                }
            }
            worst = worst.max(rest.norm() / comm.norm().max(1.0));
        }
        if worst > 1e-9 {
            return Err(NambuError::NotFreeFermion(worst));
        }
        BdGHamiltonian::from_full(full)
    }
}

fn hs_inner(a: &ComplexMatrix, b: &ComplexMatrix) -> Complex64 {
    a.as_dmatrix()
        .iter()
        .zip(b.as_dmatrix().iter())
        .map(|(x, y)| x.conj() * y)
        .sum()
}

/// `[[P, Δ], [Δ†, −Pᵀ]]` with `P` self-adjoint and `Δ` antisymmetric.
#[derive(Debug, Clone, PartialEq)]
pub struct BdGHamiltonian {
    p: ComplexMatrix,
    delta: ComplexMatrix,
    full: ComplexMatrix,
}

impl BdGHamiltonian {
    pub fn new(p: ComplexMatrix, delta: ComplexMatrix) -> Result<Self> {
        let n = p.require_square()?;
        delta.require_dim(n)?;
        let r = p.self_adjoint_residual();
        if r >= TOL * p.norm().max(1.0) {
            return Err(NambuError::NotSelfAdjoint(r));
        }
        let r = delta.antisymmetric_residual();
        if r >= TOL * delta.norm().max(1.0) {
            return Err(NambuError::NotAntisymmetric(r));
        }
        let full = ComplexMatrix::block2(&p, &delta, &delta.adjoint(), &-p.transpose());
        Ok(Self { p, delta, full })
    }

    /// Splits a `2n×2n` coordinate matrix, checking the block relations.
    pub fn from_full(full: ComplexMatrix) -> Result<Self> {
        let d = full.require_square()?;
        if d % 2 == 1 {
            return Err(NambuError::Linalg(LinalgError::OddDimension(d)));
        }
        let n = d / 2;
        let p = full.block(0, 0, n, n);
        let delta = full.block(0, n, n, n);
        let out = Self::new(p, delta)?;
        let r = (&out.full - &full).norm();
        if r >= TOL * full.norm().max(1.0) {
            return Err(NambuError::NotBdgForm(r));
        }
        Ok(out)
    }

    pub fn p(&self) -> &ComplexMatrix {
        &self.p
    }

    pub fn delta(&self) -> &ComplexMatrix {
        &self.delta
    }

    pub fn full(&self) -> &ComplexMatrix {
        &self.full
    }

    pub fn modes(&self) -> usize {
        self.p.nrows()
    }

    pub fn nambu(&self) -> NambuSpace {
        NambuSpace::new(self.modes())
    }

    /// Residual of `γ H γ⁻¹ = −H`.
    pub fn imaginary_residual(&self) -> f64 {
        let g = self.nambu().gamma();
        (&g.conjugate(&self.full) + &self.full).norm()
    }

    pub fn is_gapped(&self) -> bool {
        self.full
            .spectral_gap()
            .map(|g| g > TOL)
            .unwrap_or(false)
    }

    pub fn is_flat(&self) -> bool {
        let d = self.full.nrows();
        (&(&self.full * &self.full) - &ComplexMatrix::identity(d)).norm() < 1e-9
    }

    /// `H|H|⁻¹`, again of BdG form.
    pub fn flatten(&self) -> Result<Self> {
        let s = spectral_sign(&self.full).map_err(|e| match e {
            LinalgError::Gapless(g) => NambuError::Gapless(g),
            other => NambuError::Linalg(other),
        })?;
        Self::from_full(s)
    }
}

pub fn is_gapped(b: &BdGHamiltonian) -> bool {
    b.is_gapped()
}

pub fn flatten_bdg(b: &BdGHamiltonian) -> Result<BdGHamiltonian> {
    b.flatten()
}
