//! Time reversal, spin rotation, charge and particle-hole symmetries, their
//! lifts to Nambu space, relative signs of real structures, and the
//! quaternionic and charge reductions.
//!
//! A real structure on a matrix algebra is always `Ad_K` for an anti-linear
//! `K`, so real structures are passed around as the [`AntiLinearOp`] `K`.

use num_complex::Complex64;
use thiserror::Error;

use crate::linalg::{
    compose_antilinear, AntiLinearOp, ComplexMatrix, LinalgError, Operator, I, ONE, TOL,
};
use crate::nambu::{BdGHamiltonian, NambuSpace};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SymmetryError {
    #[error("time reversal does not square to −1 (residual {0:.3e})")]
    NotQuaternionic(f64),
    #[error("{0} is not unitary")]
    NotUnitary(&'static str),
    #[error("{0}")]
    Invalid(String),
    #[error("odd dimension {0} cannot carry spin-½ generators")]
    OddDimension(usize),
    #[error("the two real structures are not inner related")]
    NotInnerRelated,
    #[error("u·r(u) is not ±1 (got {0:.4})")]
    NotScalar(Complex64),
    #[error("eigenspaces of j₃ are not half-dimensional ({0} of {1})")]
    BadSpinAlgebra(usize, usize),
    #[error("Hamiltonian does not conserve charge (‖Δ‖ = {0:.3e})")]
    NotChargeConserving(f64),
    #[error("commutant element is not of the form z⊗1 (residual {0:.3e})")]
    NotFactorized(f64),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

pub type Result<T> = std::result::Result<T, SymmetryError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SymmetryKind {
    Trs,
    /// Spin rotation generator `j_μ`, `μ ∈ {1, 2, 3}`.
    Srs(u8),
    Q,
    Phs,
}

/// A declared symmetry together with its lift to Nambu space.
#[derive(Debug, Clone)]
pub struct SymmetryOperator {
    pub kind: SymmetryKind,
    /// The operator on `V` (or on `W` for `Q`).
    pub op: Operator,
    pub lifted: Operator,
    /// `+1` when the BdG Hamiltonian must commute with `lifted`.
    pub relation_sign: i8,
}

impl SymmetryOperator {
    pub fn trs(t: AntiLinearOp) -> Result<Self> {
        let n = t.dim();
        let lifted = lift_trs(&NambuSpace::new(n), &t)?;
        Ok(Self {
            kind: SymmetryKind::Trs,
            op: Operator::AntiLinear(t),
            lifted: Operator::AntiLinear(lifted),
            relation_sign: 1,
        })
    }

    pub fn charge(n: usize) -> Self {
        let q = NambuSpace::new(n).charge();
        Self {
            kind: SymmetryKind::Q,
            op: Operator::Linear(q.clone()),
            lifted: Operator::Linear(q),
            relation_sign: 1,
        }
    }

    /// Particle-hole symmetry from a unitary involution `S` on `V`; the lift
    /// `L` acts as `(x, y) ↦ (S ȳ, S̄ x̄)`.
    pub fn phs(s: ComplexMatrix) -> Result<Self> {
        let n = s.require_square()?;
        if !s.is_unitary() {
            return Err(SymmetryError::NotUnitary("S"));
        }
        let r = (&(&s * &s) - &ComplexMatrix::identity(n)).norm();
        if r >= TOL {
            return Err(SymmetryError::Invalid(format!("S does not square to 1 (residual {r:.3e})")));
        }
        let z = ComplexMatrix::zeros(n, n);
        let l = AntiLinearOp::new(ComplexMatrix::block2(&z, &s, &s.conj(), &z))?;
        Ok(Self {
            kind: SymmetryKind::Phs,
            op: Operator::Linear(s),
            lifted: Operator::AntiLinear(l),
            relation_sign: 1,
        })
    }

    /// The three spin generators for the factorization `V = V' ⊗ ℂ²`.
    pub fn spin(dim_v: usize) -> Result<[Self; 3]> {
        let js = make_spin_generators(dim_v)?;
        Ok(js.map(|(mu, j)| {
            let lifted = lift_linear(&j);
            Self {
                kind: SymmetryKind::Srs(mu),
                op: Operator::Linear(j),
                lifted: Operator::Linear(lifted),
                relation_sign: 1,
            }
        }))
    }

    /// `‖[H, lifted]‖` (or the anticommutator for `relation_sign = −1`).
    pub fn residual(&self, h: &ComplexMatrix) -> Result<f64> {
        let conj = self.lifted.conjugate(h)?;
        let r = if self.relation_sign > 0 { &conj - h } else { &conj + h };
        Ok(r.norm())
    }
}

/// `diag(x, x̄)`, the coordinate form of `diag(x, ρxρ⁻¹)`.
pub fn lift_linear(x: &ComplexMatrix) -> ComplexMatrix {
    x.direct_sum(&x.conj())
}

/// `T̃ = diag(T, ρTρ⁻¹)`; in coordinates the anti-linear map with matrix
/// `diag(M_T, M̄_T)`.
pub fn lift_trs(nambu: &NambuSpace, t: &AntiLinearOp) -> Result<AntiLinearOp> {
    if t.dim() != nambu.modes() {
        return Err(SymmetryError::Linalg(LinalgError::DimensionMismatch {
            expected: nambu.modes(),
            found: t.dim(),
        }));
    }
    if !t.is_unitary() {
        return Err(SymmetryError::NotUnitary("T"));
    }
    let sq = t.square();
    let r = (&sq + &ComplexMatrix::identity(t.dim())).norm();
    if r >= TOL * (t.dim().max(1) as f64) {
        return Err(SymmetryError::NotQuaternionic(r));
    }
    Ok(AntiLinearOp::new(lift_linear(t.mat()))?)
}

/// `j_μ = i(1_{V'} ⊗ σ_μ)` with the spin index fastest.
pub fn make_spin_generators(dim_v: usize) -> Result<[(u8, ComplexMatrix); 3]> {
    if dim_v % 2 == 1 || dim_v == 0 {
        return Err(SymmetryError::OddDimension(dim_v));
    }
    let id = ComplexMatrix::identity(dim_v / 2);
    let paulis = [
        crate::linalg::pauli_x(),
        crate::linalg::pauli_y(),
        crate::linalg::pauli_z(),
    ];
    let [a, b, c] = paulis.map(|p| id.kron(&p).scale(I));
    Ok([(1, a), (2, b), (3, c)])
}

/// Relative signs between two real structures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SignPair {
    pub eta1: i8,
    pub eta2: Option<i8>,
}

fn as_sign(x: &ComplexMatrix) -> Result<i8> {
    let z = x.as_scalar().ok_or_else(|| SymmetryError::NotScalar(x[(0, 0)]))?;
    if (z - ONE).norm() < 1e-8 {
        Ok(1)
    } else if (z + ONE).norm() < 1e-8 {
        Ok(-1)
    } else {
        Err(SymmetryError::NotScalar(z))
    }
}

/// Unitary `u` with `u·x·u⁻¹ = auto(x)` for a linear automorphism `auto` of
/// `M_d`, fixed up to phase by making its largest entry positive real.
pub fn inner_generator(d: usize, auto: impl Fn(&ComplexMatrix) -> ComplexMatrix) -> Result<ComplexMatrix> {
    let unit = |i: usize, j: usize| {
        let mut e = ComplexMatrix::zeros(d, d);
        e[(i, j)] = ONE;
        e
    };
    let mut units = Vec::new();
    for i in 0..d {
        units.push(unit(i, 0));
    }
    for j in 1..d {
        units.push(unit(0, j));
    }
    // vec(A u − u E) = (1 ⊗ A − Eᵀ ⊗ 1) vec(u), column-major
    let id = ComplexMatrix::identity(d);
    let mut system = ComplexMatrix::zeros(units.len() * d * d, d * d);
    for (k, e) in units.iter().enumerate() {
        let a = auto(e);
        let block = &id.kron(&a) - &e.transpose().kron(&id);
        system.set_block(k * d * d, 0, &block);
    }
    let gram = &system.adjoint() * &system;
    let (vals, vecs) = gram.eigh()?;
    let scale = vals.last().copied().unwrap_or(1.0).max(1.0);
    if vals[0] > 1e-9 * scale || (d * d > 1 && vals[1] < 1e-6 * scale) {
        return Err(SymmetryError::NotInnerRelated);
    }
    let v = vecs.column(0);
    let mut u = ComplexMatrix::from_fn(d, d, |i, j| v[j * d + i]);
    let norm = (&u.adjoint() * &u)[(0, 0)].re.sqrt();
    u = u.scale_real(1.0 / norm);
    if !u.is_unitary() {
        return Err(SymmetryError::NotInnerRelated);
    }
    let mut best = (0, 0);
    let mut best_abs = -1.0;
    for j in 0..d {
        for i in 0..d {
            let a = u[(i, j)].norm();
            if a > best_abs + 1e-9 {
                best_abs = a;
                best = (i, j);
            }
        }
    }
    let phase = u[best] / u[best].norm();
    u = u.scale(phase.conj());
    for i in 0..d {
        for j in 0..d {
            let e = unit(i, j);
            if (&auto(&e) - &(&(&u * &e) * &u.adjoint())).norm() > 1e-8 {
                return Err(SymmetryError::NotInnerRelated);
            }
        }
    }
    Ok(u)
}

/// Generator of `Ad_f ∘ Ad_r`.
pub fn find_inner_generator(r: &AntiLinearOp, f: &AntiLinearOp) -> Result<ComplexMatrix> {
    if r.dim() != f.dim() {
        return Err(SymmetryError::Linalg(LinalgError::DimensionMismatch {
            expected: f.dim(),
            found: r.dim(),
        }));
    }
    inner_generator(r.dim(), |x| f.conjugate(&r.conjugate(x)))
}

/// `η = (u·r(u), u·γ(u)*)` for a generator `u` of `f ∘ r`, where `γ = Ad_Γ`
/// is the optional inner grading.
pub fn relative_signs(
    r: &AntiLinearOp,
    f: &AntiLinearOp,
    grading_gen: Option<&ComplexMatrix>,
) -> Result<SignPair> {
    let u = find_inner_generator(r, f)?;
    let eta1 = as_sign(&(&u * &r.conjugate(&u)))?;
    let eta2 = match grading_gen {
        Some(g) => {
            let gu = &(g * &u) * &g.inverse()?;
            Some(as_sign(&(&u * &gu.adjoint()))?)
        }
        None => None,
    };
    Ok(SignPair { eta1, eta2 })
}

/// Result of splitting `W` along the eigenspaces of `j̃₃`.
#[derive(Debug, Clone)]
pub struct QuaternionicFactor {
    /// Orthonormal basis of `W⁺ = ker(j̃₃ + i)` as columns.
    pub basis: ComplexMatrix,
    /// `Φ = [B⁺ | −j̃₁B⁺]`, unitary on `W`.
    pub phi: ComplexMatrix,
    /// `γ⁺ = −γ j̃₁` restricted to `W⁺`.
    pub gamma_plus: AntiLinearOp,
    /// `γ⁺ ∘ γ⁺ = ±1`.
    pub gamma_plus_square: i8,
}

impl QuaternionicFactor {
    pub fn half_dim(&self) -> usize {
        self.basis.ncols()
    }

    /// `χ(x) = Φ† x Φ` in `𝓛(W⁺) ⊗ M₂`, the `M₂` factor being the outer
    /// block index.
    pub fn chi(&self, x: &ComplexMatrix) -> ComplexMatrix {
        &(&self.phi.adjoint() * x) * &self.phi
    }

    pub fn chi_inv(&self, y: &ComplexMatrix) -> ComplexMatrix {
        &(&self.phi * y) * &self.phi.adjoint()
    }

    /// The `z` with `χ(x) = z ⊗ 1`.
    pub fn reduce(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        let m = self.half_dim();
        let c = self.chi(x);
        let z = c.block(0, 0, m, m);
        let resid = (&c - &ComplexMatrix::identity(2).kron(&z)).norm();
        if resid >= 1e-9 * x.norm().max(1.0) {
            return Err(SymmetryError::NotFactorized(resid));
        }
        Ok(z)
    }

    /// `γ` transported by `Φ`: anti-linear with matrix `iσ_y ⊗ γ⁺`.
    pub fn gamma_factorized(&self) -> AntiLinearOp {
        AntiLinearOp::new(crate::linalg::i_sigma_y().kron(self.gamma_plus.mat()))
            .expect("unitary")
    }
}

/// Orthonormal basis of `ker(a − λ)` for a normal `a`.
pub fn eigenspace(a: &ComplexMatrix, lambda: Complex64) -> Result<ComplexMatrix> {
    let d = a.require_square()?;
    let shifted = a - &ComplexMatrix::identity(d).scale(lambda);
    let (vals, vecs) = (&shifted.adjoint() * &shifted).eigh()?;
    let k = vals.iter().take_while(|&&v| v < 1e-9).count();
    Ok(vecs.block(0, 0, d, k))
}

pub fn quaternionic_factor(nambu: &NambuSpace, j_tilde: &[ComplexMatrix; 3]) -> Result<QuaternionicFactor> {
    let d = nambu.dim();
    for j in j_tilde {
        j.require_dim(d)?;
    }
    let b = eigenspace(&j_tilde[2], -I)?;
    if 2 * b.ncols() != d {
        return Err(SymmetryError::BadSpinAlgebra(b.ncols(), d));
    }
    let j1b = &j_tilde[0] * &b;
    let mut phi = ComplexMatrix::zeros(d, d);
    phi.set_block(0, 0, &b);
    phi.set_block(0, b.ncols(), &-&j1b);
    if !phi.is_unitary() {
        return Err(SymmetryError::BadSpinAlgebra(b.ncols(), d));
    }
    let gp = -(&(&b.adjoint() * &nambu.swap()) * &j1b.conj());
    let gamma_plus = AntiLinearOp::new(gp)?;
    let gamma_plus_square = as_sign(&gamma_plus.square())?;
    Ok(QuaternionicFactor {
        basis: b,
        phi,
        gamma_plus,
        gamma_plus_square,
    })
}

/// Splitting of `V` along `ker(j₃ + i)`, used after charge reduction.
#[derive(Debug, Clone)]
pub struct SpinReduction {
    pub basis: ComplexMatrix,
}

impl SpinReduction {
    pub fn new(j: &[ComplexMatrix; 3]) -> Result<Self> {
        let d = j[2].require_square()?;
        let b = eigenspace(&j[2], -I)?;
        if 2 * b.ncols() != d {
            return Err(SymmetryError::BadSpinAlgebra(b.ncols(), d));
        }
        Ok(Self { basis: b })
    }

    /// Compression `B†xB` of an operator commuting with the `j_μ`.
    pub fn compress(&self, x: &ComplexMatrix) -> ComplexMatrix {
        &(&self.basis.adjoint() * x) * &self.basis
    }

    /// `T⁺ = −j₁T` restricted to `V⁺`.
    pub fn reduce_trs(&self, j1: &ComplexMatrix, t: &AntiLinearOp) -> Result<AntiLinearOp> {
        let m = -(&(&(&self.basis.adjoint() * j1) * t.mat()) * &self.basis.conj());
        Ok(AntiLinearOp::new(m)?)
    }
}

/// The `P` block of a charge-conserving BdG Hamiltonian.
pub fn charge_reduce(b: &BdGHamiltonian) -> Result<ComplexMatrix> {
    let q = b.nambu().charge();
    let r = b.full().commutator(&q).norm();
    if r >= TOL * b.full().norm().max(1.0) {
        return Err(SymmetryError::NotChargeConserving(b.delta().norm()));
    }
    Ok(b.p().clone())
}

/// `Γ = iγT̃`, the linear chiral generator.
pub fn chiral_generator(gamma: &AntiLinearOp, t_tilde: &AntiLinearOp) -> Result<ComplexMatrix> {
    Ok(compose_antilinear(gamma, t_tilde)?.scale(I))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{i_sigma_y, pauli_x, pauli_z, random_hermitian, random_matrix};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn t2() -> AntiLinearOp {
        AntiLinearOp::new(i_sigma_y()).unwrap()
    }

    fn ad_conj(k: &AntiLinearOp, a: &AntiLinearOp) -> AntiLinearOp {
        // K ∘ A ∘ K⁻¹
        let op = Operator::AntiLinear(k.clone())
            .compose(&Operator::AntiLinear(a.clone()))
            .unwrap()
            .compose(&Operator::AntiLinear(k.inverse()))
            .unwrap();
        match op {
            Operator::AntiLinear(x) => x,
            Operator::Linear(_) => unreachable!(),
        }
    }

    #[test]
    fn trs_lift_properties() {
        let nb = NambuSpace::new(2);
        let tt = lift_trs(&nb, &t2()).unwrap();
        assert!((tt.mat() - &i_sigma_y().direct_sum(&i_sigma_y())).norm() < TOL);
        assert!(tt.is_quaternionic());
        let g = nb.gamma();
        assert!((ad_conj(&g, &tt).mat() - tt.mat()).norm() < TOL);
        let gt = compose_antilinear(&g, &tt).unwrap();
        assert!((&gt.adjoint() + &gt).norm() < TOL);
    }

    #[test]
    fn trs_lift_is_real_for_complex_t() {
        // T = U iσ_y Uᵀ ∘ conj for a random unitary U still squares to −1
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let u = crate::linalg::random_unitary(&mut rng, 2);
        let m = &(&u * &i_sigma_y()) * &u.transpose();
        let t = AntiLinearOp::new(m).unwrap();
        let nb = NambuSpace::new(2);
        let tt = lift_trs(&nb, &t).unwrap();
        assert!((ad_conj(&nb.gamma(), &tt).mat() - tt.mat()).norm() < 1e-10);
    }

    #[test]
    fn trs_lift_rejects_even_trs() {
        let nb = NambuSpace::new(2);
        let even = AntiLinearOp::conjugation(2);
        assert!(matches!(lift_trs(&nb, &even), Err(SymmetryError::NotQuaternionic(_))));
        let scaled = AntiLinearOp::new(i_sigma_y().scale_real(2.0)).unwrap();
        assert!(matches!(lift_trs(&nb, &scaled), Err(SymmetryError::NotUnitary(_))));
    }

    #[test]
    fn spin_generators() {
        let js = make_spin_generators(2).unwrap();
        assert!((&js[2].1 - &pauli_z().scale(I)).norm() < TOL);
        let js = make_spin_generators(4).unwrap();
        let [j1, j2, j3] = [&js[0].1, &js[1].1, &js[2].1];
        assert!((&j2.commutator(j1) - &j3.scale_real(2.0)).norm() < TOL);
        assert!((&j3.commutator(j2) - &j1.scale_real(2.0)).norm() < TOL);
        assert!((&j1.commutator(j3) - &j2.scale_real(2.0)).norm() < TOL);
        for (_, j) in &js {
            assert!((&j.adjoint() + j).norm() < TOL);
        }
        assert!(make_spin_generators(3).is_err());
        // lifts are real
        let nb = NambuSpace::new(4);
        let g = nb.gamma();
        for (_, j) in &js {
            let l = lift_linear(j);
            assert!((&g.conjugate(&l) - &l).norm() < TOL);
        }
    }

    #[test]
    fn trs_commutes_with_spin() {
        let t = AntiLinearOp::new(ComplexMatrix::identity(1).kron(&i_sigma_y())).unwrap();
        for (_, j) in make_spin_generators(2).unwrap() {
            assert!((&t.conjugate(&j) - &j).norm() < TOL);
        }
    }

    #[test]
    fn inner_generator_examples() {
        let c = AntiLinearOp::conjugation(3);
        let u = find_inner_generator(&c, &c).unwrap();
        assert!((&u - &ComplexMatrix::identity(3)).norm() < 1e-9);
        assert_eq!(relative_signs(&c, &c, None).unwrap().eta1, 1);

        let u = inner_generator(2, |x| &(&pauli_z() * x) * &pauli_z()).unwrap();
        assert!((&u - &pauli_z()).norm() < 1e-9);
    }

    #[test]
    fn inner_generator_rejects_outer_maps() {
        // transpose is an anti-automorphism, not Ad_u
        assert!(inner_generator(2, |x| x.transpose()).is_err());
    }

    #[test]
    fn trs_sign_against_gamma() {
        let nb = NambuSpace::new(2);
        let g = nb.gamma();
        let tt = lift_trs(&nb, &t2()).unwrap();
        let u = find_inner_generator(&tt, &g).unwrap();
        let gamma_gen = chiral_generator(&g, &tt).unwrap();
        assert!(gamma_gen.is_self_adjoint() && gamma_gen.is_unitary());
        // u ∝ Γ
        let overlap = (&u.adjoint() * &gamma_gen).as_scalar().unwrap();
        assert!((overlap.norm() - 1.0).abs() < 1e-9);
        assert_eq!(relative_signs(&tt, &g, None).unwrap().eta1, -1);
    }

    #[test]
    fn phase_of_generator_does_not_matter() {
        let nb = NambuSpace::new(2);
        let g = nb.gamma();
        let tt = lift_trs(&nb, &t2()).unwrap();
        let u = find_inner_generator(&tt, &g).unwrap();
        for theta in [0.3, 1.1, 2.5] {
            let v = u.scale(Complex64::from_polar(1.0, theta));
            let eta = &v * &tt.conjugate(&v);
            assert_eq!(as_sign(&eta).unwrap(), -1);
        }
    }

    #[test]
    fn quaternionic_factor_minimal() {
        let nb = NambuSpace::new(2);
        let js = make_spin_generators(2).unwrap();
        let jt = [lift_linear(&js[0].1), lift_linear(&js[1].1), lift_linear(&js[2].1)];
        let qf = quaternionic_factor(&nb, &jt).unwrap();
        assert_eq!(qf.half_dim(), 2);
        let id = ComplexMatrix::identity(2);
        assert!((&qf.chi(&jt[0]) - &i_sigma_y().kron(&id)).norm() < 1e-10);
        assert!((&qf.chi(&jt[1]) - &pauli_x().scale(I).kron(&id)).norm() < 1e-10);
        assert_eq!(qf.gamma_plus_square, -1);
        // γ transported by Φ
        let g = nb.gamma();
        let transported = &(&qf.phi.adjoint() * g.mat()) * &qf.phi.conj();
        assert!((&transported - qf.gamma_factorized().mat()).norm() < 1e-10);
    }

    #[test]
    fn quaternionic_factor_commutant() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let nb = NambuSpace::new(4);
        let js = make_spin_generators(4).unwrap();
        let jt = [lift_linear(&js[0].1), lift_linear(&js[1].1), lift_linear(&js[2].1)];
        let qf = quaternionic_factor(&nb, &jt).unwrap();
        for _ in 0..10 {
            // average a random matrix over the spin group's quaternion units
            let x = random_matrix(&mut rng, 8, 8);
            let mut avg = x.clone();
            for j in &jt {
                avg += &(&(j * &x) * &j.adjoint());
            }
            let z = qf.reduce(&avg).unwrap();
            assert_eq!(z.nrows(), 4);
            let y = random_hermitian(&mut rng, 8);
            let lhs = qf.chi(&(&avg * &y));
            let rhs = &qf.chi(&avg) * &qf.chi(&y);
            assert!((&lhs - &rhs).norm() < 1e-9);
            assert!((&qf.chi(&y.adjoint()) - &qf.chi(&y).adjoint()).norm() < 1e-9);
        }
    }

    #[test]
    fn charge_reduce_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let p = random_hermitian(&mut rng, 3);
        let b = BdGHamiltonian::new(p.clone(), ComplexMatrix::zeros(3, 3)).unwrap();
        let got = charge_reduce(&b).unwrap();
        assert_eq!(got, p);
        let back = BdGHamiltonian::new(got, ComplexMatrix::zeros(3, 3)).unwrap();
        assert_eq!(back.full(), b.full());
        let delta = crate::linalg::random_antisymmetric(&mut rng, 3);
        let b = BdGHamiltonian::new(p, delta).unwrap();
        assert!(matches!(charge_reduce(&b), Err(SymmetryError::NotChargeConserving(_))));
    }

    #[test]
    fn phs_lift_is_antilinear_swap() {
        let s = pauli_z();
        let op = SymmetryOperator::phs(s).unwrap();
        let Operator::AntiLinear(l) = &op.lifted else { panic!() };
        // Ad_L(diag(P, −P̄)) = diag(−SPS, conj(SPS))
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let p = random_hermitian(&mut rng, 2);
        let h = p.direct_sum(&-p.conj());
        let sps = &(&pauli_z() * &p) * &pauli_z();
        let expect = (-&sps).direct_sum(&sps.conj());
        assert!((&l.conjugate(&h) - &expect).norm() < 1e-10);
        assert!(SymmetryOperator::phs(random_hermitian(&mut rng, 2)).is_err());
    }
}
