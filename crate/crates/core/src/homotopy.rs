//! Van Daele sets of odd self-adjoint unitaries, direct sums, the canonical
//! reference element, and a witness-searching homotopy oracle.
//!
//! A space is described by a [`ConstraintSet`]: a list of relations
//! `sign·Ad_op(a) = a`. Oddness for an inner grading `Γ` is the relation
//! `(Γ, −1)`, reality for a real structure `K` is `(K, +1)`, and a BdG
//! Hamiltonian's symmetries are expressed the same way.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::linalg::{
    pauli_x, pauli_z, random_hermitian, spectral_sign, AntiLinearOp, ComplexMatrix, LinalgError,
    Operator, TOL,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HomotopyError {
    #[error("gradings do not match: {0}")]
    GradingMismatch(String),
    #[error("element is not in 𝓕: {0}")]
    NotInF(String),
    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

pub type Result<T> = std::result::Result<T, HomotopyError>;

/// `sign · Ad_op(a) = a`.
#[derive(Debug, Clone)]
pub struct Relation {
    pub name: String,
    pub op: Operator,
    pub sign: i8,
}

impl Relation {
    pub fn new(name: impl Into<String>, op: Operator, sign: i8) -> Self {
        Self {
            name: name.into(),
            op,
            sign,
        }
    }

    pub fn linear(name: impl Into<String>, m: ComplexMatrix, sign: i8) -> Self {
        Self::new(name, Operator::Linear(m), sign)
    }

    pub fn antilinear(name: impl Into<String>, k: AntiLinearOp, sign: i8) -> Self {
        Self::new(name, Operator::AntiLinear(k), sign)
    }

    pub fn apply(&self, a: &ComplexMatrix) -> Result<ComplexMatrix> {
        let c = self.op.conjugate(a)?;
        Ok(if self.sign > 0 { c } else { -c })
    }

    pub fn residual(&self, a: &ComplexMatrix) -> Result<f64> {
        Ok((&self.apply(a)? - a).norm())
    }

    /// Relation on `V ⊕ V'` built blockwise, `None` for mixed kinds.
    pub fn direct_sum(&self, other: &Relation) -> Option<Relation> {
        if self.sign != other.sign {
            return None;
        }
        Some(Relation {
            name: self.name.clone(),
            op: self.op.direct_sum(&other.op)?,
            sign: self.sign,
        })
    }
}

/// Outcome of an 𝓕-membership test.
#[derive(Debug, Clone, PartialEq)]
pub struct Membership {
    pub member: bool,
    /// First failed condition, if any.
    pub failure: Option<String>,
}

/// The set of self-adjoint unitaries satisfying a list of relations.
#[derive(Debug, Clone)]
pub struct ConstraintSet {
    pub dim: usize,
    pub relations: Vec<Relation>,
}

const MAX_SWEEPS: usize = 500;
const GAP_FLOOR: f64 = 1e-8;

impl ConstraintSet {
    pub fn new(dim: usize, relations: Vec<Relation>) -> Self {
        Self { dim, relations }
    }

    /// Orthogonal projection onto self-adjoint matrices obeying every
    /// relation, by alternating the averages `a ↦ (a + sign·Ad(a))/2`.
    pub fn project(&self, a: &ComplexMatrix) -> Result<ComplexMatrix> {
        a.require_dim(self.dim)?;
        let mut x = a.hermitian_part();
        let scale = x.norm().max(1.0);
        for _ in 0..MAX_SWEEPS {
            for r in &self.relations {
                x = (&x + &r.apply(&x)?).scale_real(0.5);
            }
            x = x.hermitian_part();
            let mut worst = 0.0f64;
            for r in &self.relations {
                worst = worst.max(r.residual(&x)?);
            }
            if worst < 1e-14 * scale {
                break;
            }
        }
        Ok(x)
    }

    /// Spectral flattening, `None` when the spectrum comes within
    /// `GAP_FLOOR` of zero.
    pub fn flatten(&self, a: &ComplexMatrix) -> Option<ComplexMatrix> {
        let gap = a.spectral_gap().ok()?;
        if gap <= GAP_FLOOR {
            return None;
        }
        spectral_sign(a).ok()
    }

    /// `flatten(project(a))`.
    pub fn retract(&self, a: &ComplexMatrix) -> Option<ComplexMatrix> {
        self.flatten(&self.project(a).ok()?)
    }

    pub fn membership(&self, a: &ComplexMatrix) -> Membership {
        let fail = |msg: String| Membership {
            member: false,
            failure: Some(msg),
        };
        if a.require_dim(self.dim).is_err() {
            return fail(format!("dimension {} differs from {}", a.nrows(), self.dim));
        }
        let r = a.self_adjoint_residual();
        if r >= TOL * self.dim.max(1) as f64 {
            return fail(format!("not self-adjoint (residual {r:.3e})"));
        }
        let r = a.unitary_residual();
        if r >= TOL * self.dim.max(1) as f64 {
            return fail(format!("not unitary (residual {r:.3e})"));
        }
        for rel in &self.relations {
            match rel.residual(a) {
                Ok(r) if r < TOL * self.dim.max(1) as f64 => {}
                Ok(r) => return fail(format!("violates {} (residual {r:.3e})", rel.name)),
                Err(e) => return fail(e.to_string()),
            }
        }
        Membership {
            member: true,
            failure: None,
        }
    }

    pub fn element(&self, a: ComplexMatrix) -> Result<FElement> {
        match self.membership(&a) {
            Membership { member: true, .. } => Ok(FElement { a }),
            Membership { failure, .. } => Err(HomotopyError::NotInF(failure.unwrap_or_default())),
        }
    }

    pub fn random_element(&self, rng: &mut impl Rng) -> Option<FElement> {
        for _ in 0..50 {
            let h = random_hermitian(rng, self.dim);
            if let Some(a) = self.retract(&h) {
                if let Ok(x) = self.element(a) {
                    return Some(x);
                }
            }
        }
        None
    }

    pub fn direct_sum(&self, other: &ConstraintSet) -> Result<ConstraintSet> {
        if self.relations.len() != other.relations.len() {
            return Err(HomotopyError::GradingMismatch(format!(
                "{} vs {} relations",
                self.relations.len(),
                other.relations.len()
            )));
        }
        let relations = self
            .relations
            .iter()
            .zip(&other.relations)
            .map(|(a, b)| {
                a.direct_sum(b).ok_or_else(|| {
                    HomotopyError::GradingMismatch(format!("{} and {} differ in kind", a.name, b.name))
                })
            })
            .collect::<Result<_>>()?;
        Ok(ConstraintSet {
            dim: self.dim + other.dim,
            relations,
        })
    }
}

/// A member of some 𝓕 set; construct through [`ConstraintSet::element`].
#[derive(Debug, Clone, PartialEq)]
pub struct FElement {
    a: ComplexMatrix,
}

impl FElement {
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.a
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.a
    }
}

/// `(x ⊕ y)` in the block-diagonal space.
pub fn direct_sum(
    x: &FElement,
    sx: &ConstraintSet,
    y: &FElement,
    sy: &ConstraintSet,
) -> Result<(FElement, ConstraintSet)> {
    let space = sx.direct_sum(sy)?;
    let a = x.a.direct_sum(&y.a);
    Ok((space.element(a)?, space))
}

#[derive(Debug, Clone)]
pub enum Grading {
    Trivial,
    Inner(ComplexMatrix),
}

/// `M_d(ℂ)` with a grading and an optional real structure.
#[derive(Debug, Clone)]
pub struct GradedMatrixAlgebra {
    pub dim: usize,
    pub grading: Grading,
    pub real_structure: Option<AntiLinearOp>,
}

impl GradedMatrixAlgebra {
    pub fn new(dim: usize, grading: Grading, real_structure: Option<AntiLinearOp>) -> Result<Self> {
        if let Grading::Inner(g) = &grading {
            g.require_dim(dim)?;
            if !g.is_self_adjoint() || !g.is_unitary() {
                return Err(HomotopyError::InvalidAlgebra(
                    "grading generator must be a self-adjoint unitary".into(),
                ));
            }
            if let Some(k) = &real_structure {
                let kg = k.conjugate(g);
                if (&kg - g).norm() >= TOL && (&kg + g).norm() >= TOL {
                    return Err(HomotopyError::InvalidAlgebra(
                        "real structure does not commute with the grading".into(),
                    ));
                }
            }
        }
        if let Some(k) = &real_structure {
            if k.dim() != dim {
                return Err(HomotopyError::InvalidAlgebra("real structure has the wrong dimension".into()));
            }
        }
        Ok(Self {
            dim,
            grading,
            real_structure,
        })
    }

    /// Relations defining `𝓕(A, α)` (plus reality when declared).
    pub fn constraints(&self) -> ConstraintSet {
        let mut relations = vec![match &self.grading {
            Grading::Trivial => Relation::linear("odd", ComplexMatrix::identity(self.dim), -1),
            Grading::Inner(g) => Relation::linear("odd", g.clone(), -1),
        }];
        if let Some(k) = &self.real_structure {
            relations.push(Relation::antilinear("real", k.clone(), 1));
        }
        ConstraintSet::new(self.dim, relations)
    }

    pub fn grading_matrix(&self) -> ComplexMatrix {
        match &self.grading {
            Grading::Trivial => ComplexMatrix::identity(self.dim),
            Grading::Inner(g) => g.clone(),
        }
    }
}

pub fn f_membership(alg: &GradedMatrixAlgebra, a: &ComplexMatrix) -> Membership {
    alg.constraints().membership(a)
}

/// `M₄(A)` with grading `Ad_{diag(Γ, −Γ, Γ, −Γ)}` and its reference element
/// `e = diag(f, −f) ⊗ 1`, `f = σ_x`.
#[derive(Debug, Clone)]
pub struct CanonicalReference {
    pub algebra: GradedMatrixAlgebra,
    pub e: FElement,
}

pub fn canonical_reference(alg: &GradedMatrixAlgebra) -> Result<CanonicalReference> {
    let outer = ComplexMatrix::real_diag(&[1.0, -1.0, 1.0, -1.0]);
    let grading = outer.kron(&alg.grading_matrix());
    let real = alg
        .real_structure
        .as_ref()
        .map(|k| AntiLinearOp::conjugation(4).kron(k));
    let big = GradedMatrixAlgebra::new(4 * alg.dim, Grading::Inner(grading), real)?;
    let e_mat = pauli_z().kron(&pauli_x()).kron(&ComplexMatrix::identity(alg.dim));
    let e = big.constraints().element(e_mat)?;
    Ok(CanonicalReference { algebra: big, e })
}

/// `cos t·(e ⊕ −e) + sin t·[[0, e], [e, 0]]`, an explicit path from
/// `e ⊕ −e` to `−e ⊕ e` through odd self-adjoint unitaries.
pub fn rotation_path(e: &ComplexMatrix, steps: usize) -> Vec<ComplexMatrix> {
    let start = pauli_z().kron(e);
    let gen = pauli_x().kron(e);
    (0..=steps)
        .map(|k| {
            let t = std::f64::consts::PI * k as f64 / steps as f64;
            &start.scale_real(t.cos()) + &gen.scale_real(t.sin())
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct OracleConfig {
    /// Waypoint counts tried in order on each straight segment.
    pub waypoints: Vec<usize>,
    /// Number of random midpoints tried after the direct attempts.
    pub budget: usize,
    /// Largest allowed operator-norm step between waypoints.
    pub max_step: f64,
    pub seed: u64,
    /// Retry once in the stabilized space `x ⊕ x` vs `y ⊕ x`.
    pub stabilize: bool,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            waypoints: vec![16, 32, 64, 128],
            budget: 20,
            max_step: 0.2,
            seed: 0,
            stabilize: true,
        }
    }
}

#[derive(Debug, Clone)]
pub enum OracleResult {
    Connected {
        path: Vec<ComplexMatrix>,
        stabilized: bool,
    },
    NotFound,
}

impl OracleResult {
    pub fn is_connected(&self) -> bool {
        matches!(self, OracleResult::Connected { .. })
    }
}

fn segment(space: &ConstraintSet, x: &ComplexMatrix, y: &ComplexMatrix, cfg: &OracleConfig) -> Option<Vec<ComplexMatrix>> {
    'counts: for &k in &cfg.waypoints {
        let mut path = vec![x.clone()];
        for i in 1..k {
            let t = i as f64 / k as f64;
            let p = &x.scale_real(1.0 - t) + &y.scale_real(t);
            let Some(a) = space.retract(&p) else {
                // a zero crossing does not go away with more waypoints
                return None;
            };
            if (&a - path.last().unwrap()).op_norm() > cfg.max_step {
                continue 'counts;
            }
            path.push(a);
        }
        if (y - path.last().unwrap()).op_norm() > cfg.max_step {
            continue;
        }
        path.push(y.clone());
        return Some(path);
    }
    None
}

fn via(space: &ConstraintSet, x: &ComplexMatrix, m: &ComplexMatrix, y: &ComplexMatrix, cfg: &OracleConfig) -> Option<Vec<ComplexMatrix>> {
    let mut first = segment(space, x, m, cfg)?;
    let second = segment(space, m, y, cfg)?;
    first.extend(second.into_iter().skip(1));
    Some(first)
}

fn search(space: &ConstraintSet, x: &ComplexMatrix, y: &ComplexMatrix, cfg: &OracleConfig, rng: &mut ChaCha8Rng) -> Option<Vec<ComplexMatrix>> {
    if let Some(p) = segment(space, x, y, cfg) {
        return Some(p);
    }
    if let Some(m) = space.retract(&(x + y)) {
        if let Some(p) = via(space, x, &m, y, cfg) {
            return Some(p);
        }
    }
    for _ in 0..cfg.budget {
        let h = random_hermitian(rng, space.dim);
        let Some(m) = space.retract(&h) else { continue };
        if let Some(p) = via(space, x, &m, y, cfg) {
            return Some(p);
        }
    }
    None
}

/// Searches for a path from `x` to `y` inside `space`. A returned path has
/// every waypoint in the space and consecutive waypoints closer than
/// `max_step` < 1, so the piecewise-linear interpolation stays invertible.
/// `NotFound` proves nothing.
pub fn homotopy_oracle(space: &ConstraintSet, x: &FElement, y: &FElement, cfg: &OracleConfig) -> OracleResult {
    let (xm, ym) = (x.matrix(), y.matrix());
    if (xm - ym).norm() < TOL {
        return OracleResult::Connected {
            path: vec![xm.clone()],
            stabilized: false,
        };
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    if let Some(path) = search(space, xm, ym, cfg, &mut rng) {
        return OracleResult::Connected {
            path,
            stabilized: false,
        };
    }
    if cfg.stabilize {
        if let Ok(big) = space.direct_sum(space) {
            let xs = xm.direct_sum(xm);
            let ys = ym.direct_sum(xm);
            if let Some(path) = search(&big, &xs, &ys, cfg, &mut rng) {
                return OracleResult::Connected {
                    path,
                    stabilized: true,
                };
            }
        }
    }
    OracleResult::NotFound
}

/// Checks the oracle's output contract.
pub fn validate_path(space: &ConstraintSet, path: &[ComplexMatrix], max_step: f64) -> std::result::Result<(), String> {
    for (i, a) in path.iter().enumerate() {
        let m = space.membership(a);
        if !m.member {
            return Err(format!("waypoint {i}: {}", m.failure.unwrap_or_default()));
        }
        if i > 0 {
            let step = (a - &path[i - 1]).op_norm();
            if step > max_step + 1e-12 {
                return Err(format!("step {i} has length {step:.3}"));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{i_sigma_y, pauli_y, I};

    fn class_a(n: usize) -> ConstraintSet {
        ConstraintSet::new(n, vec![])
    }

    fn negatives(a: &ComplexMatrix) -> usize {
        a.eigenvalues_hermitian().unwrap().iter().filter(|&&v| v < 0.0).count()
    }

    #[test]
    fn membership_examples() {
        let trivial = GradedMatrixAlgebra::new(2, Grading::Trivial, None).unwrap();
        let m = f_membership(&trivial, &pauli_x());
        assert!(!m.member);
        let inner = GradedMatrixAlgebra::new(2, Grading::Inner(pauli_z()), None).unwrap();
        assert!(f_membership(&inner, &pauli_x()).member);
        let h = ComplexMatrix::real_diag(&[2.0, 0.5]);
        let m = f_membership(&GradedMatrixAlgebra::new(2, Grading::Inner(ComplexMatrix::identity(2)), None).unwrap(), &h);
        assert!(m.failure.unwrap().contains("not unitary"));
        // σ_y is odd for σ_z but not fixed by plain conjugation
        let real = GradedMatrixAlgebra::new(2, Grading::Inner(pauli_z()), Some(AntiLinearOp::conjugation(2))).unwrap();
        assert!(!f_membership(&real, &pauli_y()).member);
        assert!(f_membership(&real, &pauli_x()).member);
    }

    #[test]
    fn projection_is_idempotent_on_members() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let alg = GradedMatrixAlgebra::new(4, Grading::Inner(pauli_z().kron(&ComplexMatrix::identity(2))), Some(AntiLinearOp::conjugation(4))).unwrap();
        let space = alg.constraints();
        for _ in 0..5 {
            let x = space.random_element(&mut rng).unwrap();
            let p = space.project(x.matrix()).unwrap();
            assert!((&p - x.matrix()).norm() < TOL);
            let r = space.retract(x.matrix()).unwrap();
            assert!((&r - x.matrix()).norm() < 1e-10);
        }
    }

    #[test]
    fn direct_sum_preserves_membership() {
        let alg = GradedMatrixAlgebra::new(2, Grading::Inner(pauli_z()), None).unwrap();
        let s = alg.constraints();
        let x = s.element(pauli_x()).unwrap();
        let y = s.element(pauli_y()).unwrap();
        let (xy, big) = direct_sum(&x, &s, &y, &s).unwrap();
        assert!(big.membership(xy.matrix()).member);
        assert_eq!(xy.matrix(), &pauli_x().direct_sum(&pauli_y()));
        let other = ConstraintSet::new(2, vec![]);
        assert!(matches!(s.direct_sum(&other), Err(HomotopyError::GradingMismatch(_))));
    }

    #[test]
    fn rotation_path_stays_in_f() {
        let alg = GradedMatrixAlgebra::new(1, Grading::Trivial, None).unwrap();
        let r = canonical_reference(&alg).unwrap();
        let space = r.algebra.constraints();
        let doubled = space.direct_sum(&space).unwrap();
        let path = rotation_path(r.e.matrix(), 40);
        assert!(validate_path(&doubled, &path, 0.2).is_ok());
        let end = (-r.e.matrix()).direct_sum(r.e.matrix());
        assert!((path.last().unwrap() - &end).norm() < 1e-12);
    }

    #[test]
    fn canonical_reference_for_scalars() {
        let alg = GradedMatrixAlgebra::new(1, Grading::Trivial, None).unwrap();
        let r = canonical_reference(&alg).unwrap();
        let e = r.e.matrix();
        assert_eq!(e.nrows(), 4);
        assert!((&(e * e) - &ComplexMatrix::identity(4)).norm() < TOL);
        let g = r.algebra.grading_matrix();
        let twice = &(&g * &(&(&g * e) * &g)) * &g;
        assert!((&twice - e).norm() < TOL);
        let space = r.algebra.constraints();
        let minus = space.element(-e).unwrap();
        let res = homotopy_oracle(&space, &r.e, &minus, &OracleConfig::default());
        let OracleResult::Connected { path, .. } = res else { panic!("e and −e not connected") };
        assert!(validate_path(&space, &path, 0.2).is_ok());
    }

    #[test]
    fn canonical_reference_with_real_structure() {
        let alg = GradedMatrixAlgebra::new(2, Grading::Inner(pauli_z()), Some(AntiLinearOp::new(i_sigma_y()).unwrap())).unwrap();
        let r = canonical_reference(&alg).unwrap();
        assert!(r.algebra.constraints().membership(r.e.matrix()).member);
    }

    #[test]
    fn oracle_trivial_and_rank_cases() {
        let space = class_a(3);
        let x = space.element(ComplexMatrix::real_diag(&[1.0, -1.0, 1.0])).unwrap();
        assert!(homotopy_oracle(&space, &x, &x, &OracleConfig::default()).is_connected());
        let y = space.element(ComplexMatrix::real_diag(&[-1.0, -1.0, 1.0])).unwrap();
        assert_ne!(negatives(x.matrix()), negatives(y.matrix()));
        let cfg = OracleConfig { budget: 5, ..OracleConfig::default() };
        assert!(!homotopy_oracle(&space, &x, &y, &cfg).is_connected());
    }

    #[test]
    fn oracle_connects_equal_ranks() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let space = class_a(3);
        let mut done = 0;
        while done < 5 {
            let x = space.random_element(&mut rng).unwrap();
            let y = space.random_element(&mut rng).unwrap();
            if negatives(x.matrix()) != negatives(y.matrix()) {
                continue;
            }
            let res = homotopy_oracle(&space, &x, &y, &OracleConfig::default());
            let OracleResult::Connected { path, stabilized } = res else { panic!("not connected") };
            if !stabilized {
                assert!(validate_path(&space, &path, 0.2).is_ok());
                assert_eq!(path.first().unwrap(), x.matrix());
                assert_eq!(path.last().unwrap(), y.matrix());
            }
            done += 1;
        }
    }

    #[test]
    fn complex_grading_rejects_incompatible_real_structure() {
        // conj maps iσ_y-type grading generator Γ = σ_y to −σ_y, allowed;
        // a generic K need not preserve Γ up to sign
        let g = pauli_y();
        let k = AntiLinearOp::new(ComplexMatrix::from_rows(&[
            vec![I.scale(0.6) + 0.8, crate::linalg::ZERO],
            vec![crate::linalg::ZERO, crate::linalg::ONE],
        ]))
        .unwrap();
        assert!(GradedMatrixAlgebra::new(2, Grading::Inner(g.clone()), Some(AntiLinearOp::conjugation(2))).is_ok());
        assert!(GradedMatrixAlgebra::new(2, Grading::Inner(g), Some(k)).is_err());
    }
}
