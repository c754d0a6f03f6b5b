//! The tenfold table, the reduction pipeline from a BdG Hamiltonian with
//! declared symmetries to its reduced form, sign-based class derivation,
//! zero-dimensional invariants and seeded random instances.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use thiserror::Error;

use crate::homotopy::{ConstraintSet, HomotopyError, Relation};
use crate::linalg::{
    i_sigma_y, pauli_z, pfaffian, random_hermitian, AntiLinearOp, ComplexMatrix, LinalgError,
    Operator, DET_TOL, I, ONE, TOL,
};
use crate::nambu::{BdGHamiltonian, NambuSpace};
use crate::symmetry::{
    chiral_generator, quaternionic_factor, relative_signs, SpinReduction, SymmetryError,
    SymmetryKind, SymmetryOperator,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ClassifyError {
    #[error("symmetry set {0} is not one of the ten admissible sets")]
    Inadmissible(String),
    #[error("{what} is violated (relative residual {residual:.3e})")]
    SymmetryViolated { what: String, residual: f64 },
    #[error("structural check failed: {0}")]
    StructuralFailure(String),
    #[error("derived signs {derived} disagree with the table entry {expected}")]
    SignMismatch { expected: String, derived: String },
    #[error("Hamiltonian is not gapped")]
    Gapless,
    #[error("Hamiltonian is not flattened")]
    NotFlattened,
    #[error("odd number ({0}) of negative eigenvalues despite Kramers degeneracy")]
    KramersViolation(usize),
    #[error("unknown class {0}")]
    UnknownClass(String),
    #[error(transparent)]
    Symmetry(#[from] SymmetryError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Homotopy(#[from] HomotopyError),
}

pub type Result<T> = std::result::Result<T, ClassifyError>;

/// A subset of `{TRS, SRS, Q, PHS}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct SymmetrySet {
    pub trs: bool,
    pub srs: bool,
    pub q: bool,
    pub phs: bool,
}

impl SymmetrySet {
    pub const fn new(trs: bool, srs: bool, q: bool, phs: bool) -> Self {
        Self { trs, srs, q, phs }
    }

    pub fn names(&self) -> Vec<&'static str> {
        let mut v = Vec::new();
        if self.srs {
            v.push("SRS");
        }
        if self.trs {
            v.push("TRS");
        }
        if self.q {
            v.push("Q");
        }
        if self.phs {
            v.push("PHS");
        }
        v
    }

    /// `"SRS+TRS+Q"` style, `"none"` for the empty set.
    pub fn joined(&self) -> String {
        let v = self.names();
        if v.is_empty() {
            "none".into()
        } else {
            v.join("+")
        }
    }

    /// Parses names such as `"TRS"`, `"srs"`, `"Q"`, `"PHS"`.
    pub fn from_names<S: AsRef<str>>(names: &[S]) -> std::result::Result<Self, String> {
        let mut s = Self::default();
        for n in names {
            let flag = match n.as_ref().trim().to_ascii_uppercase().as_str() {
                "TRS" | "T" => &mut s.trs,
                "SRS" | "SPIN" => &mut s.srs,
                "Q" | "CHARGE" | "U1" => &mut s.q,
                "PHS" | "L" => &mut s.phs,
                other => return Err(format!("unknown symmetry {other:?}")),
            };
            if *flag {
                return Err(format!("symmetry {} listed twice", n.as_ref()));
            }
            *flag = true;
        }
        Ok(s)
    }
}

impl fmt::Display for SymmetrySet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.names().join(", "))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Cartan {
    D,
    DIII,
    AII,
    CII,
    C,
    CI,
    AI,
    BDI,
    A,
    AIII,
}

impl Cartan {
    pub const ALL: [Cartan; 10] = [
        Cartan::D,
        Cartan::DIII,
        Cartan::AII,
        Cartan::CII,
        Cartan::C,
        Cartan::CI,
        Cartan::AI,
        Cartan::BDI,
        Cartan::A,
        Cartan::AIII,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Cartan::D => "D",
            Cartan::DIII => "DIII",
            Cartan::AII => "AII",
            Cartan::CII => "CII",
            Cartan::C => "C",
            Cartan::CI => "CI",
            Cartan::AI => "AI",
            Cartan::BDI => "BDI",
            Cartan::A => "A",
            Cartan::AIII => "AIII",
        }
    }

    pub fn row(self) -> &'static TableRow {
        TABLE.iter().find(|r| r.cartan == self).expect("every class has a row")
    }
}

impl fmt::Display for Cartan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for Cartan {
    type Err = ClassifyError;

    fn from_str(s: &str) -> Result<Self> {
        Cartan::ALL
            .into_iter()
            .find(|c| c.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| ClassifyError::UnknownClass(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Series {
    /// Real K-theory, index mod 8.
    KO,
    /// Complex K-theory, index mod 2.
    KU,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Chiral {
    None,
    /// Grading generator fixed by the time-reversal real structure.
    Real,
    /// Grading generator negated by the time-reversal real structure.
    Imaginary,
    /// Inner grading without a time-reversal real structure.
    Inner,
}

/// The abstract relation data a class reduces to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AbstractView {
    pub trs_sign: Option<i8>,
    pub phs_sign: Option<i8>,
    pub chiral: Chiral,
}

impl fmt::Display for AbstractView {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = |s: Option<i8>| match s {
            Some(1) => "+1",
            Some(_) => "-1",
            None => "none",
        };
        let chiral = match self.chiral {
            Chiral::None => "none",
            Chiral::Real => "real",
            Chiral::Imaginary => "imaginary",
            Chiral::Inner => "inner",
        };
        write!(f, "TRS {}, PHS {}, chiral {}", sign(self.trs_sign), sign(self.phs_sign), chiral)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Group {
    Z,
    Z2,
    Zero,
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Group::Z => "Z",
            Group::Z2 => "Z2",
            Group::Zero => "0",
        })
    }
}

/// `KO_i(ℝ)` for `i = 0..8`.
pub const KO_GROUPS: [Group; 8] = [
    Group::Z,
    Group::Z2,
    Group::Z2,
    Group::Zero,
    Group::Z,
    Group::Zero,
    Group::Zero,
    Group::Zero,
];

/// `KU_i(ℂ)` for `i = 0, 1`.
pub const KU_GROUPS: [Group; 2] = [Group::Z, Group::Zero];

pub fn k_group(series: Series, index: u8) -> Group {
    match series {
        Series::KO => KO_GROUPS[(index % 8) as usize],
        Series::KU => KU_GROUPS[(index % 2) as usize],
    }
}

/// Tensoring with the quaternions shifts real K-theory by four.
pub fn shift_by_quaternions(index: u8) -> u8 {
    (index + 4) % 8
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TableRow {
    pub cartan: Cartan,
    /// Position in the real Bott clock (`0..8`), or `0, 1` for the
    /// complex classes.
    pub s: u8,
    pub symmetries: SymmetrySet,
    pub series: Series,
    pub index: u8,
    pub view: AbstractView,
}

const fn view(trs: Option<i8>, phs: Option<i8>, chiral: Chiral) -> AbstractView {
    AbstractView {
        trs_sign: trs,
        phs_sign: phs,
        chiral,
    }
}

pub const TABLE: [TableRow; 10] = [
    TableRow {
        cartan: Cartan::D,
        s: 0,
        symmetries: SymmetrySet::new(false, false, false, false),
        series: Series::KO,
        index: 2,
        view: view(None, Some(1), Chiral::None),
    },
    TableRow {
        cartan: Cartan::DIII,
        s: 1,
        symmetries: SymmetrySet::new(true, false, false, false),
        series: Series::KO,
        index: 3,
        view: view(Some(-1), Some(1), Chiral::Imaginary),
    },
    TableRow {
        cartan: Cartan::AII,
        s: 2,
        symmetries: SymmetrySet::new(true, false, true, false),
        series: Series::KO,
        index: 4,
        view: view(Some(-1), None, Chiral::None),
    },
    TableRow {
        cartan: Cartan::CII,
        s: 3,
        symmetries: SymmetrySet::new(true, false, true, true),
        series: Series::KO,
        index: 5,
        view: view(Some(-1), Some(-1), Chiral::Real),
    },
    TableRow {
        cartan: Cartan::C,
        s: 4,
        symmetries: SymmetrySet::new(false, true, false, false),
        series: Series::KO,
        index: 6,
        view: view(None, Some(-1), Chiral::None),
    },
    TableRow {
        cartan: Cartan::CI,
        s: 5,
        symmetries: SymmetrySet::new(true, true, false, false),
        series: Series::KO,
        index: 7,
        view: view(Some(1), Some(-1), Chiral::Imaginary),
    },
    TableRow {
        cartan: Cartan::AI,
        s: 6,
        symmetries: SymmetrySet::new(true, true, true, false),
        series: Series::KO,
        index: 0,
        view: view(Some(1), None, Chiral::None),
    },
    TableRow {
        cartan: Cartan::BDI,
        s: 7,
        symmetries: SymmetrySet::new(true, true, true, true),
        series: Series::KO,
        index: 1,
        view: view(Some(1), Some(1), Chiral::Real),
    },
    TableRow {
        cartan: Cartan::A,
        s: 0,
        symmetries: SymmetrySet::new(false, false, true, false),
        series: Series::KU,
        index: 0,
        view: view(None, None, Chiral::None),
    },
    TableRow {
        cartan: Cartan::AIII,
        s: 1,
        symmetries: SymmetrySet::new(false, false, true, true),
        series: Series::KU,
        index: 1,
        view: view(None, None, Chiral::Inner),
    },
];

/// A resolved class.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassLabel {
    pub cartan: Cartan,
    pub s: u8,
    pub series: Series,
    pub index: u8,
    pub symmetries: SymmetrySet,
    pub view: AbstractView,
}

impl ClassLabel {
    pub fn group(&self) -> Group {
        k_group(self.series, self.index)
    }

    pub fn k_theory(&self) -> String {
        match self.series {
            Series::KO => format!("KO_{}", self.index),
            Series::KU => format!("KU_{}", self.index),
        }
    }
}

impl From<&TableRow> for ClassLabel {
    fn from(r: &TableRow) -> Self {
        Self {
            cartan: r.cartan,
            s: r.s,
            series: r.series,
            index: r.index,
            symmetries: r.symmetries,
            view: r.view,
        }
    }
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({}, {})", self.cartan, self.k_theory(), self.group())
    }
}

pub fn classify_set(set: SymmetrySet) -> Result<ClassLabel> {
    TABLE
        .iter()
        .find(|r| r.symmetries == set)
        .map(ClassLabel::from)
        .ok_or_else(|| ClassifyError::Inadmissible(set.to_string()))
}

/// K-theory position of an abstract relation set.
pub fn translate_abstract(v: &AbstractView) -> Option<(Series, u8)> {
    let neg = |s: i8| s < 0;
    match (v.trs_sign, v.phs_sign, v.chiral) {
        (None, None, Chiral::None) => Some((Series::KU, 0)),
        (None, None, Chiral::Inner) => Some((Series::KU, 1)),
        (Some(t), _, Chiral::None) => Some((Series::KO, if neg(t) { 4 } else { 0 })),
        (None, Some(p), Chiral::None) => Some((Series::KO, if neg(p) { 6 } else { 2 })),
        (Some(t), _, Chiral::Real) => Some((Series::KO, if neg(t) { 5 } else { 1 })),
        (Some(t), _, Chiral::Imaginary) => Some((Series::KO, if neg(t) { 3 } else { 7 })),
        _ => None,
    }
}

/// Which reduction produced the reduced Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    /// Full Nambu space `W`.
    Nambu,
    /// Quaternionic factor `W⁺` after spin rotation.
    Quaternionic,
    /// Charge reduction to `V`.
    Charge,
    /// Charge and spin reduction to `V⁺`.
    ChargeSpin,
}

/// A Hamiltonian after reduction, with the residual relations and the
/// operators entering sign computations.
#[derive(Debug, Clone)]
pub struct Reduced {
    pub stage: Stage,
    pub h: ComplexMatrix,
    pub relations: Vec<Relation>,
    /// Reference real structure signs are measured against.
    pub reference: Option<AntiLinearOp>,
    pub trs: Option<AntiLinearOp>,
    pub phs: Option<AntiLinearOp>,
    pub chiral: Option<ComplexMatrix>,
}

impl Reduced {
    pub fn constraints(&self) -> ConstraintSet {
        ConstraintSet::new(self.h.nrows(), self.relations.clone())
    }

    /// Residual of the worst relation, relative to `‖h‖`.
    pub fn max_relation_residual(&self) -> Result<f64> {
        let scale = self.h.norm().max(1.0);
        let mut worst = 0.0f64;
        for r in &self.relations {
            worst = worst.max(r.residual(&self.h)? / scale);
        }
        Ok(worst)
    }
}

/// Operators of a declared symmetry list, sorted by kind.
#[derive(Debug, Clone, Default)]
pub struct DeclaredOps {
    pub trs: Option<AntiLinearOp>,
    pub spin: Option<[ComplexMatrix; 3]>,
    pub phs: Option<ComplexMatrix>,
    pub set: SymmetrySet,
}

fn structural(msg: impl Into<String>) -> ClassifyError {
    ClassifyError::StructuralFailure(msg.into())
}

impl DeclaredOps {
    pub fn from_operators(n: usize, ops: &[SymmetryOperator]) -> Result<Self> {
        let mut d = DeclaredOps::default();
        let mut spins: [Option<ComplexMatrix>; 3] = [None, None, None];
        for op in ops {
            if op.op.dim() != n && op.kind != SymmetryKind::Q {
                return Err(structural(format!("{:?} acts on dimension {}, expected {n}", op.kind, op.op.dim())));
            }
            match (&op.kind, &op.op) {
                (SymmetryKind::Trs, Operator::AntiLinear(t)) if d.trs.is_none() => d.trs = Some(t.clone()),
                (SymmetryKind::Srs(mu @ 1..=3), Operator::Linear(j)) if spins[(*mu - 1) as usize].is_none() => {
                    spins[(*mu - 1) as usize] = Some(j.clone())
                }
                (SymmetryKind::Q, _) if !d.set.q => d.set.q = true,
                (SymmetryKind::Phs, Operator::Linear(s)) if d.phs.is_none() => d.phs = Some(s.clone()),
                (k, _) => return Err(structural(format!("unexpected or repeated symmetry {k:?}"))),
            }
        }
        match spins {
            [None, None, None] => {}
            [Some(a), Some(b), Some(c)] => d.spin = Some([a, b, c]),
            _ => return Err(structural("spin rotation needs all three generators")),
        }
        d.set.trs = d.trs.is_some();
        d.set.srs = d.spin.is_some();
        d.set.phs = d.phs.is_some();
        d.check(n)?;
        Ok(d)
    }

    /// Pairwise relations the declared operators must satisfy.
    fn check(&self, n: usize) -> Result<()> {
        let close = |a: &ComplexMatrix, b: &ComplexMatrix| (a - b).norm() < TOL * (n.max(1) as f64);
        if let Some(t) = &self.trs {
            if !t.is_unitary() {
                return Err(structural("T is not anti-unitary"));
            }
            if !t.is_quaternionic() {
                return Err(structural("T does not square to -1"));
            }
        }
        if let Some([j1, j2, j3]) = &self.spin {
            for j in [j1, j2, j3] {
                if !j.is_unitary() || !close(&j.adjoint(), &-j) {
                    return Err(structural("spin generators must be anti-self-adjoint unitaries"));
                }
            }
            let pairs = [(j1, j2, j3), (j2, j3, j1), (j3, j1, j2)];
            for (a, b, c) in pairs {
                if !close(&b.commutator(a), &c.scale_real(2.0)) {
                    return Err(structural("spin generators violate the su(2) relations"));
                }
            }
            if let Some(t) = &self.trs {
                for j in [j1, j2, j3] {
                    if !close(&t.conjugate(j), j) {
                        return Err(structural("T does not commute with spin rotations"));
                    }
                }
            }
            if let Some(s) = &self.phs {
                for j in [j1, j2, j3] {
                    if !close(&s.commutator(j), &ComplexMatrix::zeros(n, n)) {
                        return Err(structural("S does not commute with spin rotations"));
                    }
                }
            }
        }
        if let Some(s) = &self.phs {
            if !s.is_unitary() || !close(&(s * s), &ComplexMatrix::identity(n)) {
                return Err(structural("S must be a unitary involution"));
            }
            if let Some(t) = &self.trs {
                if !close(&t.conjugate(s), s) {
                    return Err(structural("S does not commute with T"));
                }
            }
        }
        Ok(())
    }
}

/// Relations on `W` encoding `H` together with a symmetry list.
pub fn nambu_relations(n: usize, ops: &[SymmetryOperator]) -> Vec<Relation> {
    let mut rels = vec![Relation::antilinear("imaginary for γ", NambuSpace::new(n).gamma(), -1)];
    for op in ops {
        rels.push(Relation::new(format!("{:?}", op.kind), op.lifted.clone(), op.relation_sign));
    }
    rels
}

/// Checks every declared symmetry against `b` (relative residual below
/// `DET_TOL`).
pub fn check_residuals(b: &BdGHamiltonian, ops: &[SymmetryOperator]) -> Result<Vec<(String, f64)>> {
    let h = b.full();
    let scale = h.norm().max(1.0);
    let mut out = Vec::new();
    for op in ops {
        let r = op.residual(h)? / scale;
        let what = match op.kind {
            SymmetryKind::Trs => "TRS".to_string(),
            SymmetryKind::Srs(mu) => format!("SRS j{mu}"),
            SymmetryKind::Q => "Q".to_string(),
            SymmetryKind::Phs => "PHS".to_string(),
        };
        if r >= DET_TOL {
            return Err(ClassifyError::SymmetryViolated { what, residual: r });
        }
        out.push((what, r));
    }
    Ok(out)
}

fn antilinear(m: ComplexMatrix) -> Result<AntiLinearOp> {
    Ok(AntiLinearOp::new(m)?)
}

/// Reduces `b` according to the declared symmetries.
pub fn reduce_pipeline(b: &BdGHamiltonian, decl: &DeclaredOps) -> Result<Reduced> {
    let nambu = b.nambu();
    let gamma = nambu.gamma();
    let set = decl.set;
    classify_set(set)?;
    let spin_lift = |j: &[ComplexMatrix; 3]| j.clone().map(|x| crate::symmetry::lift_linear(&x));

    if !set.q {
        let t_tilde = match &decl.trs {
            Some(t) => Some(crate::symmetry::lift_trs(&nambu, t)?),
            None => None,
        };
        let Some(spin) = &decl.spin else {
            // D, DIII
            let mut relations = vec![Relation::antilinear("imaginary for γ", gamma.clone(), -1)];
            let mut chiral = None;
            if let Some(tt) = &t_tilde {
                relations.push(Relation::antilinear("TRS", tt.clone(), 1));
                chiral = Some(chiral_generator(&gamma, tt)?);
            }
            return Ok(Reduced {
                stage: Stage::Nambu,
                h: b.full().clone(),
                relations,
                reference: Some(gamma.clone()),
                trs: t_tilde,
                phs: Some(gamma),
                chiral,
            });
        };
        // C, CI
        let jt = spin_lift(spin);
        let qf = quaternionic_factor(&nambu, &jt)?;
        if qf.gamma_plus_square != -1 {
            return Err(structural("restricted γ is not quaternionic"));
        }
        let z = qf.reduce(b.full())?;
        let m = qf.half_dim();
        let id2 = ComplexMatrix::identity(2);
        let mut relations = vec![Relation::antilinear("imaginary for γ⁺", qf.gamma_plus.clone(), -1)];
        let phs = antilinear(id2.kron(qf.gamma_plus.mat()))?;
        let (mut trs, mut chiral) = (None, None);
        if let Some(tt) = &t_tilde {
            let g = chiral_generator(&gamma, tt)?;
            let gp = &(&qf.basis.adjoint() * &g) * &qf.basis;
            if (&qf.chi(&g) - &id2.kron(&gp)).norm() >= 1e-9 {
                return Err(structural("chiral generator does not commute with spin rotations"));
            }
            relations.push(Relation::linear("chiral Γ⁺", gp.clone(), -1));
            let k = antilinear(qf.gamma_plus.mat() * &gp.conj())?;
            trs = Some(antilinear(id2.kron(k.mat()))?);
            chiral = Some(id2.kron(&gp));
        }
        debug_assert_eq!(z.nrows(), m);
        return Ok(Reduced {
            stage: Stage::Quaternionic,
            h: z,
            relations,
            reference: Some(qf.gamma_factorized()),
            trs,
            phs: Some(phs),
            chiral,
        });
    }

    let p = crate::symmetry::charge_reduce(b)?;
    let (h, trs, chiral, stage) = match &decl.spin {
        None => (p, decl.trs.clone(), decl.phs.clone(), Stage::Charge),
        Some(spin) => {
            let sr = SpinReduction::new(spin)?;
            let z = sr.compress(&p);
            let trs = match &decl.trs {
                Some(t) => Some(sr.reduce_trs(&spin[0], t)?),
                None => None,
            };
            let chiral = decl.phs.as_ref().map(|s| sr.compress(s));
            (z, trs, chiral, Stage::ChargeSpin)
        }
    };
    let dim = h.nrows();
    let mut relations = Vec::new();
    if let Some(t) = &trs {
        relations.push(Relation::antilinear("TRS", t.clone(), 1));
    }
    if let Some(s) = &chiral {
        relations.push(Relation::linear("chiral S", s.clone(), -1));
    }
    let phs = match (&trs, &chiral) {
        (Some(t), Some(s)) => Some(t.after_linear(s)?),
        _ => None,
    };
    Ok(Reduced {
        stage,
        h,
        relations,
        reference: trs.as_ref().map(|_| AntiLinearOp::conjugation(dim)),
        trs,
        phs,
        chiral,
    })
}

/// Recomputes the abstract view from the operators of a reduction.
pub fn derive_view(red: &Reduced) -> Result<AbstractView> {
    let sign = |k: &Option<AntiLinearOp>| -> Result<Option<i8>> {
        match (k, &red.reference) {
            (Some(k), Some(f)) => Ok(Some(relative_signs(k, f, None)?.eta1)),
            _ => Ok(None),
        }
    };
    let trs_sign = sign(&red.trs)?;
    let phs_sign = sign(&red.phs)?;
    let chiral = match (&red.chiral, &red.trs) {
        (None, _) => Chiral::None,
        (Some(_), None) => Chiral::Inner,
        (Some(g), Some(t)) => {
            let tg = t.conjugate(g);
            let tol = 1e-9 * g.norm().max(1.0);
            if (&tg - g).norm() < tol {
                Chiral::Real
            } else if (&tg + g).norm() < tol {
                Chiral::Imaginary
            } else {
                return Err(structural("chiral generator is neither real nor imaginary"));
            }
        }
    };
    if let (Some(t), Some(p), Some(_)) = (trs_sign, phs_sign, &red.chiral) {
        let expect = if chiral == Chiral::Real { t } else { -t };
        if p != expect {
            return Err(structural("sign of the composite particle-hole map is inconsistent"));
        }
    }
    Ok(AbstractView {
        trs_sign,
        phs_sign,
        chiral,
    })
}

/// Outcome of [`derive_label_from_operators`].
#[derive(Debug, Clone)]
pub struct Derivation {
    pub label: ClassLabel,
    pub derived: AbstractView,
    pub reduced: Reduced,
    pub residuals: Vec<(String, f64)>,
}

/// Validates the symmetries, reduces, recomputes the relative signs and
/// checks the result against the table.
pub fn derive_label_from_operators(b: &BdGHamiltonian, ops: &[SymmetryOperator]) -> Result<Derivation> {
    let decl = DeclaredOps::from_operators(b.modes(), ops)?;
    let label = classify_set(decl.set)?;
    let residuals = check_residuals(b, ops)?;
    let reduced = reduce_pipeline(b, &decl)?;
    let derived = derive_view(&reduced)?;
    let position = translate_abstract(&derived);
    if derived != label.view || position != Some((label.series, label.index)) {
        return Err(ClassifyError::SignMismatch {
            expected: label.view.to_string(),
            derived: derived.to_string(),
        });
    }
    Ok(Derivation {
        label,
        derived,
        reduced,
        residuals,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InvariantValue {
    pub group: Group,
    pub value: i64,
}

impl fmt::Display for InvariantValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.group {
            Group::Zero => f.write_str("0"),
            g => write!(f, "{} in {g}", self.value),
        }
    }
}

fn count_negative(h: &ComplexMatrix) -> Result<usize> {
    let vals = h.eigenvalues_hermitian()?;
    if vals.iter().any(|v| v.abs() < DET_TOL) {
        return Err(ClassifyError::Gapless);
    }
    Ok(vals.iter().filter(|&&v| v < 0.0).count())
}

fn require_flat(h: &ComplexMatrix) -> Result<()> {
    let n = h.nrows();
    if (&(h * h) - &ComplexMatrix::identity(n)).norm() >= 1e-9 * (n.max(1) as f64) {
        return Err(ClassifyError::NotFlattened);
    }
    Ok(())
}

/// Majorana transform `U` on `W`; `i·U†HU` is real antisymmetric for every
/// BdG Hamiltonian `H`.
pub fn majorana_basis(n: usize) -> ComplexMatrix {
    let s = 1.0 / 2f64.sqrt();
    let mut u = ComplexMatrix::zeros(2 * n, 2 * n);
    for k in 0..n {
        u[(k, k)] = ONE * s;
        u[(n + k, k)] = ONE * s;
        u[(k, n + k)] = I * s;
        u[(n + k, n + k)] = -I * s;
    }
    u
}

fn majorana_pfaffian_sign(h: &ComplexMatrix) -> Result<i8> {
    let n = h.nrows() / 2;
    let u = majorana_basis(n);
    let a = (&(&u.adjoint() * h) * &u).scale(I);
    let imag = a.map(|z| num_complex::Complex64::new(z.im, 0.0)).norm();
    if imag >= 1e-9 * a.norm().max(1.0) || !a.is_antisymmetric() {
        return Err(structural("Majorana form is not real antisymmetric"));
    }
    let pf = pfaffian(&a)?.re;
    if pf.abs() < DET_TOL {
        return Err(ClassifyError::Gapless);
    }
    Ok(if pf > 0.0 { 1 } else { -1 })
}

/// Class D parity: `0` when the Pfaffian sign matches the vacuum
/// Hamiltonian `diag(1, −1)`, `1` otherwise.
pub fn pfaffian_parity(h: &ComplexMatrix) -> Result<i64> {
    let n = h.nrows() / 2;
    let reference = ComplexMatrix::identity(n).direct_sum(&-ComplexMatrix::identity(n));
    Ok((majorana_pfaffian_sign(h)? != majorana_pfaffian_sign(&reference)?) as i64)
}

/// Orthonormal basis of `T`-fixed vectors adapted to `S = ±1`, ordered
/// `S = +1` first. Depends on the operators only.
pub fn real_chiral_frame(t: &AntiLinearOp, s: &ComplexMatrix) -> Result<(ComplexMatrix, usize)> {
    let d = t.dim();
    if !t.is_real_structure() {
        return Err(structural("T does not square to +1 on the reduced space"));
    }
    let id = ComplexMatrix::identity(d);
    let mut frames = Vec::new();
    for sign in [1.0, -1.0] {
        let proj = (&id + &s.scale_real(sign)).scale_real(0.5);
        let mut basis: Vec<Vec<num_complex::Complex64>> = Vec::new();
        for k in 0..d {
            for phase in [ONE, I] {
                let mut e = vec![num_complex::Complex64::new(0.0, 0.0); d];
                e[k] = phase;
                let te = t.apply(&e);
                let fixed: Vec<_> = e.iter().zip(&te).map(|(a, b)| a + b).collect();
                let mut v = proj.apply(&fixed);
                for b in &basis {
                    let c: num_complex::Complex64 = b.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
                    for (vi, bi) in v.iter_mut().zip(b) {
                        *vi -= c * bi;
                    }
                }
                let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                if norm > 1e-6 {
                    basis.push(v.into_iter().map(|z| z / norm).collect());
                }
            }
        }
        frames.push(basis);
    }
    let plus = frames[0].len();
    let cols: Vec<_> = frames.into_iter().flatten().collect();
    if cols.len() != d {
        return Err(structural("T-fixed vectors do not span the space"));
    }
    Ok((ComplexMatrix::from_columns(d, &cols), plus))
}

/// Class BDI: `1` when the off-diagonal block in the real chiral frame has
/// negative determinant.
pub fn det_sign_bit(h: &ComplexMatrix, t: &AntiLinearOp, s: &ComplexMatrix) -> Result<i64> {
    let (f, plus) = real_chiral_frame(t, s)?;
    let d = h.nrows();
    if 2 * plus != d {
        return Err(ClassifyError::Gapless);
    }
    let hf = &(&f.adjoint() * h) * &f;
    let block = hf.block(0, plus, plus, plus);
    let imag = block.map(|z| num_complex::Complex64::new(z.im, 0.0)).norm();
    if imag >= 1e-9 * block.norm().max(1.0) {
        return Err(structural("chiral block is not real in the T frame"));
    }
    let det = block.determinant()?.re;
    if det.abs() < DET_TOL {
        return Err(ClassifyError::Gapless);
    }
    Ok((det < 0.0) as i64)
}

/// Zero-dimensional invariant of a reduced, flattened Hamiltonian.
pub fn invariant_value(label: &ClassLabel, red: &Reduced) -> Result<InvariantValue> {
    let h = &red.h;
    require_flat(h)?;
    let group = label.group();
    let value = match label.cartan {
        Cartan::A | Cartan::AI => count_negative(h)? as i64,
        Cartan::AII => {
            let k = count_negative(h)?;
            if k % 2 == 1 {
                return Err(ClassifyError::KramersViolation(k));
            }
            (k / 2) as i64
        }
        Cartan::D => pfaffian_parity(h)?,
        Cartan::BDI => {
            let (Some(t), Some(s)) = (&red.trs, &red.chiral) else {
                return Err(structural("class BDI needs T and S after reduction"));
            };
            det_sign_bit(h, t, s)?
        }
        _ => 0,
    };
    Ok(InvariantValue { group, value })
}

/// Classification plus invariant of a BdG Hamiltonian, flattening first.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub derivation: Derivation,
    pub invariant: InvariantValue,
}

pub fn analyze(b: &BdGHamiltonian, ops: &[SymmetryOperator]) -> Result<Analysis> {
    if !b.is_gapped() {
        return Err(ClassifyError::Gapless);
    }
    let flat = b.flatten().map_err(|_| ClassifyError::Gapless)?;
    let derivation = derive_label_from_operators(&flat, ops)?;
    let invariant = invariant_value(&derivation.label, &derivation.reduced)?;
    Ok(Analysis {
        derivation,
        invariant,
    })
}

/// Fixed operators and constraint space for random members of one class.
#[derive(Debug, Clone)]
pub struct ClassInstance {
    pub cartan: Cartan,
    pub modes: usize,
    pub ops: Vec<SymmetryOperator>,
    pub space: ConstraintSet,
}

impl ClassInstance {
    pub fn new(cartan: Cartan) -> Result<Self> {
        let t2 = || AntiLinearOp::new(i_sigma_y());
        let t4 = || AntiLinearOp::new(ComplexMatrix::identity(2).kron(&i_sigma_y()));
        let s4 = || pauli_z().kron(&ComplexMatrix::identity(2));
        let mut ops = Vec::new();
        let modes = match cartan {
            Cartan::D => 2,
            Cartan::DIII => {
                ops.push(SymmetryOperator::trs(t2()?)?);
                2
            }
            Cartan::AII => {
                ops.push(SymmetryOperator::trs(t4()?)?);
                ops.push(SymmetryOperator::charge(4));
                4
            }
            Cartan::CII => {
                ops.push(SymmetryOperator::trs(t4()?)?);
                ops.push(SymmetryOperator::charge(4));
                ops.push(SymmetryOperator::phs(s4())?);
                4
            }
            Cartan::C => {
                ops.extend(SymmetryOperator::spin(4)?);
                4
            }
            Cartan::CI => {
                ops.push(SymmetryOperator::trs(t4()?)?);
                ops.extend(SymmetryOperator::spin(4)?);
                4
            }
            Cartan::AI => {
                ops.push(SymmetryOperator::trs(t4()?)?);
                ops.extend(SymmetryOperator::spin(4)?);
                ops.push(SymmetryOperator::charge(4));
                4
            }
            Cartan::BDI => {
                ops.push(SymmetryOperator::trs(t4()?)?);
                ops.extend(SymmetryOperator::spin(4)?);
                ops.push(SymmetryOperator::charge(4));
                ops.push(SymmetryOperator::phs(s4())?);
                4
            }
            Cartan::A => {
                ops.push(SymmetryOperator::charge(3));
                3
            }
            Cartan::AIII => {
                ops.push(SymmetryOperator::charge(4));
                ops.push(SymmetryOperator::phs(s4())?);
                4
            }
        };
        let space = ConstraintSet::new(2 * modes, nambu_relations(modes, &ops));
        Ok(Self {
            cartan,
            modes,
            ops,
            space,
        })
    }

    /// A random flattened Hamiltonian of this class.
    pub fn sample(&self, rng: &mut impl Rng) -> Result<BdGHamiltonian> {
        for _ in 0..100 {
            let h = random_hermitian(rng, 2 * self.modes);
            if let Some(flat) = self.space.retract(&h) {
                return Ok(BdGHamiltonian::from_full(flat.hermitian_part())
                    .map_err(|_| structural("sample is not of BdG form"))?);
            }
        }
        Err(ClassifyError::Gapless)
    }

    /// A random element of the commutant of the symmetries, scaled to
    /// operator norm `eps`.
    pub fn perturbation(&self, rng: &mut impl Rng, eps: f64) -> Result<ComplexMatrix> {
        let h = self.space.project(&random_hermitian(rng, 2 * self.modes))?;
        let n = h.op_norm();
        Ok(if n > 0.0 { h.scale_real(eps / n) } else { h })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::FockSpace;
    use crate::linalg::random_antisymmetric;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn table_is_consistent_with_translation() {
        for row in &TABLE {
            assert_eq!(translate_abstract(&row.view), Some((row.series, row.index)), "{}", row.cartan);
            assert_eq!(classify_set(row.symmetries).unwrap().cartan, row.cartan);
        }
        let groups: Vec<_> = TABLE.iter().map(|r| k_group(r.series, r.index)).collect();
        use Group::*;
        assert_eq!(groups, vec![Z2, Zero, Z, Zero, Zero, Zero, Z, Z2, Z, Zero]);
    }

    #[test]
    fn inadmissible_sets() {
        for names in [vec!["PHS"], vec!["SRS", "Q"], vec!["TRS", "PHS"], vec!["SRS", "Q", "PHS"]] {
            let set = SymmetrySet::from_names(&names).unwrap();
            assert!(matches!(classify_set(set), Err(ClassifyError::Inadmissible(_))));
        }
        assert!(SymmetrySet::from_names(&["TRS", "TRS"]).is_err());
        assert!(SymmetrySet::from_names(&["XYZ"]).is_err());
    }

    #[test]
    fn quaternion_shift_matches_table() {
        assert_eq!(shift_by_quaternions(Cartan::AI.row().index), Cartan::AII.row().index);
        assert_eq!(shift_by_quaternions(Cartan::D.row().index), Cartan::C.row().index);
        assert_eq!(shift_by_quaternions(Cartan::BDI.row().index), Cartan::CII.row().index);
        assert_eq!(shift_by_quaternions(Cartan::DIII.row().index), Cartan::CI.row().index);
    }

    #[test]
    fn every_class_derives_its_table_entry() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for c in Cartan::ALL {
            let inst = ClassInstance::new(c).unwrap();
            for _ in 0..3 {
                let b = inst.sample(&mut rng).unwrap();
                let d = derive_label_from_operators(&b, &inst.ops).unwrap_or_else(|e| panic!("{c}: {e}"));
                assert_eq!(d.label.cartan, c);
                assert!(d.reduced.max_relation_residual().unwrap() < 1e-9, "{c}");
            }
        }
    }

    #[test]
    fn violated_symmetry_is_reported() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let inst = ClassInstance::new(Cartan::AII).unwrap();
        let b = inst.sample(&mut rng).unwrap();
        let p = b.p() + &ComplexMatrix::real_diag(&[0.3, 0.0, 0.0, 0.0]);
        let bad = BdGHamiltonian::new(p, b.delta().clone()).unwrap();
        let err = derive_label_from_operators(&bad, &inst.ops).unwrap_err();
        assert!(matches!(err, ClassifyError::SymmetryViolated { ref what, .. } if what == "TRS"), "{err}");
    }

    #[test]
    fn incompatible_operators_are_structural() {
        // S anticommuting with T
        let t = AntiLinearOp::new(i_sigma_y()).unwrap();
        let ops = vec![
            SymmetryOperator::trs(t).unwrap(),
            SymmetryOperator::charge(2),
            SymmetryOperator::phs(pauli_z()).unwrap(),
        ];
        let b = BdGHamiltonian::new(crate::linalg::pauli_x(), ComplexMatrix::zeros(2, 2)).unwrap();
        assert!(matches!(derive_label_from_operators(&b, &ops), Err(ClassifyError::StructuralFailure(_))));
    }

    #[test]
    fn class_a_counts_negative_eigenvalues() {
        let p = ComplexMatrix::real_diag(&[1.0, -1.0, -1.0]);
        let b = BdGHamiltonian::new(p, ComplexMatrix::zeros(3, 3)).unwrap();
        let a = analyze(&b, &[SymmetryOperator::charge(3)]).unwrap();
        assert_eq!(a.invariant, InvariantValue { group: Group::Z, value: 2 });
    }

    #[test]
    fn class_d_parity_matches_fock_ground_state() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for n in 1..=3 {
            let fock = FockSpace::new(n).unwrap();
            let parity = fock.parity_operator();
            for _ in 0..6 {
                let p = random_hermitian(&mut rng, n).scale_real(0.7);
                let d = random_antisymmetric(&mut rng, n);
                let b = BdGHamiltonian::new(p.clone(), d.clone()).unwrap();
                if !b.is_gapped() {
                    continue;
                }
                let bit = analyze(&b, &[]).unwrap().invariant.value;
                let h = fock.build_quadratic_hamiltonian(&p, &d).unwrap();
                let (vals, vecs) = h.eigh().unwrap();
                assert!(vals[1] - vals[0] > 1e-6);
                let g = vecs.column(0);
                let pg = parity.apply(&g);
                let expect: f64 = g.iter().zip(&pg).map(|(a, b)| (a.conj() * b).re).sum();
                assert_eq!(bit, if expect < 0.0 { 1 } else { 0 }, "n = {n}");
            }
        }
    }

    #[test]
    fn class_aii_is_even() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let inst = ClassInstance::new(Cartan::AII).unwrap();
        for _ in 0..5 {
            let a = analyze(&inst.sample(&mut rng).unwrap(), &inst.ops).unwrap();
            assert!((0..=2).contains(&a.invariant.value));
        }
        let b = BdGHamiltonian::new(ComplexMatrix::real_diag(&[1.0, 1.0, 1.0, -1.0]), ComplexMatrix::zeros(4, 4)).unwrap();
        let red = Reduced {
            stage: Stage::Charge,
            h: b.p().clone(),
            relations: vec![],
            reference: None,
            trs: None,
            phs: None,
            chiral: None,
        };
        let label = classify_set(Cartan::AII.row().symmetries).unwrap();
        assert!(matches!(invariant_value(&label, &red), Err(ClassifyError::KramersViolation(1))));
    }

    #[test]
    fn bdi_frame_is_real_and_adapted() {
        let t = AntiLinearOp::new(ComplexMatrix::identity(2).kron(&crate::linalg::pauli_x())).unwrap();
        let s = pauli_z().kron(&ComplexMatrix::identity(2));
        let (f, plus) = real_chiral_frame(&t, &s).unwrap();
        assert_eq!(plus, 2);
        assert!(f.is_unitary());
        for k in 0..4 {
            let v = f.column(k);
            let tv = t.apply(&v);
                assert!(v.iter().zip(&tv).all(|(a, b)| (a - b).norm() < 1e-10));
        }
        let quaternionic = AntiLinearOp::new(ComplexMatrix::identity(2).kron(&i_sigma_y())).unwrap();
        assert!(real_chiral_frame(&quaternionic, &s).is_err());
    }

    #[test]
    fn bdi_flip_changes_det_sign() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let inst = ClassInstance::new(Cartan::BDI).unwrap();
        let b = inst.sample(&mut rng).unwrap();
        let a = analyze(&b, &inst.ops).unwrap();
        let red = &a.derivation.reduced;
        let (t, s) = (red.trs.as_ref().unwrap(), red.chiral.as_ref().unwrap());
        // conjugating by a T- and S-compatible reflection flips the sign
        let (f, plus) = real_chiral_frame(t, s).unwrap();
        let mut refl = ComplexMatrix::identity(red.h.nrows());
        refl[(0, 0)] = -ONE;
        let r = &(&f * &refl) * &f.adjoint();
        let flipped = &(&r * &red.h) * &r;
        assert_eq!(plus, 1);
        assert_ne!(det_sign_bit(&red.h, t, s).unwrap(), det_sign_bit(&flipped, t, s).unwrap());
    }

    #[test]
    fn unflattened_is_rejected() {
        let red = Reduced {
            stage: Stage::Charge,
            h: ComplexMatrix::real_diag(&[2.0, -1.0]),
            relations: vec![],
            reference: None,
            trs: None,
            phs: None,
            chiral: None,
        };
        let label = classify_set(Cartan::A.row().symmetries).unwrap();
        assert_eq!(invariant_value(&label, &red), Err(ClassifyError::NotFlattened));
    }
}
