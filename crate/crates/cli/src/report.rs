use std::fmt::Write as _;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use tenfold_core::classify::{
    analyze, nambu_relations, Analysis, Chiral, ClassLabel, ClassifyError, Stage, TableRow,
};
use tenfold_core::homotopy::ConstraintSet;
use tenfold_core::linalg::random_hermitian;
use tenfold_core::nambu::BdGHamiltonian;
use tenfold_core::symmetry::SymmetryOperator;

fn sign(s: Option<i8>) -> &'static str {
    match s {
        Some(1) => "+1",
        Some(_) => "-1",
        None => "  ",
    }
}

fn chiral_name(c: Chiral) -> &'static str {
    match c {
        Chiral::None => "none",
        Chiral::Real => "real",
        Chiral::Imaginary => "imaginary",
        Chiral::Inner => "inner",
    }
}

pub fn render_table(rows: &[TableRow]) -> String {
    let mut out = String::new();
    writeln!(out, "s  class  symmetries     K-group  group  TRS PHS  chiral").unwrap();
    for r in rows {
        let label = ClassLabel::from(r);
        let line = format!(
            "{}  {:<5}  {:<13}  {:<7}  {:<5}  {} {}  {}",
            r.s,
            r.cartan,
            r.symmetries.joined(),
            label.k_theory(),
            label.group().to_string(),
            sign(r.view.trs_sign),
            sign(r.view.phs_sign),
            chiral_name(r.view.chiral),
        );
        writeln!(out, "{}", line.trim_end()).unwrap();
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct LabelReport {
    pub class: String,
    pub s: u8,
    pub k_group: String,
    pub group: String,
    pub symmetries: String,
    pub trs_sign: Option<i8>,
    pub phs_sign: Option<i8>,
    pub chiral: String,
}

impl From<&ClassLabel> for LabelReport {
    fn from(l: &ClassLabel) -> Self {
        Self {
            class: l.cartan.to_string(),
            s: l.s,
            k_group: l.k_theory(),
            group: l.group().to_string(),
            symmetries: l.symmetries.joined(),
            trs_sign: l.view.trs_sign,
            phs_sign: l.view.phs_sign,
            chiral: chiral_name(l.view.chiral).into(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ResidualReport {
    pub symmetry: String,
    pub residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SignReport {
    pub relation: String,
    pub eta1: i8,
}

#[derive(Debug, Clone, Serialize)]
pub struct InvariantReport {
    pub group: String,
    pub value: i64,
}

#[derive(Debug, Clone, Serialize)]
pub struct StabilityReport {
    pub seed: u64,
    pub perturbations: usize,
    pub unchanged: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub label: LabelReport,
    pub reduction: String,
    pub reduced_dim: usize,
    pub validation: Vec<ResidualReport>,
    pub signs: Vec<SignReport>,
    pub invariant: InvariantReport,
    pub stability: StabilityReport,
}

const PERTURBATIONS: usize = 5;

/// Re-evaluates the invariant after random symmetric perturbations of
/// operator norm 1/2 of the flattened Hamiltonian.
fn stability(
    b: &BdGHamiltonian,
    ops: &[SymmetryOperator],
    base: &Analysis,
    seed: u64,
) -> Result<StabilityReport, ClassifyError> {
    let n = b.modes();
    let space = ConstraintSet::new(2 * n, nambu_relations(n, ops));
    let flat = b.flatten().map_err(|_| ClassifyError::Gapless)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut unchanged = 0;
    for _ in 0..PERTURBATIONS {
        let d = space.project(&random_hermitian(&mut rng, 2 * n))?;
        let norm = d.op_norm();
        let d = if norm > 0.0 { d.scale_real(0.5 / norm) } else { d };
        let moved = BdGHamiltonian::from_full(flat.full() + &d).map_err(|e| {
            ClassifyError::StructuralFailure(e.to_string())
        })?;
        if analyze(&moved, ops)?.invariant == base.invariant {
            unchanged += 1;
        }
    }
    Ok(StabilityReport {
        seed,
        perturbations: PERTURBATIONS,
        unchanged,
    })
}

pub fn build_report(b: &BdGHamiltonian, ops: &[SymmetryOperator], seed: u64) -> Result<Report, ClassifyError> {
    let a = analyze(b, ops)?;
    let d = &a.derivation;
    let mut signs = Vec::new();
    if let Some(e) = d.derived.trs_sign {
        signs.push(SignReport {
            relation: "TRS".into(),
            eta1: e,
        });
    }
    if let Some(e) = d.derived.phs_sign {
        signs.push(SignReport {
            relation: "PHS".into(),
            eta1: e,
        });
    }
    let reduction = match d.reduced.stage {
        Stage::Nambu => "nambu",
        Stage::Quaternionic => "quaternionic",
        Stage::Charge => "charge",
        Stage::ChargeSpin => "charge+spin",
    };
    let stability = stability(b, ops, &a, seed)?;
    Ok(Report {
        label: LabelReport::from(&d.label),
        reduction: reduction.into(),
        reduced_dim: d.reduced.h.nrows(),
        validation: d
            .residuals
            .iter()
            .map(|(s, r)| ResidualReport {
                symmetry: s.clone(),
                residual: *r,
            })
            .collect(),
        signs,
        invariant: InvariantReport {
            group: a.invariant.group.to_string(),
            value: a.invariant.value,
        },
        stability,
    })
}

pub fn render_report(r: &Report) -> String {
    let mut out = String::new();
    let l = &r.label;
    writeln!(out, "class      {} / {} (group {}, s = {})", l.class, l.k_group, l.group, l.s).unwrap();
    writeln!(out, "symmetries {}", l.symmetries).unwrap();
    writeln!(out, "reduction  {} (dimension {})", r.reduction, r.reduced_dim).unwrap();
    for v in &r.validation {
        writeln!(out, "residual   {:<8} {:.3e}", v.symmetry, v.residual).unwrap();
    }
    for s in &r.signs {
        writeln!(out, "sign       {:<8} {:+}", s.relation, s.eta1).unwrap();
    }
    if l.group == "0" {
        writeln!(out, "invariant  trivial group").unwrap();
    } else {
        writeln!(out, "invariant  {} in {}", r.invariant.value, r.invariant.group).unwrap();
    }
    writeln!(
        out,
        "stability  {}/{} perturbations keep the invariant (seed {})",
        r.stability.unchanged, r.stability.perturbations, r.stability.seed
    )
    .unwrap();
    out
}
