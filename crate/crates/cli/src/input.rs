//! Input documents: a Hamiltonian (Fock coefficients or BdG blocks) and a
//! list of declared symmetries, with complex entries as `[re, im]` pairs.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use tenfold_core::classify::ClassInstance;
use tenfold_core::fock::FockSpace;
use tenfold_core::linalg::{AntiLinearOp, ComplexMatrix};
use tenfold_core::nambu::{BdGHamiltonian, NambuSpace};
use tenfold_core::symmetry::{SymmetryKind, SymmetryOperator};

pub type MatrixData = Vec<Vec<[f64; 2]>>;

/// Largest `dim_v` for which `theta`/`xi` input goes through Fock space.
const FOCK_LIMIT: usize = 8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputDocument {
    pub dim_v: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<MatrixData>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xi: Option<MatrixData>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bdg: Option<BdgBlocks>,
    #[serde(default)]
    pub symmetries: Vec<SymmetryEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BdgBlocks {
    pub p: MatrixData,
    pub delta: MatrixData,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Kind {
    Trs,
    Srs,
    Q,
    Phs,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymmetryEntry {
    pub kind: Kind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<MatrixData>,
    #[serde(default)]
    pub antilinear: bool,
    /// `V = V' ⊗ ℂ²` with the spin index fastest.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spin_factorization: Option<bool>,
}

#[derive(Debug, Error)]
pub enum InputError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("invalid document: {0}")]
    Shape(String),
    #[error("structural failure: {0}")]
    Structural(String),
}

pub fn parse(text: &str) -> Result<InputDocument, InputError> {
    let doc: InputDocument = serde_json::from_str(text).map_err(|e| InputError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    doc.check_shape()?;
    Ok(doc)
}

pub fn to_matrix(field: &str, data: &MatrixData, n: usize) -> Result<ComplexMatrix, InputError> {
    if data.len() != n {
        return Err(InputError::Shape(format!("{field}: {} rows, expected {n}", data.len())));
    }
    for (i, row) in data.iter().enumerate() {
        if row.len() != n {
            return Err(InputError::Shape(format!("{field}: row {i} has {} entries, expected {n}", row.len())));
        }
    }
    Ok(ComplexMatrix::from_fn(n, n, |i, j| {
        let [re, im] = data[i][j];
        Complex64::new(re, im)
    }))
}

pub fn from_matrix(m: &ComplexMatrix) -> MatrixData {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

impl InputDocument {
    fn check_shape(&self) -> Result<(), InputError> {
        let n = self.dim_v;
        if n == 0 {
            return Err(InputError::Shape("dim_v must be positive".into()));
        }
        match (&self.theta, &self.xi, &self.bdg) {
            (Some(_), _, None) | (None, None, Some(_)) => {}
            (None, Some(_), None) => return Err(InputError::Shape("xi given without theta".into())),
            (None, None, None) => return Err(InputError::Shape("one of theta or bdg is required".into())),
            _ => return Err(InputError::Shape("theta/xi and bdg are mutually exclusive".into())),
        }
        let all = [("theta", &self.theta), ("xi", &self.xi)];
        for (name, m) in all {
            if let Some(m) = m {
                to_matrix(name, m, n)?;
            }
        }
        if let Some(b) = &self.bdg {
            to_matrix("bdg.p", &b.p, n)?;
            to_matrix("bdg.delta", &b.delta, n)?;
        }
        for (i, s) in self.symmetries.iter().enumerate() {
            if let Some(m) = &s.matrix {
                to_matrix(&format!("symmetries[{i}].matrix"), m, n)?;
            }
        }
        Ok(())
    }

    pub fn hamiltonian(&self) -> Result<BdGHamiltonian, InputError> {
        let n = self.dim_v;
        let structural = |e: &dyn std::fmt::Display| InputError::Structural(e.to_string());
        if let Some(b) = &self.bdg {
            let p = to_matrix("bdg.p", &b.p, n)?;
            let d = to_matrix("bdg.delta", &b.delta, n)?;
            return BdGHamiltonian::new(p, d).map_err(|e| structural(&e));
        }
        let theta = to_matrix("theta", self.theta.as_ref().expect("checked"), n)?;
        let xi = match &self.xi {
            Some(x) => to_matrix("xi", x, n)?,
            None => ComplexMatrix::zeros(n, n),
        };
        if n > FOCK_LIMIT {
            return BdGHamiltonian::new(theta, xi).map_err(|e| structural(&e));
        }
        let fock = FockSpace::new(n).map_err(|e| structural(&e))?;
        let h = fock.build_quadratic_hamiltonian(&theta, &xi).map_err(|e| structural(&e))?;
        NambuSpace::new(n).extract_bdg(&fock, &h).map_err(|e| structural(&e))
    }

    pub fn operators(&self) -> Result<Vec<SymmetryOperator>, InputError> {
        let n = self.dim_v;
        let structural = |e: &dyn std::fmt::Display| InputError::Structural(e.to_string());
        let mut ops = Vec::new();
        for (i, s) in self.symmetries.iter().enumerate() {
            let field = format!("symmetries[{i}]");
            let matrix = || -> Result<ComplexMatrix, InputError> {
                let m = s
                    .matrix
                    .as_ref()
                    .ok_or_else(|| InputError::Shape(format!("{field}: matrix is required")))?;
                to_matrix(&format!("{field}.matrix"), m, n)
            };
            match s.kind {
                Kind::Trs => {
                    if !s.antilinear {
                        return Err(InputError::Structural(format!("{field}: TRS must be anti-linear")));
                    }
                    let t = AntiLinearOp::new(matrix()?).map_err(|e| structural(&e))?;
                    ops.push(SymmetryOperator::trs(t).map_err(|e| structural(&e))?);
                }
                Kind::Srs => {
                    if s.spin_factorization != Some(true) {
                        return Err(InputError::Structural(format!(
                            "{field}: SRS needs \"spin_factorization\": true"
                        )));
                    }
                    ops.extend(SymmetryOperator::spin(n).map_err(|e| structural(&e))?);
                }
                Kind::Q => ops.push(SymmetryOperator::charge(n)),
                Kind::Phs => {
                    if s.antilinear {
                        return Err(InputError::Structural(format!(
                            "{field}: give the linear S; its lift is anti-linear"
                        )));
                    }
                    ops.push(SymmetryOperator::phs(matrix()?).map_err(|e| structural(&e))?);
                }
            }
        }
        Ok(ops)
    }

    /// A document for a random instance of a class.
    pub fn example(inst: &ClassInstance, h: &BdGHamiltonian, seed: u64) -> Self {
        let mut symmetries = Vec::new();
        let mut spin_done = false;
        for op in &inst.ops {
            let entry = match op.kind {
                SymmetryKind::Trs => SymmetryEntry {
                    kind: Kind::Trs,
                    matrix: Some(from_matrix(op.op.matrix())),
                    antilinear: true,
                    spin_factorization: None,
                },
                SymmetryKind::Srs(_) if spin_done => continue,
                SymmetryKind::Srs(_) => {
                    spin_done = true;
                    SymmetryEntry {
                        kind: Kind::Srs,
                        matrix: None,
                        antilinear: false,
                        spin_factorization: Some(true),
                    }
                }
                SymmetryKind::Q => SymmetryEntry {
                    kind: Kind::Q,
                    matrix: None,
                    antilinear: false,
                    spin_factorization: None,
                },
                SymmetryKind::Phs => SymmetryEntry {
                    kind: Kind::Phs,
                    matrix: Some(from_matrix(op.op.matrix())),
                    antilinear: false,
                    spin_factorization: None,
                },
            };
            symmetries.push(entry);
        }
        Self {
            dim_v: inst.modes,
            theta: None,
            xi: None,
            bdg: Some(BdgBlocks {
                p: from_matrix(h.p()),
                delta: from_matrix(h.delta()),
            }),
            symmetries,
            seed: Some(seed),
        }
    }
}
