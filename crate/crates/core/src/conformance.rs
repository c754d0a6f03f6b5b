//! End-to-end checks shared by the acceptance tests and `tenfold selftest`.

use std::fmt;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::classify::{
    analyze, classify_set, shift_by_quaternions, Cartan, ClassInstance, Series, SymmetrySet, TableRow, TABLE,
};
use crate::clifford::{witness_iso_cl1, witness_iso_cl2};
use crate::fock::FockSpace;
use crate::homotopy::{homotopy_oracle, validate_path, ConstraintSet, OracleConfig, OracleResult, Relation};
use crate::linalg::{
    complex_vec, i_sigma_y, pauli_x, pauli_z, random_antisymmetric, random_hermitian, AntiLinearOp, ComplexMatrix,
    I,
};
use crate::nambu::{BdGHamiltonian, NambuSpace};
use crate::symmetry::{lift_linear, lift_trs, make_spin_generators, quaternionic_factor, relative_signs};

#[derive(Debug, Clone)]
pub struct CheckResult {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {} {}: {} ({:.2?})",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.detail,
            self.elapsed
        )
    }
}

fn timed(id: u8, name: &'static str, f: impl FnOnce() -> Result<String, String>) -> CheckResult {
    let start = Instant::now();
    let out = f();
    let elapsed = start.elapsed();
    let (passed, detail) = match out {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    CheckResult {
        id,
        name,
        passed,
        detail,
        elapsed,
    }
}

/// `(s, class, series, index, TRS sign, PHS sign)` as printed in the
/// literature table.
pub const REFERENCE_ROWS: [(u8, &str, &str, u8, Option<i8>, Option<i8>); 10] = [
    (0, "D", "KO", 2, None, Some(1)),
    (1, "DIII", "KO", 3, Some(-1), Some(1)),
    (2, "AII", "KO", 4, Some(-1), None),
    (3, "CII", "KO", 5, Some(-1), Some(-1)),
    (4, "C", "KO", 6, None, Some(-1)),
    (5, "CI", "KO", 7, Some(1), Some(-1)),
    (6, "AI", "KO", 0, Some(1), None),
    (7, "BDI", "KO", 1, Some(1), Some(1)),
    (0, "A", "KU", 0, None, None),
    (1, "AIII", "KU", 1, None, None),
];

/// Compares `rows` with [`REFERENCE_ROWS`] and with `classify_set`.
pub fn check_table(rows: &[TableRow]) -> Result<String, String> {
    if rows.len() != REFERENCE_ROWS.len() {
        return Err(format!("{} rows instead of {}", rows.len(), REFERENCE_ROWS.len()));
    }
    for (row, &(s, name, series, index, trs, phs)) in rows.iter().zip(&REFERENCE_ROWS) {
        let got_series = match row.series {
            Series::KO => "KO",
            Series::KU => "KU",
        };
        let got = (row.s, row.cartan.name(), got_series, row.index, row.view.trs_sign, row.view.phs_sign);
        if got != (s, name, series, index, trs, phs) {
            return Err(format!("row {name}: got {got:?}"));
        }
        let label = classify_set(row.symmetries).map_err(|e| e.to_string())?;
        if label.cartan != row.cartan || label.index != row.index || label.series != row.series {
            return Err(format!("classify_set({}) gives {label}", row.symmetries));
        }
    }
    Ok("10 rows match".into())
}

pub fn criterion_table(rows: &[TableRow]) -> CheckResult {
    timed(1, "table reproduction", || check_table(rows))
}

/// `‖{η(w), η(w')} − q(w, w')·1‖` for random pairs on `n` modes.
pub fn car_worst(n: usize, pairs: usize, seed: u64) -> Result<f64, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fock = FockSpace::new(n).map_err(|e| e.to_string())?;
    let nambu = NambuSpace::new(n);
    let id = ComplexMatrix::identity(fock.dim());
    let mut worst = 0.0f64;
    for _ in 0..pairs {
        let w = complex_vec(&mut rng, 2 * n);
        let w2 = complex_vec(&mut rng, 2 * n);
        let a = nambu.eta(&fock, &w).map_err(|e| e.to_string())?;
        let b = nambu.eta(&fock, &w2).map_err(|e| e.to_string())?;
        let q = nambu.q_form(&w, &w2).map_err(|e| e.to_string())?;
        worst = worst.max((&a.anticommutator(&b) - &id.scale(q)).norm());
    }
    Ok(worst)
}

pub fn criterion_car(seed: u64) -> CheckResult {
    timed(2, "CAR relations", || {
        let mut worst = 0.0f64;
        for n in 1..=6 {
            worst = worst.max(car_worst(n, 100, seed + n as u64)?);
        }
        if worst < 1e-10 {
            Ok(format!("n = 1..6, 100 pairs each, worst residual {worst:.2e}"))
        } else {
            Err(format!("worst residual {worst:.2e}"))
        }
    })
}

pub fn criterion_bdg(seed: u64) -> CheckResult {
    timed(3, "BdG structure", || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut worst = 0.0f64;
        for k in 0..200 {
            let n = 1 + k % 4;
            let fock = FockSpace::new(n).map_err(|e| e.to_string())?;
            let theta = random_hermitian(&mut rng, n);
            let xi = random_antisymmetric(&mut rng, n);
            let h = fock.build_quadratic_hamiltonian(&theta, &xi).map_err(|e| e.to_string())?;
            let b = NambuSpace::new(n).extract_bdg(&fock, &h).map_err(|e| e.to_string())?;
            let full = b.full();
            let gamma = NambuSpace::new(n).gamma();
            let residuals = [
                full.self_adjoint_residual(),
                (&gamma.conjugate(full) + full).norm(),
                b.p().self_adjoint_residual(),
                (&b.delta().transpose() + b.delta()).norm(),
                (b.p() - &theta).norm(),
                (b.delta() - &xi).norm(),
            ];
            worst = residuals.iter().fold(worst, |m, &r| m.max(r));
        }
        if worst < 1e-10 {
            Ok(format!("200 Hamiltonians, worst residual {worst:.2e}"))
        } else {
            Err(format!("worst residual {worst:.2e}"))
        }
    })
}

pub fn criterion_clifford() -> CheckResult {
    timed(4, "Clifford witnesses", || clifford_witnesses(6))
}

/// Runs the graded tensor witness for every signature pair with at most
/// `total` generators, plus the quaternionic witness.
pub fn clifford_witnesses(total: usize) -> Result<String, String> {
    let mut count = 0;
    for r in 0..=total {
        for s in 0..=total - r {
            for r2 in 0..=total - r - s {
                for s2 in 0..=total - r - s - r2 {
                    let w = witness_iso_cl1(r, s, r2, s2).map_err(|e| format!("({r},{s},{r2},{s2}): {e}"))?;
                    if w.generated_dim != w.expected_dim {
                        return Err(format!("({r},{s},{r2},{s2}) generates {} of {}", w.generated_dim, w.expected_dim));
                    }
                    count += 1;
                }
            }
        }
    }
    let w = witness_iso_cl2().map_err(|e| e.to_string())?;
    if w.generated_dim != w.expected_dim {
        return Err("quaternionic witness does not generate".into());
    }
    Ok(format!("{count} graded tensor witnesses and the quaternionic witness"))
}

/// The three relative signs for the minimal instances, as
/// `(label, dim V, η₁)`.
pub fn sign_examples() -> Result<Vec<(&'static str, usize, i8)>, String> {
    let err = |e: &dyn fmt::Display| e.to_string();
    let trs = |n: usize| -> Result<AntiLinearOp, String> {
        AntiLinearOp::new(ComplexMatrix::identity(n / 2).kron(&i_sigma_y())).map_err(|e| err(&e))
    };
    let mut out = Vec::new();
    for n in [2, 4] {
        let nambu = NambuSpace::new(n);
        let tt = lift_trs(&nambu, &trs(n)?).map_err(|e| err(&e))?;
        let s = relative_signs(&tt, &nambu.gamma(), None).map_err(|e| err(&e))?;
        out.push(("TRS lift against γ", n, s.eta1));
    }
    for n in [2, 4] {
        let nambu = NambuSpace::new(n);
        let tt = lift_trs(&nambu, &trs(n)?).map_err(|e| err(&e))?;
        let j1 = lift_linear(&make_spin_generators(n).map_err(|e| err(&e))?[0].1);
        let k = tt.then_linear(&j1).map_err(|e| err(&e))?;
        let s = relative_signs(&k, &nambu.gamma(), None).map_err(|e| err(&e))?;
        out.push(("spin-reduced TRS against γ", n, s.eta1));
    }
    {
        let n = 4;
        let nambu = NambuSpace::new(n);
        let tt = lift_trs(&nambu, &trs(n)?).map_err(|e| err(&e))?;
        let s_op = pauli_z().kron(&ComplexMatrix::identity(2));
        let k = tt.after_linear(&lift_linear(&s_op)).map_err(|e| err(&e))?;
        let s = relative_signs(&k, &nambu.gamma(), None).map_err(|e| err(&e))?;
        out.push(("TS against γ", n, s.eta1));
    }
    Ok(out)
}

pub fn criterion_signs() -> CheckResult {
    timed(5, "relative signs", || {
        let expected = [-1, -1, 1, 1, -1];
        let got = sign_examples()?;
        for ((label, n, eta), want) in got.iter().zip(expected) {
            if *eta != want {
                return Err(format!("{label} (dim V = {n}): η₁ = {eta}, expected {want}"));
            }
        }
        Ok("η₁ = −1, +1, −1 on dim V = 2 and 4".into())
    })
}

pub fn criterion_factorization(seed: u64) -> CheckResult {
    timed(6, "quaternionic factorization", || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut worst = 0.0f64;
        for n in [2, 4] {
            let nambu = NambuSpace::new(n);
            let jt = make_spin_generators(n).map_err(|e| e.to_string())?.map(|(_, j)| lift_linear(&j));
            let qf = quaternionic_factor(&nambu, &jt).map_err(|e| e.to_string())?;
            let id = ComplexMatrix::identity(n);
            worst = worst.max((&qf.chi(&jt[0]) - &i_sigma_y().kron(&id)).norm());
            worst = worst.max((&qf.chi(&jt[1]) - &pauli_x().scale(I).kron(&id)).norm());
            let rels = jt.iter().map(|j| Relation::linear("spin", j.clone(), 1)).collect();
            let commutant = ConstraintSet::new(2 * n, rels);
            for _ in 0..25 {
                let a = commutant.project(&random_hermitian(&mut rng, 2 * n)).map_err(|e| e.to_string())?;
                let b = commutant.project(&random_hermitian(&mut rng, 2 * n)).map_err(|e| e.to_string())?;
                let x = &a + &b.scale(I);
                let c = qf.chi(&x);
                let z = c.block(0, 0, n, n);
                worst = worst.max((&c - &ComplexMatrix::identity(2).kron(&z)).norm());
            }
        }
        if worst < 1e-10 {
            Ok(format!("generators and 50 commutant samples, worst residual {worst:.2e}"))
        } else {
            Err(format!("worst residual {worst:.2e}"))
        }
    })
}

/// Per-class outcome of the invariant/oracle comparison.
#[derive(Debug, Clone, Default)]
pub struct ClassOracleStats {
    pub equal_pairs: usize,
    pub connected: usize,
    pub different_pairs: usize,
    /// Pairs with different invariants that the oracle connected.
    pub unsound: usize,
    pub invalid_paths: usize,
}

pub fn oracle_stats(cartan: Cartan, pairs: usize, seed: u64) -> Result<ClassOracleStats, String> {
    let inst = ClassInstance::new(cartan).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stats = ClassOracleStats::default();
    for k in 0..pairs {
        let x = inst.sample(&mut rng).map_err(|e| e.to_string())?;
        let y = inst.sample(&mut rng).map_err(|e| e.to_string())?;
        let ix = analyze(&x, &inst.ops).map_err(|e| e.to_string())?.invariant;
        let iy = analyze(&y, &inst.ops).map_err(|e| e.to_string())?.invariant;
        let fx = inst.space.element(x.full().clone()).map_err(|e| e.to_string())?;
        let fy = inst.space.element(y.full().clone()).map_err(|e| e.to_string())?;
        let cfg = OracleConfig {
            seed: seed.wrapping_mul(31).wrapping_add(k as u64),
            ..OracleConfig::default()
        };
        let res = homotopy_oracle(&inst.space, &fx, &fy, &cfg);
        if let OracleResult::Connected { path, stabilized } = &res {
            let ok = if *stabilized {
                let big = inst.space.direct_sum(&inst.space).map_err(|e| e.to_string())?;
                validate_path(&big, path, cfg.max_step)
            } else {
                validate_path(&inst.space, path, cfg.max_step)
            };
            if ok.is_err() {
                stats.invalid_paths += 1;
            }
        }
        if ix == iy {
            stats.equal_pairs += 1;
            stats.connected += res.is_connected() as usize;
        } else {
            stats.different_pairs += 1;
            stats.unsound += res.is_connected() as usize;
        }
    }
    Ok(stats)
}

pub fn criterion_homotopy(seed: u64) -> (CheckResult, Vec<(Cartan, ClassOracleStats)>) {
    let mut all = Vec::new();
    let res = timed(7, "invariant/homotopy consistency", || {
        let mut problems = Vec::new();
        for (i, c) in Cartan::ALL.into_iter().enumerate() {
            let s = oracle_stats(c, 25, seed + 1000 * i as u64)?;
            if s.unsound > 0 {
                problems.push(format!("{c}: {} pairs with different invariants connected", s.unsound));
            }
            if s.invalid_paths > 0 {
                problems.push(format!("{c}: {} invalid paths", s.invalid_paths));
            }
            let need = if c == Cartan::A { s.equal_pairs } else { (9 * s.equal_pairs).div_ceil(10) };
            if s.connected < need {
                problems.push(format!("{c}: connected {} of {} equal pairs", s.connected, s.equal_pairs));
            }
            all.push((c, s));
        }
        let summary = all
            .iter()
            .map(|(c, s)| format!("{c} {}/{} eq, {} ne", s.connected, s.equal_pairs, s.different_pairs))
            .collect::<Vec<_>>()
            .join("; ");
        if problems.is_empty() {
            Ok(summary)
        } else {
            Err(problems.join("; "))
        }
    });
    (res, all)
}

pub fn criterion_shift() -> CheckResult {
    timed(8, "quaternionic shift", || {
        let mut pairs = Vec::new();
        for row in TABLE.iter().filter(|r| r.series == Series::KO && !r.symmetries.srs) {
            let with = SymmetrySet {
                srs: true,
                ..row.symmetries
            };
            let other = classify_set(with).map_err(|e| e.to_string())?;
            if other.index != shift_by_quaternions(row.index) || (other.index + 8 - row.index) % 8 != 4 {
                return Err(format!("{} -> {}: indices {} and {}", row.cartan, other.cartan, row.index, other.index));
            }
            pairs.push(format!("{}/{}", row.cartan, other.cartan));
        }
        if pairs.len() != 4 {
            return Err(format!("{} pairs instead of 4", pairs.len()));
        }
        Ok(pairs.join(", "))
    })
}

pub fn criterion_invariance(seed: u64) -> CheckResult {
    timed(9, "invariance under perturbation", || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut total = 0;
        for c in Cartan::ALL {
            let inst = ClassInstance::new(c).map_err(|e| e.to_string())?;
            for _ in 0..3 {
                let b = inst.sample(&mut rng).map_err(|e| e.to_string())?;
                let base = analyze(&b, &inst.ops).map_err(|e| format!("{c}: {e}"))?.invariant;
                for _ in 0..20 {
                    let d = inst.perturbation(&mut rng, 0.5).map_err(|e| e.to_string())?;
                    let pb = BdGHamiltonian::from_full(b.full() + &d).map_err(|e| e.to_string())?;
                    let v = analyze(&pb, &inst.ops).map_err(|e| format!("{c}: {e}"))?.invariant;
                    if v != base {
                        return Err(format!("{c}: invariant changed from {base} to {v}"));
                    }
                    total += 1;
                }
            }
        }
        Ok(format!("{total} perturbations, no change"))
    })
}

/// Fast subset: table, CAR on three modes, small Clifford witnesses.
pub fn quick(rows: &[TableRow], seed: u64) -> Vec<CheckResult> {
    vec![
        criterion_table(rows),
        timed(2, "CAR relations (n = 3)", || {
            let w = car_worst(3, 100, seed)?;
            if w < 1e-10 {
                Ok(format!("worst residual {w:.2e}"))
            } else {
                Err(format!("worst residual {w:.2e}"))
            }
        }),
        timed(4, "Clifford witnesses (r + s ≤ 3)", || clifford_witnesses(3)),
    ]
}

/// All nine criteria, with per-class oracle statistics.
pub fn full(rows: &[TableRow], seed: u64) -> (Vec<CheckResult>, Vec<(Cartan, ClassOracleStats)>) {
    let (homotopy, stats) = criterion_homotopy(seed);
    let results = vec![
        criterion_table(rows),
        criterion_car(seed),
        criterion_bdg(seed),
        criterion_clifford(),
        criterion_signs(),
        criterion_factorization(seed),
        homotopy,
        criterion_shift(),
        criterion_invariance(seed),
    ];
    (results, stats)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corrupted_table_fails() {
        let mut rows = TABLE;
        rows[2].index = 5;
        assert!(check_table(&rows).is_err());
        assert!(check_table(&TABLE).is_ok());
        assert!(check_table(&TABLE[..9]).is_err());
    }

    #[test]
    fn quick_passes() {
        for r in quick(&TABLE, 1) {
            assert!(r.passed, "{r}");
        }
    }
}
