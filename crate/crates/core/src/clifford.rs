//! Clifford algebras `Cl_{r,s}` over blade bitmasks, their graded tensor
//! products, faithful Pauli-string representations, and checked witnesses
//! for the isomorphisms `Cl_{r,s} ⊗̂ Cl_{r',s'} ≅ Cl_{r+r',s+s'}` and
//! `ℍ ⊗ Cl_{1,1} ≅ Cl_{0,4}`.
//!
//! Generator `i < r` squares to `+1` and is self-adjoint; generator
//! `r ≤ i < r + s` squares to `−1` and is anti-self-adjoint. A blade is the
//! ordered product of the generators whose bits are set.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use rand::Rng;
use thiserror::Error;

use crate::linalg::{pauli_x, pauli_y, pauli_z, AntiLinearOp, ComplexMatrix, I, ONE, TOL, ZERO};

pub const MAX_GENERATORS: usize = 8;

pub type Blade = u16;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CliffordError {
    #[error("signature mismatch: {0} vs {1}")]
    SignatureMismatch(CliffordSignature, CliffordSignature),
    #[error("{0} generators exceed the supported maximum of {MAX_GENERATORS}")]
    TooLarge(usize),
    #[error("verification failed: {0}")]
    VerificationFailed(String),
}

pub type Result<T> = std::result::Result<T, CliffordError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CliffordSignature {
    pub r: usize,
    pub s: usize,
}

impl fmt::Display for CliffordSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cl_{{{},{}}}", self.r, self.s)
    }
}

impl CliffordSignature {
    pub fn new(r: usize, s: usize) -> Result<Self> {
        if r + s > MAX_GENERATORS {
            return Err(CliffordError::TooLarge(r + s));
        }
        Ok(Self { r, s })
    }

    pub fn generators(&self) -> usize {
        self.r + self.s
    }

    /// Real dimension `2^(r+s)`.
    pub fn dim(&self) -> usize {
        1 << self.generators()
    }

    pub fn squares_to_minus_one(&self, i: usize) -> bool {
        i >= self.r
    }

    fn f_mask(&self) -> Blade {
        let all = (1u32 << self.generators()) - 1;
        let e = (1u32 << self.r) - 1;
        (all & !e) as Blade
    }

    /// `b₁ b₂ = sign · (b₁ xor b₂)`.
    pub fn blade_product(&self, a: Blade, b: Blade) -> (f64, Blade) {
        let mut swaps = 0u32;
        let mut bits = b;
        while bits != 0 {
            let i = bits.trailing_zeros();
            swaps += (a >> (i + 1)).count_ones();
            bits &= bits - 1;
        }
        let f_mask = self.f_mask();
        let negative_squares = (a & b & f_mask).count_ones();
        let sign = if (swaps + negative_squares) % 2 == 0 { 1.0 } else { -1.0 };
        (sign, a ^ b)
    }

    /// `b* = ±b`.
    pub fn blade_adjoint_sign(&self, b: Blade) -> f64 {
        let k = b.count_ones();
        let f_mask = self.f_mask();
        let f = (b & f_mask).count_ones();
        if (k * k.saturating_sub(1) / 2 + f) % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    }
}

pub fn blade_parity(b: Blade) -> u32 {
    b.count_ones() % 2
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
    Mixed,
}

/// Element of `Cl_{r,s} ⊗ ℂ`, stored as blade → coefficient.
#[derive(Debug, Clone, PartialEq)]
pub struct CliffordElement {
    sig: CliffordSignature,
    coeffs: BTreeMap<Blade, Complex64>,
}

impl CliffordElement {
    pub fn zero(sig: CliffordSignature) -> Self {
        Self {
            sig,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn scalar(sig: CliffordSignature, z: Complex64) -> Self {
        Self::blade(sig, 0, z)
    }

    pub fn blade(sig: CliffordSignature, b: Blade, z: Complex64) -> Self {
        assert!((b as usize) < sig.dim(), "blade outside signature");
        let mut coeffs = BTreeMap::new();
        if z != ZERO {
            coeffs.insert(b, z);
        }
        Self { sig, coeffs }
    }

    pub fn generator(sig: CliffordSignature, i: usize) -> Self {
        assert!(i < sig.generators());
        Self::blade(sig, 1 << i, ONE)
    }

    pub fn random(sig: CliffordSignature, rng: &mut impl Rng) -> Self {
        let mut out = Self::zero(sig);
        for b in 0..sig.dim() {
            out.coeffs.insert(
                b as Blade,
                Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            );
        }
        out
    }

    pub fn signature(&self) -> CliffordSignature {
        self.sig
    }

    pub fn coeff(&self, b: Blade) -> Complex64 {
        self.coeffs.get(&b).copied().unwrap_or(ZERO)
    }

    pub fn terms(&self) -> impl Iterator<Item = (Blade, Complex64)> + '_ {
        self.coeffs.iter().map(|(&b, &z)| (b, z))
    }

    pub fn parity(&self) -> Parity {
        let mut even = false;
        let mut odd = false;
        for (&b, z) in &self.coeffs {
            if z.norm() > TOL {
                if blade_parity(b) == 0 {
                    even = true;
                } else {
                    odd = true;
                }
            }
        }
        match (even, odd) {
            (_, false) => Parity::Even,
            (false, true) => Parity::Odd,
            (true, true) => Parity::Mixed,
        }
    }

    fn add_term(&mut self, b: Blade, z: Complex64) {
        *self.coeffs.entry(b).or_insert(ZERO) += z;
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (b, z) in other.terms() {
            out.add_term(b, z);
        }
        Ok(out)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            sig: self.sig,
            coeffs: self.coeffs.iter().map(|(&b, &z)| (b, z * s)).collect(),
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.sig == other.sig {
            Ok(())
        } else {
            Err(CliffordError::SignatureMismatch(self.sig, other.sig))
        }
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = Self::zero(self.sig);
        for (a, za) in self.terms() {
            for (b, zb) in other.terms() {
                let (sign, c) = self.sig.blade_product(a, b);
                out.add_term(c, za * zb * sign);
            }
        }
        Ok(out)
    }

    /// Involution: reverses blades, negates `f` generators, conjugates
    /// coefficients.
    pub fn adjoint(&self) -> Self {
        Self {
            sig: self.sig,
            coeffs: self
                .coeffs
                .iter()
                .map(|(&b, &z)| (b, z.conj() * self.sig.blade_adjoint_sign(b)))
                .collect(),
        }
    }

    /// Grading automorphism `st`.
    pub fn grade_involution(&self) -> Self {
        Self {
            sig: self.sig,
            coeffs: self
                .coeffs
                .iter()
                .map(|(&b, &z)| (b, if blade_parity(b) == 0 { z } else { -z }))
                .collect(),
        }
    }

    pub fn distance(&self, other: &Self) -> f64 {
        let mut keys: Vec<Blade> = self.coeffs.keys().chain(other.coeffs.keys()).copied().collect();
        keys.sort_unstable();
        keys.dedup();
        keys.iter()
            .map(|&b| (self.coeff(b) - other.coeff(b)).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Coefficient vector indexed by blade.
    pub fn to_vector(&self) -> Vec<Complex64> {
        (0..self.sig.dim()).map(|b| self.coeff(b as Blade)).collect()
    }
}

pub fn multiply(a: &CliffordElement, b: &CliffordElement) -> Result<CliffordElement> {
    a.multiply(b)
}

/// Element of `Cl_{r,s} ⊗̂ Cl_{r',s'}` on pairs of blades.
#[derive(Debug, Clone, PartialEq)]
pub struct GradedTensorElement {
    left: CliffordSignature,
    right: CliffordSignature,
    coeffs: BTreeMap<(Blade, Blade), Complex64>,
}

/// `(−1)^{|a₂||b₁|}` for `(a₁⊗̂b₁)(a₂⊗̂b₂)`.
pub fn koszul_sign(a2_parity: u32, b1_parity: u32) -> f64 {
    if a2_parity * b1_parity % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

impl GradedTensorElement {
    pub fn zero(left: CliffordSignature, right: CliffordSignature) -> Self {
        Self {
            left,
            right,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn pure(a: Blade, b: Blade, left: CliffordSignature, right: CliffordSignature, z: Complex64) -> Self {
        let mut out = Self::zero(left, right);
        out.coeffs.insert((a, b), z);
        out
    }

    /// `a ⊗̂ b` extended bilinearly.
    pub fn tensor(a: &CliffordElement, b: &CliffordElement) -> Self {
        let mut out = Self::zero(a.signature(), b.signature());
        for (x, zx) in a.terms() {
            for (y, zy) in b.terms() {
                *out.coeffs.entry((x, y)).or_insert(ZERO) += zx * zy;
            }
        }
        out
    }

    pub fn random(left: CliffordSignature, right: CliffordSignature, rng: &mut impl Rng) -> Self {
        let mut out = Self::zero(left, right);
        for a in 0..left.dim() {
            for b in 0..right.dim() {
                out.coeffs.insert(
                    (a as Blade, b as Blade),
                    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                );
            }
        }
        out
    }

    pub fn terms(&self) -> impl Iterator<Item = ((Blade, Blade), Complex64)> + '_ {
        self.coeffs.iter().map(|(&k, &z)| (k, z))
    }

    pub fn coeff(&self, a: Blade, b: Blade) -> Complex64 {
        self.coeffs.get(&(a, b)).copied().unwrap_or(ZERO)
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        if self.left != other.left {
            return Err(CliffordError::SignatureMismatch(self.left, other.left));
        }
        if self.right != other.right {
            return Err(CliffordError::SignatureMismatch(self.right, other.right));
        }
        let mut out = Self::zero(self.left, self.right);
        for ((a1, b1), z1) in self.terms() {
            for ((a2, b2), z2) in other.terms() {
                let k = koszul_sign(blade_parity(a2), blade_parity(b1));
                let (sa, a) = self.left.blade_product(a1, a2);
                let (sb, b) = self.right.blade_product(b1, b2);
                *out.coeffs.entry((a, b)).or_insert(ZERO) += z1 * z2 * (k * sa * sb);
            }
        }
        Ok(out)
    }

    /// `(a⊗̂b)* = (−1)^{|a||b|} a*⊗̂b*`.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zero(self.left, self.right);
        for ((a, b), z) in self.terms() {
            let k = koszul_sign(blade_parity(a), blade_parity(b));
            let s = self.left.blade_adjoint_sign(a) * self.right.blade_adjoint_sign(b);
            out.coeffs.insert((a, b), z.conj() * (k * s));
        }
        out
    }

    pub fn distance(&self, other: &Self) -> f64 {
        let mut keys: Vec<(Blade, Blade)> = self.coeffs.keys().chain(other.coeffs.keys()).copied().collect();
        keys.sort_unstable();
        keys.dedup();
        keys.iter()
            .map(|&(a, b)| (self.coeff(a, b) - other.coeff(a, b)).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

pub fn graded_tensor(a: &CliffordElement, b: &CliffordElement) -> GradedTensorElement {
    GradedTensorElement::tensor(a, b)
}

/// Faithful complex matrix representation of a Clifford algebra.
#[derive(Debug, Clone)]
pub struct MatrixRep {
    pub sig: CliffordSignature,
    pub gens: Vec<ComplexMatrix>,
    /// Self-adjoint unitary implementing the grading: it anticommutes with
    /// every generator.
    pub omega: ComplexMatrix,
}

impl MatrixRep {
    pub fn dim(&self) -> usize {
        self.omega.nrows()
    }

    pub fn blade_matrix(&self, b: Blade) -> ComplexMatrix {
        let mut m = ComplexMatrix::identity(self.dim());
        for (i, g) in self.gens.iter().enumerate() {
            if b & (1 << i) != 0 {
                m = &m * g;
            }
        }
        m
    }

    pub fn eval(&self, x: &CliffordElement) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(self.dim(), self.dim());
        for (b, z) in x.terms() {
            m += &self.blade_matrix(b).scale(z);
        }
        m
    }

    /// Checks squares, adjointness, anticommutation and the grading.
    pub fn verify(&self) -> Result<()> {
        verify_generators(self.sig, &self.gens, Some(&self.omega))
    }
}

/// Relations of `Cl_{r,s}` for a list of matrices, in order `e₁…e_r, f₁…f_s`.
pub fn verify_generators(
    sig: CliffordSignature,
    gens: &[ComplexMatrix],
    grading: Option<&ComplexMatrix>,
) -> Result<()> {
    let fail = |msg: String| Err(CliffordError::VerificationFailed(msg));
    if gens.len() != sig.generators() {
        return fail(format!("expected {} generators, got {}", sig.generators(), gens.len()));
    }
    for (i, g) in gens.iter().enumerate() {
        let d = g.nrows();
        let sq = sig.squares_to_minus_one(i);
        let target = ComplexMatrix::identity(d).scale_real(if sq { -1.0 } else { 1.0 });
        let r = (&(g * g) - &target).norm();
        if r >= TOL {
            return fail(format!("generator {i} has the wrong square (residual {r:.3e})"));
        }
        let adj = if sq { -g.adjoint() } else { g.adjoint() };
        let r = (&adj - g).norm();
        if r >= TOL {
            return fail(format!("generator {i} has the wrong adjoint (residual {r:.3e})"));
        }
        if let Some(w) = grading {
            let r = w.anticommutator(g).norm();
            if r >= TOL {
                return fail(format!("generator {i} is not odd (residual {r:.3e})"));
            }
        }
        for (j, h) in gens.iter().enumerate().skip(i + 1) {
            let r = g.anticommutator(h).norm();
            if r >= TOL {
                return fail(format!("generators {i} and {j} do not anticommute (residual {r:.3e})"));
            }
        }
    }
    Ok(())
}

fn kron_all(factors: &[ComplexMatrix]) -> ComplexMatrix {
    factors
        .iter()
        .fold(ComplexMatrix::identity(1), |acc, f| acc.kron(f))
}

/// `2m + 1` pairwise anticommuting self-adjoint unitaries on `(ℂ²)^{⊗m}`.
fn gamma_matrices(m: usize) -> Vec<ComplexMatrix> {
    let id = ComplexMatrix::identity(2);
    let mut out = Vec::with_capacity(2 * m + 1);
    for k in 0..m {
        for p in [pauli_x(), pauli_z()] {
            let mut f = vec![pauli_y(); k];
            f.push(p);
            f.extend(std::iter::repeat(id.clone()).take(m - k - 1));
            out.push(kron_all(&f));
        }
    }
    out.push(kron_all(&vec![pauli_y(); m]));
    out
}

/// Pauli-string representation of dimension `2^⌈(r+s)/2⌉`. The `e`
/// generators use the leading gamma matrices and the `f` generators use
/// `i` times the trailing ones, so `Cl_{1,0} → σ_x`, `Cl_{0,1} → iσ_y`,
/// `Cl_{2,0} → {σ_x, σ_z}`.
pub fn standard_rep(sig: CliffordSignature) -> Result<MatrixRep> {
    let n = sig.generators();
    if n > MAX_GENERATORS {
        return Err(CliffordError::TooLarge(n));
    }
    let m = n.div_ceil(2);
    let gammas = gamma_matrices(m);
    let mut gens: Vec<ComplexMatrix> = gammas[..sig.r].to_vec();
    let mut used = vec![false; gammas.len()];
    used[..sig.r].iter_mut().for_each(|u| *u = true);
    for j in 0..sig.s {
        let idx = gammas.len() - 1 - j;
        used[idx] = true;
        gens.push(gammas[idx].scale(I));
    }
    let omega = if n % 2 == 1 {
        let idx = used.iter().position(|u| !u).expect("odd count leaves a gamma free");
        gammas[idx].clone()
    } else if n == 0 {
        ComplexMatrix::identity(1)
    } else {
        let w = gens.iter().fold(ComplexMatrix::identity(1 << m), |acc, g| &acc * g);
        let sq = &w * &w;
        if (&sq - &ComplexMatrix::identity(1 << m)).norm() < TOL {
            w
        } else {
            w.scale(I)
        }
    };
    let rep = MatrixRep { sig, gens, omega };
    rep.verify()?;
    Ok(rep)
}

/// Complex rank of a family of matrices viewed as vectors.
pub fn span_rank(mats: &[ComplexMatrix]) -> usize {
    if mats.is_empty() {
        return 0;
    }
    let len = mats[0].nrows() * mats[0].ncols();
    let m = ComplexMatrix::from_fn(len, mats.len(), |i, j| mats[j].as_dmatrix()[i]);
    m.rank(1e-9)
}

/// Real rank of a family of matrices viewed as vectors in `ℝ^{2·d²}`.
pub fn real_span_rank(mats: &[ComplexMatrix]) -> usize {
    if mats.is_empty() {
        return 0;
    }
    let len = mats[0].nrows() * mats[0].ncols();
    let m = ComplexMatrix::from_fn(2 * len, mats.len(), |i, j| {
        let z = mats[j].as_dmatrix()[i % len];
        Complex64::new(if i < len { z.re } else { z.im }, 0.0)
    });
    m.rank(1e-9)
}

/// Outcome of an isomorphism verification.
#[derive(Debug, Clone, PartialEq)]
pub struct IsoWitness {
    pub source: String,
    pub target: CliffordSignature,
    /// Human-readable image of each source generator.
    pub images: Vec<String>,
    pub checks: Vec<String>,
    pub generated_dim: usize,
    pub expected_dim: usize,
}

impl fmt::Display for IsoWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} ≅ {}", self.source, self.target)?;
        for im in &self.images {
            writeln!(f, "  {im}")?;
        }
        for c in &self.checks {
            writeln!(f, "  ok: {c}")?;
        }
        write!(f, "  generated dimension {} of {}", self.generated_dim, self.expected_dim)
    }
}

/// Image of a generator of the left (`right = false`) or right factor.
fn cl1_target_index(
    left: CliffordSignature,
    right: CliffordSignature,
    is_right: bool,
    i: usize,
) -> usize {
    let r_total = left.r + right.r;
    match (is_right, i < if is_right { right.r } else { left.r }) {
        (false, true) => i,
        (false, false) => r_total + (i - left.r),
        (true, true) => left.r + i,
        (true, false) => r_total + left.s + (i - right.r),
    }
}

fn blade_name(sig: CliffordSignature, b: Blade) -> String {
    if b == 0 {
        return "1".into();
    }
    (0..sig.generators())
        .filter(|i| b & (1 << i) != 0)
        .map(|i| {
            if i < sig.r {
                format!("e{}", i + 1)
            } else {
                format!("f{}", i - sig.r + 1)
            }
        })
        .collect::<Vec<_>>()
        .join("")
}

/// Blade-level map `Cl_{r,s} ⊗̂ Cl_{r',s'} → Cl_{r+r',s+s'}`.
pub fn cl1_map(
    x: &GradedTensorElement,
    target: CliffordSignature,
) -> CliffordElement {
    let (left, right) = (x.left, x.right);
    let mut out = CliffordElement::zero(target);
    for ((a, b), z) in x.terms() {
        let mut img = CliffordElement::scalar(target, z);
        for i in 0..left.generators() {
            if a & (1 << i) != 0 {
                let g = CliffordElement::generator(target, cl1_target_index(left, right, false, i));
                img = img.multiply(&g).expect("same signature");
            }
        }
        for j in 0..right.generators() {
            if b & (1 << j) != 0 {
                let g = CliffordElement::generator(target, cl1_target_index(left, right, true, j));
                img = img.multiply(&g).expect("same signature");
            }
        }
        out = out.add(&img).expect("same signature");
    }
    out
}

/// Witness for `Cl_{r,s} ⊗̂ Cl_{r',s'} ≅ Cl_{r+r',s+s'}`.
///
/// Generators of the left factor go to the leading `e`/`f` generators of
/// the target and those of the right factor to the following ones. The
/// matrix realization `a ⊗̂ b ↦ ρ(a)·t^{|b|} ⊗ ρ'(b)` picks the twist `t`
/// from `[1, ω]` deterministically, `ω` being the left grading operator.
pub fn witness_iso_cl1(r: usize, s: usize, r2: usize, s2: usize) -> Result<IsoWitness> {
    if r + s + r2 + s2 > MAX_GENERATORS {
        return Err(CliffordError::TooLarge(r + s + r2 + s2));
    }
    let left = CliffordSignature::new(r, s)?;
    let right = CliffordSignature::new(r2, s2)?;
    let target = CliffordSignature::new(r + r2, s + s2)?;
    let n = target.generators();
    let mut checks = Vec::new();

    // matrix realization of the graded tensor product
    let rl = standard_rep(left)?;
    let rr = standard_rep(right)?;
    let id_l = ComplexMatrix::identity(rl.dim());
    let id_r = ComplexMatrix::identity(rr.dim());
    let mut realized = None;
    for twist in [id_l.clone(), rl.omega.clone()] {
        let mut gens: Vec<ComplexMatrix> = rl.gens.iter().map(|g| g.kron(&id_r)).collect();
        gens.extend(rr.gens.iter().map(|g| twist.kron(g)));
        // reorder into target order: e's then f's
        let mut ordered = vec![ComplexMatrix::zeros(0, 0); n];
        for i in 0..left.generators() {
            ordered[cl1_target_index(left, right, false, i)] = gens[i].clone();
        }
        for j in 0..right.generators() {
            ordered[cl1_target_index(left, right, true, j)] = gens[left.generators() + j].clone();
        }
        let grading = rl.omega.kron(&rr.omega);
        if verify_generators(target, &ordered, Some(&grading)).is_ok() {
            realized = Some(ordered);
            break;
        }
    }
    let gens = realized.ok_or_else(|| {
        CliffordError::VerificationFailed("no twist realizes the graded tensor product".into())
    })?;
    checks.push("squares, adjoints, anticommutation and parity of generator images".into());

    let mut blades = Vec::with_capacity(target.dim());
    for b in 0..target.dim() {
        let mut m = ComplexMatrix::identity(gens.first().map_or(1, |g| g.nrows()));
        for (i, g) in gens.iter().enumerate() {
            if b & (1 << i) != 0 {
                m = &m * g;
            }
        }
        blades.push(m);
    }
    let generated_dim = span_rank(&blades);
    if generated_dim != target.dim() {
        return Err(CliffordError::VerificationFailed(format!(
            "images span {generated_dim} of {} dimensions",
            target.dim()
        )));
    }
    checks.push(format!("images generate all {} blades", target.dim()));

    // blade-level homomorphism on random elements with complex coefficients
    let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(
        (r * 1000 + s * 100 + r2 * 10 + s2) as u64,
    );
    for trial in 0..50 {
        let x = GradedTensorElement::random(left, right, &mut rng);
        let y = GradedTensorElement::random(left, right, &mut rng);
        let lhs = cl1_map(&x.multiply(&y)?, target);
        let rhs = cl1_map(&x, target).multiply(&cl1_map(&y, target))?;
        let scale = lhs.distance(&CliffordElement::zero(target)).max(1.0);
        if lhs.distance(&rhs) >= TOL * scale {
            return Err(CliffordError::VerificationFailed(format!(
                "map is not multiplicative on sample {trial}"
            )));
        }
        let lhs = cl1_map(&x.adjoint(), target);
        let rhs = cl1_map(&x, target).adjoint();
        if lhs.distance(&rhs) >= TOL * scale {
            return Err(CliffordError::VerificationFailed(format!(
                "map does not preserve adjoints on sample {trial}"
            )));
        }
    }
    checks.push("homomorphism and *-preservation on 50 random complex pairs".into());

    let mut images = Vec::new();
    for i in 0..left.generators() {
        let t = cl1_target_index(left, right, false, i);
        images.push(format!("{}⊗̂1 ↦ {}", blade_name(left, 1 << i), blade_name(target, 1 << t)));
    }
    for j in 0..right.generators() {
        let t = cl1_target_index(left, right, true, j);
        images.push(format!("1⊗̂{} ↦ {}", blade_name(right, 1 << j), blade_name(target, 1 << t)));
    }
    Ok(IsoWitness {
        source: format!("{left} ⊗̂ {right}"),
        target,
        images,
        checks,
        generated_dim,
        expected_dim: target.dim(),
    })
}

/// The quaternion units `1, iσ_x, iσ_y, iσ_z` as 2×2 matrices.
pub fn quaternion_units() -> [ComplexMatrix; 4] {
    [
        ComplexMatrix::identity(2),
        pauli_x().scale(I),
        pauli_y().scale(I),
        pauli_z().scale(I),
    ]
}

/// Witness for `ℍ ⊗ Cl_{1,1} ≅ Cl_{0,4}` with ℍ trivially graded, found by
/// exhaustive search over odd pure tensors `q ⊗ b`.
pub fn witness_iso_cl2() -> Result<IsoWitness> {
    let cl11 = CliffordSignature::new(1, 1)?;
    let rep = standard_rep(cl11)?;
    let target = CliffordSignature::new(0, 4)?;
    let qnames = ["1", "iσx", "iσy", "iσz"];
    let mut cands = Vec::new();
    for (qi, q) in quaternion_units().iter().enumerate() {
        for b in [0b01 as Blade, 0b10] {
            cands.push((
                format!("{}⊗{}", qnames[qi], blade_name(cl11, b)),
                q.kron(&rep.blade_matrix(b)),
            ));
        }
    }
    let grading = ComplexMatrix::identity(2).kron(&rep.omega);
    let k = cands.len();
    for a in 0..k {
        for b in a + 1..k {
            for c in b + 1..k {
                for d in c + 1..k {
                    let gens: Vec<ComplexMatrix> = [a, b, c, d].iter().map(|&i| cands[i].1.clone()).collect();
                    if verify_generators(target, &gens, Some(&grading)).is_err() {
                        continue;
                    }
                    let blades: Vec<ComplexMatrix> = (0..16u16)
                        .map(|bl| {
                            (0..4).filter(|i| bl & (1 << i) != 0).fold(ComplexMatrix::identity(4), |m, i| &m * &gens[i])
                        })
                        .collect();
                    let generated_dim = real_span_rank(&blades);
                    if generated_dim != 16 {
                        continue;
                    }
                    let images = [a, b, c, d]
                        .iter()
                        .enumerate()
                        .map(|(j, &i)| format!("{} ↦ f{}", cands[i].0, j + 1))
                        .collect();
                    return Ok(IsoWitness {
                        source: "ℍ ⊗ Cl_{1,1}".into(),
                        target,
                        images,
                        checks: vec![
                            "odd, anti-self-adjoint, square −1, pairwise anticommuting".into(),
                            "real span of the 16 blades is 16-dimensional".into(),
                        ],
                        generated_dim,
                        expected_dim: 16,
                    });
                }
            }
        }
    }
    Err(CliffordError::VerificationFailed(
        "no four odd pure tensors satisfy the relations of Cl_{0,4}".into(),
    ))
}

/// Real structure on `ℂl_{r+s}` whose fixed points are `Cl_{r,s}`:
/// conjugation of blade coefficients.
pub fn real_structure(sig: CliffordSignature) -> AntiLinearOp {
    AntiLinearOp::conjugation(sig.dim())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::compose_antilinear;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn sig(r: usize, s: usize) -> CliffordSignature {
        CliffordSignature::new(r, s).unwrap()
    }

    #[test]
    fn generator_squares() {
        let e = CliffordElement::generator(sig(1, 0), 0);
        assert_eq!(e.multiply(&e).unwrap(), CliffordElement::scalar(sig(1, 0), ONE));
        let f = CliffordElement::generator(sig(0, 1), 0);
        assert_eq!(f.multiply(&f).unwrap(), CliffordElement::scalar(sig(0, 1), -ONE));
    }

    #[test]
    fn generators_anticommute() {
        let g = sig(2, 1);
        for i in 0..3 {
            for j in 0..3 {
                if i == j {
                    continue;
                }
                let a = CliffordElement::generator(g, i);
                let b = CliffordElement::generator(g, j);
                let ab = a.multiply(&b).unwrap();
                let ba = b.multiply(&a).unwrap();
                assert!(ab.add(&ba).unwrap().distance(&CliffordElement::zero(g)) < TOL);
            }
        }
    }

    #[test]
    fn signature_mismatch() {
        let a = CliffordElement::generator(sig(1, 0), 0);
        let b = CliffordElement::generator(sig(0, 1), 0);
        assert!(matches!(a.multiply(&b), Err(CliffordError::SignatureMismatch(..))));
        assert!(CliffordSignature::new(5, 4).is_err());
    }

    #[test]
    fn blade_product_matches_rep() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for (r, s) in [(0, 0), (1, 0), (0, 1), (2, 1), (1, 3), (2, 2), (0, 4)] {
            let g = sig(r, s);
            let rep = standard_rep(g).unwrap();
            for _ in 0..10 {
                let x = CliffordElement::random(g, &mut rng);
                let y = CliffordElement::random(g, &mut rng);
                let lhs = rep.eval(&x.multiply(&y).unwrap());
                let rhs = &rep.eval(&x) * &rep.eval(&y);
                assert!((&lhs - &rhs).norm() < 1e-10);
                let adj = rep.eval(&x.adjoint());
                assert!((&adj - &rep.eval(&x).adjoint()).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn standard_rep_small_cases() {
        let r = standard_rep(sig(1, 0)).unwrap();
        assert_eq!(r.gens, vec![pauli_x()]);
        let r = standard_rep(sig(0, 1)).unwrap();
        assert!((&r.gens[0] - &crate::linalg::i_sigma_y()).norm() < TOL);
        let r = standard_rep(sig(2, 0)).unwrap();
        assert_eq!(r.gens, vec![pauli_x(), pauli_z()]);
    }

    #[test]
    fn standard_rep_is_faithful() {
        for n in 0..=6 {
            for r in 0..=n {
                let g = sig(r, n - r);
                let rep = standard_rep(g).unwrap();
                assert_eq!(rep.dim(), 1 << n.div_ceil(2));
                let blades: Vec<_> = (0..g.dim()).map(|b| rep.blade_matrix(b as Blade)).collect();
                assert_eq!(span_rank(&blades), g.dim(), "{g}");
                assert!(rep.omega.is_self_adjoint() && rep.omega.is_unitary());
            }
        }
    }

    #[test]
    fn koszul_rule_examples() {
        let l = sig(1, 0);
        let r = sig(1, 0);
        let e1 = GradedTensorElement::pure(1, 0, l, r, ONE);
        let e1p = GradedTensorElement::pure(0, 1, l, r, ONE);
        let both = GradedTensorElement::pure(1, 1, l, r, ONE);
        assert_eq!(e1.multiply(&e1p).unwrap(), both);
        assert!(e1p.multiply(&e1).unwrap().distance(&GradedTensorElement::pure(1, 1, l, r, -ONE)) < TOL);
        // even left factor: plain tensor product
        let ev = GradedTensorElement::pure(0, 0, l, r, ONE);
        assert_eq!(ev.multiply(&e1p).unwrap(), e1p);
    }

    #[test]
    fn graded_involution_sign() {
        // (e1 ⊗̂ f1)* = −(e1* ⊗̂ f1*) = −(e1 ⊗̂ (−f1)) = e1 ⊗̂ f1
        let (l, r) = (sig(1, 0), sig(0, 1));
        let x = GradedTensorElement::pure(1, 1, l, r, ONE);
        assert!(x.adjoint().distance(&x) < TOL);
        // an even left factor picks up no sign: (1 ⊗̂ f1)* = −(1 ⊗̂ f1)
        let y = GradedTensorElement::pure(0, 1, l, r, ONE);
        assert!(y.adjoint().distance(&GradedTensorElement::pure(0, 1, l, r, -ONE)) < TOL);
    }

    #[test]
    fn graded_tensor_associative_on_blades() {
        let l = sig(1, 1);
        let r = sig(1, 1);
        for a in 0..4u16 {
            for b in 0..4u16 {
                for c in 0..4u16 {
                    for d in 0..4u16 {
                        let x = GradedTensorElement::pure(a, b, l, r, ONE);
                        let y = GradedTensorElement::pure(c, d, l, r, ONE);
                        let z = GradedTensorElement::pure(b, c, l, r, ONE);
                        let lhs = x.multiply(&y).unwrap().multiply(&z).unwrap();
                        let rhs = x.multiply(&y.multiply(&z).unwrap()).unwrap();
                        assert!(lhs.distance(&rhs) < TOL);
                    }
                }
            }
        }
    }

    #[test]
    fn cl1_examples() {
        let w = witness_iso_cl1(1, 0, 0, 1).unwrap();
        assert_eq!(w.target, sig(1, 1));
        let w = witness_iso_cl1(0, 0, 2, 1).unwrap();
        assert_eq!(w.images, vec!["1⊗̂e1 ↦ e1", "1⊗̂e2 ↦ e2", "1⊗̂f1 ↦ f1"]);
        let w = witness_iso_cl1(1, 1, 1, 1).unwrap();
        assert_eq!(w.generated_dim, 16);
        assert!(witness_iso_cl1(3, 3, 2, 1).is_err());
    }

    #[test]
    fn cl2_witness() {
        let w = witness_iso_cl2().unwrap();
        assert_eq!(w.generated_dim, 16);
        assert_eq!(
            w.images,
            vec!["1⊗f1 ↦ f1", "iσx⊗e1 ↦ f2", "iσy⊗e1 ↦ f3", "iσz⊗e1 ↦ f4"]
        );
    }

    #[test]
    fn cl2_spec_candidates_fail() {
        // iσ_x ⊗ f squares to +1 when ℍ is trivially graded
        let rep = standard_rep(sig(0, 1)).unwrap();
        let q = quaternion_units();
        let x = q[1].kron(&rep.gens[0]);
        assert!((&(&x * &x) - &ComplexMatrix::identity(4)).norm() < TOL);
    }

    fn cl1_iso() -> ComplexMatrix {
        // a + b·x ↦ (a + b, a − b)
        ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[1.0, -1.0]])
    }

    fn cl01_iso() -> ComplexMatrix {
        // a + b·f ↦ (a − ib, a + ib)
        ComplexMatrix::from_rows(&[vec![ONE, -I], vec![ONE, I]])
    }

    #[test]
    fn real_structure_on_cl1_is_coordinate_conjugation() {
        let l = real_structure(sig(1, 0));
        let psi = cl1_iso();
        let transported = &(&psi * l.mat()) * &psi.inverse().unwrap().conj();
        assert!((&transported - &ComplexMatrix::identity(2)).norm() < TOL);
        // ψ is an algebra map: x² = 1 ↦ (1, 1)
        let x = CliffordElement::generator(sig(1, 0), 0);
        let img = psi.apply(&x.multiply(&x).unwrap().to_vector());
        assert!((img[0] - ONE).norm() < TOL && (img[1] - ONE).norm() < TOL);
    }

    #[test]
    fn real_structure_on_cl01_is_flip_conjugation() {
        let l = real_structure(sig(0, 1));
        let psi = cl01_iso();
        let transported = &(&psi * l.mat()) * &psi.inverse().unwrap().conj();
        assert!((&transported - &pauli_x()).norm() < TOL);
        let f = CliffordElement::generator(sig(0, 1), 0);
        let img = psi.apply(&f.to_vector());
        let sq = psi.apply(&f.multiply(&f).unwrap().to_vector());
        assert!((img[0] * img[0] - sq[0]).norm() < TOL && (img[1] * img[1] - sq[1]).norm() < TOL);
    }

    #[test]
    fn real_structure_fixes_real_span() {
        for (r, s) in [(1, 0), (0, 1), (2, 2), (1, 3)] {
            let g = sig(r, s);
            let l = real_structure(g);
            assert!(compose_antilinear(&l, &l).unwrap().as_scalar().is_some());
            // fixed points: v = conj(v), a real subspace of dimension 2^{r+s}
            let basis: Vec<ComplexMatrix> = (0..g.dim())
                .map(|b| {
                    let v = CliffordElement::blade(g, b as Blade, ONE).to_vector();
                    ComplexMatrix::from_columns(g.dim(), &[l.apply(&v)])
                })
                .collect();
            assert_eq!(real_span_rank(&basis), g.dim());
            // automorphism: l(xy) = l(x)l(y)
            let mut rng = ChaCha8Rng::seed_from_u64(3);
            let x = CliffordElement::random(g, &mut rng);
            let y = CliffordElement::random(g, &mut rng);
            let conj = |e: &CliffordElement| e.terms().fold(CliffordElement::zero(g), |acc, (b, z)| {
                acc.add(&CliffordElement::blade(g, b, z.conj())).unwrap()
            });
            let lhs = conj(&x.multiply(&y).unwrap());
            let rhs = conj(&x).multiply(&conj(&y)).unwrap();
            assert!(lhs.distance(&rhs) < 1e-10);
        }
    }
}
