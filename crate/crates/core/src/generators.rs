//! Concrete generator families.
//!
//! Qubit families are built from Pauli matrices, the qudit families from the
//! shift/clock (Weyl) pair. Multi-site operators follow one tensor layout
//! throughout: the leftmost Kronecker factor is the highest-index site, so
//! element `k` of a family reads `I ⊗ … ⊗ I ⊗ X ⊗ Z ⊗ … ⊗ Z` with `n − k − 1`
//! identities and a tail of `k` clock factors.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;

use crate::error::{Error, Result};
use crate::linalg::{
    self, anticommutator, sigma_x, sigma_y, sigma_z, tensor_all, ComplexMatrix, C64, I, ONE, ZERO,
};
use crate::math;
use crate::DEFAULT_MAX_DIM;

/// Which construction produced a [`GeneratorSet`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    Pauli,
    Weyl,
    Tau,
    /// The `2n` anti-Hermitian Γ_k.
    CliffordFull,
    /// Γ_k plus one extra odd product Γ_u.
    CliffordUniversal,
    /// Γ₀, Γ_kΓ_{k+1} and Γ_u.
    CliffordTwoLocal,
    /// The `2n` unitary torus generators T_k.
    TorusFull,
    /// Hermitian splits T⁺_k, T⁻_k of every T_k.
    TorusSplit,
    /// Splits of T₀ and T_k†T_{k+1}.
    TorusTwoLocal,
    Custom,
}

impl Family {
    pub const ALL: [Family; 10] = [
        Family::Pauli,
        Family::Weyl,
        Family::Tau,
        Family::CliffordFull,
        Family::CliffordUniversal,
        Family::CliffordTwoLocal,
        Family::TorusFull,
        Family::TorusSplit,
        Family::TorusTwoLocal,
        Family::Custom,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Pauli => "pauli",
            Family::Weyl => "weyl",
            Family::Tau => "tau",
            Family::CliffordFull => "clifford_full",
            Family::CliffordUniversal => "clifford_universal",
            Family::CliffordTwoLocal => "clifford_two_local",
            Family::TorusFull => "torus_full",
            Family::TorusSplit => "torus_split",
            Family::TorusTwoLocal => "torus_two_local",
            Family::Custom => "custom",
        }
    }

    pub fn from_name(s: &str) -> Option<Family> {
        Family::ALL.into_iter().find(|f| f.name() == s)
    }

    /// Whether every element is anti-Hermitian (usable by the closure engine).
    pub fn is_lie_family(self) -> bool {
        matches!(
            self,
            Family::CliffordFull
                | Family::CliffordUniversal
                | Family::CliffordTwoLocal
                | Family::TorusSplit
                | Family::TorusTwoLocal
        )
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Hermiticity {
    AntiHermitian,
    Hermitian,
    UnitaryNonHermitian,
    General,
}

impl Hermiticity {
    pub fn name(self) -> &'static str {
        match self {
            Hermiticity::AntiHermitian => "anti_hermitian",
            Hermiticity::Hermitian => "hermitian",
            Hermiticity::UnitaryNonHermitian => "unitary_non_hermitian",
            Hermiticity::General => "general",
        }
    }

    pub fn classify(m: &ComplexMatrix) -> Hermiticity {
        let tol = 1e-12 * m.max_abs().max(1.0);
        if m.is_anti_hermitian(tol) {
            Hermiticity::AntiHermitian
        } else if m.is_hermitian(tol) {
            Hermiticity::Hermitian
        } else if m.is_unitary(1e-12) {
            Hermiticity::UnitaryNonHermitian
        } else {
            Hermiticity::General
        }
    }
}

/// Which odd product of Γ's is adjoined to make the Clifford set universal.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum GammaUVariant {
    /// `i Γ₀Γ₁Γ₂`
    #[default]
    Three,
    /// `i Γ₀Γ₁Γ₂Γ₃`
    Four,
}

impl GammaUVariant {
    pub fn name(self) -> &'static str {
        match self {
            GammaUVariant::Three => "three",
            GammaUVariant::Four => "four",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "three" | "3" => Some(GammaUVariant::Three),
            "four" | "4" => Some(GammaUVariant::Four),
            _ => None,
        }
    }

    fn factors(self) -> usize {
        match self {
            GammaUVariant::Three => 3,
            GammaUVariant::Four => 4,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Generator {
    pub id: String,
    pub matrix: ComplexMatrix,
    /// Number of sites the matrix acts on non-trivially.
    pub locality: usize,
    pub hermiticity: Hermiticity,
}

impl Generator {
    fn new(id: impl Into<String>, matrix: ComplexMatrix, levels: usize, sites: usize) -> Self {
        let locality = linalg::locality(&matrix, levels, sites);
        let hermiticity = Hermiticity::classify(&matrix);
        Generator { id: id.into(), matrix, locality, hermiticity }
    }
}

/// An ordered, labelled list of generator matrices sharing dimension `lⁿ`.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorSet {
    pub family: Family,
    /// Number of sites.
    pub n: usize,
    /// Levels per site.
    pub l: usize,
    pub elements: Vec<Generator>,
}

impl GeneratorSet {
    /// Wraps arbitrary matrices as a custom family. All matrices must share
    /// dimension `l^n`.
    pub fn custom(n: usize, l: usize, elements: Vec<(String, ComplexMatrix)>) -> Result<Self> {
        let dim = checked_dim(l, n, DEFAULT_MAX_DIM)?;
        let mut out = Vec::with_capacity(elements.len());
        for (id, m) in elements {
            if m.dim() != dim {
                return Err(Error::DimensionMismatch { left: m.dim(), right: dim });
            }
            if out.iter().any(|g: &Generator| g.id == id) {
                return Err(Error::InvalidParameter(format!("duplicate generator id `{id}`")));
            }
            out.push(Generator::new(id, m, l, n));
        }
        Ok(GeneratorSet { family: Family::Custom, n, l, elements: out })
    }

    pub fn dim(&self) -> usize {
        self.elements.first().map_or_else(|| self.l.pow(self.n as u32), |g| g.matrix.dim())
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<&Generator> {
        self.elements.iter().find(|g| g.id == id)
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.elements.iter().position(|g| g.id == id)
    }

    pub fn matrices(&self) -> impl Iterator<Item = &ComplexMatrix> {
        self.elements.iter().map(|g| &g.matrix)
    }

    pub fn max_locality(&self) -> usize {
        self.elements.iter().map(|g| g.locality).max().unwrap_or(0)
    }

    /// Appends a generator, recomputing its locality and hermiticity.
    pub fn push(&mut self, id: impl Into<String>, matrix: ComplexMatrix) -> Result<()> {
        if matrix.dim() != self.dim() {
            return Err(Error::DimensionMismatch { left: matrix.dim(), right: self.dim() });
        }
        let id = id.into();
        if self.get(&id).is_some() {
            return Err(Error::InvalidParameter(format!("duplicate generator id `{id}`")));
        }
        self.elements.push(Generator::new(id, matrix, self.l, self.n));
        Ok(())
    }
}

/// Parameters that select one family.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FamilyParams {
    pub family: Family,
    pub n: usize,
    pub l: usize,
    pub gamma_u: GammaUVariant,
    pub max_dim: usize,
}

impl FamilyParams {
    pub fn new(family: Family, n: usize, l: usize) -> Self {
        FamilyParams { family, n, l, gamma_u: GammaUVariant::Three, max_dim: DEFAULT_MAX_DIM }
    }
}

/// Builds any non-custom family from its parameters.
pub fn build(p: &FamilyParams) -> Result<GeneratorSet> {
    match p.family {
        Family::Pauli => Ok(pauli()),
        Family::Weyl => weyl_pair(p.l),
        Family::Tau => tau(p.l),
        Family::CliffordFull => clifford_gammas_capped(p.n, p.max_dim),
        Family::CliffordUniversal => clifford_universal_capped(p.n, p.gamma_u, p.max_dim),
        Family::CliffordTwoLocal => two_local_clifford_set_capped(p.n, p.max_dim),
        Family::TorusFull => torus_t_capped(p.n, p.l, p.max_dim),
        Family::TorusSplit => torus_split_set_capped(p.n, p.l, p.max_dim),
        Family::TorusTwoLocal => two_local_torus_set_capped(p.n, p.l, p.max_dim),
        Family::Custom => Err(Error::InvalidParameter("custom families cannot be built from parameters".into())),
    }
}

fn checked_dim(l: usize, n: usize, cap: usize) -> Result<usize> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    if l < 2 {
        return Err(Error::InvalidParameter(format!("l must be at least 2, got {l}")));
    }
    let mut dim: usize = 1;
    for _ in 0..n {
        dim = dim.checked_mul(l).filter(|&d| d <= cap).ok_or(Error::Capacity {
            requested: l.checked_pow(n as u32).unwrap_or(usize::MAX),
            cap,
        })?;
    }
    Ok(dim)
}

/// `e^{2πi·num/den}`, exact at quarter turns.
pub fn root_of_unity(num: i64, den: u32) -> C64 {
    let den_i = den as i64;
    let k = num.rem_euclid(den_i);
    if (4 * k) % den_i == 0 {
        return match (4 * k) / den_i {
            0 => ONE,
            1 => I,
            2 => -ONE,
            _ => -I,
        };
    }
    let angle = 2.0 * PI * k as f64 / den as f64;
    C64::new(math::cos(angle), math::sin(angle))
}

/// `ζ = e^{2πi/l}`.
pub fn zeta(l: usize) -> C64 {
    root_of_unity(1, l as u32)
}

/// `μ^p` with `μ = e^{iπ/l}`, so `ζ = μ²`.
pub fn mu_pow(l: usize, p: i64) -> C64 {
    root_of_unity(p, 2 * l as u32)
}

pub fn pauli() -> GeneratorSet {
    let elements = vec![
        Generator::new("X", sigma_x(), 2, 1),
        Generator::new("Y", sigma_y(), 2, 1),
        Generator::new("Z", sigma_z(), 2, 1),
    ];
    GeneratorSet { family: Family::Pauli, n: 1, l: 2, elements }
}

/// Cyclic shift `U[k][j] = δ_{k+1 mod l, j}`.
pub fn shift(l: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(l, |k, j| if (k + 1) % l == j { ONE } else { ZERO })
}

/// Clock `V = diag(ζ^k)`.
pub fn clock(l: usize) -> ComplexMatrix {
    let diag: Vec<C64> = (0..l).map(|k| root_of_unity(k as i64, l as u32)).collect();
    ComplexMatrix::from_diag(&diag)
}

/// The Weyl pair `U`, `V` with `UV = ζVU`.
pub fn weyl_pair(l: usize) -> Result<GeneratorSet> {
    checked_dim(l, 1, DEFAULT_MAX_DIM)?;
    let elements = vec![Generator::new("U", shift(l), l, 1), Generator::new("V", clock(l), l, 1)];
    Ok(GeneratorSet { family: Family::Weyl, n: 1, l, elements })
}

fn tau_matrices(l: usize) -> [ComplexMatrix; 3] {
    let u = shift(l);
    let v = clock(l);
    // ζ^{(l−1)/2} is taken as μ^{l−1}.
    let ty = (&u * &v).scale(mu_pow(l, l as i64 - 1));
    [u, ty, v]
}

/// `τx = U`, `τy = μ^{l−1} UV`, `τz = V`.
pub fn tau(l: usize) -> Result<GeneratorSet> {
    checked_dim(l, 1, DEFAULT_MAX_DIM)?;
    let [tx, ty, tz] = tau_matrices(l);
    let elements = vec![
        Generator::new("tx", tx, l, 1),
        Generator::new("ty", ty, l, 1),
        Generator::new("tz", tz, l, 1),
    ];
    Ok(GeneratorSet { family: Family::Tau, n: 1, l, elements })
}

// I^{⊗(n−k−1)} ⊗ active ⊗ tail^{⊗k}
fn site_string(n: usize, k: usize, identity: &ComplexMatrix, active: &ComplexMatrix, tail: &ComplexMatrix, cap: usize) -> Result<ComplexMatrix> {
    let mut factors = Vec::with_capacity(n);
    factors.extend(core::iter::repeat_n(identity.clone(), n - k - 1));
    factors.push(active.clone());
    factors.extend(core::iter::repeat_n(tail.clone(), k));
    tensor_all(&factors, cap)
}

pub fn clifford_gammas(n: usize) -> Result<GeneratorSet> {
    clifford_gammas_capped(n, DEFAULT_MAX_DIM)
}

/// The `2n` anti-Hermitian Clifford generators Γ₀ … Γ_{2n−1}.
pub fn clifford_gammas_capped(n: usize, cap: usize) -> Result<GeneratorSet> {
    checked_dim(2, n, cap)?;
    let (id, x, y, z) = (ComplexMatrix::identity(2), sigma_x(), sigma_y(), sigma_z());
    let mut elements = Vec::with_capacity(2 * n);
    for k in 0..n {
        for (j, active) in [&x, &y].into_iter().enumerate() {
            let m = site_string(n, k, &id, active, &z, cap)?.scale(I);
            elements.push(Generator::new(format!("G{}", 2 * k + j), m, 2, n));
        }
    }
    Ok(GeneratorSet { family: Family::CliffordFull, n, l: 2, elements })
}

/// `Γ_u = iΓ₀Γ₁Γ₂` or `Γ_{u'} = iΓ₀Γ₁Γ₂Γ₃`.
pub fn gamma_u(n: usize, variant: GammaUVariant) -> Result<ComplexMatrix> {
    let needed = variant.factors();
    if 2 * n < needed {
        return Err(Error::InvalidParameter(format!(
            "the {}-factor Γ_u needs n ≥ {}, got n = {n}",
            needed,
            needed.div_ceil(2)
        )));
    }
    gamma_u_from(&clifford_gammas(n)?, variant)
}

fn gamma_u_from(gammas: &GeneratorSet, variant: GammaUVariant) -> Result<ComplexMatrix> {
    let needed = variant.factors();
    if gammas.len() < needed {
        return Err(Error::InvalidParameter(format!("the {needed}-factor Γ_u needs n ≥ {}", needed.div_ceil(2))));
    }
    let prod = gammas.elements[..needed]
        .iter()
        .skip(1)
        .fold(gammas.elements[0].matrix.clone(), |acc, g| &acc * &g.matrix);
    Ok(prod.scale(I))
}

fn gamma_u_id(variant: GammaUVariant) -> &'static str {
    match variant {
        GammaUVariant::Three => "Gu",
        GammaUVariant::Four => "Gu4",
    }
}

pub fn clifford_universal(n: usize, variant: GammaUVariant) -> Result<GeneratorSet> {
    clifford_universal_capped(n, variant, DEFAULT_MAX_DIM)
}

/// Γ_k together with Γ_u. At `n = 1` there is no Γ₂, and Γ₀Γ₁ takes the
/// place of Γ_u (it is already in the span of the commutators, so the
/// closure does not grow).
pub fn clifford_universal_capped(n: usize, variant: GammaUVariant, cap: usize) -> Result<GeneratorSet> {
    let mut set = clifford_gammas_capped(n, cap)?;
    if n == 1 {
        log::warn!("n = 1 has no Γ₂; using Γ₀Γ₁ in place of Γ_u");
        let m = &set.elements[0].matrix * &set.elements[1].matrix;
        set.push("G0G1", m)?;
    } else {
        let gu = gamma_u_from(&set, variant)?;
        set.push(gamma_u_id(variant), gu)?;
    }
    set.family = Family::CliffordUniversal;
    Ok(set)
}

pub fn two_local_clifford_set(n: usize) -> Result<GeneratorSet> {
    two_local_clifford_set_capped(n, DEFAULT_MAX_DIM)
}

/// Γ₀, the neighbour products Γ_kΓ_{k+1} (k = 0 … 2n−2), and Γ_u.
pub fn two_local_clifford_set_capped(n: usize, cap: usize) -> Result<GeneratorSet> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("two-local Clifford set needs n ≥ 2, got {n}")));
    }
    let gammas = clifford_gammas_capped(n, cap)?;
    let g = &gammas.elements;
    let mut elements = Vec::with_capacity(2 * n + 1);
    elements.push(g[0].clone());
    for k in 0..(2 * n - 1) {
        let m = &g[k].matrix * &g[k + 1].matrix;
        elements.push(Generator::new(format!("G{}G{}", k, k + 1), m, 2, n));
    }
    elements.push(Generator::new("Gu", gamma_u_from(&gammas, GammaUVariant::Three)?, 2, n));
    Ok(GeneratorSet { family: Family::CliffordTwoLocal, n, l: 2, elements })
}

pub fn torus_t(n: usize, l: usize) -> Result<GeneratorSet> {
    torus_t_capped(n, l, DEFAULT_MAX_DIM)
}

/// The `2n` torus generators T_k built from τx, τy with τz tails.
pub fn torus_t_capped(n: usize, l: usize, cap: usize) -> Result<GeneratorSet> {
    checked_dim(l, n, cap)?;
    let [tx, ty, tz] = tau_matrices(l);
    let id = ComplexMatrix::identity(l);
    let mut elements = Vec::with_capacity(2 * n);
    for k in 0..n {
        for (j, active) in [&tx, &ty].into_iter().enumerate() {
            let m = site_string(n, k, &id, active, &tz, cap)?;
            elements.push(Generator::new(format!("T{}", 2 * k + j), m, l, n));
        }
    }
    Ok(GeneratorSet { family: Family::TorusFull, n, l, elements })
}

/// `T⁺ = i(T + T†)`, `T⁻ = T − T†`.
pub fn hermitian_split(t: &ComplexMatrix) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let deviation = t.unitary_deviation();
    if deviation > crate::DEFAULT_PREDICATE_TOL {
        return Err(Error::NotUnitary { deviation });
    }
    Ok(hermitian_split_unchecked(t))
}

fn hermitian_split_unchecked(t: &ComplexMatrix) -> (ComplexMatrix, ComplexMatrix) {
    let td = t.adjoint();
    ((t + &td).scale(I), t - &td)
}

// Split every (id, matrix) and drop zero halves.
fn split_elements(items: Vec<(String, ComplexMatrix)>, l: usize, n: usize) -> Result<Vec<Generator>> {
    let mut out = Vec::with_capacity(2 * items.len());
    for (id, t) in items {
        let (plus, minus) = hermitian_split(&t)?;
        for (suffix, m) in [("+", plus), ("-", minus)] {
            if m.frob_norm() < 1e-12 {
                log::info!("dropping zero split {id}{suffix}");
                continue;
            }
            out.push(Generator::new(format!("{id}{suffix}"), m, l, n));
        }
    }
    Ok(out)
}

pub fn torus_split_set(n: usize, l: usize) -> Result<GeneratorSet> {
    torus_split_set_capped(n, l, DEFAULT_MAX_DIM)
}

/// Hermitian splits of every T_k; zero halves are dropped.
pub fn torus_split_set_capped(n: usize, l: usize, cap: usize) -> Result<GeneratorSet> {
    let t = torus_t_capped(n, l, cap)?;
    let items = t.elements.into_iter().map(|g| (g.id, g.matrix)).collect();
    let elements = split_elements(items, l, n)?;
    Ok(GeneratorSet { family: Family::TorusSplit, n, l, elements })
}

pub fn two_local_torus_set(n: usize, l: usize) -> Result<GeneratorSet> {
    two_local_torus_set_capped(n, l, DEFAULT_MAX_DIM)
}

/// Hermitian splits of T₀ and of T_k†T_{k+1} (k = 0 … 2n−2). The id
/// `T{k}dT{k+1}` stands for T_k†T_{k+1}.
pub fn two_local_torus_set_capped(n: usize, l: usize, cap: usize) -> Result<GeneratorSet> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("two-local torus set needs n ≥ 2, got {n}")));
    }
    let t = torus_t_capped(n, l, cap)?;
    let g = &t.elements;
    let mut items = Vec::with_capacity(2 * n);
    items.push(("T0".to_string(), g[0].matrix.clone()));
    for k in 0..(2 * n - 1) {
        items.push((format!("T{}dT{}", k, k + 1), &g[k].matrix.adjoint() * &g[k + 1].matrix));
    }
    let elements = split_elements(items, l, n)?;
    Ok(GeneratorSet { family: Family::TorusTwoLocal, n, l, elements })
}

/// One checked relation and its worst violation.
#[derive(Clone, Debug, PartialEq)]
pub struct RelationCheck {
    pub relation: String,
    /// Number of index tuples checked.
    pub cases: usize,
    pub max_violation: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RelationReport {
    pub family: Family,
    pub n: usize,
    pub l: usize,
    pub checks: Vec<RelationCheck>,
    pub max_violation: f64,
}

impl RelationReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.max_violation <= tol
    }
}

struct Checks(Vec<RelationCheck>);

impl Checks {
    fn add(&mut self, relation: &str, violations: impl IntoIterator<Item = f64>) {
        let mut cases = 0;
        let mut max_violation: f64 = 0.0;
        for v in violations {
            cases += 1;
            max_violation = max_violation.max(v);
        }
        self.0.push(RelationCheck { relation: relation.into(), cases, max_violation });
    }
}

// max |a·b − ph·b·a|
fn twisted_commutation(a: &ComplexMatrix, b: &ComplexMatrix, ph: C64) -> f64 {
    (&(a * b) - &(b * a).scale(ph)).max_abs()
}

fn power_violation(m: &ComplexMatrix, p: usize) -> f64 {
    m.pow(p as u64).max_abs_diff(&ComplexMatrix::identity(m.dim()))
}

fn anticommutation_violations(ms: &[&ComplexMatrix], diag: f64) -> Vec<f64> {
    let dim = ms.first().map_or(1, |m| m.dim());
    let mut out = Vec::new();
    for j in 0..ms.len() {
        for k in j..ms.len() {
            let ac = anticommutator(ms[j], ms[k]).expect("generators share a dimension");
            let expect = if j == k { ComplexMatrix::identity(dim).scale_real(diag) } else { ComplexMatrix::zeros(dim) };
            out.push(ac.max_abs_diff(&expect));
        }
    }
    out
}

/// Evaluates every defining relation of the set's family and reports the
/// largest entrywise violation.
pub fn relation_report(gens: &GeneratorSet) -> Result<RelationReport> {
    let mut checks = Checks(Vec::new());
    let mats: Vec<&ComplexMatrix> = gens.matrices().collect();
    let l = gens.l;
    let z = zeta(l);
    let anti_hermitian = || mats.iter().map(|m| m.anti_hermitian_deviation()).collect::<Vec<_>>();
    let locality_excess = || gens.elements.iter().map(|g| g.locality.saturating_sub(2) as f64).collect::<Vec<_>>();

    match gens.family {
        Family::Pauli => {
            checks.add("{σμ,σν} = 2δ_{μν}I", anticommutation_violations(&mats, 2.0));
            checks.add("σxσy = iσz", [(mats[0] * mats[1]).max_abs_diff(&mats[2].scale(I))]);
        }
        Family::Weyl => {
            checks.add("UV = ζVU", [twisted_commutation(mats[0], mats[1], z)]);
            checks.add("U^l = V^l = I", mats.iter().map(|m| power_violation(m, l)));
        }
        Family::Tau => {
            checks.add("τxτy = ζτyτx", [twisted_commutation(mats[0], mats[1], z)]);
            checks.add("τyτz = ζτzτy", [twisted_commutation(mats[1], mats[2], z)]);
            checks.add("τxτz = ζτzτx", [twisted_commutation(mats[0], mats[2], z)]);
            checks.add("τμ^l = I", mats.iter().map(|m| power_violation(m, l)));
        }
        Family::CliffordFull | Family::CliffordUniversal => {
            let gammas = &mats[..2 * gens.n];
            checks.add("{Γk,Γj} = −2δ_{kj}I", anticommutation_violations(gammas, -2.0));
            checks.add("anti-Hermitian", anti_hermitian());
        }
        Family::CliffordTwoLocal | Family::TorusTwoLocal => {
            checks.add("anti-Hermitian", anti_hermitian());
            checks.add("locality ≤ 2", locality_excess());
        }
        Family::TorusFull => {
            let mut pairs = Vec::new();
            for j in 0..mats.len() {
                for k in (j + 1)..mats.len() {
                    pairs.push(twisted_commutation(mats[j], mats[k], z));
                }
            }
            checks.add("TjTk = ζTkTj (j < k)", pairs);
            checks.add("Tk^l = I", mats.iter().map(|m| power_violation(m, l)));
        }
        Family::TorusSplit => {
            checks.add("anti-Hermitian", anti_hermitian());
        }
        Family::Custom => {
            return Err(Error::InvalidParameter("custom families have no defining relations".into()));
        }
    }
    let max_violation = checks.0.iter().map(|c| c.max_violation).fold(0.0, f64::max);
    Ok(RelationReport { family: gens.family, n: gens.n, l, checks: checks.0, max_violation })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn max_dev(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
        a.max_abs_diff(b)
    }

    #[test]
    fn pauli_identities() {
        let p = pauli();
        let [x, y, z] = [&p.elements[0].matrix, &p.elements[1].matrix, &p.elements[2].matrix];
        assert_eq!(x * y, z.scale(I));
        for s in [x, y, z] {
            assert_eq!(s * s, ComplexMatrix::identity(2));
            assert_eq!(s.trace(), ZERO);
        }
        assert!(relation_report(&p).unwrap().max_violation == 0.0);
    }

    #[test]
    fn weyl_pair_relations() {
        let w = weyl_pair(3).unwrap();
        let (u, v) = (&w.elements[0].matrix, &w.elements[1].matrix);
        assert!(max_dev(&(u * v), &(v * u).scale(zeta(3))) < 1e-12);
        for l in 2..=6 {
            let w = weyl_pair(l).unwrap();
            for g in &w.elements {
                assert!(power_violation(&g.matrix, l) < 1e-12);
                assert!(g.matrix.is_unitary(1e-12));
            }
        }
        let w2 = weyl_pair(2).unwrap();
        assert_eq!(w2.elements[0].matrix, sigma_x());
        assert_eq!(w2.elements[1].matrix, sigma_z());
        assert!(weyl_pair(1).is_err());
    }

    #[test]
    fn tau_relations() {
        let t = tau(3).unwrap();
        let r = relation_report(&t).unwrap();
        assert!(r.max_violation < 1e-12, "{r:?}");
        for l in 2..=5 {
            let t = tau(l).unwrap();
            for g in &t.elements {
                assert!(power_violation(&g.matrix, l) < 1e-12, "l = {l}, {}", g.id);
            }
        }
        let t2 = tau(2).unwrap();
        assert_eq!(t2.elements[0].matrix, sigma_x());
        assert_eq!(t2.elements[1].matrix, sigma_y());
        assert_eq!(t2.elements[2].matrix, sigma_z());
    }

    #[test]
    fn clifford_anticommutation() {
        for n in 1..=3 {
            let g = clifford_gammas(n).unwrap();
            assert_eq!(g.len(), 2 * n);
            let r = relation_report(&g).unwrap();
            assert!(r.max_violation <= 1e-12, "n = {n}: {r:?}");
            for e in &g.elements {
                let sq = &e.matrix * &e.matrix;
                assert_eq!(sq, ComplexMatrix::identity(1 << n).scale_real(-1.0));
                assert_eq!(e.hermiticity, Hermiticity::AntiHermitian);
            }
        }
    }

    #[test]
    fn clifford_n1_and_locality() {
        let g = clifford_gammas(1).unwrap();
        assert_eq!(g.elements[0].matrix, sigma_x().scale(I));
        assert_eq!(g.elements[1].matrix, sigma_y().scale(I));
        let g3 = clifford_gammas(3).unwrap();
        assert_eq!(g3.elements[4].locality, 3);
        for (k, e) in g3.elements.iter().enumerate() {
            assert_eq!(e.locality, k / 2 + 1);
        }
    }

    #[test]
    fn gamma_u_shapes() {
        let gu = gamma_u(2, GammaUVariant::Three).unwrap();
        assert!(gu.is_anti_hermitian(1e-12));
        let x_i = tensor_all(&[sigma_x(), ComplexMatrix::identity(2)], 16).unwrap().scale(I);
        assert!(max_dev(&gu, &x_i) < 1e-15);
        assert_eq!(linalg::locality(&gu, 2, 2), 1);
        let gu4 = gamma_u(2, GammaUVariant::Four).unwrap();
        assert!(gu4.is_anti_hermitian(1e-12));
        assert!(gamma_u(1, GammaUVariant::Three).is_err());
        assert!(gamma_u(3, GammaUVariant::Three).map(|m| linalg::locality(&m, 2, 3) <= 2).unwrap());
    }

    #[test]
    fn torus_relations() {
        for (n, l) in [(1, 3), (2, 3), (2, 2), (1, 2), (1, 5)] {
            let t = torus_t(n, l).unwrap();
            let r = relation_report(&t).unwrap();
            assert!(r.max_violation <= 1e-12, "({n},{l}): {r:?}");
        }
        let t = torus_t(2, 3).unwrap();
        assert!(t.elements.iter().all(|g| g.hermiticity == Hermiticity::UnitaryNonHermitian));
    }

    #[test]
    fn torus_at_l2_matches_clifford() {
        for n in 1..=3 {
            let t = torus_t(n, 2).unwrap();
            let g = clifford_gammas(n).unwrap();
            for (te, ge) in t.elements.iter().zip(&g.elements) {
                assert!(max_dev(&te.matrix.scale(I), &ge.matrix) < 1e-15);
            }
        }
    }

    #[test]
    fn hermitian_split_examples() {
        let (p, m) = hermitian_split(&ComplexMatrix::identity(2)).unwrap();
        assert_eq!(p, ComplexMatrix::identity(2).scale(C64::new(0.0, 2.0)));
        assert_eq!(m, ComplexMatrix::zeros(2));
        let (p, m) = hermitian_split(&sigma_x()).unwrap();
        assert_eq!(p, sigma_x().scale(C64::new(0.0, 2.0)));
        assert_eq!(m, ComplexMatrix::zeros(2));
        let (p, m) = hermitian_split(&shift(3)).unwrap();
        assert!(p.is_anti_hermitian(1e-12) && m.is_anti_hermitian(1e-12));
        assert!(matches!(hermitian_split(&sigma_x().scale_real(2.0)), Err(Error::NotUnitary { .. })));
    }

    #[test]
    fn two_local_clifford() {
        for n in 2..=3 {
            let s = two_local_clifford_set(n).unwrap();
            assert_eq!(s.len(), 2 * n + 1);
            assert!(s.elements.iter().all(|g| g.matrix.is_anti_hermitian(1e-12)));
            assert!(s.max_locality() <= 2);
        }
        assert_eq!(two_local_clifford_set(3).unwrap().max_locality(), 2);
        assert!(two_local_clifford_set(1).is_err());
    }

    #[test]
    fn two_local_torus() {
        let s = two_local_torus_set(2, 3).unwrap();
        // Nothing is dropped at (2,3): 4 source matrices, two halves each.
        assert_eq!(s.len(), 8);
        assert!(s.elements.iter().all(|g| g.matrix.is_anti_hermitian(1e-12) && g.locality <= 2));
        let r = relation_report(&s).unwrap();
        assert!(r.max_violation <= 1e-12);
    }

    #[test]
    fn zero_halves_dropped_for_qubits() {
        // At l = 2 every T_k is Hermitian, so the T⁻ halves vanish.
        let s = torus_split_set(2, 2).unwrap();
        assert_eq!(s.len(), 4);
        assert!(s.elements.iter().all(|g| g.id.ends_with('+')));
    }

    #[test]
    fn deterministic_construction() {
        assert_eq!(torus_t(2, 3).unwrap(), torus_t(2, 3).unwrap());
        assert_eq!(two_local_clifford_set(3).unwrap(), two_local_clifford_set(3).unwrap());
    }

    #[test]
    fn capacity_errors() {
        assert!(matches!(clifford_gammas_capped(5, 16), Err(Error::Capacity { .. })));
        assert!(matches!(torus_t_capped(3, 3, 26), Err(Error::Capacity { .. })));
    }

    #[test]
    fn custom_family_has_no_relations() {
        let s = GeneratorSet::custom(1, 2, vec![("A".into(), sigma_x().scale(I))]).unwrap();
        assert!(relation_report(&s).is_err());
    }

    #[test]
    fn roots_exact_at_quarter_turns() {
        assert_eq!(root_of_unity(1, 4), I);
        assert_eq!(root_of_unity(-1, 2), -ONE);
        assert_eq!(mu_pow(2, 1), I);
        assert!((mu_pow(3, 2) - zeta(3)).norm() < 1e-15);
    }
}
