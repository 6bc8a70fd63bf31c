//! Real Lie closure of a set of anti-Hermitian matrices.
//!
//! [`closure`] runs a breadth-first commutator sweep. Every admitted element
//! carries a recipe: a commutator tree whose leaves are primitive generators,
//! plus the Gram-Schmidt data that turns the tree's value into the
//! orthonormal basis element. The compiler realizes basis elements from these
//! trees.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::generators::{self, Family, GammaUVariant, GeneratorSet};
use crate::linalg::{frob_inner_unchecked, ComplexMatrix};
use crate::DEFAULT_PREDICATE_TOL;

/// Default admission tolerance; residuals must exceed `tol · N`.
pub const DEFAULT_CLOSURE_TOL: f64 = 1e-8;

/// Default relative residual accepted by [`LieBasis::membership`].
pub const DEFAULT_MEMBERSHIP_TOL: f64 = 1e-8;

// Projection coefficients below this are not recorded as corrections.
const CORRECTION_EPS: f64 = 1e-15;

/// One node of a commutator recipe.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RecipeNode {
    /// A primitive generator, by index into the generator set.
    Leaf(usize),
    /// `[raw_a, raw_b]` over the raw trees of two earlier basis elements.
    Comm(usize, usize),
}

/// How basis element `i` is obtained from primitive generators:
///
/// `b_i = scale · (raw_i − Σ_k r_k · b_k)` over `corrections = [(k, r_k)]`,
/// where `raw_i` is the value of the commutator tree rooted at `node`.
#[derive(Clone, Debug, PartialEq)]
pub struct Recipe {
    pub node: RecipeNode,
    pub scale: f64,
    pub corrections: Vec<(usize, f64)>,
    /// BFS generation; 0 for primitive generators.
    pub generation: usize,
    /// Commutator nesting depth of the tree.
    pub depth: usize,
}

/// Orthonormal basis of a generated Lie algebra, with recipes.
#[derive(Clone, Debug)]
pub struct LieBasis {
    dim: usize,
    generator_ids: Vec<String>,
    basis: Vec<ComplexMatrix>,
    recipes: Vec<Recipe>,
    // Unit-norm tree values: unit_i = raw_i / raw_norm_i. A Comm node has
    // unit_i = [unit_a, unit_b] / bracket_norm_i; a leaf has bracket_norm = 1.
    unit: Vec<ComplexMatrix>,
    raw_norm: Vec<f64>,
    bracket_norm: Vec<f64>,
}

/// Result of projecting a matrix onto a [`LieBasis`].
#[derive(Clone, Debug, PartialEq)]
pub enum Membership {
    Member {
        /// `c_j = ⟨b_j, a⟩`.
        coefficients: Vec<f64>,
        /// `‖a − Σ c_j b_j‖_F / ‖a‖_F`.
        residual: f64,
    },
    NotMember {
        residual: f64,
    },
}

impl Membership {
    pub fn is_member(&self) -> bool {
        matches!(self, Membership::Member { .. })
    }

    pub fn residual(&self) -> f64 {
        match self {
            Membership::Member { residual, .. } | Membership::NotMember { residual } => *residual,
        }
    }
}

impl LieBasis {
    /// Matrix dimension `N`.
    pub fn matrix_dim(&self) -> usize {
        self.dim
    }

    /// Dimension of `u(N)`, i.e. `N²`.
    pub fn dim_ambient(&self) -> usize {
        self.dim * self.dim
    }

    /// Dimension of the generated algebra.
    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis(&self) -> &[ComplexMatrix] {
        &self.basis
    }

    pub fn recipes(&self) -> &[Recipe] {
        &self.recipes
    }

    pub fn generator_ids(&self) -> &[String] {
        &self.generator_ids
    }

    pub fn generations(&self) -> Vec<usize> {
        self.recipes.iter().map(|r| r.generation).collect()
    }

    /// Number of elements admitted in each generation.
    pub fn generation_sizes(&self) -> Vec<usize> {
        let mut sizes: Vec<usize> = Vec::new();
        for r in &self.recipes {
            if sizes.len() <= r.generation {
                sizes.resize(r.generation + 1, 0);
            }
            sizes[r.generation] += 1;
        }
        sizes
    }

    pub fn max_depth(&self) -> usize {
        self.recipes.iter().map(|r| r.depth).max().unwrap_or(0)
    }

    /// Unit-norm value of the raw tree of element `i`.
    pub(crate) fn unit_value(&self, i: usize) -> &ComplexMatrix {
        &self.unit[i]
    }

    /// `‖[unit_a, unit_b]‖` for a commutator node, 1 for a leaf.
    pub(crate) fn bracket_norm(&self, i: usize) -> f64 {
        self.bracket_norm[i]
    }

    /// `‖raw_i‖_F`.
    pub fn raw_norm(&self, i: usize) -> f64 {
        self.raw_norm[i]
    }

    /// The raw tree of element `i` as an s-expression over generator ids,
    /// e.g. `(comm G0 (comm G0G1 Gu))`.
    pub fn sexpr(&self, i: usize) -> String {
        match self.recipes[i].node {
            RecipeNode::Leaf(g) => self.generator_ids[g].clone(),
            RecipeNode::Comm(a, b) => format!("(comm {} {})", self.sexpr(a), self.sexpr(b)),
        }
    }

    /// Projects `a` onto the basis. `a` is a member when the relative
    /// residual is at most `tol`.
    pub fn membership(&self, a: &ComplexMatrix, tol: f64) -> Result<Membership> {
        if a.dim() != self.dim {
            return Err(Error::DimensionMismatch { left: a.dim(), right: self.dim });
        }
        let norm = a.frob_norm();
        let coefficients: Vec<f64> = self.basis.iter().map(|b| frob_inner_unchecked(b, a)).collect();
        let mut rem = a.clone();
        for (c, b) in coefficients.iter().zip(&self.basis) {
            rem.axpy(-c, b);
        }
        let residual = if norm == 0.0 { 0.0 } else { rem.frob_norm() / norm };
        Ok(if residual <= tol {
            Membership::Member { coefficients, residual }
        } else {
            Membership::NotMember { residual }
        })
    }

    pub fn contains(&self, a: &ComplexMatrix) -> bool {
        self.membership(a, DEFAULT_MEMBERSHIP_TOL).map(|m| m.is_member()).unwrap_or(false)
    }

    /// Evaluates the raw commutator tree of element `i` from the primitive
    /// matrices in `gens`.
    pub fn evaluate_raw(&self, i: usize, gens: &GeneratorSet) -> Result<ComplexMatrix> {
        let mut memo = BTreeMap::new();
        self.raw_memo(i, gens, &mut memo)
    }

    fn raw_memo(&self, i: usize, gens: &GeneratorSet, memo: &mut BTreeMap<usize, ComplexMatrix>) -> Result<ComplexMatrix> {
        if let Some(m) = memo.get(&i) {
            return Ok(m.clone());
        }
        let value = match self.recipes[i].node {
            RecipeNode::Leaf(g) => {
                let id = &self.generator_ids[g];
                gens.get(id).ok_or_else(|| Error::UnknownGenerator(id.clone()))?.matrix.clone()
            }
            RecipeNode::Comm(a, b) => {
                let x = self.raw_memo(a, gens, memo)?;
                let y = self.raw_memo(b, gens, memo)?;
                crate::linalg::commutator(&x, &y)?
            }
        };
        memo.insert(i, value.clone());
        Ok(value)
    }

    /// Rebuilds every basis element from its recipe, using only the
    /// primitive generators. Element `i` of the result should match
    /// `basis()[i]`.
    pub fn evaluate_recipes(&self, gens: &GeneratorSet) -> Result<Vec<ComplexMatrix>> {
        let mut raw = BTreeMap::new();
        let mut out: Vec<ComplexMatrix> = Vec::with_capacity(self.len());
        for (i, recipe) in self.recipes.iter().enumerate() {
            let mut m = self.raw_memo(i, gens, &mut raw)?;
            for &(k, r) in &recipe.corrections {
                m.axpy(-r, &out[k]);
            }
            out.push(m.scale_real(recipe.scale));
        }
        Ok(out)
    }

    /// Largest `‖recipe_i − b_i‖_F` over the basis.
    pub fn recipe_fidelity(&self, gens: &GeneratorSet) -> Result<f64> {
        let rebuilt = self.evaluate_recipes(gens)?;
        Ok(rebuilt.iter().zip(&self.basis).map(|(r, b)| (r - b).frob_norm()).fold(0.0, f64::max))
    }

    /// Largest `|⟨b_i, b_j⟩ − δ_ij|`.
    pub fn orthonormality_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.len() {
            for j in i..self.len() {
                let g = frob_inner_unchecked(&self.basis[i], &self.basis[j]);
                let want = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((g - want).abs());
            }
        }
        worst
    }
}

struct Builder {
    dim: usize,
    threshold: f64,
    basis: Vec<ComplexMatrix>,
    recipes: Vec<Recipe>,
    unit: Vec<ComplexMatrix>,
    raw_norm: Vec<f64>,
    bracket_norm: Vec<f64>,
}

impl Builder {
    // Projects `v` (unit norm) against the current basis twice and admits the
    // residual if it is large enough.
    fn try_admit(&mut self, v: ComplexMatrix, node: RecipeNode, raw_norm: f64, bracket_norm: f64, generation: usize, depth: usize) -> bool {
        let mut residual = v.clone();
        let mut proj = vec![0.0; self.basis.len()];
        for _ in 0..2 {
            for (k, b) in self.basis.iter().enumerate() {
                let c = frob_inner_unchecked(b, &residual);
                residual.axpy(-c, b);
                proj[k] += c;
            }
        }
        let q = residual.frob_norm();
        if q <= self.threshold {
            return false;
        }
        let corrections = proj
            .iter()
            .enumerate()
            .filter(|(_, p)| p.abs() > CORRECTION_EPS)
            .map(|(k, p)| (k, p * raw_norm))
            .collect();
        self.basis.push(residual.scale_real(1.0 / q));
        self.recipes.push(Recipe { node, scale: 1.0 / (raw_norm * q), corrections, generation, depth });
        self.unit.push(v);
        self.raw_norm.push(raw_norm);
        self.bracket_norm.push(bracket_norm);
        true
    }

    fn full(&self) -> bool {
        self.basis.len() >= self.dim * self.dim
    }
}

/// Closure with [`DEFAULT_CLOSURE_TOL`].
pub fn closure(gens: &GeneratorSet) -> Result<LieBasis> {
    closure_with_tol(gens, DEFAULT_CLOSURE_TOL)
}

/// Breadth-first Lie closure.
///
/// Generation 0 is Gram-Schmidt over the generators in order. Each later
/// generation commutes every element admitted in the previous generation
/// with every element present when the sweep began, in index order. A
/// commutator is admitted when its normalized residual against the current
/// span exceeds `tol · N`. The sweep stops when a generation admits nothing
/// or the span reaches `N²`.
pub fn closure_with_tol(gens: &GeneratorSet, tol: f64) -> Result<LieBasis> {
    let dim = gens.dim();
    if dim > crate::DEFAULT_MAX_DIM {
        return Err(Error::Capacity { requested: dim, cap: crate::DEFAULT_MAX_DIM });
    }
    for g in &gens.elements {
        let deviation = g.matrix.anti_hermitian_deviation();
        if deviation > DEFAULT_PREDICATE_TOL * g.matrix.max_abs().max(1.0) {
            return Err(Error::NotAntiHermitian { deviation });
        }
    }
    let threshold = tol * dim as f64;
    let mut b = Builder {
        dim,
        threshold,
        basis: Vec::new(),
        recipes: Vec::new(),
        unit: Vec::new(),
        raw_norm: Vec::new(),
        bracket_norm: Vec::new(),
    };

    let mut newest = Vec::new();
    for (gi, g) in gens.elements.iter().enumerate() {
        let norm = g.matrix.frob_norm();
        if norm <= threshold {
            continue;
        }
        if b.try_admit(g.matrix.scale_real(1.0 / norm), RecipeNode::Leaf(gi), norm, 1.0, 0, 0) {
            newest.push(b.basis.len() - 1);
        }
    }

    let mut generation = 0;
    while !newest.is_empty() && !b.full() {
        generation += 1;
        let existing = b.basis.len();
        let first_newest = newest[0];
        let mut admitted = Vec::new();
        'sweep: for &i in &newest {
            for j in 0..existing {
                // Pairs inside the newest generation are visited once.
                if j >= first_newest && j >= i {
                    continue;
                }
                let c = &(&b.unit[i] * &b.unit[j]) - &(&b.unit[j] * &b.unit[i]);
                let cn = c.frob_norm();
                if cn <= threshold {
                    continue;
                }
                let raw_norm = b.raw_norm[i] * b.raw_norm[j] * cn;
                let depth = 1 + b.recipes[i].depth.max(b.recipes[j].depth);
                if b.try_admit(c.scale_real(1.0 / cn), RecipeNode::Comm(i, j), raw_norm, cn, generation, depth) {
                    admitted.push(b.basis.len() - 1);
                    if b.full() {
                        break 'sweep;
                    }
                }
            }
        }
        newest = admitted;
    }

    Ok(LieBasis {
        dim,
        generator_ids: gens.elements.iter().map(|g| g.id.clone()).collect(),
        basis: b.basis,
        recipes: b.recipes,
        unit: b.unit,
        raw_norm: b.raw_norm,
        bracket_norm: b.bracket_norm,
    })
}

/// Result of comparing the closure of the Γ_k with `span{Γ_k, Γ_jΓ_k}`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpinCheck {
    pub n: usize,
    pub closure_dim: usize,
    /// `2n² + n`.
    pub expected_dim: usize,
    pub gamma_count: usize,
    pub pair_count: usize,
    /// Every Γ_k and Γ_jΓ_k lies in the closure.
    pub candidates_in_closure: bool,
    /// Every closure basis element lies in the candidate span.
    pub closure_in_candidates: bool,
    pub max_residual: f64,
}

impl SpinCheck {
    pub fn passes(&self) -> bool {
        self.closure_dim == self.expected_dim
            && self.gamma_count + self.pair_count == self.expected_dim
            && self.candidates_in_closure
            && self.closure_in_candidates
    }
}

/// Checks that the Γ_k close onto `span{Γ_k} ⊕ span{Γ_jΓ_k : j < k}`, a
/// `(2n² + n)`-dimensional algebra.
pub fn spin_subgroup_check(n: usize) -> Result<SpinCheck> {
    let gammas = generators::clifford_gammas(n)?;
    let basis = closure(&gammas)?;
    let g: Vec<&ComplexMatrix> = gammas.matrices().collect();
    let mut candidates: Vec<(String, ComplexMatrix)> = gammas.elements.iter().map(|e| (e.id.clone(), e.matrix.clone())).collect();
    for j in 0..g.len() {
        for k in (j + 1)..g.len() {
            candidates.push((format!("G{j}G{k}"), g[j] * g[k]));
        }
    }
    let pair_count = candidates.len() - g.len();

    let mut max_residual: f64 = 0.0;
    let mut candidates_in_closure = true;
    for (_, m) in &candidates {
        let r = basis.membership(m, DEFAULT_MEMBERSHIP_TOL)?;
        max_residual = max_residual.max(r.residual());
        candidates_in_closure &= r.is_member();
    }
    // Candidates are mutually orthogonal Pauli strings; their span, taken as
    // a Lie "closure" with no brackets, is the Gram-Schmidt of the list.
    let cand_set = GeneratorSet::custom(n, 2, candidates)?;
    let cand_span = span_only(&cand_set)?;
    let mut closure_in_candidates = true;
    for b in basis.basis() {
        let r = cand_span.membership(b, DEFAULT_MEMBERSHIP_TOL)?;
        max_residual = max_residual.max(r.residual());
        closure_in_candidates &= r.is_member();
    }
    Ok(SpinCheck {
        n,
        closure_dim: basis.len(),
        expected_dim: 2 * n * n + n,
        gamma_count: g.len(),
        pair_count,
        candidates_in_closure,
        closure_in_candidates,
        max_residual,
    })
}

// Orthonormal basis of the real span of the set, without commutators.
fn span_only(gens: &GeneratorSet) -> Result<LieBasis> {
    let dim = gens.dim();
    let mut b = Builder {
        dim,
        threshold: DEFAULT_CLOSURE_TOL * dim as f64,
        basis: Vec::new(),
        recipes: Vec::new(),
        unit: Vec::new(),
        raw_norm: Vec::new(),
        bracket_norm: Vec::new(),
    };
    for (gi, g) in gens.elements.iter().enumerate() {
        let norm = g.matrix.frob_norm();
        if norm > b.threshold {
            b.try_admit(g.matrix.scale_real(1.0 / norm), RecipeNode::Leaf(gi), norm, 1.0, 0, 0);
        }
    }
    Ok(LieBasis {
        dim,
        generator_ids: gens.elements.iter().map(|g| g.id.clone()).collect(),
        basis: b.basis,
        recipes: b.recipes,
        unit: b.unit,
        raw_norm: b.raw_norm,
        bracket_norm: b.bracket_norm,
    })
}

/// A generator family whose closure dimension has a predicted value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableFamily {
    /// Γ_k alone: `2n² + n`.
    Clifford,
    /// Γ_k with Γ_u: `4ⁿ`.
    CliffordUniversal(GammaUVariant),
    /// Γ₀, Γ_kΓ_{k+1}, Γ_u: `4ⁿ`.
    CliffordTwoLocal,
    /// Hermitian splits of all T_k: `l^{2n}`.
    TorusSplit { l: usize },
    /// Hermitian splits of T₀, T_k†T_{k+1}: `l^{2n}`.
    TorusTwoLocal { l: usize },
}

impl TableFamily {
    pub fn family(self) -> Family {
        match self {
            TableFamily::Clifford => Family::CliffordFull,
            TableFamily::CliffordUniversal(_) => Family::CliffordUniversal,
            TableFamily::CliffordTwoLocal => Family::CliffordTwoLocal,
            TableFamily::TorusSplit { .. } => Family::TorusSplit,
            TableFamily::TorusTwoLocal { .. } => Family::TorusTwoLocal,
        }
    }

    pub fn levels(self) -> usize {
        match self {
            TableFamily::TorusSplit { l } | TableFamily::TorusTwoLocal { l } => l,
            _ => 2,
        }
    }

    pub fn min_n(self) -> usize {
        match self {
            TableFamily::CliffordTwoLocal | TableFamily::TorusTwoLocal { .. } => 2,
            _ => 1,
        }
    }

    /// Predicted closure dimension and the formula it comes from.
    pub fn predicted(self, n: usize) -> (usize, &'static str) {
        let l = self.levels();
        match self {
            TableFamily::Clifford => (2 * n * n + n, "2n^2+n"),
            TableFamily::CliffordUniversal(_) | TableFamily::CliffordTwoLocal => (4usize.pow(n as u32), "4^n"),
            TableFamily::TorusSplit { .. } | TableFamily::TorusTwoLocal { .. } => (l.pow(2 * n as u32), "l^(2n)"),
        }
    }

    pub fn build(self, n: usize) -> Result<GeneratorSet> {
        match self {
            TableFamily::Clifford => generators::clifford_gammas(n),
            TableFamily::CliffordUniversal(v) => generators::clifford_universal(n, v),
            TableFamily::CliffordTwoLocal => generators::two_local_clifford_set(n),
            TableFamily::TorusSplit { l } => generators::torus_split_set(n, l),
            TableFamily::TorusTwoLocal { l } => generators::two_local_torus_set(n, l),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DimensionRow {
    pub family: Family,
    pub n: usize,
    pub l: usize,
    pub dim: usize,
    pub predicted: usize,
    pub formula: &'static str,
    /// `N² − 1`: the largest closure reachable from traceless generators.
    pub traceless_bound: usize,
    /// Whether every generator is traceless.
    pub traceless_generators: bool,
    pub max_depth: usize,
    pub recipe_fidelity: f64,
    pub pass: bool,
}

pub fn dimension_row(family: TableFamily, n: usize) -> Result<DimensionRow> {
    let gens = family.build(n)?;
    let basis = closure(&gens)?;
    let (predicted, formula) = family.predicted(n);
    let nn = gens.dim();
    let traceless_generators = gens.matrices().all(|m| m.trace().norm() <= 1e-12 * nn as f64);
    Ok(DimensionRow {
        family: family.family(),
        n,
        l: family.levels(),
        dim: basis.len(),
        predicted,
        formula,
        traceless_bound: nn * nn - 1,
        traceless_generators,
        max_depth: basis.max_depth(),
        recipe_fidelity: basis.recipe_fidelity(&gens)?,
        pass: basis.len() == predicted,
    })
}

/// Closure dimensions for `n = 1 ..= max_n` of each family, against the
/// predicted formulas. Families that need `n ≥ 2` start there.
pub fn dimension_table(max_n: usize, families: &[TableFamily]) -> Result<Vec<DimensionRow>> {
    let mut rows = Vec::new();
    for &f in families {
        for n in f.min_n()..=max_n {
            rows.push(dimension_row(f, n)?);
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{clifford_gammas, clifford_universal, torus_split_set, two_local_clifford_set};
    use crate::linalg::{sigma_x, sigma_y, sigma_z, tensor, I};

    #[test]
    fn clifford_closure_is_so_2n_plus_1() {
        let b = closure(&clifford_gammas(2).unwrap()).unwrap();
        assert_eq!(b.len(), 10);
        assert!(b.orthonormality_defect() < 1e-9);
        let b1 = closure(&clifford_gammas(1).unwrap()).unwrap();
        assert_eq!(b1.len(), 3);
        for s in [sigma_x(), sigma_y(), sigma_z()] {
            assert!(b1.contains(&s.scale(I)));
        }
    }

    #[test]
    fn adjoining_gamma_u_reaches_traceless_ceiling() {
        // Every generator is traceless and so is every commutator, so the
        // closure stops at su(4): 15, not 16.
        let set = clifford_universal(2, GammaUVariant::Three).unwrap();
        let b = closure(&set).unwrap();
        assert_eq!(b.len(), 15);
        assert!(!b.contains(&ComplexMatrix::identity(4).scale(I)));
        let zz = tensor(&sigma_z(), &sigma_z()).unwrap().scale(I);
        assert!(b.contains(&zz));
    }

    #[test]
    fn torus_split_closure_n1_l3() {
        let b = closure(&torus_split_set(1, 3).unwrap()).unwrap();
        assert_eq!(b.len(), 8);
        assert!(b.orthonormality_defect() < 1e-9);
    }

    #[test]
    fn membership_examples() {
        let gens = clifford_gammas(2).unwrap();
        let b = closure(&gens).unwrap();
        match b.membership(&b.basis()[0], 1e-8).unwrap() {
            Membership::Member { coefficients, residual } => {
                assert!(residual < 1e-12);
                assert!((coefficients[0] - 1.0).abs() < 1e-12);
                assert!(coefficients[1..].iter().all(|c| c.abs() < 1e-12));
            }
            other => panic!("{other:?}"),
        }
        let g12 = &gens.elements[1].matrix * &gens.elements[2].matrix;
        assert!(b.membership(&g12, 1e-8).unwrap().is_member());
        let mut d = ComplexMatrix::zeros(4);
        d[(0, 0)] = I;
        let r = b.membership(&d, 1e-8).unwrap();
        assert!(!r.is_member() && r.residual() > 0.1);
        assert!(b.membership(&ComplexMatrix::zeros(2), 1e-8).is_err());
    }

    #[test]
    fn rejects_non_anti_hermitian() {
        let set = crate::generators::torus_t(1, 3).unwrap();
        assert!(matches!(closure(&set), Err(Error::NotAntiHermitian { .. })));
    }

    #[test]
    fn two_local_set_recovers_every_gamma() {
        for n in 2..=3 {
            let b = closure(&two_local_clifford_set(n).unwrap()).unwrap();
            for g in &clifford_gammas(n).unwrap().elements {
                assert!(b.contains(&g.matrix), "n = {n}: {} missing", g.id);
            }
        }
        // Without Γ_u, Γ₀ and the neighbour products still give every Γ_k.
        let g = clifford_gammas(3).unwrap();
        let mut items = vec![(String::from("G0"), g.elements[0].matrix.clone())];
        for k in 0..5 {
            items.push((format!("G{k}G{}", k + 1), &g.elements[k].matrix * &g.elements[k + 1].matrix));
        }
        let b = closure(&GeneratorSet::custom(3, 2, items).unwrap()).unwrap();
        for e in &g.elements {
            assert!(b.contains(&e.matrix));
        }
    }

    #[test]
    fn recipes_reproduce_basis() {
        for set in [
            two_local_clifford_set(2).unwrap(),
            torus_split_set(1, 3).unwrap(),
            clifford_universal(3, GammaUVariant::Three).unwrap(),
        ] {
            let b = closure(&set).unwrap();
            assert!(b.recipe_fidelity(&set).unwrap() < 1e-8, "{}", set.family);
        }
    }

    #[test]
    fn sexpr_rendering() {
        let set = two_local_clifford_set(2).unwrap();
        let b = closure(&set).unwrap();
        assert_eq!(b.sexpr(0), "G0");
        let deep = (0..b.len()).find(|&i| b.recipes()[i].depth == 2).unwrap();
        let s = b.sexpr(deep);
        assert!(s.starts_with("(comm ") && s.matches("(comm").count() == 2, "{s}");
    }

    #[test]
    fn spin_check() {
        let r = spin_subgroup_check(2).unwrap();
        assert_eq!((r.closure_dim, r.gamma_count, r.pair_count), (10, 4, 6));
        assert!(r.passes());
        let r1 = spin_subgroup_check(1).unwrap();
        assert_eq!(r1.closure_dim, 3);
        assert!(r1.passes());
    }

    #[test]
    fn generations_are_recorded() {
        let set = clifford_gammas(2).unwrap();
        let b = closure(&set).unwrap();
        assert_eq!(b.generation_sizes(), vec![4, 6]);
        assert!(b.generations().iter().take(4).all(|&g| g == 0));
    }
}
