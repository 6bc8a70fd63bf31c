//! Synthesis of a target unitary as an ordered product of generator
//! exponentials `exp(τ_1 A_1) exp(τ_2 A_2) ⋯`.
//!
//! The target's principal logarithm is expanded in a [`LieBasis`], the
//! expansion is rewritten over the basis's commutator trees, and
//! `exp(Σ d_i X_i)` is split into `M` Trotter slices. Each `exp(θ X_i)` for a
//! commutator node `X_i ∝ [P, Q]` is realized either exactly, by conjugating
//! `exp(θ Q)` with a quarter turn of `P`, or approximately, by a group
//! commutator word in `P` and `Q`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{Error, Result};
use crate::generators::{Family, GeneratorSet};
use crate::lieclosure::{LieBasis, Membership, RecipeNode, DEFAULT_MEMBERSHIP_TOL};
use crate::linalg::{self, error_metrics, herm_eig, logm_unitary, near_integer, sqrtm_unitary, ComplexMatrix, HermEig, C64};
use crate::math;

// A commutator node is realized by conjugation when
// ‖[P,[P,Q]] + κ²Q‖_F stays below this.
const CONJUGATION_TOL: f64 = 1e-10;
// Input unitarity check.
const UNITARY_TOL: f64 = 1e-8;
// Largest denominator tried when detecting a generator's period.
const PERIOD_MAX_DENOM: i64 = 12;

/// Splitting used inside one Trotter slice.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum TrotterOrder {
    /// `∏_j exp(d_j X_j / M)`.
    First,
    /// Symmetric (Strang) splitting: half steps out and back around a full
    /// middle step.
    #[default]
    Second,
}

impl TrotterOrder {
    pub fn name(self) -> &'static str {
        match self {
            TrotterOrder::First => "first",
            TrotterOrder::Second => "second",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "first" | "1" => Some(TrotterOrder::First),
            "second" | "2" => Some(TrotterOrder::Second),
            _ => None,
        }
    }
}

/// How `exp(θ [P, Q] / κ)` is turned into gates.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Realization {
    /// `e^{tP} e^{θQ} e^{−tP}` with `t = π / 2κ`, exact whenever
    /// `ad_P² Q = −κ² Q`. Other nodes fall back to [`Realization::GroupCommutator`].
    #[default]
    Conjugation,
    /// The symmetric eight-gate word `C(P,Q) C(−P,−Q)` with
    /// `C(P,Q) = e^{tP} e^{tQ} e^{−tP} e^{−tQ}` and `t = √(|θ|/2κ)`.
    /// Its error per call is fourth order in `t`.
    GroupCommutator,
    /// The four-gate word `C(P,Q)` with `t = √(|θ|/κ)`; third order in `t`.
    PlainCommutator,
}

impl Realization {
    pub fn name(self) -> &'static str {
        match self {
            Realization::Conjugation => "conjugation",
            Realization::GroupCommutator => "group_commutator",
            Realization::PlainCommutator => "plain_commutator",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "conjugation" => Some(Realization::Conjugation),
            "group_commutator" => Some(Realization::GroupCommutator),
            "plain_commutator" => Some(Realization::PlainCommutator),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CompileConfig {
    /// Trotter slices `M`; the starting value when `target_error` is set.
    pub slices: usize,
    /// Deepest commutator tree the compiler will realize.
    pub max_commutator_depth: usize,
    /// When set, `M` doubles from `slices` until the phase-invariant error
    /// is at most this, or `M` would exceed `max_slices`.
    pub target_error: Option<f64>,
    pub max_slices: usize,
    /// Largest `|τ|` in one gate; longer rotations are split.
    pub tau_clip: f64,
    pub trotter: TrotterOrder,
    pub realization: Realization,
    /// Merge runs of adjacent gates on the same generator.
    pub merge_adjacent: bool,
    /// Relative residual accepted when expanding the logarithm.
    pub membership_tol: f64,
    /// Coordinates below `coefficient_tol · max(1, ‖log u‖_F)` are dropped.
    pub coefficient_tol: f64,
}

impl Default for CompileConfig {
    fn default() -> Self {
        CompileConfig {
            slices: 1,
            max_commutator_depth: 16,
            target_error: None,
            max_slices: 1024,
            tau_clip: PI,
            trotter: TrotterOrder::Second,
            realization: Realization::Conjugation,
            merge_adjacent: false,
            membership_tol: DEFAULT_MEMBERSHIP_TOL,
            coefficient_tol: 1e-12,
        }
    }
}

impl CompileConfig {
    pub fn with_slices(mut self, m: usize) -> Self {
        self.slices = m;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidParameter(String::from(msg)));
        if self.slices == 0 {
            return bad("slices must be at least 1");
        }
        if self.max_slices < self.slices {
            return bad("max_slices must be at least slices");
        }
        if !(self.tau_clip.is_finite() && self.tau_clip > 0.0) {
            return bad("tau_clip must be positive and finite");
        }
        if let Some(t) = self.target_error {
            if !(t.is_finite() && t > 0.0) {
                return bad("target_error must be positive and finite");
            }
        }
        if !(self.membership_tol >= 0.0 && self.coefficient_tol >= 0.0) {
            return bad("tolerances must be non-negative");
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CompileReport {
    /// `‖u − evaluate(seq)‖_F`.
    pub frob_error: f64,
    /// Same, minimized over a global phase.
    pub phase_invariant_error: f64,
    pub slice_count: usize,
    pub gate_count: usize,
    /// Global phase `φ` dropped from the logarithm (`u ≈ e^{iφ} · product`).
    pub global_phase: f64,
    /// Relative residual of the logarithm against the basis.
    pub membership_residual: f64,
    /// The target had an eigenphase at the branch cut and was compiled as
    /// the square of its square root.
    pub branch_cut_split: bool,
    /// Every commutator node used was realized exactly.
    pub exact_realization: bool,
    pub max_depth_used: usize,
    pub trotter: TrotterOrder,
    pub realization: Realization,
    /// Whether `target_error` was reached, when one was requested.
    pub target_met: Option<bool>,
}

/// An ordered gate list; the product is taken left to right.
#[derive(Clone, Debug, PartialEq)]
pub struct GateSequence {
    pub family: Family,
    pub n: usize,
    pub l: usize,
    pub target_dim: usize,
    pub items: Vec<(String, f64)>,
    /// Coordinates of `log u` (global phase removed) in the orthonormal basis.
    pub coefficients: Vec<f64>,
    pub report: CompileReport,
}

/// Expansion of a target in a basis, shared by every slice count.
#[derive(Clone, Debug)]
struct Target {
    // 2 when √u is compiled and repeated.
    reps: usize,
    coefficients: Vec<f64>,
    // Coordinates over the unit-norm recipe trees.
    tree_coords: Vec<(usize, f64)>,
    global_phase: f64,
    residual: f64,
}

/// Per-basis realization data.
struct Plan<'a> {
    basis: &'a LieBasis,
    exact: Vec<bool>,
    periods: Vec<Option<f64>>,
}

impl<'a> Plan<'a> {
    fn new(gens: &GeneratorSet, basis: &'a LieBasis, realization: Realization) -> Result<Self> {
        let ids = basis.generator_ids();
        if ids.len() != gens.len() || ids.iter().zip(&gens.elements).any(|(a, g)| *a != g.id) {
            return Err(Error::InvalidParameter(String::from("basis was not built from this generator set")));
        }
        let mut exact = Vec::with_capacity(basis.len());
        for (i, r) in basis.recipes().iter().enumerate() {
            let e = match r.node {
                RecipeNode::Leaf(_) => true,
                RecipeNode::Comm(a, b) => {
                    realization == Realization::Conjugation && exact[a] && exact[b] && conjugation_exact(basis, i, a, b)
                }
            };
            exact.push(e);
        }
        let periods = gens.elements.iter().map(|g| generator_period(&g.matrix)).collect();
        Ok(Plan { basis, exact, periods })
    }

    // Appends gates for exp(θ X_i), X_i the unit-norm tree of element i.
    fn realize(&self, i: usize, theta: f64, realization: Realization, out: &mut Vec<(usize, f64)>) {
        match self.basis.recipes()[i].node {
            RecipeNode::Leaf(g) => out.push((g, theta / self.basis.raw_norm(i))),
            RecipeNode::Comm(a, b) => {
                let kappa = self.basis.bracket_norm(i);
                if self.exact[i] {
                    let t = PI / (2.0 * kappa);
                    self.realize(a, t, realization, out);
                    self.realize(b, theta, realization, out);
                    self.realize(a, -t, realization, out);
                    return;
                }
                // A negative angle is realized as the exact inverse of the
                // positive word: reversed, with every parameter negated.
                // For the four-gate word this is the swap [P,Q] → [Q,P].
                let start = out.len();
                let s = theta.abs() / kappa;
                if realization == Realization::PlainCommutator {
                    let t = math::sqrt(s);
                    for (node, sign) in [(a, 1.0), (b, 1.0), (a, -1.0), (b, -1.0)] {
                        self.realize(node, sign * t, realization, out);
                    }
                } else {
                    let t = math::sqrt(s / 2.0);
                    for (node, sign) in [(a, 1.0), (b, 1.0), (a, -1.0), (b, -1.0), (a, -1.0), (b, -1.0), (a, 1.0), (b, 1.0)] {
                        self.realize(node, sign * t, realization, out);
                    }
                }
                if theta < 0.0 {
                    out[start..].reverse();
                    for item in &mut out[start..] {
                        item.1 = -item.1;
                    }
                }
            }
        }
    }
}

fn conjugation_exact(basis: &LieBasis, i: usize, a: usize, b: usize) -> bool {
    let p = basis.unit_value(a);
    let q = basis.unit_value(b);
    let kappa = basis.bracket_norm(i);
    let pq = &(p * q) - &(q * p);
    let ppq = &(p * &pq) - &(&pq * p);
    let mut defect = ppq;
    defect.axpy(kappa * kappa, q);
    defect.frob_norm() <= CONJUGATION_TOL
}

/// Smallest `T > 0` with `exp(T·g) = I`, if `g`'s spectrum makes one exist
/// with a small denominator.
pub fn generator_period(g: &ComplexMatrix) -> Option<f64> {
    let h = g.scale(C64::new(0.0, -1.0));
    let eig = herm_eig(&h).ok()?;
    let top = eig.values.iter().map(|v| v.abs()).fold(0.0, f64::max);
    if top == 0.0 {
        return None;
    }
    (1..=PERIOD_MAX_DENOM).find_map(|q| {
        let base = top / q as f64;
        eig.values
            .iter()
            .all(|v| near_integer(v / base, 1e-9).is_some())
            .then(|| 2.0 * PI / base)
    })
}

// Wraps τ into (−T/2, T/2] for a period T, then splits it into equal pieces
// no longer than `clip`.
fn canonical_taus(tau: f64, period: Option<f64>, clip: f64, out: &mut Vec<f64>) {
    let mut t = tau;
    if let Some(p) = period {
        t -= p * math::round(t / p);
        if t <= -p / 2.0 {
            t += p;
        }
    }
    if t == 0.0 {
        return;
    }
    let pieces = math::ceil(t.abs() / clip).max(1.0) as usize;
    for _ in 0..pieces {
        out.push(t / pieces as f64);
    }
}

fn analyse(u: &ComplexMatrix, basis: &LieBasis, cfg: &CompileConfig) -> Result<Target> {
    let first = logm_unitary(u)?;
    let (reps, log) = if first.near_branch_cut {
        log::warn!("target has an eigenphase at the branch cut; compiling its square root twice");
        (2, logm_unitary(&sqrtm_unitary(u)?)?.log)
    } else {
        (1, first.log)
    };

    let n = log.dim();
    let (log, global_phase, membership) = match basis.membership(&log, cfg.membership_tol)? {
        m @ Membership::Member { .. } => (log, 0.0, m),
        Membership::NotMember { .. } => {
            let tr = log.trace();
            let phase = tr.im / n as f64;
            let mut traceless = log;
            for k in 0..n {
                traceless[(k, k)] -= tr / n as f64;
            }
            let m = basis.membership(&traceless, cfg.membership_tol)?;
            if let Membership::NotMember { residual } = m {
                return Err(Error::NotMember { residual });
            }
            (traceless, phase, m)
        }
    };
    let residual = membership.residual();
    let Membership::Member { coefficients, .. } = membership else { unreachable!() };

    let floor = cfg.coefficient_tol * log.frob_norm().max(1.0);
    let mut acc: Vec<f64> = coefficients.iter().map(|&c| if c.abs() <= floor { 0.0 } else { c }).collect();
    // b_i = (X_i − Σ_k p_ik b_k) / q_i with q_i = 1/(scale_i ρ_i) and
    // p_ik = r_ik / ρ_i, so Σ d_i X_i = Σ c_j b_j solves top-down.
    let mut d = alloc::vec![0.0; acc.len()];
    for (i, r) in basis.recipes().iter().enumerate().rev() {
        let rho = basis.raw_norm(i);
        d[i] = acc[i] * r.scale * rho;
        if d[i] != 0.0 {
            for &(k, rik) in &r.corrections {
                acc[k] -= d[i] * rik / rho;
            }
        }
    }
    let tree_coords = d.iter().enumerate().filter(|(_, v)| v.abs() > floor).map(|(i, &v)| (i, v)).collect();
    Ok(Target {
        reps,
        coefficients: coefficients.iter().map(|c| c * reps as f64).collect(),
        tree_coords,
        global_phase: global_phase * reps as f64,
        residual,
    })
}

fn synthesize(plan: &Plan, target: &Target, slices: usize, cfg: &CompileConfig) -> Vec<(usize, f64)> {
    let mut slice = Vec::new();
    let m = slices as f64;
    let terms = &target.tree_coords;
    match cfg.trotter {
        TrotterOrder::First => {
            for &(i, d) in terms {
                plan.realize(i, d / m, cfg.realization, &mut slice);
            }
        }
        TrotterOrder::Second => {
            if let Some((&(last, dl), rest)) = terms.split_last() {
                for &(i, d) in rest {
                    plan.realize(i, d / (2.0 * m), cfg.realization, &mut slice);
                }
                plan.realize(last, dl / m, cfg.realization, &mut slice);
                for &(i, d) in rest.iter().rev() {
                    plan.realize(i, d / (2.0 * m), cfg.realization, &mut slice);
                }
            }
        }
    }
    let mut canonical = Vec::with_capacity(slice.len());
    let mut taus = Vec::new();
    for &(g, tau) in &slice {
        taus.clear();
        canonical_taus(tau, plan.periods[g], cfg.tau_clip, &mut taus);
        canonical.extend(taus.iter().map(|&t| (g, t)));
    }
    let mut items = Vec::with_capacity(canonical.len() * slices * target.reps);
    for _ in 0..slices * target.reps {
        items.extend_from_slice(&canonical);
    }
    if cfg.merge_adjacent {
        items = merge_adjacent(&items, &plan.periods, cfg.tau_clip);
    }
    items
}

fn merge_adjacent(items: &[(usize, f64)], periods: &[Option<f64>], clip: f64) -> Vec<(usize, f64)> {
    let mut out: Vec<(usize, f64)> = Vec::with_capacity(items.len());
    let mut taus = Vec::new();
    let mut k = 0;
    while k < items.len() {
        let g = items[k].0;
        let mut total = 0.0;
        while k < items.len() && items[k].0 == g {
            total += items[k].1;
            k += 1;
        }
        taus.clear();
        canonical_taus(total, periods[g], clip, &mut taus);
        out.extend(taus.iter().map(|&t| (g, t)));
    }
    out
}

fn check_inputs(u: &ComplexMatrix, gens: &GeneratorSet, basis: &LieBasis) -> Result<()> {
    if u.dim() != gens.dim() {
        return Err(Error::DimensionMismatch { left: u.dim(), right: gens.dim() });
    }
    if basis.matrix_dim() != gens.dim() {
        return Err(Error::DimensionMismatch { left: basis.matrix_dim(), right: gens.dim() });
    }
    if !u.is_finite() {
        return Err(Error::InvalidMatrix(String::from("target has non-finite entries")));
    }
    let deviation = u.unitary_deviation();
    if deviation > UNITARY_TOL {
        return Err(Error::NotUnitary { deviation });
    }
    Ok(())
}

struct Prepared<'a> {
    plan: Plan<'a>,
    target: Target,
    max_depth_used: usize,
    exact_realization: bool,
    evaluator: Evaluator,
}

fn prepare<'a>(u: &ComplexMatrix, gens: &GeneratorSet, basis: &'a LieBasis, cfg: &CompileConfig) -> Result<Prepared<'a>> {
    cfg.validate()?;
    check_inputs(u, gens, basis)?;
    let plan = Plan::new(gens, basis, cfg.realization)?;
    let target = analyse(u, basis, cfg)?;
    let mut max_depth_used = 0;
    let mut exact_realization = true;
    for &(i, _) in &target.tree_coords {
        let depth = basis.recipes()[i].depth;
        if depth > cfg.max_commutator_depth {
            return Err(Error::DepthExhausted { depth, max: cfg.max_commutator_depth });
        }
        max_depth_used = max_depth_used.max(depth);
        exact_realization &= plan.exact[i];
    }
    let evaluator = Evaluator::new(gens)?;
    Ok(Prepared { plan, target, max_depth_used, exact_realization, evaluator })
}

impl Prepared<'_> {
    fn run(&self, u: &ComplexMatrix, gens: &GeneratorSet, slices: usize, cfg: &CompileConfig) -> Result<GateSequence> {
        let raw = synthesize(&self.plan, &self.target, slices, cfg);
        let product = self.evaluator.product(raw.iter().copied());
        let metrics = error_metrics(u, &product)?;
        let target_met = cfg.target_error.map(|t| metrics.phase_invariant_dist <= t);
        Ok(GateSequence {
            family: gens.family,
            n: gens.n,
            l: gens.l,
            target_dim: u.dim(),
            items: raw.iter().map(|&(g, t)| (gens.elements[g].id.clone(), t)).collect(),
            coefficients: self.target.coefficients.clone(),
            report: CompileReport {
                frob_error: metrics.frob_dist,
                phase_invariant_error: metrics.phase_invariant_dist,
                slice_count: slices,
                gate_count: raw.len(),
                global_phase: self.target.global_phase,
                membership_residual: self.target.residual,
                branch_cut_split: self.target.reps == 2,
                exact_realization: self.exact_realization,
                max_depth_used: self.max_depth_used,
                trotter: cfg.trotter,
                realization: cfg.realization,
                target_met,
            },
        })
    }
}

/// Compiles `u` over `gens`, whose closure is `basis`.
///
/// Fails with [`Error::NotMember`] when neither `log u` nor its traceless
/// part lies in the span of `basis`. The returned report states the error
/// actually achieved; `target_error` is never claimed unless met.
pub fn compile(u: &ComplexMatrix, gens: &GeneratorSet, basis: &LieBasis, cfg: &CompileConfig) -> Result<GateSequence> {
    let prepared = prepare(u, gens, basis, cfg)?;
    let mut m = cfg.slices;
    loop {
        let seq = prepared.run(u, gens, m, cfg)?;
        match cfg.target_error {
            Some(t) if seq.report.phase_invariant_error > t && m * 2 <= cfg.max_slices => m *= 2,
            _ => return Ok(seq),
        }
    }
}

/// Coordinates of `log u` in `basis`, with the global phase removed when
/// needed. This is the expansion [`compile`] starts from.
pub fn coordinates(u: &ComplexMatrix, basis: &LieBasis, cfg: &CompileConfig) -> Result<Vec<f64>> {
    if u.dim() != basis.matrix_dim() {
        return Err(Error::DimensionMismatch { left: u.dim(), right: basis.matrix_dim() });
    }
    Ok(analyse(u, basis, cfg)?.coefficients)
}

/// Precomputed spectral data for `exp(τ g)` of every generator.
struct Evaluator {
    dim: usize,
    eigs: Vec<HermEig>,
}

impl Evaluator {
    fn new(gens: &GeneratorSet) -> Result<Self> {
        let eigs = gens
            .matrices()
            .map(|g| {
                let dev = g.anti_hermitian_deviation();
                if dev > crate::DEFAULT_PREDICATE_TOL * g.max_abs().max(1.0) {
                    return Err(Error::NotAntiHermitian { deviation: dev });
                }
                herm_eig(&g.scale(C64::new(0.0, -1.0)))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Evaluator { dim: gens.dim(), eigs })
    }

    fn gate(&self, g: usize, tau: f64) -> ComplexMatrix {
        self.eigs[g].apply(|lambda| C64::new(math::cos(lambda * tau), math::sin(lambda * tau)))
    }

    fn product(&self, items: impl Iterator<Item = (usize, f64)>) -> ComplexMatrix {
        let mut cache: BTreeMap<(usize, u64), ComplexMatrix> = BTreeMap::new();
        let mut acc = ComplexMatrix::identity(self.dim);
        for (g, tau) in items {
            let gate = cache.entry((g, tau.to_bits())).or_insert_with(|| self.gate(g, tau));
            acc = &acc * &*gate;
        }
        acc
    }
}

/// `∏_k exp(τ_k A_k)`, left to right.
pub fn evaluate(seq: &GateSequence, gens: &GeneratorSet) -> Result<ComplexMatrix> {
    evaluate_items(&seq.items, gens)
}

pub fn evaluate_items(items: &[(String, f64)], gens: &GeneratorSet) -> Result<ComplexMatrix> {
    let idx = items
        .iter()
        .map(|(id, t)| gens.index_of(id).map(|g| (g, *t)).ok_or_else(|| Error::UnknownGenerator(id.clone())))
        .collect::<Result<Vec<_>>>()?;
    if !idx.iter().all(|(_, t)| t.is_finite()) {
        return Err(Error::InvalidParameter(String::from("non-finite gate parameter")));
    }
    Ok(Evaluator::new(gens)?.product(idx.into_iter()))
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceRow {
    pub slices: usize,
    pub gate_count: usize,
    pub frob_error: f64,
    pub phase_invariant_error: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceTable {
    pub rows: Vec<ConvergenceRow>,
    /// Each error is at most 1.1 times the previous one, or below 1e−8.
    pub monotone: bool,
    /// First error over last error.
    pub improvement: f64,
    pub exact_realization: bool,
}

/// `[1, 2, 4, …]` up to and including `max` when it is a power of two.
pub fn doubling_sweep(max: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut m = 1;
    while m <= max {
        out.push(m);
        m *= 2;
    }
    out
}

/// Compiles `u` once per slice count and tabulates the errors.
pub fn compile_report(
    u: &ComplexMatrix,
    gens: &GeneratorSet,
    basis: &LieBasis,
    cfg: &CompileConfig,
    slices: &[usize],
) -> Result<ConvergenceTable> {
    if slices.is_empty() || slices.contains(&0) {
        return Err(Error::InvalidParameter(String::from("slice sweep must be non-empty and positive")));
    }
    let prepared = prepare(u, gens, basis, cfg)?;
    let sweep_cfg = CompileConfig { target_error: None, ..*cfg };
    let mut rows = Vec::with_capacity(slices.len());
    for &m in slices {
        let seq = prepared.run(u, gens, m, &sweep_cfg)?;
        rows.push(ConvergenceRow {
            slices: m,
            gate_count: seq.report.gate_count,
            frob_error: seq.report.frob_error,
            phase_invariant_error: seq.report.phase_invariant_error,
        });
    }
    let monotone = rows
        .windows(2)
        .all(|w| w[1].phase_invariant_error <= 1.1 * w[0].phase_invariant_error || w[1].phase_invariant_error < 1e-8);
    let first = rows[0].phase_invariant_error;
    let last = rows[rows.len() - 1].phase_invariant_error;
    let improvement = if last > 0.0 { first / last } else { f64::INFINITY };
    Ok(ConvergenceTable { rows, monotone, improvement, exact_realization: prepared.exact_realization })
}

impl GateSequence {
    /// Renders the gate list as `G0(0.3) G1(-0.1) …`.
    pub fn render(&self) -> String {
        let parts: Vec<String> = self.items.iter().map(|(id, t)| format!("{id}({t})")).collect();
        parts.join(" ")
    }
}

/// Exact `exp(θ b_i)` for a basis element, for building test targets.
pub fn basis_exponential(basis: &LieBasis, i: usize, theta: f64) -> Result<ComplexMatrix> {
    linalg::expm_antiherm(&basis.basis()[i].scale_real(theta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{clifford_gammas, two_local_clifford_set, two_local_torus_set};
    use crate::lieclosure::closure;
    use crate::linalg::{expm_antiherm, I, ONE, ZERO};

    fn cnot() -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(4);
        m[(0, 0)] = ONE;
        m[(1, 1)] = ONE;
        m[(2, 3)] = ONE;
        m[(3, 2)] = ONE;
        m
    }

    #[test]
    fn primitive_target_is_one_gate() {
        let gens = clifford_gammas(2).unwrap();
        let basis = closure(&gens).unwrap();
        let u = expm_antiherm(&gens.elements[0].matrix.scale_real(0.3)).unwrap();
        let seq = compile(&u, &gens, &basis, &CompileConfig::default()).unwrap();
        assert_eq!(seq.items.len(), 1);
        assert_eq!(seq.items[0].0, "G0");
        assert!((seq.items[0].1 - 0.3).abs() < 1e-12);
        assert!(seq.report.frob_error <= 1e-10);
    }

    #[test]
    fn primitive_targets_up_to_clip() {
        let gens = two_local_clifford_set(2).unwrap();
        let basis = closure(&gens).unwrap();
        for g in &gens.elements {
            for theta in [-3.1, -1.0, 0.5, 2.9, PI] {
                let u = expm_antiherm(&g.matrix.scale_real(theta)).unwrap();
                let seq = compile(&u, &gens, &basis, &CompileConfig::default()).unwrap();
                assert!(seq.report.phase_invariant_error <= 1e-10, "{} {theta}: {:?}", g.id, seq.report);
            }
        }
    }

    #[test]
    fn identity_is_empty() {
        let gens = two_local_clifford_set(2).unwrap();
        let basis = closure(&gens).unwrap();
        let seq = compile(&ComplexMatrix::identity(4), &gens, &basis, &CompileConfig::default()).unwrap();
        assert!(seq.items.is_empty());
        assert_eq!(seq.report.frob_error, 0.0);
    }

    #[test]
    fn evaluate_examples() {
        let gens = clifford_gammas(2).unwrap();
        assert_eq!(evaluate_items(&[], &gens).unwrap(), ComplexMatrix::identity(4));
        let pair = [(String::from("G0"), 0.7), (String::from("G0"), -0.7)];
        assert!(evaluate_items(&pair, &gens).unwrap().max_abs_diff(&ComplexMatrix::identity(4)) < 1e-10);
        let one = evaluate_items(&[(String::from("G0"), 0.3)], &gens).unwrap();
        let want = expm_antiherm(&gens.elements[0].matrix.scale_real(0.3)).unwrap();
        assert!(one.max_abs_diff(&want) < 1e-14);
        assert!(matches!(evaluate_items(&[(String::from("Gx"), 0.1)], &gens), Err(Error::UnknownGenerator(_))));
    }

    #[test]
    fn group_commutator_is_first_order_in_slices() {
        let gens = clifford_gammas(2).unwrap();
        let basis = closure(&gens).unwrap();
        let k = (0..basis.len()).find(|&i| basis.sexpr(i) == "(comm G1 G0)" || basis.sexpr(i) == "(comm G0 G1)").unwrap();
        let u = basis_exponential(&basis, k, 0.2).unwrap();
        let cfg = CompileConfig { trotter: TrotterOrder::First, realization: Realization::GroupCommutator, ..Default::default() };
        let table = compile_report(&u, &gens, &basis, &cfg, &[1, 2, 4, 8, 16]).unwrap();
        for w in table.rows.windows(2) {
            let ratio = w[0].phase_invariant_error / w[1].phase_invariant_error;
            assert!((1.5..=2.5).contains(&ratio), "{:?}", table.rows);
        }
        // The exact conjugation word needs a single slice.
        let seq = compile(&u, &gens, &basis, &CompileConfig::default()).unwrap();
        assert!(seq.report.exact_realization);
        assert!(seq.report.phase_invariant_error < 1e-12);
        assert_eq!(seq.items.len(), 3);
    }

    #[test]
    fn plain_commutator_converges() {
        let gens = clifford_gammas(2).unwrap();
        let basis = closure(&gens).unwrap();
        let u = basis_exponential(&basis, 5, 0.2).unwrap();
        let cfg = CompileConfig { trotter: TrotterOrder::First, realization: Realization::PlainCommutator, ..Default::default() };
        let t = compile_report(&u, &gens, &basis, &cfg, &doubling_sweep(64)).unwrap();
        // Third-order error per word over M words: err ∝ M^{-1/2}.
        assert!(t.monotone, "{:?}", t.rows);
        for w in t.rows.windows(2) {
            let ratio = w[0].phase_invariant_error / w[1].phase_invariant_error;
            assert!((1.3..=1.5).contains(&ratio), "{:?}", t.rows);
        }
    }

    #[test]
    fn cnot_converges() {
        let gens = two_local_clifford_set(2).unwrap();
        let basis = closure(&gens).unwrap();
        let t = compile_report(&cnot(), &gens, &basis, &CompileConfig::default(), &doubling_sweep(64)).unwrap();
        assert!(t.monotone, "{:?}", t.rows);
        assert!(t.improvement >= 10.0 || t.rows[0].phase_invariant_error < 1e-10, "{:?}", t.rows);
        assert!(t.rows.last().unwrap().phase_invariant_error < 1e-2);
    }

    #[test]
    fn gamma_only_rejects_outside_target() {
        let gens = clifford_gammas(2).unwrap();
        let basis = closure(&gens).unwrap();
        let mut a = ComplexMatrix::zeros(4);
        a[(0, 0)] = I;
        for k in 0..4 {
            a[(k, k)] -= C64::new(0.0, 0.25);
        }
        let u = expm_antiherm(&a).unwrap();
        match compile(&u, &gens, &basis, &CompileConfig::default()) {
            Err(Error::NotMember { residual }) => assert!(residual > 0.1, "{residual}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn branch_cut_target() {
        let gens = two_local_clifford_set(2).unwrap();
        let basis = closure(&gens).unwrap();
        // exp(π·iσz⊗σz/2)² has eigenphases ±π.
        let zz = ComplexMatrix::from_diag(&[I, -I, -I, I]);
        let u = expm_antiherm(&zz.scale_real(PI)).unwrap();
        let seq = compile(&u, &gens, &basis, &CompileConfig::default().with_slices(4)).unwrap();
        assert!(seq.report.phase_invariant_error < 1e-6, "{:?}", seq.report);
        let minus = ComplexMatrix::identity(4).scale_real(-1.0);
        let seq = compile(&minus, &gens, &basis, &CompileConfig::default()).unwrap();
        assert!(seq.report.phase_invariant_error < 1e-12);
    }

    #[test]
    fn target_error_doubles_slices() {
        let gens = two_local_clifford_set(2).unwrap();
        let basis = closure(&gens).unwrap();
        let cfg = CompileConfig { target_error: Some(1e-3), ..Default::default() };
        let seq = compile(&cnot(), &gens, &basis, &cfg).unwrap();
        assert_eq!(seq.report.target_met, Some(true));
        assert!(seq.report.phase_invariant_error <= 1e-3);
        let tight = CompileConfig { target_error: Some(1e-300), max_slices: 4, ..Default::default() };
        let seq = compile(&cnot(), &gens, &basis, &tight).unwrap();
        assert_eq!(seq.report.slice_count, 4);
        assert_eq!(seq.report.target_met, Some(false));
    }

    #[test]
    fn merging_preserves_product() {
        let gens = two_local_clifford_set(2).unwrap();
        let basis = closure(&gens).unwrap();
        let base = CompileConfig::default().with_slices(8);
        let plain = compile(&cnot(), &gens, &basis, &base).unwrap();
        let merged = compile(&cnot(), &gens, &basis, &CompileConfig { merge_adjacent: true, ..base }).unwrap();
        assert!(merged.items.len() < plain.items.len());
        let a = evaluate(&plain, &gens).unwrap();
        let b = evaluate(&merged, &gens).unwrap();
        assert!(a.max_abs_diff(&b) < 1e-12);
    }

    #[test]
    fn taus_are_canonical() {
        let gens = two_local_clifford_set(2).unwrap();
        let basis = closure(&gens).unwrap();
        let seq = compile(&cnot(), &gens, &basis, &CompileConfig::default().with_slices(2)).unwrap();
        assert!(seq.items.iter().all(|(_, t)| t.abs() <= PI));
        let mut out = Vec::new();
        canonical_taus(7.0, Some(2.0 * PI), PI, &mut out);
        assert!((out[0] - (7.0 - 2.0 * PI)).abs() < 1e-15);
        out.clear();
        canonical_taus(7.0, None, PI, &mut out);
        assert_eq!(out.len(), 3);
        assert!((generator_period(&gens.elements[0].matrix).unwrap() - 2.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn torus_target_compiles() {
        // Torus commutator nodes fail the quarter-turn condition and use
        // the group-commutator word, which converges slowly.
        let gens = two_local_torus_set(2, 3).unwrap();
        let basis = closure(&gens).unwrap();
        let k = (0..basis.len()).find(|&i| basis.recipes()[i].depth == 1).unwrap();
        let u = basis_exponential(&basis, k, 0.4).unwrap();
        let t = compile_report(&u, &gens, &basis, &CompileConfig::default(), &[1, 4, 16, 64]).unwrap();
        assert!(!t.exact_realization);
        assert!(t.monotone && t.improvement > 4.0, "{:?}", t.rows);
    }

    #[test]
    fn rejects_bad_inputs() {
        let gens = clifford_gammas(2).unwrap();
        let basis = closure(&gens).unwrap();
        let cfg = CompileConfig::default();
        assert!(matches!(compile(&ComplexMatrix::identity(2), &gens, &basis, &cfg), Err(Error::DimensionMismatch { .. })));
        let mut bad = ComplexMatrix::identity(4);
        bad[(0, 1)] = ONE;
        assert!(matches!(compile(&bad, &gens, &basis, &cfg), Err(Error::NotUnitary { .. })));
        assert!(compile(&ComplexMatrix::identity(4), &gens, &basis, &cfg.with_slices(0)).is_err());
        let other = closure(&two_local_clifford_set(2).unwrap()).unwrap();
        assert!(matches!(compile(&ComplexMatrix::identity(4), &gens, &other, &cfg), Err(Error::InvalidParameter(_))));
        let shallow = CompileConfig { max_commutator_depth: 0, ..cfg };
        let u = basis_exponential(&basis, 6, 0.1).unwrap();
        assert!(matches!(compile(&u, &gens, &basis, &shallow), Err(Error::DepthExhausted { .. })));
        let _ = ZERO;
    }
}
