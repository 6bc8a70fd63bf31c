//! Exact monomials in the torus generators.
//!
//! A [`Monomial`] is `μ^p · T₀^{e₀} T₁^{e₁} ⋯ T_{2n−1}^{e_{2n−1}}` with
//! `μ = e^{iπ/l}` (so `ζ = μ²`), `p` taken mod `2l` and every `e_k` mod `l`.
//! Products are brought back to ascending generator order with the rules
//! `T_j T_k = ζ T_k T_j` for `j < k` and `T_k^l = 1`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::generators::{mu_pow, Family, GeneratorSet};
use crate::linalg::{herm_eig_with_tol, hs_inner, ComplexMatrix};
use crate::DEFAULT_MAX_DIM;

/// Rank threshold for [`span_dimension`], relative to the largest Gram
/// eigenvalue.
pub const SPAN_RANK_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    l: u32,
    n: usize,
    phase: u32,
    exps: Vec<u32>,
}

impl Monomial {
    /// Builds a monomial, reducing the phase mod `2l` and exponents mod `l`.
    pub fn new(l: u32, n: usize, phase: i64, exps: &[i64]) -> Result<Self> {
        check_params(l, n)?;
        if exps.len() != 2 * n {
            return Err(Error::InvalidParameter(format!("expected {} exponents, got {}", 2 * n, exps.len())));
        }
        let li = l as i64;
        Ok(Monomial {
            l,
            n,
            phase: phase.rem_euclid(2 * li) as u32,
            exps: exps.iter().map(|e| e.rem_euclid(li) as u32).collect(),
        })
    }

    pub fn identity(l: u32, n: usize) -> Result<Self> {
        check_params(l, n)?;
        Ok(Monomial { l, n, phase: 0, exps: vec![0; 2 * n] })
    }

    /// The single generator `T_k`.
    pub fn generator(l: u32, n: usize, k: usize) -> Result<Self> {
        let mut m = Self::identity(l, n)?;
        if k >= 2 * n {
            return Err(Error::InvalidParameter(format!("generator index {k} out of range for n = {n}")));
        }
        m.exps[k] = 1;
        Ok(m)
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Exponent of `μ`, in `0..2l`.
    pub fn phase_exp(&self) -> u32 {
        self.phase
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn is_identity(&self) -> bool {
        self.phase == 0 && self.exps.iter().all(|&e| e == 0)
    }

    fn check_compatible(&self, other: &Monomial) -> Result<()> {
        if self.l != other.l || self.n != other.n {
            return Err(Error::ParameterMismatch { l1: self.l, n1: self.n, l2: other.l, n2: other.n });
        }
        Ok(())
    }

    /// Canonical-form product `self · other`.
    ///
    /// Every `T_j` of `other` travels left past each `T_k` of `self` with
    /// `k > j`; each such swap `T_k T_j = ζ^{−1} T_j T_k` lowers the phase
    /// exponent by 2.
    pub fn mul(&self, other: &Monomial) -> Result<Monomial> {
        self.check_compatible(other)?;
        let (l, two_l) = (self.l as u64, 2 * self.l as u64);
        let mut swaps: u64 = 0;
        let mut suffix: u64 = 0; // Σ_{k > j} a_k, built from the right
        for j in (0..self.exps.len()).rev() {
            swaps = (swaps + other.exps[j] as u64 * suffix) % l;
            suffix += self.exps[j] as u64;
        }
        let phase = (self.phase as u64 + other.phase as u64 + two_l - (2 * swaps) % two_l) % two_l;
        let exps = self.exps.iter().zip(&other.exps).map(|(a, b)| (a + b) % self.l).collect();
        Ok(Monomial { l: self.l, n: self.n, phase: phase as u32, exps })
    }

    pub fn pow(&self, p: u64) -> Monomial {
        let mut acc = Monomial { l: self.l, n: self.n, phase: 0, exps: vec![0; self.exps.len()] };
        let mut base = self.clone();
        let mut p = p;
        while p > 0 {
            if p & 1 == 1 {
                acc = acc.mul(&base).expect("same parameters");
            }
            p >>= 1;
            if p > 0 {
                base = base.mul(&base).expect("same parameters");
            }
        }
        acc
    }

    /// `(μ^p T₀^{e₀} ⋯ T_m^{e_m})^{−1} = μ^{−p} T_m^{−e_m} ⋯ T₀^{−e₀}`,
    /// re-ordered canonically.
    pub fn inv(&self) -> Monomial {
        let l = self.l;
        let two_l = 2 * l;
        let mut acc = Monomial { l, n: self.n, phase: (two_l - self.phase) % two_l, exps: vec![0; self.exps.len()] };
        for k in (0..self.exps.len()).rev() {
            let mut factor = Monomial { l, n: self.n, phase: 0, exps: vec![0; self.exps.len()] };
            factor.exps[k] = (l - self.exps[k]) % l;
            acc = acc.mul(&factor).expect("same parameters");
        }
        acc
    }

    /// Parses the [`fmt::Display`] grammar, e.g. `μ^2 · T0^1 T1^2`.
    ///
    /// The phase prefix is optional and may be written `mu^p *`. Factors are
    /// `T<k>^<e>` or `T<k>` and may appear in any order; they are multiplied
    /// left to right, so out-of-order input picks up the commutation phase.
    /// `1` and `I` stand for the identity.
    pub fn parse(l: u32, n: usize, text: &str) -> Result<Monomial> {
        let mut acc = Monomial::identity(l, n)?;
        let mut rest = text.trim();
        for prefix in ["μ^", "mu^"] {
            if let Some(r) = rest.strip_prefix(prefix) {
                let end = r.find(|c: char| !(c.is_ascii_digit() || c == '-')).unwrap_or(r.len());
                let p: i64 = r[..end].parse().map_err(|_| Error::Parse(format!("bad phase exponent in `{text}`")))?;
                acc.phase = p.rem_euclid(2 * l as i64) as u32;
                rest = r[end..].trim_start();
                rest = rest
                    .strip_prefix('·')
                    .or_else(|| rest.strip_prefix('*'))
                    .unwrap_or(rest)
                    .trim_start();
                break;
            }
        }
        for token in rest.split_whitespace() {
            if token == "1" || token == "I" {
                continue;
            }
            let body = token
                .strip_prefix('T')
                .ok_or_else(|| Error::Parse(format!("unexpected token `{token}`")))?;
            let (idx, exp) = match body.split_once('^') {
                Some((i, e)) => (i, e),
                None => (body, "1"),
            };
            let k: usize = idx.parse().map_err(|_| Error::Parse(format!("bad generator index in `{token}`")))?;
            let e: i64 = exp.parse().map_err(|_| Error::Parse(format!("bad exponent in `{token}`")))?;
            if k >= 2 * n {
                return Err(Error::Parse(format!("generator T{k} out of range for n = {n}")));
            }
            let mut factor = Monomial::identity(l, n)?;
            factor.exps[k] = e.rem_euclid(l as i64) as u32;
            acc = acc.mul(&factor)?;
        }
        Ok(acc)
    }

    /// Dense evaluation against the torus generators for the same `(n, l)`.
    pub fn eval(&self, gens: &GeneratorSet) -> Result<ComplexMatrix> {
        let powers = generator_powers(gens, self.l, self.n)?;
        Ok(eval_with_powers(self, &powers))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "μ^{} ·", self.phase)?;
        for (k, e) in self.exps.iter().enumerate() {
            write!(f, " T{k}^{e}")?;
        }
        Ok(())
    }
}

fn check_params(l: u32, n: usize) -> Result<()> {
    if l < 2 {
        return Err(Error::InvalidParameter(format!("l must be at least 2, got {l}")));
    }
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    Ok(())
}

// powers[k][e] = T_k^e for e in 0..l
fn generator_powers(gens: &GeneratorSet, l: u32, n: usize) -> Result<Vec<Vec<ComplexMatrix>>> {
    if gens.family != Family::TorusFull {
        return Err(Error::FamilyMismatch { expected: Family::TorusFull.name().into(), found: gens.family.name().into() });
    }
    if gens.l != l as usize || gens.n != n {
        return Err(Error::FamilyMismatch {
            expected: format!("torus_full(n={n}, l={l})"),
            found: format!("torus_full(n={}, l={})", gens.n, gens.l),
        });
    }
    let dim = gens.dim();
    Ok(gens
        .matrices()
        .map(|t| {
            let mut out = Vec::with_capacity(l as usize);
            let mut cur = ComplexMatrix::identity(dim);
            for _ in 0..l {
                out.push(cur.clone());
                cur = &cur * t;
            }
            out
        })
        .collect())
}

fn eval_with_powers(m: &Monomial, powers: &[Vec<ComplexMatrix>]) -> ComplexMatrix {
    let dim = powers[0][0].dim();
    let mut acc = ComplexMatrix::identity(dim).scale(mu_pow(m.l as usize, m.phase as i64));
    for (k, &e) in m.exps.iter().enumerate() {
        if e != 0 {
            acc = &acc * &powers[k][e as usize];
        }
    }
    acc
}

/// All `l^{2n}` phase-free monomials, in lexicographic exponent order.
pub fn all_phase_free(l: u32, n: usize) -> Result<Vec<Monomial>> {
    check_params(l, n)?;
    let count = (l as usize)
        .checked_pow(2 * n as u32)
        .ok_or(Error::Capacity { requested: usize::MAX, cap: DEFAULT_MAX_DIM })?;
    Ok((0..count)
        .map(|mut idx| {
            let mut exps = vec![0u32; 2 * n];
            for e in exps.iter_mut().rev() {
                *e = (idx % l as usize) as u32;
                idx /= l as usize;
            }
            Monomial { l, n, phase: 0, exps }
        })
        .collect())
}

/// Complex rank of the `l^{2n}` phase-free monomial matrices, from the
/// eigenvalues of their Gram matrix.
pub fn span_dimension(l: u32, n: usize) -> Result<usize> {
    span_dimension_capped(l, n, DEFAULT_MAX_DIM)
}

pub fn span_dimension_capped(l: u32, n: usize, cap: usize) -> Result<usize> {
    let gens = crate::generators::torus_t_capped(n, l as usize, cap)?;
    let powers = generator_powers(&gens, l, n)?;
    let mats: Vec<ComplexMatrix> = all_phase_free(l, n)?.iter().map(|m| eval_with_powers(m, &powers)).collect();
    let count = mats.len();
    let mut gram = ComplexMatrix::zeros(count);
    for i in 0..count {
        for j in i..count {
            let g = hs_inner(&mats[i], &mats[j])?;
            gram[(i, j)] = g;
            gram[(j, i)] = g.conj();
        }
    }
    let eig = herm_eig_with_tol(&gram, 1e-9 * gram.max_abs().max(1.0))?;
    let top = eig.values.first().copied().unwrap_or(0.0);
    Ok(eig.values.iter().filter(|&&v| v > SPAN_RANK_TOL * top).count())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{clifford_gammas, torus_t};
    use crate::linalg::sigma_x;

    fn t(l: u32, n: usize, k: usize) -> Monomial {
        Monomial::generator(l, n, k).unwrap()
    }

    #[test]
    fn identity_is_neutral() {
        let id = Monomial::identity(3, 2).unwrap();
        let m = Monomial::new(3, 2, 5, &[1, 2, 0, 1]).unwrap();
        assert_eq!(id.mul(&m).unwrap(), m);
        assert_eq!(m.mul(&id).unwrap(), m);
        assert!(id.is_identity());
    }

    #[test]
    fn out_of_order_product_picks_up_inverse_zeta() {
        // T0 T1 = ζ T1 T0, so T1 T0 = ζ^{-1} T0 T1 = μ^{2l-2} T0 T1.
        let p = t(3, 1, 1).mul(&t(3, 1, 0)).unwrap();
        assert_eq!(p.phase_exp(), 4);
        assert_eq!(p.exps(), &[1, 1]);
        let q = t(3, 1, 0).mul(&t(3, 1, 1)).unwrap();
        assert_eq!(q.phase_exp(), 0);
    }

    #[test]
    fn generator_order() {
        assert!(t(2, 1, 0).mul(&t(2, 1, 0)).unwrap().is_identity());
        for l in 2..=5u32 {
            assert!(t(l, 2, 3).pow(l as u64).is_identity());
        }
        let id = Monomial::identity(4, 1).unwrap();
        assert_eq!(id.inv(), id);
        assert_eq!(t(3, 1, 0).inv(), t(3, 1, 0).pow(2));
    }

    #[test]
    fn inverse_of_mixed_monomial() {
        let m = Monomial::new(5, 2, 3, &[4, 1, 2, 3]).unwrap();
        assert!(m.inv().mul(&m).unwrap().is_identity());
        assert!(m.mul(&m.inv()).unwrap().is_identity());
    }

    #[test]
    fn swap_round_trip_is_trivial() {
        // Moving T0 past T1 and back: T0 T1 T1^{-1} T0^{-1} = 1.
        let a = t(4, 1, 0).mul(&t(4, 1, 1)).unwrap();
        let b = t(4, 1, 1).inv().mul(&t(4, 1, 0).inv()).unwrap();
        assert!(a.mul(&b).unwrap().is_identity());
    }

    #[test]
    fn parameter_mismatch() {
        assert!(matches!(t(3, 1, 0).mul(&t(3, 2, 0)), Err(Error::ParameterMismatch { .. })));
    }

    #[test]
    fn eval_examples() {
        let gens = torus_t(1, 2).unwrap();
        assert_eq!(Monomial::identity(2, 1).unwrap().eval(&gens).unwrap(), ComplexMatrix::identity(2));
        assert_eq!(t(2, 1, 0).eval(&gens).unwrap(), sigma_x());
        assert!(matches!(t(2, 1, 0).eval(&clifford_gammas(1).unwrap()), Err(Error::FamilyMismatch { .. })));
        assert!(t(3, 1, 0).eval(&gens).is_err());
    }

    #[test]
    fn clifford_products_at_l2() {
        // Γ_k = i T_k at l = 2.
        let n = 2;
        let gens = torus_t(n, 2).unwrap();
        let gam = clifford_gammas(n).unwrap();
        for j in 0..2 * n {
            for k in 0..2 * n {
                let prod = t(2, n, j).mul(&t(2, n, k)).unwrap().eval(&gens).unwrap();
                let dense = &gam.elements[j].matrix * &gam.elements[k].matrix;
                // (iT_j)(iT_k) = −T_jT_k
                assert!(prod.scale_real(-1.0).max_abs_diff(&dense) < 1e-12);
            }
        }
    }

    #[test]
    fn display_and_parse() {
        let m = Monomial::new(3, 1, 4, &[1, 2]).unwrap();
        let s = format!("{m}");
        assert_eq!(s, "μ^4 · T0^1 T1^2");
        assert_eq!(Monomial::parse(3, 1, &s).unwrap(), m);
        assert_eq!(Monomial::parse(3, 1, "mu^4 * T0 T1^2").unwrap(), m);
        assert_eq!(Monomial::parse(3, 1, "T1 T0").unwrap(), t(3, 1, 1).mul(&t(3, 1, 0)).unwrap());
        assert!(Monomial::parse(3, 1, "1").unwrap().is_identity());
        assert!(Monomial::parse(3, 1, "T2").is_err());
        assert!(Monomial::parse(3, 1, "X0").is_err());
    }

    #[test]
    fn span_examples() {
        assert_eq!(span_dimension(2, 1).unwrap(), 4);
        assert_eq!(span_dimension(3, 1).unwrap(), 9);
        assert_eq!(span_dimension(2, 2).unwrap(), 16);
    }
}
