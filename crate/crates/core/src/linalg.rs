//! Dense complex matrix kernel.
//!
//! Everything in the crate is carried by [`ComplexMatrix`]: a square,
//! row-major `dim × dim` array of [`C64`]. The routines here are the ones the
//! generator, closure and compiler layers need: Kronecker products, brackets,
//! the real Frobenius inner product, a cyclic Jacobi eigensolver for Hermitian
//! matrices, and the exponential / principal logarithm on the unitary group.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub, SubAssign};

use crate::error::{Error, Result};
use crate::math;
use crate::{DEFAULT_MAX_DIM, DEFAULT_PREDICATE_TOL};

pub use num_complex::Complex64 as C64;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);
pub(crate) const I: C64 = C64::new(0.0, 1.0);

/// Jacobi stops once the off-diagonal Frobenius mass drops below this
/// fraction of `‖h‖_F`.
pub const JACOBI_REL_TOL: f64 = 1e-13;
const JACOBI_MAX_SWEEPS: usize = 100;

/// Eigenphases closer than this to `±π` raise the branch-cut flag.
pub const BRANCH_CUT_WARN: f64 = 1e-6;

/// Dense square complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    /// `dim × dim` zero matrix.
    ///
    /// # Panics
    /// If `dim == 0`.
    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "matrix dimension must be positive");
        Self { dim, data: vec![ZERO; dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for k in 0..dim {
            m[(k, k)] = ONE;
        }
        m
    }

    pub fn from_diag(diag: &[C64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (k, &d) in diag.iter().enumerate() {
            m[(k, k)] = d;
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = Self::zeros(dim);
        for r in 0..dim {
            for c in 0..dim {
                m[(r, c)] = f(r, c);
            }
        }
        m
    }

    /// Builds a matrix from row-major entries, validating shape and finiteness.
    pub fn from_row_major(dim: usize, data: Vec<C64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidMatrix("dimension must be positive".into()));
        }
        if data.len() != dim * dim {
            return Err(Error::InvalidMatrix(format!(
                "expected {} entries for dimension {dim}, got {}",
                dim * dim,
                data.len()
            )));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidMatrix("entries must be finite".into()));
        }
        Ok(Self { dim, data })
    }

    /// Builds a matrix from a list of rows.
    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::InvalidMatrix("matrix must be square".into()));
        }
        Self::from_row_major(dim, rows.iter().flatten().copied().collect())
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[C64] {
        &self.data[r * self.dim..(r + 1) * self.dim]
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |r, c| self[(c, r)].conj())
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|k| self[(k, k)]).sum()
    }

    pub fn scale(&self, s: C64) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|&z| z * s).collect() }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|&z| z * s).collect() }
    }

    /// `self += s * other`.
    pub fn axpy(&mut self, s: f64, other: &Self) {
        assert_eq!(self.dim, other.dim);
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += b * s;
        }
    }

    pub fn frob_norm(&self) -> f64 {
        math::sqrt(self.data.iter().map(|z| z.norm_sqr()).sum())
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    /// Matrix product, checking dimensions.
    pub fn matmul(&self, other: &Self) -> Result<Self> {
        check_dims(self, other)?;
        Ok(self * other)
    }

    pub fn hermitian_deviation(&self) -> f64 {
        let n = self.dim;
        let mut dev: f64 = 0.0;
        for r in 0..n {
            for c in r..n {
                dev = dev.max((self[(r, c)] - self[(c, r)].conj()).norm());
            }
        }
        dev
    }

    pub fn anti_hermitian_deviation(&self) -> f64 {
        let n = self.dim;
        let mut dev: f64 = 0.0;
        for r in 0..n {
            for c in r..n {
                dev = dev.max((self[(r, c)] + self[(c, r)].conj()).norm());
            }
        }
        dev
    }

    pub fn unitary_deviation(&self) -> f64 {
        let p = &self.adjoint() * self;
        p.max_abs_diff(&Self::identity(self.dim))
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_deviation() <= tol
    }

    pub fn is_anti_hermitian(&self, tol: f64) -> bool {
        self.anti_hermitian_deviation() <= tol
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitary_deviation() <= tol
    }

    /// Integer matrix power by repeated squaring.
    pub fn pow(&self, mut p: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::identity(self.dim);
        while p > 0 {
            if p & 1 == 1 {
                acc = &acc * &base;
            }
            p >>= 1;
            if p > 0 {
                base = &base * &base;
            }
        }
        acc
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        &self.data[r * self.dim + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C64 {
        &mut self.data[r * self.dim + c]
    }
}

impl<'a> Mul<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix product dimension mismatch");
        let n = self.dim;
        let mut out = ComplexMatrix::zeros(n);
        for r in 0..n {
            let out_row = &mut out.data[r * n..(r + 1) * n];
            for k in 0..n {
                let a = self.data[r * n + k];
                if a == ZERO {
                    continue;
                }
                let rhs_row = &rhs.data[k * n..(k + 1) * n];
                for (o, &b) in out_row.iter_mut().zip(rhs_row) {
                    *o += a * b;
                }
            }
        }
        out
    }
}

impl<'a> Add<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<'a> Sub<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl AddAssign<&ComplexMatrix> for ComplexMatrix {
    fn add_assign(&mut self, rhs: &ComplexMatrix) {
        assert_eq!(self.dim, rhs.dim);
        for (a, b) in self.data.iter_mut().zip(&rhs.data) {
            *a += b;
        }
    }
}

impl SubAssign<&ComplexMatrix> for ComplexMatrix {
    fn sub_assign(&mut self, rhs: &ComplexMatrix) {
        assert_eq!(self.dim, rhs.dim);
        for (a, b) in self.data.iter_mut().zip(&rhs.data) {
            *a -= b;
        }
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        self.scale_real(-1.0)
    }
}

fn check_dims(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<()> {
    if a.dim != b.dim {
        return Err(Error::DimensionMismatch { left: a.dim, right: b.dim });
    }
    Ok(())
}

/// Kronecker product with the default dimension cap.
pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    tensor_capped(a, b, DEFAULT_MAX_DIM)
}

/// Kronecker product `a ⊗ b`; block `(j, k)` of the result is `a[j,k] · b`.
pub fn tensor_capped(a: &ComplexMatrix, b: &ComplexMatrix, cap: usize) -> Result<ComplexMatrix> {
    let dim = a.dim.saturating_mul(b.dim);
    if dim > cap {
        return Err(Error::Capacity { requested: dim, cap });
    }
    let (na, nb) = (a.dim, b.dim);
    let mut out = ComplexMatrix::zeros(dim);
    for ar in 0..na {
        for ac in 0..na {
            let s = a[(ar, ac)];
            if s == ZERO {
                continue;
            }
            for br in 0..nb {
                for bc in 0..nb {
                    out[(ar * nb + br, ac * nb + bc)] = s * b[(br, bc)];
                }
            }
        }
    }
    Ok(out)
}

/// Kronecker product of a list of factors, leftmost factor first.
pub fn tensor_all(factors: &[ComplexMatrix], cap: usize) -> Result<ComplexMatrix> {
    let mut iter = factors.iter();
    let first = iter
        .next()
        .ok_or_else(|| Error::InvalidParameter("empty tensor product".into()))?;
    iter.try_fold(first.clone(), |acc, f| tensor_capped(&acc, f, cap))
}

/// `ab − ba`.
pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    check_dims(a, b)?;
    Ok(&(a * b) - &(b * a))
}

/// `ab + ba`.
pub fn anticommutator(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    check_dims(a, b)?;
    Ok(&(a * b) + &(b * a))
}

/// `Re tr(a† b)`.
pub fn frob_inner(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    check_dims(a, b)?;
    Ok(frob_inner_unchecked(a, b))
}

#[inline]
pub(crate) fn frob_inner_unchecked(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    a.data.iter().zip(&b.data).map(|(x, y)| x.re * y.re + x.im * y.im).sum()
}

/// Complex Frobenius inner product `tr(a† b)`.
pub fn hs_inner(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<C64> {
    check_dims(a, b)?;
    Ok(a.data.iter().zip(&b.data).map(|(x, y)| x.conj() * y).sum())
}

/// Spectral decomposition `h = W diag(λ) W†` of a Hermitian matrix.
#[derive(Clone, Debug)]
pub struct HermEig {
    /// Eigenvalues, descending.
    pub values: Vec<f64>,
    /// Unitary matrix whose columns are the matching eigenvectors.
    pub vectors: ComplexMatrix,
}

impl HermEig {
    /// `W diag(f(λ)) W†`.
    pub fn apply(&self, f: impl Fn(f64) -> C64) -> ComplexMatrix {
        let w = &self.vectors;
        let n = w.dim();
        let fvals: Vec<C64> = self.values.iter().map(|&l| f(l)).collect();
        ComplexMatrix::from_fn(n, |r, c| {
            (0..n).map(|k| w[(r, k)] * fvals[k] * w[(c, k)].conj()).sum()
        })
    }
}

/// Hermitian eigendecomposition with the default predicate tolerance.
pub fn herm_eig(h: &ComplexMatrix) -> Result<HermEig> {
    herm_eig_with_tol(h, DEFAULT_PREDICATE_TOL)
}

/// Cyclic Jacobi eigensolver for Hermitian matrices.
///
/// Eigenvalues come back in descending order; ties are broken by the first
/// eigenvector component (real part, then imaginary part, descending) after
/// each eigenvector has been rotated so its leading non-negligible component
/// is real and positive.
pub fn herm_eig_with_tol(h: &ComplexMatrix, tol: f64) -> Result<HermEig> {
    let deviation = h.hermitian_deviation();
    if deviation > tol {
        return Err(Error::NotHermitian { deviation });
    }
    let n = h.dim();
    // Work on the exactly Hermitian part.
    let mut a = ComplexMatrix::from_fn(n, |r, c| (h[(r, c)] + h[(c, r)].conj()) * 0.5);
    let mut v = ComplexMatrix::identity(n);
    let scale = a.frob_norm();
    let target = JACOBI_REL_TOL * scale;

    let mut converged = scale == 0.0;
    let mut sweeps = 0;
    while !converged {
        if off_diagonal_norm(&a) <= target {
            converged = true;
            break;
        }
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps });
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                jacobi_rotate(&mut a, &mut v, p, q);
            }
        }
    }
    debug_assert!(converged);

    let mut pairs: Vec<(f64, Vec<C64>)> = (0..n)
        .map(|k| {
            let mut col: Vec<C64> = (0..n).map(|r| v[(r, k)]).collect();
            normalize_phase(&mut col);
            (a[(k, k)].re, col)
        })
        .collect();
    let tie = 1e-12 * scale.max(1.0);
    pairs.sort_by(|x, y| {
        if (x.0 - y.0).abs() > tie {
            return y.0.partial_cmp(&x.0).unwrap_or(Ordering::Equal);
        }
        let (xa, ya) = (x.1[0], y.1[0]);
        ya.re
            .partial_cmp(&xa.re)
            .unwrap_or(Ordering::Equal)
            .then(ya.im.partial_cmp(&xa.im).unwrap_or(Ordering::Equal))
    });

    let values = pairs.iter().map(|p| p.0).collect();
    let vectors = ComplexMatrix::from_fn(n, |r, c| pairs[c].1[r]);
    Ok(HermEig { values, vectors })
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.dim();
    let mut s = 0.0;
    for r in 0..n {
        for c in 0..n {
            if r != c {
                s += a[(r, c)].norm_sqr();
            }
        }
    }
    math::sqrt(s)
}

// One complex Jacobi rotation annihilating a[p][q]. With a[p][q] = r·e^{iφ},
// the unitary G acts on columns p, q as
//   G = [[c, s], [−s·e^{−iφ}, c·e^{−iφ}]]
// and a ← G† a G, v ← v G.
fn jacobi_rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let n = a.dim();
    let phase = apq / r; // e^{iφ}
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let theta = (aqq - app) / (2.0 * r);
    let t = if theta >= 0.0 {
        1.0 / (theta + math::sqrt(1.0 + theta * theta))
    } else {
        -1.0 / (-theta + math::sqrt(1.0 + theta * theta))
    };
    let c = 1.0 / math::sqrt(1.0 + t * t);
    let s = t * c;
    let gpp = C64::new(c, 0.0);
    let gpq = C64::new(s, 0.0);
    let gqp = -phase.conj() * s;
    let gqq = phase.conj() * c;

    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * gpp + akq * gqp;
        a[(k, q)] = akp * gpq + akq * gqq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = gpp.conj() * apk + gqp.conj() * aqk;
        a[(q, k)] = gpq.conj() * apk + gqq.conj() * aqk;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = C64::new(a[(q, q)].re, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * gpp + vkq * gqp;
        v[(k, q)] = vkp * gpq + vkq * gqq;
    }
}

fn normalize_phase(col: &mut [C64]) {
    let biggest = col.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if let Some(lead) = col.iter().find(|z| z.norm() > 1e-8 * biggest).copied() {
        let rot = lead.conj() / lead.norm();
        for z in col.iter_mut() {
            *z *= rot;
        }
    }
}

/// `e^a` for anti-Hermitian `a`, via the eigendecomposition of `−ia`.
pub fn expm_antiherm(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    expm_antiherm_with_tol(a, DEFAULT_PREDICATE_TOL)
}

pub fn expm_antiherm_with_tol(a: &ComplexMatrix, tol: f64) -> Result<ComplexMatrix> {
    let deviation = a.anti_hermitian_deviation();
    if deviation > tol {
        return Err(Error::NotAntiHermitian { deviation });
    }
    let h = ComplexMatrix::from_fn(a.dim(), |r, c| {
        let x = (a[(r, c)] - a[(c, r)].conj()) * 0.5;
        C64::new(x.im, -x.re) // −i·x
    });
    let eig = herm_eig_with_tol(&h, f64::INFINITY)?;
    Ok(eig.apply(|l| C64::new(math::cos(l), math::sin(l))))
}

/// Eigendecomposition of a unitary matrix: `u = W diag(e^{iφ}) W†` with
/// `φ ∈ (−π, π]`.
#[derive(Clone, Debug)]
pub struct UnitaryEig {
    pub phases: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl UnitaryEig {
    pub fn apply(&self, f: impl Fn(f64) -> C64) -> ComplexMatrix {
        HermEig { values: self.phases.clone(), vectors: self.vectors.clone() }.apply(f)
    }
}

// Mixing weights for the Hermitian pencil Re(u) + α·Im(u). A single α can
// merge two eigenphases symmetric about atan(α); the next one separates them.
const PENCIL_WEIGHTS: [f64; 4] = [0.577_215_664_901_532_9, 1.618_033_988_749_895, -0.414_213_562_373_095, core::f64::consts::E];

/// Diagonalizes a unitary matrix through a Hermitian pencil.
pub fn unitary_eig(u: &ComplexMatrix) -> Result<UnitaryEig> {
    unitary_eig_with_tol(u, DEFAULT_PREDICATE_TOL)
}

pub fn unitary_eig_with_tol(u: &ComplexMatrix, tol: f64) -> Result<UnitaryEig> {
    let deviation = u.unitary_deviation();
    if deviation > tol {
        return Err(Error::NotUnitary { deviation });
    }
    let n = u.dim();
    let ud = u.adjoint();
    let mut best: Option<(f64, UnitaryEig)> = None;
    for alpha in PENCIL_WEIGHTS {
        let h = ComplexMatrix::from_fn(n, |r, c| {
            let re_part = (u[(r, c)] + ud[(r, c)]) * 0.5;
            let im_part = (u[(r, c)] - ud[(r, c)]) * C64::new(0.0, -0.5);
            re_part + im_part * alpha
        });
        let eig = herm_eig_with_tol(&h, f64::INFINITY)?;
        let w = &eig.vectors;
        let d = &(&w.adjoint() * u) * w;
        let off = off_diagonal_norm(&d);
        let phases: Vec<f64> = (0..n).map(|k| principal_arg(d[(k, k)])).collect();
        let candidate = UnitaryEig { phases, vectors: eig.vectors };
        if off <= 1e-11 * math::sqrt(n as f64) {
            return Ok(candidate);
        }
        if best.as_ref().is_none_or(|(b, _)| off < *b) {
            best = Some((off, candidate));
        }
    }
    // All pencils left some coupling; the best one is still accurate to `off`.
    Ok(best.map(|b| b.1).expect("at least one pencil weight"))
}

/// Argument in `(−π, π]`; values a rounding step above `−π` map to `+π`.
fn principal_arg(z: C64) -> f64 {
    let phi = math::atan2(z.im, z.re);
    if phi <= -core::f64::consts::PI + 1e-15 {
        phi + 2.0 * core::f64::consts::PI
    } else {
        phi
    }
}

/// Principal logarithm of a unitary matrix.
#[derive(Clone, Debug)]
pub struct UnitaryLog {
    /// Anti-Hermitian `A` with `e^A = u` and eigenphases in `(−π, π]`.
    pub log: ComplexMatrix,
    /// Some eigenphase lies within [`BRANCH_CUT_WARN`] of `π`.
    pub near_branch_cut: bool,
    /// Largest `|φ|` over the eigenphases.
    pub max_abs_phase: f64,
}

pub fn logm_unitary(u: &ComplexMatrix) -> Result<UnitaryLog> {
    logm_unitary_with_tol(u, DEFAULT_PREDICATE_TOL)
}

pub fn logm_unitary_with_tol(u: &ComplexMatrix, tol: f64) -> Result<UnitaryLog> {
    let eig = unitary_eig_with_tol(u, tol)?;
    let max_abs_phase = eig.phases.iter().map(|p| p.abs()).fold(0.0, f64::max);
    let near_branch_cut = core::f64::consts::PI - max_abs_phase < BRANCH_CUT_WARN;
    let log = eig.apply(|phi| C64::new(0.0, phi));
    Ok(UnitaryLog { log, near_branch_cut, max_abs_phase })
}

/// Principal square root of a unitary matrix (eigenphases halved).
pub fn sqrtm_unitary(u: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = unitary_eig(u)?;
    Ok(eig.apply(|phi| C64::new(math::cos(phi / 2.0), math::sin(phi / 2.0))))
}

/// Distances between two unitaries.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ErrorMetrics {
    /// `‖u − v‖_F`.
    pub frob_dist: f64,
    /// `min_φ ‖u − e^{iφ} v‖_F`.
    pub phase_invariant_dist: f64,
}

pub fn error_metrics(u: &ComplexMatrix, v: &ComplexMatrix) -> Result<ErrorMetrics> {
    check_dims(u, v)?;
    let frob_dist = (u - v).frob_norm();
    // ‖u − e^{iφ}v‖² = ‖u‖² + ‖v‖² − 2 Re(e^{iφ} tr(u†v)) is smallest when
    // e^{iφ} tr(u†v) = |tr(u†v)|. The norm is evaluated directly rather than
    // from the closed form, which cancels catastrophically near zero.
    let overlap = hs_inner(u, v)?;
    let phase = if overlap.norm() > 0.0 { overlap.conj() / overlap.norm() } else { ONE };
    let phase_invariant_dist = (u - &v.scale(phase)).frob_norm();
    Ok(ErrorMetrics { frob_dist, phase_invariant_dist })
}

/// Standard Pauli matrices.
pub fn sigma_x() -> ComplexMatrix {
    ComplexMatrix::from_fn(2, |r, c| if r != c { ONE } else { ZERO })
}

pub fn sigma_y() -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(2);
    m[(0, 1)] = -I;
    m[(1, 0)] = I;
    m
}

pub fn sigma_z() -> ComplexMatrix {
    ComplexMatrix::from_diag(&[ONE, -ONE])
}

/// Partial trace over one tensor site. Sites are numbered from the right:
/// site 0 is the rightmost (least significant) factor of a `levels^sites`
/// dimensional space.
pub fn partial_trace_site(m: &ComplexMatrix, levels: usize, sites: usize, site: usize) -> ComplexMatrix {
    let stride = levels.pow(site as u32);
    let outer = levels.pow((sites - site - 1) as u32);
    let reduced = outer * stride;
    ComplexMatrix::from_fn(reduced, |r, c| {
        let (rh, rl) = (r / stride, r % stride);
        let (ch, cl) = (c / stride, c % stride);
        (0..levels)
            .map(|k| m[((rh * levels + k) * stride + rl, (ch * levels + k) * stride + cl)])
            .sum()
    })
}

/// Inverse of [`partial_trace_site`] for the identity factor: inserts `I_l` at
/// `site`.
pub fn embed_identity_site(r: &ComplexMatrix, levels: usize, sites: usize, site: usize) -> ComplexMatrix {
    let stride = levels.pow(site as u32);
    let dim = levels.pow(sites as u32);
    ComplexMatrix::from_fn(dim, |row, col| {
        let (rh, rk, rl) = (row / (stride * levels), (row / stride) % levels, row % stride);
        let (ch, ck, cl) = (col / (stride * levels), (col / stride) % levels, col % stride);
        if rk != ck {
            ZERO
        } else {
            r[(rh * stride + rl, ch * stride + cl)]
        }
    })
}

/// Number of tensor sites on which `m` acts non-trivially: a site counts
/// unless `m = Tr_site(m)/l ⊗ I` there.
pub fn locality(m: &ComplexMatrix, levels: usize, sites: usize) -> usize {
    let scale = m.max_abs().max(f64::MIN_POSITIVE);
    (0..sites)
        .filter(|&site| {
            let reduced = partial_trace_site(m, levels, sites, site).scale_real(1.0 / levels as f64);
            let rebuilt = embed_identity_site(&reduced, levels, sites, site);
            rebuilt.max_abs_diff(m) > 1e-10 * scale
        })
        .count()
}

/// Rounds to the nearest integer when within `tol`.
pub(crate) fn near_integer(x: f64, tol: f64) -> Option<i64> {
    let r = math::round(x);
    ((x - r).abs() <= tol).then_some(r as i64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn tensor_identity_and_diagonal() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(tensor(&i2, &i2).unwrap(), ComplexMatrix::identity(4));
        let zz = tensor(&sigma_z(), &sigma_z()).unwrap();
        assert_eq!(zz, ComplexMatrix::from_diag(&[ONE, -ONE, -ONE, ONE]));
        let m = tensor(&i2, &ComplexMatrix::identity(3)).unwrap();
        assert_eq!(m.dim(), 6);
    }

    #[test]
    fn tensor_block_layout() {
        let a = ComplexMatrix::from_fn(2, |r, c| C64::new((r * 2 + c) as f64 + 1.0, 0.0));
        let b = sigma_y();
        let t = tensor(&a, &b).unwrap();
        for (j, k) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            for (r, cc) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
                assert_eq!(t[(2 * j + r, 2 * k + cc)], a[(j, k)] * b[(r, cc)]);
            }
        }
    }

    #[test]
    fn tensor_capacity() {
        let a = ComplexMatrix::identity(64);
        assert!(matches!(tensor_capped(&a, &a, 4095), Err(Error::Capacity { requested: 4096, cap: 4095 })));
        assert!(tensor_capped(&a, &a, 4096).is_ok());
    }

    #[test]
    fn brackets() {
        let xy = commutator(&sigma_x(), &sigma_y()).unwrap();
        assert!(xy.max_abs_diff(&sigma_z().scale(c(0.0, 2.0))) < 1e-15);
        let g0 = sigma_x().scale(I);
        let g1 = sigma_y().scale(I);
        assert!(anticommutator(&g0, &g1).unwrap().max_abs() < 1e-15);
        assert!(commutator(&g0, &g0).unwrap().max_abs() == 0.0);
        assert!(matches!(
            commutator(&g0, &ComplexMatrix::identity(3)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn frobenius_inner_products() {
        let ix = sigma_x().scale(I);
        let iy = sigma_y().scale(I);
        assert_eq!(frob_inner(&ix, &ix).unwrap(), 2.0);
        assert_eq!(frob_inner(&ix, &iy).unwrap(), 0.0);
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(frob_inner(&i2, &i2).unwrap(), 2.0);
    }

    #[test]
    fn eig_of_paulis() {
        let e = herm_eig(&sigma_z()).unwrap();
        assert_eq!(e.values, vec![1.0, -1.0]);
        let e = herm_eig(&ComplexMatrix::identity(4)).unwrap();
        assert_eq!(e.values, vec![1.0; 4]);
        let e = herm_eig(&sigma_x()).unwrap();
        assert!((e.values[0] - 1.0).abs() < 1e-14 && (e.values[1] + 1.0).abs() < 1e-14);
        let s = 1.0 / 2f64.sqrt();
        assert!((e.vectors[(0, 0)] - c(s, 0.0)).norm() < 1e-14);
        assert!((e.vectors[(1, 0)] - c(s, 0.0)).norm() < 1e-14);
        assert!((e.vectors[(0, 1)] - c(s, 0.0)).norm() < 1e-14);
        assert!((e.vectors[(1, 1)] - c(-s, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn eig_rejects_non_hermitian() {
        assert!(matches!(herm_eig(&sigma_x().scale(I)), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn expm_basics() {
        let z = ComplexMatrix::zeros(3);
        assert!(expm_antiherm(&z).unwrap().max_abs_diff(&ComplexMatrix::identity(3)) < 1e-15);
        let a = sigma_x().scale(c(0.0, PI / 2.0));
        let e = expm_antiherm(&a).unwrap();
        assert!(e.max_abs_diff(&sigma_x().scale(I)) < 1e-14);
        assert!(matches!(expm_antiherm(&sigma_x()), Err(Error::NotAntiHermitian { .. })));
    }

    #[test]
    fn logm_basics() {
        let l = logm_unitary(&ComplexMatrix::identity(2)).unwrap();
        assert!(l.log.max_abs() < 1e-15 && !l.near_branch_cut);

        let u = ComplexMatrix::from_diag(&[I, -I]);
        let l = logm_unitary(&u).unwrap();
        let want = ComplexMatrix::from_diag(&[c(0.0, PI / 2.0), c(0.0, -PI / 2.0)]);
        assert!(l.log.max_abs_diff(&want) < 1e-14);

        let l = logm_unitary(&ComplexMatrix::identity(2).scale_real(-1.0)).unwrap();
        assert!(l.near_branch_cut);
        let want = ComplexMatrix::from_diag(&[c(0.0, PI), c(0.0, PI)]);
        assert!(l.log.max_abs_diff(&want) < 1e-14);

        assert!(matches!(logm_unitary(&sigma_x().scale_real(2.0)), Err(Error::NotUnitary { .. })));
    }

    #[test]
    fn logm_handles_symmetric_phases() {
        // Phases symmetric around atan(α) of the first pencil weight.
        let a0 = PENCIL_WEIGHTS[0].atan();
        let u = ComplexMatrix::from_diag(&[
            C64::from_polar(1.0, a0 + 0.4),
            C64::from_polar(1.0, a0 - 0.4),
            C64::from_polar(1.0, 2.0),
        ]);
        let rot = expm_antiherm(&sigma_x().scale(c(0.0, 0.3))).unwrap();
        let mut w = ComplexMatrix::identity(3);
        for r in 0..2 {
            for cc in 0..2 {
                w[(r, cc)] = rot[(r, cc)];
            }
        }
        let u = &(&w * &u) * &w.adjoint();
        let l = logm_unitary(&u).unwrap();
        assert!(expm_antiherm(&l.log).unwrap().max_abs_diff(&u) < 1e-12);
    }

    #[test]
    fn error_metric_examples() {
        let i2 = ComplexMatrix::identity(2);
        let m = error_metrics(&i2, &i2).unwrap();
        assert_eq!((m.frob_dist, m.phase_invariant_dist), (0.0, 0.0));
        let m = error_metrics(&i2, &i2.scale(I)).unwrap();
        assert!((m.frob_dist - 2.0).abs() < 1e-15 && m.phase_invariant_dist < 1e-15);
        let m = error_metrics(&i2, &sigma_x()).unwrap();
        assert!((m.frob_dist - 2.0).abs() < 1e-15 && (m.phase_invariant_dist - 2.0).abs() < 1e-15);
    }

    #[test]
    fn locality_detector() {
        let i2 = ComplexMatrix::identity(2);
        let xzi = tensor_all(&[sigma_x(), sigma_z(), i2.clone()], 64).unwrap();
        assert_eq!(locality(&xzi, 2, 3), 2);
        assert_eq!(locality(&ComplexMatrix::identity(8), 2, 3), 0);
        let sum = &tensor_all(&[sigma_x(), i2.clone()], 64).unwrap()
            + &tensor_all(&[i2.clone(), sigma_y()], 64).unwrap();
        assert_eq!(locality(&sum, 2, 2), 2);
    }

    #[test]
    fn partial_trace_roundtrip() {
        let a = sigma_y();
        let b = sigma_x();
        let m = tensor_all(&[a.clone(), ComplexMatrix::identity(2), b.clone()], 64).unwrap();
        let r = partial_trace_site(&m, 2, 3, 1).scale_real(0.5);
        assert_eq!(r, tensor(&a, &b).unwrap());
        assert_eq!(embed_identity_site(&r, 2, 3, 1), m);
    }
}
