//! Random matrices for tests and benchmarks.

use alloc::vec::Vec;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::linalg::{unitary_eig, ComplexMatrix, C64};
use crate::math;
use crate::Result;

fn gaussian<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(dim, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        C64::new(re, im)
    })
}

/// Haar-distributed unitary: Gram-Schmidt on the columns of a complex
/// Gaussian matrix, which is QR with a positive diagonal in `R`.
pub fn haar_unitary<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    let g = gaussian(rng, dim);
    let mut cols: Vec<Vec<C64>> = (0..dim).map(|c| (0..dim).map(|r| g[(r, c)]).collect()).collect();
    for c in 0..dim {
        // Two passes keep the columns orthogonal to machine precision.
        for _ in 0..2 {
            for k in 0..c {
                let (done, rest) = cols.split_at_mut(c);
                let proj: C64 = done[k].iter().zip(rest[0].iter()).map(|(a, b)| a.conj() * b).sum();
                for (x, q) in rest[0].iter_mut().zip(done[k].iter()) {
                    *x -= proj * q;
                }
            }
        }
        let norm = math::sqrt(cols[c].iter().map(|z| z.norm_sqr()).sum());
        for x in &mut cols[c] {
            *x /= norm;
        }
    }
    ComplexMatrix::from_fn(dim, |r, c| cols[c][r])
}

/// Haar unitary rescaled to determinant one.
pub fn haar_special_unitary<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Result<ComplexMatrix> {
    let u = haar_unitary(rng, dim);
    let phase: f64 = unitary_eig(&u)?.phases.iter().sum();
    let theta = -phase / dim as f64;
    Ok(u.scale(C64::new(math::cos(theta), math::sin(theta))))
}

/// Anti-Hermitian `(G − G†)/2` from a complex Gaussian `G`, scaled so that
/// its spectral radius is at most `radius`.
pub fn random_anti_hermitian<R: Rng + ?Sized>(rng: &mut R, dim: usize, radius: f64) -> Result<ComplexMatrix> {
    let g = gaussian(rng, dim);
    let a = (&g - &g.adjoint()).scale_real(0.5);
    let h = a.scale(C64::new(0.0, -1.0));
    let top = crate::linalg::herm_eig(&h)?.values.iter().map(|v| v.abs()).fold(0.0, f64::max);
    Ok(if top > 0.0 { a.scale_real(radius / top) } else { a })
}
