//! Universal quantum gate sets built from Clifford algebras and
//! noncommutative tori.
//!
//! The crate is organised bottom-up:
//!
//! - [`linalg`]: dense complex matrices, Kronecker products, brackets,
//!   Hermitian eigendecomposition and the unitary exponential/logarithm.
//! - [`symalg`]: exact monomials in the torus generators with phases in the
//!   cyclic group of order `2l`.
//! - [`generators`]: Pauli, Weyl, τ, Clifford Γ, torus T families, Hermitian
//!   splits and the two-local reduced sets, with relation checks.
//! - [`lieclosure`]: real Lie closure under commutators with recipe trees.
//! - [`compiler`]: synthesis of a target unitary as a product of generator
//!   exponentials.
//!
//! The crate is `no_std` (it needs `alloc`). The optional `rand` feature
//! (on by default) adds Haar-random unitary sampling.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod compiler;
pub mod error;
pub mod generators;
pub mod lieclosure;
pub mod linalg;
mod math;
#[cfg(feature = "rand")]
pub mod sample;
pub mod symalg;

pub use compiler::{CompileConfig, GateSequence, Realization, TrotterOrder};
pub use error::{Error, Result};
pub use generators::{Family, Generator, GeneratorSet, Hermiticity};
pub use lieclosure::{LieBasis, Membership};
pub use linalg::{ComplexMatrix, C64};
pub use symalg::Monomial;

/// Largest matrix dimension any constructor will produce unless told otherwise.
pub const DEFAULT_MAX_DIM: usize = 4096;

/// Default absolute tolerance for the unitary / Hermitian predicates.
pub const DEFAULT_PREDICATE_TOL: f64 = 1e-9;
