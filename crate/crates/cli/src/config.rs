//! Every default the CLI uses. Each one has a matching flag.

use std::f64::consts::PI;

/// `relations --tol`: largest accepted relation violation.
pub const RELATION_TOL: f64 = 1e-12;

/// `closure --tol` / `compile --closure-tol`: admission threshold per
/// matrix dimension.
pub const CLOSURE_TOL: f64 = 1e-8;

/// `compile --membership-tol`: relative residual accepted for `log u`.
pub const MEMBERSHIP_TOL: f64 = 1e-8;

/// `--max-dim` for `gens`, `relations` and `span`.
pub const MAX_DIM: usize = 4096;

/// `--max-dim` for `closure`, `compile` and `verify`; the closure costs
/// about `N⁶` so its cap is much lower.
pub const CLOSURE_MAX_DIM: usize = 64;

/// `compile --slices`.
pub const SLICES: usize = 1;

/// `compile --max-slices`: ceiling for `--target-error` doubling.
pub const MAX_SLICES: usize = 1024;

/// `compile --max-depth`.
pub const MAX_COMMUTATOR_DEPTH: usize = 16;

/// `compile --tau-clip`.
pub const TAU_CLIP: f64 = PI;

/// `compile --sweep` with no value: largest `M` in the doubling sweep.
pub const SWEEP_MAX: &str = "64";

/// `compile --seed` / `verify --seed` for `random` targets.
pub const SEED: u64 = 0;

/// `verify --tol`: largest phase-invariant error accepted for a sequence.
pub const VERIFY_TOL: f64 = 1e-6;

/// `table --max-n`.
pub const TABLE_MAX_N: usize = 3;

/// `table --torus-l`.
pub const TABLE_TORUS_L: [usize; 2] = [3, 4];

/// `table --torus-max-dim`: torus rows are listed while `lⁿ` stays within this.
pub const TABLE_TORUS_MAX_DIM: usize = 9;
