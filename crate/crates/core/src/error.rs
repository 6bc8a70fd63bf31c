use alloc::string::String;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("capacity exceeded: dimension {requested} is above the cap of {cap}")]
    Capacity { requested: usize, cap: usize },

    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not anti-Hermitian (max deviation {deviation:e})")]
    NotAntiHermitian { deviation: f64 },

    #[error("matrix is not unitary (max deviation {deviation:e})")]
    NotUnitary { deviation: f64 },

    #[error("eigendecomposition did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("monomial parameters differ: (l={l1}, n={n1}) vs (l={l2}, n={n2})")]
    ParameterMismatch { l1: u32, n1: usize, l2: u32, n2: usize },

    #[error("generator family mismatch: expected {expected}, found {found}")]
    FamilyMismatch { expected: String, found: String },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("target is outside the generated Lie algebra (relative residual {residual:e})")]
    NotMember { residual: f64 },

    #[error("unknown generator id `{0}`")]
    UnknownGenerator(String),

    #[error("recipe depth {depth} exceeds the configured maximum {max}")]
    DepthExhausted { depth: usize, max: usize },
}

pub type Result<T> = core::result::Result<T, Error>;
