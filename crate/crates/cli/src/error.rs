use serde::Serialize;
use serde_json::{json, Value};
use unigates::Error;

/// Exit status for success.
pub const EXIT_OK: i32 = 0;
/// Exit status for numerical failures such as a target outside the algebra.
pub const EXIT_NUMERICAL: i32 = 1;
/// Exit status for bad flags, malformed input and capacity violations.
pub const EXIT_VALIDATION: i32 = 2;

/// An error as reported on standard error.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CliError {
    pub kind: String,
    pub message: String,
    pub exit_code: i32,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub details: Value,
}

impl CliError {
    pub fn validation(kind: &str, message: impl Into<String>) -> Self {
        CliError { kind: kind.into(), message: message.into(), exit_code: EXIT_VALIDATION, details: Value::Null }
    }

    pub fn numerical(kind: &str, message: impl Into<String>) -> Self {
        CliError { kind: kind.into(), message: message.into(), exit_code: EXIT_NUMERICAL, details: Value::Null }
    }

    pub fn with_details(mut self, details: Value) -> Self {
        self.details = details;
        self
    }

    pub fn to_json(&self) -> Value {
        json!({ "error": self })
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let message = e.to_string();
        let (kind, details, numerical) = match &e {
            Error::DimensionMismatch { left, right } => ("dimension_mismatch", json!({"left": left, "right": right}), false),
            Error::Capacity { requested, cap } => ("capacity", json!({"requested": requested, "cap": cap}), false),
            Error::InvalidMatrix(_) => ("invalid_matrix", Value::Null, false),
            Error::NotHermitian { deviation } => ("not_hermitian", json!({"deviation": deviation}), false),
            Error::NotAntiHermitian { deviation } => ("not_anti_hermitian", json!({"deviation": deviation}), false),
            Error::NotUnitary { deviation } => ("not_unitary", json!({"deviation": deviation}), false),
            Error::NoConvergence { sweeps } => ("no_convergence", json!({"sweeps": sweeps}), true),
            Error::InvalidParameter(_) => ("invalid_parameter", Value::Null, false),
            Error::ParameterMismatch { .. } => ("parameter_mismatch", Value::Null, false),
            Error::FamilyMismatch { .. } => ("family_mismatch", Value::Null, false),
            Error::Parse(_) => ("parse", Value::Null, false),
            Error::NotMember { residual } => ("not_member", json!({"residual": residual}), true),
            Error::UnknownGenerator(id) => ("unknown_generator", json!({"id": id}), false),
            Error::DepthExhausted { depth, max } => ("depth_exhausted", json!({"depth": depth, "max": max}), true),
        };
        let base = if numerical { CliError::numerical(kind, message) } else { CliError::validation(kind, message) };
        base.with_details(details)
    }
}

pub type CliResult<T> = Result<T, CliError>;
