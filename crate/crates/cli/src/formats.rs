//! JSON encodings of matrices and gate sequences.
//!
//! A complex number is `[re, im]`; a bare number is read as a real entry.
//! A matrix is an array of rows.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use unigates::compiler::{CompileReport, GateSequence};
use unigates::generators::GammaUVariant;
use unigates::{ComplexMatrix, Family, C64};

use crate::error::{CliError, CliResult};

pub type JsonMatrix = Vec<Vec<[f64; 2]>>;

pub fn matrix_to_json(m: &ComplexMatrix) -> JsonMatrix {
    (0..m.dim()).map(|r| m.row(r).iter().map(|z| [z.re, z.im]).collect()).collect()
}

fn parse_entry(v: &Value) -> Option<C64> {
    match v {
        Value::Number(x) => x.as_f64().map(|re| C64::new(re, 0.0)),
        Value::Array(pair) if pair.len() == 2 => Some(C64::new(pair[0].as_f64()?, pair[1].as_f64()?)),
        _ => None,
    }
}

/// Reads a square matrix from a JSON array of rows, or from an object
/// carrying it under `"matrix"`.
pub fn matrix_from_json(v: &Value) -> CliResult<ComplexMatrix> {
    let bad = |msg: String| CliError::validation("invalid_matrix", msg);
    let rows = match v {
        Value::Object(obj) => obj.get("matrix").ok_or_else(|| bad("object has no `matrix` field".into()))?,
        other => other,
    };
    let rows = rows.as_array().ok_or_else(|| bad("matrix must be an array of rows".into()))?;
    let mut parsed = Vec::with_capacity(rows.len());
    for (r, row) in rows.iter().enumerate() {
        let row = row.as_array().ok_or_else(|| bad(format!("row {r} is not an array")))?;
        let entries = row
            .iter()
            .enumerate()
            .map(|(c, e)| parse_entry(e).ok_or_else(|| bad(format!("entry ({r},{c}) is not a number or [re, im] pair"))))
            .collect::<CliResult<Vec<_>>>()?;
        parsed.push(entries);
    }
    Ok(ComplexMatrix::from_rows(&parsed)?)
}

pub fn read_json(path: &Path) -> CliResult<Value> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::validation("io", format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::validation("parse", format!("{}: {e}", path.display())))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportJson {
    pub frob_error: f64,
    pub phase_invariant_error: f64,
    pub slice_count: usize,
    pub gate_count: usize,
    pub global_phase: f64,
    pub membership_residual: f64,
    pub branch_cut_split: bool,
    pub exact_realization: bool,
    pub max_depth_used: usize,
    pub trotter: String,
    pub realization: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target_met: Option<bool>,
}

impl From<&CompileReport> for ReportJson {
    fn from(r: &CompileReport) -> Self {
        ReportJson {
            frob_error: r.frob_error,
            phase_invariant_error: r.phase_invariant_error,
            slice_count: r.slice_count,
            gate_count: r.gate_count,
            global_phase: r.global_phase,
            membership_residual: r.membership_residual,
            branch_cut_split: r.branch_cut_split,
            exact_realization: r.exact_realization,
            max_depth_used: r.max_depth_used,
            trotter: r.trotter.name().into(),
            realization: r.realization.name().into(),
            target_met: r.target_met,
        }
    }
}

/// The on-disk gate sequence. Only `gens`, `n`, `l` and `items` are needed
/// to evaluate it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SequenceJson {
    pub gens: String,
    pub n: usize,
    pub l: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma_u: Option<String>,
    pub items: Vec<(String, f64)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coefficients: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<ReportJson>,
}

impl SequenceJson {
    pub fn from_sequence(seq: &GateSequence, gamma_u: GammaUVariant) -> Self {
        SequenceJson {
            gens: seq.family.name().into(),
            n: seq.n,
            l: seq.l,
            gamma_u: (seq.family == Family::CliffordUniversal).then(|| gamma_u.name().into()),
            items: seq.items.clone(),
            target_dim: Some(seq.target_dim),
            coefficients: Some(seq.coefficients.clone()),
            report: Some(ReportJson::from(&seq.report)),
        }
    }

    pub fn from_value(v: Value) -> CliResult<Self> {
        serde_json::from_value(v).map_err(|e| CliError::validation("parse", format!("not a gate sequence: {e}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn matrix_roundtrip() {
        let m = ComplexMatrix::from_fn(3, |r, c| C64::new(r as f64 * 0.1, -(c as f64) / 3.0));
        let v = serde_json::to_value(matrix_to_json(&m)).unwrap();
        let text = serde_json::to_string(&v).unwrap();
        let back = matrix_from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn matrix_inputs() {
        let m = matrix_from_json(&json!([[1, 0], [0, [0.0, 1.0]]])).unwrap();
        assert_eq!(m[(1, 1)], C64::new(0.0, 1.0));
        let m2 = matrix_from_json(&json!({"matrix": [[1]]})).unwrap();
        assert_eq!(m2.dim(), 1);
        for bad in [json!([[1, 2]]), json!("x"), json!([["a"]]), json!([[[1, 2, 3]]])] {
            let e = matrix_from_json(&bad).unwrap_err();
            assert_eq!(e.exit_code, crate::error::EXIT_VALIDATION);
        }
    }

    #[test]
    fn sequence_minimal_form() {
        let s = SequenceJson::from_value(json!({"gens": "clifford_full", "n": 2, "l": 2, "items": [["G0", 0.3]]})).unwrap();
        assert_eq!(s.items, vec![("G0".to_string(), 0.3)]);
        assert!(SequenceJson::from_value(json!({"gens": 1})).is_err());
    }
}
