//! The documented output schemas and the `verify --self` self-test.

use std::process;

use serde_json::{json, Value};

use crate::run;

/// `(name, schema text)` for every document the CLI emits.
pub const SCHEMAS: [(&str, &str); 10] = [
    ("gens", include_str!("../../../docs/schemas/gens.schema.json")),
    ("relations", include_str!("../../../docs/schemas/relations.schema.json")),
    ("closure", include_str!("../../../docs/schemas/closure.schema.json")),
    ("span", include_str!("../../../docs/schemas/span.schema.json")),
    ("compile", include_str!("../../../docs/schemas/compile.schema.json")),
    ("compile_report", include_str!("../../../docs/schemas/compile_report.schema.json")),
    ("verify", include_str!("../../../docs/schemas/verify.schema.json")),
    ("verify_self", include_str!("../../../docs/schemas/verify_self.schema.json")),
    ("table", include_str!("../../../docs/schemas/table.schema.json")),
    ("error", include_str!("../../../docs/schemas/error.schema.json")),
];

/// Checks `doc` against the named schema; returns every violation.
pub fn validate(name: &str, doc: &Value) -> Result<(), Vec<String>> {
    let text = SCHEMAS
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, t)| *t)
        .ok_or_else(|| vec![format!("no schema named `{name}`")])?;
    let schema: Value = serde_json::from_str(text).map_err(|e| vec![format!("schema `{name}` is not JSON: {e}")])?;
    let validator = jsonschema::validator_for(&schema).map_err(|e| vec![format!("schema `{name}` is invalid: {e}")])?;
    let errors: Vec<String> = validator.iter_errors(doc).map(|e| format!("{} at {}", e, e.instance_path())).collect();
    if errors.is_empty() {
        Ok(())
    } else {
        Err(errors)
    }
}

struct Checks(Vec<Value>);

impl Checks {
    fn add(&mut self, name: &str, pass: bool, detail: impl Into<String>) {
        self.0.push(json!({"name": name, "pass": pass, "detail": detail.into()}));
    }
}

fn argv(args: &[&str]) -> Vec<String> {
    std::iter::once("unigates").chain(args.iter().copied()).map(String::from).collect()
}

// Runs a successful invocation twice, validates stdout against `schema` and
// returns the parsed document.
fn expect_ok(checks: &mut Checks, name: &str, args: &[&str], schema: &str) -> Option<Value> {
    let first = run(argv(args));
    let second = run(argv(args));
    checks.add(&format!("{name}: deterministic"), first == second, "two runs compared byte for byte");
    if first.code != 0 {
        checks.add(&format!("{name}: exit 0"), false, format!("exit {} with {}", first.code, first.stderr.trim()));
        return None;
    }
    let doc: Value = match serde_json::from_str(&first.stdout) {
        Ok(v) => v,
        Err(e) => {
            checks.add(&format!("{name}: schema {schema}"), false, format!("stdout is not JSON: {e}"));
            return None;
        }
    };
    match validate(schema, &doc) {
        Ok(()) => checks.add(&format!("{name}: schema {schema}"), true, "valid"),
        Err(errs) => checks.add(&format!("{name}: schema {schema}"), false, errs.join("; ")),
    }
    Some(doc)
}

fn expect_error(checks: &mut Checks, name: &str, args: &[&str], code: i32, kind: &str) {
    let out = run(argv(args));
    let doc: Value = serde_json::from_str(&out.stderr).unwrap_or(Value::Null);
    let schema_ok = validate("error", &doc);
    let got_kind = doc["error"]["kind"].as_str().unwrap_or("");
    let pass = out.code == code && out.stdout.is_empty() && schema_ok.is_ok() && got_kind == kind;
    checks.add(
        &format!("{name}: error"),
        pass,
        format!("exit {} (want {code}), kind `{got_kind}` (want `{kind}`), schema {}", out.code, if schema_ok.is_ok() { "valid" } else { "invalid" }),
    );
}

fn value_check(checks: &mut Checks, name: &str, doc: &Option<Value>, pass: impl Fn(&Value) -> bool, detail: impl Fn(&Value) -> String) {
    match doc {
        Some(d) => checks.add(name, pass(d), detail(d)),
        None => checks.add(name, false, "no output"),
    }
}

/// Exercises every subcommand, validates each document against its schema,
/// checks determinism and a few known values, and validates its own report.
pub fn self_test() -> Value {
    let mut checks = Checks(Vec::new());
    for (name, text) in SCHEMAS {
        let ok = serde_json::from_str::<Value>(text).ok().and_then(|s| jsonschema::validator_for(&s).ok()).is_some();
        checks.add(&format!("schema {name}: compiles"), ok, "");
    }

    let gens = expect_ok(&mut checks, "gens", &["gens", "--family", "clifford_full", "--n", "2"], "gens");
    value_check(&mut checks, "gens: four elements", &gens, |d| d["count"] == json!(4), |d| format!("count {}", d["count"]));

    let rel = expect_ok(&mut checks, "relations", &["relations", "--family", "torus_full", "--n", "2", "--l", "3"], "relations");
    value_check(
        &mut checks,
        "relations: torus (2,3) within 1e-12",
        &rel,
        |d| d["max_violation"].as_f64().is_some_and(|v| v <= 1e-12),
        |d| format!("max_violation {}", d["max_violation"]),
    );

    let clo = expect_ok(&mut checks, "closure", &["closure", "--family", "clifford_full", "--n", "2"], "closure");
    value_check(&mut checks, "closure: clifford n=2 is 10", &clo, |d| d["dim"] == json!(10), |d| format!("dim {}", d["dim"]));

    let span = expect_ok(&mut checks, "span", &["span", "--l", "3", "--n", "1"], "span");
    value_check(&mut checks, "span: l=3 n=1 is 9", &span, |d| d["rank"] == json!(9), |d| format!("rank {}", d["rank"]));

    let seq_args = ["compile", "--family", "clifford_two_local", "--n", "2", "--target", "cnot", "--slices", "8"];
    let seq = expect_ok(&mut checks, "compile", &seq_args, "compile");
    expect_ok(
        &mut checks,
        "compile --sweep",
        &["compile", "--family", "clifford_two_local", "--n", "2", "--target", "random", "--seed", "3", "--sweep", "8"],
        "compile_report",
    );
    expect_ok(&mut checks, "table", &["table", "--max-n", "2", "--torus-l", "3", "--torus-max-dim", "3"], "table");

    if let Some(seq) = seq {
        let path = std::env::temp_dir().join(format!("unigates-self-test-{}.json", process::id()));
        match std::fs::write(&path, seq.to_string()) {
            Ok(()) => {
                let p = path.to_string_lossy().into_owned();
                expect_ok(&mut checks, "verify", &["verify", "--sequence", &p, "--target", "cnot", "--tol", "1e-2"], "verify");
                let _ = std::fs::remove_file(&path);
            }
            Err(e) => checks.add("verify: schema verify", false, format!("cannot write temporary file: {e}")),
        }
    }

    expect_error(&mut checks, "unknown flag", &["gens", "--bogus"], 2, "usage");
    expect_error(&mut checks, "unknown family", &["gens", "--family", "nope"], 2, "invalid_parameter");
    expect_error(&mut checks, "capacity", &["gens", "--family", "clifford_full", "--n", "7", "--max-dim", "64"], 2, "capacity");
    expect_error(
        &mut checks,
        "outside so(5)",
        &["compile", "--family", "clifford_full", "--n", "2", "--target", "random", "--seed", "1"],
        1,
        "not_member",
    );

    let failed = checks.0.iter().filter(|c| c["pass"] != json!(true)).count();
    let mut report = json!({
        "command": "verify_self",
        "checks": checks.0,
        "passed": 0,
        "failed": failed,
        "pass": failed == 0,
    });
    report["passed"] = json!(report["checks"].as_array().map_or(0, |c| c.len()) - failed);
    if let Err(errs) = validate("verify_self", &report) {
        report["checks"].as_array_mut().expect("checks is an array").push(json!({
            "name": "verify_self: schema verify_self",
            "pass": false,
            "detail": errs.join("; "),
        }));
        report["failed"] = json!(failed + 1);
        report["pass"] = json!(false);
    }
    report
}
