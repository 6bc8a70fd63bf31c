//! One function per subcommand, each returning its JSON result.

use std::path::Path;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use unigates::compiler::{self, compile_report, doubling_sweep, CompileConfig, Realization, TrotterOrder};
use unigates::generators::{self, FamilyParams, GammaUVariant};
use unigates::lieclosure::{self, closure_with_tol, LieBasis, TableFamily};
use unigates::linalg::{error_metrics, expm_antiherm};
use unigates::{sample, symalg, ComplexMatrix, Family, GeneratorSet, C64};

use crate::error::{CliError, CliResult, EXIT_NUMERICAL, EXIT_OK};
use crate::formats::{matrix_from_json, matrix_to_json, read_json, JsonMatrix, SequenceJson};
use crate::{schema, Command, CompileArgs, FamilyArgs, VerifyArgs};

pub fn dispatch(cmd: &Command) -> CliResult<(Value, i32)> {
    let ok = |v: Value| Ok((v, EXIT_OK));
    match cmd {
        Command::Gens { family, max_dim } => ok(gens(family, *max_dim)?),
        Command::Relations { family, tol, max_dim } => ok(relations(family, *tol, *max_dim)?),
        Command::Closure { family, tol, max_dim, brief } => ok(closure(family, *tol, *max_dim, *brief)?),
        Command::Span { l, n, max_dim } => ok(span(*l, *n, *max_dim)?),
        Command::Compile(args) => ok(compile(args)?),
        Command::Verify(args) if args.self_test => {
            let report = schema::self_test();
            let code = if report["pass"] == json!(true) { EXIT_OK } else { EXIT_NUMERICAL };
            Ok((report, code))
        }
        Command::Verify(args) => ok(verify(args)?),
        Command::Table { max_n, torus_l, torus_max_dim } => ok(table(*max_n, torus_l, *torus_max_dim)?),
    }
}

fn positive(name: &str, x: f64) -> CliResult<()> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(CliError::validation("invalid_parameter", format!("--{name} must be positive and finite, got {x}")))
    }
}

fn family_params(args: &FamilyArgs, max_dim: usize) -> CliResult<FamilyParams> {
    let family = Family::from_name(&args.family)
        .filter(|f| *f != Family::Custom)
        .ok_or_else(|| CliError::validation("invalid_parameter", format!("unknown family `{}`", args.family)))?;
    let gamma_u = GammaUVariant::from_name(&args.gamma_u)
        .ok_or_else(|| CliError::validation("invalid_parameter", format!("unknown --gamma-u `{}`", args.gamma_u)))?;
    // Clifford families are qubit families whatever --l says.
    let l = match family {
        Family::Pauli | Family::CliffordFull | Family::CliffordUniversal | Family::CliffordTwoLocal => 2,
        _ => args.l,
    };
    Ok(FamilyParams { family, n: args.n, l, gamma_u, max_dim })
}

fn build(args: &FamilyArgs, max_dim: usize) -> CliResult<(FamilyParams, GeneratorSet)> {
    let p = family_params(args, max_dim)?;
    let gens = generators::build(&p)?;
    Ok((p, gens))
}

#[derive(Serialize)]
struct ElementJson {
    id: String,
    locality: usize,
    hermiticity: &'static str,
    matrix: JsonMatrix,
}

fn gens(args: &FamilyArgs, max_dim: usize) -> CliResult<Value> {
    let (p, gens) = build(args, max_dim)?;
    let elements: Vec<ElementJson> = gens
        .elements
        .iter()
        .map(|g| ElementJson {
            id: g.id.clone(),
            locality: g.locality,
            hermiticity: g.hermiticity.name(),
            matrix: matrix_to_json(&g.matrix),
        })
        .collect();
    Ok(json!({
        "command": "gens",
        "family": gens.family.name(),
        "n": gens.n,
        "l": gens.l,
        "gamma_u": p.gamma_u.name(),
        "dim": gens.dim(),
        "count": gens.len(),
        "max_locality": gens.max_locality(),
        "elements": elements,
    }))
}

fn relations(args: &FamilyArgs, tol: f64, max_dim: usize) -> CliResult<Value> {
    positive("tol", tol)?;
    let (_, gens) = build(args, max_dim)?;
    let report = generators::relation_report(&gens)?;
    let checks: Vec<Value> = report
        .checks
        .iter()
        .map(|c| json!({"relation": c.relation, "cases": c.cases, "max_violation": c.max_violation}))
        .collect();
    Ok(json!({
        "command": "relations",
        "family": report.family.name(),
        "n": report.n,
        "l": report.l,
        "checks": checks,
        "max_violation": report.max_violation,
        "tolerance": tol,
        "pass": report.passes(tol),
    }))
}

fn lie_basis(gens: &GeneratorSet, tol: f64) -> CliResult<LieBasis> {
    if !gens.family.is_lie_family() {
        return Err(CliError::validation(
            "invalid_parameter",
            format!("family `{}` is not anti-Hermitian; use a split or Clifford family", gens.family.name()),
        ));
    }
    Ok(closure_with_tol(gens, tol)?)
}

fn closure(args: &FamilyArgs, tol: f64, max_dim: usize, brief: bool) -> CliResult<Value> {
    positive("tol", tol)?;
    let (_, gens) = build(args, max_dim)?;
    let basis = lie_basis(&gens, tol)?;
    let mut out = json!({
        "command": "closure",
        "family": gens.family.name(),
        "n": gens.n,
        "l": gens.l,
        "matrix_dim": basis.matrix_dim(),
        "dim": basis.len(),
        "ambient_dim": basis.dim_ambient(),
        "generation_sizes": basis.generation_sizes(),
        "max_depth": basis.max_depth(),
        "orthonormality_defect": basis.orthonormality_defect(),
        "recipe_fidelity": basis.recipe_fidelity(&gens)?,
    });
    if !brief {
        let recipes: Vec<Value> = basis
            .recipes()
            .iter()
            .enumerate()
            .map(|(i, r)| {
                json!({
                    "index": i,
                    "generation": r.generation,
                    "depth": r.depth,
                    "expr": basis.sexpr(i),
                    "scale": r.scale,
                    "corrections": r.corrections,
                })
            })
            .collect();
        out["recipes"] = Value::Array(recipes);
    }
    Ok(out)
}

fn span(l: u32, n: usize, max_dim: usize) -> CliResult<Value> {
    let rank = symalg::span_dimension_capped(l, n, max_dim)?;
    let expected = (l as usize).pow(2 * n as u32);
    Ok(json!({"command": "span", "l": l, "n": n, "rank": rank, "expected": expected, "pass": rank == expected}))
}

fn cnot() -> ComplexMatrix {
    let one = C64::new(1.0, 0.0);
    let mut m = ComplexMatrix::zeros(4);
    m[(0, 0)] = one;
    m[(1, 1)] = one;
    m[(2, 3)] = one;
    m[(3, 2)] = one;
    m
}

/// Resolves a target description against a generator set.
pub fn resolve_target(spec: &str, gens: &GeneratorSet, seed: u64) -> CliResult<ComplexMatrix> {
    let dim = gens.dim();
    match spec {
        "identity" => Ok(ComplexMatrix::identity(dim)),
        "cnot" if dim == 4 => Ok(cnot()),
        "cnot" => Err(CliError::validation("invalid_parameter", format!("cnot needs a 4-dimensional set, got {dim}"))),
        "random" => Ok(sample::haar_special_unitary(&mut ChaCha8Rng::seed_from_u64(seed), dim)?),
        _ => {
            if let Some(rest) = spec.strip_prefix("gen:") {
                let (id, tau) = rest
                    .rsplit_once(':')
                    .ok_or_else(|| CliError::validation("invalid_parameter", "expected gen:<id>:<tau>"))?;
                let tau: f64 = tau
                    .parse()
                    .map_err(|_| CliError::validation("invalid_parameter", format!("bad tau `{tau}`")))?;
                let g = gens.get(id).ok_or_else(|| unigates::Error::UnknownGenerator(id.into()))?;
                return Ok(expm_antiherm(&g.matrix.scale_real(tau))?);
            }
            matrix_from_json(&read_json(Path::new(spec))?)
        }
    }
}

fn compile_config(a: &CompileArgs) -> CliResult<CompileConfig> {
    let trotter = TrotterOrder::from_name(&a.trotter)
        .ok_or_else(|| CliError::validation("invalid_parameter", format!("unknown --trotter `{}`", a.trotter)))?;
    let realization = Realization::from_name(&a.realization)
        .ok_or_else(|| CliError::validation("invalid_parameter", format!("unknown --realization `{}`", a.realization)))?;
    let cfg = CompileConfig {
        slices: a.slices,
        max_commutator_depth: a.max_depth,
        target_error: a.target_error,
        max_slices: a.max_slices.max(a.slices),
        tau_clip: a.tau_clip,
        trotter,
        realization,
        merge_adjacent: a.merge,
        membership_tol: a.membership_tol,
        coefficient_tol: CompileConfig::default().coefficient_tol,
    };
    cfg.validate()?;
    Ok(cfg)
}

fn compile(a: &CompileArgs) -> CliResult<Value> {
    positive("closure-tol", a.closure_tol)?;
    let cfg = compile_config(a)?;
    let (p, gens) = build(&a.family, a.max_dim)?;
    let basis = lie_basis(&gens, a.closure_tol)?;
    let u = resolve_target(&a.target, &gens, a.seed)?;
    if let Some(max) = a.sweep {
        if max == 0 {
            return Err(CliError::validation("invalid_parameter", "--sweep must be at least 1"));
        }
        let table = compile_report(&u, &gens, &basis, &cfg, &doubling_sweep(max))?;
        let rows: Vec<Value> = table
            .rows
            .iter()
            .map(|r| {
                json!({
                    "slices": r.slices,
                    "gate_count": r.gate_count,
                    "frob_error": r.frob_error,
                    "phase_invariant_error": r.phase_invariant_error,
                })
            })
            .collect();
        return Ok(json!({
            "command": "compile_report",
            "gens": gens.family.name(),
            "n": gens.n,
            "l": gens.l,
            "target": a.target,
            "rows": rows,
            "monotone": table.monotone,
            "improvement": if table.improvement.is_finite() { json!(table.improvement) } else { Value::Null },
            "exact_realization": table.exact_realization,
        }));
    }
    let seq = compiler::compile(&u, &gens, &basis, &cfg)?;
    Ok(serde_json::to_value(SequenceJson::from_sequence(&seq, p.gamma_u)).expect("sequence serializes"))
}

fn verify(a: &VerifyArgs) -> CliResult<Value> {
    positive("tol", a.tol)?;
    let path = a.sequence.as_deref().expect("clap requires --sequence");
    let spec = a.target.as_deref().expect("clap requires --target");
    let seq = SequenceJson::from_value(read_json(path)?)?;
    let family = FamilyArgs {
        family: seq.gens.clone(),
        n: seq.n,
        l: seq.l,
        gamma_u: seq.gamma_u.clone().unwrap_or_else(|| GammaUVariant::Three.name().into()),
    };
    let (_, gens) = build(&family, a.max_dim)?;
    let u = resolve_target(spec, &gens, a.seed)?;
    let product = compiler::evaluate_items(&seq.items, &gens)?;
    let metrics = error_metrics(&u, &product)?;
    let result = json!({
        "command": "verify",
        "gens": gens.family.name(),
        "n": gens.n,
        "l": gens.l,
        "gate_count": seq.items.len(),
        "unitary_deviation": product.unitary_deviation(),
        "frob_error": metrics.frob_dist,
        "phase_invariant_error": metrics.phase_invariant_dist,
        "tolerance": a.tol,
        "pass": metrics.phase_invariant_dist <= a.tol,
    });
    if metrics.phase_invariant_dist > a.tol {
        return Err(CliError::numerical(
            "verification_failed",
            format!("phase-invariant error {:e} exceeds {:e}", metrics.phase_invariant_dist, a.tol),
        )
        .with_details(result));
    }
    Ok(result)
}

fn table(max_n: usize, torus_l: &[usize], torus_max_dim: usize) -> CliResult<Value> {
    if max_n == 0 {
        return Err(CliError::validation("invalid_parameter", "--max-n must be at least 1"));
    }
    if max_n > 4 {
        return Err(unigates::Error::Capacity { requested: 1 << max_n, cap: 16 }.into());
    }
    let mut rows = lieclosure::dimension_table(
        max_n,
        &[TableFamily::Clifford, TableFamily::CliffordUniversal(GammaUVariant::Three), TableFamily::CliffordTwoLocal],
    )?;
    for &l in torus_l {
        if l < 2 {
            return Err(CliError::validation("invalid_parameter", format!("--torus-l values must be at least 2, got {l}")));
        }
        for family in [TableFamily::TorusSplit { l }, TableFamily::TorusTwoLocal { l }] {
            let mut n = family.min_n();
            while l.checked_pow(n as u32).is_some_and(|d| d <= torus_max_dim) {
                rows.push(lieclosure::dimension_row(family, n)?);
                n += 1;
            }
        }
    }
    let pass = rows.iter().all(|r| r.pass);
    let rows: Vec<Value> = rows
        .iter()
        .map(|r| {
            json!({
                "family": r.family.name(),
                "n": r.n,
                "l": r.l,
                "dim": r.dim,
                "predicted": r.predicted,
                "formula": r.formula,
                "traceless_bound": r.traceless_bound,
                "traceless_generators": r.traceless_generators,
                "max_depth": r.max_depth,
                "recipe_fidelity": r.recipe_fidelity,
                "pass": r.pass,
            })
        })
        .collect();
    Ok(json!({"command": "table", "rows": rows, "pass": pass}))
}
