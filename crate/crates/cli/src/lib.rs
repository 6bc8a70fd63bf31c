//! Command-line front end for `unigates`: argument parsing, JSON output,
//! file formats and the schema self-test.
//!
//! [`run`] is the whole program as a function of its arguments, which keeps
//! it testable in-process and deterministic.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::Value;

pub mod commands;
pub mod config;
pub mod error;
pub mod formats;
pub mod schema;

use error::{CliError, EXIT_OK};

#[derive(Debug, Parser)]
#[command(name = "unigates", version, about = "Universal gate sets from Clifford algebras and noncommutative tori")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Write the JSON result to this file instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    /// Indent the JSON output.
    #[arg(long, global = true)]
    pub pretty: bool,
}

#[derive(Clone, Debug, Args)]
pub struct FamilyArgs {
    /// pauli, weyl, tau, clifford_full, clifford_universal,
    /// clifford_two_local, torus_full, torus_split or torus_two_local.
    #[arg(long)]
    pub family: String,

    /// Number of sites.
    #[arg(long = "n", default_value_t = 1)]
    pub n: usize,

    /// Levels per site (ignored by the Clifford families).
    #[arg(long = "l", default_value_t = 2)]
    pub l: usize,

    /// Extra Clifford element: `three` (iΓ₀Γ₁Γ₂) or `four` (iΓ₀Γ₁Γ₂Γ₃).
    #[arg(long, default_value = "three")]
    pub gamma_u: String,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List a generator family with matrices, locality and hermiticity.
    Gens {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, default_value_t = config::MAX_DIM)]
        max_dim: usize,
    },
    /// Check the defining relations of a family.
    Relations {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, default_value_t = config::RELATION_TOL)]
        tol: f64,
        #[arg(long, default_value_t = config::MAX_DIM)]
        max_dim: usize,
    },
    /// Lie closure dimension and recipe trees.
    Closure {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, default_value_t = config::CLOSURE_TOL)]
        tol: f64,
        #[arg(long, default_value_t = config::CLOSURE_MAX_DIM)]
        max_dim: usize,
        /// Omit the per-element recipes.
        #[arg(long)]
        brief: bool,
    },
    /// Rank of the phase-free torus monomials.
    Span {
        #[arg(long = "l")]
        l: u32,
        #[arg(long = "n")]
        n: usize,
        #[arg(long, default_value_t = config::MAX_DIM)]
        max_dim: usize,
    },
    /// Compile a target unitary into a gate sequence.
    Compile(CompileArgs),
    /// Check a gate sequence against a target, or self-test every schema.
    Verify(VerifyArgs),
    /// Closure dimensions against the predicted formulas.
    Table {
        #[arg(long, default_value_t = config::TABLE_MAX_N)]
        max_n: usize,
        #[arg(long, value_delimiter = ',', default_values_t = config::TABLE_TORUS_L)]
        torus_l: Vec<usize>,
        #[arg(long, default_value_t = config::TABLE_TORUS_MAX_DIM)]
        torus_max_dim: usize,
    },
}

#[derive(Clone, Debug, Args)]
pub struct CompileArgs {
    #[command(flatten)]
    pub family: FamilyArgs,

    /// `identity`, `cnot`, `random` (Haar SU(N) from --seed),
    /// `gen:<id>:<tau>`, or a path to a JSON matrix.
    #[arg(long)]
    pub target: String,

    #[arg(long, default_value_t = config::SEED)]
    pub seed: u64,

    #[arg(long, default_value_t = config::SLICES)]
    pub slices: usize,

    /// Double the slice count until this phase-invariant error is reached.
    #[arg(long)]
    pub target_error: Option<f64>,

    #[arg(long, default_value_t = config::MAX_SLICES)]
    pub max_slices: usize,

    #[arg(long, default_value_t = config::MAX_COMMUTATOR_DEPTH)]
    pub max_depth: usize,

    #[arg(long, default_value_t = config::TAU_CLIP)]
    pub tau_clip: f64,

    /// `first` or `second`.
    #[arg(long, default_value = "second")]
    pub trotter: String,

    /// `conjugation`, `group_commutator` or `plain_commutator`.
    #[arg(long, default_value = "conjugation")]
    pub realization: String,

    /// Merge adjacent gates on the same generator.
    #[arg(long)]
    pub merge: bool,

    #[arg(long, default_value_t = config::MEMBERSHIP_TOL)]
    pub membership_tol: f64,

    #[arg(long, default_value_t = config::CLOSURE_TOL)]
    pub closure_tol: f64,

    #[arg(long, default_value_t = config::CLOSURE_MAX_DIM)]
    pub max_dim: usize,

    /// Report errors for M = 1, 2, 4, … up to this value instead of one
    /// sequence.
    #[arg(long, num_args = 0..=1, default_missing_value = config::SWEEP_MAX)]
    pub sweep: Option<usize>,
}

#[derive(Clone, Debug, Args)]
pub struct VerifyArgs {
    /// Run the built-in schema and determinism self-test.
    #[arg(long = "self", conflicts_with_all = ["sequence", "target"])]
    pub self_test: bool,

    /// Gate sequence JSON written by `compile`.
    #[arg(long, required_unless_present = "self_test")]
    pub sequence: Option<PathBuf>,

    /// Target, in the same forms `compile --target` accepts.
    #[arg(long, required_unless_present = "self_test")]
    pub target: Option<String>,

    #[arg(long, default_value_t = config::SEED)]
    pub seed: u64,

    #[arg(long, default_value_t = config::VERIFY_TOL)]
    pub tol: f64,

    #[arg(long, default_value_t = config::CLOSURE_MAX_DIM)]
    pub max_dim: usize,
}

/// Exit code and the text for each stream.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn error(e: &CliError) -> Self {
        Outcome { code: e.exit_code, stdout: String::new(), stderr: render(&e.to_json(), false) + "\n" }
    }
}

fn render(v: &Value, pretty: bool) -> String {
    if pretty {
        serde_json::to_string_pretty(v)
    } else {
        serde_json::to_string(v)
    }
    .expect("JSON values always serialize")
}

/// Runs the program on `args` (including the program name).
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return Outcome { code: EXIT_OK, stdout: e.render().to_string(), stderr: String::new() };
            }
            return Outcome::error(&CliError::validation("usage", e.render().to_string().trim_end()));
        }
    };
    let (value, code) = match commands::dispatch(&cli.command) {
        Ok(pair) => pair,
        Err(e) => return Outcome::error(&e),
    };
    let text = render(&value, cli.pretty) + "\n";
    match &cli.output {
        Some(path) => match std::fs::write(path, &text) {
            Ok(()) => Outcome { code, stdout: String::new(), stderr: String::new() },
            Err(err) => Outcome::error(&CliError::validation("io", format!("cannot write {}: {err}", path.display()))),
        },
        None => Outcome { code, stdout: text, stderr: String::new() },
    }
}
