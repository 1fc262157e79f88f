//! `lks`: the pipeline and the oracle lab as batch subcommands.

mod commands;
mod input;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use std::process::ExitCode;

/// Seed used when neither `--seed` nor `LKS_SEED` is given.
pub const DEFAULT_SEED: u64 = 0;

#[derive(Parser, Debug, Serialize)]
#[command(name = "lks", version, about = "Tree embedding in skew-LKS graphs: pipeline and oracle lab")]
#[command(args_override_self = true)]
pub struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, env = "LKS_SEED", default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Write the JSON artifact here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<String>,
    /// JSON file whose keys mirror the subcommand's flags; explicit flags win.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub config: Option<String>,
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
    /// Sampling trials per pair for regularity checks.
    #[arg(long, global = true, default_value_t = 200)]
    pub regularity_budget: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(subcommand)]
    #[serde(flatten)]
    pub cmd: Cmd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(tag = "subcommand", rename_all = "kebab-case")]
pub enum Cmd {
    /// Fine partition of a tree, with the verifier's report.
    FinePartition(FinePartitionArgs),
    /// Configuration witness for a cluster bundle.
    FindConfig(FindConfigArgs),
    /// Embed a tree into a cluster bundle and emit the certificate.
    Embed(EmbedArgs),
    /// Conjecture scan over small hosts.
    Scan(ScanArgs),
    /// Extremal host and its excluded trees.
    Extremal(ExtremalArgs),
    /// Bistar versus complete bipartite check.
    Bistar(BistarArgs),
    /// Multicolour Ramsey check on K_n.
    Ramsey(RamseyArgs),
    /// Realize a density plan or a shipped fixture as a cluster bundle.
    Synthesize(SynthesizeArgs),
    /// Check the skew-LKS items on a bundle.
    ValidateLks(ValidateArgs),
}

/// A tree: `P<n>`, `S<n>`, `B<a>.<b>`, or a JSON file (tree or artifact).
#[derive(Args, Debug, Serialize)]
pub struct FinePartitionArgs {
    #[arg(long)]
    pub tree: String,
    #[arg(long)]
    pub ell: usize,
}

#[derive(Args, Debug, Serialize)]
pub struct StatsArgs {
    /// Derive the statistics from this tree (with `--ell`).
    #[arg(long)]
    pub tree: Option<String>,
    #[arg(long)]
    pub ell: Option<usize>,
    #[arg(long)]
    pub a1: Option<usize>,
    #[arg(long)]
    pub a2: Option<usize>,
    #[arg(long)]
    pub b1: Option<usize>,
    #[arg(long)]
    pub b2: Option<usize>,
    #[arg(long)]
    pub r_tilde: Option<String>,
}

#[derive(Args, Debug, Serialize)]
pub struct FindConfigArgs {
    #[arg(long)]
    pub bundle: String,
    #[command(flatten)]
    pub stats: StatsArgs,
    /// Overrides the bundle's η.
    #[arg(long)]
    pub eta: Option<String>,
}

#[derive(Args, Debug, Serialize)]
pub struct EmbedArgs {
    #[arg(long)]
    pub bundle: String,
    /// Defaults to the tree stored in the bundle artifact.
    #[arg(long)]
    pub tree: Option<String>,
    #[arg(long)]
    pub ell: Option<usize>,
    /// Witness file; found afresh when absent from both flag and bundle.
    #[arg(long)]
    pub witness: Option<String>,
    #[arg(long)]
    pub delta: Option<String>,
    /// Include the step trace in the artifact.
    #[arg(long)]
    pub trace: bool,
}

#[derive(Args, Debug, Serialize)]
pub struct ScanArgs {
    #[arg(long)]
    pub k: usize,
    #[arg(long, default_value = "1/2")]
    pub r: String,
    #[arg(long)]
    pub n: usize,
    #[arg(long, conflicts_with = "trials")]
    pub exhaustive: bool,
    #[arg(long)]
    pub trials: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    pub jobs: Option<usize>,
}

#[derive(Args, Debug, Serialize)]
pub struct ExtremalArgs {
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub r: String,
    #[arg(long, default_value_t = 1)]
    pub copies: usize,
    /// Confirm there is no path on 2⌊r(k+1)⌋ vertices.
    #[arg(long)]
    pub check_path: bool,
    /// Confirm the tight broom does not embed.
    #[arg(long)]
    pub check_tree: bool,
    /// Include the edge list in the artifact.
    #[arg(long)]
    pub emit_graph: bool,
}

#[derive(Args, Debug, Serialize)]
pub struct BistarArgs {
    #[arg(long)]
    pub k: usize,
}

#[derive(Args, Debug, Serialize)]
pub struct RamseyArgs {
    /// Comma-separated trees, e.g. `P4,P4`.
    #[arg(long, value_delimiter = ',')]
    pub trees: Vec<String>,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 10_000_000)]
    pub budget: u64,
}

#[derive(Args, Debug, Serialize)]
pub struct SynthesizeArgs {
    /// Density plan JSON.
    #[arg(long, conflicts_with = "fixture", required_unless_present = "fixture")]
    pub plan: Option<String>,
    /// One of the shipped case fixtures: A, B, C or D.
    #[arg(long)]
    pub fixture: Option<String>,
}

#[derive(Args, Debug, Serialize)]
pub struct ValidateArgs {
    #[arg(long)]
    pub bundle: String,
    /// Exact regularity checks (small clusters only).
    #[arg(long)]
    pub exhaustive: bool,
}

/// Failure kinds mapped to exit codes.
#[derive(Debug)]
pub enum Failure {
    /// Bad invocation or unreadable input: exit 2.
    Usage(String),
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Usage(e.to_string())
    }
}

/// What a command hands back: the result payload, whether the outcome was
/// positive, and a one-line summary.
pub struct Outcome {
    pub result: Value,
    pub ok: bool,
    pub summary: String,
}

fn emit(cli: &Cli, out: &Outcome) -> Result<(), Failure> {
    let mut result = out.result.clone();
    let elapsed = result.as_object_mut().and_then(|o| o.remove("elapsed_ms"));
    let stamp = std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH).map(|d| d.as_millis() as u64).unwrap_or(0);
    let artifact = json!({
        "run": cli,
        "ok": out.ok,
        "summary": out.summary,
        "result": result,
        "timestamp": { "unix_ms": stamp, "elapsed_ms": elapsed },
    });
    let text = serde_json::to_string_pretty(&artifact)?;
    match &cli.out {
        Some(path) => {
            std::fs::write(path, text + "\n").map_err(|e| Failure::Usage(format!("cannot write {path}: {e}")))?;
            println!("{}", out.summary);
        }
        None if cli.format == Format::Text => println!("{}", out.summary),
        None => println!("{text}"),
    }
    Ok(())
}

fn main() -> ExitCode {
    let argv = match input::expand_config(std::env::args().collect()) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let outcome = match commands::run(&cli) {
        Ok(o) => o,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    if cli.verbose > 0 {
        eprintln!("{}", outcome.summary);
    }
    if let Err(Failure::Usage(msg)) = emit(&cli, &outcome) {
        eprintln!("error: {msg}");
        return ExitCode::from(2);
    }
    if outcome.ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
