use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use matspace_core::census::{self, CensusConfig, PredicateSet, DEFAULT_WITNESS_LIMIT};
use matspace_core::predicates::DEFAULT_BUDGET;
use matspace_core::{Error as CoreError, Field};
use serde_json::{json, Value};

use crate::format::{parse_field_flag, subspace_from_json, FormatError};
use crate::parallel::Parallel;
use crate::report::{self, Exit};
use crate::verify::{self, Context};

#[derive(Parser, Debug)]
#[command(name = "matspace", version, about = "Exact analysis of matrix subspaces over GF(p) and Q")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct Common {
    /// gf<p> or rational
    #[arg(long, global = true)]
    pub field: Option<String>,
    /// JSON input file
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    /// Limit for exhaustive element searches
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
    /// Maximum number of subspaces a census may enumerate
    #[arg(long, global = true, default_value_t = census::DEFAULT_CAP)]
    pub cap: u128,
    /// Census worker threads (default: available cores)
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Allow censuses above the heavy threshold
    #[arg(long, global = true)]
    pub heavy: bool,
    /// Seed for sampling over Q
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the report here instead of standard output
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Dimension, orthogonal complement and predicate verdicts of a subspace
    Analyze,
    /// Find S with V = S Sym_n S^-1, or a witness that none exists
    Recover,
    /// Exhaustive enumeration of subspaces of Mat_n(F_q)
    Census(CensusArgs),
    /// Re-check every claim in a previously emitted report
    Verify,
}

#[derive(Args, Debug)]
pub struct CensusArgs {
    #[arg(long)]
    pub n: usize,
    /// 2, 3 or 5 (defaults to the prime of --field)
    #[arg(long)]
    pub q: Option<u64>,
    #[arg(long)]
    pub d: Option<usize>,
    /// Comma-separated subset of diag,ts,irr
    #[arg(long, default_value = "diag,ts,irr")]
    pub pred: String,
    /// Largest dimension of an all-diagonalizable subspace
    #[arg(long, conflicts_with_all = ["classify", "d"])]
    pub max_diag: bool,
    /// Check both classification statements exhaustively
    #[arg(long, conflicts_with = "d")]
    pub classify: bool,
    /// Number of witnesses to keep
    #[arg(long, default_value_t = DEFAULT_WITNESS_LIMIT)]
    pub witnesses: usize,
    /// Include elapsed time and worker count in the report
    #[arg(long)]
    pub timings: bool,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error("{0}")]
    Usage(String),
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        CliError::Format(FormatError::Core(e))
    }
}

impl CliError {
    fn exit(&self) -> Exit {
        match self {
            CliError::Format(FormatError::Core(e)) => core_exit(e),
            _ => Exit::Input,
        }
    }
}

fn core_exit(e: &CoreError) -> Exit {
    match e {
        CoreError::BudgetExceeded(_) | CoreError::CapExceeded(_) | CoreError::HeavyRunRequired(_) => Exit::Budget,
        _ => Exit::Input,
    }
}

/// Parses arguments, runs the command and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { Exit::Input as i32 } else { Exit::Ok as i32 };
        }
    };
    match dispatch(&cli) {
        Ok((report, exit)) => match emit(&report, cli.common.output.as_deref()) {
            Ok(()) => exit as i32,
            Err(e) => fail(&e),
        },
        Err(e) => fail(&e),
    }
}

fn fail(e: &CliError) -> i32 {
    let exit = e.exit();
    eprintln!("{}", json!({"error": e.to_string(), "exit": exit as i32}));
    exit as i32
}

fn emit(report: &Value, output: Option<&Path>) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(report).map_err(FormatError::from)? + "\n";
    match output {
        Some(path) => std::fs::write(path, text)
            .map_err(|source| FormatError::Io { path: path.display().to_string(), source }.into()),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn read_input(common: &Common) -> Result<Value, CliError> {
    let path = common.input.as_ref().ok_or_else(|| CliError::Usage("--input is required".into()))?;
    let text = std::fs::read_to_string(path)
        .map_err(|source| FormatError::Io { path: path.display().to_string(), source })?;
    Ok(serde_json::from_str(&text).map_err(FormatError::from)?)
}

fn context(common: &Common) -> Context {
    Context {
        budget: common.budget,
        seed: common.seed,
        cap: common.cap,
        heavy: common.heavy,
        runner: common.workers.map(Parallel::new).unwrap_or_else(Parallel::available),
    }
}

fn field_flag(common: &Common) -> Result<Option<Field>, CliError> {
    Ok(common.field.as_deref().map(parse_field_flag).transpose()?)
}

fn dispatch(cli: &Cli) -> Result<(Value, Exit), CliError> {
    let common = &cli.common;
    let ctx = context(common);
    let flag = field_flag(common)?;
    match &cli.command {
        Command::Analyze => {
            let space = subspace_from_json(&read_input(common)?, flag)?;
            Ok(report::analyze(&space, &ctx)?)
        }
        Command::Recover => {
            let space = subspace_from_json(&read_input(common)?, flag)?;
            Ok(report::recover(&space, &ctx)?)
        }
        Command::Census(args) => run_census(args, flag, &ctx),
        Command::Verify => {
            let input = read_input(common)?;
            let (claims, mismatches) = verify::verify_report(&input, &ctx)?;
            let exit = if mismatches.is_empty() { Exit::Ok } else { Exit::Fails };
            let mismatches: Vec<Value> = mismatches
                .iter()
                .map(|m| json!({"index": m.index, "claim": m.kind, "recorded": m.recorded, "recomputed": m.recomputed}))
                .collect();
            let report = json!({
                "command": "verify",
                "source": input.get("command").cloned().unwrap_or(Value::Null),
                "claims": claims,
                "reproduced": claims - mismatches.len(),
                "mismatches": mismatches,
            });
            Ok((report, exit))
        }
    }
}

fn run_census(args: &CensusArgs, flag: Option<Field>, ctx: &Context) -> Result<(Value, Exit), CliError> {
    let q = match (args.q, flag) {
        (Some(q), Some(Field::Prime(p))) if q != p as u64 => {
            return Err(CliError::Usage(format!("--q {q} disagrees with --field gf{p}")))
        }
        (Some(q), _) => q,
        (None, Some(Field::Prime(p))) => p as u64,
        _ => return Err(CliError::Usage("census needs --q or --field gf<p>".into())),
    };
    let preds = PredicateSet::from_names(args.pred.split(',').filter(|s| !s.trim().is_empty()))
        .ok_or_else(|| CliError::Usage(format!("--pred {:?}: expected a subset of diag,ts,irr", args.pred)))?;
    let cfg = CensusConfig { witness_limit: args.witnesses, ..ctx.census() };
    let started = Instant::now();
    let (mut report, exit) = if args.max_diag {
        let r = census::max_diag_dim(args.n, q, &cfg, &ctx.runner)?;
        (report::max_diag_json(&r, ctx)?, Exit::Ok)
    } else if args.classify {
        let r = census::verify_classification(args.n, q, &cfg, &ctx.runner)?;
        (report::classification_json(&r, ctx)?, report::classification_exit(&r))
    } else {
        let d = args.d.ok_or_else(|| CliError::Usage("census needs --d, --max-diag or --classify".into()))?;
        let r = census::census_with(args.n, q, d, preds, &cfg, &ctx.runner)?;
        (report::census_json(&r, ctx)?, report::census_exit(&r))
    };
    if args.timings {
        report["elapsed_ms"] = json!(started.elapsed().as_millis() as u64);
        report["workers"] = json!(ctx.runner.workers);
    }
    Ok((report, exit))
}
