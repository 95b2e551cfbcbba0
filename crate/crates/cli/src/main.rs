//! Command-line harness for the assignment toolkit: seeded instance
//! generation, budgeted solver runs, benchmark grids with per-family
//! average tables, and an exhaustive optimum for small instances.

mod bench;
mod report;
mod solvers;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use mapsolve::instance::{
    self, Family, FamilyKind, InstanceDescriptor, InstanceSource,
};
use mapsolve::model::{self, cell_count, ExplicitOracle, FileError, ModelError, ProblemShape, Vector};

use crate::solvers::{parse_budget, parse_solver, Solver};

/// Largest tensor the explicit format will materialize.
const EXPLICIT_CELL_CAP: usize = 10_000_000;

/// Errors mapped onto process exit codes: usage mistakes exit 2, refusing an
/// oversized exhaustive search exits 3, everything else exits 1.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Refusal(String),
    Other(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Refusal(_) => 3,
            CliError::Other(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Refusal(m) | CliError::Other(m) => m,
        }
    }
}

impl From<FileError> for CliError {
    fn from(e: FileError) -> Self {
        CliError::Other(e.to_string())
    }
}

impl From<ModelError> for CliError {
    fn from(e: ModelError) -> Self {
        CliError::Other(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Other(e.to_string())
    }
}

#[derive(Parser)]
#[command(name = "mapsolve", version, about = "Multidimensional assignment solver toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a seeded instance file.
    Generate(GenerateArgs),
    /// Run one solver on one instance and print a result row.
    Solve(SolveArgs),
    /// Run a solver grid over seeded instances and print rows plus averages.
    Bench(bench::BenchArgs),
    /// Exhaustively solve a small instance.
    Exact(ExactArgs),
}

#[derive(Args)]
struct GenerateArgs {
    /// Instance family: cc, ccp, cq, cqp, sr or srp.
    #[arg(long)]
    family: String,
    /// Number of dimensions.
    #[arg(long = "s")]
    s: usize,
    /// Side length; coordinates range over 1..=n.
    #[arg(long = "n")]
    n: usize,
    /// Instance index within the suite (1..=10); picks the seed s + n + i.
    #[arg(long = "i", default_value_t = 1)]
    index: u32,
    /// Use this seed instead of deriving it from the index.
    #[arg(long)]
    seed: Option<u64>,
    /// Materialize the full weight tensor instead of writing a descriptor.
    #[arg(long)]
    explicit: bool,
    /// Output path; defaults to `<name>-<index>.map`.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    /// Instance file written by `generate` (descriptor or explicit).
    #[arg(long)]
    instance: PathBuf,
    /// greedy, 2opt, 3opt, dv, mdv, dv2, mdv2, mdv3, gk, gk:<ls> or exact.
    #[arg(long)]
    solver: String,
    /// Local search run inside the memetic solver when `--solver gk` is used.
    #[arg(long, default_value = "mdv2")]
    ls: String,
    /// Wall-clock budget in seconds.
    #[arg(long)]
    time: Option<f64>,
    /// Fixed budget `<generations>x<size>`; equal seeds give equal rows.
    #[arg(long)]
    deterministic: Option<String>,
    /// RNG seed for the memetic solver.
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Best known value used for the error column.
    #[arg(long)]
    best: Option<f64>,
    /// CSV of `instance,best` rows consulted when --best is absent.
    #[arg(long)]
    best_file: Option<PathBuf>,
    /// Solution output path; defaults to the instance path with extension `sol`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the header plus the row to this file.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Assignment-problem solves allowed before `exact` refuses to run.
    #[arg(long, default_value_t = mapsolve::exact::DEFAULT_NODE_LIMIT)]
    node_limit: u128,
}

#[derive(Args)]
struct ExactArgs {
    /// Instance file written by `generate` (descriptor or explicit).
    #[arg(long)]
    instance: PathBuf,
    /// Assignment-problem solves allowed before refusing to run.
    #[arg(long, default_value_t = mapsolve::exact::DEFAULT_NODE_LIMIT)]
    node_limit: u128,
    /// Best known value used for the error column.
    #[arg(long)]
    best: Option<f64>,
    /// Solution output path; defaults to the instance path with extension `sol`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the header plus the row to this file.
    #[arg(long)]
    csv: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Generate(args) => cmd_generate(args),
        Command::Solve(args) => cmd_solve(args),
        Command::Bench(args) => bench::cmd_bench(args),
        Command::Exact(args) => cmd_exact(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("mapsolve: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}

fn cmd_generate(args: GenerateArgs) -> Result<(), CliError> {
    let family: Family = args
        .family
        .parse()
        .map_err(|e: instance::InstanceError| CliError::Usage(e.to_string()))?;
    let shape =
        ProblemShape::new(args.s, args.n).map_err(|e| CliError::Usage(e.to_string()))?;
    if family.kind == FamilyKind::Cq && args.s == 3 {
        eprintln!(
            "mapsolve: warning: for s = 3 the cq weight of a clique equals its cc weight; \
             generating anyway"
        );
    }
    let desc = match args.seed {
        Some(seed) => InstanceDescriptor::with_seed(family, shape, seed),
        None => InstanceDescriptor::new(family, shape, args.index)
            .map_err(|e| CliError::Usage(e.to_string()))?,
    };
    let out = args.out.unwrap_or_else(|| default_instance_path(&desc));
    if args.explicit {
        let cells = cell_count(shape).map_err(|e| CliError::Usage(e.to_string()))?;
        if cells > EXPLICIT_CELL_CAP {
            return Err(CliError::Usage(format!(
                "explicit tensor would hold {cells} cells (cap {EXPLICIT_CELL_CAP}); \
                 use the descriptor format"
            )));
        }
        let oracle = instance::make_instance(&desc);
        let explicit = materialize(&oracle, shape, cells)?;
        instance::write_explicit(&out, &explicit)?;
    } else {
        instance::write_descriptor(&out, &desc)?;
    }
    println!("{}", out.display());
    Ok(())
}

/// Evaluates every cell in the explicit row-major order, last dimension
/// fastest.
fn materialize(
    oracle: &dyn model::WeightOracle,
    shape: ProblemShape,
    cells: usize,
) -> Result<ExplicitOracle, CliError> {
    let (s, n) = (shape.s(), shape.n());
    let mut weights = Vec::with_capacity(cells);
    let mut coords = vec![1u32; s];
    loop {
        weights.push(oracle.weight(&Vector::new(coords.clone())));
        let mut d = s;
        loop {
            if d == 0 {
                return Ok(ExplicitOracle::new(shape, weights)?);
            }
            d -= 1;
            if (coords[d] as usize) < n {
                coords[d] += 1;
                break;
            }
            coords[d] = 1;
        }
    }
}

fn default_instance_path(desc: &InstanceDescriptor) -> PathBuf {
    let tag = match desc.index() {
        Some(i) => format!("-{i}"),
        None => format!("-s{}", desc.seed()),
    };
    PathBuf::from(format!("{}{}.map", desc.name(), tag))
}

/// Row label: descriptor name plus `#index` when the seed matches a suite
/// index, the file stem otherwise.
fn instance_label(source: &InstanceSource, path: &Path) -> String {
    match source {
        InstanceSource::Descriptor(d) => match d.index() {
            Some(i) => format!("{}#{}", d.name(), i),
            None => d.name(),
        },
        InstanceSource::Explicit(_) => path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "instance".into()),
    }
}

fn resolve_best(
    label: &str,
    best: Option<f64>,
    best_file: Option<&Path>,
) -> Result<Option<f64>, CliError> {
    if best.is_some() {
        return Ok(best);
    }
    let Some(path) = best_file else { return Ok(None) };
    let table = report::load_best_file(path)?;
    match table.get(report::best_key(label)) {
        Some(&v) => Ok(Some(v)),
        None => Err(CliError::Usage(format!(
            "no best-known value for {label} in {}",
            path.display()
        ))),
    }
}

/// Shared tail of `solve` and `exact`: run, write the solution file, print
/// one row, optionally mirror it to a CSV file.
#[allow(clippy::too_many_arguments)]
fn run_and_emit(
    label: &str,
    oracle: &dyn model::WeightOracle,
    solver: &Solver,
    budget: Option<&mapsolve::memetic::Budget>,
    seed: u64,
    best: Option<f64>,
    solution_path: &Path,
    csv: Option<&Path>,
    node_limit: u128,
) -> Result<(), CliError> {
    let outcome = solvers::execute(solver, oracle, budget, seed, node_limit)?;
    let row = report::build_row(label, solver, budget, seed, &outcome, best)?;
    model::write_solution(solution_path, &outcome.assignment, outcome.value)?;
    println!("{}", row.render());
    if let Some(path) = csv {
        fs::write(path, format!("{}\n{}\n", report::HEADER, row.render()))?;
    }
    Ok(())
}

fn cmd_solve(args: SolveArgs) -> Result<(), CliError> {
    let solver = parse_solver(&args.solver, Some(&args.ls))?;
    let budget = parse_budget(args.time, args.deterministic.as_deref())?;
    let source = instance::read_instance(&args.instance)?;
    let label = instance_label(&source, &args.instance);
    let oracle = source.into_oracle();
    let best = resolve_best(&label, args.best, args.best_file.as_deref())?;
    let solution_path = args
        .out
        .clone()
        .unwrap_or_else(|| args.instance.with_extension("sol"));
    run_and_emit(
        &label,
        oracle.as_ref(),
        &solver,
        budget.as_ref(),
        args.seed,
        best,
        &solution_path,
        args.csv.as_deref(),
        args.node_limit,
    )
}

fn cmd_exact(args: ExactArgs) -> Result<(), CliError> {
    let source = instance::read_instance(&args.instance)?;
    let label = instance_label(&source, &args.instance);
    let oracle = source.into_oracle();
    let solution_path = args
        .out
        .clone()
        .unwrap_or_else(|| args.instance.with_extension("sol"));
    run_and_emit(
        &label,
        oracle.as_ref(),
        &Solver::Exact,
        None,
        0,
        args.best,
        &solution_path,
        args.csv.as_deref(),
        args.node_limit,
    )
}
