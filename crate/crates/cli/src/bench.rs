//! The `bench` subcommand: a solver grid over seeded instance suites.

use std::collections::HashMap;
use std::fs;
use std::path::PathBuf;

use clap::Args;
use mapsolve::instance::{self, Family, InstanceDescriptor};
use mapsolve::model::{solution_error, ProblemShape};

use crate::report::{self, ResultRow, HEADER};
use crate::solvers::{self, parse_budget, parse_solver, Solver};
use crate::CliError;

#[derive(Args)]
pub struct BenchArgs {
    /// Comma list of families: cc, ccp, cq, cqp, sr, srp.
    #[arg(long, value_delimiter = ',')]
    families: Vec<String>,
    /// Comma list of dimension counts.
    #[arg(long = "s", value_delimiter = ',')]
    s: Vec<usize>,
    /// Side length per entry of --s, or a single value for all of them.
    #[arg(long = "n", value_delimiter = ',')]
    n: Vec<usize>,
    /// Instance indices, e.g. `1-10`, `3` or `1,4,7`.
    #[arg(long, default_value = "1-10")]
    indices: String,
    /// Comma list of solver tokens (see `solve --solver`).
    #[arg(long, value_delimiter = ',')]
    solvers: Vec<String>,
    /// Wall-clock budget in seconds for solvers that take one.
    #[arg(long)]
    time: Option<f64>,
    /// Fixed budget `<generations>x<size>`; equal seeds give equal rows.
    #[arg(long)]
    deterministic: Option<String>,
    /// Base RNG seed; repetition r runs with seed + r - 1.
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Runs per instance and solver.
    #[arg(long, default_value_t = 1)]
    reps: u32,
    /// CSV of `instance,best` rows used for the error column.
    #[arg(long, default_value = "data/best_known.csv")]
    best_file: PathBuf,
    /// Take each instance's best value from this run's minimum instead of
    /// the best file.
    #[arg(long)]
    best_from_run: bool,
    /// Mirror the printed table to this file.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Recompute and print only the aggregate block from an existing
    /// results file; all grid flags are ignored.
    #[arg(long)]
    from_csv: Option<PathBuf>,
    /// Assignment-problem solves allowed before `exact` refuses to run.
    #[arg(long, default_value_t = mapsolve::exact::DEFAULT_NODE_LIMIT)]
    node_limit: u128,
}

/// `1-10`, `7` or `1,3,9` (comma groups may themselves be ranges).
fn parse_indices(spec: &str) -> Result<Vec<u32>, CliError> {
    let bad = || {
        CliError::Usage(format!(
            "--indices expects `<a>-<b>` or a comma list, got `{spec}`"
        ))
    };
    let mut out = Vec::new();
    for group in spec.split(',') {
        match group.split_once('-') {
            Some((a, b)) => {
                let a: u32 = a.parse().map_err(|_| bad())?;
                let b: u32 = b.parse().map_err(|_| bad())?;
                if a > b {
                    return Err(bad());
                }
                out.extend(a..=b);
            }
            None => out.push(group.parse().map_err(|_| bad())?),
        }
    }
    if out.is_empty() {
        return Err(bad());
    }
    Ok(out)
}

struct Cell {
    label: String,
    desc: InstanceDescriptor,
}

fn expand_grid(args: &BenchArgs) -> Result<Vec<Cell>, CliError> {
    if args.families.is_empty() || args.s.is_empty() || args.solvers.is_empty() {
        return Err(CliError::Usage(
            "bench needs --families, --s and --solvers".into(),
        ));
    }
    let sides: Vec<usize> = match args.n.len() {
        0 => return Err(CliError::Usage("bench needs --n".into())),
        1 => vec![args.n[0]; args.s.len()],
        len if len == args.s.len() => args.n.clone(),
        _ => {
            return Err(CliError::Usage(format!(
                "--n lists {} sizes for {} dimension counts",
                args.n.len(),
                args.s.len()
            )))
        }
    };
    let indices = parse_indices(&args.indices)?;

    let mut cells = Vec::new();
    for token in &args.families {
        let family: Family = token
            .parse()
            .map_err(|e: instance::InstanceError| CliError::Usage(e.to_string()))?;
        for (&s, &n) in args.s.iter().zip(&sides) {
            let shape =
                ProblemShape::new(s, n).map_err(|e| CliError::Usage(e.to_string()))?;
            for &index in &indices {
                let desc = InstanceDescriptor::new(family, shape, index)
                    .map_err(|e| CliError::Usage(e.to_string()))?;
                cells.push(Cell { label: format!("{}#{index}", desc.name()), desc });
            }
        }
    }
    Ok(cells)
}

pub fn cmd_bench(args: BenchArgs) -> Result<(), CliError> {
    if let Some(path) = &args.from_csv {
        return recompute_aggregates(path);
    }

    let cells = expand_grid(&args)?;
    let parsed: Vec<Solver> = args
        .solvers
        .iter()
        .map(|token| parse_solver(token, None))
        .collect::<Result<_, _>>()?;
    let budget = parse_budget(args.time, args.deterministic.as_deref())?;
    if args.reps == 0 {
        return Err(CliError::Usage("--reps must be at least 1".into()));
    }

    // Rows in grid order: instance, then solver, then repetition.
    let mut rows: Vec<ResultRow> = Vec::new();
    for cell in &cells {
        let oracle = instance::make_instance(&cell.desc);
        for solver in &parsed {
            for rep in 0..args.reps {
                let seed = args.seed + rep as u64;
                let outcome =
                    solvers::execute(solver, &oracle, budget.as_ref(), seed, args.node_limit)?;
                rows.push(report::build_row(
                    &cell.label,
                    solver,
                    budget.as_ref(),
                    seed,
                    &outcome,
                    None,
                )?);
            }
        }
    }

    fill_errors(&mut rows, &args)?;

    let mut text = String::new();
    text.push_str(HEADER);
    text.push('\n');
    for row in &rows {
        text.push_str(&row.render());
        text.push('\n');
    }
    for aggregate in report::aggregate_rows(&rows) {
        text.push_str(&aggregate.render());
        text.push('\n');
    }
    print!("{text}");
    if let Some(path) = &args.csv {
        fs::write(path, &text)?;
    }
    Ok(())
}

/// Resolves each instance's best value (run minimum or best-file entry) and
/// rewrites the error column.
fn fill_errors(rows: &mut [ResultRow], args: &BenchArgs) -> Result<(), CliError> {
    let mut best_of: HashMap<String, f64> = HashMap::new();
    if args.best_from_run {
        for row in rows.iter() {
            best_of
                .entry(row.instance.clone())
                .and_modify(|b| *b = b.min(row.value))
                .or_insert(row.value);
        }
        let mut seen = Vec::new();
        for row in rows.iter() {
            if !seen.contains(&&row.instance) {
                seen.push(&row.instance);
            }
        }
        for label in seen {
            eprintln!(
                "mapsolve: note: best for {label} taken from this run's minimum {}",
                best_of[label]
            );
        }
    } else {
        let table = report::load_best_file(&args.best_file).map_err(|e| match e {
            CliError::Usage(m) => CliError::Usage(format!(
                "{m}; pass --best-from-run to use this run's minima"
            )),
            other => other,
        })?;
        let mut missing = Vec::new();
        for row in rows.iter() {
            match table.get(report::best_key(&row.instance)) {
                Some(&v) => {
                    best_of.insert(row.instance.clone(), v);
                }
                None => {
                    if !missing.contains(&&row.instance) {
                        missing.push(&row.instance);
                    }
                }
            }
        }
        if !missing.is_empty() {
            let listed: Vec<&str> = missing.iter().map(|s| s.as_str()).collect();
            return Err(CliError::Usage(format!(
                "no best-known value for: {}; pass --best-from-run or extend {}",
                listed.join(", "),
                args.best_file.display()
            )));
        }
    }
    for row in rows.iter_mut() {
        row.error_pct = Some(solution_error(row.value, best_of[&row.instance])?);
    }
    Ok(())
}

fn recompute_aggregates(path: &std::path::Path) -> Result<(), CliError> {
    let text = fs::read_to_string(path)?;
    let mut rows = Vec::new();
    for (lno, line) in text.lines().enumerate() {
        if let Some(row) = report::parse_data_row(line)
            .map_err(|m| CliError::Other(format!("{} line {}: {m}", path.display(), lno + 1)))?
        {
            rows.push(row);
        }
    }
    for aggregate in report::aggregate_rows(&rows) {
        println!("{}", aggregate.render());
    }
    Ok(())
}
