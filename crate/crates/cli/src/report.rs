//! Result rows, the fixed CSV schema, and the aggregate block.

use std::collections::HashMap;
use std::fs;
use std::path::Path;

use mapsolve::instance::FamilyKind;
use mapsolve::memetic::Budget;
use mapsolve::model::solution_error;

use crate::solvers::{RunOutcome, Solver};
use crate::CliError;

pub const HEADER: &str =
    "instance,solver,budget_s,seed,value,error_pct,generations,evaluations,elapsed_s";

/// One solver run. Optional fields render as empty columns; `elapsed` is
/// `None` for everything but wall-clock budgets, rendering as `0` so that
/// fixed-budget rows are bit-identical across reruns.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub instance: String,
    pub solver: String,
    pub budget: String,
    pub seed: Option<u64>,
    pub value: f64,
    pub error_pct: Option<f64>,
    pub generations: u64,
    pub evaluations: u64,
    pub elapsed: Option<f64>,
}

impl ResultRow {
    pub fn render(&self) -> String {
        let seed = self.seed.map(|s| s.to_string()).unwrap_or_default();
        let error = self.error_pct.map(|e| e.to_string()).unwrap_or_default();
        let elapsed = self
            .elapsed
            .map(|t| format!("{t:.3}"))
            .unwrap_or_else(|| "0".into());
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.instance,
            self.solver,
            self.budget,
            seed,
            self.value,
            error,
            self.generations,
            self.evaluations,
            elapsed
        )
    }
}

pub fn budget_token(budget: Option<&Budget>) -> String {
    match budget {
        None => "0".into(),
        Some(Budget::Time(d)) => format!("{}", d.as_secs_f64()),
        Some(Budget::Deterministic { generations, size }) => format!("det:{generations}x{size}"),
    }
}

pub fn build_row(
    label: &str,
    solver: &Solver,
    budget: Option<&Budget>,
    seed: u64,
    outcome: &RunOutcome,
    best: Option<f64>,
) -> Result<ResultRow, CliError> {
    let error_pct = match best {
        Some(b) => Some(solution_error(outcome.value, b)?),
        None => None,
    };
    Ok(ResultRow {
        instance: label.into(),
        solver: solver.token(),
        budget: budget_token(if solver.uses_budget() { budget } else { None }),
        seed: solver.uses_seed().then_some(seed),
        value: outcome.value,
        error_pct,
        generations: outcome.generations,
        evaluations: outcome.evaluations,
        elapsed: outcome.elapsed,
    })
}

/// Averages over a slice of data rows, one output row per group, rendered in
/// the same nine-column schema with the unused columns left empty.
#[derive(Debug, Clone, PartialEq)]
pub struct AggregateRow {
    pub label: String,
    pub solver: String,
    pub budget: String,
    pub mean_error_pct: f64,
}

impl AggregateRow {
    pub fn render(&self) -> String {
        format!(
            "{},{},{},,,{},,,",
            self.label, self.solver, self.budget, self.mean_error_pct
        )
    }
}

pub fn is_aggregate_label(label: &str) -> bool {
    label.ends_with(" avg.")
}

/// Family, dimension count and perturbation flag recovered from a row label
/// such as `4sr30p#2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InstanceTag {
    pub s: u32,
    pub kind: FamilyKind,
    pub perturbed: bool,
}

pub fn parse_label(label: &str) -> Option<InstanceTag> {
    let base = label.split('#').next().unwrap_or(label);
    let rest = base.trim_start_matches(|c: char| c.is_ascii_digit());
    let s: u32 = base[..base.len() - rest.len()].parse().ok()?;
    let kind = match rest.get(..2)? {
        "cc" => FamilyKind::Cc,
        "cq" => FamilyKind::Cq,
        "sr" => FamilyKind::Sr,
        _ => return None,
    };
    let size = rest[2..].trim_end_matches('p');
    if size.is_empty() || size.chars().any(|c| !c.is_ascii_digit()) {
        return None;
    }
    let perturbed = rest.ends_with('p');
    Some(InstanceTag { s, kind, perturbed })
}

/// Whether a row counts toward the `(kind, perturbed)` family average.
/// 3-dimensional cycle rows also count toward the clique-sum averages, since
/// the two weights coincide there and the cq suite starts at s = 4.
fn in_family_group(tag: InstanceTag, kind: FamilyKind, perturbed: bool) -> bool {
    (tag.kind == kind && tag.perturbed == perturbed)
        || (kind == FamilyKind::Cq
            && tag.kind == FamilyKind::Cc
            && tag.perturbed == perturbed
            && tag.s == 3)
}

fn family_label(kind: FamilyKind, perturbed: bool) -> &'static str {
    match (kind, perturbed) {
        (FamilyKind::Cc, false) => "CC avg.",
        (FamilyKind::Cc, true) => "CC p. avg.",
        (FamilyKind::Cq, false) => "CQ avg.",
        (FamilyKind::Cq, true) => "CQ p. avg.",
        (FamilyKind::Sr, false) => "SR avg.",
        (FamilyKind::Sr, true) => "SR p. avg.",
    }
}

fn mean(errors: &[f64]) -> f64 {
    errors.iter().sum::<f64>() / errors.len() as f64
}

const FAMILY_GROUPS: [(FamilyKind, bool); 6] = [
    (FamilyKind::Cc, false),
    (FamilyKind::Cc, true),
    (FamilyKind::Cq, false),
    (FamilyKind::Cq, true),
    (FamilyKind::Sr, false),
    (FamilyKind::Sr, true),
];

/// Aggregates per solver, in first-appearance order: the overall mean, then
/// family means, then per-dimension means. Rows without an error value are
/// skipped; means run over rows in input order so a recompute from the same
/// file reproduces them bit for bit.
pub fn aggregate_rows(rows: &[ResultRow]) -> Vec<AggregateRow> {
    let mut solvers: Vec<&str> = Vec::new();
    for row in rows {
        if !solvers.contains(&row.solver.as_str()) {
            solvers.push(&row.solver);
        }
    }

    let mut out = Vec::new();
    for solver in solvers {
        let selected: Vec<&ResultRow> = rows
            .iter()
            .filter(|r| r.solver == solver && r.error_pct.is_some())
            .collect();
        if selected.is_empty() {
            continue;
        }
        let budget = if selected.iter().all(|r| r.budget == selected[0].budget) {
            selected[0].budget.clone()
        } else {
            String::new()
        };
        let push = |out: &mut Vec<AggregateRow>, label: String, errors: &[f64]| {
            out.push(AggregateRow {
                label,
                solver: solver.into(),
                budget: budget.clone(),
                mean_error_pct: mean(errors),
            });
        };

        let all: Vec<f64> = selected.iter().filter_map(|r| r.error_pct).collect();
        push(&mut out, "All avg.".into(), &all);

        for (kind, perturbed) in FAMILY_GROUPS {
            let errors: Vec<f64> = selected
                .iter()
                .filter(|r| {
                    parse_label(&r.instance)
                        .is_some_and(|tag| in_family_group(tag, kind, perturbed))
                })
                .filter_map(|r| r.error_pct)
                .collect();
            if !errors.is_empty() {
                push(&mut out, family_label(kind, perturbed).into(), &errors);
            }
        }

        let mut dims: Vec<u32> = selected
            .iter()
            .filter_map(|r| parse_label(&r.instance).map(|t| t.s))
            .collect();
        dims.sort_unstable();
        dims.dedup();
        for s in dims {
            let errors: Vec<f64> = selected
                .iter()
                .filter(|r| parse_label(&r.instance).is_some_and(|t| t.s == s))
                .filter_map(|r| r.error_pct)
                .collect();
            push(&mut out, format!("{s}-AP avg."), &errors);
        }
    }
    out
}

/// Parses one data row; `Ok(None)` for the header and for aggregate rows.
pub fn parse_data_row(line: &str) -> Result<Option<ResultRow>, String> {
    if line.is_empty() || line == HEADER {
        return Ok(None);
    }
    let fields: Vec<&str> = line.split(',').collect();
    if fields.len() != 9 {
        return Err(format!("expected 9 fields, got {}", fields.len()));
    }
    if is_aggregate_label(fields[0]) {
        return Ok(None);
    }
    let parse_f64 = |tok: &str, what: &str| -> Result<f64, String> {
        tok.parse().map_err(|_| format!("bad {what} `{tok}`"))
    };
    let parse_u64 = |tok: &str, what: &str| -> Result<u64, String> {
        tok.parse().map_err(|_| format!("bad {what} `{tok}`"))
    };
    Ok(Some(ResultRow {
        instance: fields[0].into(),
        solver: fields[1].into(),
        budget: fields[2].into(),
        seed: if fields[3].is_empty() {
            None
        } else {
            Some(parse_u64(fields[3], "seed")?)
        },
        value: parse_f64(fields[4], "value")?,
        error_pct: if fields[5].is_empty() {
            None
        } else {
            Some(parse_f64(fields[5], "error_pct")?)
        },
        generations: parse_u64(fields[6], "generations")?,
        evaluations: parse_u64(fields[7], "evaluations")?,
        elapsed: if fields[8] == "0" {
            None
        } else {
            Some(parse_f64(fields[8], "elapsed_s")?)
        },
    }))
}

pub fn best_key(label: &str) -> &str {
    label.split('#').next().unwrap_or(label)
}

/// Loads an `instance,best` table; a leading header line is optional and
/// blank lines are ignored.
pub fn load_best_file(path: &Path) -> Result<HashMap<String, f64>, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    let mut table = HashMap::new();
    for (lno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || (lno == 0 && line == "instance,best") {
            continue;
        }
        let Some((name, value)) = line.split_once(',') else {
            return Err(CliError::Usage(format!(
                "{} line {}: expected `instance,best`",
                path.display(),
                lno + 1
            )));
        };
        let value: f64 = value.trim().parse().map_err(|_| {
            CliError::Usage(format!(
                "{} line {}: bad best value `{value}`",
                path.display(),
                lno + 1
            ))
        })?;
        table.insert(name.trim().to_string(), value);
    }
    Ok(table)
}
