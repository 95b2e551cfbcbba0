//! Solver tokens and the dispatch from a parsed token to a finished run.

use std::time::Duration;

use mapsolve::exact::{self, ExactError};
use mapsolve::heuristics::{self, LocalSearch, LOCAL_SEARCH_NAMES};
use mapsolve::memetic::{self, Budget, MemeticParams, RunError};
use mapsolve::model::{assignment_weight, Assignment, CountingOracle, WeightOracle};

use crate::CliError;

pub enum Solver {
    Greedy,
    Local(Box<dyn LocalSearch>),
    Memetic { ls: Box<dyn LocalSearch> },
    Exact,
}

impl Solver {
    /// Canonical token printed in the solver column; `gk` always carries its
    /// local search so a row fully describes the configuration.
    pub fn token(&self) -> String {
        match self {
            Solver::Greedy => "greedy".into(),
            Solver::Local(ls) => ls.name().into(),
            Solver::Memetic { ls } => format!("gk:{}", ls.name()),
            Solver::Exact => "exact".into(),
        }
    }

    pub fn uses_budget(&self) -> bool {
        matches!(self, Solver::Memetic { .. })
    }

    pub fn uses_seed(&self) -> bool {
        matches!(self, Solver::Memetic { .. })
    }
}

fn unknown_ls(name: &str) -> CliError {
    CliError::Usage(format!(
        "unknown local search `{name}` (expected one of {})",
        LOCAL_SEARCH_NAMES.join(", ")
    ))
}

/// `ls_flag` supplies the local search for a bare `gk` token; the inline
/// `gk:<ls>` form overrides it.
pub fn parse_solver(token: &str, ls_flag: Option<&str>) -> Result<Solver, CliError> {
    match token {
        "greedy" => return Ok(Solver::Greedy),
        "exact" => return Ok(Solver::Exact),
        "gk" => {
            let name = ls_flag.unwrap_or("mdv2");
            let ls = heuristics::by_name(name).ok_or_else(|| unknown_ls(name))?;
            return Ok(Solver::Memetic { ls });
        }
        _ => {}
    }
    if let Some(name) = token.strip_prefix("gk:") {
        let ls = heuristics::by_name(name).ok_or_else(|| unknown_ls(name))?;
        return Ok(Solver::Memetic { ls });
    }
    if let Some(ls) = heuristics::by_name(token) {
        return Ok(Solver::Local(ls));
    }
    Err(CliError::Usage(format!(
        "unknown solver `{token}` (expected greedy, {}, gk, gk:<ls> or exact)",
        LOCAL_SEARCH_NAMES.join(", ")
    )))
}

pub fn parse_budget(
    time: Option<f64>,
    deterministic: Option<&str>,
) -> Result<Option<Budget>, CliError> {
    let budget = match (time, deterministic) {
        (Some(_), Some(_)) => {
            return Err(CliError::Usage(
                "pass only one of --time and --deterministic".into(),
            ))
        }
        (None, None) => return Ok(None),
        (Some(secs), None) => {
            if !secs.is_finite() || secs <= 0.0 {
                return Err(CliError::Usage(format!(
                    "--time needs a positive number of seconds, got {secs}"
                )));
            }
            Budget::Time(Duration::from_secs_f64(secs))
        }
        (None, Some(spec)) => {
            let parsed = spec.split_once('x').and_then(|(g, m)| {
                Some((g.parse::<u32>().ok()?, m.parse::<usize>().ok()?))
            });
            let Some((generations, size)) = parsed else {
                return Err(CliError::Usage(format!(
                    "--deterministic expects `<generations>x<size>`, got `{spec}`"
                )));
            };
            Budget::Deterministic { generations, size }
        }
    };
    budget
        .validate()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(Some(budget))
}

pub struct RunOutcome {
    pub assignment: Assignment,
    pub value: f64,
    pub generations: u64,
    pub evaluations: u64,
    /// Wall time in seconds; populated only for wall-clock budgets so that
    /// fixed-budget rows stay bit-identical across reruns.
    pub elapsed: Option<f64>,
}

pub fn execute(
    solver: &Solver,
    oracle: &dyn WeightOracle,
    budget: Option<&Budget>,
    seed: u64,
    node_limit: u128,
) -> Result<RunOutcome, CliError> {
    match solver {
        Solver::Greedy => {
            let counting = CountingOracle::new(oracle);
            let best = heuristics::greedy_construct(&counting);
            let value = assignment_weight(&counting, &best)?;
            Ok(RunOutcome {
                assignment: best,
                value,
                generations: 0,
                evaluations: counting.calls(),
                elapsed: None,
            })
        }
        Solver::Local(ls) => {
            let counting = CountingOracle::new(oracle);
            let start = heuristics::greedy_construct(&counting);
            let best = ls.improve(&counting, &start)?;
            let value = assignment_weight(&counting, &best)?;
            Ok(RunOutcome {
                assignment: best,
                value,
                generations: 0,
                evaluations: counting.calls(),
                elapsed: None,
            })
        }
        Solver::Memetic { ls } => {
            let budget = budget.ok_or_else(|| {
                CliError::Usage("solver gk needs --time or --deterministic".into())
            })?;
            let report = memetic::run(oracle, ls.as_ref(), &MemeticParams::default(), budget, seed)
                .map_err(|e| match e {
                    RunError::Param(p) => CliError::Usage(p.to_string()),
                    RunError::Model(m) => CliError::Other(m.to_string()),
                })?;
            let elapsed = match budget {
                Budget::Time(_) => Some(report.elapsed.as_secs_f64()),
                Budget::Deterministic { .. } => None,
            };
            Ok(RunOutcome {
                assignment: report.best,
                value: report.weight,
                generations: report.generations,
                evaluations: report.evaluations,
                elapsed,
            })
        }
        Solver::Exact => {
            let counting = CountingOracle::new(oracle);
            let result = exact::brute_force_limited(&counting, node_limit).map_err(|e| match e {
                ExactError::NodeLimit { .. } => CliError::Refusal(e.to_string()),
                ExactError::Model(m) => CliError::Other(m.to_string()),
            })?;
            Ok(RunOutcome {
                assignment: result.optimum,
                value: result.value,
                generations: 0,
                evaluations: counting.calls(),
                elapsed: None,
            })
        }
    }
}
