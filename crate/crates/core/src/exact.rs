//! Exhaustive optimum for small instances. The first dimension is pinned
//! to the identity, every combination of permutations for the middle
//! dimensions is enumerated, and the last dimension is matched optimally
//! with one linear assignment solve per combination. That is (n!)^(s-2)
//! solves, so a node limit refuses shapes that would run away.

use thiserror::Error;

use crate::ap::{next_permutation, solve_ap, CostMatrix};
use crate::model::{Assignment, ModelError, ProblemShape, Vector, WeightOracle};

/// Default ceiling on the number of assignment problems one search may
/// solve.
pub const DEFAULT_NODE_LIMIT: u128 = 10_000_000;

#[derive(Debug, Error)]
pub enum ExactError {
    #[error(
        "exhaustive search would solve {nodes} assignment problems, \
         over the limit of {limit}"
    )]
    NodeLimit { nodes: u128, limit: u128 },
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone)]
pub struct ExactResult {
    pub optimum: Assignment,
    pub value: f64,
    /// Enumerated middle-dimension combinations, each one assignment
    /// problem solve.
    pub nodes: u128,
}

fn factorial(n: usize) -> u128 {
    (2..=n as u128).fold(1u128, |acc, k| acc.saturating_mul(k))
}

/// Number of assignment solves an exhaustive search needs: (n!)^(s-2),
/// saturating on overflow.
pub fn node_count(shape: ProblemShape) -> u128 {
    let f = factorial(shape.n());
    let mut nodes = 1u128;
    for _ in 0..shape.s() - 2 {
        nodes = nodes.saturating_mul(f);
    }
    nodes
}

/// True when `a` precedes `b` in the coordinate-by-coordinate order of
/// their canonical forms; used to make the minimum unique under value
/// ties.
fn lex_precedes(a: &Assignment, b: &Assignment) -> bool {
    let fa = a.vectors().iter().flat_map(|v| v.coords());
    let fb = b.vectors().iter().flat_map(|v| v.coords());
    fa.lt(fb)
}

pub fn brute_force(oracle: &dyn WeightOracle) -> Result<ExactResult, ExactError> {
    brute_force_limited(oracle, DEFAULT_NODE_LIMIT)
}

pub fn brute_force_limited(
    oracle: &dyn WeightOracle,
    limit: u128,
) -> Result<ExactResult, ExactError> {
    let shape = oracle.shape();
    let nodes = node_count(shape);
    if nodes > limit {
        return Err(ExactError::NodeLimit { nodes, limit });
    }
    let (s, n) = (shape.s(), shape.n());

    let mut middles: Vec<Vec<u32>> = vec![(1..=n as u32).collect(); s - 2];
    let mut best: Option<(f64, Assignment)> = None;
    let mut scratch = Vector::new(vec![1; s]);

    loop {
        let cost = CostMatrix::from_fn(n, |i, j| {
            scratch.set_coord(0, (i + 1) as u32);
            for (d, col) in middles.iter().enumerate() {
                scratch.set_coord(d + 1, col[i]);
            }
            scratch.set_coord(s - 1, (j + 1) as u32);
            oracle.weight(&scratch)
        })
        .expect("oracle weights are finite");
        let sol = solve_ap(&cost);

        let better = match &best {
            None => true,
            Some((value, _)) => sol.value < *value,
        };
        let tied = matches!(&best, Some((value, _)) if sol.value == *value);
        if better || tied {
            let vectors: Vec<Vector> = (0..n)
                .map(|i| {
                    let mut coords = Vec::with_capacity(s);
                    coords.push((i + 1) as u32);
                    for col in &middles {
                        coords.push(col[i]);
                    }
                    coords.push((sol.perm[i] + 1) as u32);
                    Vector::new(coords)
                })
                .collect();
            let cand = Assignment::new(vectors);
            let replace = better
                || matches!(&best, Some((_, cur)) if lex_precedes(&cand, cur));
            if replace {
                best = Some((sol.value, cand));
            }
        }

        let mut advanced = false;
        for col in middles.iter_mut().rev() {
            if next_permutation(col) {
                advanced = true;
                break;
            }
        }
        if !advanced {
            break;
        }
    }

    let (value, optimum) = best.expect("at least one combination is enumerated");
    Ok(ExactResult { optimum, value, nodes })
}
