//! Exact solver for the linear assignment problem on square real-valued cost
//! matrices: shortest augmenting paths with dual potentials, O(n^3).

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ApError {
    #[error("cost matrix must be at least 1x1")]
    Empty,
    #[error("cost matrix must be square: {n}x{n} needs {expected} entries, got {got}")]
    NotSquare { n: usize, expected: usize, got: usize },
    #[error("ragged cost matrix: row {row} has {got} entries, expected {expected}")]
    Ragged { row: usize, got: usize, expected: usize },
    #[error("cost at ({row}, {col}) is {value}; costs must be finite")]
    NonFinite { row: usize, col: usize, value: f64 },
}

/// Square matrix of finite costs, row-major. Validity is established at
/// construction so the solver itself cannot fail.
#[derive(Debug, Clone)]
pub struct CostMatrix {
    n: usize,
    costs: Vec<f64>,
}

impl CostMatrix {
    pub fn new(n: usize, costs: Vec<f64>) -> Result<Self, ApError> {
        if n == 0 {
            return Err(ApError::Empty);
        }
        if costs.len() != n * n {
            return Err(ApError::NotSquare { n, expected: n * n, got: costs.len() });
        }
        for (i, &c) in costs.iter().enumerate() {
            if !c.is_finite() {
                return Err(ApError::NonFinite { row: i / n, col: i % n, value: c });
            }
        }
        Ok(CostMatrix { n, costs })
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self, ApError> {
        let n = rows.len();
        if n == 0 {
            return Err(ApError::Empty);
        }
        let mut costs = Vec::with_capacity(n * n);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(ApError::Ragged { row: i, got: row.len(), expected: n });
            }
            costs.extend(row);
        }
        CostMatrix::new(n, costs)
    }

    /// Builds the matrix by evaluating `f(row, col)` for every cell.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self, ApError> {
        if n == 0 {
            return Err(ApError::Empty);
        }
        let mut costs = Vec::with_capacity(n * n);
        for r in 0..n {
            for c in 0..n {
                costs.push(f(r, c));
            }
        }
        CostMatrix::new(n, costs)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn at(&self, row: usize, col: usize) -> f64 {
        self.costs[row * self.n + col]
    }
}

/// Minimum-cost perfect matching: `perm[row]` is the column assigned to
/// `row`; `value` is the total cost re-evaluated by direct summation.
#[derive(Debug, Clone, PartialEq)]
pub struct ApSolution {
    pub perm: Vec<usize>,
    pub value: f64,
}

/// Optimal assignment for the given cost matrix. Deterministic: equal-cost
/// optima are resolved by the fixed scan order, and tests only pin values
/// where ties are possible.
pub fn solve_ap(c: &CostMatrix) -> ApSolution {
    let n = c.n();
    const NONE: usize = usize::MAX;
    // col_match[j] = row currently matched to column j; index n is the
    // virtual root column of each augmenting search
    let mut u = vec![0.0f64; n + 1];
    let mut v = vec![0.0f64; n + 1];
    let mut col_match = vec![NONE; n + 1];
    let mut way = vec![0usize; n + 1];

    for row in 0..n {
        col_match[n] = row;
        let mut j0 = n;
        let mut minv = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = col_match[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = NONE;
            for j in 0..n {
                if used[j] {
                    continue;
                }
                let reduced = c.at(i0, j) - u[i0] - v[j];
                if reduced < minv[j] {
                    minv[j] = reduced;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[col_match[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if col_match[j0] == NONE {
                break;
            }
        }
        // augment along the alternating path back to the root
        loop {
            let j1 = way[j0];
            col_match[j0] = col_match[j1];
            j0 = j1;
            if j0 == n {
                break;
            }
        }
    }

    let mut perm = vec![0usize; n];
    for j in 0..n {
        perm[col_match[j]] = j;
    }
    let value = (0..n).map(|i| c.at(i, perm[i])).sum();
    ApSolution { perm, value }
}

/// Lexicographic next permutation; false once the sequence wraps around.
/// Shared with the exhaustive enumeration in [`crate::exact`].
pub(crate) fn next_permutation(xs: &mut [u32]) -> bool {
    if xs.len() < 2 {
        return false;
    }
    let mut i = xs.len() - 1;
    while i > 0 && xs[i - 1] >= xs[i] {
        i -= 1;
    }
    if i == 0 {
        xs.reverse();
        return false;
    }
    let mut j = xs.len() - 1;
    while xs[j] <= xs[i - 1] {
        j -= 1;
    }
    xs.swap(i - 1, j);
    xs[i..].reverse();
    true
}
