//! Problem and solution data model: shapes, vectors, assignments, weight
//! oracles, feasibility validation, the canonical first-coordinate ordering,
//! and the relative solution-error metric.

use std::fmt;
use std::fs;
use std::path::Path;
use std::sync::atomic::{AtomicU64, Ordering};
use std::time::Duration;

use thiserror::Error;

/// Dimension count `s` and side length `n` of an instance. Vectors carry `s`
/// coordinates, each drawn from `1..=n`; a full assignment holds `n` vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ProblemShape {
    s: usize,
    n: usize,
}

impl ProblemShape {
    pub fn new(s: usize, n: usize) -> Result<Self, ModelError> {
        if s < 2 {
            return Err(ModelError::BadDimensionCount(s));
        }
        if n < 1 {
            return Err(ModelError::BadSideLength(n));
        }
        Ok(ProblemShape { s, n })
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn n(&self) -> usize {
        self.n
    }
}

impl fmt::Display for ProblemShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.s, self.n)
    }
}

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("dimension count must be at least 2, got {0}")]
    BadDimensionCount(usize),
    #[error("side length must be at least 1, got {0}")]
    BadSideLength(usize),
    #[error("assignment has no vectors")]
    Empty,
    #[error("assignments have different shapes")]
    ShapeMismatch,
    #[error("infeasible assignment: {}", render_violations(.0))]
    Infeasible(Vec<Violation>),
    #[error("best-known value must be positive, got {0}")]
    NonPositiveBest(f64),
    #[error("explicit oracle needs {expected} weights, got {got}")]
    BadWeightCount { expected: usize, got: usize },
    #[error("weight at index {index} is {value}; weights must be finite and non-negative")]
    BadWeight { index: usize, value: f64 },
    #[error("shape {s} x {n} has too many cells to hold in memory")]
    ShapeTooLarge { s: usize, n: usize },
}

/// One reason an assignment fails validation. Vector and dimension numbers
/// are 1-based, matching the file formats.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    VectorCount { expected: usize, got: usize },
    Arity { vector: usize, expected: usize, got: usize },
    OutOfRange { vector: usize, dimension: usize, value: u32, n: usize },
    Duplicate { dimension: usize, value: u32 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::VectorCount { expected, got } => {
                write!(f, "expected {expected} vectors, got {got}")
            }
            Violation::Arity { vector, expected, got } => {
                write!(f, "vector {vector} has {got} coordinates, expected {expected}")
            }
            Violation::OutOfRange { vector, dimension, value, n } => {
                write!(f, "vector {vector}, dimension {dimension}: value {value} outside 1..={n}")
            }
            Violation::Duplicate { dimension, value } => {
                write!(f, "dimension {dimension}: value {value} appears more than once")
            }
        }
    }
}

fn render_violations(vs: &[Violation]) -> String {
    let parts: Vec<String> = vs.iter().map(|v| v.to_string()).collect();
    parts.join("; ")
}

/// One s-tuple of 1-based coordinates, the atomic unit of an assignment.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Vector {
    coords: Vec<u32>,
}

impl Vector {
    pub fn new(coords: Vec<u32>) -> Self {
        Vector { coords }
    }

    pub fn coords(&self) -> &[u32] {
        &self.coords
    }

    /// Coordinate in dimension `dim` (0-based dimension index, 1-based value).
    pub fn coord(&self, dim: usize) -> u32 {
        self.coords[dim]
    }

    pub fn set_coord(&mut self, dim: usize, value: u32) {
        self.coords[dim] = value;
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// A list of vectors. Feasibility (no repeated coordinate in any dimension)
/// is a property checked by [`validate`], not enforced by construction, so
/// repair code can hold intermediate states in the same type.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Assignment {
    vectors: Vec<Vector>,
}

impl Assignment {
    pub fn new(vectors: Vec<Vector>) -> Self {
        Assignment { vectors }
    }

    pub fn vectors(&self) -> &[Vector] {
        &self.vectors
    }

    pub fn into_vectors(self) -> Vec<Vector> {
        self.vectors
    }

    /// Shape implied by the vector list: `n` vectors of `s` coordinates each.
    pub fn inferred_shape(&self) -> Result<ProblemShape, ModelError> {
        let n = self.vectors.len();
        if n == 0 {
            return Err(ModelError::Empty);
        }
        ProblemShape::new(self.vectors[0].len(), n)
    }

    /// Sorts vectors ascending by first coordinate. No feasibility check;
    /// the contract-level entry point is [`canonicalize`].
    pub fn sort_by_first_coordinate(&mut self) {
        self.vectors.sort_by_key(|v| v.coord(0));
    }

    pub fn is_canonical(&self) -> bool {
        self.vectors.windows(2).all(|w| w[0].coord(0) <= w[1].coord(0))
    }
}

/// Checks coordinate ranges, vector arity, and per-dimension distinctness.
/// Empty result means the assignment is feasible for `shape`.
pub fn validate(a: &Assignment, shape: ProblemShape) -> Vec<Violation> {
    let (s, n) = (shape.s(), shape.n());
    let mut out = Vec::new();
    if a.vectors.len() != n {
        out.push(Violation::VectorCount { expected: n, got: a.vectors.len() });
    }
    for (i, v) in a.vectors.iter().enumerate() {
        if v.len() != s {
            out.push(Violation::Arity { vector: i + 1, expected: s, got: v.len() });
            continue;
        }
        for d in 0..s {
            let c = v.coord(d);
            if c < 1 || c as usize > n {
                out.push(Violation::OutOfRange {
                    vector: i + 1,
                    dimension: d + 1,
                    value: c,
                    n,
                });
            }
        }
    }
    for d in 0..s {
        let mut seen = vec![false; n + 1];
        let mut reported = vec![false; n + 1];
        for v in &a.vectors {
            if v.len() != s {
                continue;
            }
            let c = v.coord(d) as usize;
            if c < 1 || c > n {
                continue;
            }
            if seen[c] {
                if !reported[c] {
                    out.push(Violation::Duplicate { dimension: d + 1, value: c as u32 });
                    reported[c] = true;
                }
            } else {
                seen[c] = true;
            }
        }
    }
    out
}

pub fn ensure_feasible(a: &Assignment, shape: ProblemShape) -> Result<(), ModelError> {
    let violations = validate(a, shape);
    if violations.is_empty() {
        Ok(())
    } else {
        Err(ModelError::Infeasible(violations))
    }
}

/// Returns the same vector set sorted ascending by first coordinate. After
/// this, `vectors[i]` has first coordinate `i + 1`. Idempotent.
pub fn canonicalize(a: &Assignment) -> Result<Assignment, ModelError> {
    let shape = a.inferred_shape()?;
    ensure_feasible(a, shape)?;
    let mut out = a.clone();
    out.sort_by_first_coordinate();
    Ok(out)
}

/// True iff both hold the same vector set (compared in canonical order).
pub fn assignments_equal(a: &Assignment, b: &Assignment) -> Result<bool, ModelError> {
    let sa = a.inferred_shape()?;
    let sb = b.inferred_shape()?;
    if sa != sb {
        return Err(ModelError::ShapeMismatch);
    }
    Ok(canonicalize(a)? == canonicalize(b)?)
}

/// Deterministic map from vectors to non-negative weights. Implementations
/// must tolerate concurrent reads and return identical values for identical
/// inputs.
pub trait WeightOracle: Sync {
    fn shape(&self) -> ProblemShape;
    fn weight(&self, v: &Vector) -> f64;
}

/// Total weight of a feasible assignment: the sum of its vector weights,
/// evaluated with exactly `n` oracle calls.
pub fn assignment_weight(oracle: &dyn WeightOracle, a: &Assignment) -> Result<f64, ModelError> {
    ensure_feasible(a, oracle.shape())?;
    Ok(a.vectors().iter().map(|v| oracle.weight(v)).sum())
}

/// Relative error in percent against a best-known value.
pub fn solution_error(value: f64, best: f64) -> Result<f64, ModelError> {
    if !(best > 0.0) {
        return Err(ModelError::NonPositiveBest(best));
    }
    Ok((value - best) / best * 100.0)
}

/// Oracle backed by a dense tensor of `n^s` weights, row-major with the last
/// dimension fastest.
#[derive(Debug, Clone)]
pub struct ExplicitOracle {
    shape: ProblemShape,
    weights: Vec<f64>,
}

impl ExplicitOracle {
    pub fn new(shape: ProblemShape, weights: Vec<f64>) -> Result<Self, ModelError> {
        let expected = cell_count(shape)?;
        if weights.len() != expected {
            return Err(ModelError::BadWeightCount { expected, got: weights.len() });
        }
        for (i, &w) in weights.iter().enumerate() {
            if !w.is_finite() || w < 0.0 {
                return Err(ModelError::BadWeight { index: i, value: w });
            }
        }
        Ok(ExplicitOracle { shape, weights })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    fn index(&self, v: &Vector) -> usize {
        let n = self.shape.n();
        assert_eq!(v.len(), self.shape.s(), "vector arity does not match oracle shape");
        let mut idx = 0usize;
        for d in 0..v.len() {
            let c = v.coord(d) as usize;
            assert!(c >= 1 && c <= n, "coordinate {c} outside 1..={n}");
            idx = idx * n + (c - 1);
        }
        idx
    }
}

impl WeightOracle for ExplicitOracle {
    fn shape(&self) -> ProblemShape {
        self.shape
    }

    fn weight(&self, v: &Vector) -> f64 {
        self.weights[self.index(v)]
    }
}

/// Number of cells in the full weight tensor, guarding against overflow.
pub fn cell_count(shape: ProblemShape) -> Result<usize, ModelError> {
    let mut total = 1usize;
    for _ in 0..shape.s() {
        total = total
            .checked_mul(shape.n())
            .ok_or(ModelError::ShapeTooLarge { s: shape.s(), n: shape.n() })?;
    }
    Ok(total)
}

/// Oracle wrapping a plain function; convenient for synthetic setups.
pub struct FnOracle<F> {
    shape: ProblemShape,
    f: F,
}

impl<F: Fn(&Vector) -> f64 + Sync> FnOracle<F> {
    pub fn new(shape: ProblemShape, f: F) -> Self {
        FnOracle { shape, f }
    }
}

impl<F: Fn(&Vector) -> f64 + Sync> WeightOracle for FnOracle<F> {
    fn shape(&self) -> ProblemShape {
        self.shape
    }

    fn weight(&self, v: &Vector) -> f64 {
        (self.f)(v)
    }
}

/// Pass-through oracle that counts evaluations; the counter is shared-read
/// safe so improvement code can stay oblivious to it.
pub struct CountingOracle<'a> {
    inner: &'a dyn WeightOracle,
    calls: AtomicU64,
}

impl<'a> CountingOracle<'a> {
    pub fn new(inner: &'a dyn WeightOracle) -> Self {
        CountingOracle { inner, calls: AtomicU64::new(0) }
    }

    pub fn calls(&self) -> u64 {
        self.calls.load(Ordering::Relaxed)
    }
}

impl WeightOracle for CountingOracle<'_> {
    fn shape(&self) -> ProblemShape {
        self.inner.shape()
    }

    fn weight(&self, v: &Vector) -> f64 {
        self.calls.fetch_add(1, Ordering::Relaxed);
        self.inner.weight(v)
    }
}

/// Outcome of a solver run.
#[derive(Debug, Clone)]
pub struct SolveReport {
    pub best: Assignment,
    pub weight: f64,
    pub generations: u64,
    /// Weight-oracle calls made during the run.
    pub evaluations: u64,
    pub elapsed: Duration,
    /// Generations whose crossover quota came out negative and was clamped
    /// to zero (can happen while the generation size is shrinking fast).
    pub starved_crossovers: u64,
}

#[derive(Debug, Error)]
pub enum FileError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Model(#[from] ModelError),
}

fn parse_err<T>(line: usize, message: impl Into<String>) -> Result<T, FileError> {
    Err(FileError::Parse { line, message: message.into() })
}

/// Writes `s n`, the canonical vector rows, and a trailing `weight` line.
/// The weight uses the shortest round-trip decimal form.
pub fn write_solution(path: &Path, a: &Assignment, weight: f64) -> Result<(), FileError> {
    let canonical = canonicalize(a)?;
    let shape = canonical.inferred_shape()?;
    let mut out = String::new();
    out.push_str(&format!("{shape}\n"));
    for v in canonical.vectors() {
        out.push_str(&format!("{v}\n"));
    }
    out.push_str(&format!("weight {weight}\n"));
    fs::write(path, out)?;
    Ok(())
}

/// Reads a solution file back; the assignment is validated against the
/// declared shape.
pub fn read_solution(path: &Path) -> Result<(ProblemShape, Assignment, f64), FileError> {
    let text = fs::read_to_string(path)?;
    let mut lines = text.lines().enumerate();

    let (lno, header) = match lines.next() {
        Some(x) => x,
        None => return parse_err(1, "empty file"),
    };
    let mut it = header.split_whitespace();
    let s: usize = match it.next().map(str::parse) {
        Some(Ok(v)) => v,
        _ => return parse_err(lno + 1, "expected `s n`"),
    };
    let n: usize = match it.next().map(str::parse) {
        Some(Ok(v)) => v,
        _ => return parse_err(lno + 1, "expected `s n`"),
    };
    if it.next().is_some() {
        return parse_err(lno + 1, "trailing tokens after `s n`");
    }
    let shape = ProblemShape::new(s, n)?;

    let mut vectors = Vec::with_capacity(n);
    for _ in 0..n {
        let (lno, line) = match lines.next() {
            Some(x) => x,
            None => return parse_err(n + 2, format!("expected {n} vector lines")),
        };
        let coords: Result<Vec<u32>, _> = line.split_whitespace().map(str::parse).collect();
        match coords {
            Ok(cs) if cs.len() == s => vectors.push(Vector::new(cs)),
            Ok(cs) => {
                return parse_err(lno + 1, format!("expected {s} coordinates, got {}", cs.len()))
            }
            Err(_) => return parse_err(lno + 1, "coordinates must be integers"),
        }
    }

    let (lno, tail) = match lines.next() {
        Some(x) => x,
        None => return parse_err(n + 2, "expected `weight <decimal>` line"),
    };
    let mut it = tail.split_whitespace();
    if it.next() != Some("weight") {
        return parse_err(lno + 1, "expected `weight <decimal>` line");
    }
    let weight: f64 = match it.next().map(str::parse) {
        Some(Ok(v)) => v,
        _ => return parse_err(lno + 1, "weight must be a decimal number"),
    };

    let a = Assignment::new(vectors);
    ensure_feasible(&a, shape)?;
    Ok((shape, a, weight))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vec_of(coords: &[u32]) -> Vector {
        Vector::new(coords.to_vec())
    }

    fn asg(rows: &[&[u32]]) -> Assignment {
        Assignment::new(rows.iter().map(|r| vec_of(r)).collect())
    }

    #[test]
    fn shape_rejects_degenerate_sizes() {
        assert!(ProblemShape::new(1, 4).is_err());
        assert!(ProblemShape::new(3, 0).is_err());
        assert!(ProblemShape::new(2, 1).is_ok());
    }

    #[test]
    fn validate_accepts_reference_assignment() {
        let a = asg(&[&[1, 2, 2], &[2, 4, 1], &[3, 1, 3], &[4, 3, 4]]);
        let shape = ProblemShape::new(3, 4).unwrap();
        assert!(validate(&a, shape).is_empty());
    }

    #[test]
    fn validate_reports_duplicate_first_coordinate() {
        let a = asg(&[&[1, 1], &[1, 2]]);
        let shape = ProblemShape::new(2, 2).unwrap();
        let vs = validate(&a, shape);
        assert!(vs.contains(&Violation::Duplicate { dimension: 1, value: 1 }));
    }

    #[test]
    fn validate_reports_out_of_range() {
        let a = asg(&[&[1, 3], &[2, 1]]);
        let shape = ProblemShape::new(2, 2).unwrap();
        let vs = validate(&a, shape);
        assert!(vs
            .iter()
            .any(|v| matches!(v, Violation::OutOfRange { vector: 1, dimension: 2, value: 3, .. })));
    }

    #[test]
    fn validate_reports_wrong_vector_count() {
        let a = asg(&[&[1, 2]]);
        let shape = ProblemShape::new(2, 2).unwrap();
        let vs = validate(&a, shape);
        assert!(vs.contains(&Violation::VectorCount { expected: 2, got: 1 }));
    }

    #[test]
    fn canonicalize_sorts_by_first_coordinate() {
        let a = asg(&[&[2, 4, 1], &[4, 3, 4], &[3, 1, 3], &[1, 2, 2]]);
        let c = canonicalize(&a).unwrap();
        assert_eq!(c, asg(&[&[1, 2, 2], &[2, 4, 1], &[3, 1, 3], &[4, 3, 4]]));
        let again = canonicalize(&c).unwrap();
        assert_eq!(again, c);
    }

    #[test]
    fn canonicalize_rejects_infeasible() {
        let a = asg(&[&[1, 1], &[1, 2]]);
        assert!(canonicalize(&a).is_err());
    }

    #[test]
    fn single_vector_assignment_is_its_own_canonical_form() {
        let shape = ProblemShape::new(3, 1).unwrap();
        let a = asg(&[&[1, 1, 1]]);
        assert!(validate(&a, shape).is_empty());
        assert_eq!(canonicalize(&a).unwrap(), a);
    }

    #[test]
    fn assignment_weight_sums_vector_weights() {
        let shape = ProblemShape::new(2, 1).unwrap();
        let seven = FnOracle::new(shape, |_v: &Vector| 7.0);
        let a = asg(&[&[1, 1]]);
        assert_eq!(assignment_weight(&seven, &a).unwrap(), 7.0);

        let shape3 = ProblemShape::new(3, 4).unwrap();
        let zero = FnOracle::new(shape3, |_v: &Vector| 0.0);
        let b = asg(&[&[1, 2, 2], &[2, 4, 1], &[3, 1, 3], &[4, 3, 4]]);
        assert_eq!(assignment_weight(&zero, &b).unwrap(), 0.0);
    }

    #[test]
    fn assignment_weight_counts_exactly_n_evaluations() {
        let shape = ProblemShape::new(3, 4).unwrap();
        let one = FnOracle::new(shape, |_v: &Vector| 1.0);
        let counting = CountingOracle::new(&one);
        let a = asg(&[&[1, 2, 2], &[2, 4, 1], &[3, 1, 3], &[4, 3, 4]]);
        assignment_weight(&counting, &a).unwrap();
        assert_eq!(counting.calls(), 4);
    }

    #[test]
    fn assignment_weight_rejects_infeasible() {
        let shape = ProblemShape::new(2, 2).unwrap();
        let oracle = FnOracle::new(shape, |_v: &Vector| 1.0);
        let a = asg(&[&[1, 1], &[1, 2]]);
        assert!(assignment_weight(&oracle, &a).is_err());
    }

    #[test]
    fn explicit_oracle_looks_up_tensor_cells() {
        let shape = ProblemShape::new(3, 2).unwrap();
        // index = ((c1-1)*2 + (c2-1))*2 + (c3-1), last dimension fastest
        let weights: Vec<f64> = (0..8).map(|i| i as f64 * 10.0).collect();
        let oracle = ExplicitOracle::new(shape, weights.clone()).unwrap();
        assert_eq!(oracle.weight(&vec_of(&[1, 1, 1])), weights[0]);
        assert_eq!(oracle.weight(&vec_of(&[2, 2, 2])), weights[7]);
        assert_eq!(oracle.weight(&vec_of(&[1, 2, 1])), weights[2]);

        let a = asg(&[&[1, 1, 1], &[2, 2, 2]]);
        let expected = weights[0] + weights[7];
        assert_eq!(assignment_weight(&oracle, &a).unwrap(), expected);
    }

    #[test]
    fn explicit_oracle_rejects_bad_inputs() {
        let shape = ProblemShape::new(2, 2).unwrap();
        assert!(matches!(
            ExplicitOracle::new(shape, vec![1.0; 3]),
            Err(ModelError::BadWeightCount { expected: 4, got: 3 })
        ));
        assert!(ExplicitOracle::new(shape, vec![1.0, 2.0, -1.0, 4.0]).is_err());
        assert!(ExplicitOracle::new(shape, vec![1.0, 2.0, f64::NAN, 4.0]).is_err());
    }

    #[test]
    fn solution_error_examples() {
        assert_eq!(solution_error(103.0, 100.0).unwrap(), 3.0);
        assert_eq!(solution_error(926.9, 926.9).unwrap(), 0.0);
        let err = solution_error(610.6 * 1.05, 610.6).unwrap();
        assert!((err - 5.0).abs() < 1e-9);
        assert!(solution_error(1.0, 0.0).is_err());
        assert!(solution_error(1.0, -2.0).is_err());
    }

    #[test]
    fn assignments_equal_ignores_vector_order() {
        let a = asg(&[&[1, 2, 2], &[2, 4, 1], &[3, 1, 3], &[4, 3, 4]]);
        let b = asg(&[&[4, 3, 4], &[1, 2, 2], &[2, 4, 1], &[3, 1, 3]]);
        assert!(assignments_equal(&a, &b).unwrap());

        let c = asg(&[&[1, 2, 3], &[2, 4, 1], &[3, 1, 2], &[4, 3, 4]]);
        assert!(!assignments_equal(&a, &c).unwrap());
    }

    #[test]
    fn assignments_equal_rejects_shape_mismatch() {
        let a = asg(&[&[1, 2], &[2, 1]]);
        let b = asg(&[&[1, 2, 2], &[2, 4, 1], &[3, 1, 3], &[4, 3, 4]]);
        assert!(matches!(assignments_equal(&a, &b), Err(ModelError::ShapeMismatch)));
    }

    #[test]
    fn equal_weight_does_not_mean_equal_assignment() {
        let shape = ProblemShape::new(2, 2).unwrap();
        // both feasible assignments weigh 2, yet differ structurally
        let oracle = ExplicitOracle::new(shape, vec![1.0, 1.0, 1.0, 1.0]).unwrap();
        let a = asg(&[&[1, 1], &[2, 2]]);
        let b = asg(&[&[1, 2], &[2, 1]]);
        assert_eq!(
            assignment_weight(&oracle, &a).unwrap(),
            assignment_weight(&oracle, &b).unwrap()
        );
        assert!(!assignments_equal(&a, &b).unwrap());
    }

    #[test]
    fn solution_file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("a.sol");
        let a = asg(&[&[2, 4, 1], &[4, 3, 4], &[3, 1, 3], &[1, 2, 2]]);
        write_solution(&path, &a, 123.456789).unwrap();
        let (shape, back, w) = read_solution(&path).unwrap();
        assert_eq!(shape, ProblemShape::new(3, 4).unwrap());
        assert!(assignments_equal(&a, &back).unwrap());
        assert!(back.is_canonical());
        assert_eq!(w, 123.456789);
    }

    #[test]
    fn solution_file_round_trips_irrational_weight_exactly() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("a.sol");
        let a = asg(&[&[1, 2], &[2, 1]]);
        let w = 29.0_f64.sqrt();
        write_solution(&path, &a, w).unwrap();
        let (_, _, back) = read_solution(&path).unwrap();
        assert_eq!(back.to_bits(), w.to_bits());
    }

    #[test]
    fn solution_file_errors_carry_line_numbers() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.sol");
        fs::write(&path, "2 2\n1 1\n2 2\nweight x\n").unwrap();
        match read_solution(&path) {
            Err(FileError::Parse { line: 4, .. }) => {}
            other => panic!("expected parse error on line 4, got {other:?}"),
        }
    }
}
