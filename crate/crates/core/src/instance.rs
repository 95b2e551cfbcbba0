//! Seeded instance families. An instance is an s-partite edge graph with
//! uniform random edge weights in 1..=100; a vector's weight is the cycle
//! sum (cc), the full clique sum (cq), or the root of the squared cycle sum
//! (sr), optionally shifted by a per-vector pseudo-random offset in 0..=19
//! ("perturbed"). Everything is a pure function of (family, s, n, seed).

use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use thiserror::Error;

use crate::model::{
    cell_count, ExplicitOracle, FileError, ModelError, ProblemShape, Vector, WeightOracle,
};
use crate::rng::Prng;

pub const EDGE_WEIGHT_MIN: u32 = 1;
pub const EDGE_WEIGHT_MAX: u32 = 100;
pub const OFFSET_RANGE: u64 = 20;

#[derive(Debug, Error)]
pub enum InstanceError {
    #[error("instance index must be in 1..=10, got {0}")]
    BadIndex(u32),
    #[error("unknown family `{0}` (expected cc, ccp, cq, cqp, sr or srp)")]
    BadFamily(String),
    #[error("edge graph needs {expected} matrices of {cells} entries for shape {s} x {n}")]
    BadMatrixLayout { expected: usize, cells: usize, s: usize, n: usize },
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FamilyKind {
    Cc,
    Cq,
    Sr,
}

impl FamilyKind {
    pub fn token(&self) -> &'static str {
        match self {
            FamilyKind::Cc => "cc",
            FamilyKind::Cq => "cq",
            FamilyKind::Sr => "sr",
        }
    }
}

/// Weight family plus the perturbed flag; `Display`/`FromStr` use the file
/// tokens cc, ccp, cq, cqp, sr, srp.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Family {
    pub kind: FamilyKind,
    pub perturbed: bool,
}

impl Family {
    pub fn new(kind: FamilyKind, perturbed: bool) -> Self {
        Family { kind, perturbed }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.kind.token(), if self.perturbed { "p" } else { "" })
    }
}

impl FromStr for Family {
    type Err = InstanceError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (kind, perturbed) = match s {
            "cc" => (FamilyKind::Cc, false),
            "ccp" => (FamilyKind::Cc, true),
            "cq" => (FamilyKind::Cq, false),
            "cqp" => (FamilyKind::Cq, true),
            "sr" => (FamilyKind::Sr, false),
            "srp" => (FamilyKind::Sr, true),
            other => return Err(InstanceError::BadFamily(other.to_string())),
        };
        Ok(Family { kind, perturbed })
    }
}

/// Complete s-partite graph on s parts of n vertices: one n x n weight
/// matrix per part pair (i, j), i < j, pairs in lexicographic order.
#[derive(Debug, Clone)]
pub struct EdgeGraph {
    s: usize,
    n: usize,
    matrices: Vec<Vec<u32>>,
}

impl EdgeGraph {
    /// Draws every edge weight from `[1, 100]` with a fresh generator on
    /// `seed`. Draw order is fixed (pairs lexicographic, then row-major), so
    /// (shape, seed) fully determines the graph.
    pub fn generate(shape: ProblemShape, seed: u64) -> EdgeGraph {
        let (s, n) = (shape.s(), shape.n());
        let mut rng = Prng::new(seed);
        let mut matrices = Vec::with_capacity(s * (s - 1) / 2);
        for _i in 0..s {
            for _j in _i + 1..s {
                let mut m = Vec::with_capacity(n * n);
                for _u in 0..n {
                    for _v in 0..n {
                        m.push(rng.next_int(1, 101).unwrap() as u32);
                    }
                }
                matrices.push(m);
            }
        }
        EdgeGraph { s, n, matrices }
    }

    /// Builds a graph from explicit matrices (pairs in lexicographic order,
    /// row-major entries). Entries are not range-checked so synthetic graphs
    /// (for example all-zero) can be constructed in tests.
    pub fn from_matrices(
        shape: ProblemShape,
        matrices: Vec<Vec<u32>>,
    ) -> Result<EdgeGraph, InstanceError> {
        let (s, n) = (shape.s(), shape.n());
        let expected = s * (s - 1) / 2;
        let cells = n * n;
        if matrices.len() != expected || matrices.iter().any(|m| m.len() != cells) {
            return Err(InstanceError::BadMatrixLayout { expected, cells, s, n });
        }
        Ok(EdgeGraph { s, n, matrices })
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix_count(&self) -> usize {
        self.matrices.len()
    }

    fn pair_index(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < j && j < self.s);
        // cells before row i of the strict upper triangle, then offset
        i * (2 * self.s - i - 1) / 2 + (j - i - 1)
    }

    /// Weight of the edge between vertex `u` of part `d1` and vertex `v` of
    /// part `d2`. Parts are 0-based, vertices 1-based; the graph is
    /// undirected so argument order does not matter.
    pub fn edge(&self, d1: usize, u: u32, d2: usize, v: u32) -> u32 {
        let (i, a, j, b) = if d1 < d2 { (d1, u, d2, v) } else { (d2, v, d1, u) };
        let m = &self.matrices[self.pair_index(i, j)];
        m[(a as usize - 1) * self.n + (b as usize - 1)]
    }
}

fn check_vector(g: &EdgeGraph, e: &Vector) -> Result<(), ModelError> {
    let shape = ProblemShape::new(g.s, g.n)?;
    if e.len() != g.s {
        return Err(ModelError::Infeasible(vec![crate::model::Violation::Arity {
            vector: 1,
            expected: g.s,
            got: e.len(),
        }]));
    }
    for d in 0..g.s {
        let c = e.coord(d);
        if c < 1 || c as usize > g.n {
            return Err(ModelError::Infeasible(vec![crate::model::Violation::OutOfRange {
                vector: 1,
                dimension: d + 1,
                value: c,
                n: shape.n(),
            }]));
        }
    }
    Ok(())
}

/// Cycle weight: edges between consecutive parts plus the closing edge from
/// the last part back to the first.
pub fn weight_cc(g: &EdgeGraph, e: &Vector) -> Result<f64, ModelError> {
    check_vector(g, e)?;
    let s = g.s;
    let mut total = g.edge(s - 1, e.coord(s - 1), 0, e.coord(0)) as f64;
    for d in 0..s - 1 {
        total += g.edge(d, e.coord(d), d + 1, e.coord(d + 1)) as f64;
    }
    Ok(total)
}

/// Clique weight: sum over all part pairs. Coincides with [`weight_cc`]
/// when s = 3 (the cycle is the whole clique).
pub fn weight_cq(g: &EdgeGraph, e: &Vector) -> Result<f64, ModelError> {
    check_vector(g, e)?;
    let mut total = 0.0;
    for i in 0..g.s {
        for j in i + 1..g.s {
            total += g.edge(i, e.coord(i), j, e.coord(j)) as f64;
        }
    }
    Ok(total)
}

/// Square-root weight: Euclidean norm of the cycle edge weights.
pub fn weight_sr(g: &EdgeGraph, e: &Vector) -> Result<f64, ModelError> {
    check_vector(g, e)?;
    let s = g.s;
    let closing = g.edge(s - 1, e.coord(s - 1), 0, e.coord(0)) as f64;
    let mut total = closing * closing;
    for d in 0..s - 1 {
        let w = g.edge(d, e.coord(d), d + 1, e.coord(d + 1)) as f64;
        total += w * w;
    }
    Ok(total.sqrt())
}

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Per-vector perturbation offset in `0..=19`: a stateless mix of the seed
/// and the coordinates, so the value does not depend on any enumeration
/// order. Order of coordinates matters (it encodes the dimension).
pub fn perturb_offset(seed: u64, e: &Vector) -> u32 {
    let mut h = mix64(seed.wrapping_add(GOLDEN_GAMMA));
    for &c in e.coords() {
        h = mix64(h ^ u64::from(c).wrapping_mul(GOLDEN_GAMMA));
    }
    (h % OFFSET_RANGE) as u32
}

/// Identifies one generated instance. The seed defaults to `s + n + index`
/// but can be overridden for ad-hoc experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct InstanceDescriptor {
    family: Family,
    shape: ProblemShape,
    seed: u64,
}

impl InstanceDescriptor {
    pub fn new(family: Family, shape: ProblemShape, index: u32) -> Result<Self, InstanceError> {
        if !(1..=10).contains(&index) {
            return Err(InstanceError::BadIndex(index));
        }
        let seed = (shape.s() + shape.n()) as u64 + index as u64;
        Ok(InstanceDescriptor { family, shape, seed })
    }

    pub fn with_seed(family: Family, shape: ProblemShape, seed: u64) -> Self {
        InstanceDescriptor { family, shape, seed }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn shape(&self) -> ProblemShape {
        self.shape
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Index recovered from the seed formula, when the seed follows it.
    pub fn index(&self) -> Option<u32> {
        let base = (self.shape.s() + self.shape.n()) as u64;
        match self.seed.checked_sub(base) {
            Some(i @ 1..=10) => Some(i as u32),
            _ => None,
        }
    }

    /// Conventional instance name: dimension count, family token, side
    /// length, and a trailing `p` for perturbed (for example `3cc40`,
    /// `4sr30p`).
    pub fn name(&self) -> String {
        format!(
            "{}{}{}{}",
            self.shape.s(),
            self.family.kind.token(),
            self.shape.n(),
            if self.family.perturbed { "p" } else { "" }
        )
    }
}

/// Oracle over a generated edge graph; evaluation picks the family formula
/// and adds the perturbation offset when configured.
#[derive(Debug, Clone)]
pub struct GraphOracle {
    graph: EdgeGraph,
    family: Family,
    seed: u64,
}

impl GraphOracle {
    pub fn new(graph: EdgeGraph, family: Family, seed: u64) -> Self {
        GraphOracle { graph, family, seed }
    }

    pub fn graph(&self) -> &EdgeGraph {
        &self.graph
    }
}

impl WeightOracle for GraphOracle {
    fn shape(&self) -> ProblemShape {
        ProblemShape::new(self.graph.s(), self.graph.n()).expect("graph dimensions are valid")
    }

    fn weight(&self, v: &Vector) -> f64 {
        let base = match self.family.kind {
            FamilyKind::Cc => weight_cc(&self.graph, v),
            FamilyKind::Cq => weight_cq(&self.graph, v),
            FamilyKind::Sr => weight_sr(&self.graph, v),
        }
        .expect("vector outside oracle shape");
        if self.family.perturbed {
            base + perturb_offset(self.seed, v) as f64
        } else {
            base
        }
    }
}

/// Materializes the descriptor: generates the edge graph from its seed and
/// wires up the family weight function.
pub fn make_instance(desc: &InstanceDescriptor) -> GraphOracle {
    let graph = EdgeGraph::generate(desc.shape(), desc.seed());
    GraphOracle::new(graph, desc.family(), desc.seed())
}

/// An instance file names either a generated instance or an explicit tensor.
#[derive(Debug, Clone)]
pub enum InstanceSource {
    Descriptor(InstanceDescriptor),
    Explicit(ExplicitOracle),
}

impl InstanceSource {
    pub fn shape(&self) -> ProblemShape {
        match self {
            InstanceSource::Descriptor(d) => d.shape(),
            InstanceSource::Explicit(o) => o.shape(),
        }
    }

    pub fn into_oracle(self) -> Box<dyn WeightOracle> {
        match self {
            InstanceSource::Descriptor(d) => Box::new(make_instance(&d)),
            InstanceSource::Explicit(o) => Box::new(o),
        }
    }
}

const MAGIC: &str = "MAPLIB 1";

fn parse_err<T>(line: usize, message: impl Into<String>) -> Result<T, FileError> {
    Err(FileError::Parse { line, message: message.into() })
}

pub fn write_descriptor(path: &Path, desc: &InstanceDescriptor) -> Result<(), FileError> {
    fs::write(path, render_descriptor(desc))?;
    Ok(())
}

pub fn render_descriptor(desc: &InstanceDescriptor) -> String {
    format!(
        "{MAGIC}\ndescriptor\n{} {} {} {}\n",
        desc.family(),
        desc.shape().s(),
        desc.shape().n(),
        desc.seed()
    )
}

/// Writes the full weight tensor, one row of `n` values per line, last
/// dimension fastest.
pub fn write_explicit(path: &Path, oracle: &ExplicitOracle) -> Result<(), FileError> {
    let shape = oracle.shape();
    let mut out = format!("{MAGIC}\nexplicit\n{} {}\n", shape.s(), shape.n());
    for chunk in oracle.weights().chunks(shape.n()) {
        let row: Vec<String> = chunk.iter().map(|w| w.to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    fs::write(path, out)?;
    Ok(())
}

pub fn read_instance(path: &Path) -> Result<InstanceSource, FileError> {
    parse_instance(&fs::read_to_string(path)?)
}

pub fn parse_instance(text: &str) -> Result<InstanceSource, FileError> {
    let mut lines = text.lines().enumerate();

    match lines.next() {
        Some((_, l)) if l.trim() == MAGIC => {}
        Some((lno, l)) => return parse_err(lno + 1, format!("expected `{MAGIC}`, got `{l}`")),
        None => return parse_err(1, "empty file"),
    }

    let (kind_line, kind) = match lines.next() {
        Some((lno, l)) => (lno + 1, l.trim()),
        None => return parse_err(2, "missing kind line (`descriptor` or `explicit`)"),
    };

    match kind {
        "descriptor" => {
            let (lno, l) = match lines.next() {
                Some(x) => x,
                None => return parse_err(3, "missing `<family> <s> <n> <seed>` line"),
            };
            let toks: Vec<&str> = l.split_whitespace().collect();
            if toks.len() != 4 {
                return parse_err(lno + 1, "expected `<family> <s> <n> <seed>`");
            }
            let family: Family = toks[0]
                .parse()
                .map_err(|e: InstanceError| FileError::Parse { line: lno + 1, message: e.to_string() })?;
            let s: usize = toks[1]
                .parse()
                .map_err(|_| FileError::Parse { line: lno + 1, message: "bad s".into() })?;
            let n: usize = toks[2]
                .parse()
                .map_err(|_| FileError::Parse { line: lno + 1, message: "bad n".into() })?;
            let seed: u64 = toks[3]
                .parse()
                .map_err(|_| FileError::Parse { line: lno + 1, message: "bad seed".into() })?;
            let shape = ProblemShape::new(s, n)?;
            Ok(InstanceSource::Descriptor(InstanceDescriptor::with_seed(family, shape, seed)))
        }
        "explicit" => {
            let (lno, l) = match lines.next() {
                Some(x) => x,
                None => return parse_err(3, "missing `<s> <n>` line"),
            };
            let toks: Vec<&str> = l.split_whitespace().collect();
            if toks.len() != 2 {
                return parse_err(lno + 1, "expected `<s> <n>`");
            }
            let s: usize = toks[0]
                .parse()
                .map_err(|_| FileError::Parse { line: lno + 1, message: "bad s".into() })?;
            let n: usize = toks[1]
                .parse()
                .map_err(|_| FileError::Parse { line: lno + 1, message: "bad n".into() })?;
            let shape = ProblemShape::new(s, n)?;
            let expected = cell_count(shape)?;

            let mut weights = Vec::with_capacity(expected);
            let mut last_line = lno + 1;
            for (wlno, wline) in lines {
                last_line = wlno + 1;
                for tok in wline.split_whitespace() {
                    let w: f64 = tok.parse().map_err(|_| FileError::Parse {
                        line: wlno + 1,
                        message: format!("bad weight `{tok}`"),
                    })?;
                    weights.push(w);
                    if weights.len() > expected {
                        return parse_err(wlno + 1, format!("expected {expected} weights"));
                    }
                }
            }
            if weights.len() != expected {
                return parse_err(
                    last_line,
                    format!("expected {expected} weights, got {}", weights.len()),
                );
            }
            Ok(InstanceSource::Explicit(ExplicitOracle::new(shape, weights)?))
        }
        other => parse_err(kind_line, format!("unknown kind `{other}`")),
    }
}
