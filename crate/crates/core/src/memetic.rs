//! Population search over locally optimal assignments. One run keeps a
//! generation of improved solutions and repeatedly derives the next one
//! from an untouched elite, randomly perturbed non-elites, and crossover
//! children; every new solution passes through the configured local
//! search before it competes for selection.
//!
//! Generation sizes adapt to the remaining time so that a timed run ends
//! near the planned generation count regardless of how expensive a single
//! generation is. A deterministic budget pins both the generation count
//! and the size instead, which removes every clock read from the control
//! path and makes runs bit-reproducible for a given seed.

use std::time::{Duration, Instant};

use thiserror::Error;

use crate::heuristics::LocalSearch;
use crate::model::{
    ensure_feasible, Assignment, CountingOracle, ModelError, SolveReport, Vector,
    WeightOracle,
};
use crate::rng::Prng;

#[derive(Debug, Error)]
pub enum ParamError {
    #[error("{name} must be a probability in [0, 1], got {value}")]
    BadChance { name: &'static str, value: f64 },
    #[error("{name} must be in (0, 1], got {value}")]
    BadStrength { name: &'static str, value: f64 },
    #[error("selection pressure must be at least 1, got {0}")]
    BadPressure(f64),
    #[error("growth limit must be greater than 1, got {0}")]
    BadGrowth(f64),
    #[error("planned generation count must be positive")]
    BadHorizon,
    #[error("time budget must be positive")]
    BadBudgetTime,
    #[error("deterministic budget needs at least one generation")]
    BadBudgetGenerations,
    #[error("deterministic budget needs a generation size of at least {min}, got {got}", min = MIN_GENERATION_SIZE)]
    BadBudgetSize { got: usize },
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// A generation never shrinks below this many members (when the instance
/// has enough distinct local optima to fill it).
pub const MIN_GENERATION_SIZE: usize = 4;

/// Consecutive duplicate solutions tolerated while filling a generation
/// before giving up on growing it further.
const STALL_LIMIT: u32 = 50;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MemeticParams {
    /// Chance that a non-elite member is perturbed between generations.
    pub mutation_chance: f64,
    /// Perturbation strength applied to mutated members.
    pub mutation_strength: f64,
    /// Perturbation strength used to spread the first generation around
    /// the greedy solution.
    pub first_strength: f64,
    /// Selection chooses from a candidate pool this many times larger
    /// than the generation being built; the surplus comes from crossover.
    pub selection_pressure: f64,
    /// Per-generation cap on the relative size change in timed runs.
    pub growth_limit: f64,
    /// Generation count the size controller steers a timed run towards.
    pub planned_generations: u32,
    /// Chance that a tail pair goes parent-to-child without crossing.
    pub parent_bias: f64,
}

impl Default for MemeticParams {
    fn default() -> Self {
        MemeticParams {
            mutation_chance: 0.5,
            mutation_strength: 0.1,
            first_strength: 0.2,
            selection_pressure: 3.0,
            growth_limit: 1.25,
            planned_generations: 50,
            parent_bias: 0.8,
        }
    }
}

impl MemeticParams {
    pub fn validate(&self) -> Result<(), ParamError> {
        let chances = [
            ("mutation chance", self.mutation_chance),
            ("parent bias", self.parent_bias),
        ];
        for (name, value) in chances {
            if !(0.0..=1.0).contains(&value) || !value.is_finite() {
                return Err(ParamError::BadChance { name, value });
            }
        }
        let strengths = [
            ("mutation strength", self.mutation_strength),
            ("first generation strength", self.first_strength),
        ];
        for (name, value) in strengths {
            if !(value > 0.0 && value <= 1.0) {
                return Err(ParamError::BadStrength { name, value });
            }
        }
        if !(self.selection_pressure >= 1.0) {
            return Err(ParamError::BadPressure(self.selection_pressure));
        }
        if !(self.growth_limit > 1.0) {
            return Err(ParamError::BadGrowth(self.growth_limit));
        }
        if self.planned_generations == 0 {
            return Err(ParamError::BadHorizon);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Budget {
    /// Run until the wall clock budget is spent; generation sizes adapt.
    Time(Duration),
    /// Run exactly this many generations at a fixed size; no clock reads
    /// influence the result, so equal seeds give equal outputs.
    Deterministic { generations: u32, size: usize },
}

impl Budget {
    pub fn validate(&self) -> Result<(), ParamError> {
        match *self {
            Budget::Time(t) => {
                if t.is_zero() {
                    return Err(ParamError::BadBudgetTime);
                }
            }
            Budget::Deterministic { generations, size } => {
                if generations == 0 {
                    return Err(ParamError::BadBudgetGenerations);
                }
                if size < MIN_GENERATION_SIZE {
                    return Err(ParamError::BadBudgetSize { got: size });
                }
            }
        }
        Ok(())
    }
}

/// An assignment together with its cached total weight.
#[derive(Debug, Clone)]
pub struct Scored {
    pub assignment: Assignment,
    pub weight: f64,
}

/// One generation: members sorted by weight ascending (the elite first),
/// all distinct.
#[derive(Debug, Clone)]
pub struct GenerationState {
    pub members: Vec<Scored>,
    /// Unrounded size the controller tracks across generations.
    pub size_real: f64,
    /// 1-based generation counter.
    pub index: u32,
    /// Whether the last step clamped a negative crossover quota to zero.
    pub starved: bool,
}

fn weight_of(oracle: &dyn WeightOracle, a: &Assignment) -> f64 {
    a.vectors().iter().map(|v| oracle.weight(v)).sum()
}

/// Number of coordinate swaps a perturbation of the given strength makes.
pub fn swap_count(n: usize, strength: f64) -> usize {
    (n as f64 * strength / 2.0).ceil() as usize
}

/// Randomly modifies an assignment: for each swap, draws two vector
/// indices and a dimension (in that order) and exchanges the two
/// coordinates. The result is re-sorted, stays feasible, and differs from
/// the input in at most two vector slots per swap.
pub fn perturb(a: &Assignment, strength: f64, rng: &mut Prng) -> Assignment {
    let mut vectors = a.vectors().to_vec();
    let n = vectors.len();
    if n == 0 {
        return a.clone();
    }
    let s = vectors[0].len();
    for _ in 0..swap_count(n, strength) {
        let u = rng.index(n);
        let v = rng.index(n);
        let d = rng.index(s);
        let cu = vectors[u].coord(d);
        let cv = vectors[v].coord(d);
        vectors[u].set_coord(d, cv);
        vectors[v].set_coord(d, cu);
    }
    let mut out = Assignment::new(vectors);
    out.sort_by_first_coordinate();
    out
}

/// Repairs one child draft: for each dimension in ascending order, every
/// coordinate that repeats an earlier one is replaced by a value drawn
/// from the pool of values unused in that dimension (`pick` receives the
/// ascending pool and returns the index to take).
fn correct(draft: &mut [Vector], n: usize, s: usize, pick: &mut dyn FnMut(&[u32]) -> usize) {
    for d in 0..s {
        let mut used = vec![false; n + 1];
        let mut repairs = Vec::new();
        for (i, v) in draft.iter().enumerate() {
            let c = v.coord(d) as usize;
            if used[c] {
                repairs.push(i);
            } else {
                used[c] = true;
            }
        }
        if repairs.is_empty() {
            continue;
        }
        let mut pool: Vec<u32> = (1..=n as u32).filter(|&c| !used[c as usize]).collect();
        for i in repairs {
            let k = pick(&pool);
            let c = pool.remove(k);
            draft[i].set_coord(d, c);
        }
    }
}

/// Deterministic crossover core, exposed so the mechanics can be tested
/// with pinned choices. Both parents must be canonical and feasible with
/// the same shape.
///
/// Index-aligned equal vectors are the commons; both children start as
/// the commons in parent order. Tail slot `j` then appends parent `x`'s
/// tail number `tail_order_x[j]` and parent `y`'s tail number
/// `tail_order_y[j]`, straight (x-tail to the first child) when
/// `straight[j]`, crossed otherwise. Each child is repaired front to back
/// (commons first, so common vectors are never rewritten) and re-sorted.
pub fn crossover_with_choices(
    x: &Assignment,
    y: &Assignment,
    tail_order_x: &[usize],
    tail_order_y: &[usize],
    straight: &[bool],
    pick: &mut dyn FnMut(&[u32]) -> usize,
) -> Result<(Assignment, Assignment), ModelError> {
    let shape = x.inferred_shape()?;
    if y.inferred_shape()? != shape {
        return Err(ModelError::ShapeMismatch);
    }
    ensure_feasible(x, shape)?;
    ensure_feasible(y, shape)?;
    debug_assert!(x.is_canonical() && y.is_canonical());
    let (s, n) = (shape.s(), shape.n());

    let mut commons = Vec::new();
    let mut tails = Vec::new();
    for j in 0..n {
        if x.vectors()[j] == y.vectors()[j] {
            commons.push(j);
        } else {
            tails.push(j);
        }
    }
    let t = tails.len();
    debug_assert_eq!(tail_order_x.len(), t);
    debug_assert_eq!(tail_order_y.len(), t);
    debug_assert_eq!(straight.len(), t);

    let mut child_a: Vec<Vector> =
        commons.iter().map(|&j| x.vectors()[j].clone()).collect();
    let mut child_b = child_a.clone();
    for j in 0..t {
        let from_x = x.vectors()[tails[tail_order_x[j]]].clone();
        let from_y = y.vectors()[tails[tail_order_y[j]]].clone();
        if straight[j] {
            child_a.push(from_x);
            child_b.push(from_y);
        } else {
            child_a.push(from_y);
            child_b.push(from_x);
        }
    }

    correct(&mut child_a, n, s, pick);
    correct(&mut child_b, n, s, pick);

    let mut a = Assignment::new(child_a);
    a.sort_by_first_coordinate();
    let mut b = Assignment::new(child_b);
    b.sort_by_first_coordinate();
    Ok((a, b))
}

/// Produces two children from two parents. Common vectors are copied
/// verbatim; the remaining ones are paired up in shuffled order and each
/// pair goes straight with probability `bias`, crossed otherwise;
/// coordinate clashes introduced by the mixing are repaired randomly.
///
/// Draw order: shuffle of the x tail order, shuffle of the y tail order,
/// one coin per tail slot, then one pool pick per repair (first child
/// fully, then the second).
pub fn crossover(
    x: &Assignment,
    y: &Assignment,
    bias: f64,
    rng: &mut Prng,
) -> Result<(Assignment, Assignment), ModelError> {
    let t = x
        .vectors()
        .iter()
        .zip(y.vectors())
        .filter(|(a, b)| a != b)
        .count();
    let mut order_x: Vec<usize> = (0..t).collect();
    rng.shuffle(&mut order_x);
    let mut order_y: Vec<usize> = (0..t).collect();
    rng.shuffle(&mut order_y);
    let straight: Vec<bool> = (0..t).map(|_| rng.chance(bias)).collect();
    crossover_with_choices(x, y, &order_x, &order_y, &straight, &mut |pool| {
        rng.index(pool.len())
    })
}

/// Unrounded size of the next generation. While the planned horizon is
/// not reached, the current size is scaled by how far ahead of or behind
/// schedule the run is, clamped to a factor of `growth` either way; past
/// the horizon it keeps growing by `growth` to soak up remaining time.
pub fn next_gen_size(
    size_real: f64,
    total_s: f64,
    elapsed_s: f64,
    delta_s: f64,
    horizon: u32,
    index: u32,
    growth: f64,
) -> f64 {
    if index >= horizon {
        return size_real * growth;
    }
    let per_generation = delta_s.max(1e-9) * (horizon - index) as f64;
    let ratio = (total_s - elapsed_s) / per_generation;
    size_real * ratio.clamp(1.0 / growth, growth)
}

/// Integer generation size: the unrounded size rounded down, bumped by
/// one when the implied crossover output would be odd (each crossover
/// yields two children), and never below [`MIN_GENERATION_SIZE`].
pub fn round_gen_size(size_real: f64, prev_size: usize, pressure: f64) -> usize {
    let floor = size_real.max(0.0).floor();
    let children = pressure * floor - prev_size as f64;
    let odd = (children.round() as i64).rem_euclid(2) == 1;
    let size = floor as usize + usize::from(odd);
    size.max(MIN_GENERATION_SIZE)
}

fn push_distinct(members: &mut Vec<Scored>, cand: Scored) -> bool {
    if members.iter().any(|m| m.weight == cand.weight && m.assignment == cand.assignment) {
        return false;
    }
    members.push(cand);
    true
}

/// Builds the first generation: one greedy construction, then repeated
/// perturb-and-improve copies of it until the target is reached. A time
/// budget fills for `total / planned_generations` (but always to at least
/// [`MIN_GENERATION_SIZE`] members); a deterministic budget fills to its
/// fixed size. Gives up early after a long streak of duplicates.
pub fn first_generation(
    oracle: &dyn WeightOracle,
    ls: &dyn LocalSearch,
    params: &MemeticParams,
    budget: &Budget,
    rng: &mut Prng,
) -> Result<Vec<Scored>, ModelError> {
    let started = Instant::now();
    let window = match *budget {
        Budget::Time(total) => Some(total / params.planned_generations),
        Budget::Deterministic { .. } => None,
    };
    let target = match *budget {
        Budget::Time(_) => None,
        Budget::Deterministic { size, .. } => Some(size),
    };

    let base = crate::heuristics::greedy_construct(oracle);
    let mut members: Vec<Scored> = Vec::new();
    let mut stall = 0u32;
    loop {
        let shaken = perturb(&base, params.first_strength, rng);
        let improved = ls.improve(oracle, &shaken)?;
        let weight = weight_of(oracle, &improved);
        if push_distinct(&mut members, Scored { assignment: improved, weight }) {
            stall = 0;
        } else {
            stall += 1;
            if stall >= STALL_LIMIT {
                break;
            }
        }
        let full = match (target, window) {
            (Some(size), _) => members.len() >= size,
            (None, Some(w)) => {
                started.elapsed() >= w && members.len() >= MIN_GENERATION_SIZE
            }
            (None, None) => unreachable!(),
        };
        if full {
            break;
        }
    }
    members.sort_by(|a, b| a.weight.partial_cmp(&b.weight).unwrap());
    Ok(members)
}

fn select_distinct(mut pool: Vec<Scored>, keep: usize) -> Vec<Scored> {
    pool.sort_by(|a, b| a.weight.partial_cmp(&b.weight).unwrap());
    let mut out: Vec<Scored> = Vec::with_capacity(keep.min(pool.len()));
    for cand in pool {
        if out.len() == keep {
            break;
        }
        // structural duplicates have bitwise equal weights, so only the
        // trailing equal-weight run needs checking
        let dup = out
            .iter()
            .rev()
            .take_while(|m| m.weight == cand.weight)
            .any(|m| m.assignment == cand.assignment);
        if !dup {
            out.push(cand);
        }
    }
    out
}

/// Derives the next generation: the elite survives untouched, every other
/// member is perturbed and re-improved with the mutation chance, and the
/// crossover quota `pressure * next_size - previous_size` (clamped to
/// zero, two children per run) refills the candidate pool, from which the
/// best distinct assignments are kept.
pub fn advance_generation(
    oracle: &dyn WeightOracle,
    ls: &dyn LocalSearch,
    params: &MemeticParams,
    prev: &GenerationState,
    next_size: usize,
    next_size_real: f64,
    rng: &mut Prng,
) -> Result<GenerationState, ModelError> {
    let m_prev = prev.members.len();
    let quota =
        (params.selection_pressure * next_size as f64).round() as i64 - m_prev as i64;
    let starved = quota < 0;
    let crossings = if m_prev >= 2 { (quota.max(0) / 2) as usize } else { 0 };

    let mut pool: Vec<Scored> = Vec::with_capacity(m_prev + 2 * crossings);
    pool.push(prev.members[0].clone());
    for member in &prev.members[1..] {
        if rng.chance(params.mutation_chance) {
            let shaken = perturb(&member.assignment, params.mutation_strength, rng);
            let improved = ls.improve(oracle, &shaken)?;
            let weight = weight_of(oracle, &improved);
            pool.push(Scored { assignment: improved, weight });
        } else {
            pool.push(member.clone());
        }
    }

    for _ in 0..crossings {
        let u = rng.index(m_prev);
        let mut v = rng.index(m_prev);
        while v == u {
            v = rng.index(m_prev);
        }
        let (a, b) = crossover(
            &prev.members[u].assignment,
            &prev.members[v].assignment,
            params.parent_bias,
            rng,
        )?;
        for child in [a, b] {
            let improved = ls.improve(oracle, &child)?;
            let weight = weight_of(oracle, &improved);
            pool.push(Scored { assignment: improved, weight });
        }
    }

    Ok(GenerationState {
        members: select_distinct(pool, next_size),
        size_real: next_size_real,
        index: prev.index + 1,
        starved,
    })
}

/// Runs the full search and reports the best assignment found across all
/// generations.
pub fn run(
    oracle: &dyn WeightOracle,
    ls: &dyn LocalSearch,
    params: &MemeticParams,
    budget: &Budget,
    seed: u64,
) -> Result<SolveReport, RunError> {
    params.validate()?;
    budget.validate()?;
    let counting = CountingOracle::new(oracle);
    let mut rng = Prng::new(seed);
    let started = Instant::now();

    let members = first_generation(&counting, ls, params, budget, &mut rng)?;
    let mut state = GenerationState {
        size_real: members.len() as f64,
        members,
        index: 1,
        starved: false,
    };
    let mut best = state.members[0].clone();
    let mut starved_count = 0u64;
    let mut last_delta = started.elapsed();

    loop {
        match *budget {
            Budget::Time(total) => {
                if started.elapsed() >= total {
                    break;
                }
            }
            Budget::Deterministic { generations, .. } => {
                if state.index >= generations {
                    break;
                }
            }
        }
        let gen_started = Instant::now();
        let (next_size, next_real) = match *budget {
            Budget::Time(total) => {
                let real = next_gen_size(
                    state.size_real,
                    total.as_secs_f64(),
                    started.elapsed().as_secs_f64(),
                    last_delta.as_secs_f64(),
                    params.planned_generations,
                    state.index,
                    params.growth_limit,
                );
                (round_gen_size(real, state.members.len(), params.selection_pressure), real)
            }
            Budget::Deterministic { size, .. } => (size, size as f64),
        };
        state = advance_generation(
            &counting, ls, params, &state, next_size, next_real, &mut rng,
        )?;
        if state.starved {
            starved_count += 1;
        }
        if state.members[0].weight < best.weight {
            best = state.members[0].clone();
        }
        last_delta = gen_started.elapsed();
    }

    Ok(SolveReport {
        best: best.assignment,
        weight: best.weight,
        generations: state.index as u64,
        evaluations: counting.calls(),
        elapsed: started.elapsed(),
        starved_crossovers: starved_count,
    })
}
