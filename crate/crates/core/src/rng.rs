//! Deterministic random numbers for instance generation and search: a
//! subtractive lagged-Fibonacci generator (lag pair 55/24) over integers
//! modulo 2^31 - 1. All arithmetic is integral, so a seed produces the same
//! sequence on every platform; the exact constants below are the contract.

use thiserror::Error;

const MODULUS: i64 = 2_147_483_647; // 2^31 - 1
const SEED_SCRAMBLE: i64 = 161_803_398;
const LAG: usize = 55;
const POINTER_GAP: usize = 31; // yields x[i] = x[i-55] - x[i-24] mod MODULUS

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RngError {
    #[error("empty range: lo {lo} is not below hi {hi}")]
    EmptyRange { lo: i64, hi: i64 },
}

/// Single-owner generator state. Clone to fork a stream that replays the
/// same draws.
#[derive(Debug, Clone)]
pub struct Prng {
    state: [i64; LAG],
    ia: usize,
    ib: usize,
}

impl Prng {
    /// Seeds the state table: scatter `21*i mod 55` fills every slot once,
    /// then four mixing rounds decorrelate nearby seeds.
    pub fn new(seed: u64) -> Self {
        let reduced = (seed % MODULUS as u64) as i64;
        let mut state = [0i64; LAG];
        let mut mj = (SEED_SCRAMBLE - reduced).rem_euclid(MODULUS);
        state[LAG - 1] = mj;
        let mut mk = 1i64;
        for i in 1..LAG {
            let slot = (21 * i) % LAG; // 1-based slot, never 0 for i in 1..=54
            state[slot - 1] = mk;
            mk = mj - mk;
            if mk < 0 {
                mk += MODULUS;
            }
            mj = state[slot - 1];
        }
        for _ in 0..4 {
            for i in 0..LAG {
                state[i] -= state[(i + POINTER_GAP) % LAG];
                if state[i] < 0 {
                    state[i] += MODULUS;
                }
            }
        }
        Prng { state, ia: 0, ib: POINTER_GAP }
    }

    /// One state step; result uniform in `[0, 2^31 - 1)`.
    pub fn next_raw(&mut self) -> i64 {
        let mut v = self.state[self.ia] - self.state[self.ib];
        if v < 0 {
            v += MODULUS;
        }
        self.state[self.ia] = v;
        self.ia = (self.ia + 1) % LAG;
        self.ib = (self.ib + 1) % LAG;
        v
    }

    /// Uniform draw in `[lo, hi)`; consumes exactly one state step.
    pub fn next_int(&mut self, lo: i64, hi: i64) -> Result<i64, RngError> {
        if lo >= hi {
            return Err(RngError::EmptyRange { lo, hi });
        }
        Ok(lo + self.next_raw() % (hi - lo))
    }

    /// Uniform index in `[0, len)`. Panics on `len == 0`; callers guarantee
    /// non-empty ranges on hot paths.
    pub fn index(&mut self, len: usize) -> usize {
        assert!(len > 0, "cannot draw an index from an empty range");
        (self.next_raw() % len as i64) as usize
    }

    /// Uniform draw in `[0, 1)`; one state step.
    pub fn next_f64(&mut self) -> f64 {
        self.next_raw() as f64 / MODULUS as f64
    }

    /// True with probability `p`; one state step.
    pub fn chance(&mut self, p: f64) -> bool {
        self.next_f64() < p
    }

    /// In-place Fisher-Yates shuffle. Draw order is part of the contract:
    /// for i from len-1 down to 1, draw j in [0, i] and swap.
    pub fn shuffle<T>(&mut self, xs: &mut [T]) {
        for i in (1..xs.len()).rev() {
            let j = self.index(i + 1);
            xs.swap(i, j);
        }
    }
}
