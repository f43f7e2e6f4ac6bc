//! Search for a point where all three linear forms are prime.
//!
//! The difference `d = X - Y` fixes `Q3`, so the search walks a seeded
//! permutation of candidate `d` values. For each `d` with `Q3(d)` prime, a
//! window of `X` values is sieved by small primes simultaneously for
//! `Q1(X)` and `Q2(X - d)`, and the survivors are tested in increasing `X`.
//!
//! Each `d` is one block of the candidate stream, indexed by its position in
//! the permutation. Blocks are evaluated in parallel in fixed-size batches;
//! the winner is the hit with the smallest block index, and the budget is
//! charged in block order, so the result never depends on the worker count.

mod primality;

pub use primality::{
    is_prime, jacobi, strong_lucas, strong_probable_prime_u64, strong_test, PrimalityEvidence, Verdict,
    DETERMINISTIC_BASES, EXTRA_BASES, TRIAL_DIVISION_BOUND,
};

use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::target::{CongruenceTarget, LinearFormTriple, TargetError};

/// Blocks evaluated per parallel batch. Fixed so that the work done before
/// the winner is found does not depend on the thread count.
const BATCH: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub seed: u64,
    /// Number of consecutive `d` values, starting at the least `d` with `Q3(d) >= 2`.
    pub d_range: u64,
    /// `X` values sieved per `d`.
    pub x_window: u64,
    /// Largest sieving prime.
    pub sieve_bound: u64,
    /// Maximum number of primality tests.
    pub budget: u64,
    pub worker_count: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self { seed: 1, d_range: 1 << 16, x_window: 1 << 14, sieve_bound: 1 << 15, budget: 1_000_000, worker_count: 1 }
    }
}

impl SearchConfig {
    fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(SearchError::InvalidConfig(format!("{what} must be positive")));
        if self.d_range == 0 {
            return bad("d_range");
        }
        if self.x_window == 0 {
            return bad("x_window");
        }
        if self.sieve_bound < 2 {
            return Err(SearchError::InvalidConfig("sieve_bound must be at least 2".into()));
        }
        if self.worker_count == 0 {
            return bad("worker_count");
        }
        if usize::try_from(self.x_window).is_err() || usize::try_from(self.d_range).is_err() {
            return Err(SearchError::InvalidConfig("window or range too large for this platform".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    pub d_values: u64,
    pub candidates_sieved: u64,
    pub sieve_survivors: u64,
    pub primality_tests: u64,
    pub elapsed_ms: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExhaustReason {
    Budget,
    Range,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("invalid search configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Forms(#[from] TargetError),
    #[error("search exhausted ({reason:?}) after {} primality tests; no solution found", stats.primality_tests)]
    Exhausted { reason: ExhaustReason, stats: SearchStats },
}

pub type Result<T> = std::result::Result<T, SearchError>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub x0: BigInt,
    pub y0: BigInt,
    pub stream_index: usize,
    /// Evidence for `Q1`, `Q2`, `Q3` at the solution.
    pub evidence: [PrimalityEvidence; 3],
    pub stats: SearchStats,
}

struct Hit {
    x: BigInt,
    evidence: [PrimalityEvidence; 3],
}

#[derive(Default)]
struct BlockOutcome {
    tests: u64,
    sieved: u64,
    survivors: u64,
    hit: Option<Hit>,
}

/// `Q1 = c1 + m1 X`, `Q2 = c2 + m2 Y`, `Q3 = c3 + k (X - Y)` with positive `m1`, `m2`, `k`.
struct Shape {
    c1: BigInt,
    m1: BigInt,
    c2: BigInt,
    m2: BigInt,
    c3: BigInt,
    k: BigInt,
}

impl Shape {
    fn from_forms(forms: &LinearFormTriple) -> Result<Self> {
        let (q1, q2, q3) = (&forms.q1, &forms.q2, &forms.q3);
        let ok = q1.cy.is_zero()
            && q1.cx.is_positive()
            && q2.cx.is_zero()
            && q2.cy.is_positive()
            && q3.cx.is_positive()
            && q3.cy == -&q3.cx;
        if !ok {
            return Err(SearchError::InvalidConfig(
                "forms must be Q1(X), Q2(Y), Q3(X - Y) with positive slopes".into(),
            ));
        }
        Ok(Self {
            c1: q1.constant.clone(),
            m1: q1.cx.clone(),
            c2: q2.constant.clone(),
            m2: q2.cy.clone(),
            c3: q3.constant.clone(),
            k: q3.cx.clone(),
        })
    }

    /// Least `d` with `Q3(d) >= 2`.
    fn d_min(&self) -> BigInt {
        (BigInt::from(2) - &self.c3).div_ceil(&self.k)
    }
}

fn primes_up_to(bound: u64) -> Vec<u64> {
    let n = bound as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            for j in (i * i..=n).step_by(i) {
                composite[j] = true;
            }
        }
    }
    out
}

fn residue(x: &BigInt, ell: u64) -> u64 {
    x.mod_floor(&BigInt::from(ell)).to_u64().expect("small residue")
}

/// Marks window offsets `i` with `c + m (start + i - shift) ≡ 0 (mod ell)`.
fn sieve_form(dead: &mut [bool], c: &BigInt, m: &BigInt, start: &BigInt, shift: &BigInt, ell: u64) {
    let (cm, mm) = (residue(c, ell), residue(m, ell));
    if mm == 0 {
        if cm == 0 {
            dead.iter_mut().for_each(|x| *x = true);
        }
        return;
    }
    let inv = BigInt::from(mm).modinv(&BigInt::from(ell)).expect("ell prime").to_u64().expect("small");
    // root X ≡ shift - c / m
    let root = (residue(shift, ell) + ell - (cm * inv) % ell) % ell;
    let first = ((root + ell - residue(start, ell)) % ell) as usize;
    for i in (first..dead.len()).step_by(ell as usize) {
        dead[i] = true;
    }
}

fn run_block(
    shape: &Shape,
    d: &BigInt,
    cfg: &SearchConfig,
    primes: &[u64],
    cutoff: &AtomicUsize,
    index: usize,
) -> BlockOutcome {
    let mut out = BlockOutcome::default();
    let q3 = &shape.c3 + &shape.k * d;
    let ev3 = is_prime(&q3);
    out.tests += 1;
    if !ev3.is_prime() {
        return out;
    }
    let start = d.max(&BigInt::zero()).clone();
    let window = cfg.x_window as usize;
    let mut dead = vec![false; window];
    for &ell in primes {
        sieve_form(&mut dead, &shape.c1, &shape.m1, &start, &BigInt::zero(), ell);
        sieve_form(&mut dead, &shape.c2, &shape.m2, &start, d, ell);
    }
    // values at or below the sieve bound may be the sieving prime itself
    let bound = BigInt::from(cfg.sieve_bound);
    for (i, slot) in dead.iter_mut().enumerate() {
        let x = &start + i;
        if &shape.c1 + &shape.m1 * &x > bound && &shape.c2 + &shape.m2 * (&x - d) > bound {
            break;
        }
        *slot = false;
    }
    out.sieved = window as u64;
    out.survivors = dead.iter().filter(|&&x| !x).count() as u64;
    for (i, _) in dead.iter().enumerate().filter(|(_, &x)| !x) {
        if cutoff.load(Ordering::Relaxed) < index {
            break;
        }
        let x = &start + i;
        let ev1 = is_prime(&(&shape.c1 + &shape.m1 * &x));
        out.tests += 1;
        if !ev1.is_prime() {
            continue;
        }
        let ev2 = is_prime(&(&shape.c2 + &shape.m2 * (&x - d)));
        out.tests += 1;
        if ev2.is_prime() {
            cutoff.fetch_min(index, Ordering::Relaxed);
            out.hit = Some(Hit { x, evidence: [ev1, ev2, ev3] });
            return out;
        }
    }
    out
}

/// The seeded permutation of `d` values searched.
pub fn d_order(forms: &LinearFormTriple, cfg: &SearchConfig) -> Result<Vec<BigInt>> {
    cfg.validate()?;
    let shape = Shape::from_forms(forms)?;
    let d_min = shape.d_min();
    let mut offsets: Vec<u64> = (0..cfg.d_range).collect();
    offsets.shuffle(&mut ChaCha8Rng::seed_from_u64(cfg.seed));
    Ok(offsets.into_iter().map(|o| &d_min + o).collect())
}

pub fn search(forms: &LinearFormTriple, target: &CongruenceTarget, cfg: &SearchConfig) -> Result<Solution> {
    search_with_progress(forms, target, cfg, |_| {})
}

/// [`search`], calling `progress` with cumulative statistics after every batch.
pub fn search_with_progress(
    forms: &LinearFormTriple,
    target: &CongruenceTarget,
    cfg: &SearchConfig,
    mut progress: impl FnMut(&SearchStats),
) -> Result<Solution> {
    let started = Instant::now();
    forms.check_admissible(target.p)?;
    let shape = Shape::from_forms(forms)?;
    let order = d_order(forms, cfg)?;
    let primes = primes_up_to(cfg.sieve_bound);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.worker_count)
        .build()
        .map_err(|e| SearchError::InvalidConfig(e.to_string()))?;
    let mut stats = SearchStats::default();
    let elapsed = |stats: &mut SearchStats| stats.elapsed_ms = started.elapsed().as_millis() as u64;

    for (batch_no, batch) in order.chunks(BATCH).enumerate() {
        let base = batch_no * BATCH;
        let cutoff = AtomicUsize::new(usize::MAX);
        let outcomes: Vec<BlockOutcome> = pool.install(|| {
            batch.par_iter().enumerate().map(|(i, d)| run_block(&shape, d, cfg, &primes, &cutoff, base + i)).collect()
        });
        for (i, block) in outcomes.into_iter().enumerate() {
            if stats.primality_tests + block.tests > cfg.budget {
                elapsed(&mut stats);
                return Err(SearchError::Exhausted { reason: ExhaustReason::Budget, stats });
            }
            stats.d_values += 1;
            stats.primality_tests += block.tests;
            stats.candidates_sieved += block.sieved;
            stats.sieve_survivors += block.survivors;
            if let Some(hit) = block.hit {
                elapsed(&mut stats);
                let d = &batch[i];
                return Ok(Solution {
                    y0: &hit.x - d,
                    x0: hit.x,
                    stream_index: base + i,
                    evidence: hit.evidence,
                    stats,
                });
            }
        }
        elapsed(&mut stats);
        progress(&stats);
    }
    Err(SearchError::Exhausted { reason: ExhaustReason::Range, stats })
}

/// `true` when the point is a solution: all three forms prime at `(x, y)`.
pub fn is_solution(forms: &LinearFormTriple, x: &BigInt, y: &BigInt) -> bool {
    forms.forms().iter().all(|(_, f)| is_prime(&f.eval(x, y)).is_prime())
}
