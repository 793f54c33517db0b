//! Exact and bounded searches for the extremal values `Θ_n` and `Θ_n^Δ`.
//!
//! Every engine is deterministic: values, witness lists and node counts do
//! not depend on the worker count or on the dispatch seed.

mod exhaustive;
mod pairs;
mod selfortho;
mod theorem;

use std::sync::atomic::{AtomicU64, Ordering};
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::NormalMatrix;

pub use exhaustive::{theta_exhaustive, MAX_EXHAUSTIVE_ORDER};
pub use pairs::{
    enumerate_orthogonal_pairs, for_each_orthogonal_pair, theta_bounded, MAX_BOUNDED_ORDER,
};
pub use selfortho::{
    theta_delta_by_weight, theta_delta_exhaustive, MAX_DELTA_EXHAUSTIVE_ORDER,
    MAX_DELTA_WEIGHT_ORDER,
};
pub use theorem::{check_theorem_theta, ForwardCase, TheoremCheck, TheoremReport};

/// Certificates keep at most this many witnesses.
pub const WITNESS_CAP: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ThetaKind {
    /// Minimum of `Σ(A,B)` over orthogonal pairs.
    PairTheta,
    /// Minimum of `ν(A) - n` over self-orthogonal matrices.
    SelfTheta,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Completeness {
    /// The value is the true minimum and every minimizer was enumerated.
    Exhaustive,
    /// Nothing at or below `budget` exists and a witness at `budget + 1` is
    /// attached.
    BoundedProof {
        budget: usize,
    },
    UpperBoundOnly,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(untagged)]
pub enum Witness {
    Pair { a: NormalMatrix, b: NormalMatrix },
    Single(NormalMatrix),
}

#[derive(Debug, Clone, Copy, Default, Serialize)]
pub struct SearchStats {
    pub nodes: u64,
    /// Wall-clock time; left out of serialized output so reports stay
    /// byte-identical across runs.
    #[serde(skip)]
    pub elapsed: Duration,
}

/// Equality ignores elapsed time.
impl PartialEq for SearchStats {
    fn eq(&self, other: &Self) -> bool {
        self.nodes == other.nodes
    }
}

impl Eq for SearchStats {}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ThetaCertificate {
    pub n: usize,
    pub kind: ThetaKind,
    pub value: usize,
    pub completeness: Completeness,
    pub symmetry_reduced: bool,
    pub search_stats: SearchStats,
    /// Number of minimizers the search produced, before truncation.
    pub witness_total: u64,
    pub witnesses: Vec<Witness>,
}

impl ThetaCertificate {
    pub fn truncated(&self) -> bool {
        self.witness_total as usize > self.witnesses.len()
    }
}

/// Resource caps and scheduling knobs shared by the engines.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchLimits {
    pub node_limit: Option<u64>,
    pub time_limit: Option<Duration>,
    /// Worker count; `None` uses the ambient rayon pool.
    pub threads: Option<usize>,
    /// Restrict the sparser matrix to canonical forms under relabeling and
    /// transposition (bounded pair search only).
    pub symmetry: bool,
    /// Shuffles the order in which work is handed to workers.
    pub seed: Option<u64>,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            node_limit: None,
            time_limit: None,
            threads: None,
            symmetry: true,
            seed: None,
        }
    }
}

impl SearchLimits {
    pub fn unlimited() -> Self {
        Self::default()
    }
}

/// Shared node and time accounting. Workers count locally and flush in
/// batches, so the limits are enforced to within one batch per worker.
pub(crate) struct Meter {
    nodes: AtomicU64,
    node_limit: u64,
    deadline: Option<Instant>,
    start: Instant,
}

pub(crate) const FLUSH_EVERY: u64 = 1 << 12;

impl Meter {
    pub(crate) fn new(limits: &SearchLimits) -> Meter {
        let start = Instant::now();
        Meter {
            nodes: AtomicU64::new(0),
            node_limit: limits.node_limit.unwrap_or(u64::MAX),
            deadline: limits.time_limit.map(|t| start + t),
            start,
        }
    }

    pub(crate) fn flush(&self, count: u64) -> Result<()> {
        let total = self.nodes.fetch_add(count, Ordering::Relaxed) + count;
        if total > self.node_limit {
            return Err(Error::Inconclusive(format!(
                "node limit {} exceeded",
                self.node_limit
            )));
        }
        if let Some(deadline) = self.deadline {
            if Instant::now() > deadline {
                return Err(Error::Inconclusive("time limit exceeded".to_string()));
            }
        }
        Ok(())
    }

    pub(crate) fn stats(&self, nodes: u64) -> SearchStats {
        SearchStats {
            nodes,
            elapsed: self.start.elapsed(),
        }
    }
}

/// Runs `f` on a pool of `threads` workers, or on the ambient pool.
pub(crate) fn in_pool<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match threads {
        None => Ok(f()),
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t.max(1))
                .build()
                .map_err(|e| Error::Precondition(format!("thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

/// Indices `0..len` in dispatch order.
pub(crate) fn dispatch_order(len: usize, seed: Option<u64>) -> Vec<usize> {
    let mut order: Vec<usize> = (0..len).collect();
    if let Some(seed) = seed {
        order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    }
    order
}

/// Masks over `bits` bits with exactly `weight` set bits, ascending.
pub(crate) fn masks_of_weight(bits: u32, weight: u32) -> impl Iterator<Item = u64> {
    let limit = 1u64 << bits;
    let mut next = if weight > bits {
        limit
    } else if weight == 0 {
        0
    } else {
        (1u64 << weight) - 1
    };
    let mut done = weight > bits;
    std::iter::from_fn(move || {
        if done || next >= limit {
            return None;
        }
        let cur = next;
        if cur == 0 {
            done = true;
        } else {
            let c = cur & cur.wrapping_neg();
            let r = cur + c;
            next = (((r ^ cur) >> 2) / c) | r;
        }
        Some(cur)
    })
}

pub(crate) fn check_search_order(n: usize, max: usize, what: &'static str) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidOrder { got: 0, max });
    }
    if n > max {
        return Err(Error::TooLarge { what, got: n, max });
    }
    Ok(())
}

pub(crate) fn cap_witnesses(mut all: Vec<Witness>) -> (u64, Vec<Witness>) {
    let total = all.len() as u64;
    all.truncate(WITNESS_CAP);
    (total, all)
}
