//! Branch and bound over orthogonal pairs.
//!
//! By the swap symmetry `(A,B) ↦ (B,A)` the sparser factor `A` carries at
//! most half of the budget, so it is enumerated directly (optionally up to
//! relabeling and transposition). Its partners `B` are then built column by
//! column: column `c` of `B` must meet every row zero set of `A`, which
//! leaves a short list of feasible columns, and each row of `B` must meet
//! every column zero set of `A`, which is checked as soon as the columns
//! involved are fixed.

use rayon::prelude::*;

use super::{
    check_search_order, dispatch_order, in_pool, masks_of_weight, Completeness, Meter,
    SearchLimits, SearchStats, ThetaCertificate, ThetaKind, Witness, FLUSH_EVERY,
};
use crate::error::{Error, Result};
use crate::matrix::{bits, full_mask, NormalMatrix, MAX_ORDER};

/// Largest order for the bounded engines.
pub const MAX_BOUNDED_ORDER: usize = 6;

const CHUNK: usize = 512;

/// Upper bound on `Θ_n` from the `𝔐_km` construction.
fn sigma_ceiling(n: usize) -> usize {
    (4 * n).saturating_sub(6)
}

struct Tally<'m> {
    meter: &'m Meter,
    nodes: u64,
    pending: u64,
}

impl<'m> Tally<'m> {
    fn new(meter: &'m Meter) -> Self {
        Tally {
            meter,
            nodes: 0,
            pending: 0,
        }
    }

    #[inline]
    fn tick(&mut self) -> Result<()> {
        self.nodes += 1;
        self.pending += 1;
        if self.pending >= FLUSH_EVERY {
            self.meter.flush(self.pending)?;
            self.pending = 0;
        }
        Ok(())
    }

    fn finish(mut self) -> Result<u64> {
        if self.pending > 0 {
            self.meter.flush(self.pending)?;
            self.pending = 0;
        }
        Ok(self.nodes)
    }
}

trait Sink {
    fn budget(&self) -> i32;
    fn leaf(&mut self, cost: i32, rows: &[u16; MAX_ORDER]);
}

/// Keeps the cheapest completion, tightening the budget as it goes.
struct Cheapest {
    budget: i32,
    best: Option<(i32, [u16; MAX_ORDER])>,
}

impl Sink for Cheapest {
    fn budget(&self) -> i32 {
        self.budget
    }

    fn leaf(&mut self, cost: i32, rows: &[u16; MAX_ORDER]) {
        self.best = Some((cost, *rows));
        self.budget = cost - 1;
    }
}

/// Keeps every completion whose weight is at least `floor`.
struct Every {
    budget: i32,
    floor: i32,
    found: Vec<[u16; MAX_ORDER]>,
}

impl Sink for Every {
    fn budget(&self) -> i32 {
        self.budget
    }

    fn leaf(&mut self, cost: i32, rows: &[u16; MAX_ORDER]) {
        if cost >= self.floor {
            self.found.push(*rows);
        }
    }
}

/// Partner search for one fixed first factor.
struct Completer {
    n: usize,
    /// Feasible zero sets of each column of `B`, by weight then mask.
    options: Vec<Vec<(u16, i32)>>,
    /// Least total weight of columns `c..n`.
    suffix_min: [i32; MAX_ORDER + 1],
    /// Column zero sets of `A`.
    a_cols: [u16; MAX_ORDER],
    /// Column zero sets of `A` whose largest index is `c`.
    closing: [u16; MAX_ORDER],
    /// Column zero sets of `A` not yet settled before column `c`.
    open: [u16; MAX_ORDER + 1],
}

impl Completer {
    fn new(a: &NormalMatrix) -> Completer {
        let n = a.order();
        let full = full_mask(n);
        let mut options = Vec::with_capacity(n);
        for c in 0..n {
            let mut opts: Vec<(u16, i32)> = (0..=full)
                .filter(|&s| s >> c & 1 == 1 && (0..n).all(|i| a.row(i) & s != 0))
                .map(|s| (s, s.count_ones() as i32 - 1))
                .collect();
            opts.sort_by_key(|&(s, w)| (w, s));
            options.push(opts);
        }
        let mut suffix_min = [0i32; MAX_ORDER + 1];
        for c in (0..n).rev() {
            suffix_min[c] = suffix_min[c + 1] + options[c][0].1;
        }
        let mut a_cols = [0u16; MAX_ORDER];
        let mut closing = [0u16; MAX_ORDER];
        for (j, col) in a_cols.iter_mut().enumerate().take(n) {
            *col = a.col(j);
            let last = 15 - col.leading_zeros() as usize;
            closing[last] |= 1 << j;
        }
        let mut open = [0u16; MAX_ORDER + 1];
        for (c, slot) in open.iter_mut().enumerate().take(n + 1) {
            *slot = (0..n)
                .filter(|&j| (15 - a_cols[j].leading_zeros() as usize) >= c)
                .fold(0u16, |m, j| m | 1 << j);
        }
        Completer {
            n,
            options,
            suffix_min,
            a_cols,
            closing,
            open,
        }
    }

    fn run<S: Sink>(&self, sink: &mut S, tally: &mut Tally) -> Result<()> {
        let mut rows = [0u16; MAX_ORDER];
        self.dfs(0, &mut rows, 0, sink, tally)
    }

    fn dfs<S: Sink>(
        &self,
        c: usize,
        rows: &mut [u16; MAX_ORDER],
        cost: i32,
        sink: &mut S,
        tally: &mut Tally,
    ) -> Result<()> {
        tally.tick()?;
        let n = self.n;
        if c == n {
            sink.leaf(cost, rows);
            return Ok(());
        }
        // Rows still missing a column zero set of `A` need one more
        // off-diagonal zero, unless their own diagonal is still to come and
        // settles every such set.
        let open = self.open[c];
        let needy = (0..n)
            .filter(|&i| {
                bits(open).any(|j| {
                    rows[i] & self.a_cols[j] == 0 && (i < c || self.a_cols[j] >> i & 1 == 0)
                })
            })
            .count() as i32;
        if cost + needy.max(self.suffix_min[c]) > sink.budget() {
            return Ok(());
        }
        let bit = 1u16 << c;
        for &(set, w) in &self.options[c] {
            if cost + w + self.suffix_min[c + 1] > sink.budget() {
                break;
            }
            for i in bits(set) {
                rows[i] |= bit;
            }
            let settled =
                bits(self.closing[c]).all(|j| (0..n).all(|i| rows[i] & self.a_cols[j] != 0));
            if settled {
                self.dfs(c + 1, rows, cost + w, sink, tally)?;
            }
            for i in bits(set) {
                rows[i] &= !bit;
            }
        }
        Ok(())
    }
}

fn cheapest_partner(
    a: &NormalMatrix,
    budget: i32,
    meter: &Meter,
) -> Result<(Option<(usize, NormalMatrix)>, u64)> {
    let mut tally = Tally::new(meter);
    let mut sink = Cheapest { budget, best: None };
    if budget >= 0 {
        Completer::new(a).run(&mut sink, &mut tally)?;
    }
    let found = sink.best.map(|(cost, rows)| {
        (
            cost as usize,
            NormalMatrix::from_rows_unchecked(a.order(), &rows[..a.order()]),
        )
    });
    Ok((found, tally.finish()?))
}

fn every_partner(
    a: &NormalMatrix,
    budget: i32,
    floor: i32,
    meter: &Meter,
) -> Result<(Vec<NormalMatrix>, u64)> {
    let mut tally = Tally::new(meter);
    let mut sink = Every {
        budget,
        floor,
        found: Vec::new(),
    };
    if budget >= 0 {
        Completer::new(a).run(&mut sink, &mut tally)?;
    }
    let n = a.order();
    let found = sink
        .found
        .iter()
        .map(|rows| NormalMatrix::from_rows_unchecked(n, &rows[..n]))
        .collect();
    Ok((found, tally.finish()?))
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn extend(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                prefix.push(v);
                extend(prefix, used, out);
                prefix.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// True when `a` has the least off-diagonal mask in its class under
/// relabeling and transposition.
fn is_canonical(a: &NormalMatrix, perms: &[Vec<usize>]) -> bool {
    let mask = a.offdiag_mask();
    let t = a.transpose();
    perms
        .iter()
        .all(|p| a.relabel(p).offdiag_mask() >= mask && t.relabel(p).offdiag_mask() >= mask)
}

/// First factors with at most `max_weight` off-diagonal zeros, by weight
/// then mask.
fn first_factors(n: usize, max_weight: usize, symmetry: bool) -> Vec<NormalMatrix> {
    let cells = (n * n - n) as u32;
    let perms = if symmetry {
        permutations(n)
    } else {
        Vec::new()
    };
    let mut out = Vec::new();
    for w in 0..=max_weight.min(cells as usize) {
        let masks: Vec<u64> = masks_of_weight(cells, w as u32).collect();
        let layer: Vec<NormalMatrix> = masks
            .into_par_iter()
            .map(|m| NormalMatrix::from_offdiag_mask(n, m))
            .filter(|a| !symmetry || is_canonical(a, &perms))
            .collect();
        out.extend(layer);
    }
    out
}

type Found = (usize, Option<(usize, NormalMatrix)>, u64);

fn cheapest_over(
    factors: &[NormalMatrix],
    budget: usize,
    limits: &SearchLimits,
    meter: &Meter,
) -> Result<Vec<Found>> {
    let order = dispatch_order(factors.len(), limits.seed);
    let mut found: Vec<Found> = order
        .par_iter()
        .map(|&idx| {
            let a = &factors[idx];
            let rest = budget as i32 - a.offdiag_count() as i32;
            let (hit, nodes) = cheapest_partner(a, rest, meter)?;
            Ok((idx, hit, nodes))
        })
        .collect::<Result<Vec<_>>>()?;
    found.sort_unstable_by_key(|f| f.0);
    Ok(found)
}

/// Bounded search for `Θ_n`: proves that no orthogonal pair has `Σ ≤ budget`
/// and attaches a pair at `budget + 1`, or returns the least pair found
/// within the budget.
///
/// Either way the certificate is a `BoundedProof` at `value - 1`. When no
/// pair exists at `budget + 1` the budget is raised one step at a time.
pub fn theta_bounded(n: usize, budget: usize, limits: &SearchLimits) -> Result<ThetaCertificate> {
    check_search_order(n, MAX_BOUNDED_ORDER, "bounded pair search")?;
    if n < 2 || budget + 7 > 4 * n {
        return Err(Error::Precondition(format!(
            "bounded search needs n >= 2 and budget <= 4n-7, got n={n}, budget={budget}"
        )));
    }
    let meter = Meter::new(limits);
    in_pool(limits.threads, || {
        let mut nodes = 0u64;
        let factors = first_factors(n, budget / 2, limits.symmetry);
        let found = cheapest_over(&factors, budget, limits, &meter)?;
        nodes += found.iter().map(|f| f.2).sum::<u64>();
        let best = found
            .iter()
            .filter_map(|(idx, hit, _)| {
                hit.as_ref()
                    .map(|(s, b)| (s + factors[*idx].offdiag_count(), *idx, *b))
            })
            .min_by_key(|&(s, idx, _)| (s, idx));

        let (value, a, b) = match best {
            Some((s, idx, b)) => (s, factors[idx], b),
            None => {
                let mut hit = None;
                for level in budget + 1..=sigma_ceiling(n) {
                    let factors = first_factors(n, level / 2, limits.symmetry);
                    for chunk in factors.chunks(CHUNK) {
                        let found = cheapest_over(chunk, level, limits, &meter)?;
                        nodes += found.iter().map(|f| f.2).sum::<u64>();
                        if let Some((idx, Some((_, b)), _)) =
                            found.into_iter().find(|f| f.1.is_some())
                        {
                            hit = Some((level, chunk[idx], b));
                            break;
                        }
                    }
                    if hit.is_some() {
                        break;
                    }
                }
                hit.ok_or_else(|| {
                    Error::Precondition(format!(
                        "no orthogonal pair with Σ <= {} at order {n}",
                        sigma_ceiling(n)
                    ))
                })?
            }
        };
        Ok(ThetaCertificate {
            n,
            kind: ThetaKind::PairTheta,
            value,
            completeness: Completeness::BoundedProof { budget: value - 1 },
            symmetry_reduced: limits.symmetry,
            search_stats: meter.stats(nodes),
            witness_total: 1,
            witnesses: vec![Witness::Pair { a, b }],
        })
    })?
}

/// Visits every orthogonal pair with `Σ ≤ max_sigma` exactly once, in an
/// order that does not depend on the worker count.
pub fn for_each_orthogonal_pair<F>(
    n: usize,
    max_sigma: usize,
    limits: &SearchLimits,
    mut visit: F,
) -> Result<SearchStats>
where
    F: FnMut(&NormalMatrix, &NormalMatrix),
{
    check_search_order(n, MAX_BOUNDED_ORDER, "pair enumeration")?;
    if max_sigma > sigma_ceiling(n) {
        return Err(Error::Precondition(format!(
            "max_sigma must be <= {} at order {n}, got {max_sigma}",
            sigma_ceiling(n)
        )));
    }
    let meter = Meter::new(limits);
    let factors = first_factors(n, max_sigma / 2, false);
    let mut nodes = 0u64;
    for chunk in factors.chunks(CHUNK) {
        let order = dispatch_order(chunk.len(), limits.seed);
        let mut found = in_pool(limits.threads, || {
            order
                .par_iter()
                .map(|&idx| {
                    let a = &chunk[idx];
                    let w = a.offdiag_count() as i32;
                    let (partners, count) = every_partner(a, max_sigma as i32 - w, w, &meter)?;
                    Ok((idx, partners, count))
                })
                .collect::<Result<Vec<_>>>()
        })??;
        found.sort_unstable_by_key(|f| f.0);
        for (idx, partners, count) in found {
            nodes += count;
            let a = &chunk[idx];
            let w = a.offdiag_count();
            for b in &partners {
                visit(a, b);
                if b.offdiag_count() > w {
                    visit(b, a);
                }
            }
        }
    }
    Ok(meter.stats(nodes))
}

/// Collects [`for_each_orthogonal_pair`].
pub fn enumerate_orthogonal_pairs(
    n: usize,
    max_sigma: usize,
    limits: &SearchLimits,
) -> Result<Vec<(NormalMatrix, NormalMatrix)>> {
    let mut out = Vec::new();
    for_each_orthogonal_pair(n, max_sigma, limits, |a, b| out.push((*a, *b)))?;
    Ok(out)
}
