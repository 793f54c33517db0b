use rayon::prelude::*;

use super::{
    cap_witnesses, check_search_order, dispatch_order, in_pool, Completeness, Meter, SearchLimits,
    ThetaCertificate, ThetaKind, Witness,
};
use crate::error::Result;
use crate::matrix::{product_is_full, NormalMatrix};

/// Largest order for the all-pairs scan.
pub const MAX_EXHAUSTIVE_ORDER: usize = 4;

/// `Θ_n` by scanning every ordered pair, with all minimal pairs.
pub fn theta_exhaustive(n: usize, limits: &SearchLimits) -> Result<ThetaCertificate> {
    check_search_order(n, MAX_EXHAUSTIVE_ORDER, "exhaustive pair search")?;
    let meter = Meter::new(limits);
    let all: Vec<NormalMatrix> = NormalMatrix::all(n)?.collect();
    let order = dispatch_order(all.len(), limits.seed);

    // Per first factor: (least Σ, every second factor reaching it).
    let per_a = in_pool(limits.threads, || {
        order
            .par_iter()
            .map(|&ia| {
                let a = &all[ia];
                let wa = a.offdiag_count();
                let mut best = usize::MAX;
                let mut hits = Vec::new();
                for (ib, b) in all.iter().enumerate() {
                    let s = wa + b.offdiag_count();
                    if s > best {
                        continue;
                    }
                    if product_is_full(n, a.rows(), b.rows())
                        && product_is_full(n, b.rows(), a.rows())
                    {
                        if s < best {
                            best = s;
                            hits.clear();
                        }
                        hits.push(ib);
                    }
                }
                meter.flush(all.len() as u64)?;
                Ok((ia, best, hits))
            })
            .collect::<Result<Vec<_>>>()
    })??;

    let value = per_a.iter().map(|r| r.1).min().unwrap_or(0);
    let mut pairs: Vec<(usize, usize)> = per_a
        .iter()
        .filter(|r| r.1 == value)
        .flat_map(|(ia, _, hits)| hits.iter().map(move |&ib| (*ia, ib)))
        .collect();
    pairs.sort_unstable();
    let witnesses = pairs
        .into_iter()
        .map(|(ia, ib)| Witness::Pair {
            a: all[ia],
            b: all[ib],
        })
        .collect();
    let (witness_total, witnesses) = cap_witnesses(witnesses);
    let nodes = (all.len() * all.len()) as u64;
    Ok(ThetaCertificate {
        n,
        kind: ThetaKind::PairTheta,
        value,
        completeness: Completeness::Exhaustive,
        symmetry_reduced: false,
        search_stats: meter.stats(nodes),
        witness_total,
        witnesses,
    })
}
