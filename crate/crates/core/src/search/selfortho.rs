use rayon::prelude::*;

use super::{
    cap_witnesses, check_search_order, in_pool, masks_of_weight, Completeness, Meter, SearchLimits,
    ThetaCertificate, ThetaKind, Witness,
};
use crate::error::{Error, Result};
use crate::matrix::{product_is_full, NormalMatrix};

/// Largest order for the full scan.
pub const MAX_DELTA_EXHAUSTIVE_ORDER: usize = 5;
/// Largest order for the weight-ordered scan.
pub const MAX_DELTA_WEIGHT_ORDER: usize = 6;

fn self_orthogonal_mask(n: usize, mask: u64) -> Option<NormalMatrix> {
    let a = NormalMatrix::from_offdiag_mask(n, mask);
    product_is_full(n, a.rows(), a.rows()).then_some(a)
}

fn certificate(
    n: usize,
    value: usize,
    minimizers: Vec<NormalMatrix>,
    meter: &Meter,
    nodes: u64,
) -> ThetaCertificate {
    let (witness_total, witnesses) =
        cap_witnesses(minimizers.into_iter().map(Witness::Single).collect());
    ThetaCertificate {
        n,
        kind: ThetaKind::SelfTheta,
        value,
        completeness: Completeness::Exhaustive,
        symmetry_reduced: false,
        search_stats: meter.stats(nodes),
        witness_total,
        witnesses,
    }
}

/// `Θ_n^Δ` by scanning every normal matrix, with all minimizers in
/// increasing mask order.
pub fn theta_delta_exhaustive(n: usize, limits: &SearchLimits) -> Result<ThetaCertificate> {
    check_search_order(
        n,
        MAX_DELTA_EXHAUSTIVE_ORDER,
        "exhaustive self-orthogonal search",
    )?;
    let meter = Meter::new(limits);
    let count = 1u64 << (n * n - n);
    let hits: Vec<(usize, NormalMatrix)> = in_pool(limits.threads, || {
        (0..count)
            .into_par_iter()
            .filter_map(|m| self_orthogonal_mask(n, m).map(|a| (a.offdiag_count(), a)))
            .collect()
    })?;
    meter.flush(count)?;
    let value = hits.iter().map(|h| h.0).min().unwrap_or(0);
    let minimizers = hits
        .into_iter()
        .filter(|h| h.0 == value)
        .map(|h| h.1)
        .collect();
    Ok(certificate(n, value, minimizers, &meter, count))
}

/// `Θ_n^Δ` by scanning weight classes upward until one contains a
/// self-orthogonal matrix; that class is enumerated in full.
pub fn theta_delta_by_weight(n: usize, limits: &SearchLimits) -> Result<ThetaCertificate> {
    check_search_order(
        n,
        MAX_DELTA_WEIGHT_ORDER,
        "weight-ordered self-orthogonal search",
    )?;
    let meter = Meter::new(limits);
    let cells = (n * n - n) as u32;
    let mut nodes = 0u64;
    for w in 0..=cells {
        // Split each class on its highest set bit so workers share the load.
        let found: Vec<Vec<NormalMatrix>> = in_pool(limits.threads, || {
            (0..cells.max(1))
                .into_par_iter()
                .map(|top| {
                    let (lower, rest, head) = if w == 0 {
                        (0, 0, 0u64)
                    } else {
                        (top, w - 1, 1u64 << top)
                    };
                    if w == 0 && top > 0 {
                        return Ok((Vec::new(), 0));
                    }
                    let mut hits = Vec::new();
                    let mut seen = 0u64;
                    for low in masks_of_weight(lower, rest) {
                        seen += 1;
                        if let Some(a) = self_orthogonal_mask(n, head | low) {
                            hits.push(a);
                        }
                    }
                    meter.flush(seen)?;
                    Ok((hits, seen))
                })
                .collect::<Result<Vec<_>>>()
        })??
        .into_iter()
        .map(|(hits, seen)| {
            nodes += seen;
            hits
        })
        .collect();
        let minimizers: Vec<NormalMatrix> = found.into_iter().flatten().collect();
        if !minimizers.is_empty() {
            return Ok(certificate(n, w as usize, minimizers, &meter, nodes));
        }
    }
    Err(Error::Precondition(format!(
        "no self-orthogonal matrix at order {n}"
    )))
}
