//! Machine checks of the characterization of minimal pairs by `𝔐_km`.

use std::collections::BTreeSet;

use serde::Serialize;

use super::{theta_exhaustive, SearchLimits, Witness};
use crate::error::{Error, Result};
use crate::families::{mm_classify, mm_pair, MmVariant};
use crate::matrix::{sigma, NormalMatrix};
use crate::ortho::{indicator, is_orthogonal};

/// Smallest and largest orders of the constructive check.
pub const FORWARD_ORDERS: std::ops::RangeInclusive<usize> = 7..=10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TheoremCheck {
    /// Minimal pairs coincide with the `𝔐_km` pairs, `A != B`, `k != m`.
    Equivalence,
    /// Minimal pairs outside every `𝔐_km` exist.
    Counterexamples,
    /// Every `𝔐_km` pair with `A != B`, `k != m` is orthogonal and extremal.
    Forward,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ForwardCase {
    pub case: MmVariant,
    pub distinct: bool,
    pub orthogonal: bool,
    pub sigma: usize,
    pub prop: usize,
    pub gift: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TheoremReport {
    pub n: usize,
    pub check: TheoremCheck,
    pub verified: bool,
    pub minimal_pairs: u64,
    pub mm_pairs: usize,
    /// Minimal pairs outside every `𝔐_km` with `k != m`.
    pub counterexamples: Vec<Witness>,
    /// `𝔐_km` pairs that are not minimal (only for the equivalence check).
    pub non_minimal: Vec<Witness>,
    pub cases: Vec<ForwardCase>,
}

fn mm_pairs(n: usize) -> Result<BTreeSet<(NormalMatrix, NormalMatrix)>> {
    let mut out = BTreeSet::new();
    for k in 0..n {
        for m in 0..n {
            if k == m {
                continue;
            }
            for variant in 0..4 {
                let (a, b) = mm_pair(MmVariant { k, m, variant }, n)?;
                if a != b {
                    out.insert((a, b));
                }
            }
        }
    }
    Ok(out)
}

fn in_some_mm(a: &NormalMatrix, b: &NormalMatrix) -> Result<bool> {
    Ok(mm_classify(a, b)?.is_some_and(|v| v.k != v.m))
}

/// Checks the characterization at `n = 2` (equivalence), `n = 3, 4`
/// (counterexamples exist) and `7 <= n <= 10` (forward direction).
pub fn check_theorem_theta(n: usize, limits: &SearchLimits) -> Result<TheoremReport> {
    match n {
        2..=4 => {
            let cert = theta_exhaustive(n, limits)?;
            let minimal: BTreeSet<(NormalMatrix, NormalMatrix)> = cert
                .witnesses
                .iter()
                .filter_map(|w| match w {
                    Witness::Pair { a, b } => Some((*a, *b)),
                    Witness::Single(_) => None,
                })
                .collect();
            let mm = mm_pairs(n)?;
            let mut counterexamples = Vec::new();
            for (a, b) in &minimal {
                if !in_some_mm(a, b)? {
                    counterexamples.push(Witness::Pair { a: *a, b: *b });
                }
            }
            let non_minimal: Vec<Witness> = mm
                .difference(&minimal)
                .map(|(a, b)| Witness::Pair { a: *a, b: *b })
                .collect();
            let (check, verified) = if n == 2 {
                (
                    TheoremCheck::Equivalence,
                    counterexamples.is_empty() && non_minimal.is_empty(),
                )
            } else {
                (TheoremCheck::Counterexamples, !counterexamples.is_empty())
            };
            Ok(TheoremReport {
                n,
                check,
                verified,
                minimal_pairs: cert.witness_total,
                mm_pairs: mm.len(),
                counterexamples,
                non_minimal,
                cases: Vec::new(),
            })
        }
        n if FORWARD_ORDERS.contains(&n) => {
            let target = 4 * n - 6;
            let gifts = (n - 2) * (n - 3);
            let mut cases = Vec::new();
            for k in 0..n {
                for m in 0..n {
                    if k == m {
                        continue;
                    }
                    for variant in 0..4 {
                        let case = MmVariant { k, m, variant };
                        let (a, b) = mm_pair(case, n)?;
                        let report = indicator(&a, &b)?;
                        cases.push(ForwardCase {
                            case,
                            distinct: a != b,
                            orthogonal: is_orthogonal(&a, &b)?,
                            sigma: sigma(&a, &b)?,
                            prop: report.prop_count,
                            gift: report.gift_count,
                        });
                    }
                }
            }
            let verified = cases.iter().all(|c| {
                c.distinct
                    && c.orthogonal
                    && c.sigma == target
                    && c.prop == target
                    && c.gift == gifts
            });
            Ok(TheoremReport {
                n,
                check: TheoremCheck::Forward,
                verified,
                minimal_pairs: 0,
                mm_pairs: cases.len(),
                counterexamples: Vec::new(),
                non_minimal: Vec::new(),
                cases,
            })
        }
        _ => Err(Error::Precondition(format!(
            "theorem check supports n in 2..=4 or 7..=10, got {n}"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_two_equivalence() {
        let r = check_theorem_theta(2, &SearchLimits::default()).unwrap();
        assert_eq!(r.check, TheoremCheck::Equivalence);
        assert!(r.verified);
        assert_eq!(r.minimal_pairs, 4);
        assert_eq!(r.mm_pairs, 4);
    }

    #[test]
    fn order_three_has_counterexamples() {
        let r = check_theorem_theta(3, &SearchLimits::default()).unwrap();
        assert!(r.verified);
        assert!(!r.counterexamples.is_empty());
    }

    #[test]
    fn forward_order_eight() {
        let r = check_theorem_theta(8, &SearchLimits::default()).unwrap();
        assert!(r.verified);
        assert_eq!(r.cases.len(), 8 * 7 * 4);
        assert!(r.cases.iter().all(|c| c.gift == 30));
    }

    #[test]
    fn unsupported_orders() {
        for n in [0, 1, 5, 6, 11] {
            assert!(check_theorem_theta(n, &SearchLimits::default()).is_err());
        }
    }
}
