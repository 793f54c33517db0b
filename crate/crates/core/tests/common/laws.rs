//! Law checks shared by the property suite and the acceptance run.

use normortho::ortho::ZeroClass;
use normortho::{indicator, sigma, sigma_row, NormalMatrix};
use proptest::prelude::*;

pub fn quadruples(n: usize) -> impl Iterator<Item = (usize, usize, usize, usize)> {
    (0..n)
        .flat_map(move |s| {
            (0..n).flat_map(move |t| (0..n).flat_map(move |k| (0..n).map(move |m| (s, t, k, m))))
        })
        .filter(|&(s, t, k, m)| s != t && s != k && s != m && t != k && t != m && k != m)
}

pub fn check_indicator_laws(a: &NormalMatrix, b: &NormalMatrix) -> Result<(), TestCaseError> {
    let n = a.order();
    let r = indicator(a, b).unwrap();
    let mut props_by_row = vec![0usize; n];
    let mut costs_by_row = vec![0usize; n];
    let mut gifts_by_row = vec![0usize; n];
    for s in 0..n {
        for t in 0..n {
            let class = r.class(s, t);
            // Propagation.
            if a.is_zero_at(s, t) || b.is_zero_at(s, t) {
                prop_assert!(r.indicator.is_zero_at(s, t));
            }
            // Every zero of the indicator is explained, and only zeros are.
            prop_assert_eq!(
                r.indicator.is_zero_at(s, t),
                !matches!(class, ZeroClass::Nonzero)
            );
            match class {
                ZeroClass::Propagation => props_by_row[s] += 1,
                ZeroClass::Cost(ks) => {
                    costs_by_row[s] += 1;
                    for &k in ks {
                        prop_assert!(a.is_zero_at(s, k) && b.is_zero_at(s, k));
                        prop_assert!(a.is_zero_at(k, t) && b.is_zero_at(k, t));
                    }
                }
                ZeroClass::Gift(_) => gifts_by_row[s] += 1,
                _ => {}
            }
        }
    }
    for s in 0..n {
        if gifts_by_row[s] > 0 {
            prop_assert!(gifts_by_row[s] <= n - 3);
            prop_assert!(props_by_row[s] >= 2);
        }
        if costs_by_row[s] > 0 {
            prop_assert!(costs_by_row[s] <= n - 2);
            prop_assert!(props_by_row[s] >= 1);
        }
    }
    // Five zeros forced by one gift pattern.
    for (s, t, k, m) in quadruples(n) {
        if a.is_zero_at(s, k) && b.is_zero_at(k, t) && b.is_zero_at(s, m) && a.is_zero_at(m, t) {
            for (x, y) in [(s, k), (k, t), (s, m), (m, t), (s, t)] {
                prop_assert!(r.indicator.is_zero_at(x, y));
            }
        }
    }
    if a == b || n <= 3 {
        prop_assert_eq!(r.gift_count, 0);
    }
    if a.oplus(b).unwrap().is_all_zero() {
        prop_assert!(r.indicator.is_all_zero());
    }
    let s = sigma(a, b).unwrap();
    if a != b {
        let lo = a.nu().max(b.nu()) - n;
        prop_assert!(lo <= r.prop_count && r.prop_count <= s);
        prop_assert_eq!(r.prop_count == s, r.duplicate_count == 0);
    } else {
        prop_assert_eq!(a.nu() - n, r.prop_count);
    }
    if n >= 3 && r.is_orthogonal() {
        for i in 0..n {
            prop_assert!(sigma_row(a, b, i).unwrap() >= 2);
        }
    }
    Ok(())
}
