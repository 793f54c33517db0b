mod common;

use std::collections::BTreeSet;

use common::{circulant, counterexample_pair, Dense};
use normortho::families::{in_v, mm_classify, FamilySpec};
use normortho::search::{
    check_theorem_theta, enumerate_orthogonal_pairs, theta_bounded, theta_delta_by_weight,
    theta_delta_exhaustive, theta_exhaustive, Witness,
};
use normortho::{
    is_orthogonal, is_self_orthogonal, sigma, sigma_row, Completeness, NormalMatrix, SearchLimits,
};

type Pair = (NormalMatrix, NormalMatrix);

fn limits() -> SearchLimits {
    SearchLimits::default()
}

fn pairs(ws: &[Witness]) -> BTreeSet<Pair> {
    ws.iter()
        .map(|w| match w {
            Witness::Pair { a, b } => (*a, *b),
            Witness::Single(_) => panic!("single witness in a pair certificate"),
        })
        .collect()
}

fn singles(ws: &[Witness]) -> BTreeSet<NormalMatrix> {
    ws.iter()
        .map(|w| match w {
            Witness::Single(a) => *a,
            Witness::Pair { .. } => panic!("pair witness in a self certificate"),
        })
        .collect()
}

fn minimal_pairs(n: usize) -> BTreeSet<Pair> {
    pairs(&theta_exhaustive(n, &limits()).unwrap().witnesses)
}

#[test]
fn exhaustive_witnesses_pass_the_reference_evaluator() {
    for (n, value) in [(2, 2), (3, 6), (4, 8)] {
        let cert = theta_exhaustive(n, &limits()).unwrap();
        assert_eq!(cert.value, value);
        assert_eq!(cert.completeness, Completeness::Exhaustive);
        assert!(!cert.truncated());
        for (a, b) in pairs(&cert.witnesses) {
            let (da, db) = (Dense::of(&a), Dense::of(&b));
            assert!(common::orthogonal(&da, &db));
            assert_eq!(common::sigma(&da, &db), value);
        }
    }
}

#[test]
fn minimal_pairs_are_closed_under_symmetries() {
    for n in 2..=4 {
        let set = minimal_pairs(n);
        for (a, b) in &set {
            assert!(set.contains(&(*b, *a)));
            assert!(set.contains(&(b.transpose(), a.transpose())));
            for i in 0..n {
                for j in i + 1..n {
                    let p = (
                        a.conjugate_transposition(i, j).unwrap(),
                        b.conjugate_transposition(i, j).unwrap(),
                    );
                    assert!(set.contains(&p));
                }
            }
        }
    }
}

#[test]
fn minimal_pairs_meet_the_row_conditions() {
    for n in 3..=4 {
        for (a, b) in minimal_pairs(n) {
            let sums: Vec<usize> = (0..n).map(|i| sigma_row(&a, &b, i).unwrap()).collect();
            assert!(sums.iter().all(|&s| s >= 2));
            assert!(
                sums.iter().filter(|&&s| (2..=3).contains(&s)).count() >= 3,
                "{sums:?}"
            );
        }
    }
}

#[test]
fn bounded_and_exhaustive_engines_agree() {
    for n in 2..=4 {
        let exact = theta_exhaustive(n, &limits()).unwrap();
        let minimal = pairs(&exact.witnesses);
        let proof = theta_bounded(n, exact.value - 1, &limits()).unwrap();
        assert_eq!(proof.value, exact.value);
        assert_eq!(
            proof.completeness,
            Completeness::BoundedProof {
                budget: exact.value - 1
            }
        );
        for (a, b) in pairs(&proof.witnesses) {
            assert!(minimal.contains(&(a, b)));
            assert!(common::orthogonal(&Dense::of(&a), &Dense::of(&b)));
        }
        let listed: BTreeSet<Pair> = enumerate_orthogonal_pairs(n, exact.value, &limits())
            .unwrap()
            .into_iter()
            .collect();
        assert_eq!(listed, minimal);
    }
}

#[test]
fn bounded_search_without_symmetry_agrees() {
    let plain = SearchLimits {
        symmetry: false,
        ..limits()
    };
    for (n, budget) in [(3, 5), (4, 7)] {
        let a = theta_bounded(n, budget, &limits()).unwrap();
        let b = theta_bounded(n, budget, &plain).unwrap();
        assert_eq!(a.value, b.value);
        assert!(a.symmetry_reduced && !b.symmetry_reduced);
    }
}

#[test]
fn enumeration_is_exact_up_to_the_ceiling() {
    for (n, max_sigma) in [(3, 6), (4, 10)] {
        let found = enumerate_orthogonal_pairs(n, max_sigma, &limits()).unwrap();
        let unique: BTreeSet<Pair> = found.iter().copied().collect();
        assert_eq!(unique.len(), found.len());
        let all: Vec<NormalMatrix> = NormalMatrix::all(n).unwrap().collect();
        let mut expected = BTreeSet::new();
        for a in &all {
            for b in &all {
                if sigma(a, b).unwrap() <= max_sigma && is_orthogonal(a, b).unwrap() {
                    expected.insert((*a, *b));
                }
            }
        }
        assert_eq!(unique, expected);
    }
    assert!(enumerate_orthogonal_pairs(2, 1, &limits())
        .unwrap()
        .is_empty());
}

#[test]
fn enumeration_order_ignores_threads_and_seed() {
    let base = enumerate_orthogonal_pairs(4, 8, &limits()).unwrap();
    for (threads, seed) in [(Some(1), None), (Some(3), Some(7)), (None, Some(99))] {
        let l = SearchLimits {
            threads,
            seed,
            ..limits()
        };
        assert_eq!(enumerate_orthogonal_pairs(4, 8, &l).unwrap(), base);
    }
}

#[test]
fn self_orthogonal_engines_agree() {
    for n in 1..=5 {
        let full = theta_delta_exhaustive(n, &limits()).unwrap();
        let weighted = theta_delta_by_weight(n, &limits()).unwrap();
        assert_eq!(full.value, weighted.value);
        assert_eq!(singles(&full.witnesses), singles(&weighted.witnesses));
        for a in singles(&full.witnesses) {
            let d = Dense::of(&a);
            assert!(d.odot(&d).is_all_zero());
            assert!(is_self_orthogonal(&a));
        }
    }
}

#[test]
fn pair_minimum_is_at_most_twice_the_self_minimum() {
    for n in 2..=4 {
        let pair = theta_exhaustive(n, &limits()).unwrap().value;
        let single = theta_delta_exhaustive(n, &limits()).unwrap().value;
        assert!(pair <= 2 * single, "n={n}");
    }
    let single5 = theta_delta_exhaustive(5, &limits()).unwrap().value;
    assert!(theta_bounded(5, 13, &limits()).unwrap().value <= 2 * single5);
}

#[test]
fn self_minimizers_at_three_and_five() {
    let three = singles(&theta_delta_exhaustive(3, &limits()).unwrap().witnesses);
    assert!(three.contains(&circulant()));
    assert!((0..3).all(|k| !in_v(&circulant(), k, k)));
    let five = singles(&theta_delta_exhaustive(5, &limits()).unwrap().witnesses);
    let generic: BTreeSet<NormalMatrix> = (0..5)
        .map(|k| FamilySpec::v(5, k, k).unwrap().generic())
        .collect();
    assert_eq!(five, generic);
}

#[test]
fn printed_counterexamples_are_minimal() {
    for (n, value) in [(3, 6), (4, 8), (5, 14), (6, 18)] {
        let (a, b) = counterexample_pair(n);
        assert!(is_orthogonal(&a, &b).unwrap());
        assert!(common::orthogonal(&Dense::of(&a), &Dense::of(&b)));
        assert_eq!(sigma(&a, &b).unwrap(), value);
        assert_eq!(mm_classify(&a, &b).unwrap(), None);
    }
    for n in 3..=4 {
        let (a, b) = counterexample_pair(n);
        assert!(minimal_pairs(n).contains(&(a, b)));
        let report = check_theorem_theta(n, &limits()).unwrap();
        assert!(report.verified);
        assert!(report.counterexamples.contains(&Witness::Pair { a, b }));
    }
}

#[test]
fn order_two_census() {
    let z = NormalMatrix::all_zero(2).unwrap();
    let i = NormalMatrix::identity(2).unwrap();
    let u12 = common::m("00\n-0");
    let u21 = common::m("0-\n00");
    let expected: BTreeSet<Pair> = [(z, i), (i, z), (u12, u21), (u21, u12)]
        .into_iter()
        .collect();
    assert_eq!(minimal_pairs(2), expected);
}

#[test]
fn node_limit_is_reported_as_inconclusive() {
    let tight = SearchLimits {
        node_limit: Some(5),
        symmetry: false,
        ..limits()
    };
    let err = theta_bounded(4, 7, &tight).unwrap_err();
    assert!(matches!(err, normortho::Error::Inconclusive(_)), "{err:?}");
}
