mod common;

use common::laws::check_indicator_laws;
use common::{dense_pair_upto, normal, pair_upto, Dense};
use normortho::border::{
    border_orthogonality_condition, self_ortho_border_condition, BorderVector, BorderedBlocks,
};
use normortho::families::{in_v, sufficient_condition, FamilySpec};
use normortho::ortho::{orth_set, VertexSet};
use normortho::{
    indicator, is_orthogonal, is_self_orthogonal, sigma, sigma_row, NormalMatrix, Scalar,
};
use proptest::prelude::*;

fn cfg() -> ProptestConfig {
    ProptestConfig::with_cases(1000)
}

fn all3() -> Vec<NormalMatrix> {
    NormalMatrix::all(3).unwrap().collect()
}

fn conjugations(n: usize) -> Vec<(usize, usize)> {
    (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect()
}

proptest! {
    #![proptest_config(cfg())]

    #[test]
    fn scalar_semiring_laws(x in 0..2usize, y in 0..2usize, z in 0..2usize) {
        let (a, b, c) = (Scalar::ALL[x], Scalar::ALL[y], Scalar::ALL[z]);
        prop_assert_eq!(a.oplus(b), b.oplus(a));
        prop_assert_eq!(a.oplus(b).oplus(c), a.oplus(b.oplus(c)));
        prop_assert_eq!(a.odot(b).odot(c), a.odot(b.odot(c)));
        prop_assert_eq!(a.odot(b.oplus(c)), a.odot(b).oplus(a.odot(c)));
        prop_assert_eq!(a.oplus(a), a);
        prop_assert_eq!(a.oplus(Scalar::NegOne), a);
    }

    #[test]
    fn matrix_oplus_laws((a, b) in pair_upto(8), seed in any::<u64>()) {
        let n = a.order();
        let c = common::from_cells(n, &(0..n * n - n).map(|k| seed >> (k % 64) & 1 == 1).collect::<Vec<_>>());
        let i = NormalMatrix::identity(n).unwrap();
        prop_assert_eq!(a.oplus(&b).unwrap(), b.oplus(&a).unwrap());
        prop_assert_eq!(a.oplus(&b).unwrap().oplus(&c).unwrap(), a.oplus(&b.oplus(&c).unwrap()).unwrap());
        prop_assert_eq!(a.oplus(&a).unwrap(), a);
        prop_assert_eq!(a.oplus(&i).unwrap(), a);
        prop_assert_eq!(Dense::of(&a.oplus(&b).unwrap()), Dense::of(&a).oplus(&Dense::of(&b)));
    }

    #[test]
    fn matrix_odot_laws((a, b) in pair_upto(8), c_seed in any::<u64>()) {
        let n = a.order();
        let c = common::from_cells(n, &(0..n * n - n).map(|k| c_seed.rotate_left(k as u32) & 1 == 1).collect::<Vec<_>>());
        let i = NormalMatrix::identity(n).unwrap();
        let z = NormalMatrix::all_zero(n).unwrap();
        let ab = a.odot(&b).unwrap();
        prop_assert_eq!(ab.odot(&c).unwrap(), a.odot(&b.odot(&c).unwrap()).unwrap());
        prop_assert_eq!(a.odot(&i).unwrap(), a);
        prop_assert_eq!(i.odot(&a).unwrap(), a);
        prop_assert_eq!(a.odot(&z).unwrap(), z);
        prop_assert_eq!(z.odot(&a).unwrap(), z);
        prop_assert_eq!(Dense::of(&ab), Dense::of(&a).odot(&Dense::of(&b)));
        prop_assert_eq!(ab.transpose(), b.transpose().odot(&a.transpose()).unwrap());
        prop_assert_eq!(a.oplus(&b).unwrap().transpose(), a.transpose().oplus(&b.transpose()).unwrap());
    }

    #[test]
    fn conjugation_is_a_homomorphism((a, b) in pair_upto(8), i in 0..8usize, j in 0..8usize) {
        let n = a.order();
        let (i, j) = (i % n, j % n);
        let pa = a.conjugate_transposition(i, j).unwrap();
        let pb = b.conjugate_transposition(i, j).unwrap();
        prop_assert_eq!(a.odot(&b).unwrap().conjugate_transposition(i, j).unwrap(), pa.odot(&pb).unwrap());
        let orth = is_orthogonal(&a, &b).unwrap();
        prop_assert_eq!(orth, is_orthogonal(&pa, &pb).unwrap());
        prop_assert_eq!(orth, is_orthogonal(&b.transpose(), &a.transpose()).unwrap());
    }

    #[test]
    fn indicator_laws_sparse((a, b) in pair_upto(8)) {
        check_indicator_laws(&a, &b)?;
    }

    #[test]
    fn indicator_laws_dense((a, b) in dense_pair_upto(8)) {
        check_indicator_laws(&a, &b)?;
    }

    #[test]
    fn indicator_laws_self(a in (1..=8usize).prop_flat_map(normal)) {
        check_indicator_laws(&a, &a)?;
    }

    #[test]
    fn sufficient_conditions_survive_extra_zeros(
        n in 2..=10usize, k in 0..10usize, m in 0..10usize, cond in 0..4u8,
        extra_a in any::<u64>(), extra_b in any::<u64>(),
    ) {
        let (k, m) = (k % n, m % n);
        let (sa, sb) = match cond {
            0 => ("V", "V"),
            _ => ("W", "W"),
        };
        let mut fa = format!("{sa}:{},{}", k + 1, m + 1);
        let mut fb = format!("{sb}:{},{}", m + 1, k + 1);
        match cond {
            1 => fa += &format!("&Z:{},{}&Z:{},{}", k + 1, m + 1, m + 1, k + 1),
            2 => { fa += &format!("&Z:{},{}", m + 1, k + 1); fb += &format!("&Z:{},{}", k + 1, m + 1); }
            3 => fb += &format!("&Z:{},{}&Z:{},{}", k + 1, m + 1, m + 1, k + 1),
            _ => {}
        }
        let ga = FamilySpec::parse(n, &fa).unwrap().generic();
        let gb = FamilySpec::parse(n, &fb).unwrap().generic();
        let widen = |g: &NormalMatrix, bits: u64| {
            let rows: Vec<u16> = (0..n).map(|i| g.row(i) | ((bits >> (i * 5 % 60)) as u16 & ((1u16 << n) - 1))).collect();
            NormalMatrix::from_rows(n, &rows).unwrap()
        };
        let (a, b) = (widen(&ga, extra_a), widen(&gb, extra_b));
        prop_assert!(sufficient_condition(cond, &a, &b, k, m));
        prop_assert!(is_orthogonal(&a, &b).unwrap());
        prop_assert!(common::orthogonal(&Dense::of(&a), &Dense::of(&b)));
    }

    #[test]
    fn v_diagonal_members_square_to_zero(n in 1..=10usize, p in 0..10usize, extra in any::<u64>()) {
        let p = p % n;
        let g = FamilySpec::v(n, p, p).unwrap().generic();
        let rows: Vec<u16> = (0..n).map(|i| g.row(i) | ((extra >> (i * 6 % 58)) as u16 & ((1u16 << n) - 1))).collect();
        let a = NormalMatrix::from_rows(n, &rows).unwrap();
        prop_assert!(in_v(&a, p, p));
        prop_assert!(is_self_orthogonal(&a));
    }

    #[test]
    fn bordering_transfers_orthogonality(
        (b1, b2) in dense_pair_upto(6), v1 in any::<u16>(), v2 in any::<u16>(),
        w1 in any::<u16>(), w2 in any::<u16>(),
    ) {
        prop_assume!(is_orthogonal(&b1, &b2).unwrap());
        let k = b1.order();
        let blocks = |b: NormalMatrix, v: u16, w: u16| {
            BorderedBlocks::new(b, BorderVector::new(k, v).unwrap(), BorderVector::new(k, w).unwrap()).unwrap()
        };
        let x = blocks(b1, v1, w1);
        let y = blocks(b2, v2, w2);
        let composed = is_orthogonal(&x.compose().unwrap(), &y.compose().unwrap()).unwrap();
        prop_assert_eq!(border_orthogonality_condition(&x, &y).unwrap(), composed);
    }

    #[test]
    fn bordering_transfers_self_orthogonality(
        (b, _) in dense_pair_upto(6), v in any::<u16>(), w in any::<u16>(),
    ) {
        prop_assume!(is_self_orthogonal(&b));
        let k = b.order();
        let x = BorderedBlocks::new(b, BorderVector::new(k, v).unwrap(), BorderVector::new(k, w).unwrap()).unwrap();
        let full = x.compose().unwrap();
        prop_assert_eq!(self_ortho_border_condition(&x).unwrap(), is_self_orthogonal(&full));
        prop_assert_eq!(BorderedBlocks::split(&full).unwrap(), x);
    }
}

#[test]
fn order_two_laws_over_all_pairs() {
    let all: Vec<NormalMatrix> = NormalMatrix::all(2).unwrap().collect();
    assert_eq!(all.len(), 4);
    for a in &all {
        assert_eq!(a.odot(a).unwrap(), *a);
        for b in &all {
            let sum = a.oplus(b).unwrap();
            assert_eq!(a.odot(b).unwrap(), sum);
            assert_eq!(b.odot(a).unwrap(), sum);
            assert_eq!(is_orthogonal(a, b).unwrap(), sum.is_all_zero());
        }
    }
}

#[test]
fn indicator_laws_exhaustive_order_three() {
    let all = all3();
    for a in &all {
        for b in &all {
            check_indicator_laws(a, b).unwrap();
            let orth = is_orthogonal(a, b).unwrap();
            for (i, j) in conjugations(3) {
                let pa = a.conjugate_transposition(i, j).unwrap();
                let pb = b.conjugate_transposition(i, j).unwrap();
                assert_eq!(orth, is_orthogonal(&pa, &pb).unwrap());
            }
            assert_eq!(orth, is_orthogonal(&b.transpose(), &a.transpose()).unwrap());
        }
    }
}

#[test]
fn bordering_exhaustive_order_three() {
    let inner: Vec<NormalMatrix> = NormalMatrix::all(2).unwrap().collect();
    for b1 in &inner {
        for b2 in &inner {
            if !is_orthogonal(b1, b2).unwrap() {
                continue;
            }
            for bits in 0..256u16 {
                let v = |s: u16| BorderVector::new(2, s & 3).unwrap();
                let x = BorderedBlocks::new(*b1, v(bits), v(bits >> 2)).unwrap();
                let y = BorderedBlocks::new(*b2, v(bits >> 4), v(bits >> 6)).unwrap();
                let composed = is_orthogonal(&x.compose().unwrap(), &y.compose().unwrap()).unwrap();
                assert_eq!(border_orthogonality_condition(&x, &y).unwrap(), composed);
            }
        }
    }
}

#[test]
fn generic_counts_up_to_twelve() {
    for n in 2..=12 {
        for p in 0..n {
            for q in 0..n {
                // The index-pair indicator is -1 on the diagonal.
                let c = usize::from(p == q);
                let v = FamilySpec::v(n, p, q).unwrap().generic();
                assert_eq!(v.nu() - n, 2 * n - 3 + c, "V n={n} p={p} q={q}");
                let w = FamilySpec::w(n, p, q).unwrap().generic();
                assert_eq!(w.nu() - n, 2 * n - 4 + 2 * c, "W n={n}");
                if p != q {
                    let spec = format!(
                        "W:{},{}&Z:{},{}&Z:{},{}",
                        p + 1,
                        q + 1,
                        p + 1,
                        q + 1,
                        q + 1,
                        p + 1
                    );
                    let g = FamilySpec::parse(n, &spec).unwrap().generic();
                    assert_eq!(g.nu() - n, 2 * n - 2);
                }
            }
        }
    }
}

#[test]
fn partners_of_v_generic_order_four() {
    let n = 4;
    for p in 0..n {
        for q in 0..n {
            if p == q {
                continue;
            }
            let a = FamilySpec::v(n, p, q).unwrap().generic();
            let partners = orth_set(&a, VertexSet::AllNormal).unwrap();
            assert!(!partners.is_empty());
            for b in partners {
                for i in 0..n {
                    for j in 0..n {
                        assert!(
                            b.is_zero_at(i, j) || (b.is_zero_at(q, j) && b.is_zero_at(i, p)),
                            "p={p} q={q} {b:?}"
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn orthogonal_pairs_order_four_have_two_zeros_per_row() {
    let all: Vec<NormalMatrix> = NormalMatrix::all(4).unwrap().collect();
    let mut seen = 0;
    for a in all.iter().step_by(7) {
        for b in &all {
            if is_orthogonal(a, b).unwrap() {
                seen += 1;
                for i in 0..4 {
                    assert!(sigma_row(a, b, i).unwrap() >= 2);
                }
            }
        }
    }
    assert!(seen > 1000);
}

#[test]
fn reduced_orders_share_orthogonal_structure() {
    for n in 2..=4 {
        let id = NormalMatrix::identity(n).unwrap();
        assert_eq!(
            orth_set(&id, VertexSet::AllNormal).unwrap(),
            vec![NormalMatrix::all_zero(n).unwrap()]
        );
        let strictly: Vec<NormalMatrix> = NormalMatrix::all(n)
            .unwrap()
            .filter(|a| a.offdiag_count() == 0)
            .collect();
        assert_eq!(strictly, vec![id]);
    }
    // A row and column without off-diagonal zeros force a zero row and
    // column in every partner.
    let all: Vec<NormalMatrix> = NormalMatrix::all(4).unwrap().collect();
    for a in &all {
        for i in 0..4 {
            if a.row(i) == 1 << i && a.col(i) == 1 << i {
                let moved = a.conjugate_transposition(3, i).unwrap();
                for b in orth_set(&moved, VertexSet::AllNormal).unwrap() {
                    assert_eq!((b.row(3), b.col(3)), (0b1111, 0b1111));
                }
                let reduced = normortho::border::reduce_size(a, i).unwrap();
                assert_eq!(
                    orth_set(a, VertexSet::AllNormal).unwrap().len(),
                    orth_set(&reduced, VertexSet::AllNormal).unwrap().len()
                );
            }
        }
    }
}

#[test]
fn mm_pairs_round_trip_through_indicator() {
    use normortho::families::{mm_characterize, mm_classify, mm_pair, MmVariant};
    use normortho::ortho::{row_type, RowType};
    for n in 4..=10 {
        let mut distinct = std::collections::BTreeSet::new();
        for k in 0..n {
            for m in 0..n {
                if k == m {
                    continue;
                }
                for variant in 0..4 {
                    let (a, b) = mm_pair(MmVariant { k, m, variant }, n).unwrap();
                    assert_ne!(a, b);
                    distinct.insert((a, b));
                    let r = indicator(&a, &b).unwrap();
                    assert!(r.is_orthogonal());
                    assert_eq!(sigma(&a, &b).unwrap(), 4 * n - 6);
                    assert_eq!(r.gift_count, (n - 2) * (n - 3));
                    assert_eq!(
                        mm_characterize(&r),
                        Some((k, m)),
                        "n={n} k={k} m={m} v={variant}"
                    );
                    let found = mm_classify(&a, &b).unwrap().unwrap();
                    assert_eq!(mm_pair(found, n).unwrap(), (a, b));
                    for i in (0..n).filter(|&i| i != k && i != m) {
                        assert_eq!(row_type(&r, i).unwrap(), RowType::GiftRow(k, m));
                    }
                }
            }
        }
        assert_eq!(distinct.len(), 4 * n * (n - 1), "n={n}");
    }
}
