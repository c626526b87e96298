use std::collections::BTreeSet;

use proptest::prelude::*;

use super::*;

const BOUND: u64 = 100_000;

/// Terms of a sequence in [0, bound] by direct iteration.
fn brute_parith(p: &PArithSeq, bound: u64) -> BTreeSet<u64> {
    let mut out = BTreeSet::new();
    let hi = rat(bound as i64);
    for n in 0..64u64 {
        let v = p.value(n);
        if v.is_integer() && !v.is_negative() && v <= hi {
            out.insert(v.to_integer().to_u64().unwrap());
        }
        if p.is_singleton() {
            break;
        }
    }
    out
}

fn brute_ap(a: &ArithProg, bound: u64) -> BTreeSet<u64> {
    (0..=bound).filter(|&x| if a.m == 0 { x == a.l } else { x >= a.l && (x - a.l).is_multiple_of(a.m) }).collect()
}

fn pa(a: (i64, i64), b: (i64, i64), k: u32, p: u64) -> PArithSeq {
    PArithSeq::new(rat_frac(a.0, a.1), rat_frac(b.0, b.1), k, p)
}

#[test]
fn ap_crt() {
    let x = ArithProg::new(4, 1).intersect(&ArithProg::new(6, 3)).unwrap();
    assert_eq!(x, ArithProg::new(12, 9));
    assert!(ArithProg::new(4, 1).intersect(&ArithProg::new(6, 2)).is_none());
}

#[test]
fn ap_with_powers_of_three() {
    let s = intersect_ap_parith(&ArithProg::new(8, 1), &pa((1, 1), (0, 1), 1, 3));
    assert_eq!(s.parith, vec![pa((1, 1), (0, 1), 2, 3)]);
    assert!(s.finite.is_empty() && s.aps.is_empty());
}

#[test]
fn same_shift_sequences() {
    let s = intersect_parith(&pa((2, 1), (0, 1), 1, 3), &pa((2, 1), (0, 1), 2, 3));
    assert_eq!(s.parith, vec![pa((2, 1), (0, 1), 2, 3)]);
}

#[test]
fn distinct_shift_sequences_are_finite() {
    // 2^n + 1 and 2^m + 3 meet only at 5 = 4 + 1 = 2 + 3
    let s = intersect_parith(&pa((1, 1), (1, 1), 1, 2), &pa((1, 1), (3, 1), 1, 2));
    assert_eq!(s.finite, BTreeSet::from([5]));
    assert!(s.parith.is_empty());
}

#[test]
fn clip_quarter_powers() {
    // (4^n - 1)/3 is integral for every n
    let s = pa((1, 3), (-1, 3), 2, 2).clip();
    assert_eq!(s.parith, vec![pa((1, 3), (-1, 3), 2, 2)]);
    // (2^n - 1)/3 is integral for even n only
    let s = pa((1, 3), (-1, 3), 1, 2).clip();
    assert_eq!(s.parith, vec![pa((1, 3), (-1, 3), 2, 2)]);
    // 5 - 2^n: finitely many naturals
    let s = pa((-1, 1), (5, 1), 1, 2).clip();
    assert_eq!(s.finite, BTreeSet::from([1, 3, 4]));
}

#[test]
fn canonical_merges() {
    let s = IndexSet { aps: vec![ArithProg::new(2, 0), ArithProg::new(2, 1)], ..Default::default() }.canonicalize();
    assert_eq!(s.aps, vec![ArithProg::new(1, 0)]);
    let s = IndexSet::from_finite([0, 3]).union(&IndexSet::from_ap(ArithProg::new(3, 6)));
    assert_eq!(s.aps, vec![ArithProg::new(3, 0)]);
    assert!(s.finite.is_empty());
    let s = IndexSet::from_finite([1, 7]).union(&IndexSet::from_ap(ArithProg::new(2, 1)));
    assert_eq!(s.aps, vec![ArithProg::new(2, 1)]);
    assert!(s.finite.is_empty());
}

#[test]
fn json_forms() {
    let v = serde_json::to_value(ArithProg::new(3, 1)).unwrap();
    assert_eq!(v, serde_json::json!({"type": "ap", "m": 3, "l": 1}));
    let v = serde_json::to_value(pa((1, 3), (-1, 3), 2, 2)).unwrap();
    assert_eq!(v, serde_json::json!({"type": "parith", "a": "1/3", "b": "-1/3", "k": 2, "p": 2}));
}

fn arb_ap() -> impl Strategy<Value = ArithProg> {
    (0u64..30, 0u64..60).prop_map(|(m, l)| ArithProg::new(m, l))
}

fn arb_parith() -> impl Strategy<Value = PArithSeq> {
    (
        prop::sample::select(vec![2u64, 3, 5]),
        -6i64..7,
        1i64..10,
        -40i64..41,
        1i64..10,
        0u32..4,
    )
        .prop_map(|(p, an, ad, bn, bd, k)| PArithSeq::new(rat_frac(an, ad), rat_frac(bn, bd), k, p))
}

fn arb_parith_p(p: u64) -> impl Strategy<Value = PArithSeq> {
    (-6i64..7, 1i64..10, -40i64..41, 1i64..10, 0u32..4)
        .prop_map(move |(an, ad, bn, bd, k)| PArithSeq::new(rat_frac(an, ad), rat_frac(bn, bd), k, p))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn ap_ap_matches_brute(a in arb_ap(), b in arb_ap()) {
        let s = IndexSet::from_ap(a).intersect(&IndexSet::from_ap(b));
        let want: BTreeSet<u64> = brute_ap(&a, BOUND).intersection(&brute_ap(&b, BOUND)).copied().collect();
        prop_assert_eq!(s.members_up_to(BOUND), want);
    }

    #[test]
    fn ap_parith_matches_brute(a in arb_ap(), q in arb_parith()) {
        let s = intersect_ap_parith(&a, &q);
        let want: BTreeSet<u64> = brute_ap(&a, BOUND).intersection(&brute_parith(&q, BOUND)).copied().collect();
        prop_assert_eq!(s.members_up_to(BOUND), want);
    }

    #[test]
    fn parith_parith_matches_brute((q1, q2) in prop::sample::select(vec![2u64, 3]).prop_flat_map(|p| (arb_parith_p(p), arb_parith_p(p)))) {
        let s = intersect_parith(&q1, &q2);
        let want: BTreeSet<u64> = brute_parith(&q1, BOUND).intersection(&brute_parith(&q2, BOUND)).copied().collect();
        prop_assert_eq!(s.members_up_to(BOUND), want);
    }

    #[test]
    fn clip_matches_brute(q in arb_parith()) {
        let c = q.clip();
        prop_assert_eq!(c.members_up_to(BOUND), brute_parith(&q, BOUND));
        for r in &c.parith {
            prop_assert!(r.a.is_positive());
            for n in 0..40 {
                let v = r.value(n);
                prop_assert!(v.is_integer() && !v.is_negative());
            }
        }
    }

    #[test]
    fn membership_agrees_with_enumeration(q in arb_parith(), a in arb_ap(), x in 0u64..2000) {
        let s = q.clip().union(&IndexSet::from_ap(a));
        prop_assert_eq!(s.contains(x), s.members_up_to(2000).contains(&x));
        prop_assert_eq!(q.contains(x), brute_parith(&q, 2000).contains(&x));
    }

    #[test]
    fn canonicalize_preserves_members(q in arb_parith(), a in arb_ap(), b in arb_ap(), f in prop::collection::btree_set(0u64..200, 0..6)) {
        let raw = IndexSet { finite: f, aps: vec![a, b], parith: vec![q] };
        let want = {
            let mut w: BTreeSet<u64> = raw.finite.iter().copied().filter(|&x| x <= 5000).collect();
            w.extend(brute_ap(&a, 5000));
            w.extend(brute_ap(&b, 5000));
            w.extend(brute_parith(&raw.parith[0], 5000));
            w
        };
        let c = raw.canonicalize();
        prop_assert_eq!(c.members_up_to(5000), want);
        prop_assert_eq!(c.clone().canonicalize(), c);
    }
}
