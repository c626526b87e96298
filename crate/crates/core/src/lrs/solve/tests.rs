use std::collections::BTreeSet;

use proptest::prelude::*;

use super::*;
use crate::seq::rat_frac;

fn bounds() -> SearchBounds {
    SearchBounds::default()
}

fn fib() -> Lrs {
    Lrs::from_ints(&[-1, -1], &[0, 1]).unwrap()
}

#[test]
fn fibonacci_equals_one() {
    let (s, st) = solve_eq_const(&fib(), &rat(1), &bounds());
    assert_eq!(s, IndexSet::from_finite([1, 2]));
    assert_eq!(st, CertStatus::Proved);
}

#[test]
fn constant_sequence() {
    let (s, st) = solve_eq_const(&Lrs::constant(rat(7)), &rat(7), &bounds());
    assert_eq!(s, IndexSet::all());
    assert_eq!(st, CertStatus::Proved);
}

#[test]
fn two_to_n_minus_n_minus_one() {
    // roots 2, 1, 1: x^3 - 4x^2 + 5x - 2
    let u = Lrs::from_ints(&[2, -5, 4], &[0, 0, 1]).unwrap();
    let (s, st) = solve_eq_const(&u, &rat(0), &bounds());
    assert_eq!(s, IndexSet::from_finite([0, 1]));
    assert_eq!(st, CertStatus::Proved);
}

#[test]
fn alternating_zero_set() {
    // 2^n + (-2)^n vanishes exactly at odd n
    let u = Lrs::from_ints(&[-4, 0], &[2, 0]).unwrap();
    let (s, st) = solve_eq_const(&u, &rat(0), &bounds());
    assert_eq!(s, IndexSet::from_ap(ArithProg::new(2, 1)));
    assert_eq!(st, CertStatus::Proved);
}

#[test]
fn poly_power_examples() {
    let x = QPoly::x();
    let (s, st) = poly_power_form(&x, &rat_frac(1, 3), &rat_frac(-1, 3), 2, 2, &bounds()).unwrap();
    assert_eq!(s.parith, vec![PArithSeq::new(rat_frac(1, 3), rat_frac(-1, 3), 2, 2)]);
    assert_eq!(st, CertStatus::Proved);

    let x2 = QPoly::from_ints(&[0, 0, 1]);
    let (s, st) = poly_power_form(&x2, &rat(1), &rat(0), 2, 3, &bounds()).unwrap();
    assert_eq!(s.parith, vec![PArithSeq::new(rat(1), rat(0), 1, 3)]);
    assert_eq!(st, CertStatus::Proved);

    let x2x = QPoly::from_ints(&[0, 1, 1]);
    let (s, st) = poly_power_form(&x2x, &rat(1), &rat(0), 1, 2, &bounds()).unwrap();
    assert_eq!(s, IndexSet::from_finite([1]));
    assert_eq!(st, CertStatus::VerifiedToBound(10_000));

    assert!(poly_power_form(&x, &rat(0), &rat(1), 1, 2, &bounds()).is_err());
}

#[test]
fn parith_examples() {
    let four = Lrs::from_ints(&[-4], &[1]).unwrap();
    let (s, st) = solve_eq_parith(&four, &rat(1), &rat(0), 2, 2, &bounds()).unwrap();
    assert_eq!(s, IndexSet::all());
    assert_eq!(st, CertStatus::Proved);

    let n = Lrs::from_ints(&[1, -2], &[0, 1]).unwrap();
    let (s, st) = solve_eq_parith(&n, &rat_frac(1, 3), &rat_frac(-1, 3), 2, 2, &bounds()).unwrap();
    assert_eq!(s.parith, vec![PArithSeq::new(rat_frac(1, 3), rat_frac(-1, 3), 2, 2)]);
    assert!(s.finite.is_empty() && s.aps.is_empty());
    assert_eq!(st, CertStatus::Proved);

    let (s, st) = solve_eq_parith(&fib(), &rat(1), &rat(0), 1, 2, &bounds()).unwrap();
    assert_eq!(s, IndexSet::from_finite([1, 2, 3, 6]));
    assert_eq!(st, CertStatus::VerifiedToBound(10_000));
}

#[test]
fn negative_power_root() {
    // u_n = 3 (-2)^n hits 3 * 4^m exactly at even n
    let u = Lrs::from_ints(&[2], &[3]).unwrap();
    let (s, st) = solve_eq_parith(&u, &rat(3), &rat(0), 2, 2, &bounds()).unwrap();
    assert_eq!(s, IndexSet::from_ap(ArithProg::new(2, 0)));
    assert_eq!(st, CertStatus::Proved);
    // u_n = 2^n + 5 against 8^m + 5
    let u = Lrs::from_ints(&[2, -3], &[6, 7]).unwrap();
    let (s, st) = solve_eq_parith(&u, &rat(1), &rat(5), 3, 2, &bounds()).unwrap();
    assert_eq!(s, IndexSet::from_ap(ArithProg::new(3, 0)));
    assert_eq!(st, CertStatus::Proved);
}

fn arb_lrs() -> impl Strategy<Value = Lrs> {
    (1usize..=4)
        .prop_flat_map(|m| (prop::collection::vec(-3i64..=3, m), prop::collection::vec(-5i64..=5, m)))
        .prop_map(|(c, i)| Lrs::from_ints(&c, &i).unwrap())
}

fn brute_const(u: &Lrs, c: &BigRational, n: u64) -> BTreeSet<u64> {
    u.terms(n as usize + 1).iter().enumerate().filter(|(_, v)| *v == c).map(|(i, _)| i as u64).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn solve_const_matches_brute(u in arb_lrs(), c in -3i64..=3) {
        let c = rat(c);
        let small = SearchBounds { n_max: 2_000, m_max: 60 };
        let (s, st) = solve_eq_const(&u, &c, &small);
        let check = if st.is_proved() { 4_000 } else { 2_000 };
        prop_assert_eq!(s.members_up_to(check), brute_const(&u, &c, check));
    }

    #[test]
    fn poly_power_matches_brute(coeffs in prop::collection::vec(-3i64..=3, 2..=3), a in 1i64..=3, b in -3i64..=3, k in 1u32..=2, p in prop::sample::select(vec![2u64, 3])) {
        let poly = QPoly::from_ints(&coeffs);
        prop_assume!(poly.degree().unwrap_or(0) >= 1);
        let small = SearchBounds { n_max: 10_000, m_max: 60 };
        let (s, _) = poly_power_form(&poly, &rat(a), &rat(b), k, p, &small).unwrap();
        let target = PArithSeq::new(rat(a), rat(b), k, p);
        let want: BTreeSet<u64> = (0..=2_000u64)
            .filter(|&n| {
                let v = poly.eval(&rat(n as i64));
                v.is_integer() && target.contains_big(&v.to_integer())
            })
            .collect();
        prop_assert_eq!(s.members_up_to(2_000), want);
    }
}
