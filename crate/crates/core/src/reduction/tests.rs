use super::*;
use crate::fp::Fp;
use crate::lattice::member_coset;
use crate::linalg::from_i64;
use crate::seq::{rat_frac, PArithSeq};
use proptest::prelude::*;

fn pt(p: u64, xs: &[&str]) -> TorusPoint {
    TorusPoint::parse(xs, Fp::new(p).unwrap()).unwrap()
}

fn ctx_for(p: u64, a: &[Vec<i64>], y: &[&str], alpha: &[&str]) -> GroupContext {
    let phi = MonomialAffineMap::new(from_i64(a), pt(p, y)).unwrap();
    GroupContext::new(&phi, &pt(p, alpha)).unwrap()
}

fn ex13(p: u64) -> GroupContext {
    ctx_for(p, &[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]], &["t", "1+t", "1-t"], &["1", "1", "1"])
}

fn ex15(p: u64) -> GroupContext {
    let q = p * p - 1;
    ctx_for(p, &[vec![1, 0], vec![0, 1]], &[&format!("t^{q}"), &format!("(1-t)^{q}")], &["1", "1"])
}

fn diagonal(alpha: &[&str]) -> GroupContext {
    ctx_for(5, &[vec![1, 0], vec![0, 1]], &["t", "t"], alpha)
}

fn bounds() -> SearchBounds {
    SearchBounds { n_max: 500, m_max: 30 }
}

#[test]
fn order_one_sequences() {
    for lambda in [1i64, 2, 3, -2] {
        let ctx = ctx_for(5, &[vec![lambda]], &["t"], &["t^2"]);
        assert_eq!(ctx.ell, 1);
        let s = build_claim_sequences(&ctx).unwrap();
        for n in 0..12u32 {
            let l = BigRational::from_integer(lambda.into());
            assert_eq!(s.v[0].eval(n as u64), l.clone().pow(n as i32));
            let u = if lambda == 1 {
                BigRational::from_integer(n.into())
            } else {
                (l.clone().pow(n as i32) - BigRational::one()) / (l - BigRational::one())
            };
            assert_eq!(s.u[0].eval(n as u64), u);
        }
    }
}

#[test]
fn three_factor_sequences() {
    let s = build_claim_sequences(&ex13(3)).unwrap();
    assert_eq!(s.v[0], Lrs::constant(BigRational::one()));
    for n in 0..20 {
        assert_eq!(s.u[0].eval(n), BigRational::from_integer(n.into()));
    }
}

#[test]
fn diagonal_coset_examples() {
    let ctx = diagonal(&["1", "1"]);
    let seqs = build_claim_sequences(&ctx).unwrap();
    // the diagonal subgroup {(g, g)} restricted to the support: generated by (t, t)
    // and constants (c, c)
    let mut ctx2 = ctx.clone();
    let gt = ctx2.encode(&pt(5, &["t", "t"])).unwrap();
    let gc = ctx2.encode(&pt(5, &["2", "2"])).unwrap();
    let h = Subgroup::new(vec![gt, gc], 2, ctx2.width(), ctx2.order()).unwrap();
    let r = PointRep::zero(2, ctx2.width());
    let out = solve_coset(&ctx2, &seqs, &r, &h, &bounds()).unwrap();
    assert_eq!(out.set, IndexSet::all());
    assert_eq!(out.status, CertStatus::Proved);

    let mut ctx = diagonal(&["t", "1"]);
    let seqs = build_claim_sequences(&ctx).unwrap();
    let gt = ctx.encode(&pt(5, &["t", "t"])).unwrap();
    let gc = ctx.encode(&pt(5, &["2", "2"])).unwrap();
    let h = Subgroup::new(vec![gt, gc], 2, ctx.width(), ctx.order()).unwrap();
    let out = solve_coset(&ctx, &seqs, &PointRep::zero(2, ctx.width()), &h, &bounds()).unwrap();
    assert!(out.set.is_empty());
    assert_eq!(out.status, CertStatus::Proved);
}

#[test]
fn three_factor_trivial_coset() {
    let mut ctx = ex13(3);
    let seqs = build_claim_sequences(&ctx).unwrap();
    let r = ctx.encode(&pt(3, &["t", "1+t", "1-t"])).unwrap();
    let h = Subgroup::trivial(3, ctx.width(), ctx.order());
    let out = solve_coset(&ctx, &seqs, &r, &h, &bounds()).unwrap();
    assert_eq!(out.set, IndexSet::from_finite([1]));
    assert_eq!(out.status, CertStatus::Proved);
}

#[test]
fn whole_group_coset() {
    let ctx = ex13(5);
    let seqs = build_claim_sequences(&ctx).unwrap();
    let w = ctx.width();
    let mut gens = Vec::new();
    for i in 0..3 {
        for j in 0..w {
            let mut g = PointRep::zero(3, w);
            g.expo[i][j] = BigInt::one();
            gens.push(g);
        }
        let mut g = PointRep::zero(3, w);
        g.tors[i] = BigInt::one();
        gens.push(g);
    }
    let h = Subgroup::new(gens, 3, w, ctx.order()).unwrap();
    let out = solve_coset(&ctx, &seqs, &PointRep::zero(3, w), &h, &bounds()).unwrap();
    assert_eq!(out.set, IndexSet::all());
}

fn ex15_forbit(p: u64, k: u32) -> Solved {
    let mut ctx = ex15(p);
    let seqs = build_claim_sequences(&ctx).unwrap();
    let r1 = ctx.encode(&pt(p, &["1/t", "1/(1-t)"])).unwrap();
    let r2 = ctx.encode(&pt(p, &["t", "1-t"])).unwrap();
    solve_forbit(&ctx, &seqs, &r1, &r2, k, &bounds()).unwrap()
}

#[test]
fn translation_forbit() {
    for p in [2u64, 3] {
        let q = (p * p - 1) as i64;
        let want = IndexSet::from_parith(&PArithSeq::new(rat_frac(1, q), rat_frac(-1, q), 2, p));
        for k in [1, 2] {
            let out = ex15_forbit(p, k);
            assert_eq!(out.status, CertStatus::Proved, "p={p} k={k}");
            assert!(out.set.equality_up_to(&want, 100_000), "p={p} k={k}: {}", out.set);
        }
        assert_eq!(ex15_forbit(p, 2).set, want);
    }
}

#[test]
fn identity_r2_is_trivial_coset() {
    let mut ctx = ex13(3);
    let seqs = build_claim_sequences(&ctx).unwrap();
    let r1 = ctx.encode(&pt(3, &["t^4", "(1+t)^4", "(1-t)^4"])).unwrap();
    let r2 = PointRep::zero(3, ctx.width());
    let h = Subgroup::trivial(3, ctx.width(), ctx.order());
    for k in [0, 1, 3] {
        let a = solve_forbit(&ctx, &seqs, &r1, &r2, k, &bounds()).unwrap();
        let b = solve_coset(&ctx, &seqs, &r1, &h, &bounds()).unwrap();
        assert_eq!(a.set, b.set);
        assert_eq!(a.set, IndexSet::from_finite([4]));
    }
}

#[test]
fn two_infinite_orbits_rejected() {
    let mut ctx = ex13(3);
    let seqs = build_claim_sequences(&ctx).unwrap();
    let r = ctx.encode(&pt(3, &["1", "1", "1"])).unwrap();
    let q1 = ctx.encode(&pt(3, &["t", "1+t", "1-t"])).unwrap();
    let fset = FSetInput::OrbitProduct { r, factors: vec![q1.clone(), q1], k: 1 };
    assert!(matches!(solve_fset(&ctx, &seqs, &fset, &bounds()), Err(Error::Unsupported(_))));
}

#[test]
fn simplify_examples() {
    let hits: BTreeSet<u64> = (0..20).collect();
    let s = IndexSet::all().union(&IndexSet::from_finite([3]));
    assert_eq!(simplify_if_infinite_ap(&s, &hits, 1000, 5, |_| Ok(true)).unwrap(), IndexSet::all());
    let odd: BTreeSet<u64> = (0..20).filter(|n| n % 2 == 1).collect();
    let s = IndexSet::from_ap(ArithProg::new(2, 1));
    let got = simplify_if_infinite_ap(&s, &odd, 1000, 5, |n| Ok(n % 2 == 1)).unwrap();
    assert_eq!(got, IndexSet::from_ap(ArithProg::new(2, 1)));
    let fin = IndexSet::from_finite([1, 4]);
    assert_eq!(simplify_if_infinite_ap(&fin, &[1, 4].into(), 1000, 5, |_| Ok(true)).unwrap(), fin);
}

#[test]
fn preperiodic_rotation() {
    // x -> y, y -> 1/x has period 4
    let s = preperiodic_structure(0, 4, |n| Ok(n % 4 == 2)).unwrap();
    assert_eq!(s, IndexSet::from_ap(ArithProg::new(4, 2)));
}

/// Direct check of the F-orbit condition: some m with W_n = R1 + p^{km} R2.
fn in_forbit(ctx: &GroupContext, w: &PointRep, r1: &PointRep, r2: &PointRep, k: u32, m_max: u32) -> bool {
    let p = BigInt::from(ctx.p());
    (0..=m_max).any(|m| {
        let target = r1.add(&r2.scale(&Pow::pow(&p, k * m)));
        member_coset(w, &target, &Subgroup::trivial(ctx.dim(), ctx.width(), ctx.order())).unwrap().is_some()
    })
}

#[test]
fn forbit_agrees_with_scan() {
    let mut ctx = ex15(2);
    let seqs = build_claim_sequences(&ctx).unwrap();
    let r1 = ctx.encode(&pt(2, &["1/t", "1/(1-t)"])).unwrap();
    let r2 = ctx.encode(&pt(2, &["t", "1-t"])).unwrap();
    let out = solve_forbit(&ctx, &seqs, &r1, &r2, 1, &bounds()).unwrap();
    for n in 0..=500 {
        let w = ctx.orbit_point(n);
        assert_eq!(out.set.contains(n), in_forbit(&ctx, &w, &r1, &r2, 1, 12), "n={n}");
    }
}

fn random_map() -> impl Strategy<Value = (u64, usize, Vec<i64>, Vec<usize>, Vec<usize>)> {
    (prop::sample::select(vec![2u64, 3, 5, 7]), 1usize..=3).prop_flat_map(|(p, n)| {
        (
            Just(p),
            Just(n),
            prop::collection::vec(-2i64..=2, n * n),
            prop::collection::vec(0usize..6, n),
            prop::collection::vec(0usize..6, n),
        )
    })
}

const ATOMS: [&str; 6] = ["t", "1+t", "2", "t^2+1", "1/t", "t/(1+t^2)"];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(25))]

    #[test]
    fn reconstruction_matches_iteration((p, n, a, ys, xs) in random_map()) {
        let rows: Vec<Vec<i64>> = a.chunks(n).map(|r| r.to_vec()).collect();
        let atom = |i: usize| if p == 2 && ATOMS[i] == "2" { "t+1" } else { ATOMS[i] };
        let y: Vec<&str> = ys.iter().map(|&i| atom(i)).collect();
        let x: Vec<&str> = xs.iter().map(|&i| atom(i)).collect();
        let Ok(phi) = MonomialAffineMap::new(from_i64(&rows), pt(p, &y)) else { return Ok(()) };
        let Ok(ctx) = GroupContext::new(&phi, &pt(p, &x)) else { return Ok(()) };
        let seqs = build_claim_sequences(&ctx).unwrap();
        let order = ctx.order();
        for m in 0..=60u64 {
            prop_assert_eq!(seqs.reconstruct(&ctx, m).normalized(order), ctx.orbit_point(m).padded(ctx.width()));
        }
    }
}

#[test]
fn inverse_r2_flips_sign() {
    // (p²-1)n = -1 - p^{km} has no solution in N₀; with R1 inverted too the
    // orbit condition becomes -(p²-1)n = 1 - p^{km}, i.e. the original set
    let p = 2;
    let mut ctx = ex15(p);
    let seqs = build_claim_sequences(&ctx).unwrap();
    let r1 = ctx.encode(&pt(p, &["1/t", "1/(1-t)"])).unwrap();
    let r2 = ctx.encode(&pt(p, &["t", "1-t"])).unwrap();
    let out = solve_forbit(&ctx, &seqs, &r1, &r2.neg(), 2, &bounds()).unwrap();
    assert!(out.set.is_empty());
    let mut ctx_inv = ctx_for(p, &[vec![1, 0], vec![0, 1]], &["1/t^3", "1/(1-t)^3"], &["1", "1"]);
    let seqs_inv = build_claim_sequences(&ctx_inv).unwrap();
    let r1_inv = ctx_inv.encode(&pt(p, &["t", "1-t"])).unwrap();
    let out_inv = solve_forbit(&ctx_inv, &seqs_inv, &r1_inv, &r2.neg(), 2, &bounds()).unwrap();
    assert_eq!(out_inv.set, ex15_forbit(p, 2).set);
}
