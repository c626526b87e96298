//! Finite unions of arithmetic progressions and p-arithmetic sequences,
//! closed under intersection, with exact membership.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

/// {m j + l : j >= 0}; m = 0 is the singleton {l}. An offset l >= m is a
/// start point: the progression then omits the smaller members of its class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ArithProg {
    pub m: u64,
    pub l: u64,
}

impl ArithProg {
    pub fn new(m: u64, l: u64) -> Self {
        ArithProg { m, l }
    }

    pub fn contains(&self, x: u64) -> bool {
        if self.m == 0 {
            x == self.l
        } else {
            x >= self.l && (x - self.l).is_multiple_of(self.m)
        }
    }

    /// Intersection by the Chinese remainder theorem.
    pub fn intersect(&self, other: &ArithProg) -> Option<ArithProg> {
        match (self.m, other.m) {
            (0, _) => other.contains(self.l).then_some(*self),
            (_, 0) => self.contains(other.l).then_some(*other),
            (m1, m2) => {
                let (l1, l2) = (self.l as i128, other.l as i128);
                let g = m1.gcd(&m2) as i128;
                if (l2 - l1).rem_euclid(g) != 0 {
                    return None;
                }
                let (m1, m2) = (m1 as i128, m2 as i128);
                let lcm = m1 / g * m2;
                // x = l1 + m1 * s with m1 s = l2 - l1 (mod m2)
                let (mg, ng) = (m1 / g, m2 / g);
                let inv = mod_inverse(mg.rem_euclid(ng), ng);
                let s = ((l2 - l1) / g).rem_euclid(ng) * inv % ng.max(1);
                let x0 = (l1 + m1 * s).rem_euclid(lcm);
                let lo = l1.max(l2);
                let start = if x0 >= lo { x0 } else { x0 + (lo - x0 + lcm - 1) / lcm * lcm };
                Some(ArithProg::new(u64::try_from(lcm).ok()?, u64::try_from(start).ok()?))
            }
        }
    }

    /// Whether every member of `self` is in `other`.
    pub fn subset_of(&self, other: &ArithProg) -> bool {
        if self.m == 0 {
            return other.contains(self.l);
        }
        other.m != 0 && self.m.is_multiple_of(other.m) && other.contains(self.l)
    }
}

fn mod_inverse(a: i128, m: i128) -> i128 {
    if m == 1 {
        return 0;
    }
    let (mut r0, mut r1, mut s0, mut s1) = (a, m, 1i128, 0i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    debug_assert_eq!(r0, 1);
    s0.rem_euclid(m)
}

/// {a p^{k n} + b : n >= 0}; a singleton when a = 0 or k = 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PArithSeq {
    pub a: BigRational,
    pub b: BigRational,
    pub k: u32,
    pub p: u64,
}

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn rat_frac(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl PArithSeq {
    pub fn new(a: BigRational, b: BigRational, k: u32, p: u64) -> Self {
        PArithSeq { a, b, k, p }
    }

    pub fn is_singleton(&self) -> bool {
        self.a.is_zero() || self.k == 0
    }

    fn ratio(&self) -> BigInt {
        BigInt::from(self.p).pow(self.k)
    }

    pub fn value(&self, n: u64) -> BigRational {
        let q = self.ratio().pow(n as u32);
        &self.a * BigRational::from_integer(q) + &self.b
    }

    /// Exact membership of an integer: (x - b)/a must be p^{kn}.
    pub fn contains_big(&self, x: &BigInt) -> bool {
        let x = BigRational::from_integer(x.clone());
        if self.is_singleton() {
            return x == &self.a + &self.b;
        }
        let y = (x - &self.b) / &self.a;
        if !y.is_integer() || !y.is_positive() {
            return false;
        }
        let mut y = y.to_integer();
        let p = BigInt::from(self.p);
        let mut v = 0u64;
        while y.is_multiple_of(&p) {
            y /= &p;
            v += 1;
        }
        y.is_one() && v.is_multiple_of(self.k as u64)
    }

    pub fn contains(&self, x: u64) -> bool {
        self.contains_big(&BigInt::from(x))
    }

    /// The subsequence n = r + stride * j.
    fn subsequence(&self, r: u64, stride: u64) -> PArithSeq {
        let a = &self.a * BigRational::from_integer(self.ratio().pow(r as u32));
        PArithSeq::new(a, self.b.clone(), self.k * stride as u32, self.p)
    }

    /// Integral form: L * value_n = A q^n + B with q = p^k.
    fn integral_form(&self) -> (BigInt, BigInt, BigInt) {
        let l = self.a.denom().lcm(self.b.denom());
        let a = (&self.a * BigRational::from_integer(l.clone())).to_integer();
        let b = (&self.b * BigRational::from_integer(l.clone())).to_integer();
        (a, b, l)
    }

    /// Exact {values} ∩ N₀ as finite values plus p-arithmetic pieces whose
    /// every term is a natural number and whose `a` is positive.
    pub fn clip(&self) -> IndexSet {
        self.refine(&BigInt::one(), &BigInt::zero(), &BigRational::zero()).canonicalize()
    }

    /// Terms that are integers congruent to `l` mod `m` and at least `lower`.
    fn refine(&self, m: &BigInt, l: &BigInt, lower: &BigRational) -> IndexSet {
        let mut out = IndexSet::empty();
        let ok = |v: &BigRational| -> bool {
            v.is_integer() && v >= lower && !v.is_negative() && (v.to_integer() - l).is_multiple_of(m)
        };
        if self.is_singleton() {
            let v = &self.a + &self.b;
            if ok(&v) {
                out.push_value(v.to_integer());
            }
            return out;
        }
        let (a, b, den) = self.integral_form();
        let modulus = m * &den;
        let target = (l * &den).mod_floor(&modulus);
        let (cycle, mu) = residue_cycle(&self.ratio(), &modulus);
        let pi = cycle.len() as u64 - mu;
        let hits = |s: &BigInt| (&a * s + &b - &target).is_multiple_of(&modulus);
        for n in 0..mu {
            let v = self.value(n);
            if ok(&v) {
                out.push_value(v.to_integer());
            }
        }
        for r in mu..mu + pi {
            if !hits(&cycle[r as usize]) {
                continue;
            }
            let sub = self.subsequence(r, pi);
            if sub.a.is_positive() {
                // increasing: skip the finitely many terms below the bound
                let mut j = 0u64;
                while sub.value(j) < *lower || sub.value(j).is_negative() {
                    j += 1;
                }
                out.parith.push(sub.subsequence(j, 1));
            } else {
                let mut j = 0u64;
                loop {
                    let v = sub.value(j);
                    if v < *lower || v.is_negative() {
                        break;
                    }
                    out.push_value(v.to_integer());
                    j += 1;
                }
            }
        }
        out
    }
}

/// Powers 1, q, q^2, ... mod `modulus` until the first repeat: returns the
/// sequence and the preperiod.
fn residue_cycle(q: &BigInt, modulus: &BigInt) -> (Vec<BigInt>, u64) {
    let mut seen: HashMap<BigInt, u64> = HashMap::new();
    let mut seq = Vec::new();
    let mut x = BigInt::one().mod_floor(modulus);
    loop {
        if let Some(&mu) = seen.get(&x) {
            return (seq, mu);
        }
        seen.insert(x.clone(), seq.len() as u64);
        seq.push(x.clone());
        x = (&x * q).mod_floor(modulus);
    }
}

/// Finite set ∪ progressions ∪ p-arithmetic sequences, all inside N₀.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IndexSet {
    pub finite: BTreeSet<u64>,
    pub aps: Vec<ArithProg>,
    pub parith: Vec<PArithSeq>,
}

impl IndexSet {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn all() -> Self {
        Self::from_ap(ArithProg::new(1, 0))
    }

    pub fn from_ap(ap: ArithProg) -> Self {
        IndexSet { aps: vec![ap], ..Self::default() }.canonicalize()
    }

    pub fn from_finite(values: impl IntoIterator<Item = u64>) -> Self {
        IndexSet { finite: values.into_iter().collect(), ..Self::default() }
    }

    pub fn from_parith(p: &PArithSeq) -> Self {
        p.clip()
    }

    /// Adds a natural number; values beyond u64 stay as singleton sequences.
    fn push_value(&mut self, v: BigInt) {
        match v.to_u64() {
            Some(x) => {
                self.finite.insert(x);
            }
            None => self.parith.push(PArithSeq::new(BigRational::zero(), BigRational::from_integer(v), 0, 2)),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.finite.is_empty() && self.aps.is_empty() && self.parith.is_empty()
    }

    /// True when the set has no infinite component.
    pub fn is_finite(&self) -> bool {
        self.aps.iter().all(|a| a.m == 0) && self.parith.iter().all(PArithSeq::is_singleton)
    }

    pub fn contains(&self, x: u64) -> bool {
        self.finite.contains(&x) || self.aps.iter().any(|a| a.contains(x)) || self.parith.iter().any(|p| p.contains(x))
    }

    /// All members in [0, bound], enumerated from the components.
    pub fn members_up_to(&self, bound: u64) -> BTreeSet<u64> {
        let mut out: BTreeSet<u64> = self.finite.range(..=bound).copied().collect();
        for ap in &self.aps {
            if ap.m == 0 {
                if ap.l <= bound {
                    out.insert(ap.l);
                }
                continue;
            }
            let mut x = ap.l;
            while x <= bound {
                out.insert(x);
                x += ap.m;
            }
        }
        let hi = rat(bound as i64);
        for p in &self.parith {
            if p.is_singleton() {
                let v = &p.a + &p.b;
                if v.is_integer() && !v.is_negative() && v <= hi {
                    out.insert(v.to_integer().to_u64().unwrap());
                }
                continue;
            }
            let mut n = 0;
            loop {
                let v = p.value(n);
                let decreasing = p.a.is_negative();
                if (!decreasing && v > hi) || (decreasing && v.is_negative()) {
                    break;
                }
                if v.is_integer() && !v.is_negative() && v <= hi {
                    out.insert(v.to_integer().to_u64().unwrap());
                }
                n += 1;
            }
        }
        out
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.finite.extend(other.finite.iter().copied());
        out.aps.extend(other.aps.iter().copied());
        out.parith.extend(other.parith.iter().cloned());
        out.canonicalize()
    }

    pub fn intersect(&self, other: &Self) -> Self {
        let (x, y) = (self.clone().canonicalize(), other.clone().canonicalize());
        let mut out = IndexSet::empty();
        for &v in &x.finite {
            if y.contains(v) {
                out.finite.insert(v);
            }
        }
        for &v in &y.finite {
            if x.contains(v) {
                out.finite.insert(v);
            }
        }
        for a in &x.aps {
            for b in &y.aps {
                if let Some(c) = a.intersect(b) {
                    out.aps.push(c);
                }
            }
            for q in &y.parith {
                out = out.union(&intersect_ap_parith(a, q));
            }
        }
        for q in &x.parith {
            for b in &y.aps {
                out = out.union(&intersect_ap_parith(b, q));
            }
            for r in &y.parith {
                out = out.union(&intersect_parith(q, r));
            }
        }
        out.canonicalize()
    }

    /// Image under n ↦ c n + d with c >= 1.
    pub fn affine_image(&self, c: u64, d: u64) -> Self {
        let cr = rat(c as i64);
        let dr = rat(d as i64);
        IndexSet {
            finite: self.finite.iter().map(|&x| c * x + d).collect(),
            aps: self.aps.iter().map(|a| ArithProg::new(c * a.m, c * a.l + d)).collect(),
            parith: self
                .parith
                .iter()
                .map(|p| PArithSeq::new(&p.a * &cr, &p.b * &cr + &dr, p.k, p.p))
                .collect(),
        }
        .canonicalize()
    }

    /// Members that are >= `lo`.
    pub fn at_least(&self, lo: u64) -> Self {
        self.intersect(&IndexSet { aps: vec![ArithProg::new(1, lo)], ..Self::default() })
    }

    /// Normal form: singletons to the finite part, contained components
    /// removed, complete residue systems merged, components sorted.
    pub fn canonicalize(mut self) -> Self {
        // clip p-arithmetic pieces and move singletons to the finite part
        let pieces = std::mem::take(&mut self.parith);
        for p in pieces {
            if p.is_singleton() {
                let v = &p.a + &p.b;
                if v.is_integer() && !v.is_negative() {
                    self.push_value(v.to_integer());
                }
            } else if is_clipped(&p) {
                self.parith.push(p);
            } else {
                let c = p.refine(&BigInt::one(), &BigInt::zero(), &BigRational::zero());
                self.finite.extend(c.finite);
                self.parith.extend(c.parith);
            }
        }
        self.parith.sort_by(|x, y| (x.k, &x.a, &x.b).cmp(&(y.k, &y.a, &y.b)));
        self.parith.dedup();
        let aps = std::mem::take(&mut self.aps);
        for a in aps {
            if a.m == 0 {
                self.finite.insert(a.l);
            } else if !self.aps.contains(&a) {
                self.aps.push(a);
            }
        }
        self.merge_aps();
        // drop sequences inside progressions or other sequences
        let aps = self.aps.clone();
        let all = self.parith.clone();
        self.parith = all
            .iter()
            .enumerate()
            .filter(|(i, q)| {
                q.is_singleton()
                    || !(aps.iter().any(|a| parith_subset_of_ap(q, a))
                        || all.iter().enumerate().any(|(j, r)| {
                            j != *i && parith_subset(q, r) && (!parith_subset(r, q) || j < *i)
                        }))
            })
            .map(|(_, q)| q.clone())
            .collect();
        let aps = self.aps.clone();
        let parith = self.parith.clone();
        self.finite.retain(|&x| !aps.iter().any(|a| a.contains(x)) && !parith.iter().any(|q| q.contains(x)));
        self.aps.sort();
        self.parith.sort_by(|x, y| (x.k, &x.a, &x.b).cmp(&(y.k, &y.a, &y.b)));
        self
    }

    fn merge_aps(&mut self) {
        loop {
            let mut changed = false;
            // remove progressions contained in others
            let aps = self.aps.clone();
            let keep: Vec<ArithProg> = aps
                .iter()
                .enumerate()
                .filter(|(i, a)| !aps.iter().enumerate().any(|(j, b)| j != *i && a.subset_of(b) && (!b.subset_of(a) || j < *i)))
                .map(|(_, a)| *a)
                .collect();
            if keep.len() != self.aps.len() {
                self.aps = keep;
                changed = true;
            }
            // extend a progression backwards over finite members
            for a in self.aps.iter_mut() {
                while a.l >= a.m && self.finite.contains(&(a.l - a.m)) {
                    self.finite.remove(&(a.l - a.m));
                    a.l -= a.m;
                    changed = true;
                }
            }
            // merge complete residue systems: AP(m, r + d i) for all i -> AP(d, r)
            let mut by_m: HashMap<u64, BTreeSet<u64>> = HashMap::new();
            for a in &self.aps {
                if a.l < a.m {
                    by_m.entry(a.m).or_default().insert(a.l);
                }
            }
            let mut moduli: Vec<u64> = by_m.keys().copied().collect();
            moduli.sort();
            'outer: for m in moduli {
                let offs = &by_m[&m];
                for d in (1..m).filter(|d| m % d == 0) {
                    for r in 0..d {
                        if (r..m).step_by(d as usize).all(|x| offs.contains(&x)) {
                            self.aps.retain(|a| !(a.m == m && a.l < m && a.l % d == r));
                            self.aps.push(ArithProg::new(d, r));
                            changed = true;
                            break 'outer;
                        }
                    }
                }
            }
            if !changed {
                return;
            }
        }
    }

    /// Pointwise membership comparison on [0, bound].
    pub fn equality_up_to(&self, other: &Self, bound: u64) -> bool {
        self.members_up_to(bound) == other.members_up_to(bound)
    }
}

/// Whether every term (n >= 0) is an integer congruent to l mod m and at
/// least `lower`; requires a > 0 and k > 0, so the terms increase.
fn all_terms_satisfy(p: &PArithSeq, m: &BigInt, l: &BigInt, lower: &BigRational) -> bool {
    if !p.a.is_positive() || p.k == 0 || p.value(0) < *lower {
        return false;
    }
    let (a, b, den) = p.integral_form();
    let modulus = m * &den;
    let target = (l * &den).mod_floor(&modulus);
    let (cycle, _) = residue_cycle(&p.ratio(), &modulus);
    cycle.iter().all(|s| (&a * s + &b - &target).is_multiple_of(&modulus))
}

/// A sequence with positive a whose terms are all naturals.
fn is_clipped(p: &PArithSeq) -> bool {
    all_terms_satisfy(p, &BigInt::one(), &BigInt::zero(), &BigRational::zero())
}

/// P ⊆ AP.
fn parith_subset_of_ap(p: &PArithSeq, a: &ArithProg) -> bool {
    if p.is_singleton() {
        let v = &p.a + &p.b;
        return v.is_integer() && v.to_integer().to_u64().is_some_and(|x| a.contains(x));
    }
    a.m != 0 && all_terms_satisfy(p, &BigInt::from(a.m), &BigInt::from(a.l), &rat(a.l as i64))
}

/// P ⊆ Q for infinite sequences: same b and a_P / a_Q = p^e with the
/// exponents e + k_P n all multiples of k_Q.
fn parith_subset(p: &PArithSeq, q: &PArithSeq) -> bool {
    if p.is_singleton() || q.is_singleton() || p.b != q.b || p.p != q.p {
        return p.is_singleton() && {
            let v = &p.a + &p.b;
            v.is_integer() && q.contains_big(&v.to_integer())
        };
    }
    match power_ratio(&p.a, &q.a, p.p) {
        Some(e) if e >= 0 => e % q.k as i64 == 0 && p.k.is_multiple_of(q.k),
        _ => false,
    }
}

/// e with x / y = p^e, if any.
pub(crate) fn power_ratio(x: &BigRational, y: &BigRational, p: u64) -> Option<i64> {
    let r = x / y;
    if !r.is_positive() {
        return None;
    }
    let (mut n, mut d) = (r.numer().clone(), r.denom().clone());
    let pb = BigInt::from(p);
    let mut e = 0i64;
    while n.is_multiple_of(&pb) {
        n /= &pb;
        e += 1;
    }
    while d.is_multiple_of(&pb) {
        d /= &pb;
        e -= 1;
    }
    (n.is_one() && d.is_one()).then_some(e)
}

/// AP ∩ P, exact: the residues of p^{kn} modulo m·L are eventually
/// periodic, which splits n into classes that either always or never hit.
pub fn intersect_ap_parith(a: &ArithProg, p: &PArithSeq) -> IndexSet {
    if a.m == 0 {
        return if p.clip().contains(a.l) { IndexSet::from_finite([a.l]) } else { IndexSet::empty() };
    }
    let clipped = p.clip();
    let mut out = IndexSet::empty();
    for &x in &clipped.finite {
        if a.contains(x) {
            out.finite.insert(x);
        }
    }
    for q in &clipped.parith {
        let r = q.refine(&BigInt::from(a.m), &BigInt::from(a.l), &rat(a.l as i64));
        out.finite.extend(r.finite);
        out.parith.extend(r.parith);
    }
    out.canonicalize()
}

/// P1 ∩ P2 (same p), exact. Equal shifts reduce to a linear equation in
/// the exponents; distinct shifts leave at most three candidates fixed by
/// p-adic valuations.
pub fn intersect_parith(p1: &PArithSeq, p2: &PArithSeq) -> IndexSet {
    assert_eq!(p1.p, p2.p, "p-arithmetic sequences over different primes");
    let (c1, c2) = (p1.clip(), p2.clip());
    let mut out = IndexSet::empty();
    for &x in &c1.finite {
        if c2.contains(x) {
            out.finite.insert(x);
        }
    }
    for &x in &c2.finite {
        if c1.contains(x) {
            out.finite.insert(x);
        }
    }
    for q1 in &c1.parith {
        for q2 in &c2.parith {
            let r = intersect_infinite(q1, q2);
            out.finite.extend(r.finite);
            out.parith.extend(r.parith);
        }
        for &x in &c2.finite {
            if q1.contains(x) {
                out.finite.insert(x);
            }
        }
    }
    for q2 in &c2.parith {
        for &x in &c1.finite {
            if q2.contains(x) {
                out.finite.insert(x);
            }
        }
    }
    out.canonicalize()
}

/// Both arguments clipped (a > 0, k > 0).
fn intersect_infinite(q1: &PArithSeq, q2: &PArithSeq) -> IndexSet {
    let p = q1.p;
    let mut out = IndexSet::empty();
    if q1.b == q2.b {
        // a1 p^{k1 n1} = a2 p^{k2 n2}  <=>  k1 n1 = k2 n2 + e with a2/a1 = p^e
        let Some(e) = power_ratio(&q2.a, &q1.a, p) else { return out };
        let (k1, k2) = (q1.k as i64, q2.k as i64);
        let g = k1.gcd(&k2);
        if e.rem_euclid(g) != 0 {
            return out;
        }
        // smallest n1 >= 0 with k1 n1 - e >= 0 and k1 n1 = e (mod k2)
        let step = k2 / g;
        let mut n1 = 0i64;
        while (k1 * n1 - e).rem_euclid(k2) != 0 || k1 * n1 < e {
            n1 += 1;
            if n1 > step + e.abs() / k1.max(1) + 2 {
                return out;
            }
        }
        let start = q1.subsequence(n1 as u64, 1);
        out.parith.push(PArithSeq::new(start.a, start.b, (k1 * step) as u32, p));
        return out;
    }
    // a1 X - a2 Y = b2 - b1 with X = p^{x}, Y = p^{y}; integral form A X - B Y = C
    let l = q1.a.denom().lcm(q2.a.denom()).lcm(&(&q2.b - &q1.b).denom().clone());
    let lr = BigRational::from_integer(l);
    let a = (&q1.a * &lr).to_integer();
    let b = (&q2.a * &lr).to_integer();
    let c = ((&q2.b - &q1.b) * &lr).to_integer();
    let pb = BigInt::from(p);
    let val = |x: &BigInt| -> (i64, BigInt) {
        let mut x = x.clone();
        let mut v = 0;
        while x.is_multiple_of(&pb) {
            x /= &pb;
            v += 1;
        }
        (v, x)
    };
    let (va, a_unit) = val(&a);
    let (vb, b_unit) = val(&b);
    let (vc, _) = val(&c);
    let mut candidates = vec![(Some(vc - va), None), (None, Some(vc - vb))];
    let diff = &a_unit - &b_unit;
    if !diff.is_zero() {
        let (vd, _) = val(&diff);
        let w = vc - vd;
        candidates.push((Some(w - va), Some(w - vb)));
    }
    let pow = |e: i64| pb.pow(e as u32);
    for (x, y) in candidates {
        let (x, y) = match (x, y) {
            (Some(x), Some(y)) => (x, y),
            (Some(x), None) => {
                if x < 0 {
                    continue;
                }
                let rhs = &a * pow(x) - &c;
                if rhs.is_zero() || !rhs.is_multiple_of(&b) {
                    continue;
                }
                let (vy, unit) = val(&(rhs / &b));
                if !unit.is_one() {
                    continue;
                }
                (x, vy)
            }
            (None, Some(y)) => {
                if y < 0 {
                    continue;
                }
                let rhs = &b * pow(y) + &c;
                if rhs.is_zero() || !rhs.is_multiple_of(&a) {
                    continue;
                }
                let (vx, unit) = val(&(rhs / &a));
                if !unit.is_one() {
                    continue;
                }
                (vx, y)
            }
            (None, None) => unreachable!(),
        };
        if x < 0 || y < 0 || x % q1.k as i64 != 0 || y % q2.k as i64 != 0 {
            continue;
        }
        if &a * pow(x) - &b * pow(y) != c {
            continue;
        }
        let v = &q1.a * BigRational::from_integer(pow(x)) + &q1.b;
        out.push_value(v.to_integer());
    }
    out
}

pub fn clip_to_naturals(p: &PArithSeq) -> IndexSet {
    p.clip()
}

pub fn fmt_rat(x: &BigRational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

impl Serialize for ArithProg {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(3))?;
        m.serialize_entry("type", "ap")?;
        m.serialize_entry("m", &self.m)?;
        m.serialize_entry("l", &self.l)?;
        m.end()
    }
}

impl Serialize for PArithSeq {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(5))?;
        m.serialize_entry("type", "parith")?;
        m.serialize_entry("a", &fmt_rat(&self.a))?;
        m.serialize_entry("b", &fmt_rat(&self.b))?;
        m.serialize_entry("k", &self.k)?;
        m.serialize_entry("p", &self.p)?;
        m.end()
    }
}

impl Serialize for IndexSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(3))?;
        m.serialize_entry("finite", &self.finite)?;
        m.serialize_entry("aps", &self.aps)?;
        m.serialize_entry("parith", &self.parith)?;
        m.end()
    }
}

impl fmt::Display for ArithProg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.m == 0 {
            write!(f, "{{{}}}", self.l)
        } else {
            write!(f, "{{{}k + {} : k >= 0}}", self.m, self.l)
        }
    }
}

impl fmt::Display for PArithSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{({})*{}^({}n) + ({}) : n >= 0}}", fmt_rat(&self.a), self.p, self.k, fmt_rat(&self.b))
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if !self.finite.is_empty() {
            let v: Vec<String> = self.finite.iter().map(u64::to_string).collect();
            parts.push(format!("{{{}}}", v.join(", ")));
        }
        parts.extend(self.aps.iter().map(ToString::to_string));
        parts.extend(self.parith.iter().map(ToString::to_string));
        if parts.is_empty() {
            write!(f, "{{}}")
        } else {
            write!(f, "{}", parts.join(" ∪ "))
        }
    }
}

#[cfg(test)]
mod tests;
