//! Solving u_n = c and u_n = a p^{km} + b, with a status that says whether
//! the answer is proved or only checked up to a search bound.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use super::decompose::decompose_nondeg;
use super::qpoly::{rat, split_cyclotomic, QPoly};
use super::roots::{growth_cutoff, integer_roots};
use super::Lrs;
use crate::seq::{power_ratio, ArithProg, IndexSet, PArithSeq};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CertStatus {
    Proved,
    /// exhaustive only for indices n <= B
    VerifiedToBound(u64),
}

impl CertStatus {
    pub fn is_proved(self) -> bool {
        self == CertStatus::Proved
    }

    /// Status of a conjunction of answers.
    pub fn and(self, other: CertStatus) -> CertStatus {
        match (self, other) {
            (CertStatus::Proved, x) | (x, CertStatus::Proved) => x,
            (CertStatus::VerifiedToBound(a), CertStatus::VerifiedToBound(b)) => CertStatus::VerifiedToBound(a.min(b)),
        }
    }
}

impl fmt::Display for CertStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CertStatus::Proved => write!(f, "proved"),
            CertStatus::VerifiedToBound(b) => write!(f, "verified_to_bound({b})"),
        }
    }
}

impl Serialize for CertStatus {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBounds {
    pub n_max: u64,
    pub m_max: u32,
}

impl Default for SearchBounds {
    fn default() -> Self {
        SearchBounds { n_max: 10_000, m_max: 60 }
    }
}

/// The polynomial of degree < len(values) through (i, values[i]).
pub fn interpolate(values: &[BigRational]) -> QPoly {
    let n = values.len();
    let mut out = QPoly::zero();
    for (i, v) in values.iter().enumerate() {
        if v.is_zero() {
            continue;
        }
        let mut basis = QPoly::one();
        let mut den = BigRational::one();
        for j in 0..n {
            if j != i {
                basis = basis.mul(&QPoly::from_ints(&[-(j as i64), 1]));
                den *= rat(i as i64 - j as i64);
            }
        }
        out = out.add(&basis.scale(&(v / den)));
    }
    out
}

/// Polynomial P with u_n = P(n), when every characteristic root is 1.
fn polynomial_form(t: &Lrs) -> Option<QPoly> {
    let split = split_cyclotomic(&t.charpoly());
    let only_one = split.x_power == 0 && split.rest.degree() == Some(0) && split.cyclotomic.iter().all(|&(m, _)| m == 1);
    only_one.then(|| interpolate(t.init()))
}

/// Whether t is identically c: t - c satisfies a recurrence of order
/// order(t) + 1, so that many matching terms suffice.
fn identically(t: &Lrs, c: &BigRational) -> bool {
    t.terms(t.order() + 1).iter().all(|x| x == c)
}

/// {j <= to : pred(w_j)} by direct evaluation.
fn scan(w: &Lrs, to: u64, pred: impl Fn(&BigRational) -> bool) -> IndexSet {
    let terms = w.terms(to as usize + 1);
    IndexSet::from_finite(terms.iter().enumerate().filter(|(_, v)| pred(v)).map(|(j, _)| j as u64))
}

/// Solutions j of w_j = c for one non-degenerate section.
fn solve_section_const(w: &Lrs, c: &BigRational, jmax: u64, bound: u64) -> (IndexSet, CertStatus) {
    if w.order() == 0 {
        return if c.is_zero() { (IndexSet::all(), CertStatus::Proved) } else { (IndexSet::empty(), CertStatus::Proved) };
    }
    let (b, t) = w.strip_zero_roots();
    let head = scan(w, b as u64, |v| v == c).restrict_below(b as u64);
    let (tail, status) = solve_tail_const(&t, c, jmax.saturating_sub(b as u64), bound);
    (head.union(&tail.affine_image(1, b as u64)), status)
}

fn solve_tail_const(t: &Lrs, c: &BigRational, jmax: u64, bound: u64) -> (IndexSet, CertStatus) {
    if t.order() == 0 || identically(t, c) {
        let all = t.order() > 0 || c.is_zero();
        return (if all { IndexSet::all() } else { IndexSet::empty() }, CertStatus::Proved);
    }
    if let Some(poly) = polynomial_form(t) {
        let g = poly.sub(&QPoly::constant(c.clone()));
        let roots = integer_roots(&g).into_iter().filter_map(|n| n.to_u64());
        return (IndexSet::from_finite(roots), CertStatus::Proved);
    }
    if let Some(cut) = growth_cutoff(t, c) {
        return (scan(t, cut, |v| v == c).restrict_below(cut), CertStatus::Proved);
    }
    (scan(t, jmax, |v| v == c), CertStatus::VerifiedToBound(bound))
}

/// All n with u_n = c.
pub fn solve_eq_const(u: &Lrs, c: &BigRational, bounds: &SearchBounds) -> (IndexSet, CertStatus) {
    let split = decompose_nondeg(u);
    let m = split.modulus;
    let mut out = IndexSet::empty();
    let mut status = CertStatus::Proved;
    for s in &split.sections {
        let jmax = bounds.n_max.saturating_sub(s.offset) / m;
        let (set, st) = solve_section_const(&s.seq, c, jmax, bounds.n_max);
        out = out.union(&set.affine_image(m, s.offset));
        status = status.and(st);
    }
    (out, status)
}

/// Splits x = sign · p^v · u with u > 0 prime to p.
fn p_split(x: &BigRational, p: u64) -> (i32, i64, BigRational) {
    let sign = if x.is_negative() { -1 } else { 1 };
    let pb = BigInt::from(p);
    let (mut n, mut d) = (x.numer().abs(), x.denom().clone());
    let mut v = 0;
    while n.is_multiple_of(&pb) {
        n /= &pb;
        v += 1;
    }
    while d.is_multiple_of(&pb) {
        d /= &pb;
        v -= 1;
    }
    (sign, v, BigRational::new(n, d))
}

/// Exact positive d-th root of a positive rational, if it is rational.
fn rational_root(x: &BigRational, d: u32) -> Option<BigRational> {
    let n = x.numer().nth_root(d);
    let m = x.denom().nth_root(d);
    (n.pow(d) == *x.numer() && m.pow(d) == *x.denom()).then(|| BigRational::new(n, m))
}

/// All n in N₀ with P(n) = a p^{km} + b for some m >= 0.
///
/// When (P - b)/a = A (x - c)^d the answer is a finite union of
/// p-arithmetic sequences read off from p-adic valuations; otherwise the
/// set is finite and is searched for m <= m_max.
pub fn poly_power_form(
    p_poly: &QPoly,
    a: &BigRational,
    b: &BigRational,
    k: u32,
    p: u64,
    bounds: &SearchBounds,
) -> Result<(IndexSet, CertStatus)> {
    if a.is_zero() {
        return Err(Error::Degenerate("p-power equation with a = 0".into()));
    }
    let d = match p_poly.degree() {
        Some(d) if d >= 1 => d,
        _ => return Err(Error::Invalid("polynomial of degree >= 1 expected".into())),
    };
    let q = p_poly.sub(&QPoly::constant(b.clone())).scale(&(BigRational::one() / a));
    if k == 0 {
        // P(n) = a + b
        let roots = integer_roots(&q.sub(&QPoly::one())).into_iter().filter_map(|n| n.to_u64());
        return Ok((IndexSet::from_finite(roots), CertStatus::Proved));
    }
    let lead = q.lead();
    let c = -q.coeff(d - 1) / (&lead * rat(d as i64));
    let shape = QPoly::new(vec![-c.clone(), BigRational::one()]).pow(d as u32).scale(&lead);
    if shape == q {
        return Ok((power_shape(&lead, &c, d as u32, k, p), CertStatus::Proved));
    }
    let mut out = IndexSet::empty();
    let pk = BigRational::from_integer(BigInt::from(p).pow(k));
    let mut power = BigRational::one();
    for _ in 0..=bounds.m_max {
        let target = a * &power + b;
        let g = p_poly.sub(&QPoly::constant(target));
        out = out.union(&IndexSet::from_finite(integer_roots(&g).into_iter().filter_map(|n| n.to_u64())));
        power *= &pk;
    }
    Ok((out, CertStatus::VerifiedToBound(bounds.n_max)))
}

/// n in N₀ with A (n - c)^d = p^{km}, m >= 0, k >= 1.
fn power_shape(lead: &BigRational, c: &BigRational, d: u32, k: u32, p: u64) -> IndexSet {
    // (n - c)^d = sign p^{km - v} / u
    let (sign, v, u) = p_split(lead, p);
    let Some(s) = rational_root(&(BigRational::one() / u), d) else { return IndexSet::empty() };
    if d.is_multiple_of(2) && sign < 0 {
        return IndexSet::empty();
    }
    let (k64, d64) = (k as i64, d as i64);
    let g = k64.gcd(&d64);
    let Some(m0) = (0..d64).find(|m| (k64 * m - v).rem_euclid(d64) == 0) else { return IndexSet::empty() };
    let w0 = (k64 * m0 - v) / d64;
    let pw = |e: i64| -> BigRational {
        let x = BigRational::from_integer(BigInt::from(p).pow(e.unsigned_abs() as u32));
        if e >= 0 {
            x
        } else {
            BigRational::one() / x
        }
    };
    let signs: Vec<i64> = if d.is_multiple_of(2) { vec![1, -1] } else { vec![sign as i64] };
    let step = (k64 / g) as u32;
    let mut out = IndexSet::empty();
    for sg in signs {
        let a = rat(sg) * &s * pw(w0);
        out = out.union(&IndexSet::from_parith(&PArithSeq::new(a, c.clone(), step, p)));
    }
    out
}

/// Closed form R + q0 ρ^n for a tail whose roots are ρ (simple) and
/// possibly a simple 1.
fn single_root_form(t: &Lrs) -> Option<(BigRational, BigRational, BigRational)> {
    let split = split_cyclotomic(&t.charpoly());
    let e = match split.cyclotomic.as_slice() {
        [] => 0,
        [(1, 1)] => 1,
        _ => return None,
    };
    if split.x_power != 0 || split.rest.degree() != Some(1) {
        return None;
    }
    let rho = -split.rest.coeff(0) / split.rest.lead();
    let terms = t.terms(2);
    let (q0, r) = if e == 0 {
        (terms[0].clone(), BigRational::zero())
    } else {
        let q0 = (&terms[1] - &terms[0]) / (&rho - BigRational::one());
        let r = &terms[0] - &q0;
        (q0, r)
    };
    Some((r, q0, rho))
}

/// n in N₀ with q0 ρ^n = a p^{km} for some m >= 0, where ρ = ±p^γ.
fn single_root_solutions(q0: &BigRational, rho: &BigRational, gamma: i64, a: &BigRational, k: u32, p: u64) -> IndexSet {
    let period: u64 = if rho.is_negative() { 2 } else { 1 };
    let k64 = k as i64;
    let big_l = (period as i64).lcm(&k64.max(1)) as u64;
    let mut out = IndexSet::empty();
    for parity in 0..period {
        let sigma = if parity == 1 { rat(-1) } else { rat(1) };
        let Some(e0) = power_ratio(&(q0 * &sigma), a, p) else { continue };
        // need γ n + e0 = k m with m >= 0
        let n_min = if e0 >= 0 { 0 } else { ((-e0) + gamma - 1) / gamma } as u64;
        for r in 0..big_l {
            if r % period != parity {
                continue;
            }
            let ok = if k == 0 { gamma * r as i64 + e0 == 0 } else { (gamma * r as i64 + e0).rem_euclid(k64) == 0 };
            if !ok {
                continue;
            }
            if k == 0 {
                out = out.union(&IndexSet::from_finite([r]));
                continue;
            }
            let mut start = r;
            while start < n_min {
                start += big_l;
            }
            out = out.union(&IndexSet::from_ap(ArithProg::new(big_l, start)));
        }
    }
    out
}

/// All n with u_n = a p^{km} + b for some m >= 0.
pub fn solve_eq_parith(
    u: &Lrs,
    a: &BigRational,
    b: &BigRational,
    k: u32,
    p: u64,
    bounds: &SearchBounds,
) -> Result<(IndexSet, CertStatus)> {
    if !u.is_integral() {
        return Err(Error::NonInteger);
    }
    if a.is_zero() || k == 0 {
        return Ok(solve_eq_const(u, &(a + b), bounds));
    }
    let target = PArithSeq::new(a.clone(), b.clone(), k, p);
    let hit = |v: &BigRational| v.is_integer() && target.contains_big(&v.to_integer());
    let split = decompose_nondeg(u);
    let modulus = split.modulus;
    let mut out = IndexSet::empty();
    let mut status = CertStatus::Proved;
    for s in &split.sections {
        let jmax = bounds.n_max.saturating_sub(s.offset) / modulus;
        let (b0, t) = s.seq.strip_zero_roots();
        let head = scan(&s.seq, b0 as u64, hit).restrict_below(b0 as u64);
        let (tail, st) = solve_tail_parith(&t, a, b, k, p, jmax.saturating_sub(b0 as u64), bounds, &hit)?;
        let set = head.union(&tail.affine_image(1, b0 as u64));
        out = out.union(&set.affine_image(modulus, s.offset));
        status = status.and(st);
    }
    Ok((out, status))
}

#[allow(clippy::too_many_arguments)]
fn solve_tail_parith(
    t: &Lrs,
    a: &BigRational,
    b: &BigRational,
    k: u32,
    p: u64,
    jmax: u64,
    bounds: &SearchBounds,
    hit: &impl Fn(&BigRational) -> bool,
) -> Result<(IndexSet, CertStatus)> {
    let constant = |v: &BigRational| if hit(v) { IndexSet::all() } else { IndexSet::empty() };
    if t.order() == 0 {
        return Ok((constant(&BigRational::zero()), CertStatus::Proved));
    }
    if let Some(poly) = polynomial_form(t) {
        if poly.degree().unwrap_or(0) == 0 {
            return Ok((constant(&poly.coeff(0)), CertStatus::Proved));
        }
        return poly_power_form(&poly, a, b, k, p, bounds);
    }
    if let Some((r, q0, rho)) = single_root_form(t) {
        if let Some(gamma) = power_ratio(&rho.abs(), &BigRational::one(), p).filter(|&g| g >= 1) {
            if r == *b {
                return Ok((single_root_solutions(&q0, &rho, gamma, a, k, p), CertStatus::Proved));
            }
        }
    }
    Ok((scan(t, jmax, hit), CertStatus::VerifiedToBound(bounds.n_max)))
}

impl IndexSet {
    /// Members below `n`.
    pub fn restrict_below(&self, n: u64) -> IndexSet {
        if n == 0 {
            return IndexSet::empty();
        }
        IndexSet::from_finite(self.members_up_to(n - 1))
    }
}

#[cfg(test)]
mod tests;
