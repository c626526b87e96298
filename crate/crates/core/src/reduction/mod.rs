//! Orbit-in-coset and orbit-in-F-orbit membership reduced to linear
//! recurrence equations over the additive coordinates of the group.

use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, ToPrimitive, Zero};
use serde::Serialize;

use crate::dynamics::{cayley_recurrence, iterate_lattice, step_lattice, MonomialAffineMap, TorusPoint};
use crate::lattice::{PointRep, Subgroup, SupportBasis};
use crate::linalg::{mat_vec, IMat};
use crate::lrs::{solve_eq_const, solve_eq_parith, CertStatus, Lrs, SearchBounds};
use crate::seq::{ArithProg, IndexSet};
use crate::{Error, Result};

/// Encoded data of Φ = y·Φ₀ and α over a shared support basis.
#[derive(Clone, Debug)]
pub struct GroupContext {
    pub basis: SupportBasis,
    pub a: IMat,
    pub ell: usize,
    /// μ(x) = x^ℓ + Σ c_i x^i annihilates A
    pub c: Vec<BigInt>,
    pub alpha: PointRep,
    pub y: PointRep,
    /// Φ₀ⁱ(α) for 0 ≤ i < ℓ
    pub phi0_alpha: Vec<PointRep>,
    /// Q_i = Σ_{j<i} Φ₀ʲ(y) for 1 ≤ i ≤ ℓ (stored at index i-1)
    pub q: Vec<PointRep>,
}

impl GroupContext {
    pub fn new(phi: &MonomialAffineMap, alpha: &TorusPoint) -> Result<Self> {
        if alpha.dim() != phi.dim() {
            return Err(Error::Invalid(format!("alpha has {} coordinates, map has {}", alpha.dim(), phi.dim())));
        }
        let mut basis = SupportBasis::new(phi.field());
        let alpha_rep = basis.encode(alpha.coords())?;
        let y_rep = basis.encode(phi.y.coords())?;
        Self::from_reps(basis, phi.a.clone(), alpha_rep, y_rep)
    }

    pub fn from_reps(basis: SupportBasis, a: IMat, alpha: PointRep, y: PointRep) -> Result<Self> {
        let (ell, c) = cayley_recurrence(&a);
        if ell == 0 {
            return Err(Error::Degenerate("empty matrix".into()));
        }
        let order = basis.torsion_order();
        let n = a.len();
        let w = basis.len();
        let (alpha, y) = (alpha.padded(w), y.padded(w));
        let zero = PointRep::zero(n, w);
        let mut phi0_alpha = vec![alpha.normalized(order)];
        while phi0_alpha.len() < ell {
            let next = step_lattice(&a, phi0_alpha.last().unwrap(), &zero, order);
            phi0_alpha.push(next);
        }
        let mut q = vec![y.normalized(order)];
        let mut power = y.normalized(order);
        while q.len() < ell {
            power = step_lattice(&a, &power, &zero, order);
            q.push(q.last().unwrap().add(&power).normalized(order));
        }
        Ok(GroupContext { basis, a, ell, c, alpha, y, phi0_alpha, q })
    }

    pub fn order(&self) -> u64 {
        self.basis.torsion_order()
    }

    pub fn dim(&self) -> usize {
        self.a.len()
    }

    pub fn width(&self) -> usize {
        self.basis.len()
    }

    pub fn p(&self) -> u64 {
        self.basis.field().p()
    }

    /// Encodes a point, extending the basis by any new primes.
    pub fn encode(&mut self, x: &TorusPoint) -> Result<PointRep> {
        if x.dim() != self.dim() {
            return Err(Error::BasisMismatch(format!("point of dimension {} in a {}-torus", x.dim(), self.dim())));
        }
        self.basis.encode(x.coords())
    }

    /// Φⁿ(α) by fast powering.
    pub fn orbit_point(&self, n: u64) -> PointRep {
        iterate_lattice(&self.a, &self.alpha, &self.y, &BigUint::from(n), self.order())
    }
}

/// The sequences v_i (0 ≤ i < ℓ) and u_i (1 ≤ i ≤ ℓ) with
/// Φⁿ(α) = Σ v_{i,n} Φ₀ⁱ(α) + Σ u_{i,n} Q_i.
#[derive(Clone, Debug, Serialize)]
pub struct ClaimSequences {
    pub v: Vec<Lrs>,
    pub u: Vec<Lrs>,
    /// recurrence of (x - 1)μ(x), shared by every combination
    #[serde(skip)]
    d: Vec<BigRational>,
    #[serde(skip)]
    v_head: Vec<Vec<BigInt>>,
    #[serde(skip)]
    u_head: Vec<Vec<BigInt>>,
}

fn big_rat(x: &BigInt) -> BigRational {
    BigRational::from_integer(x.clone())
}

fn delta(i: usize, j: usize) -> BigRational {
    if i == j {
        BigRational::one()
    } else {
        BigRational::zero()
    }
}

pub fn build_claim_sequences(ctx: &GroupContext) -> Result<ClaimSequences> {
    let ell = ctx.ell;
    let c: Vec<BigRational> = ctx.c.iter().map(big_rat).collect();
    let mut d = Vec::with_capacity(ell + 1);
    d.push(-c[0].clone());
    for i in 1..ell {
        d.push(&c[i - 1] - &c[i]);
    }
    d.push(&c[ell - 1] - BigRational::one());
    let v = (0..ell)
        .map(|i| Lrs::new(c.clone(), (0..ell).map(|j| delta(i, j)).collect()))
        .collect::<Result<Vec<_>>>()?;
    let u = (1..=ell)
        .map(|i| Lrs::new(d.clone(), (0..=ell).map(|n| delta(i, n)).collect()))
        .collect::<Result<Vec<_>>>()?;
    let ints = |s: &Lrs| s.terms(ell + 1).iter().map(|x| x.to_integer()).collect::<Vec<_>>();
    let seqs = ClaimSequences {
        v_head: v.iter().map(ints).collect(),
        u_head: u.iter().map(ints).collect(),
        v,
        u,
        d,
    };
    let order = ctx.order();
    let mut x = ctx.alpha.normalized(order);
    for n in 0..=(2 * ell as u64 + 4) {
        if seqs.reconstruct(ctx, n).normalized(order) != x.padded(ctx.width()) {
            return Err(Error::ClaimVerification(n));
        }
        x = step_lattice(&ctx.a, &x, &ctx.y, order);
    }
    Ok(seqs)
}

impl ClaimSequences {
    /// Σ v_{i,n} Φ₀ⁱ(α) + Σ u_{i,n} Q_i, torsion not reduced.
    pub fn reconstruct(&self, ctx: &GroupContext, n: u64) -> PointRep {
        let mut out = PointRep::zero(ctx.dim(), ctx.width());
        for (s, g) in self.v.iter().zip(&ctx.phi0_alpha) {
            out = out.add(&g.scale(&s.eval(n).to_integer()));
        }
        for (s, g) in self.u.iter().zip(&ctx.q) {
            out = out.add(&g.scale(&s.eval(n).to_integer()));
        }
        out
    }

    /// The integer sequence n ↦ L(Φⁿ(α)) for a linear functional L on
    /// flattened reps of width `width`.
    pub fn functional(&self, ctx: &GroupContext, l: &[BigInt], width: usize) -> Lrs {
        let dot = |g: &PointRep| -> BigInt { g.padded(width).flatten().iter().zip(l).map(|(a, b)| a * b).sum() };
        let lp: Vec<BigInt> = ctx.phi0_alpha.iter().map(dot).collect();
        let lq: Vec<BigInt> = ctx.q.iter().map(dot).collect();
        let init = (0..=ctx.ell)
            .map(|n| {
                let s: BigInt = lp.iter().zip(&self.v_head).map(|(a, h)| a * &h[n]).sum::<BigInt>()
                    + lq.iter().zip(&self.u_head).map(|(a, h)| a * &h[n]).sum::<BigInt>();
                BigRational::from_integer(s)
            })
            .collect();
        Lrs::new(self.d.clone(), init).expect("orders match").minimize()
    }

    fn coordinate(&self, ctx: &GroupContext, index: usize, width: usize) -> Lrs {
        let mut l = vec![BigInt::zero(); ctx.dim() * (1 + width)];
        l[index] = BigInt::one();
        self.functional(ctx, &l, width)
    }
}

/// An F-set, given over the session basis.
#[derive(Clone, Debug)]
pub enum FSetInput {
    Coset { r: PointRep, h: Subgroup },
    /// {R1 + p^{km} R2 : m ≥ 0}
    FOrbit { r1: PointRep, r2: PointRep, k: u32 },
    /// {R + Σ_j p^{k m_j} Q_j : m_j ≥ 0}
    OrbitProduct { r: PointRep, factors: Vec<PointRep>, k: u32 },
}

/// A solver answer with the equations that forced a bounded search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solved {
    pub set: IndexSet,
    pub status: CertStatus,
    pub downgrades: Vec<String>,
}

impl Solved {
    fn all() -> Self {
        Solved { set: IndexSet::all(), status: CertStatus::Proved, downgrades: Vec::new() }
    }

    fn meet(&mut self, set: IndexSet, status: CertStatus, label: impl FnOnce() -> String) {
        self.set = self.set.intersect(&set);
        if !status.is_proved() {
            self.downgrades.push(label());
        }
        self.status = self.status.and(status);
    }

    fn join(&mut self, other: Solved) {
        self.set = self.set.union(&other.set);
        self.status = self.status.and(other.status);
        self.downgrades.extend(other.downgrades);
    }
}

/// {n : seq_n ≡ target (mod modulus)} from the residue cycle.
fn solve_congruence(seq: &Lrs, target: &BigInt, modulus: &BigInt) -> Result<IndexSet> {
    let m = modulus.to_u64().filter(|&m| m > 0 && m < (1 << 62)).ok_or_else(|| {
        Error::Unsupported(format!("congruence modulus {modulus} out of range"))
    })?;
    if m == 1 {
        return Ok(IndexSet::all());
    }
    let t = target.mod_floor(modulus).to_u64().unwrap();
    let (mu, pi) = seq.period_mod(m)?;
    let res = seq.residues(m, (mu + pi) as usize);
    let mut out = IndexSet::empty();
    for (n, &r) in res.iter().enumerate() {
        if r == t {
            let n = n as u64;
            out = if n < mu { out.union(&IndexSet::from_finite([n])) } else { out.union(&IndexSet::from_ap(ArithProg::new(pi, n))) };
        }
    }
    Ok(out)
}

fn common_width(ctx: &GroupContext, reps: &[&PointRep]) -> Result<usize> {
    for r in reps {
        if r.dim() != ctx.dim() {
            return Err(Error::BasisMismatch(format!("rep of dimension {} in a {}-torus", r.dim(), ctx.dim())));
        }
    }
    Ok(reps.iter().map(|r| r.width()).max().unwrap_or(0).max(ctx.width()))
}

/// All n with Φⁿ(α) ∈ R + H.
pub fn solve_coset(
    ctx: &GroupContext,
    seqs: &ClaimSequences,
    r: &PointRep,
    h: &Subgroup,
    bounds: &SearchBounds,
) -> Result<Solved> {
    if h.dim() != ctx.dim() || h.torsion_order() != ctx.order() {
        return Err(Error::BasisMismatch("subgroup over a different group".into()));
    }
    let width = common_width(ctx, &[r])?.max(h.width());
    let h = Subgroup::new(h.generators().to_vec(), ctx.dim(), width, ctx.order())?;
    let snf = h.snf();
    let target = mat_vec(&snf.u, &r.padded(width).flatten());
    let mut out = Solved::all();
    // congruence rows first; they are cheap and often already decide
    for (i, di) in snf.diag.iter().enumerate() {
        if di.is_one() {
            continue;
        }
        let seq = seqs.functional(ctx, &snf.u[i], width);
        out.meet(solve_congruence(&seq, &target[i], di)?, CertStatus::Proved, String::new);
    }
    for i in snf.rank()..snf.rows {
        if out.set.is_empty() {
            break;
        }
        let seq = seqs.functional(ctx, &snf.u[i], width);
        let (set, st) = solve_eq_const(&seq, &big_rat(&target[i]), bounds);
        out.meet(set, st, || format!("equality row {i}: {seq} = {}", target[i]));
    }
    out.set = out.set.canonicalize();
    Ok(out)
}

/// Multiplicative order of p^k on the torsion entries of `r2`.
fn torsion_period(r2: &PointRep, p: u64, k: u32, order: u64) -> u64 {
    let m = BigInt::from(order);
    let pk = BigInt::from(p).modpow(&BigInt::from(k), &m);
    let mut s = 1u64;
    for t in &r2.tors {
        let sub = &m / t.gcd(&m);
        if sub.is_one() {
            continue;
        }
        let base = pk.mod_floor(&sub);
        let mut e = 1u64;
        let mut x = base.clone();
        while !x.is_one() {
            x = (x * &base).mod_floor(&sub);
            e += 1;
        }
        s = s.lcm(&e);
    }
    s
}

/// All n with Φⁿ(α) = R1 + p^{km} R2 for some m ≥ 0.
pub fn solve_forbit(
    ctx: &GroupContext,
    seqs: &ClaimSequences,
    r1: &PointRep,
    r2: &PointRep,
    k: u32,
    bounds: &SearchBounds,
) -> Result<Solved> {
    let width = common_width(ctx, &[r1, r2])?;
    let (r1, r2) = (r1.padded(width), r2.padded(width));
    let p = ctx.p();
    let order = BigInt::from(ctx.order());
    let s = if k == 0 { 1 } else { torsion_period(&r2, p, k, ctx.order()) };
    let n = ctx.dim();
    let mut out = Solved { set: IndexSet::empty(), status: CertStatus::Proved, downgrades: Vec::new() };
    for e in 0..s {
        // m = s m' + e: W_n = R1 + p^{ke} p^{skm'} R2
        let shift = BigInt::from(p).pow(k as u64 * e);
        let r2e = r2.scale(&shift);
        let ks = k * s as u32;
        let mut part = Solved::all();
        for i in 0..n {
            if part.set.is_empty() {
                break;
            }
            let seq = seqs.coordinate(ctx, i, width);
            let rhs = &r1.tors[i] + BigInt::from(p).modpow(&BigInt::from(ks), &order) * &r2e.tors[i];
            part.meet(solve_congruence(&seq, &rhs, &order)?, CertStatus::Proved, String::new);
        }
        let flat1 = r1.flatten();
        let flat2 = r2e.flatten();
        let lattice: Vec<usize> = (n..flat1.len()).collect();
        let pivot = lattice.iter().copied().find(|&f| !flat2[f].is_zero());
        for &f in &lattice {
            if part.set.is_empty() {
                break;
            }
            let w = seqs.coordinate(ctx, f, width);
            match pivot {
                Some(f0) if f == f0 => {
                    let (a, b) = (big_rat(&flat2[f]), big_rat(&flat1[f]));
                    let (set, st) = solve_eq_parith(&w, &a, &b, ks, p, bounds)?;
                    part.meet(set, st, || format!("p-power equation on coordinate {f}: {w} = {a}·{p}^({ks}m) + {b}"));
                }
                Some(f0) if !flat2[f].is_zero() => {
                    // a_{f0}(w_f - b_f) = a_f(w_{f0} - b_{f0})
                    let w0 = seqs.coordinate(ctx, f0, width);
                    let (a0, af) = (big_rat(&flat2[f0]), big_rat(&flat2[f]));
                    let lhs = Lrs::combine(&a0, &w, &-af.clone(), &w0);
                    let c = &a0 * big_rat(&flat1[f]) - &af * big_rat(&flat1[f0]);
                    let (set, st) = solve_eq_const(&lhs, &c, bounds);
                    part.meet(set, st, || format!("difference equation on coordinates {f0},{f}"));
                }
                _ => {
                    let c = big_rat(&flat1[f]);
                    let (set, st) = solve_eq_const(&w, &c, bounds);
                    part.meet(set, st, || format!("constant equation on coordinate {f}: {w} = {c}"));
                }
            }
        }
        out.join(part);
    }
    out.set = out.set.canonicalize();
    Ok(out)
}

/// Dispatches on the F-set shape; products of two or more infinite
/// F-orbits are rejected.
pub fn solve_fset(ctx: &GroupContext, seqs: &ClaimSequences, fset: &FSetInput, bounds: &SearchBounds) -> Result<Solved> {
    match fset {
        FSetInput::Coset { r, h } => solve_coset(ctx, seqs, r, h, bounds),
        FSetInput::FOrbit { r1, r2, k } => solve_forbit(ctx, seqs, r1, r2, *k, bounds),
        FSetInput::OrbitProduct { r, factors, k } => {
            let infinite: Vec<&PointRep> =
                factors.iter().filter(|q| *k > 0 && q.expo.iter().flatten().any(|x| !x.is_zero())).collect();
            if infinite.len() >= 2 {
                return Err(Error::Unsupported(format!(
                    "product of {} infinite F-orbits; only a single translated F-orbit can be reduced",
                    infinite.len()
                )));
            }
            // p ≡ 1 mod (p - 1), so a torsion factor is the same point for every m
            let mut base = r.clone();
            for q in factors {
                if !infinite.iter().any(|x| std::ptr::eq(*x, q)) {
                    base = base.add(q);
                }
            }
            match infinite.first() {
                Some(q) => solve_forbit(ctx, seqs, &base, q, *k, bounds),
                None => {
                    let h = Subgroup::trivial(ctx.dim(), ctx.width().max(base.width()), ctx.order());
                    solve_coset(ctx, seqs, &base, &h, bounds)
                }
            }
        }
    }
}

/// Union of the answers over a decomposition of V ∩ Γ into F-sets.
pub fn solve_union(ctx: &GroupContext, seqs: &ClaimSequences, fsets: &[FSetInput], bounds: &SearchBounds) -> Result<Solved> {
    let mut out = Solved { set: IndexSet::empty(), status: CertStatus::Proved, downgrades: Vec::new() };
    for f in fsets {
        out.join(solve_fset(ctx, seqs, f, bounds)?);
    }
    out.set = out.set.canonicalize();
    Ok(out)
}

/// Exact answer for a preperiodic orbit from one pass over its cycle.
pub fn preperiodic_structure(preperiod: u64, period: u64, mut hit: impl FnMut(u64) -> Result<bool>) -> Result<IndexSet> {
    let mut out = IndexSet::empty();
    for n in 0..preperiod + period {
        if hit(n)? {
            out = if n < preperiod {
                out.union(&IndexSet::from_finite([n]))
            } else {
                out.union(&IndexSet::from_ap(ArithProg::new(period, n)))
            };
        }
    }
    Ok(out.canonicalize())
}

/// When S holds an infinite progression, rebuilds it as full progressions
/// of the smallest observed gap a₀, one per residue class with a hit, each
/// checked by `verify` at sampled points up to `horizon`. Any failed check
/// leaves S unchanged.
pub fn simplify_if_infinite_ap(
    s: &IndexSet,
    hits: &BTreeSet<u64>,
    horizon: u64,
    samples: usize,
    mut verify: impl FnMut(u64) -> Result<bool>,
) -> Result<IndexSet> {
    if !s.aps.iter().any(|a| a.m > 0) || hits.is_empty() {
        return Ok(s.clone());
    }
    let v: Vec<u64> = hits.iter().copied().collect();
    let a0 = v.windows(2).map(|w| w[1] - w[0]).min().unwrap_or_else(|| s.aps.iter().find(|a| a.m > 0).unwrap().m);
    let mut out = IndexSet::empty();
    for j in 0..a0 {
        let Some(&start) = v.iter().find(|&&h| h % a0 == j) else { continue };
        let span = horizon.saturating_sub(start) / a0;
        for t in 0..samples as u64 {
            let idx = if samples <= 1 { span } else { span * t / (samples as u64 - 1) };
            if !verify(start + a0 * idx)? {
                return Ok(s.clone());
            }
        }
        out = out.union(&IndexSet::from_ap(ArithProg::new(a0, start)));
    }
    Ok(out.canonicalize())
}

#[cfg(test)]
mod tests;
