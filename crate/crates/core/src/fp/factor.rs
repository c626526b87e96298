//! Factorization in F_p[t]: squarefree split, distinct-degree split, then
//! Cantor–Zassenhaus equal-degree splitting with a seeded RNG.

use num_bigint::BigUint;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{prime_factors, FpPoly};
use crate::error::{Error, Result};

/// `unit * prod(q_i^e_i)` with monic irreducible `q_i` in canonical order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub unit: u64,
    pub factors: Vec<(FpPoly, u32)>,
}

impl Factorization {
    /// Multiplies the factorization back out.
    pub fn expand(&self, field: super::Fp) -> FpPoly {
        self.factors.iter().fold(FpPoly::constant(field, self.unit), |acc, (q, e)| {
            acc.mul(&q.pow(*e as u64).unwrap())
        })
    }
}

pub fn factor(f: &FpPoly) -> Result<Factorization> {
    factor_seeded(f, 0)
}

pub fn factor_seeded(f: &FpPoly, seed: u64) -> Result<Factorization> {
    if f.is_zero() {
        return Err(Error::ZeroInput);
    }
    let unit = f.lead();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut factors: Vec<(FpPoly, u32)> = Vec::new();
    for (sq, mult) in squarefree(&f.monic()) {
        for (g, d) in distinct_degree(&sq) {
            let mut parts = Vec::new();
            equal_degree(&g, d, &mut rng, &mut parts);
            factors.extend(parts.into_iter().map(|q| (q, mult)));
        }
    }
    factors.sort_by(|a, b| a.0.canonical_cmp(&b.0));
    // Squarefree pieces are pairwise coprime, so factors never repeat.
    Ok(Factorization { unit, factors })
}

/// Squarefree decomposition of a monic polynomial: pairs (g, i) with the
/// g pairwise coprime, squarefree and f = prod g^i.
fn squarefree(f: &FpPoly) -> Vec<(FpPoly, u32)> {
    let field = f.field();
    let p = field.p() as u32;
    let mut out = Vec::new();
    if f.degree().unwrap_or(0) == 0 {
        return out;
    }
    let d = f.derivative();
    if d.is_zero() {
        for (g, i) in squarefree(&f.pth_root()) {
            out.push((g, i * p));
        }
        return out;
    }
    let mut c = f.gcd(&d);
    let mut w = f.div_exact(&c);
    let mut i = 1;
    while !w.is_one() {
        let y = w.gcd(&c);
        let fac = w.div_exact(&y);
        if !fac.is_one() {
            out.push((fac, i));
        }
        i += 1;
        w = y;
        c = c.div_exact(&w);
    }
    if !c.is_one() {
        for (g, j) in squarefree(&c.pth_root()) {
            out.push((g, j * p));
        }
    }
    out
}

/// Splits a squarefree monic polynomial into products of irreducibles of
/// equal degree d.
fn distinct_degree(f: &FpPoly) -> Vec<(FpPoly, usize)> {
    let field = f.field();
    let p = BigUint::from(field.p());
    let t = FpPoly::t(field);
    let mut out = Vec::new();
    let mut rest = f.clone();
    let mut h = t.rem(&rest);
    let mut d = 1;
    while rest.degree().unwrap_or(0) >= 2 * d {
        h = h.modpow(&p, &rest);
        let g = h.sub(&t).gcd(&rest);
        if !g.is_one() {
            rest = rest.div_exact(&g);
            h = h.rem(&rest);
            out.push((g, d));
        }
        d += 1;
    }
    if let Some(k) = rest.degree() {
        if k > 0 {
            out.push((rest, k));
        }
    }
    out
}

fn equal_degree(f: &FpPoly, d: usize, rng: &mut ChaCha8Rng, out: &mut Vec<FpPoly>) {
    let n = f.degree().unwrap();
    if n == d {
        out.push(f.clone());
        return;
    }
    let field = f.field();
    let p = field.p();
    let half = if p == 2 {
        None
    } else {
        Some((BigUint::from(p).pow(d as u32) - BigUint::one()) >> 1)
    };
    loop {
        let a = FpPoly::from_coeffs(field, (0..n).map(|_| rng.gen_range(0..p)).collect());
        if a.degree().unwrap_or(0) == 0 {
            continue;
        }
        let b = match &half {
            Some(e) => a.modpow(e, f).sub(&FpPoly::one(field)),
            None => {
                // Absolute trace of F_{2^d}: a + a^2 + ... + a^(2^(d-1)).
                let mut acc = a.clone();
                let mut sq = a.clone();
                for _ in 1..d {
                    sq = sq.mul_mod(&sq, f);
                    acc = acc.add(&sq);
                }
                acc
            }
        };
        let g = b.gcd(f);
        let gd = g.degree().unwrap_or(0);
        if gd > 0 && gd < n {
            equal_degree(&g, d, rng, out);
            equal_degree(&f.div_exact(&g), d, rng, out);
            return;
        }
    }
}

/// Rabin's irreducibility test.
pub fn is_irreducible(f: &FpPoly) -> bool {
    let Some(n) = f.degree() else { return false };
    if n == 0 {
        return false;
    }
    let f = f.monic();
    let field = f.field();
    let t = FpPoly::t(field);
    let q = BigUint::from(field.p());
    let frob = |k: usize| -> FpPoly {
        let mut h = t.rem(&f);
        for _ in 0..k {
            h = h.modpow(&q, &f);
        }
        h
    };
    if !frob(n).sub(&t).rem(&f).is_zero() {
        return false;
    }
    prime_factors(n as u64)
        .into_iter()
        .all(|r| frob(n / r as usize).sub(&t).gcd(&f).is_one())
}
