//! Arithmetic in F_p, F_p[t] and F_p(t).
//!
//! Coefficients are stored densely as `u32` residues, lowest degree first.
//! All values are immutable after construction.

mod factor;
mod laurent;
mod parse;
mod rational;

pub use factor::{factor, factor_seeded, is_irreducible, Factorization};
pub use laurent::{LaurentPoly, Monomial};
pub use parse::{parse_laurent, parse_rational};
pub use rational::FpRational;

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::ToPrimitive;

use crate::error::{Error, Result};

/// Largest polynomial degree exact arithmetic will materialize.
pub const DEGREE_CAP: u64 = 1 << 25;

/// The prime field F_p. Cheap to copy; carried by every polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Fp {
    p: u64,
}

impl Fp {
    pub fn new(p: u64) -> Result<Self> {
        if p >= (1 << 31) || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Fp { p })
    }

    #[inline]
    pub fn p(self) -> u64 {
        self.p
    }

    #[inline]
    pub fn add(self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }

    pub fn pow(self, mut a: u64, mut e: u64) -> u64 {
        let mut r = 1 % self.p;
        a %= self.p;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    /// Inverse of a nonzero residue.
    pub fn inv(self, a: u64) -> Result<u64> {
        if a.is_multiple_of(self.p) {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(a, self.p - 2))
    }

    pub fn from_i64(self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }

    pub fn from_bigint(self, v: &BigInt) -> u64 {
        let m = BigInt::from(self.p);
        let r = ((v % &m) + &m) % &m;
        r.to_u64().unwrap()
    }

    pub fn from_biguint(self, v: &BigUint) -> u64 {
        (v % self.p).to_u64().unwrap()
    }

    /// Smallest generator of the multiplicative group F_p^*.
    pub fn primitive_root(self) -> u64 {
        if self.p == 2 {
            return 1;
        }
        let order = self.p - 1;
        let primes = prime_factors(order);
        (2..self.p)
            .find(|&g| primes.iter().all(|&q| self.pow(g, order / q) != 1))
            .expect("a prime field has a primitive root")
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime factors in increasing order.
pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// A polynomial in F_p[t]. The zero polynomial has no coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FpPoly {
    field: Fp,
    coeffs: Vec<u32>,
}

impl FpPoly {
    pub fn zero(field: Fp) -> Self {
        FpPoly { field, coeffs: Vec::new() }
    }

    pub fn one(field: Fp) -> Self {
        Self::constant(field, 1)
    }

    pub fn constant(field: Fp, c: u64) -> Self {
        Self::from_coeffs(field, vec![c % field.p])
    }

    /// The polynomial `t`.
    pub fn t(field: Fp) -> Self {
        Self::from_coeffs(field, vec![0, 1])
    }

    /// `c * t^k`.
    pub fn monomial(field: Fp, c: u64, k: usize) -> Self {
        let mut v = vec![0; k + 1];
        v[k] = c % field.p;
        Self::from_coeffs(field, v)
    }

    /// Builds from residues (lowest degree first); values are reduced mod p.
    pub fn from_coeffs(field: Fp, coeffs: Vec<u64>) -> Self {
        let coeffs = coeffs.into_iter().map(|c| (c % field.p) as u32).collect();
        Self::from_raw(field, coeffs)
    }

    pub fn from_i64s(field: Fp, coeffs: &[i64]) -> Self {
        Self::from_coeffs(field, coeffs.iter().map(|&c| field.from_i64(c)).collect())
    }

    fn from_raw(field: Fp, mut coeffs: Vec<u32>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        FpPoly { field, coeffs }
    }

    #[inline]
    pub fn field(&self) -> Fp {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0) as u64
    }

    pub fn coeffs(&self) -> impl Iterator<Item = u64> + '_ {
        self.coeffs.iter().map(|&c| c as u64)
    }

    /// Leading coefficient (0 for the zero polynomial).
    pub fn lead(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0) as u64
    }

    pub fn is_monic(&self) -> bool {
        self.lead() == 1
    }

    pub fn scale(&self, c: u64) -> Self {
        let f = self.field;
        let c = c % f.p;
        Self::from_raw(f, self.coeffs.iter().map(|&a| f.mul(a as u64, c) as u32).collect())
    }

    /// Monic associate; zero stays zero.
    pub fn monic(&self) -> Self {
        if self.is_zero() || self.is_monic() {
            return self.clone();
        }
        let inv = self.field.inv(self.lead()).unwrap();
        self.scale(inv)
    }

    pub fn add(&self, other: &Self) -> Self {
        let f = self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let v = (0..n)
            .map(|i| f.add(self.coeff(i), other.coeff(i)) as u32)
            .collect();
        Self::from_raw(f, v)
    }

    pub fn neg(&self) -> Self {
        let f = self.field;
        Self::from_raw(f, self.coeffs.iter().map(|&a| f.neg(a as u64) as u32).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let f = self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let v = (0..n)
            .map(|i| f.sub(self.coeff(i), other.coeff(i)) as u32)
            .collect();
        Self::from_raw(f, v)
    }

    /// Schoolbook product; zero coefficients of the left factor are skipped,
    /// so sparse operands (binomial powers, Frobenius twists) stay cheap.
    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.field);
        }
        let p = self.field.p;
        let n = self.coeffs.len() + other.coeffs.len() - 1;
        let mut acc = vec![0u64; n];
        // For p < 2^16 products fit in 32 bits and u64 sums cannot overflow
        // before 2^32 terms, so reduction is deferred to the end.
        let lazy = p < (1 << 16);
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            let a = a as u64;
            let row = &mut acc[i..i + other.coeffs.len()];
            if lazy {
                for (slot, &b) in row.iter_mut().zip(&other.coeffs) {
                    *slot += a * b as u64;
                }
            } else {
                for (slot, &b) in row.iter_mut().zip(&other.coeffs) {
                    *slot = (*slot + a * b as u64) % p;
                }
            }
        }
        Self::from_raw(self.field, acc.into_iter().map(|c| (c % p) as u32).collect())
    }

    /// Like `mul` but refuses results above [`DEGREE_CAP`].
    pub fn mul_capped(&self, other: &Self) -> Result<Self> {
        if let (Some(a), Some(b)) = (self.degree(), other.degree()) {
            check_degree((a + b) as u128)?;
        }
        Ok(self.mul(other))
    }

    /// Quotient and remainder. Panics on a zero divisor.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let f = self.field;
        let dd = d.degree().expect("division by the zero polynomial");
        if self.coeffs.len() <= dd {
            return (Self::zero(f), self.clone());
        }
        let inv = f.inv(d.lead()).unwrap();
        let mut r: Vec<u64> = self.coeffs().collect();
        let mut q = vec![0u64; r.len() - dd];
        for i in (dd..r.len()).rev() {
            let c = f.mul(r[i], inv);
            if c == 0 {
                continue;
            }
            q[i - dd] = c;
            for (j, b) in d.coeffs().enumerate() {
                let k = i - dd + j;
                r[k] = f.sub(r[k], f.mul(c, b));
            }
        }
        r.truncate(dd);
        (Self::from_coeffs(f, q), Self::from_coeffs(f, r))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.div_rem(d).1
    }

    /// Exact division; panics (debug) when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Self) -> Self {
        let (q, r) = self.div_rem(d);
        debug_assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Monic gcd; gcd(0, 0) = 0.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Returns (g, s, t) with s*self + t*other = g monic.
    pub fn ext_gcd(&self, other: &Self) -> (Self, Self, Self) {
        let f = self.field;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Self::one(f), Self::zero(f));
        let (mut t0, mut t1) = (Self::zero(f), Self::one(f));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.sub(&q.mul(&s1));
            s0 = std::mem::replace(&mut s1, s);
            let t = t0.sub(&q.mul(&t1));
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = f.inv(r0.lead()).unwrap();
        (r0.scale(inv), s0.scale(inv), t0.scale(inv))
    }

    pub fn derivative(&self) -> Self {
        let f = self.field;
        let v = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| f.mul(c as u64, i as u64 % f.p))
            .collect();
        Self::from_coeffs(f, v)
    }

    pub fn eval(&self, x: u64) -> u64 {
        let f = self.field;
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| f.add(f.mul(acc, x), c as u64))
    }

    /// `self(t^k)`.
    pub fn spread(&self, k: usize) -> Self {
        if self.is_zero() || k == 1 {
            return self.clone();
        }
        let mut v = vec![0u32; (self.coeffs.len() - 1) * k + 1];
        for (i, &c) in self.coeffs.iter().enumerate() {
            v[i * k] = c;
        }
        Self::from_raw(self.field, v)
    }

    /// p-th root of a polynomial in t^p (Frobenius is the identity on F_p).
    pub(crate) fn pth_root(&self) -> Self {
        let p = self.field.p as usize;
        let v = self.coeffs.iter().step_by(p).copied().collect();
        Self::from_raw(self.field, v)
    }

    /// `self^e` using base-p digits: f^(sum d_i p^i) = prod f(t^(p^i))^(d_i).
    pub fn pow(&self, e: u64) -> Result<Self> {
        let f = self.field;
        if e == 0 {
            return Ok(Self::one(f));
        }
        let Some(d) = self.degree() else {
            return Ok(Self::zero(f));
        };
        check_degree(d as u128 * e as u128)?;
        let mut result = Self::one(f);
        let mut e = e;
        let mut twist = 1usize;
        while e > 0 {
            let digit = e % f.p;
            if digit > 0 {
                let g = self.spread(twist);
                result = result.mul(&g.pow_small(digit));
            }
            e /= f.p;
            if e > 0 {
                twist *= f.p as usize;
            }
        }
        Ok(result)
    }

    fn pow_small(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn mul_mod(&self, other: &Self, m: &Self) -> Self {
        self.mul(other).rem(m)
    }

    /// `base^e mod m` by square-and-multiply.
    pub fn modpow(&self, e: &BigUint, m: &Self) -> Self {
        let f = self.field;
        let mut result = Self::one(f).rem(m);
        let base = self.rem(m);
        for i in (0..e.bits()).rev() {
            result = result.mul_mod(&result, m);
            if e.bit(i) {
                result = result.mul_mod(&base, m);
            }
        }
        result
    }

    /// `base^e mod m` for a signed exponent; negative exponents need an inverse.
    pub fn modpow_signed(&self, e: &BigInt, m: &Self) -> Result<Self> {
        match e.sign() {
            Sign::Minus => self.inv_mod(m)?.modpow_signed(&-e, m),
            _ => Ok(self.modpow(e.magnitude(), m)),
        }
    }

    /// Inverse modulo `m`.
    pub fn inv_mod(&self, m: &Self) -> Result<Self> {
        let (g, s, _) = self.rem(m).ext_gcd(m);
        if !g.is_one() {
            return Err(Error::NotInvertible(self.to_string(), m.to_string()));
        }
        Ok(s.rem(m))
    }

    /// Canonical order: degree first, then coefficient sequence from the
    /// constant term upward.
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.cmp(&other.coeffs))
    }
}

pub(crate) fn check_degree(d: u128) -> Result<()> {
    if d > DEGREE_CAP as u128 {
        Err(Error::DegreeCap { degree: d, cap: DEGREE_CAP })
    } else {
        Ok(())
    }
}

impl fmt::Display for FpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (i, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => write!(f, "t")?,
                (1, c) => write!(f, "{c}*t")?,
                (i, 1) => write!(f, "t^{i}")?,
                (i, c) => write!(f, "{c}*t^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for FpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FpPoly[p={}]({})", self.field.p, self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp(p: u64) -> Fp {
        Fp::new(p).unwrap()
    }

    #[test]
    fn rejects_composites() {
        assert_eq!(Fp::new(9), Err(Error::NotPrime(9)));
        assert!(Fp::new(1).is_err());
        assert!(Fp::new(7).is_ok());
    }

    #[test]
    fn primitive_roots() {
        assert_eq!(fp(3).primitive_root(), 2);
        assert_eq!(fp(5).primitive_root(), 2);
        assert_eq!(fp(7).primitive_root(), 3);
        assert_eq!(fp(2).primitive_root(), 1);
    }

    #[test]
    fn char_two_doubling_vanishes() {
        let f = fp(2);
        let t = FpPoly::t(f);
        assert!(t.add(&t).is_zero());
    }

    #[test]
    fn frobenius_pow_matches_repeated_multiplication() {
        let f = fp(3);
        let g = FpPoly::from_i64s(f, &[1, -1, 2]);
        let mut acc = FpPoly::one(f);
        for e in 0..40u64 {
            assert_eq!(g.pow(e).unwrap(), acc, "e = {e}");
            acc = acc.mul(&g);
        }
    }

    #[test]
    fn pow_refuses_beyond_cap() {
        let f = fp(2);
        let g = FpPoly::from_i64s(f, &[1, 1]);
        assert!(matches!(g.pow(DEGREE_CAP + 1), Err(Error::DegreeCap { .. })));
    }

    #[test]
    fn modpow_examples() {
        // t^3 = 1 in F_4^*; unit group of F_9 has order 8.
        let f2 = fp(2);
        let m = FpPoly::from_i64s(f2, &[1, 1, 1]);
        let t = FpPoly::t(f2);
        assert!(t.modpow(&BigUint::from(3u32), &m).is_one());
        let f3 = fp(3);
        let m = FpPoly::from_i64s(f3, &[1, 0, 1]);
        assert!(FpPoly::t(f3).modpow(&BigUint::from(8u32), &m).is_one());
        assert!(FpPoly::t(f3).modpow(&BigUint::from(0u32), &m).is_one());
    }

    #[test]
    fn inverse_mod_round_trips() {
        let f = fp(5);
        let m = FpPoly::from_i64s(f, &[1, 1, 0, 1]);
        let a = FpPoly::from_i64s(f, &[3, 1]);
        let inv = a.inv_mod(&m).unwrap();
        assert!(a.mul_mod(&inv, &m).is_one());
        let g = FpPoly::from_i64s(f, &[0, 1]);
        assert!(g.mul(&a).inv_mod(&g.mul(&m)).is_err());
    }

    #[test]
    fn display_is_descending() {
        let f = fp(5);
        assert_eq!(FpPoly::from_i64s(f, &[1, 0, 3]).to_string(), "3*t^2 + 1");
        assert_eq!(FpPoly::from_i64s(f, &[0, 1]).to_string(), "t");
        assert_eq!(FpPoly::zero(f).to_string(), "0");
    }
}
