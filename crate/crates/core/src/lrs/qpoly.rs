//! Dense univariate polynomials over Q, with cyclotomic helpers.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QPoly {
    coeffs: Vec<BigRational>,
}

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl QPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| rat(x)).collect())
    }

    pub fn from_bigints(c: &[BigInt]) -> Self {
        Self::new(c.iter().map(|x| BigRational::from_integer(x.clone())).collect())
    }

    /// `x^l + c_{l-1} x^{l-1} + ... + c_0` from `c_0..c_{l-1}`.
    pub fn monic_from_tail(c: &[BigRational]) -> Self {
        let mut v = c.to_vec();
        v.push(BigRational::one());
        Self::new(v)
    }

    pub fn zero() -> Self {
        QPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn x() -> Self {
        Self::from_ints(&[0, 1])
    }

    pub fn constant(c: BigRational) -> Self {
        Self::new(vec![c])
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> BigRational {
        self.coeffs.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(BigRational::is_integer)
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.lead();
        Self::new(self.coeffs.iter().map(|c| c / &l).collect())
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| acc.mul(self))
    }

    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by the zero polynomial");
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let lead = d.lead();
        let mut q = vec![BigRational::zero(); r.len() - dd];
        for i in (0..q.len()).rev() {
            let c = &r[i + dd] / &lead;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    r[i + j] -= &c * dc;
                }
            }
            q[i] = c;
        }
        r.truncate(dd);
        (Self::new(q), Self::new(r))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.div_rem(d).1
    }

    /// Monic gcd.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * rat(i as i64)).collect())
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    /// Multiplicity of x as a factor, and the cofactor.
    pub fn strip_x(&self) -> (usize, Self) {
        let a = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        (a, Self::new(self.coeffs[a.min(self.coeffs.len())..].to_vec()))
    }

    /// Substitutes x -> x^k.
    pub fn spread(&self, k: usize) -> Self {
        let mut out = vec![BigRational::zero(); self.coeffs.len().saturating_sub(1) * k + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i * k] = c.clone();
        }
        Self::new(out)
    }

    /// x^d f(1/x) with d = deg f.
    pub fn reversed(&self) -> Self {
        let mut c = self.coeffs.clone();
        c.reverse();
        Self::new(c)
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let show_coeff = i == 0 || !a.is_one();
            if show_coeff {
                write!(f, "{a}")?;
                if i > 0 {
                    write!(f, "*")?;
                }
            }
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QPoly({self})")
    }
}

pub fn euler_phi(mut m: u64) -> u64 {
    let mut out = m;
    let mut q = 2;
    while q * q <= m {
        if m.is_multiple_of(q) {
            while m.is_multiple_of(q) {
                m /= q;
            }
            out -= out / q;
        }
        q += 1;
    }
    if m > 1 {
        out -= out / m;
    }
    out
}

fn mobius(mut m: u64) -> i32 {
    let mut out = 1;
    let mut q = 2;
    while q * q <= m {
        if m.is_multiple_of(q) {
            m /= q;
            if m.is_multiple_of(q) {
                return 0;
            }
            out = -out;
        }
        q += 1;
    }
    if m > 1 {
        out = -out;
    }
    out
}

/// The m-th cyclotomic polynomial, as prod over d | m of (x^d - 1)^mu(m/d).
pub fn cyclotomic(m: u64) -> QPoly {
    let mut num = QPoly::one();
    let mut den = QPoly::one();
    for d in (1..=m).filter(|d| m.is_multiple_of(*d)) {
        let f = QPoly::x().spread(d as usize).sub(&QPoly::one());
        match mobius(m / d) {
            1 => num = num.mul(&f),
            -1 => den = den.mul(&f),
            _ => {}
        }
    }
    num.div_rem(&den).0
}

/// All m with phi(m) <= d, in increasing order.
pub fn orders_up_to_phi(d: usize) -> Vec<u64> {
    // phi(m) >= sqrt(m/2), so m <= 2 d^2 suffices.
    let bound = 2 * (d as u64).pow(2).max(1) + 2;
    (1..=bound).filter(|&m| euler_phi(m) <= d as u64).collect()
}

/// Split of a nonzero polynomial as x^a * prod Phi_m^e * rest with `rest`
/// free of cyclotomic factors.
#[derive(Clone, Debug)]
pub struct CyclotomicSplit {
    pub x_power: usize,
    pub cyclotomic: Vec<(u64, u32)>,
    pub rest: QPoly,
}

impl CyclotomicSplit {
    /// lcm of the orders of the cyclotomic factors.
    pub fn order_lcm(&self) -> u64 {
        self.cyclotomic.iter().fold(1, |acc, &(m, _)| acc.lcm(&m))
    }
}

pub fn split_cyclotomic(f: &QPoly) -> CyclotomicSplit {
    let (x_power, mut rest) = f.strip_x();
    let mut cyclo = Vec::new();
    let deg = rest.degree().unwrap_or(0);
    if deg > 0 {
        for m in orders_up_to_phi(deg) {
            let phi = cyclotomic(m);
            let mut e = 0;
            while rest.degree().unwrap_or(0) >= phi.degree().unwrap() {
                let (q, r) = rest.div_rem(&phi);
                if !r.is_zero() {
                    break;
                }
                rest = q;
                e += 1;
            }
            if e > 0 {
                cyclo.push((m, e));
            }
        }
    }
    CyclotomicSplit { x_power, cyclotomic: cyclo, rest }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_values() {
        assert_eq!(cyclotomic(1), QPoly::from_ints(&[-1, 1]));
        assert_eq!(cyclotomic(4), QPoly::from_ints(&[1, 0, 1]));
        assert_eq!(cyclotomic(6), QPoly::from_ints(&[1, -1, 1]));
        assert_eq!(cyclotomic(12), QPoly::from_ints(&[1, 0, -1, 0, 1]));
        for m in 1..40u64 {
            assert_eq!(cyclotomic(m).degree().unwrap() as u64, euler_phi(m));
        }
    }

    #[test]
    fn split_examples() {
        // x^2 (x - 1)^2 (x^2 + 1) (x - 3)
        let f = QPoly::from_ints(&[0, 0, 1])
            .mul(&QPoly::from_ints(&[-1, 1]).pow(2))
            .mul(&QPoly::from_ints(&[1, 0, 1]))
            .mul(&QPoly::from_ints(&[-3, 1]));
        let s = split_cyclotomic(&f);
        assert_eq!(s.x_power, 2);
        assert_eq!(s.cyclotomic, vec![(1, 2), (4, 1)]);
        assert_eq!(s.rest, QPoly::from_ints(&[-3, 1]));
        assert_eq!(s.order_lcm(), 4);
    }

    #[test]
    fn display() {
        assert_eq!(QPoly::from_ints(&[1, -2, 1]).to_string(), "x^2 - 2*x + 1");
        assert_eq!(QPoly::from_ints(&[-3, 1]).to_string(), "x - 3");
    }

    #[test]
    fn phi_bound_covers_all_orders() {
        let ms = orders_up_to_phi(4);
        assert_eq!(ms, vec![1, 2, 3, 4, 5, 6, 8, 10, 12]);
    }
}
