//! Linear recurrence sequences over Q: evaluation, periodicity modulo M,
//! non-degenerate sectioning and the equation solvers with certification
//! statuses.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::{Error, Result};

pub mod decompose;
pub mod qpoly;
pub mod roots;
pub mod solve;

pub use decompose::{decompose_nondeg, NonDegSplit, Section, SectionKind};
pub use qpoly::QPoly;
pub use solve::{poly_power_form, solve_eq_const, solve_eq_parith, CertStatus, SearchBounds};

/// u_{n+m} + c_{m-1} u_{n+m-1} + ... + c_0 u_n = 0 with u_0..u_{m-1} given.
/// Order 0 is the zero sequence.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Lrs {
    coeffs: Vec<BigRational>,
    init: Vec<BigRational>,
}

impl Lrs {
    pub fn new(coeffs: Vec<BigRational>, init: Vec<BigRational>) -> Result<Self> {
        if coeffs.len() != init.len() {
            return Err(Error::Invalid(format!(
                "recurrence of order {} needs {} initial terms, got {}",
                coeffs.len(),
                coeffs.len(),
                init.len()
            )));
        }
        Ok(Lrs { coeffs, init })
    }

    pub fn from_ints(coeffs: &[i64], init: &[i64]) -> Result<Self> {
        let r = |v: &[i64]| v.iter().map(|&x| qpoly::rat(x)).collect();
        Self::new(r(coeffs), r(init))
    }

    pub fn zero() -> Self {
        Lrs { coeffs: Vec::new(), init: Vec::new() }
    }

    /// The constant sequence c.
    pub fn constant(c: BigRational) -> Self {
        Lrs { coeffs: vec![-BigRational::one()], init: vec![c] }
    }

    /// Minimal recurrence fitted to `terms` (Berlekamp–Massey); exact when
    /// the true order is at most half the number of terms.
    pub fn from_terms(terms: &[BigRational]) -> Self {
        let coeffs = berlekamp_massey(terms);
        let init = terms[..coeffs.len()].to_vec();
        Lrs { coeffs, init }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn init(&self) -> &[BigRational] {
        &self.init
    }

    /// x^m + c_{m-1} x^{m-1} + ... + c_0.
    pub fn charpoly(&self) -> QPoly {
        QPoly::monic_from_tail(&self.coeffs)
    }

    /// Coefficients and initial terms are integers (so every term is).
    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().chain(&self.init).all(BigRational::is_integer)
    }

    /// The first `count` terms.
    pub fn terms(&self, count: usize) -> Vec<BigRational> {
        let m = self.order();
        if m == 0 {
            return vec![BigRational::zero(); count];
        }
        if self.is_integral() {
            return self.integer_terms(count).into_iter().map(BigRational::from_integer).collect();
        }
        let mut out: Vec<BigRational> = self.init.iter().take(count).cloned().collect();
        while out.len() < count {
            let n = out.len() - m;
            let mut next = BigRational::zero();
            for (i, c) in self.coeffs.iter().enumerate() {
                if !c.is_zero() {
                    next -= c * &out[n + i];
                }
            }
            out.push(next);
        }
        out
    }

    fn integer_terms(&self, count: usize) -> Vec<BigInt> {
        let m = self.order();
        let c: Vec<BigInt> = self.coeffs.iter().map(BigRational::to_integer).collect();
        let mut out: Vec<BigInt> = self.init.iter().take(count).map(BigRational::to_integer).collect();
        while out.len() < count {
            let n = out.len() - m;
            let mut next = BigInt::zero();
            for (i, ci) in c.iter().enumerate() {
                if !ci.is_zero() {
                    next -= ci * &out[n + i];
                }
            }
            out.push(next);
        }
        out
    }

    /// u_n; for large n via x^n mod the characteristic polynomial.
    pub fn eval(&self, n: u64) -> BigRational {
        let m = self.order();
        if m == 0 {
            return BigRational::zero();
        }
        if n < 512 {
            return self.terms(n as usize + 1).pop().unwrap();
        }
        let f = self.charpoly();
        let mut result = QPoly::one();
        let mut base = QPoly::x().rem(&f);
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base).rem(&f);
            }
            base = base.mul(&base).rem(&f);
            e >>= 1;
        }
        (0..m).fold(BigRational::zero(), |acc, i| acc + result.coeff(i) * &self.init[i])
    }

    /// The sequence n ↦ u_{n+s}.
    pub fn shift(&self, s: usize) -> Self {
        let m = self.order();
        let terms = self.terms(s + m);
        Lrs { coeffs: self.coeffs.clone(), init: terms[s..].to_vec() }
    }

    /// Minimal recurrence for the same sequence.
    pub fn minimize(&self) -> Self {
        let m = self.order();
        if m == 0 {
            return self.clone();
        }
        Self::from_terms(&self.terms(2 * m))
    }

    /// Splits off zero characteristic roots: returns b and the sequence
    /// n ↦ u_{n+b}, whose recurrence has nonzero constant coefficient.
    pub fn strip_zero_roots(&self) -> (usize, Self) {
        let b = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if b == 0 {
            return (0, self.clone());
        }
        let terms = self.terms(self.order());
        let coeffs = self.coeffs[b..].to_vec();
        let init = terms[b..].to_vec();
        (b, Lrs { coeffs, init })
    }

    /// Same sequence with a recurrence multiplied by `g` (monic).
    pub fn with_factor(&self, g: &QPoly) -> Self {
        let f = self.charpoly().mul(g);
        let d = f.degree().unwrap();
        let coeffs = (0..d).map(|i| f.coeff(i)).collect();
        Lrs { coeffs, init: self.terms(d) }
    }

    /// Termwise a·u + b·v.
    pub fn combine(a: &BigRational, u: &Lrs, b: &BigRational, v: &Lrs) -> Self {
        let f = u.charpoly().mul(&v.charpoly());
        let d = f.degree().unwrap();
        let (tu, tv) = (u.terms(2 * d), v.terms(2 * d));
        let terms: Vec<BigRational> = tu.iter().zip(&tv).map(|(x, y)| a * x + b * y).collect();
        Self::from_terms(&terms)
    }

    /// The constant-offset sequence u_n - c.
    pub fn minus_constant(&self, c: &BigRational) -> Self {
        Self::combine(&BigRational::one(), self, &-BigRational::one(), &Lrs::constant(c.clone()))
    }

    /// Termwise u_n mod M for integral sequences, as a cycle: returns the
    /// minimal preperiod and period of the residue sequence.
    pub fn period_mod(&self, modulus: u64) -> Result<(u64, u64)> {
        if !self.is_integral() {
            return Err(Error::NonInteger);
        }
        if modulus == 0 {
            return Err(Error::Invalid("modulus must be positive".into()));
        }
        let md = modulus as i128;
        let red = |x: &BigRational| -> i128 { (x.to_integer() % BigInt::from(modulus)).to_i128().unwrap().rem_euclid(md) };
        let c: Vec<i128> = self.coeffs.iter().map(red).collect();
        let mut state: Vec<i128> = self.init.iter().map(red).collect();
        if state.is_empty() {
            return Ok((0, 1));
        }
        let mut seen: HashMap<Vec<i128>, u64> = HashMap::new();
        let mut n = 0u64;
        loop {
            if let Some(&first) = seen.get(&state) {
                // the state determines the term and conversely, so the
                // state cycle is the residue cycle
                return Ok((first, n - first));
            }
            seen.insert(state.clone(), n);
            let next = -c.iter().zip(&state).map(|(a, b)| a * b).sum::<i128>();
            state.remove(0);
            state.push(next.rem_euclid(md));
            n += 1;
        }
    }

    /// u_0..u_{count-1} mod M.
    pub fn residues(&self, modulus: u64, count: usize) -> Vec<u64> {
        let md = modulus as i128;
        let red = |x: &BigRational| -> i128 { (x.to_integer() % BigInt::from(modulus)).to_i128().unwrap().rem_euclid(md) };
        let c: Vec<i128> = self.coeffs.iter().map(red).collect();
        let m = c.len();
        let mut out: Vec<i128> = self.init.iter().map(red).take(count).collect();
        if m == 0 {
            return vec![0; count];
        }
        while out.len() < count {
            let n = out.len() - m;
            let next = -(0..m).map(|i| c[i] * out[n + i]).sum::<i128>();
            out.push(next.rem_euclid(md));
        }
        out.into_iter().map(|x| x as u64).collect()
    }
}

/// Minimal recurrence c_0..c_{L-1} (convention u_{n+L} + Σ c_i u_{n+i} = 0)
/// generating `s`.
pub fn berlekamp_massey(s: &[BigRational]) -> Vec<BigRational> {
    // connection polynomial C(x) = 1 + C_1 x + ... + C_L x^L
    let mut c = vec![BigRational::one()];
    let mut b = vec![BigRational::one()];
    let mut l = 0usize;
    let mut m = 1usize;
    let mut bd = BigRational::one();
    for n in 0..s.len() {
        let mut d = s[n].clone();
        for i in 1..=l {
            if i < c.len() {
                d += &c[i] * &s[n - i];
            }
        }
        if d.is_zero() {
            m += 1;
            continue;
        }
        let coef = &d / &bd;
        let old = c.clone();
        if c.len() < b.len() + m {
            c.resize(b.len() + m, BigRational::zero());
        }
        for (i, bi) in b.iter().enumerate() {
            c[i + m] -= &coef * bi;
        }
        if 2 * l <= n {
            l = n + 1 - l;
            b = old;
            bd = d;
            m = 1;
        } else {
            m += 1;
        }
    }
    c.resize(l + 1, BigRational::zero());
    (0..l).map(|i| c[l - i].clone()).collect()
}

fn rat_str(x: &BigRational) -> String {
    crate::seq::fmt_rat(x)
}

#[derive(Serialize, Deserialize)]
struct LrsJson {
    coeffs: Vec<String>,
    init: Vec<String>,
}

impl Serialize for Lrs {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        LrsJson { coeffs: self.coeffs.iter().map(rat_str).collect(), init: self.init.iter().map(rat_str).collect() }
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Lrs {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = LrsJson::deserialize(d)?;
        let parse = |v: &[String]| -> std::result::Result<Vec<BigRational>, D::Error> {
            v.iter().map(|x| parse_q(x).map_err(D::Error::custom)).collect()
        };
        Lrs::new(parse(&j.coeffs)?, parse(&j.init)?).map_err(D::Error::custom)
    }
}

/// Parses "3", "-1/3".
pub fn parse_q(text: &str) -> Result<BigRational> {
    let t = text.trim();
    let bad = || Error::Invalid(format!("not a rational number: {text:?}"));
    match t.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::DivisionByZero);
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(t.parse().map_err(|_| bad())?)),
    }
}

impl fmt::Display for Lrs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c: Vec<String> = self.coeffs.iter().map(rat_str).collect();
        let i: Vec<String> = self.init.iter().map(rat_str).collect();
        write!(f, "Lrs(coeffs=[{}], init=[{}])", c.join(", "), i.join(", "))
    }
}

impl fmt::Debug for Lrs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
