use std::collections::BTreeMap;
use std::fmt;

use super::{Fp, FpRational};
use crate::error::{Error, Result};

/// Exponent vector of a Laurent monomial in x1..xN.
pub type Monomial = Vec<i64>;

/// A Laurent polynomial in x1..xN with coefficients in F_p(t).
#[derive(Clone, PartialEq, Eq)]
pub struct LaurentPoly {
    field: Fp,
    nvars: usize,
    terms: BTreeMap<Monomial, FpRational>,
}

impl LaurentPoly {
    pub fn zero(field: Fp, nvars: usize) -> Self {
        LaurentPoly { field, nvars, terms: BTreeMap::new() }
    }

    pub fn constant(c: FpRational, nvars: usize) -> Self {
        let mut out = Self::zero(c.field(), nvars);
        out.insert(vec![0; nvars], c);
        out
    }

    /// The variable x_{i+1}.
    pub fn var(field: Fp, nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::term(FpRational::one(field), e)
    }

    pub fn term(c: FpRational, e: Monomial) -> Self {
        let mut out = Self::zero(c.field(), e.len());
        out.insert(e, c);
        out
    }

    fn insert(&mut self, e: Monomial, c: FpRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(old) => {
                let s = old.add(&c);
                if s.is_zero() {
                    self.terms.remove(&e);
                } else {
                    *old = s;
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn field(&self) -> Fp {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &FpRational)> {
        self.terms.iter()
    }

    /// The coefficient when this is a constant (or zero), otherwise `None`.
    pub fn as_constant(&self) -> Option<FpRational> {
        match self.terms.len() {
            0 => Some(FpRational::zero(self.field)),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                e.iter().all(|&x| x == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        LaurentPoly {
            field: self.field,
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c.neg())).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let mut out = Self::zero(self.field, self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Monomial = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.insert(e, c1.mul_capped(c2)?);
            }
        }
        Ok(out)
    }

    /// Division by a single-term Laurent polynomial.
    pub fn div(&self, other: &Self) -> Result<Self> {
        self.mul(&other.term_inverse()?)
    }

    fn term_inverse(&self) -> Result<Self> {
        match self.terms.len() {
            0 => Err(Error::DivisionByZero),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                Ok(Self::term(c.inv()?, e.iter().map(|x| -x).collect()))
            }
            _ => Err(Error::Invalid("division by a multi-term Laurent polynomial".into())),
        }
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        if e < 0 {
            return self.term_inverse()?.pow(-e);
        }
        let mut out = Self::constant(FpRational::one(self.field), self.nvars);
        let mut base = self.clone();
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                out = out.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(out)
    }

    /// Exact evaluation at a point with nonzero coordinates.
    pub fn eval(&self, x: &[FpRational]) -> Result<FpRational> {
        let mut acc = FpRational::zero(self.field);
        for (e, c) in &self.terms {
            let mut v = c.clone();
            for (xi, &k) in x.iter().zip(e) {
                if k != 0 {
                    v = v.mul_capped(&xi.pow(k)?)?;
                }
            }
            acc = acc.add(&v);
        }
        Ok(acc)
    }

    /// Largest absolute exponent over all terms and variables.
    pub fn max_abs_exponent(&self) -> u64 {
        self.terms.keys().flatten().map(|k| k.unsigned_abs()).max().unwrap_or(0)
    }

    fn canonical_order(&self) -> Vec<(&Monomial, &FpRational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        // Total degree ascending, then x1-heavy monomials first.
        v.sort_by(|(a, _), (b, _)| {
            let da: i64 = a.iter().sum();
            let db: i64 = b.iter().sum();
            da.cmp(&db).then_with(|| b.cmp(a))
        });
        v
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.canonical_order() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let vars: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k != 0)
                .map(|(i, &k)| if k == 1 { format!("x{}", i + 1) } else { format!("x{}^{}", i + 1, k) })
                .collect();
            let simple = c.is_poly() && c.num().coeffs().filter(|&a| a != 0).count() == 1;
            let coeff = if simple { c.to_string() } else { format!("({c})") };
            if vars.is_empty() {
                write!(f, "{coeff}")?;
            } else if c.is_one() {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{coeff}*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly[p={}, N={}]({})", self.field.p(), self.nvars, self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fp::{parse_laurent, parse_rational};

    #[test]
    fn evaluates_line_from_example() {
        let f = Fp::new(2).unwrap();
        let v = parse_laurent("t*x1 + (1-t)*x2 - 1", f, 2).unwrap();
        let t = FpRational::t(f);
        let pt = [t.pow(-1).unwrap(), FpRational::one(f)];
        // t * t^-1 + (1+t) * 1 + 1 = t + 1 over F_2
        assert_eq!(v.eval(&pt).unwrap(), t.add(&FpRational::one(f)));
    }

    #[test]
    fn zero_terms_cancel() {
        let f = Fp::new(3).unwrap();
        let a = parse_laurent("x1 + x2", f, 2).unwrap();
        let b = parse_laurent("2*x1", f, 2).unwrap();
        assert_eq!(a.add(&b).to_string(), "x2");
    }

    #[test]
    fn canonical_ordering() {
        let f = Fp::new(5).unwrap();
        let v = parse_laurent("x2^2 + x1 + 3 + x1^-1*x2", f, 2).unwrap();
        assert_eq!(v.to_string(), "3 + x1^-1*x2 + x1 + x2^2");
        let c = parse_rational("t^2 + 1", f).unwrap();
        assert_eq!(LaurentPoly::constant(c, 2).to_string(), "(t^2 + 1)");
    }
}
