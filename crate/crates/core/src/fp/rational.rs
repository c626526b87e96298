use std::fmt;

use super::{Fp, FpPoly};
use crate::error::{Error, Result};

/// An element of F_p(t) in lowest terms with a monic denominator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FpRational {
    num: FpPoly,
    den: FpPoly,
}

impl FpRational {
    /// Normalizes `num / den`.
    pub fn new(num: FpPoly, den: FpPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let field = num.field();
        if num.is_zero() {
            return Ok(Self::zero(field));
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g), den.div_exact(&g))
        };
        if !den.is_monic() {
            let inv = field.inv(den.lead())?;
            num = num.scale(inv);
            den = den.scale(inv);
        }
        Ok(FpRational { num, den })
    }

    pub fn from_poly(num: FpPoly) -> Self {
        let den = FpPoly::one(num.field());
        FpRational { num, den }
    }

    pub fn zero(field: Fp) -> Self {
        Self::from_poly(FpPoly::zero(field))
    }

    pub fn one(field: Fp) -> Self {
        Self::from_poly(FpPoly::one(field))
    }

    pub fn constant(field: Fp, c: u64) -> Self {
        Self::from_poly(FpPoly::constant(field, c))
    }

    pub fn t(field: Fp) -> Self {
        Self::from_poly(FpPoly::t(field))
    }

    pub fn field(&self) -> Fp {
        self.num.field()
    }

    pub fn num(&self) -> &FpPoly {
        &self.num
    }

    pub fn den(&self) -> &FpPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// True when the denominator is 1.
    pub fn is_poly(&self) -> bool {
        self.den.is_one()
    }

    /// Largest of numerator and denominator degree.
    pub fn height(&self) -> usize {
        self.num.degree().unwrap_or(0).max(self.den.degree().unwrap_or(0))
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.den == other.den {
            return Self::new(self.num.add(&other.num), self.den.clone()).unwrap();
        }
        let num = self.num.mul(&other.den).add(&other.num.mul(&self.den));
        Self::new(num, self.den.mul(&other.den)).unwrap()
    }

    pub fn neg(&self) -> Self {
        FpRational { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.mul_capped(other).expect("degree cap exceeded in FpRational::mul")
    }

    /// Product with cross-cancellation; refuses results above the degree cap.
    pub fn mul_capped(&self, other: &Self) -> Result<Self> {
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.field()));
        }
        let g1 = self.num.gcd(&other.den);
        let g2 = other.num.gcd(&self.den);
        let (a, d) = cancel(&self.num, &other.den, &g1);
        let (c, b) = cancel(&other.num, &self.den, &g2);
        let num = a.mul_capped(&c)?;
        let den = b.mul_capped(&d)?;
        // Already coprime; only the leading coefficient needs fixing.
        let inv = self.field().inv(den.lead())?;
        Ok(FpRational { num: num.scale(inv), den: den.scale(inv) })
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }

    /// Integer power; negative exponents invert first.
    pub fn pow(&self, e: i64) -> Result<Self> {
        if e < 0 {
            return self.inv()?.pow(-e);
        }
        let e = e as u64;
        Ok(FpRational { num: self.num.pow(e)?, den: self.den.pow(e)? })
    }
}

fn cancel(a: &FpPoly, b: &FpPoly, g: &FpPoly) -> (FpPoly, FpPoly) {
    if g.is_one() {
        (a.clone(), b.clone())
    } else {
        (a.div_exact(g), b.div_exact(g))
    }
}

impl fmt::Display for FpRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for FpRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FpRational[p={}]({})", self.field().p(), self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fp::parse_rational;

    fn q(p: u64, s: &str) -> FpRational {
        parse_rational(s, Fp::new(p).unwrap()).unwrap()
    }

    #[test]
    fn inverse_pair_multiplies_to_one() {
        assert!(q(3, "t/(1-t)").mul(&q(3, "(1-t)/t")).is_one());
    }

    #[test]
    fn sum_of_example_operands() {
        assert_eq!(q(3, "(1+t) + (1-t)"), FpRational::constant(Fp::new(3).unwrap(), 2));
    }

    #[test]
    fn char_two_sum_is_zero() {
        assert!(q(2, "t").add(&q(2, "t")).is_zero());
    }

    #[test]
    fn division_by_zero_is_reported() {
        assert_eq!(q(5, "t").div(&q(5, "0")), Err(Error::DivisionByZero));
    }

    #[test]
    fn normal_form_has_monic_denominator() {
        let r = q(5, "(2*t + 2)/(3*t^2 + 3*t)");
        assert!(r.den().is_monic());
        assert_eq!(r.num().gcd(r.den()), FpPoly::one(r.field()));
        assert_eq!(r.to_string(), "(4)/(t)");
    }
}
