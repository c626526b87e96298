//! Splitting a recurrence into non-degenerate sections n ↦ u_{nM+l}.

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::qpoly::{split_cyclotomic, QPoly};
use super::roots::{dominance, squarefree};
use super::Lrs;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SectionKind {
    /// identically zero
    Zero,
    /// every nonzero characteristic root equals 1
    PolynomialOnly,
    /// a simple real root strictly dominating the others
    SingleDominant,
    General,
}

#[derive(Clone, Debug)]
pub struct Section {
    pub offset: u64,
    pub seq: Lrs,
    pub kind: SectionKind,
}

#[derive(Clone, Debug)]
pub struct NonDegSplit {
    pub modulus: u64,
    pub sections: Vec<Section>,
}

/// Power sums p_1..p_count of the roots of a monic polynomial (Newton).
fn power_sums(f: &QPoly, count: usize) -> Vec<BigRational> {
    let d = f.degree().unwrap();
    let a = |i: usize| f.coeff(i);
    let mut p = vec![BigRational::zero(); count + 1];
    for k in 1..=count {
        let mut s = BigRational::zero();
        for i in 1..k.min(d + 1) {
            s += a(d - i) * &p[k - i];
        }
        if k <= d {
            s += a(d - k) * BigRational::from_integer(k.into());
        }
        p[k] = -s;
    }
    p
}

/// Monic polynomial of degree n from its power sums p_1..p_n.
fn from_power_sums(p: &[BigRational], n: usize) -> QPoly {
    let mut e = vec![BigRational::one()];
    for k in 1..=n {
        let mut s = BigRational::zero();
        for i in 1..=k {
            let t = &e[k - i] * &p[i];
            if i % 2 == 1 {
                s += t;
            } else {
                s -= t;
            }
        }
        e.push(s / BigRational::from_integer(k.into()));
    }
    let coeffs = (0..=n).map(|j| {
        let k = n - j;
        if k.is_multiple_of(2) {
            e[k].clone()
        } else {
            -e[k].clone()
        }
    });
    QPoly::new(coeffs.collect())
}

/// The polynomial whose roots are all ratios r_i / r_j of the roots of `f`
/// (monic, nonzero constant term).
pub fn ratio_poly(f: &QPoly) -> QPoly {
    let d = f.degree().unwrap();
    let big = d * d;
    let rev = f.reversed().monic();
    let p = power_sums(f, big);
    let q = power_sums(&rev, big);
    let s: Vec<BigRational> = p.iter().zip(&q).map(|(a, b)| a * b).collect();
    from_power_sums(&s, big)
}

/// lcm of the orders of the roots of unity among the roots of `f` and the
/// ratios of its roots.
pub fn degeneracy_modulus(f: &QPoly) -> u64 {
    let (_, g) = f.strip_x();
    let g = squarefree(&g);
    if g.degree().unwrap_or(0) == 0 {
        return 1;
    }
    let own = split_cyclotomic(&g).order_lcm();
    let ratios = squarefree(&ratio_poly(&g));
    own.lcm(&split_cyclotomic(&ratios).order_lcm())
}

pub fn classify(seq: &Lrs) -> SectionKind {
    if seq.order() == 0 {
        return SectionKind::Zero;
    }
    let (_, tail) = seq.strip_zero_roots();
    if tail.order() == 0 {
        return SectionKind::Zero;
    }
    let split = split_cyclotomic(&tail.charpoly());
    if split.rest.degree() == Some(0) && split.cyclotomic.iter().all(|&(m, _)| m == 1) {
        return SectionKind::PolynomialOnly;
    }
    if dominance(&tail.charpoly()).is_some() {
        SectionKind::SingleDominant
    } else {
        SectionKind::General
    }
}

pub fn decompose_nondeg(u: &Lrs) -> NonDegSplit {
    let u = u.minimize();
    let d = u.order();
    let modulus = if d == 0 { 1 } else { degeneracy_modulus(&u.charpoly()) };
    let per = 2 * d + 2;
    let terms = u.terms(modulus as usize * per);
    let sections = (0..modulus)
        .map(|l| {
            let sub: Vec<BigRational> = (0..per).map(|n| terms[n * modulus as usize + l as usize].clone()).collect();
            let seq = Lrs::from_terms(&sub);
            let kind = classify(&seq);
            Section { offset: l, seq, kind }
        })
        .collect();
    NonDegSplit { modulus, sections }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lrs::qpoly::rat;

    #[test]
    fn ratio_poly_of_opposite_roots() {
        // roots 2, -2: ratios 1, 1, -1, -1
        let r = ratio_poly(&QPoly::from_ints(&[-4, 0, 1]));
        assert_eq!(r, QPoly::from_ints(&[-1, 1]).pow(2).mul(&QPoly::from_ints(&[1, 1]).pow(2)));
    }

    #[test]
    fn two_to_n_plus_minus_two_to_n() {
        let u = Lrs::from_ints(&[-4, 0], &[2, 0]).unwrap();
        let s = decompose_nondeg(&u);
        assert_eq!(s.modulus, 2);
        assert_eq!(s.sections[0].seq, Lrs::new(vec![rat(-4)], vec![rat(2)]).unwrap());
        assert_eq!(s.sections[1].seq, Lrs::zero());
        assert_eq!(s.sections[1].kind, SectionKind::Zero);
        assert_eq!(s.sections[0].kind, SectionKind::SingleDominant);
    }

    #[test]
    fn fibonacci_is_nondegenerate() {
        let s = decompose_nondeg(&Lrs::from_ints(&[-1, -1], &[0, 1]).unwrap());
        assert_eq!(s.modulus, 1);
        assert_eq!(s.sections[0].kind, SectionKind::SingleDominant);
    }

    #[test]
    fn alternating_sign() {
        let s = decompose_nondeg(&Lrs::from_ints(&[1], &[1]).unwrap());
        assert_eq!(s.modulus, 2);
        assert_eq!(s.sections[0].seq, Lrs::constant(rat(1)));
        assert_eq!(s.sections[1].seq, Lrs::constant(rat(-1)));
        assert_eq!(s.sections[0].kind, SectionKind::PolynomialOnly);
    }

    #[test]
    fn sixth_roots_and_ratios() {
        // roots 2 and 2 * zeta_3: x^3 - 8 has ratios of order 3
        let s = decompose_nondeg(&Lrs::from_ints(&[-8, 0, 0], &[1, 3, 5]).unwrap());
        assert_eq!(s.modulus, 3);
        // u_n = cos-like oscillation with x^2 - x + 1 (primitive 6th roots)
        let s = decompose_nondeg(&Lrs::from_ints(&[1, -1], &[0, 1]).unwrap());
        assert_eq!(s.modulus, 6);
        assert!(s.sections.iter().all(|x| matches!(x.kind, SectionKind::PolynomialOnly | SectionKind::Zero)));
    }
}
