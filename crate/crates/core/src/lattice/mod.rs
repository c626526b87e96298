//! Additive encoding of finitely generated subgroups of G_m^N(F_p(t)):
//! a point becomes (discrete logs of its unit parts, exponent matrix over a
//! basis of monic irreducibles).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fp::{factor, Fp, FpPoly, FpRational};
use crate::linalg::{snf, IMat, Snf};

/// Append-only list of monic irreducibles plus a generator of F_p^*.
#[derive(Clone, Debug)]
pub struct SupportBasis {
    field: Fp,
    primes: Vec<FpPoly>,
    torsion_generator: u64,
    dlog: Option<Vec<u32>>,
}

impl SupportBasis {
    pub fn new(field: Fp) -> Self {
        let g = field.primitive_root();
        let p = field.p();
        let dlog = (p <= 1 << 22).then(|| {
            let mut table = vec![0u32; p as usize];
            let mut x = 1;
            for k in 0..p - 1 {
                table[x as usize] = k as u32;
                x = field.mul(x, g);
            }
            table
        });
        SupportBasis { field, primes: Vec::new(), torsion_generator: g, dlog }
    }

    /// A basis with the given primes (made monic), in the given order.
    pub fn with_primes(field: Fp, primes: Vec<FpPoly>) -> Self {
        let mut b = Self::new(field);
        for q in primes {
            b.index_of_or_insert(&q.monic());
        }
        b
    }

    pub fn field(&self) -> Fp {
        self.field
    }

    pub fn primes(&self) -> &[FpPoly] {
        &self.primes
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    pub fn torsion_generator(&self) -> u64 {
        self.torsion_generator
    }

    /// Order of F_p^*, the modulus of torsion coordinates.
    pub fn torsion_order(&self) -> u64 {
        self.field.p() - 1
    }

    fn index_of_or_insert(&mut self, q: &FpPoly) -> usize {
        match self.primes.iter().position(|x| x == q) {
            Some(i) => i,
            None => {
                self.primes.push(q.clone());
                self.primes.len() - 1
            }
        }
    }

    /// Discrete logarithm of a nonzero constant with respect to the
    /// torsion generator.
    pub fn dlog(&self, u: u64) -> u64 {
        assert!(u != 0 && u < self.field.p());
        if let Some(t) = &self.dlog {
            return t[u as usize] as u64;
        }
        let mut x = 1;
        for k in 0..self.field.p() - 1 {
            if x == u {
                return k;
            }
            x = self.field.mul(x, self.torsion_generator);
        }
        unreachable!("generator is primitive")
    }

    /// Encodes one coordinate, extending the basis as needed.
    fn encode_coord(&mut self, r: &FpRational) -> (BigInt, Vec<(usize, BigInt)>) {
        let mut expo = Vec::new();
        let nf = factor(r.num()).expect("nonzero numerator");
        for (q, e) in nf.factors {
            expo.push((self.index_of_or_insert(&q), BigInt::from(e)));
        }
        let df = factor(r.den()).expect("nonzero denominator");
        for (q, e) in df.factors {
            expo.push((self.index_of_or_insert(&q), -BigInt::from(e)));
        }
        (BigInt::from(self.dlog(nf.unit)), expo)
    }

    /// Encodes a point, appending any new irreducibles to the basis.
    pub fn encode(&mut self, point: &[FpRational]) -> Result<PointRep> {
        let mut coords = Vec::with_capacity(point.len());
        for (i, r) in point.iter().enumerate() {
            if r.is_zero() {
                return Err(Error::ZeroCoordinate(i));
            }
            if r.field() != self.field {
                return Err(Error::BasisMismatch("point over a different field".into()));
            }
            coords.push(self.encode_coord(r));
        }
        let s = self.len();
        let mut rep = PointRep::zero(point.len(), s);
        for (i, (tors, expo)) in coords.into_iter().enumerate() {
            rep.tors[i] = tors;
            for (j, e) in expo {
                rep.expo[i][j] += e;
            }
        }
        Ok(rep)
    }

    /// Inverse of `encode`.
    pub fn decode(&self, v: &PointRep) -> Result<Vec<FpRational>> {
        if v.width() > self.len() {
            return Err(Error::BasisMismatch(format!(
                "representation has {} columns, basis has {}",
                v.width(),
                self.len()
            )));
        }
        let field = self.field;
        let order = BigInt::from(self.torsion_order());
        let mut out = Vec::with_capacity(v.dim());
        for i in 0..v.dim() {
            let k = v.tors[i].mod_floor(&order).to_u64().unwrap();
            let unit = field.pow(self.torsion_generator, k);
            let mut num = FpPoly::constant(field, unit);
            let mut den = FpPoly::one(field);
            for (j, e) in v.expo[i].iter().enumerate() {
                if e.is_zero() {
                    continue;
                }
                let mag = e.magnitude().to_u64().ok_or(Error::DegreeCap {
                    degree: u128::MAX,
                    cap: crate::fp::DEGREE_CAP,
                })?;
                let q = self.primes[j].pow(mag)?;
                if e.is_positive() {
                    num = num.mul_capped(&q)?;
                } else {
                    den = den.mul_capped(&q)?;
                }
            }
            out.push(FpRational::new(num, den)?);
        }
        Ok(out)
    }
}

/// Free-function form: returns the rep together with the extended basis.
pub fn encode(point: &[FpRational], basis: &SupportBasis) -> Result<(PointRep, SupportBasis)> {
    let mut b = basis.clone();
    let rep = b.encode(point)?;
    Ok((rep, b))
}

pub fn decode(v: &PointRep, basis: &SupportBasis) -> Result<Vec<FpRational>> {
    basis.decode(v)
}

/// Additive coordinates of a point of G_m^N: torsion discrete logs modulo
/// p-1 and an N x s exponent matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct PointRep {
    #[serde(serialize_with = "ser_vec")]
    pub tors: Vec<BigInt>,
    #[serde(serialize_with = "ser_mat")]
    pub expo: Vec<Vec<BigInt>>,
}

fn ser_vec<S: serde::Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

fn ser_mat<S: serde::Serializer>(m: &[Vec<BigInt>], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(m.iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>()))
}

impl PointRep {
    pub fn zero(n: usize, s: usize) -> Self {
        PointRep { tors: vec![BigInt::zero(); n], expo: vec![vec![BigInt::zero(); s]; n] }
    }

    pub fn dim(&self) -> usize {
        self.tors.len()
    }

    pub fn width(&self) -> usize {
        self.expo.first().map_or(0, Vec::len)
    }

    /// Adds zero columns up to width `s`.
    pub fn padded(&self, s: usize) -> Self {
        let mut out = self.clone();
        for row in out.expo.iter_mut() {
            row.resize(s.max(row.len()), BigInt::zero());
        }
        out
    }

    /// Reduces torsion entries into [0, order).
    pub fn normalized(&self, order: u64) -> Self {
        let m = BigInt::from(order);
        let mut out = self.clone();
        for x in out.tors.iter_mut() {
            *x = x.mod_floor(&m);
        }
        out
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&BigInt, &BigInt) -> BigInt) -> Self {
        let s = self.width().max(other.width());
        let (a, b) = (self.padded(s), other.padded(s));
        PointRep {
            tors: a.tors.iter().zip(&b.tors).map(|(x, y)| f(x, y)).collect(),
            expo: a
                .expo
                .iter()
                .zip(&b.expo)
                .map(|(r, q)| r.iter().zip(q).map(|(x, y)| f(x, y)).collect())
                .collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |x, y| x + y)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, |x, y| x - y)
    }

    pub fn neg(&self) -> Self {
        self.scale(&-BigInt::one())
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        PointRep {
            tors: self.tors.iter().map(|x| x * k).collect(),
            expo: self.expo.iter().map(|r| r.iter().map(|x| x * k).collect()).collect(),
        }
    }

    pub fn is_zero_mod(&self, order: u64) -> bool {
        let m = BigInt::from(order);
        self.tors.iter().all(|x| x.is_multiple_of(&m)) && self.expo.iter().flatten().all(Zero::is_zero)
    }

    /// Torsion entries followed by the exponent matrix in row-major order.
    pub fn flatten(&self) -> Vec<BigInt> {
        let mut v = self.tors.clone();
        for row in &self.expo {
            v.extend(row.iter().cloned());
        }
        v
    }

    /// Largest absolute exponent entry.
    pub fn max_abs_exponent(&self) -> BigInt {
        self.expo.iter().flatten().map(|x| x.abs()).max().unwrap_or_default()
    }
}

/// A subgroup H of the encoded group, with the Smith normal form of the
/// combined system [generators | (p-1) e_j for torsion coordinates].
#[derive(Clone, Debug)]
pub struct Subgroup {
    generators: Vec<PointRep>,
    dim: usize,
    width: usize,
    torsion_order: u64,
    matrix: IMat,
    snf: Snf,
}

impl Subgroup {
    pub fn new(generators: Vec<PointRep>, dim: usize, width: usize, torsion_order: u64) -> Result<Self> {
        if let Some(g) = generators.iter().find(|g| g.dim() != dim || g.width() > width) {
            return Err(Error::BasisMismatch(format!(
                "generator of shape {}x{} in a {}x{} subgroup",
                g.dim(),
                g.width(),
                dim,
                width
            )));
        }
        let generators: Vec<PointRep> = generators.iter().map(|g| g.padded(width)).collect();
        let rows = dim * (1 + width);
        let cols = generators.len() + dim;
        let mut matrix = vec![vec![BigInt::zero(); cols]; rows];
        for (j, g) in generators.iter().enumerate() {
            for (i, x) in g.flatten().into_iter().enumerate() {
                matrix[i][j] = x;
            }
        }
        for i in 0..dim {
            matrix[i][generators.len() + i] = BigInt::from(torsion_order);
        }
        let snf = snf(&matrix, rows, cols);
        Ok(Subgroup { generators, dim, width, torsion_order, matrix, snf })
    }

    /// The trivial subgroup.
    pub fn trivial(dim: usize, width: usize, torsion_order: u64) -> Self {
        Self::new(Vec::new(), dim, width, torsion_order).unwrap()
    }

    pub fn generators(&self) -> &[PointRep] {
        &self.generators
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn torsion_order(&self) -> u64 {
        self.torsion_order
    }

    pub fn matrix(&self) -> &IMat {
        &self.matrix
    }

    pub fn snf(&self) -> &Snf {
        &self.snf
    }

    /// Brings a rep to this subgroup's width; `None` when it has nonzero
    /// entries in columns the subgroup does not see.
    pub fn fit(&self, v: &PointRep) -> Result<Option<PointRep>> {
        if v.dim() != self.dim {
            return Err(Error::BasisMismatch(format!("dimension {} vs {}", v.dim(), self.dim)));
        }
        if v.width() <= self.width {
            return Ok(Some(v.padded(self.width)));
        }
        if v.expo.iter().any(|r| r[self.width..].iter().any(|x| !x.is_zero())) {
            return Ok(None);
        }
        let mut out = v.clone();
        for r in out.expo.iter_mut() {
            r.truncate(self.width);
        }
        Ok(Some(out))
    }

    /// Integer coefficients of the generators summing to `d`, if `d` is in H.
    pub fn contains(&self, d: &PointRep) -> Result<Option<Vec<BigInt>>> {
        let Some(d) = self.fit(d)? else { return Ok(None) };
        Ok(self.snf.solve(&d.flatten()).map(|mut x| {
            x.truncate(self.generators.len());
            x
        }))
    }
}

/// Whether v - R lies in H, with a witness combination of generators.
pub fn member_coset(v: &PointRep, r: &PointRep, h: &Subgroup) -> Result<Option<Vec<BigInt>>> {
    if v.dim() != r.dim() {
        return Err(Error::BasisMismatch(format!("dimension {} vs {}", v.dim(), r.dim())));
    }
    h.contains(&v.sub(r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fp::parse_rational;
    use proptest::prelude::*;
    use std::collections::{HashSet, VecDeque};

    fn q(p: u64, s: &str) -> FpRational {
        parse_rational(s, Fp::new(p).unwrap()).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn encode_example_over_f3() {
        let f = Fp::new(3).unwrap();
        let mut b = SupportBasis::with_primes(f, vec![FpPoly::t(f), FpPoly::from_i64s(f, &[2, 1])]);
        assert_eq!(b.torsion_generator(), 2);
        let rep = b.encode(&[q(3, "t/(1-t)")]).unwrap();
        assert_eq!(rep.tors, ints(&[1]));
        assert_eq!(rep.expo, vec![ints(&[1, -1])]);
        assert_eq!(b.decode(&rep).unwrap(), vec![q(3, "t/(1-t)")]);
    }

    #[test]
    fn identity_and_powers() {
        let f = Fp::new(2).unwrap();
        let mut b = SupportBasis::new(f);
        let rep = b.encode(&[q(2, "1"), q(2, "1")]).unwrap();
        assert!(rep.is_zero_mod(1));
        let rep = b.encode(&[q(2, "t"), q(2, "t^2")]).unwrap();
        assert_eq!(rep.tors, ints(&[0, 0]));
        assert_eq!(rep.expo, vec![ints(&[1]), ints(&[2])]);
    }

    #[test]
    fn decode_examples() {
        let f = Fp::new(5).unwrap();
        let b = SupportBasis::with_primes(f, vec![FpPoly::t(f)]);
        let v = PointRep { tors: ints(&[0]), expo: vec![ints(&[4])] };
        assert_eq!(b.decode(&v).unwrap(), vec![q(5, "t^4")]);
        assert!(b.decode(&PointRep::zero(2, 1)).unwrap().iter().all(FpRational::is_one));
    }

    #[test]
    fn zero_coordinate_is_rejected() {
        let mut b = SupportBasis::new(Fp::new(3).unwrap());
        assert_eq!(b.encode(&[q(3, "t"), q(3, "0")]), Err(Error::ZeroCoordinate(1)));
    }

    #[test]
    fn member_coset_examples() {
        // Z^2 as a one-coordinate point over a two-prime basis with p = 2.
        let rep = |a: i64, b: i64| PointRep { tors: ints(&[0]), expo: vec![ints(&[a, b])] };
        let h = Subgroup::new(vec![rep(2, 0), rep(0, 3)], 1, 2, 1).unwrap();
        let w = member_coset(&rep(5, 7), &rep(1, 1), &h).unwrap().unwrap();
        assert_eq!(w, ints(&[2, 2]));
        assert!(member_coset(&rep(1, 0), &rep(0, 0), &h).unwrap().is_none());

        // p = 5: torsion projection {0, 2} mod 4.
        let t = |k: i64| PointRep { tors: ints(&[k]), expo: vec![ints(&[])] };
        let h = Subgroup::new(vec![t(2)], 1, 0, 4).unwrap();
        assert!(member_coset(&t(3), &t(0), &h).unwrap().is_none());
        assert!(member_coset(&t(6), &t(0), &h).unwrap().is_some());
    }

    #[test]
    fn mismatched_dimensions() {
        let h = Subgroup::trivial(2, 1, 2);
        assert!(matches!(
            member_coset(&PointRep::zero(1, 1), &PointRep::zero(1, 1), &h),
            Err(Error::BasisMismatch(_))
        ));
    }

    fn rational_in(p: u64) -> impl Strategy<Value = FpRational> {
        (prop::collection::vec(0u64..5, 1..8), prop::collection::vec(0u64..5, 1..8)).prop_map(
            move |(mut n, mut d)| {
                let field = Fp::new(p).unwrap();
                for v in [&mut n, &mut d] {
                    if v.iter().all(|&x| x % p == 0) {
                        v[0] = 1;
                    }
                }
                FpRational::new(FpPoly::from_coeffs(field, n), FpPoly::from_coeffs(field, d)).unwrap()
            },
        )
    }

    fn point_pair() -> impl Strategy<Value = (Vec<FpRational>, Vec<FpRational>)> {
        (prop::sample::select(vec![2u64, 3, 5]), 1usize..4).prop_flat_map(|(p, n)| {
            (prop::collection::vec(rational_in(p), n), prop::collection::vec(rational_in(p), n))
        })
    }

    /// Lattice points in a box reachable from 0 by +-generator steps.
    fn reachable(gens: &[Vec<i64>], radius: i64) -> HashSet<Vec<i64>> {
        let mut seen = HashSet::new();
        let start = vec![0; 2];
        seen.insert(start.clone());
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for g in gens {
                for sign in [-1, 1] {
                    let w: Vec<i64> = v.iter().zip(g).map(|(a, b)| a + sign * b).collect();
                    if w.iter().all(|x| x.abs() <= radius) && seen.insert(w.clone()) {
                        queue.push_back(w);
                    }
                }
            }
        }
        seen
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(500))]
        #[test]
        fn round_trip_and_homomorphism((a, b) in point_pair()) {
            let field = a[0].field();
            let mut basis = SupportBasis::new(field);
            let ra = basis.encode(&a).unwrap();
            prop_assert_eq!(basis.decode(&ra).unwrap(), a.clone());
            let rb = basis.encode(&b).unwrap();
            prop_assert_eq!(basis.decode(&rb).unwrap(), b.clone());
            let prod: Vec<FpRational> = a.iter().zip(&b).map(|(x, y)| x.mul(y)).collect();
            let rp = basis.encode(&prod).unwrap();
            let s = basis.len();
            let order = basis.torsion_order();
            prop_assert_eq!(rp.padded(s).normalized(order), ra.add(&rb).padded(s).normalized(order));
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]
        #[test]
        fn membership_matches_enumeration(
            gens in prop::collection::vec(prop::collection::vec(-3i64..4, 2), 0..4),
        ) {
            let rep = |v: &[i64]| PointRep { tors: ints(&[0]), expo: vec![ints(v)] };
            let h = Subgroup::new(gens.iter().map(|g| rep(g)).collect(), 1, 2, 1).unwrap();
            let reach = reachable(&gens, 40);
            for x in -6..=6 {
                for y in -6..=6 {
                    let got = h.contains(&rep(&[x, y])).unwrap();
                    prop_assert_eq!(got.is_some(), reach.contains(&vec![x, y]), "({}, {})", x, y);
                    if let Some(w) = got {
                        let mut sum = [BigInt::zero(), BigInt::zero()];
                        for (c, g) in w.iter().zip(&gens) {
                            sum[0] += c * g[0];
                            sum[1] += c * g[1];
                        }
                        prop_assert_eq!(sum.to_vec(), ints(&[x, y]));
                    }
                }
            }
        }
    }
}
