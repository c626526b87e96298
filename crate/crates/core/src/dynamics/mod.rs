//! Monomial-affine self-maps Φ(x) = y·Φ₀(x) of G_m^N over F_p(t): exact and
//! lattice iteration, curve membership, and orbit classification.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fp::{is_irreducible, parse_laurent, parse_rational, Fp, FpPoly, FpRational, LaurentPoly};
use crate::lattice::{PointRep, SupportBasis};
use crate::linalg::{identity, local_min_poly, mat_mul, mat_pow, min_poly, mat_vec, IMat};
use crate::lrs::qpoly::{split_cyclotomic, QPoly};

/// A point of G_m^N(F_p(t)).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TorusPoint {
    coords: Vec<FpRational>,
}

impl TorusPoint {
    pub fn new(coords: Vec<FpRational>) -> Result<Self> {
        if let Some(i) = coords.iter().position(FpRational::is_zero) {
            return Err(Error::ZeroCoordinate(i));
        }
        Ok(TorusPoint { coords })
    }

    pub fn parse(exprs: &[impl AsRef<str>], field: Fp) -> Result<Self> {
        let coords = exprs.iter().map(|s| parse_rational(s.as_ref(), field)).collect::<Result<_>>()?;
        Self::new(coords)
    }

    pub fn identity(field: Fp, n: usize) -> Self {
        TorusPoint { coords: vec![FpRational::one(field); n] }
    }

    pub fn coords(&self) -> &[FpRational] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }
}

/// Φ(x)_i = y_i · ∏_j x_j^{A_ij}.
#[derive(Clone, Debug)]
pub struct MonomialAffineMap {
    pub a: IMat,
    pub y: TorusPoint,
}

impl MonomialAffineMap {
    pub fn new(a: IMat, y: TorusPoint) -> Result<Self> {
        let n = y.dim();
        if a.len() != n || a.iter().any(|r| r.len() != n) {
            return Err(Error::Invalid(format!("matrix must be {n}x{n}")));
        }
        Ok(MonomialAffineMap { a, y })
    }

    pub fn dim(&self) -> usize {
        self.y.dim()
    }

    pub fn field(&self) -> Fp {
        self.y.coords[0].field()
    }
}

/// One exact application of Φ.
pub fn apply(phi: &MonomialAffineMap, x: &TorusPoint) -> Result<TorusPoint> {
    let mut out = Vec::with_capacity(x.dim());
    for (i, row) in phi.a.iter().enumerate() {
        let mut v = phi.y.coords[i].clone();
        for (j, e) in row.iter().enumerate() {
            if e.is_zero() {
                continue;
            }
            let e = e.to_i64().ok_or(Error::DegreeCap { degree: u128::MAX, cap: crate::fp::DEGREE_CAP })?;
            v = v.mul_capped(&x.coords[j].pow(e)?)?;
        }
        out.push(v);
    }
    Ok(TorusPoint { coords: out })
}

/// Φⁿ(α) by repeated exact application.
pub fn iterate_exact(phi: &MonomialAffineMap, alpha: &TorusPoint, n: u64) -> Result<TorusPoint> {
    let mut x = alpha.clone();
    for _ in 0..n {
        x = apply(phi, &x)?;
    }
    Ok(x)
}

/// One lattice step x ↦ A x + y (exponents), torsion reduced mod `order`.
pub fn step_lattice(a: &IMat, x: &PointRep, y: &PointRep, order: u64) -> PointRep {
    let s = x.width().max(y.width());
    let (x, y) = (x.padded(s), y.padded(s));
    let m = BigInt::from(order);
    let tors = mat_vec(a, &x.tors).iter().zip(&y.tors).map(|(u, v)| (u + v).mod_floor(&m)).collect();
    let ax = mat_mul(a, &x.expo);
    let expo = ax.iter().zip(&y.expo).map(|(r, q)| r.iter().zip(q).map(|(u, v)| u + v).collect()).collect();
    PointRep { tors, expo }
}

/// Block matrix [[A, I], [0, I]]; its n-th power is [[Aⁿ, Σ_{i<n} Aⁱ], [0, I]].
fn affine_block(a: &IMat) -> IMat {
    let n = a.len();
    let id = identity(n);
    let mut b = vec![vec![BigInt::zero(); 2 * n]; 2 * n];
    for i in 0..n {
        for j in 0..n {
            b[i][j] = a[i][j].clone();
            b[i][n + j] = id[i][j].clone();
            b[n + i][n + j] = id[i][j].clone();
        }
    }
    b
}

/// Φⁿ(α) in additive coordinates via fast powering of the affine block
/// matrix; O(log n) big-integer matrix products.
pub fn iterate_lattice(a: &IMat, alpha: &PointRep, y: &PointRep, n: &BigUint, order: u64) -> PointRep {
    let dim = a.len();
    let s = alpha.width().max(y.width());
    let (alpha, y) = (alpha.padded(s), y.padded(s));
    let combine = |bn: &IMat, va: &IMat, vy: &IMat| -> IMat {
        let top: IMat = bn[..dim].iter().map(|r| r[..dim].to_vec()).collect();
        let sum: IMat = bn[..dim].iter().map(|r| r[dim..].to_vec()).collect();
        let x = mat_mul(&top, va);
        let z = mat_mul(&sum, vy);
        x.iter().zip(&z).map(|(r, q)| r.iter().zip(q).map(|(u, v)| u + v).collect()).collect()
    };
    let block = affine_block(a);
    let bn = mat_pow(&block, n, None);
    let expo = if s == 0 { vec![Vec::new(); dim] } else { combine(&bn, &alpha.expo, &y.expo) };
    let m = BigInt::from(order);
    let bt = mat_pow(&block, n, Some(&m));
    let col = |v: &[BigInt]| -> IMat { v.iter().map(|x| vec![x.clone()]).collect() };
    let tors = combine(&bt, &col(&alpha.tors), &col(&y.tors))
        .into_iter()
        .map(|r| r[0].mod_floor(&m))
        .collect();
    PointRep { tors, expo }
}

/// A curve given by Laurent-polynomial equations in x1..xN.
#[derive(Clone, Debug)]
pub struct Curve {
    pub equations: Vec<LaurentPoly>,
}

impl Curve {
    pub fn new(equations: Vec<LaurentPoly>) -> Result<Self> {
        if equations.is_empty() {
            return Err(Error::Invalid("a curve needs at least one equation".into()));
        }
        Ok(Curve { equations })
    }

    pub fn parse(exprs: &[impl AsRef<str>], field: Fp, n: usize) -> Result<Self> {
        Self::new(exprs.iter().map(|s| parse_laurent(s.as_ref(), field, n)).collect::<Result<_>>()?)
    }
}

pub fn on_curve_exact(v: &Curve, x: &TorusPoint) -> Result<bool> {
    for eq in &v.equations {
        if !eq.eval(x.coords())?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ModularParams {
    pub degree: usize,
    pub trials: usize,
    pub seed: u64,
}

impl Default for ModularParams {
    fn default() -> Self {
        ModularParams { degree: 16, trials: 3, seed: 0 }
    }
}

/// Verdict of modular curve membership. A miss is certain; a hit holds
/// with the reported error bound.
#[derive(Clone, Debug, Serialize)]
pub struct ModularOutcome {
    pub hit: bool,
    pub moduli: Vec<String>,
    /// Upper bound on the numerator degree of any evaluated equation.
    pub numerator_degree_bound: String,
    /// Number of monic irreducibles of the modulus degree.
    pub irreducible_count: String,
    /// Bound on the probability of a false hit.
    pub error_bound: f64,
}

/// Number of monic irreducible polynomials of degree d over F_p.
pub fn count_irreducibles(p: u64, d: usize) -> BigUint {
    let mobius = |mut n: usize| -> i32 {
        let mut out = 1;
        let mut q = 2;
        while q * q <= n {
            if n.is_multiple_of(q) {
                n /= q;
                if n.is_multiple_of(q) {
                    return 0;
                }
                out = -out;
            }
            q += 1;
        }
        if n > 1 {
            out = -out;
        }
        out
    };
    let mut sum = BigInt::zero();
    for e in 1..=d {
        if d.is_multiple_of(e) {
            let term = BigInt::from(p).pow((d / e) as u32);
            match mobius(e) {
                1 => sum += term,
                -1 => sum -= term,
                _ => {}
            }
        }
    }
    (sum / BigInt::from(d)).to_biguint().unwrap()
}

fn to_f64(x: &BigUint) -> f64 {
    x.to_f64().unwrap_or(f64::INFINITY)
}

/// Draws a random monic irreducible of degree d, avoiding `forbidden`.
fn draw_modulus(field: Fp, d: usize, rng: &mut ChaCha8Rng, forbidden: &[FpPoly]) -> Result<FpPoly> {
    const ATTEMPTS: usize = 10_000;
    for _ in 0..ATTEMPTS {
        let mut c: Vec<u64> = (0..d).map(|_| rng.gen_range(0..field.p())).collect();
        c.push(1);
        let m = FpPoly::from_coeffs(field, c);
        if is_irreducible(&m) && forbidden.iter().all(|q| !q.rem(&m).is_zero()) {
            return Ok(m);
        }
    }
    Err(Error::NoModulus(ATTEMPTS))
}

/// Curve membership of a lattice-encoded point, evaluated in F_p[t]/(m)
/// for `trials` random irreducibles m of the given degree.
pub fn on_curve_modular(
    v: &Curve,
    rep: &PointRep,
    basis: &SupportBasis,
    params: &ModularParams,
) -> Result<ModularOutcome> {
    let field = basis.field();
    if rep.width() > basis.len() {
        return Err(Error::BasisMismatch("representation wider than basis".into()));
    }
    let rep = rep.padded(basis.len());
    let d = params.degree;
    let group_order = BigInt::from(field.p()).pow(d as u32) - 1;
    let tors_order = BigInt::from(basis.torsion_order());
    let g = basis.torsion_generator();

    // Per equation and term: coefficient, torsion exponent, prime exponents.
    let mut forbidden: Vec<FpPoly> = basis.primes().to_vec();
    let mut plan = Vec::new();
    let mut dbound = BigUint::zero();
    for eq in &v.equations {
        let mut terms = Vec::new();
        let mut deq = BigUint::zero();
        for (k, c) in eq.terms() {
            forbidden.push(c.den().clone());
            let mut tors = BigInt::zero();
            let mut expo = vec![BigInt::zero(); basis.len()];
            for (i, &ki) in k.iter().enumerate() {
                if ki == 0 {
                    continue;
                }
                let ki = BigInt::from(ki);
                tors += &ki * &rep.tors[i];
                for (e, r) in expo.iter_mut().zip(&rep.expo[i]) {
                    *e += &ki * r;
                }
            }
            let mut h = BigUint::from(c.height());
            for (e, q) in expo.iter().zip(basis.primes()) {
                h += e.magnitude() * BigUint::from(q.degree().unwrap());
            }
            deq += h;
            terms.push((c.clone(), tors.mod_floor(&tors_order), expo));
        }
        dbound = dbound.max(deq);
        plan.push(terms);
    }

    let count = count_irreducibles(field.p(), d);
    let mut moduli = Vec::new();
    let mut hit = true;
    for trial in 0..params.trials {
        let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
        rng.set_stream(trial as u64);
        let m = draw_modulus(field, d, &mut rng, &forbidden)?;
        'eqs: for terms in &plan {
            let mut acc = FpPoly::zero(field);
            for (c, tors, expo) in terms {
                let unit = field.pow(g, tors.to_u64().unwrap());
                let mut val = c.num().rem(&m).mul_mod(&c.den().inv_mod(&m)?, &m).scale(unit);
                for (e, q) in expo.iter().zip(basis.primes()) {
                    if !e.is_zero() {
                        let r = e.mod_floor(&group_order).to_biguint().unwrap();
                        val = val.mul_mod(&q.modpow(&r, &m), &m);
                    }
                }
                acc = acc.add(&val);
            }
            if !acc.is_zero() {
                hit = false;
                break 'eqs;
            }
        }
        moduli.push(m.to_string());
        if !hit {
            break;
        }
    }
    // A nonzero numerator of degree <= D has at most D/d irreducible factors
    // of degree d; each trial picks one of them with probability at most
    // (D/d) / (I_d - excluded).
    let excluded = forbidden.iter().filter(|q| q.degree() == Some(d)).count();
    let pool = to_f64(&count) - excluded as f64;
    let per_trial = if pool <= 0.0 { 1.0 } else { (to_f64(&dbound) / d as f64 / pool).min(1.0) };
    let error_bound = if hit { per_trial.powi(params.trials as i32) } else { 0.0 };
    Ok(ModularOutcome {
        hit,
        moduli,
        numerator_degree_bound: dbound.to_string(),
        irreducible_count: count.to_string(),
        error_bound,
    })
}

/// Minimal polynomial of A as (ℓ, c_0..c_{ℓ-1}): A^ℓ + Σ c_i A^i = 0.
pub fn cayley_recurrence(a: &IMat) -> (usize, Vec<BigInt>) {
    let c = min_poly(a);
    (c.len(), c)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OrbitClassification {
    Preperiodic { preperiod: u64, period: u64 },
    /// Column `column` of the exponent matrix is unbounded along the orbit.
    InfiniteCertified { column: usize, local_min_poly: String, reason: String },
    UnknownToBound { bound: u64 },
}

/// Certifies an infinite orbit: for some prime column j, the local minimal
/// polynomial of (α_j; 1) under [[A, y_j], [0, 1]] has, after removing
/// powers of x, a non-cyclotomic factor (a root of absolute value > 1 by
/// Kronecker) or a repeated cyclotomic factor (polynomial growth).
fn kronecker_certificate(a: &IMat, alpha: &PointRep, y: &PointRep) -> Option<OrbitClassification> {
    let n = a.len();
    let s = alpha.width().max(y.width());
    let (alpha, y) = (alpha.padded(s), y.padded(s));
    for j in 0..s {
        let mut m = vec![vec![BigInt::zero(); n + 1]; n + 1];
        for i in 0..n {
            m[i][..n].clone_from_slice(&a[i]);
            m[i][n] = y.expo[i][j].clone();
        }
        m[n][n] = BigInt::one();
        let mut v: Vec<BigInt> = alpha.expo.iter().map(|r| r[j].clone()).collect();
        v.push(BigInt::one());
        let c = local_min_poly(&m, &v);
        let f = QPoly::monic_from_tail(&c.iter().map(|x| x.clone().into()).collect::<Vec<_>>());
        let split = split_cyclotomic(&f);
        let reason = if split.rest.degree().unwrap_or(0) > 0 {
            format!("non-cyclotomic factor {}", split.rest)
        } else if let Some((k, e)) = split.cyclotomic.iter().find(|(_, e)| *e > 1) {
            format!("cyclotomic factor of order {k} with multiplicity {e}")
        } else {
            continue;
        };
        return Some(OrbitClassification::InfiniteCertified { column: j, local_min_poly: f.to_string(), reason });
    }
    None
}

/// Preperiodic by replay with hashed states, infinite by a Kronecker
/// certificate, otherwise unknown up to `bound` steps.
pub fn classify_orbit(a: &IMat, alpha: &PointRep, y: &PointRep, order: u64, bound: u64) -> OrbitClassification {
    if let Some(cert) = kronecker_certificate(a, alpha, y) {
        return cert;
    }
    let s = alpha.width().max(y.width());
    let mut x = alpha.padded(s).normalized(order);
    let y = y.padded(s);
    let mut seen: HashMap<PointRep, u64> = HashMap::new();
    for n in 0..=bound {
        if let Some(&mu) = seen.get(&x) {
            return OrbitClassification::Preperiodic { preperiod: mu, period: n - mu };
        }
        seen.insert(x.clone(), n);
        x = step_lattice(a, &x, &y, order);
    }
    OrbitClassification::UnknownToBound { bound }
}

/// Largest absolute exponent in a rep, as a u128 when it fits.
pub fn exponent_size(rep: &PointRep) -> Option<u128> {
    rep.max_abs_exponent().to_u128()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::from_i64;
    use proptest::prelude::*;

    fn f(p: u64) -> Fp {
        Fp::new(p).unwrap()
    }

    fn pt(p: u64, s: &[&str]) -> TorusPoint {
        TorusPoint::parse(s, f(p)).unwrap()
    }

    fn ex13(p: u64) -> MonomialAffineMap {
        MonomialAffineMap::new(from_i64(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]), pt(p, &["t", "1+t", "1-t"]))
            .unwrap()
    }

    fn ex15(p: u64) -> MonomialAffineMap {
        let q = p * p - 1;
        MonomialAffineMap::new(from_i64(&[vec![1, 0], vec![0, 1]]), pt(p, &[&format!("t^{q}"), &format!("(1-t)^{q}")]))
            .unwrap()
    }

    #[test]
    fn apply_examples() {
        assert_eq!(apply(&ex13(3), &pt(3, &["1", "1", "1"])).unwrap(), pt(3, &["t", "1+t", "1-t"]));
        let id = MonomialAffineMap::new(from_i64(&[vec![1, 0], vec![0, 1]]), pt(5, &["1", "1"])).unwrap();
        let x = pt(5, &["t/(t+2)", "3"]);
        assert_eq!(apply(&id, &x).unwrap(), x);
        assert_eq!(apply(&ex15(2), &pt(2, &["1", "1"])).unwrap(), pt(2, &["t^3", "(1-t)^3"]));
    }

    fn encoded(phi: &MonomialAffineMap, alpha: &TorusPoint) -> (SupportBasis, PointRep, PointRep) {
        let mut b = SupportBasis::new(phi.field());
        let ra = b.encode(alpha.coords()).unwrap();
        let ry = b.encode(phi.y.coords()).unwrap();
        (b, ra, ry)
    }

    #[test]
    fn iterate_lattice_examples() {
        let phi = ex15(2);
        let alpha = pt(2, &["1", "1"]);
        let (b, ra, ry) = encoded(&phi, &alpha);
        let r0 = iterate_lattice(&phi.a, &ra, &ry, &BigUint::zero(), 1);
        assert_eq!(r0, ra.padded(b.len()));
        let r3 = iterate_lattice(&phi.a, &ra, &ry, &BigUint::from(3u32), 1);
        let t_col = b.primes().iter().position(|q| *q == FpPoly::t(f(2))).unwrap();
        // Φ^3(1,1) = (t^9, (1-t)^9)
        assert_eq!(r3.expo[0][t_col], BigInt::from(9));
        assert_eq!(b.decode(&r3).unwrap(), iterate_exact(&phi, &alpha, 3).unwrap().coords());

        let phi = ex13(3);
        let alpha = pt(3, &["1", "1", "1"]);
        let (b, ra, ry) = encoded(&phi, &alpha);
        let r5 = iterate_lattice(&phi.a, &ra, &ry, &BigUint::from(5u32), 2);
        let t_col = b.primes().iter().position(|q| *q == FpPoly::t(f(3))).unwrap();
        assert_eq!(r5.expo[0][t_col], BigInt::from(5));
    }

    #[test]
    fn power_of_four_minus_one_exponent() {
        // A = 4I with y = (t^3, (1-t)^3): exponent of Φ^3(1,1) over t is 4^3 - 1.
        let phi = MonomialAffineMap::new(from_i64(&[vec![4, 0], vec![0, 4]]), pt(2, &["t^3", "(1-t)^3"])).unwrap();
        let (b, ra, ry) = encoded(&phi, &pt(2, &["1", "1"]));
        let r3 = iterate_lattice(&phi.a, &ra, &ry, &BigUint::from(3u32), 1);
        let t_col = b.primes().iter().position(|q| *q == FpPoly::t(f(2))).unwrap();
        assert_eq!(r3.expo[0][t_col], BigInt::from(63));
    }

    #[test]
    fn exact_membership_examples() {
        let v = Curve::parse(&["x2 + x3 - 2*x1 - 2"], f(3), 3).unwrap();
        assert!(on_curve_exact(&v, &pt(3, &["t^2", "(1+t)^2", "(1-t)^2"])).unwrap());
        assert!(!on_curve_exact(&v, &pt(3, &["t", "1+t", "1-t"])).unwrap());
        let diag = Curve::parse(&["x1 - x2"], f(7), 2).unwrap();
        assert!(on_curve_exact(&diag, &pt(7, &["t", "t"])).unwrap());
    }

    #[test]
    fn modular_membership_examples() {
        let phi = ex15(2);
        let v = Curve::parse(&["t*x1 + (1-t)*x2 - 1"], f(2), 2).unwrap();
        let (b, ra, ry) = encoded(&phi, &pt(2, &["1", "1"]));
        let params = ModularParams::default();
        let r21 = iterate_lattice(&phi.a, &ra, &ry, &BigUint::from(21u32), 1);
        let out = on_curve_modular(&v, &r21, &b, &params).unwrap();
        assert!(out.hit);
        assert_eq!(out.moduli.len(), 3);
        let r2 = iterate_lattice(&phi.a, &ra, &ry, &BigUint::from(2u32), 1);
        assert!(!on_curve_modular(&v, &r2, &b, &params).unwrap().hit);

        let diag = Curve::parse(&["x1 - x2"], f(2), 2).unwrap();
        let one = PointRep::zero(2, b.len());
        assert!(on_curve_modular(&diag, &one, &b, &params).unwrap().hit);
    }

    #[test]
    fn irreducible_counts() {
        assert_eq!(count_irreducibles(2, 16), BigUint::from(4080u32));
        assert_eq!(count_irreducibles(3, 2), BigUint::from(3u32));
    }

    #[test]
    fn cayley_examples() {
        assert_eq!(cayley_recurrence(&ex13(3).a), (1, vec![BigInt::from(-1)]));
        let scalar = from_i64(&[vec![3, 0], vec![0, 3]]);
        assert_eq!(cayley_recurrence(&scalar), (1, vec![BigInt::from(-3)]));
        let rot = from_i64(&[vec![0, 1], vec![-1, 0]]);
        assert_eq!(cayley_recurrence(&rot), (2, vec![BigInt::from(1), BigInt::from(0)]));
    }

    #[test]
    fn classification_examples() {
        let id = MonomialAffineMap::new(from_i64(&[vec![1, 0], vec![0, 1]]), pt(3, &["1", "1"])).unwrap();
        let (_, ra, ry) = encoded(&id, &pt(3, &["t", "1+t"]));
        assert_eq!(classify_orbit(&id.a, &ra, &ry, 2, 100), OrbitClassification::Preperiodic { preperiod: 0, period: 1 });

        let phi = ex15(2);
        let (_, ra, ry) = encoded(&phi, &pt(2, &["1", "1"]));
        assert!(matches!(classify_orbit(&phi.a, &ra, &ry, 1, 100), OrbitClassification::InfiniteCertified { .. }));

        let rot = MonomialAffineMap::new(from_i64(&[vec![0, 1], vec![-1, 0]]), pt(5, &["1", "1"])).unwrap();
        let alpha = pt(5, &["t", "1"]);
        let (_, ra, ry) = encoded(&rot, &alpha);
        assert_eq!(classify_orbit(&rot.a, &ra, &ry, 4, 100), OrbitClassification::Preperiodic { preperiod: 0, period: 4 });
        // replay: the decoded points cycle
        assert_eq!(iterate_exact(&rot, &alpha, 4).unwrap(), alpha);
        assert_ne!(iterate_exact(&rot, &alpha, 2).unwrap(), alpha);
    }

    #[test]
    fn exact_iteration_refuses_huge_degrees() {
        let phi = MonomialAffineMap::new(from_i64(&[vec![1 << 20]]), pt(3, &["t"])).unwrap();
        assert!(matches!(iterate_exact(&phi, &pt(3, &["t"]), 2), Err(Error::DegreeCap { .. })));
    }

    fn random_map() -> impl Strategy<Value = (u64, usize, Vec<i64>, Vec<usize>, Vec<usize>)> {
        (prop::sample::select(vec![2u64, 3, 5]), 1usize..4).prop_flat_map(|(p, n)| {
            (
                Just(p),
                Just(n),
                prop::collection::vec(-2i64..3, n * n),
                prop::collection::vec(0usize..6, n),
                prop::collection::vec(0usize..6, n),
            )
        })
    }

    const POOL: [&str; 6] = ["t", "1+t", "1/t", "-1", "t^2/(1+t)", "1"];

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(50))]
        #[test]
        fn lattice_iteration_matches_exact((p, n, a, ys, xs) in random_map()) {
            let a: IMat = (0..n).map(|i| (0..n).map(|j| BigInt::from(a[i * n + j])).collect()).collect();
            let y = pt(p, &ys.iter().map(|&i| POOL[i]).collect::<Vec<_>>());
            let alpha = pt(p, &xs.iter().map(|&i| POOL[i]).collect::<Vec<_>>());
            let phi = MonomialAffineMap::new(a, y).unwrap();
            let (b, ra, ry) = encoded(&phi, &alpha);
            let mut x = alpha.clone();
            for k in 0..=50u32 {
                let rep = iterate_lattice(&phi.a, &ra, &ry, &BigUint::from(k), b.torsion_order());
                if rep.max_abs_exponent() > BigInt::from(400) {
                    break;
                }
                match b.decode(&rep) {
                    Ok(d) => prop_assert_eq!(&d[..], x.coords()),
                    Err(Error::DegreeCap { .. }) => break,
                    Err(e) => return Err(TestCaseError::fail(e.to_string())),
                }
                x = match apply(&phi, &x) {
                    Ok(x) => x,
                    Err(_) => break,
                };
            }
        }

        #[test]
        fn modular_never_misses_exact_hits((p, n, a, ys, xs) in random_map()) {
            let a: IMat = (0..n).map(|i| (0..n).map(|j| BigInt::from(a[i * n + j])).collect()).collect();
            let y = pt(p, &ys.iter().map(|&i| POOL[i]).collect::<Vec<_>>());
            let alpha = pt(p, &xs.iter().map(|&i| POOL[i]).collect::<Vec<_>>());
            let phi = MonomialAffineMap::new(a, y).unwrap();
            let (b, ra, ry) = encoded(&phi, &alpha);
            let rep = iterate_lattice(&phi.a, &ra, &ry, &BigUint::from(3u32), b.torsion_order());
            prop_assume!(rep.max_abs_exponent() <= BigInt::from(400));
            let x3 = iterate_exact(&phi, &alpha, 3);
            prop_assume!(x3.is_ok());
            let x3 = x3.unwrap();
            // a curve through the point: x1 - c = 0 with c its first coordinate
            let eq = LaurentPoly::var(f(p), n, 0).sub(&LaurentPoly::constant(x3.coords()[0].clone(), n));
            let v = Curve::new(vec![eq]).unwrap();
            prop_assert!(on_curve_exact(&v, &x3).unwrap());
            let params = ModularParams { degree: 8, trials: 2, seed: 1 };
            prop_assert!(on_curve_modular(&v, &rep, &b, &params).unwrap().hit);
        }

        #[test]
        fn cayley_annihilates(entries in prop::collection::vec(-2i64..3, 9)) {
            let a: IMat = (0..3).map(|i| (0..3).map(|j| BigInt::from(entries[i * 3 + j])).collect()).collect();
            let (l, c) = cayley_recurrence(&a);
            let mut acc = mat_pow(&a, &BigUint::from(l), None);
            for (i, ci) in c.iter().enumerate() {
                let pw = mat_pow(&a, &BigUint::from(i), None);
                for r in 0..3 { for s in 0..3 { acc[r][s] += ci * &pw[r][s]; } }
            }
            prop_assert!(acc.iter().flatten().all(Zero::is_zero));
        }

        #[test]
        fn preperiodic_orbits_replay((p, n, a, ys, xs) in random_map()) {
            let a: IMat = (0..n).map(|i| (0..n).map(|j| BigInt::from(a[i * n + j])).collect()).collect();
            let y = pt(p, &ys.iter().map(|&i| POOL[i]).collect::<Vec<_>>());
            let alpha = pt(p, &xs.iter().map(|&i| POOL[i]).collect::<Vec<_>>());
            let phi = MonomialAffineMap::new(a, y).unwrap();
            let (b, ra, ry) = encoded(&phi, &alpha);
            if let OrbitClassification::Preperiodic { preperiod, period } =
                classify_orbit(&phi.a, &ra, &ry, b.torsion_order(), 64)
            {
                let u = iterate_exact(&phi, &alpha, preperiod).unwrap();
                let w = iterate_exact(&phi, &u, period).unwrap();
                prop_assert_eq!(u, w);
            }
        }
    }
}
