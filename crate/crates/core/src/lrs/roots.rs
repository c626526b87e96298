//! Real-root isolation (Sturm), root counting in discs (Schur–Cohn), and
//! explicit growth cutoffs for sequences with a strictly dominant real
//! characteristic root.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::qpoly::{rat, QPoly};
use super::Lrs;

/// f / gcd(f, f').
pub fn squarefree(f: &QPoly) -> QPoly {
    if f.degree().unwrap_or(0) == 0 {
        return f.monic();
    }
    let g = f.gcd(&f.derivative());
    f.div_rem(&g).0.monic()
}

pub struct Sturm {
    chain: Vec<QPoly>,
}

impl Sturm {
    pub fn new(f: &QPoly) -> Self {
        let mut chain = vec![f.clone(), f.derivative()];
        while !chain.last().unwrap().is_zero() {
            let n = chain.len();
            let r = chain[n - 2].rem(&chain[n - 1]);
            chain.push(r.scale(&rat(-1)));
        }
        chain.pop();
        Sturm { chain }
    }

    fn variations(&self, x: &BigRational) -> usize {
        let signs: Vec<bool> = self
            .chain
            .iter()
            .map(|p| p.eval(x))
            .filter(|v| !v.is_zero())
            .map(|v| v.is_positive())
            .collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    }

    /// Distinct real roots in (a, b].
    pub fn count(&self, a: &BigRational, b: &BigRational) -> usize {
        self.variations(a) - self.variations(b)
    }
}

/// 1 + max |a_i / a_n|: every root has smaller modulus.
pub fn cauchy_bound(f: &QPoly) -> BigRational {
    let lead = f.lead().abs();
    let d = f.degree().unwrap_or(0);
    let m = (0..d).map(|i| f.coeff(i).abs() / &lead).max().unwrap_or_else(BigRational::zero);
    m + BigRational::one()
}

/// A real root of a squarefree polynomial, isolated in (lo, hi].
#[derive(Clone, Debug)]
pub struct RealRoot {
    pub lo: BigRational,
    pub hi: BigRational,
}

/// Disjoint isolating intervals (lo, hi] for the real roots of `f`, in
/// increasing order.
pub fn isolate_real_roots(f: &QPoly) -> Vec<RealRoot> {
    let sf = squarefree(f);
    if sf.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let sturm = Sturm::new(&sf);
    let b = cauchy_bound(&sf);
    let mut out = Vec::new();
    let mut stack = vec![(-b.clone(), b)];
    while let Some((lo, hi)) = stack.pop() {
        match sturm.count(&lo, &hi) {
            0 => {}
            1 => out.push(RealRoot { lo, hi }),
            _ => {
                let mid = (&lo + &hi) / rat(2);
                stack.push((mid.clone(), hi));
                stack.push((lo, mid));
            }
        }
    }
    out.sort_by(|a, b| a.lo.cmp(&b.lo));
    out
}

impl RealRoot {
    /// Halves the interval; `sturm` belongs to the squarefree polynomial.
    pub fn bisect(&mut self, sturm: &Sturm) {
        let mid = (&self.lo + &self.hi) / rat(2);
        if sturm.count(&self.lo, &mid) == 1 {
            self.hi = mid;
        } else {
            self.lo = mid;
        }
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }
}

/// All integer roots, exactly.
pub fn integer_roots(f: &QPoly) -> Vec<BigInt> {
    if f.is_zero() {
        return Vec::new();
    }
    let sf = squarefree(f);
    let sturm = Sturm::new(&sf);
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let mut out = Vec::new();
    for mut r in isolate_real_roots(&sf) {
        while r.width() >= half {
            r.bisect(&sturm);
        }
        let n = r.hi.floor().to_integer();
        let nr = BigRational::from_integer(n.clone());
        if nr > r.lo && f.eval(&nr).is_zero() {
            out.push(n);
        }
    }
    out
}

/// Number of roots (with multiplicity) in the open disc |z| < q, or None
/// when the Schur–Cohn recursion is singular (for instance a root on the
/// circle).
pub fn roots_inside_disc(f: &QPoly, q: &BigRational) -> Option<usize> {
    let d = f.degree()?;
    let mut qk = BigRational::one();
    let mut p: Vec<BigRational> = Vec::with_capacity(d + 1);
    for i in 0..=d {
        p.push(f.coeff(i) * &qk);
        qk *= q;
    }
    let mut count = 0;
    let mut positive = true;
    for _ in 0..d {
        let n = p.len() - 1;
        let (a0, an) = (p[0].clone(), p[n].clone());
        let delta = &a0 * &a0 - &an * &an;
        if delta.is_zero() {
            return None;
        }
        let next: Vec<BigRational> = (0..n).map(|i| &a0 * &p[i] - &an * &p[n - i]).collect();
        if delta.is_negative() {
            positive = !positive;
        }
        if !positive {
            count += 1;
        }
        p = next;
    }
    Some(count)
}

/// Closed interval of reals with outward rounding.
#[derive(Clone, Copy, Debug)]
pub struct Iv {
    pub lo: f64,
    pub hi: f64,
}

impl Iv {
    fn new(lo: f64, hi: f64) -> Self {
        Iv { lo: lo.next_down(), hi: hi.next_up() }
    }

    pub fn point(x: &BigRational) -> Self {
        let v = x.to_f64().unwrap_or(f64::NAN);
        Iv::new(v.next_down(), v.next_up())
    }

    pub fn hull(a: &BigRational, b: &BigRational) -> Self {
        let (x, y) = (Iv::point(a), Iv::point(b));
        Iv { lo: x.lo.min(y.lo), hi: x.hi.max(y.hi) }
    }

    pub fn add(self, o: Iv) -> Iv {
        Iv::new(self.lo + o.lo, self.hi + o.hi)
    }

    pub fn sub(self, o: Iv) -> Iv {
        Iv::new(self.lo - o.hi, self.hi - o.lo)
    }

    pub fn mul(self, o: Iv) -> Iv {
        let c = [self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi];
        Iv::new(c.iter().copied().fold(f64::INFINITY, f64::min), c.iter().copied().fold(f64::NEG_INFINITY, f64::max))
    }

    pub fn div(self, o: Iv) -> Option<Iv> {
        if o.contains_zero() {
            return None;
        }
        let inv = Iv::new(1.0 / o.hi, 1.0 / o.lo);
        Some(self.mul(inv))
    }

    pub fn contains_zero(self) -> bool {
        self.lo <= 0.0 && self.hi >= 0.0
    }

    /// Upper bound of |x|.
    pub fn mag(self) -> f64 {
        self.lo.abs().max(self.hi.abs()).next_up()
    }

    /// Lower bound of |x|.
    pub fn mig(self) -> f64 {
        if self.contains_zero() {
            0.0
        } else {
            self.lo.abs().min(self.hi.abs()).next_down()
        }
    }

    pub fn is_finite(self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }
}

/// Certificate that the tail sequence has a simple real characteristic
/// root strictly dominating all others: |r| > q > |r_j|.
#[derive(Clone, Debug)]
pub struct Dominance {
    pub root: RealRoot,
    pub q: BigRational,
}

/// Searches for a dominance certificate for `f` (nonzero constant term).
pub fn dominance(f: &QPoly) -> Option<Dominance> {
    let d = f.degree()?;
    if d == 0 || f.coeff(0).is_zero() {
        return None;
    }
    let sf = squarefree(f);
    let sturm = Sturm::new(&sf);
    let roots = isolate_real_roots(&sf);
    // the real root of largest modulus
    let mut roots: Vec<RealRoot> = roots;
    for _ in 0..60 {
        let abs_hi = |r: &RealRoot| r.lo.abs().max(r.hi.abs());
        roots.sort_by_key(|r| std::cmp::Reverse(abs_hi(r)));
        let ok = roots.len() < 2 || abs_lo(&roots[0]) > abs_hi(&roots[1]);
        if ok {
            break;
        }
        for r in roots.iter_mut() {
            r.bisect(&sturm);
        }
    }
    let mut root = roots.first()?.clone();
    for j in 1..=40u32 {
        while root.lo.is_negative() != root.hi.is_negative() || root.lo.is_zero() {
            root.bisect(&sturm);
        }
        let r_lo = abs_lo(&root);
        let q = &r_lo * (BigRational::one() - BigRational::new(BigInt::one(), BigInt::from(2).pow(j)));
        if q.is_positive() {
            if let Some(inside) = roots_inside_disc(f, &q) {
                if inside + 1 == d {
                    return Some(Dominance { root, q });
                }
                if inside + 1 < d && j > 8 {
                    // two or more roots of modulus close to |r|
                    root.bisect(&sturm);
                }
            }
        }
        root.bisect(&sturm);
    }
    None
}

fn abs_lo(r: &RealRoot) -> BigRational {
    if r.lo.is_negative() != r.hi.is_negative() {
        BigRational::zero()
    } else {
        r.lo.abs().min(r.hi.abs())
    }
}

/// An explicit N such that u_n != c for all n >= N, for a sequence whose
/// minimal recurrence has nonzero constant term and a strictly dominant
/// real root of modulus > 1.
///
/// With r the dominant root and f = (x - r) h, the sequence splits as
/// u_n = alpha r^n + e_n where e satisfies the recurrence h, whose roots
/// lie in |z| < q; powers of the companion of h / q are bounded in norm by
/// K once some power has norm below 1, so |e_n| <= K q^n |e-state|.
pub fn growth_cutoff(u: &Lrs, c: &BigRational) -> Option<u64> {
    let f = u.charpoly();
    let cert = dominance(&f)?;
    let sf = squarefree(&f);
    let sturm = Sturm::new(&sf);
    let mut root = cert.root.clone();
    for _ in 0..80 {
        if let Some(n) = try_cutoff(u, &f, &root, &cert.q, c) {
            return Some(n);
        }
        for _ in 0..8 {
            root.bisect(&sturm);
        }
    }
    None
}

fn try_cutoff(u: &Lrs, f: &QPoly, root: &RealRoot, q: &BigRational, c: &BigRational) -> Option<u64> {
    let d = f.degree()?;
    let r = Iv::hull(&root.lo, &root.hi);
    let r_abs_lo = r.mig();
    if !(r_abs_lo > 1.0) {
        return None;
    }
    // h = f / (x - r), monic of degree d - 1
    let fc: Vec<Iv> = (0..=d).map(|i| Iv::point(&f.coeff(i))).collect();
    let mut h = vec![Iv::point(&BigRational::zero()); d];
    h[d - 1] = fc[d];
    for i in (1..d).rev() {
        h[i - 1] = fc[i].add(r.mul(h[i]));
    }
    let init: Vec<Iv> = u.init().iter().map(Iv::point).collect();
    let mut kappa = Iv::point(&BigRational::zero());
    let mut h_at_r = Iv::point(&BigRational::zero());
    let mut rp = Iv::point(&BigRational::one());
    for i in 0..d {
        kappa = kappa.add(h[i].mul(init[i]));
        h_at_r = h_at_r.add(h[i].mul(rp));
        rp = rp.mul(r);
    }
    let alpha = kappa.div(h_at_r)?;
    if alpha.contains_zero() || !alpha.is_finite() {
        return None;
    }
    let alpha_lo = alpha.mig();
    let qf = Iv::point(q);
    let q_hi = qf.hi;
    let c_hi = Iv::point(c).mag();
    let bound = if d == 1 {
        0.0
    } else {
        let m = d - 1;
        let mut e0 = 0.0f64;
        let mut rp = Iv::point(&BigRational::one());
        for item in init.iter().take(m) {
            e0 = e0.max(item.sub(alpha.mul(rp)).mag());
            rp = rp.mul(r);
        }
        // companion of h scaled by 1/q
        let mut comp = vec![vec![Iv::point(&BigRational::zero()); m]; m];
        for i in 0..m - 1 {
            comp[i][i + 1] = Iv::point(&BigRational::one()).div(qf)?;
        }
        for j in 0..m {
            comp[m - 1][j] = Iv::point(&BigRational::zero()).sub(h[j]).div(qf)?;
        }
        let norm = |a: &Vec<Vec<Iv>>| -> f64 {
            a.iter().map(|row| row.iter().map(|x| x.mag()).sum::<f64>()).fold(0.0, f64::max).next_up()
        };
        let mut k = 1.0f64;
        let mut power = comp.clone();
        let mut found = false;
        for _ in 0..4096 {
            let nrm = norm(&power);
            if !nrm.is_finite() {
                return None;
            }
            if nrm < 1.0 {
                found = true;
                break;
            }
            k = k.max(nrm);
            power = mat_mul(&power, &comp);
        }
        if !found {
            return None;
        }
        (k * e0).next_up()
    };
    // n with |alpha| R^n >= 8 max(B q^n, |c|), which implies
    // |alpha| R^n >= 4 (B q^n + |c|)
    let la = alpha_lo.ln();
    let lr = r_abs_lo.ln();
    let lq = q_hi.ln();
    if !(lr > lq) || !la.is_finite() {
        return None;
    }
    let l8 = 8f64.ln();
    let mut n = 0f64;
    if bound > 0.0 {
        n = n.max((l8 + bound.ln() - la) / (lr - lq));
    }
    if c_hi > 0.0 {
        n = n.max((l8 + c_hi.ln() - la) / lr);
    }
    let n = n.max(0.0).ceil() + 1.0;
    if !n.is_finite() || n > 1e7 {
        return None;
    }
    let lhs = la + n * lr;
    let rhs = 4.0 * (bound * (n * lq).exp() + c_hi);
    (rhs == 0.0 || lhs >= rhs.ln() + 1e-9).then_some(n as u64)
}

fn mat_mul(a: &[Vec<Iv>], b: &[Vec<Iv>]) -> Vec<Vec<Iv>> {
    let n = a.len();
    let m = b[0].len();
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| {
                    (0..b.len()).fold(Iv::point(&BigRational::zero()), |acc, k| acc.add(a[i][k].mul(b[k][j])))
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sturm_isolates_roots() {
        // (x - 1)(x + 2)(x - 3)
        let f = QPoly::from_ints(&[-1, 1]).mul(&QPoly::from_ints(&[2, 1])).mul(&QPoly::from_ints(&[-3, 1]));
        let r = isolate_real_roots(&f);
        assert_eq!(r.len(), 3);
        assert_eq!(integer_roots(&f), vec![BigInt::from(-2), BigInt::from(1), BigInt::from(3)]);
        // x^2 - 2 has no integer roots, two real ones
        let g = QPoly::from_ints(&[-2, 0, 1]);
        assert_eq!(isolate_real_roots(&g).len(), 2);
        assert!(integer_roots(&g).is_empty());
    }

    #[test]
    fn schur_cohn_counts() {
        // (x - 1/2)(x - 3)
        let f = QPoly::from_ints(&[3, -7, 2]);
        assert_eq!(roots_inside_disc(&f, &rat(1)), Some(1));
        assert_eq!(roots_inside_disc(&f, &rat(4)), Some(2));
        assert_eq!(roots_inside_disc(&f, &BigRational::new(1.into(), 4.into())), Some(0));
        // x^2 + 1 has both roots on the unit circle
        assert_eq!(roots_inside_disc(&QPoly::from_ints(&[1, 0, 1]), &rat(1)), None);
        assert_eq!(roots_inside_disc(&QPoly::from_ints(&[1, 0, 1]), &rat(2)), Some(2));
    }

    #[test]
    fn fibonacci_is_dominated() {
        let f = QPoly::from_ints(&[-1, -1, 1]);
        let d = dominance(&f).expect("golden ratio dominates");
        assert!(d.root.lo > rat(1));
        let fib = Lrs::from_ints(&[-1, -1], &[0, 1]).unwrap();
        let n = growth_cutoff(&fib, &rat(1)).unwrap();
        for k in n..n + 50 {
            assert_ne!(fib.eval(k), rat(1));
        }
    }

    #[test]
    fn conjugate_pair_is_not_dominant() {
        // roots 2i, -2i, 1
        let f = QPoly::from_ints(&[4, 0, 1]).mul(&QPoly::from_ints(&[-1, 1]));
        assert!(dominance(&f).is_none());
        // roots 3 and -3
        assert!(dominance(&QPoly::from_ints(&[-9, 0, 1])).is_none());
    }
}
