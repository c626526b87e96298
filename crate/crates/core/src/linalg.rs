//! Dense integer and rational matrices: products, fast powers, Smith normal
//! form with transforms, integer solving and Krylov minimal polynomials.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type IMat = Vec<Vec<BigInt>>;

pub fn identity(n: usize) -> IMat {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

pub fn zeros(r: usize, c: usize) -> IMat {
    vec![vec![BigInt::zero(); c]; r]
}

pub fn from_i64(rows: &[Vec<i64>]) -> IMat {
    rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

fn ncols(a: &IMat) -> usize {
    a.first().map_or(0, Vec::len)
}

pub fn mat_mul(a: &IMat, b: &IMat) -> IMat {
    let (n, k, m) = (a.len(), b.len(), ncols(b));
    let mut out = zeros(n, m);
    for i in 0..n {
        for l in 0..k {
            if a[i][l].is_zero() {
                continue;
            }
            for j in 0..m {
                if !b[l][j].is_zero() {
                    out[i][j] += &a[i][l] * &b[l][j];
                }
            }
        }
    }
    out
}

pub fn mat_vec(a: &IMat, v: &[BigInt]) -> Vec<BigInt> {
    a.iter().map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum()).collect()
}

fn reduce(a: &mut IMat, q: &BigInt) {
    for row in a.iter_mut() {
        for x in row.iter_mut() {
            *x = x.mod_floor(q);
        }
    }
}

/// `a^e`, optionally with entries reduced modulo `q` after every product.
pub fn mat_pow(a: &IMat, e: &BigUint, q: Option<&BigInt>) -> IMat {
    let mut out = identity(a.len());
    let mut base = a.clone();
    if let Some(q) = q {
        reduce(&mut out, q);
        reduce(&mut base, q);
    }
    let bits = e.bits();
    for i in 0..bits {
        if e.bit(i) {
            out = mat_mul(&out, &base);
            if let Some(q) = q {
                reduce(&mut out, q);
            }
        }
        if i + 1 < bits {
            base = mat_mul(&base, &base);
            if let Some(q) = q {
                reduce(&mut base, q);
            }
        }
    }
    out
}

/// Smith normal form `u * a * v = diag` with unimodular `u`, `v`.
#[derive(Clone, Debug)]
pub struct Snf {
    pub u: IMat,
    pub v: IMat,
    /// Nonzero invariant factors d_0 | d_1 | ..., all positive.
    pub diag: Vec<BigInt>,
    pub rows: usize,
    pub cols: usize,
}

impl Snf {
    pub fn rank(&self) -> usize {
        self.diag.len()
    }

    /// Some integer `x` with `a x = b`, if one exists.
    pub fn solve(&self, b: &[BigInt]) -> Option<Vec<BigInt>> {
        let ub = mat_vec(&self.u, b);
        let mut y = vec![BigInt::zero(); self.cols];
        for (i, c) in ub.iter().enumerate() {
            if i < self.rank() {
                let (q, r) = c.div_mod_floor(&self.diag[i]);
                if !r.is_zero() {
                    return None;
                }
                y[i] = q;
            } else if !c.is_zero() {
                return None;
            }
        }
        Some(mat_vec(&self.v, &y))
    }
}

pub fn snf(a: &IMat, rows: usize, cols: usize) -> Snf {
    let mut a = a.clone();
    let mut u = identity(rows);
    let mut v = identity(cols);
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // Pivot: smallest nonzero entry of the trailing block.
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !a[i][j].is_zero() && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        u.swap(t, pi);
        swap_cols(&mut a, t, pj);
        swap_cols(&mut v, t, pj);
        loop {
            let mut clean = true;
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                row_axpy(&mut a, i, t, &q);
                row_axpy(&mut u, i, t, &q);
                if !a[i][t].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                col_axpy(&mut a, j, t, &q);
                col_axpy(&mut v, j, t, &q);
                if !a[t][j].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                // Bring the smallest remainder in row/column t to the pivot.
                let mut best = (t, t);
                for i in t + 1..rows {
                    if !a[i][t].is_zero() && a[i][t].abs() < a[best.0][best.1].abs() {
                        best = (i, t);
                    }
                }
                for j in t + 1..cols {
                    if !a[t][j].is_zero() && a[t][j].abs() < a[best.0][best.1].abs() {
                        best = (t, j);
                    }
                }
                if best.0 != t {
                    a.swap(t, best.0);
                    u.swap(t, best.0);
                } else if best.1 != t {
                    swap_cols(&mut a, t, best.1);
                    swap_cols(&mut v, t, best.1);
                }
                continue;
            }
            let bad = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !a[i][j].is_multiple_of(&a[t][t])));
            match bad {
                Some(i) => {
                    let one = -BigInt::one();
                    row_axpy(&mut a, t, i, &one);
                    row_axpy(&mut u, t, i, &one);
                }
                None => break,
            }
        }
        if a[t][t].is_negative() {
            for x in a[t].iter_mut() {
                *x = -&*x;
            }
            for x in u[t].iter_mut() {
                *x = -&*x;
            }
        }
        diag.push(a[t][t].clone());
        t += 1;
    }
    Snf { u, v, diag, rows, cols }
}

/// row_i -= q * row_j
fn row_axpy(a: &mut IMat, i: usize, j: usize, q: &BigInt) {
    let rj = a[j].clone();
    for (x, y) in a[i].iter_mut().zip(&rj) {
        *x -= q * y;
    }
}

/// col_i -= q * col_j
fn col_axpy(a: &mut IMat, i: usize, j: usize, q: &BigInt) {
    for row in a.iter_mut() {
        let y = row[j].clone();
        row[i] -= q * y;
    }
}

fn swap_cols(a: &mut IMat, i: usize, j: usize) {
    if i != j {
        for row in a.iter_mut() {
            row.swap(i, j);
        }
    }
}

/// Incremental row-echelon basis over Q, used to detect the first linear
/// dependency in a Krylov sequence.
struct Echelon {
    rows: Vec<(usize, Vec<BigRational>, Vec<BigRational>)>,
    len: usize,
}

impl Echelon {
    fn new() -> Self {
        Echelon { rows: Vec::new(), len: 0 }
    }

    /// Adds `v`; returns the coefficients expressing it in the earlier
    /// vectors when it is dependent.
    fn push(&mut self, v: Vec<BigRational>) -> Option<Vec<BigRational>> {
        let k = self.len;
        let mut v = v;
        // combo tracks v as a combination of the inserted vectors
        let mut combo = vec![BigRational::zero(); k + 1];
        combo[k] = BigRational::one();
        for (piv, row, rc) in &self.rows {
            if v[*piv].is_zero() {
                continue;
            }
            let f = v[*piv].clone();
            for (x, y) in v.iter_mut().zip(row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
            for (x, y) in combo.iter_mut().zip(rc) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        match v.iter().position(|x| !x.is_zero()) {
            Some(piv) => {
                let inv = v[piv].recip();
                let row = v.iter().map(|x| x * &inv).collect();
                let rc = combo.iter().map(|x| x * &inv).collect();
                self.rows.push((piv, row, rc));
                self.len += 1;
                None
            }
            // 0 = combo . (v_0..v_k) with combo[k] = 1
            None => Some(combo[..k].iter().map(|x| -x).collect()),
        }
    }
}

/// Monic minimal annihilating polynomial of the sequence `seq(0), seq(1), ...`
/// of rational vectors in a finite-dimensional space: returns
/// `c_0..c_{l-1}` with `seq(l) + sum c_i seq(i) = 0`.
pub fn krylov_relation(mut seq: impl FnMut(usize) -> Vec<BigRational>) -> Vec<BigRational> {
    let mut ech = Echelon::new();
    let mut k = 0;
    loop {
        if let Some(coeffs) = ech.push(seq(k)) {
            return coeffs.into_iter().map(|x| -x).collect();
        }
        k += 1;
    }
}

fn to_rat(v: &[BigInt]) -> Vec<BigRational> {
    v.iter().map(|x| BigRational::from_integer(x.clone())).collect()
}

fn integral(c: Vec<BigRational>) -> Vec<BigInt> {
    c.into_iter()
        .map(|x| {
            assert!(x.is_integer(), "annihilator of an integer matrix must be integral");
            x.to_integer()
        })
        .collect()
}

/// Minimal polynomial of a square integer matrix as `c_0..c_{l-1}`
/// (monic, integer by Gauss's lemma).
pub fn min_poly(a: &IMat) -> Vec<BigInt> {
    let n = a.len();
    if n == 0 {
        return Vec::new();
    }
    let mut pow = identity(n);
    let c = krylov_relation(|k| {
        if k > 0 {
            pow = mat_mul(&pow, a);
        }
        to_rat(&pow.concat())
    });
    integral(c)
}

/// Minimal polynomial of the vector `v` under `a`.
pub fn local_min_poly(a: &IMat, v: &[BigInt]) -> Vec<BigInt> {
    let mut cur = v.to_vec();
    let c = krylov_relation(|k| {
        if k > 0 {
            cur = mat_vec(a, &cur);
        }
        to_rat(&cur)
    });
    integral(c)
}
