//! Exact complex rational arithmetic on the binary values of f64 inputs.

use std::ops::{Add, Mul, Neg, Sub};

use kvcauchy::{CMatrix, C64};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

#[derive(Clone, Debug, PartialEq)]
pub struct Q {
    pub re: BigRational,
    pub im: BigRational,
}

impl Q {
    pub fn zero() -> Self {
        Q { re: BigRational::zero(), im: BigRational::zero() }
    }

    pub fn one() -> Self {
        Q { re: BigRational::one(), im: BigRational::zero() }
    }

    pub fn from_int(k: i64) -> Self {
        Q { re: BigRational::from_integer(BigInt::from(k)), im: BigRational::zero() }
    }

    pub fn from_c64(z: C64) -> Self {
        Q {
            re: BigRational::from_float(z.re).expect("finite"),
            im: BigRational::from_float(z.im).expect("finite"),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Q { re: self.re.clone(), im: -self.im.clone() }
    }

    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Self {
        let d = self.norm_sqr();
        Q { re: &self.re / &d, im: -(&self.im / &d) }
    }

    pub fn div(&self, o: &Q) -> Q {
        self * &o.inv()
    }

    pub fn to_c64(&self) -> C64 {
        C64::new(self.re.to_f64().unwrap_or(f64::NAN), self.im.to_f64().unwrap_or(f64::NAN))
    }

    /// |z|² rounded to f64.
    pub fn norm_sqr_f64(&self) -> f64 {
        self.norm_sqr().to_f64().unwrap_or(f64::INFINITY)
    }
}

impl Add for &Q {
    type Output = Q;
    fn add(self, o: &Q) -> Q {
        Q { re: &self.re + &o.re, im: &self.im + &o.im }
    }
}

impl Sub for &Q {
    type Output = Q;
    fn sub(self, o: &Q) -> Q {
        Q { re: &self.re - &o.re, im: &self.im - &o.im }
    }
}

impl Mul for &Q {
    type Output = Q;
    fn mul(self, o: &Q) -> Q {
        Q { re: &self.re * &o.re - &self.im * &o.im, im: &self.re * &o.im + &self.im * &o.re }
    }
}

impl Neg for &Q {
    type Output = Q;
    fn neg(self) -> Q {
        Q { re: -self.re.clone(), im: -self.im.clone() }
    }
}

pub type QMat = Vec<Vec<Q>>;

pub fn to_cmatrix(a: &QMat) -> CMatrix {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    CMatrix::from_fn(rows, cols, |i, j| a[i][j].to_c64())
}

/// Exact d1_i·d2_j/(x_i − y_j).
pub fn cauchy(x: &[C64], y: &[C64], d1: &[C64], d2: &[C64]) -> QMat {
    let (x, y): (Vec<Q>, Vec<Q>) = (x.iter().map(|&v| Q::from_c64(v)).collect(), y.iter().map(|&v| Q::from_c64(v)).collect());
    let d1: Vec<Q> = d1.iter().map(|&v| Q::from_c64(v)).collect();
    let d2: Vec<Q> = d2.iter().map(|&v| Q::from_c64(v)).collect();
    x.iter()
        .enumerate()
        .map(|(i, xi)| y.iter().enumerate().map(|(j, yj)| (&d1[i] * &d2[j]).div(&(xi - yj))).collect())
        .collect()
}

pub struct ExactLdu {
    pub l: QMat,
    pub delta: Vec<Q>,
    pub u: QMat,
    /// Step at which the prescribed pivot was not of maximal modulus.
    pub bad_pivot: Option<usize>,
}

/// Unpivoted exact elimination of A(p1, p2) where row k is row p1[k] and
/// column k is column p2[k]; also checks that each pivot has maximal
/// modulus in its trailing block (up to a relative slack).
pub fn ldu_with_pivots(a: &QMat, p1: &[usize], p2: &[usize], slack: f64) -> ExactLdu {
    let (mr, mc) = (p1.len(), p2.len());
    let mut w: QMat = p1.iter().map(|&r| p2.iter().map(|&c| a[r][c].clone()).collect()).collect();
    let steps = mr.min(mc);
    let mut l = vec![vec![Q::zero(); steps]; mr];
    let mut u = vec![vec![Q::zero(); mc]; steps];
    let mut delta = Vec::with_capacity(steps);
    let mut bad_pivot = None;
    for k in 0..steps {
        let piv = w[k][k].clone();
        let mut best = 0.0f64;
        for row in w.iter().skip(k) {
            for v in row.iter().skip(k) {
                best = best.max(v.norm_sqr_f64());
            }
        }
        if bad_pivot.is_none() && piv.norm_sqr_f64() < best * (1.0 - slack) {
            bad_pivot = Some(k);
        }
        let inv = piv.inv();
        l[k][k] = Q::one();
        u[k][k] = Q::one();
        for r in k + 1..mr {
            l[r][k] = &w[r][k] * &inv;
        }
        for c in k + 1..mc {
            u[k][c] = &w[k][c] * &inv;
        }
        for r in k + 1..mr {
            for c in k + 1..mc {
                let t = &l[r][k] * &w[k][c];
                w[r][c] = &w[r][c] - &t;
            }
        }
        delta.push(piv);
    }
    ExactLdu { l, delta, u, bad_pivot }
}

/// V(Λ)⁻¹ exactly: column j holds the coefficients of the Lagrange basis
/// polynomial ∏_{k≠j}(z − λ_k)/(λ_j − λ_k).
pub fn inverse_vandermonde(lams: &[C64]) -> QMat {
    let m = lams.len();
    let q: Vec<Q> = lams.iter().map(|&v| Q::from_c64(v)).collect();
    let mut inv = vec![vec![Q::zero(); m]; m];
    for j in 0..m {
        let mut poly = vec![Q::one()];
        let mut den = Q::one();
        for k in 0..m {
            if k == j {
                continue;
            }
            let mut next = vec![Q::zero(); poly.len() + 1];
            for (d, c) in poly.iter().enumerate() {
                next[d + 1] = &next[d + 1] + c;
                let t = c * &q[k];
                next[d] = &next[d] - &t;
            }
            poly = next;
            den = &den * &(&q[j] - &q[k]);
        }
        let dinv = den.inv();
        for (d, c) in poly.iter().enumerate() {
            inv[d][j] = c * &dinv;
        }
    }
    inv
}

pub fn from_cmatrix(a: &CMatrix) -> QMat {
    (0..a.rows()).map(|i| (0..a.cols()).map(|j| Q::from_c64(a[(i, j)])).collect()).collect()
}

pub fn matmul(a: &QMat, b: &QMat) -> QMat {
    let (n, k, m) = (a.len(), b.len(), b[0].len());
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| (0..k).fold(Q::zero(), |acc, t| &acc + &(&a[i][t] * &b[t][j])))
                .collect()
        })
        .collect()
}

/// Exact solution of the square system A·x = b by Gaussian elimination.
pub fn solve(a: &QMat, b: &[Q]) -> Vec<Q> {
    let n = a.len();
    let mut w: QMat = a.iter().zip(b).map(|(r, v)| r.iter().cloned().chain(std::iter::once(v.clone())).collect()).collect();
    for k in 0..n {
        let p = (k..n).find(|&r| !w[r][k].is_zero()).expect("nonsingular");
        w.swap(k, p);
        let inv = w[k][k].inv();
        for r in k + 1..n {
            let f = &w[r][k] * &inv;
            for c in k..=n {
                let t = &f * &w[k][c];
                w[r][c] = &w[r][c] - &t;
            }
        }
    }
    let mut x = vec![Q::zero(); n];
    for k in (0..n).rev() {
        let mut s = w[k][n].clone();
        for c in k + 1..n {
            s = &s - &(&w[k][c] * &x[c]);
        }
        x[k] = s.div(&w[k][k]);
    }
    x
}

/// Exact least-squares minimizer of ‖A·x − b‖ through the normal
/// equations A*A·x = A*b.
pub fn lstsq_normal(a: &QMat, b: &[Q]) -> Vec<Q> {
    let (n, k) = (a.len(), a[0].len());
    let gram: QMat = (0..k)
        .map(|i| (0..k).map(|j| (0..n).fold(Q::zero(), |acc, r| &acc + &(&a[r][i].conj() * &a[r][j]))).collect())
        .collect();
    let rhs: Vec<Q> = (0..k).map(|i| (0..n).fold(Q::zero(), |acc, r| &acc + &(&a[r][i].conj() * &b[r]))).collect();
    solve(&gram, &rhs)
}
