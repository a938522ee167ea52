use nalgebra::{Complex, DMatrix, Schur};

use super::matrix::{norm2, CMatrix, C64, ZERO};
use crate::error::{Error, Result};

const MAX_ITER: usize = 10_000;

/// Eigenvalues and unit-norm eigenvectors of a square matrix.
#[derive(Clone, Debug)]
pub struct Eigen {
    pub values: Vec<C64>,
    pub vectors: CMatrix,
}

/// Complex Schur form A = Q·T·Q*.
///
/// Shifted QR can stall on exactly structured inputs such as cyclic
/// permutations; on failure the iteration is retried on H·A·H for a fixed
/// Householder reflector H.
pub fn schur(a: &CMatrix) -> Result<(CMatrix, CMatrix)> {
    let n = a.rows();
    if n != a.cols() {
        return Err(Error::Dimension(format!("eigensolver needs a square matrix, got {n}x{}", a.cols())));
    }
    let (q, mut t) = match schur_raw(a) {
        Some(qt) => qt,
        None => {
            let h = reflector(n);
            let (q, t) = schur_raw(&h.matmul(a).matmul(&h)).ok_or(Error::EigenNoConvergence { iterations: MAX_ITER })?;
            (h.matmul(&q), t)
        }
    };
    for j in 0..n {
        for i in j + 1..n {
            t[(i, j)] = ZERO;
        }
    }
    Ok((q, t))
}

fn schur_raw(a: &CMatrix) -> Option<(CMatrix, CMatrix)> {
    let n = a.rows();
    let m = DMatrix::<Complex<f64>>::from_column_slice(n, n, a.data());
    let (q, t) = Schur::try_new(m, f64::EPSILON, MAX_ITER)?.unpack();
    let q = CMatrix::from_col_major(n, n, q.as_slice().to_vec()).ok()?;
    let t = CMatrix::from_col_major(n, n, t.as_slice().to_vec()).ok()?;
    Some((q, t))
}

/// I − 2vv*/(v*v) with an irregular fixed v.
fn reflector(n: usize) -> CMatrix {
    let v: Vec<C64> = (0..n).map(|k| C64::new(1.0 + 0.37 * k as f64, 0.11 * (k * k) as f64 + 0.05)).collect();
    let vv: f64 = v.iter().map(|z| z.norm_sqr()).sum();
    CMatrix::from_fn(n, n, |i, j| {
        let id = if i == j { C64::new(1.0, 0.0) } else { ZERO };
        id - v[i] * v[j].conj() * (2.0 / vv)
    })
}

/// Dense eigendecomposition through the complex Schur form followed by
/// back substitution on the triangular factor.
pub fn eig_dense(a: &CMatrix) -> Result<Eigen> {
    let (q, t) = schur(a)?;
    let n = t.rows();
    let values = t.diag();
    let tnorm = t.norm_fro().max(f64::MIN_POSITIVE);
    let small = f64::EPSILON * tnorm;
    let mut y = CMatrix::zeros(n, n);
    for k in 0..n {
        let lam = values[k];
        let mut col = vec![ZERO; n];
        col[k] = C64::new(1.0, 0.0);
        for i in (0..k).rev() {
            let mut s = ZERO;
            for j in i + 1..=k {
                s += t[(i, j)] * col[j];
            }
            let mut d = t[(i, i)] - lam;
            if d.norm() < small {
                d = C64::new(small, 0.0);
            }
            col[i] = -s / d;
            let big = col.iter().fold(0.0f64, |m, z| m.max(z.norm()));
            if big > 1e150 {
                for z in &mut col {
                    *z /= big;
                }
            }
        }
        y.set_col(k, &col);
    }
    let mut vectors = q.matmul(&y);
    for k in 0..n {
        let nk = norm2(vectors.col(k));
        for z in vectors.col_mut(k) {
            *z /= nk;
        }
    }
    Ok(Eigen { values, vectors })
}

pub fn eigenvalues(a: &CMatrix) -> Result<Vec<C64>> {
    Ok(schur(a)?.1.diag())
}
