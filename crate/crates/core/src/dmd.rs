//! SVD-based DMD (Schmid's Rayleigh quotient) and its amplitudes.

use crate::error::{Error, Result};
use crate::linalg::{condition_2, eig_dense, lstsq_matrix, svd, CMatrix, C64};

#[derive(Clone, Debug)]
pub struct DmdResult {
    /// Ritz vectors Z_k = U_k·B_k, unit columns.
    pub z: CMatrix,
    pub lambdas: Vec<C64>,
    /// Eigenvectors of S_k, unit columns.
    pub b: CMatrix,
    pub u: CMatrix,
    pub sigma: Vec<f64>,
    pub phi: CMatrix,
    pub rank: usize,
    /// Set when the eigenvector matrix of S_k is numerically singular.
    pub defective: bool,
}

/// S_k = U_k*·Y_m·Φ_k·Σ_k⁻¹ and its eigenpairs. `rank_tol` defaults to
/// max(n, m)·ε.
pub fn schmid_dmd(x: &CMatrix, y: &CMatrix, rank_tol: Option<f64>) -> Result<DmdResult> {
    if x.shape() != y.shape() {
        return Err(Error::Dimension(format!("X is {:?} but Y is {:?}", x.shape(), y.shape())));
    }
    let tol = rank_tol.unwrap_or(x.rows().max(x.cols()) as f64 * f64::EPSILON);
    let s = svd(x);
    let k = s.sigma.iter().filter(|&&v| v > tol * s.sigma[0]).count();
    if k == 0 {
        return Err(Error::ZeroRank);
    }
    let u = s.u.columns(0..k);
    let phi = s.v.columns(0..k);
    let sigma: Vec<f64> = s.sigma[..k].to_vec();
    let inv: Vec<C64> = sigma.iter().map(|&v| C64::new(1.0 / v, 0.0)).collect();
    let sk = u.adjoint().matmul(y).matmul(&phi).scale_columns(&inv);
    let e = eig_dense(&sk)?;
    let mut z = u.matmul(&e.vectors);
    for j in 0..k {
        let nz = z.col_norm(j);
        for v in z.col_mut(j) {
            *v /= nz;
        }
    }
    let defective = condition_2(&e.vectors) > 1.0 / (k as f64 * f64::EPSILON);
    Ok(DmdResult { z, lambdas: e.values, b: e.vectors, u, sigma, phi, rank: k, defective })
}

#[derive(Clone, Debug)]
pub struct DmdAmplitudes {
    pub values: Vec<C64>,
    /// True when B_k was too ill-conditioned and an SVD least-squares
    /// solve was used.
    pub fallback: bool,
}

/// ã = B⁻¹·(Σ·Φ(1,:)*).
pub fn dmd_amplitudes(r: &DmdResult) -> Result<DmdAmplitudes> {
    let k = r.rank;
    let rhs: Vec<C64> = (0..k).map(|j| r.phi[(0, j)].conj() * r.sigma[j]).collect();
    let rhs = CMatrix::from_col_major(k, 1, rhs)?;
    let fallback = condition_2(&r.b) > 1e12;
    let sol = lstsq_matrix(&r.b, &rhs)?;
    Ok(DmdAmplitudes { values: sol.x.col(0).to_vec(), fallback: fallback || sol.rank_deficient })
}

/// Greedy nearest-neighbour matching of `b` onto `a`: result[i] is the index
/// in `b` paired with a[i]. Pairs are formed in order of increasing
/// distance; `None` when the two sets have different sizes.
pub fn match_eigenvalues(a: &[C64], b: &[C64]) -> Option<Vec<usize>> {
    if a.len() != b.len() {
        return None;
    }
    let mut pairs: Vec<(f64, usize, usize)> = Vec::with_capacity(a.len() * b.len());
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            pairs.push(((x - y).norm(), i, j));
        }
    }
    pairs.sort_by(|p, q| p.0.total_cmp(&q.0).then(p.1.cmp(&q.1)).then(p.2.cmp(&q.2)));
    let mut out = vec![usize::MAX; a.len()];
    let mut used = vec![false; b.len()];
    for (_, i, j) in pairs {
        if out[i] == usize::MAX && !used[j] {
            out[i] = j;
            used[j] = true;
        }
    }
    Some(out)
}

/// Largest distance between matched eigenvalues.
pub fn matched_distance(a: &[C64], b: &[C64]) -> Option<f64> {
    let p = match_eigenvalues(a, b)?;
    Some(a.iter().zip(&p).fold(0.0f64, |m, (x, &j)| m.max((x - b[j]).norm())))
}
