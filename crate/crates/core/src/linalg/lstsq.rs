use super::matrix::{CMatrix, C64, ZERO};
use super::qr::{solve_upper, thin_qr};
use super::svd::svd;
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct Lstsq {
    /// Solution, one column per right-hand side.
    pub x: CMatrix,
    pub rank: usize,
    /// True when A was numerically rank deficient and the minimum-norm
    /// solution was returned.
    pub rank_deficient: bool,
}

/// Least-squares solution of A·X ≈ B (n ≥ k). Rank is decided from the
/// singular values of R with tolerance max(n, k)·ε·σ₁.
pub fn lstsq_matrix(a: &CMatrix, b: &CMatrix) -> Result<Lstsq> {
    let (n, k) = a.shape();
    if b.rows() != n {
        return Err(Error::Dimension(format!("rhs has {} rows, A has {n}", b.rows())));
    }
    let (q, r) = thin_qr(a)?;
    let qb = q.adjoint().matmul(b);
    let s = svd(&r);
    let tol = n.max(k) as f64 * f64::EPSILON * s.sigma[0];
    let rank = s.sigma.iter().filter(|&&x| x > tol).count();
    if rank == k {
        let mut x = CMatrix::zeros(k, b.cols());
        for j in 0..b.cols() {
            x.set_col(j, &solve_upper(&r, qb.col(j))?);
        }
        return Ok(Lstsq { x, rank, rank_deficient: false });
    }
    // Minimum-norm solution V·Σ⁺·U*·(Q*B).
    let uq = s.u.adjoint().matmul(&qb);
    let mut x = CMatrix::zeros(k, b.cols());
    for j in 0..b.cols() {
        let mut col = vec![ZERO; k];
        for p in 0..rank {
            let c = uq[(p, j)] / s.sigma[p];
            for (xi, &vi) in col.iter_mut().zip(s.v.col(p)) {
                *xi += vi * c;
            }
        }
        x.set_col(j, &col);
    }
    Ok(Lstsq { x, rank, rank_deficient: true })
}

#[derive(Clone, Debug)]
pub struct LstsqVec {
    pub x: Vec<C64>,
    pub rank: usize,
    pub rank_deficient: bool,
}

/// Least-squares solution of A·x ≈ b.
pub fn lstsq(a: &CMatrix, b: &[C64]) -> Result<LstsqVec> {
    let bm = CMatrix::from_col_major(b.len(), 1, b.to_vec())?;
    let s = lstsq_matrix(a, &bm)?;
    Ok(LstsqVec { x: s.x.col(0).to_vec(), rank: s.rank, rank_deficient: s.rank_deficient })
}
