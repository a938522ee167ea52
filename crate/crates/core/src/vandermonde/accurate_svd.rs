use super::cauchy::{apply_dft, dft_matrix};
use super::ldu::PivotedLdu;
use crate::linalg::{jacobi_orthogonalize, qr_col_pivoted, svd_finish, CMatrix, Svd, C64, ZERO};

/// SVD of the factored matrix Π₁ᵀ·L·Δ·U·Π₂ᵀ to high relative accuracy.
///
/// L·Δ is factored by QR with column pivoting, W = R·Pᵀ·U is formed
/// explicitly and one-sided Jacobi is run on W* (whose columns carry the
/// grading of R).
pub fn ldu_svd(ldu: &PivotedLdu) -> Svd {
    let ld = ldu.l.scale_columns(&ldu.delta);
    let (q, r, p) = qr_col_pivoted(&ld);
    let pu = p.permute_rows(&ldu.u);
    let w = r.matmul(&pu);
    let mut g = w.adjoint();
    let j = jacobi_orthogonalize(&mut g);
    let s = svd_finish(&g, &j);
    let omega = q.matmul(&s.v);
    Svd {
        u: ldu.p1.unpermute_rows(&omega),
        sigma: s.sigma,
        v: ldu.p2.unpermute_rows(&s.u),
    }
}

/// SVD V_m = 𝒰·Σ·𝒱* of a square Vandermonde matrix from the LDU of V_m·F,
/// with 𝒰 = Π₁ᵀΩ and 𝒱 = F·Π₂·Θ.
pub fn accurate_svd(ldu: &PivotedLdu) -> Svd {
    let s = ldu_svd(ldu);
    let f = dft_matrix(s.v.rows());
    Svd { u: s.u, sigma: s.sigma, v: f.matmul(&s.v) }
}

/// σ_max/σ_min from an accurate SVD.
pub fn accurate_condition(ldu: &PivotedLdu) -> f64 {
    let s = ldu_svd(ldu);
    let lo = *s.sigma.last().expect("nonempty");
    if lo == 0.0 {
        f64::INFINITY
    } else {
        s.sigma[0] / lo
    }
}

/// X·𝒱·diag(σ_i/(σ_i² + η²))·𝒰*; zero singular values are dropped.
pub fn regularized_apply(x: &CMatrix, svd: &Svd, eta: f64) -> CMatrix {
    let xv = x.matmul(&svd.v);
    let filt: Vec<C64> = svd
        .sigma
        .iter()
        .map(|&s| if s == 0.0 { ZERO } else { C64::new(s / (s * s + eta * eta), 0.0) })
        .collect();
    xv.scale_columns(&filt).matmul(&svd.u.adjoint())
}

/// Same as `regularized_apply` for an SVD from `ldu_svd` of V·F, using the
/// FFT for X·F instead of the dense 𝒱.
pub fn regularized_apply_fft(x: &CMatrix, ldu_svd: &Svd, eta: f64) -> CMatrix {
    let xf = apply_dft(x);
    regularized_apply(&xf, ldu_svd, eta)
}
