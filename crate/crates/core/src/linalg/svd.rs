use super::matrix::{dot, norm2, CMatrix, C64, ONE, ZERO};
use super::qr::thin_qr;

const MAX_SWEEPS: usize = 80;

/// Thin SVD A = U·diag(σ)·V*, σ nonincreasing.
#[derive(Clone, Debug)]
pub struct Svd {
    pub u: CMatrix,
    pub sigma: Vec<f64>,
    pub v: CMatrix,
}

/// One-sided Jacobi sweeps orthogonalizing the columns of `g` in place.
/// Returns the accumulated right rotations J with G_in·J = G_out.
pub fn jacobi_orthogonalize(g: &mut CMatrix) -> CMatrix {
    let k = g.cols();
    let mut v = CMatrix::identity(k);
    let eps = f64::EPSILON;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..k {
            for q in p + 1..k {
                let alpha = norm2(g.col(p)).powi(2);
                let beta = norm2(g.col(q)).powi(2);
                let gamma = dot(g.col(p), g.col(q));
                let gabs = gamma.norm();
                if gabs == 0.0 || gabs <= eps * (alpha.sqrt() * beta.sqrt()) {
                    continue;
                }
                rotated = true;
                let phase = gamma / gabs;
                let zeta = (beta - alpha) / (2.0 * gabs);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate(g, p, q, phase, c, s);
                rotate(&mut v, p, q, phase, c, s);
            }
        }
        if !rotated {
            break;
        }
    }
    v
}

fn rotate(a: &mut CMatrix, p: usize, q: usize, phase: C64, c: f64, s: f64) {
    let ph = phase.conj();
    for i in 0..a.rows() {
        let x = a[(i, p)];
        let y = a[(i, q)] * ph;
        a[(i, p)] = x * c - y * s;
        a[(i, q)] = x * s + y * c;
    }
}

/// Normalize Jacobi output columns into (U, σ, V), sorted by decreasing σ.
pub(crate) fn finish(g: &CMatrix, v: &CMatrix) -> Svd {
    let k = g.cols();
    let norms: Vec<f64> = (0..k).map(|j| norm2(g.col(j))).collect();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| norms[b].total_cmp(&norms[a]));
    let sigma: Vec<f64> = order.iter().map(|&j| norms[j]).collect();
    let mut u = CMatrix::zeros(g.rows(), k);
    let mut zero_cols = Vec::new();
    for (dst, &j) in order.iter().enumerate() {
        if norms[j] > 0.0 {
            let inv = 1.0 / norms[j];
            let col: Vec<C64> = g.col(j).iter().map(|z| z * inv).collect();
            u.set_col(dst, &col);
        } else {
            zero_cols.push(dst);
        }
    }
    complete_basis(&mut u, &zero_cols);
    let v = v.select_columns(&order);
    Svd { u, sigma, v }
}

/// Fill the listed columns with unit vectors orthogonal to the others.
fn complete_basis(u: &mut CMatrix, cols: &[usize]) {
    let n = u.rows();
    for &c in cols {
        let mut best: Option<(f64, Vec<C64>)> = None;
        for e in 0..n {
            let mut w = vec![ZERO; n];
            w[e] = ONE;
            for _ in 0..2 {
                for j in 0..u.cols() {
                    if j == c || cols.contains(&j) && j > c {
                        continue;
                    }
                    let h = dot(u.col(j), &w);
                    for (wi, &uj) in w.iter_mut().zip(u.col(j)) {
                        *wi -= uj * h;
                    }
                }
            }
            let nw = norm2(&w);
            if best.as_ref().is_none_or(|(b, _)| nw > *b) {
                best = Some((nw, w));
            }
        }
        if let Some((nw, w)) = best {
            if nw > 0.0 {
                let col: Vec<C64> = w.iter().map(|z| z / nw).collect();
                u.set_col(c, &col);
            }
        }
    }
}

/// Thin SVD by one-sided Jacobi. Tall inputs are first reduced by QR,
/// wide inputs are handled through the adjoint.
pub fn svd(a: &CMatrix) -> Svd {
    let (n, k) = a.shape();
    if n < k {
        let s = svd(&a.adjoint());
        return Svd { u: s.v, sigma: s.sigma, v: s.u };
    }
    if n > k {
        let (q, r) = thin_qr(a).expect("rows >= cols checked above");
        let s = svd(&r);
        return Svd { u: q.matmul(&s.u), sigma: s.sigma, v: s.v };
    }
    let mut g = a.clone();
    let v = jacobi_orthogonalize(&mut g);
    finish(&g, &v)
}

pub fn singular_values(a: &CMatrix) -> Vec<f64> {
    svd(a).sigma
}

/// σ_max/σ_min, infinite when σ_min = 0.
pub fn condition_2(a: &CMatrix) -> f64 {
    let s = singular_values(a);
    let smin = *s.last().expect("nonempty");
    if smin == 0.0 {
        f64::INFINITY
    } else {
        s[0] / smin
    }
}
