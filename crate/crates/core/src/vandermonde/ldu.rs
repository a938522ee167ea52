use super::cauchy::{check_distinct, GeneralizedCauchy};
use crate::error::{Error, Result};
use crate::linalg::{CMatrix, Permutation, C64, ONE, ZERO};

/// Π₁·G·Π₂ = L·diag(Δ)·U with complete pivoting. Row k of Π₁·G is row
/// `p1.map()[k]` of G; column k of G·Π₂ is column `p2.map()[k]` of G.
#[derive(Clone, Debug)]
pub struct PivotedLdu {
    pub p1: Permutation,
    pub p2: Permutation,
    /// Unit lower triangular, rows × r.
    pub l: CMatrix,
    pub delta: Vec<C64>,
    /// Unit upper triangular, r × cols.
    pub u: CMatrix,
}

impl PivotedLdu {
    /// Π₁ᵀ·L·Δ·U·Π₂ᵀ, the factored matrix in its original ordering.
    pub fn reassemble(&self) -> CMatrix {
        let ld = self.l.scale_columns(&self.delta);
        let m = ld.matmul(&self.u);
        self.p2.unpermute_cols(&self.p1.unpermute_rows(&m))
    }

    /// Largest |Δ_k| / smallest |Δ_k|.
    pub fn delta_range(&self) -> f64 {
        let (lo, hi) = self
            .delta
            .iter()
            .fold((f64::INFINITY, 0.0f64), |(lo, hi), d| (lo.min(d.norm()), hi.max(d.norm())));
        hi / lo
    }
}

/// Complete-pivoted LDU of a generalized Cauchy matrix computed from
/// Schur complements updated through the displacement structure:
/// G(r,c) ← G(r,c)·(x_r−x_k)(y_c−y_k)/((y_c−x_k)(x_r−y_k)) for nonzero
/// entries and G(r,c) ← −G(r,k)·G(k,c)/G(k,k) otherwise.
///
/// The pivot is the first entry of maximal modulus in column-major scan
/// order of the trailing block.
pub fn cauchy_ldu(g: &GeneralizedCauchy) -> Result<PivotedLdu> {
    check_distinct(&g.x_nodes)?;
    check_distinct(&g.y_nodes)?;
    let (mx, my) = (g.rows(), g.cols());
    let mut a = g.assemble();
    let mut x = g.x_nodes.clone();
    let mut y = g.y_nodes.clone();
    let mut p1 = Permutation::identity(mx);
    let mut p2 = Permutation::identity(my);
    let steps = mx.min(my);
    for k in 0..steps {
        let (mut im, mut jm, mut best) = (k, k, -1.0);
        for c in k..my {
            for r in k..mx {
                let v = a[(r, c)].norm();
                if v > best {
                    best = v;
                    im = r;
                    jm = c;
                }
            }
        }
        if im != k {
            p1.swap(k, im);
            x.swap(k, im);
            a.swap_rows(k, im);
        }
        if jm != k {
            p2.swap(k, jm);
            y.swap(k, jm);
            a.swap_cols(k, jm);
        }
        let piv = a[(k, k)];
        if piv == ZERO {
            return Err(Error::Singular { step: k });
        }
        let (xk, yk) = (x[k], y[k]);
        for c in k + 1..my {
            let akc = a[(k, c)];
            let yc = y[c];
            for r in k + 1..mx {
                let arc = a[(r, c)];
                a[(r, c)] = if arc != ZERO {
                    arc * ((x[r] - xk) * (yc - yk)) / ((yc - xk) * (x[r] - yk))
                } else {
                    -a[(r, k)] * akc / piv
                };
            }
        }
    }
    let delta: Vec<C64> = (0..steps).map(|k| a[(k, k)]).collect();
    let l = CMatrix::from_fn(mx, steps, |r, k| match r.cmp(&k) {
        std::cmp::Ordering::Greater => a[(r, k)] / delta[k],
        std::cmp::Ordering::Equal => ONE,
        std::cmp::Ordering::Less => ZERO,
    });
    let u = CMatrix::from_fn(steps, my, |k, c| match k.cmp(&c) {
        std::cmp::Ordering::Less => a[(k, c)] / delta[k],
        std::cmp::Ordering::Equal => ONE,
        std::cmp::Ordering::Greater => ZERO,
    });
    Ok(PivotedLdu { p1, p2, l, delta, u })
}
