use super::matrix::{dot, norm2, CMatrix, Permutation, C64, ONE, ZERO};
use crate::error::{Error, Result};

/// Householder reflector H = I − β v v*, acting on rows `start..`.
struct Reflector {
    start: usize,
    v: Vec<C64>,
    beta: f64,
}

impl Reflector {
    /// Reflector mapping x to (α, 0, …, 0) with |α| = ‖x‖.
    fn annihilate(x: &[C64], start: usize) -> (Self, C64) {
        let nx = norm2(x);
        if nx == 0.0 {
            return (Self { start, v: vec![ZERO; x.len()], beta: 0.0 }, ZERO);
        }
        let phase = if x[0] == ZERO { ONE } else { x[0] / x[0].norm() };
        let alpha = -phase * nx;
        let mut v = x.to_vec();
        v[0] -= alpha;
        let vv = norm2(&v);
        let beta = if vv == 0.0 { 0.0 } else { 2.0 / (vv * vv) };
        (Self { start, v, beta }, alpha)
    }

    fn apply(&self, y: &mut [C64]) {
        if self.beta == 0.0 {
            return;
        }
        let seg = &mut y[self.start..self.start + self.v.len()];
        let s = dot(&self.v, seg) * self.beta;
        for (d, &vi) in seg.iter_mut().zip(&self.v) {
            *d -= vi * s;
        }
    }
}

/// Householder factorization into reflectors and R, optionally with column pivoting.
fn householder(a: &CMatrix, pivot: bool) -> (Vec<Reflector>, CMatrix, Permutation) {
    let (n, k) = a.shape();
    let steps = n.min(k);
    let mut w = a.clone();
    let mut perm = Permutation::identity(k);
    let mut refl = Vec::with_capacity(steps);
    for j in 0..steps {
        if pivot {
            let mut best = j;
            let mut best_norm = -1.0;
            for c in j..k {
                let nc = norm2(&w.col(c)[j..]);
                if nc > best_norm {
                    best_norm = nc;
                    best = c;
                }
            }
            w.swap_cols(j, best);
            perm.swap(j, best);
        }
        let (h, alpha) = Reflector::annihilate(&w.col(j)[j..], j);
        {
            let col = w.col_mut(j);
            col[j] = alpha;
            for x in &mut col[j + 1..] {
                *x = ZERO;
            }
        }
        for c in j + 1..k {
            h.apply(w.col_mut(c));
        }
        refl.push(h);
    }
    let r = CMatrix::from_fn(steps, k, |i, c| if i <= c { w[(i, c)] } else { ZERO });
    (refl, r, perm)
}

fn form_q(refl: &[Reflector], n: usize, k: usize) -> CMatrix {
    let mut q = CMatrix::from_fn(n, k, |i, j| if i == j { ONE } else { ZERO });
    for j in 0..k {
        for h in refl.iter().rev() {
            h.apply(q.col_mut(j));
        }
    }
    q
}

/// Make diag(R) real nonnegative by moving phases into Q.
fn normalize_phases(q: &mut CMatrix, r: &mut CMatrix) {
    for i in 0..r.rows() {
        let d = r[(i, i)];
        if d == ZERO {
            continue;
        }
        let ph = d / d.norm();
        for c in 0..r.cols() {
            r[(i, c)] *= ph.conj();
        }
        for x in q.col_mut(i) {
            *x *= ph;
        }
        r[(i, i)] = C64::new(d.norm(), 0.0);
    }
}

/// Thin QR, A = QR with Q n×k orthonormal and R k×k upper triangular with
/// real nonnegative diagonal.
pub fn thin_qr(a: &CMatrix) -> Result<(CMatrix, CMatrix)> {
    let (n, k) = a.shape();
    if n < k {
        return Err(Error::Dimension(format!("thin_qr needs rows >= cols, got {n}x{k}")));
    }
    let (refl, mut r, _) = householder(a, false);
    let mut q = form_q(&refl, n, k);
    normalize_phases(&mut q, &mut r);
    Ok((q, r))
}

/// QR with column pivoting, A·P = Q·R, where column j of A·P is column
/// `p.map()[j]` of A. Pivots are chosen by largest remaining column norm.
pub fn qr_col_pivoted(a: &CMatrix) -> (CMatrix, CMatrix, Permutation) {
    let (n, k) = a.shape();
    let (refl, mut r, p) = householder(a, true);
    let mut q = form_q(&refl, n, n.min(k));
    normalize_phases(&mut q, &mut r);
    (q, r, p)
}

/// Solve R x = b for square upper-triangular R.
pub fn solve_upper(r: &CMatrix, b: &[C64]) -> Result<Vec<C64>> {
    let k = r.cols();
    let mut x = b.to_vec();
    for i in (0..k).rev() {
        let mut s = x[i];
        for j in i + 1..k {
            s -= r[(i, j)] * x[j];
        }
        let d = r[(i, i)];
        if d == ZERO {
            return Err(Error::Singular { step: i });
        }
        x[i] = s / d;
    }
    Ok(x)
}

/// Solve L x = b for square lower-triangular L.
pub fn solve_lower(l: &CMatrix, b: &[C64]) -> Result<Vec<C64>> {
    let k = l.cols();
    let mut x = b.to_vec();
    for i in 0..k {
        let mut s = x[i];
        for j in 0..i {
            s -= l[(i, j)] * x[j];
        }
        let d = l[(i, i)];
        if d == ZERO {
            return Err(Error::Singular { step: i });
        }
        x[i] = s / d;
    }
    Ok(x)
}

/// X·U⁻¹ for upper-triangular U; `unit` skips the diagonal division.
pub fn solve_upper_right(x: &CMatrix, u: &CMatrix, unit: bool) -> Result<CMatrix> {
    let k = u.cols();
    let mut y = x.clone();
    for j in 0..k {
        for p in 0..j {
            let c = u[(p, j)];
            if c == ZERO {
                continue;
            }
            for i in 0..y.rows() {
                let t = y[(i, p)];
                y[(i, j)] -= t * c;
            }
        }
        if !unit {
            let d = u[(j, j)];
            if d == ZERO {
                return Err(Error::Singular { step: j });
            }
            for v in y.col_mut(j) {
                *v /= d;
            }
        }
    }
    Ok(y)
}

/// X·L⁻¹ for lower-triangular L; `unit` skips the diagonal division.
pub fn solve_lower_right(x: &CMatrix, l: &CMatrix, unit: bool) -> Result<CMatrix> {
    let k = l.cols();
    let mut y = x.clone();
    for j in (0..k).rev() {
        for p in j + 1..k {
            let c = l[(p, j)];
            if c == ZERO {
                continue;
            }
            for i in 0..y.rows() {
                let t = y[(i, p)];
                y[(i, j)] -= t * c;
            }
        }
        if !unit {
            let d = l[(j, j)];
            if d == ZERO {
                return Err(Error::Singular { step: j });
            }
            for v in y.col_mut(j) {
                *v /= d;
            }
        }
    }
    Ok(y)
}

/// LU factorization with partial pivoting, P·A = L·U.
#[derive(Clone, Debug)]
pub struct Lu {
    /// Unit lower factor (strict part) and U packed together.
    lu: CMatrix,
    perm: Permutation,
}

impl Lu {
    pub fn factor(a: &CMatrix) -> Result<Self> {
        let (n, k) = a.shape();
        if n != k {
            return Err(Error::Dimension(format!("LU needs a square matrix, got {n}x{k}")));
        }
        let mut w = a.clone();
        let mut perm = Permutation::identity(n);
        for j in 0..n {
            let mut p = j;
            for i in j + 1..n {
                if w[(i, j)].norm() > w[(p, j)].norm() {
                    p = i;
                }
            }
            if w[(p, j)] == ZERO {
                return Err(Error::Singular { step: j });
            }
            w.swap_rows(j, p);
            perm.swap(j, p);
            let d = w[(j, j)];
            for i in j + 1..n {
                w[(i, j)] /= d;
            }
            for c in j + 1..n {
                let t = w[(j, c)];
                if t == ZERO {
                    continue;
                }
                for i in j + 1..n {
                    let l = w[(i, j)];
                    w[(i, c)] -= l * t;
                }
            }
        }
        Ok(Self { lu: w, perm })
    }

    pub fn lower(&self) -> CMatrix {
        let n = self.lu.rows();
        CMatrix::from_fn(n, n, |i, j| match i.cmp(&j) {
            std::cmp::Ordering::Greater => self.lu[(i, j)],
            std::cmp::Ordering::Equal => ONE,
            std::cmp::Ordering::Less => ZERO,
        })
    }

    pub fn upper(&self) -> CMatrix {
        let n = self.lu.rows();
        CMatrix::from_fn(n, n, |i, j| if i <= j { self.lu[(i, j)] } else { ZERO })
    }

    /// A⁻¹ b
    pub fn solve(&self, b: &[C64]) -> Result<Vec<C64>> {
        let pb = self.perm.apply(b);
        let y = solve_lower(&self.lower(), &pb)?;
        solve_upper(&self.upper(), &y)
    }

    /// X·A⁻¹ = X·U⁻¹·L⁻¹·P
    pub fn solve_right(&self, x: &CMatrix) -> Result<CMatrix> {
        let y = solve_upper_right(x, &self.upper(), false)?;
        let y = solve_lower_right(&y, &self.lower(), true)?;
        Ok(self.perm.unpermute_cols(&y))
    }
}
