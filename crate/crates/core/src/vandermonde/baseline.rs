use super::cauchy::check_distinct;
use super::solve::solve_modes_dft;
use crate::error::{Error, Result};
use crate::linalg::{norm2, CMatrix, Lu, C64};

/// Björck–Pereyra solve of the primal system V·c = b, V_ij = λ_i^{j−1}
/// (polynomial interpolation in the monomial basis).
pub fn bp_primal(lams: &[C64], b: &[C64]) -> Result<Vec<C64>> {
    check_distinct(lams)?;
    if b.len() != lams.len() {
        return Err(Error::Dimension("rhs length must equal the number of nodes".into()));
    }
    let n = lams.len();
    let mut f = b.to_vec();
    for k in 0..n.saturating_sub(1) {
        for i in (k + 1..n).rev() {
            f[i] = (f[i] - f[i - 1]) / (lams[i] - lams[i - k - 1]);
        }
    }
    for k in (0..n.saturating_sub(1)).rev() {
        for i in k..n - 1 {
            let t = f[i + 1] * lams[k];
            f[i] -= t;
        }
    }
    Ok(f)
}

/// Björck–Pereyra solve of the dual system Vᵀ·a = b.
pub fn bp_dual(lams: &[C64], b: &[C64]) -> Result<Vec<C64>> {
    check_distinct(lams)?;
    if b.len() != lams.len() {
        return Err(Error::Dimension("rhs length must equal the number of nodes".into()));
    }
    let n = lams.len();
    let mut f = b.to_vec();
    for k in 0..n.saturating_sub(1) {
        for i in (k + 1..n).rev() {
            let t = lams[k] * f[i - 1];
            f[i] -= t;
        }
    }
    for k in (0..n.saturating_sub(1)).rev() {
        for i in k + 1..n {
            f[i] /= lams[i] - lams[i - k - 1];
        }
        for i in k..n - 1 {
            let t = f[i + 1];
            f[i] -= t;
        }
    }
    Ok(f)
}

/// Rows w with w·V = b for every row b of `rhs`, i.e. rhs·V⁻¹.
pub fn bjorck_pereyra(lams: &[C64], rhs: &CMatrix) -> Result<CMatrix> {
    if rhs.cols() != lams.len() {
        return Err(Error::Dimension("rhs rows must have one entry per node".into()));
    }
    let mut out = CMatrix::zeros(rhs.rows(), rhs.cols());
    for i in 0..rhs.rows() {
        let w = bp_dual(lams, &rhs.row(i))?;
        for (j, v) in w.into_iter().enumerate() {
            out[(i, j)] = v;
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scaling {
    None,
    /// V = D_r·V⁽ʳ⁾ with unit ℓ₂ rows.
    Row,
    /// V = V⁽ᶜ⁾·D_c with unit ℓ₂ columns.
    Column,
}

/// Row-scaled Vandermonde V⁽ʳ⁾ and the row norms D_r.
pub fn row_scaled(v: &CMatrix) -> (CMatrix, Vec<C64>) {
    let d: Vec<C64> = (0..v.rows()).map(|i| C64::new(norm2(&v.row(i)), 0.0)).collect();
    let inv: Vec<C64> = d.iter().map(|x| x.inv()).collect();
    (v.scale_rows(&inv), d)
}

/// Column-scaled Vandermonde V⁽ᶜ⁾ and the column norms D_c.
pub fn col_scaled(v: &CMatrix) -> (CMatrix, Vec<C64>) {
    let d: Vec<C64> = (0..v.cols()).map(|j| C64::new(v.col_norm(j), 0.0)).collect();
    let inv: Vec<C64> = d.iter().map(|x| x.inv()).collect();
    (v.scale_columns(&inv), d)
}

/// X·V⁻¹ by LU with partial pivoting of the (optionally scaled) Vandermonde
/// matrix. Row: (X·V⁽ʳ⁾⁻¹)·D_r⁻¹. Column: (X·D_c⁻¹)·V⁽ᶜ⁾⁻¹.
pub fn scaled_solve(x: &CMatrix, lams: &[C64], scaling: Scaling) -> Result<CMatrix> {
    check_distinct(lams)?;
    let m = lams.len();
    if x.cols() != m {
        return Err(Error::Dimension("X must have one column per node".into()));
    }
    let v = CMatrix::vandermonde(lams, m);
    match scaling {
        Scaling::None => Lu::factor(&v)?.solve_right(x),
        Scaling::Row => {
            let (vr, d) = row_scaled(&v);
            let inv: Vec<C64> = d.iter().map(|x| x.inv()).collect();
            Ok(Lu::factor(&vr)?.solve_right(x)?.scale_columns(&inv))
        }
        Scaling::Column => {
            let (vc, d) = col_scaled(&v);
            let inv: Vec<C64> = d.iter().map(|x| x.inv()).collect();
            Lu::factor(&vc)?.solve_right(&x.scale_columns(&inv))
        }
    }
}

/// How X·V(Λ)⁻¹ is applied.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InverseSolver {
    Naive,
    RowScaled,
    ColumnScaled,
    BjorckPereyra,
    DftCauchy,
}

impl InverseSolver {
    pub const ALL: [InverseSolver; 5] = [
        InverseSolver::Naive,
        InverseSolver::RowScaled,
        InverseSolver::ColumnScaled,
        InverseSolver::BjorckPereyra,
        InverseSolver::DftCauchy,
    ];

    pub fn name(self) -> &'static str {
        match self {
            InverseSolver::Naive => "naive",
            InverseSolver::RowScaled => "row-scaled",
            InverseSolver::ColumnScaled => "col-scaled",
            InverseSolver::BjorckPereyra => "bp",
            InverseSolver::DftCauchy => "dft-cauchy",
        }
    }
}

/// X·V(Λ)⁻¹ with the selected method.
pub fn apply_inverse_vandermonde(x: &CMatrix, lams: &[C64], solver: InverseSolver) -> Result<CMatrix> {
    match solver {
        InverseSolver::Naive => scaled_solve(x, lams, Scaling::None),
        InverseSolver::RowScaled => scaled_solve(x, lams, Scaling::Row),
        InverseSolver::ColumnScaled => scaled_solve(x, lams, Scaling::Column),
        InverseSolver::BjorckPereyra => bjorck_pereyra(lams, x),
        InverseSolver::DftCauchy => solve_modes_dft(x, lams),
    }
}
