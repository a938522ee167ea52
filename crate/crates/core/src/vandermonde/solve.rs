use super::cauchy::{apply_dft, check_distinct, dft_transform, GeneralizedCauchy};
use super::ldu::{cauchy_ldu, PivotedLdu};
use crate::error::{Error, Result};
use crate::linalg::{norm2, solve_lower_right, solve_upper_right, CMatrix, C64};

/// (X·F)·Π₂·U⁻¹·Δ⁻¹·L⁻¹·Π₁ for a factorization of V·F.
pub fn apply_ldu_inverse(xf: &CMatrix, ldu: &PivotedLdu) -> Result<CMatrix> {
    if let Some(k) = ldu.delta.iter().position(|d| d.norm() == 0.0) {
        return Err(Error::Singular { step: k });
    }
    let y = ldu.p2.permute_cols(xf);
    let y = solve_upper_right(&y, &ldu.u, true)?;
    let inv: Vec<C64> = ldu.delta.iter().map(|d| d.inv()).collect();
    let y = y.scale_columns(&inv);
    let y = solve_lower_right(&y, &ldu.l, true)?;
    Ok(ldu.p1.unpermute_cols(&y))
}

fn check_shape(x: &CMatrix, lams: &[C64]) -> Result<()> {
    if x.cols() != lams.len() {
        return Err(Error::Dimension(format!(
            "X has {} columns but {} nodes were given",
            x.cols(),
            lams.len()
        )));
    }
    check_distinct(lams)
}

/// Ŵ = X·V(Λ)⁻¹ through the DFT and the pivoted LDU of the resulting
/// generalized Cauchy matrix.
pub fn solve_modes_dft(x: &CMatrix, lams: &[C64]) -> Result<CMatrix> {
    check_shape(x, lams)?;
    let g = dft_transform(lams, lams.len())?;
    let ldu = cauchy_ldu(&g)?;
    apply_ldu_inverse(&apply_dft(x), &ldu)
}

/// Solution with the row scaling D₁ kept out of the factorization:
/// Ŵ = `scaled`·diag(`d1`)⁻¹.
#[derive(Clone, Debug)]
pub struct DeferredModes {
    pub scaled: CMatrix,
    pub d1: Vec<C64>,
}

impl DeferredModes {
    /// ‖Ŵ(:,j)‖ = ‖scaled(:,j)‖/|d1_j|, evaluated without forming Ŵ.
    pub fn amplitudes(&self) -> Vec<f64> {
        (0..self.scaled.cols())
            .map(|j| norm2(self.scaled.col(j)) / self.d1[j].norm())
            .collect()
    }

    pub fn modes(&self) -> CMatrix {
        let inv: Vec<C64> = self.d1.iter().map(|d| d.inv()).collect();
        self.scaled.scale_columns(&inv)
    }
}

/// Variant of `solve_modes_dft` that factors C·D₂ and returns D₁ apart.
pub fn solve_modes_dft_deferred(x: &CMatrix, lams: &[C64]) -> Result<DeferredModes> {
    check_shape(x, lams)?;
    let g = dft_transform(lams, lams.len())?;
    let (reduced, d1) = g.without_row_scaling();
    let ldu = cauchy_ldu(&reduced)?;
    let scaled = apply_ldu_inverse(&apply_dft(x), &ldu)?;
    Ok(DeferredModes { scaled, d1 })
}

/// Factorization of V(Λ)·F for square V.
pub fn vandermonde_ldu(lams: &[C64]) -> Result<(GeneralizedCauchy, PivotedLdu)> {
    check_distinct(lams)?;
    let g = dft_transform(lams, lams.len())?;
    let ldu = cauchy_ldu(&g)?;
    Ok((g, ldu))
}
