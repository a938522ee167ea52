//! Vandermonde systems through the DFT: V(Λ)·F is a generalized Cauchy
//! matrix whose complete-pivoted LDU is computed to high relative accuracy
//! and used for solves, SVDs and filtered pseudo-inverses. Björck–Pereyra
//! and scaled LU solvers are included for comparison.

mod accurate_svd;
mod baseline;
mod cauchy;
mod ldu;
mod solve;

pub use accurate_svd::{accurate_condition, accurate_svd, ldu_svd, regularized_apply, regularized_apply_fft};
pub use baseline::{
    apply_inverse_vandermonde, bjorck_pereyra, bp_dual, bp_primal, col_scaled, row_scaled, scaled_solve,
    InverseSolver, Scaling,
};
pub use cauchy::{
    apply_dft, apply_dft_adjoint, check_distinct, dft_matrix, dft_transform, powu, roots_of_unity,
    GeneralizedCauchy,
};
pub use ldu::{cauchy_ldu, PivotedLdu};
pub use solve::{apply_ldu_inverse, solve_modes_dft, solve_modes_dft_deferred, vandermonde_ldu, DeferredModes};
