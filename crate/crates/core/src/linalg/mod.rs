//! Dense complex linear algebra. Matrices are stored column-major and
//! treated as immutable values by every operation.

mod eig;
mod lstsq;
mod matrix;
mod qr;
mod svd;

pub use eig::{eig_dense, eigenvalues, schur, Eigen};
pub use lstsq::{lstsq, lstsq_matrix, Lstsq, LstsqVec};
pub use matrix::{dot, norm2, CMatrix, Permutation, C64, ONE, ZERO};
pub use qr::{
    qr_col_pivoted, solve_lower, solve_lower_right, solve_upper, solve_upper_right, thin_qr, Lu,
};
pub use svd::{condition_2, jacobi_orthogonalize, singular_values, svd, Svd};
pub(crate) use svd::finish as svd_finish;
