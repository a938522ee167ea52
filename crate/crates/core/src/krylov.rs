//! Companion-matrix representation of snapshot sequences: least-squares
//! coefficients, Ritz values, residual identities and the modal
//! decomposition f_i = Σ_j w_j 𝔞_j λ_j^{i−1}.

use crate::error::{Error, Result};
use crate::linalg::{eigenvalues, norm2, singular_values, solve_upper, thin_qr, CMatrix, C64, ONE, ZERO};
use crate::vandermonde::{apply_inverse_vandermonde, check_distinct, InverseSolver};

/// Complex n×(m+1) snapshot block, column i is f_{i+1}.
#[derive(Clone, Debug, PartialEq)]
pub struct SnapshotMatrix(CMatrix);

impl SnapshotMatrix {
    pub fn new(x: CMatrix) -> Result<Self> {
        if x.cols() < 2 {
            return Err(Error::Dimension(format!("need at least two snapshots, got {}", x.cols())));
        }
        Ok(Self(x))
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn n(&self) -> usize {
        self.0.rows()
    }

    /// Number of snapshots used by the Krylov block (m).
    pub fn m(&self) -> usize {
        self.0.cols() - 1
    }

    /// X_m = (f_1, …, f_m).
    pub fn x_m(&self) -> CMatrix {
        self.0.columns(0..self.m())
    }

    /// Y_m = (f_2, …, f_{m+1}).
    pub fn y_m(&self) -> CMatrix {
        self.0.columns(1..self.m() + 1)
    }

    pub fn last(&self) -> &[C64] {
        self.0.col(self.m())
    }
}

/// X = Q̂·R_f with X_m ≡ R_x = R_f(:, 1..m) and Y_m ≡ R_y = R_f(:, 2..m+1)
/// in the Q̂ basis.
#[derive(Clone, Debug)]
pub struct CompressedSnapshots {
    pub q: CMatrix,
    pub rf: CMatrix,
}

impl CompressedSnapshots {
    pub fn rx(&self) -> CMatrix {
        self.rf.columns(0..self.rf.cols() - 1)
    }

    pub fn ry(&self) -> CMatrix {
        self.rf.columns(1..self.rf.cols())
    }

    /// The compressed data as a snapshot block.
    pub fn as_snapshots(&self) -> SnapshotMatrix {
        SnapshotMatrix(self.rf.clone())
    }
}

pub fn compress_qr(x: &SnapshotMatrix) -> Result<CompressedSnapshots> {
    let (n, cols) = x.0.shape();
    if n < cols {
        return Err(Error::CompressionUnavailable { n, cols });
    }
    let (q, rf) = thin_qr(&x.0)?;
    Ok(CompressedSnapshots { q, rf })
}

#[derive(Clone, Copy, Debug)]
pub struct CompanionOptions {
    /// Full-rank test σ_min(X_m) > rank_tol·σ_max(X_m); `None` means m·ε.
    pub rank_tol: Option<f64>,
}

impl Default for CompanionOptions {
    fn default() -> Self {
        Self { rank_tol: None }
    }
}

/// Companion coefficients, residual and Ritz values of a snapshot block.
#[derive(Clone, Debug)]
pub struct CompanionModel {
    pub coeffs: Vec<C64>,
    /// r = f_{m+1} − X_m·c in the original coordinates.
    pub residual: Vec<C64>,
    pub ritz_values: Vec<C64>,
    /// Index pairs whose Ritz values are within 1e-10·max|λ|.
    pub near_coincident: Vec<(usize, usize)>,
}

/// Least-squares companion coefficients through the QR factorization of the
/// whole block: c = R_x(1:m,1:m)⁻¹·R_f(1:m, m+1).
pub fn companion_from_snapshots(x: &SnapshotMatrix, opts: CompanionOptions) -> Result<CompanionModel> {
    let m = x.m();
    let n = x.n();
    if n < m {
        let s = singular_values(&x.x_m());
        return Err(Error::RankDeficient { sigma_min: 0.0, sigma_max: s[0] });
    }
    let xm = x.x_m();
    let (q, r) = thin_qr(&xm)?;
    let s = singular_values(&r);
    let tol = opts.rank_tol.unwrap_or(m as f64 * f64::EPSILON);
    let (smax, smin) = (s[0], s[m - 1]);
    if !(smin > tol * smax) {
        return Err(Error::RankDeficient { sigma_min: smin, sigma_max: smax });
    }
    let qf = q.adjoint_mul_vec(x.last());
    let coeffs = solve_upper(&r, &qf)?;
    let fit = xm.mul_vec(&coeffs);
    let residual: Vec<C64> = x.last().iter().zip(&fit).map(|(a, b)| a - b).collect();
    let ritz = ritz_values(&coeffs)?;
    Ok(CompanionModel { coeffs, residual, ritz_values: ritz.values, near_coincident: ritz.near_coincident })
}

/// C_m: ones on the subdiagonal, c in the last column.
pub fn companion_matrix(c: &[C64]) -> CMatrix {
    let m = c.len();
    CMatrix::from_fn(m, m, |i, j| {
        if j == m - 1 {
            c[i]
        } else if i == j + 1 {
            ONE
        } else {
            ZERO
        }
    })
}

#[derive(Clone, Debug)]
pub struct RitzValues {
    pub values: Vec<C64>,
    pub near_coincident: Vec<(usize, usize)>,
}

/// Eigenvalues of C_m(c) from the dense eigensolver, with near-coincident
/// pairs flagged.
pub fn ritz_values(c: &[C64]) -> Result<RitzValues> {
    if c.is_empty() {
        return Err(Error::Dimension("empty coefficient vector".into()));
    }
    let values = eigenvalues(&companion_matrix(c))?;
    let scale = values.iter().fold(0.0f64, |a, z| a.max(z.norm()));
    let mut near = Vec::new();
    for i in 0..values.len() {
        for j in i + 1..values.len() {
            if (values[i] - values[j]).norm() <= 1e-10 * scale {
                near.push((i, j));
            }
        }
    }
    Ok(RitzValues { values, near_coincident: near })
}

/// C_m = U_m + ĉ·e_mᵀ with U_m the cyclic shift ((U_m)_{1,m} = 1), so
/// ĉ = c − e_1.
pub fn unitary_plus_rank_one(c: &[C64]) -> Result<(CMatrix, Vec<C64>)> {
    let m = c.len();
    if m < 2 {
        return Err(Error::Dimension("splitting needs m >= 2".into()));
    }
    let u = CMatrix::from_fn(m, m, |i, j| {
        if (i == j + 1) || (i == 0 && j == m - 1) {
            ONE
        } else {
            ZERO
        }
    });
    let mut chat = c.to_vec();
    chat[0] -= ONE;
    Ok((u, chat))
}

/// Last row of V(Λ)⁻¹: entry j is ∏_{k≠j} 1/(λ_j − λ_k).
pub fn last_row_inverse_vandermonde(lams: &[C64]) -> Result<Vec<C64>> {
    check_distinct(lams)?;
    Ok((0..lams.len())
        .map(|j| {
            lams.iter()
                .enumerate()
                .filter(|&(k, _)| k != j)
                .fold(ONE, |acc, (_, &lk)| acc / (lams[j] - lk))
        })
        .collect())
}

/// ‖A·ŵ_j − λ_j·ŵ_j‖/‖ŵ_j‖ = ‖r‖/‖ŵ_j‖·∏_{k≠j} 1/|λ_j − λ_k|.
pub fn ritz_residual(j: usize, lams: &[C64], r_norm: f64, w_norm: f64) -> Result<f64> {
    check_distinct(lams)?;
    if j >= lams.len() {
        return Err(Error::Dimension(format!("index {j} out of range")));
    }
    if r_norm == 0.0 {
        return Ok(0.0);
    }
    let prod = lams
        .iter()
        .enumerate()
        .filter(|&(k, _)| k != j)
        .fold(1.0, |acc, (_, &lk)| acc / (lams[j] - lk).norm());
    Ok(r_norm / w_norm * prod)
}

#[derive(Clone, Debug)]
pub struct ModalDecomposition {
    /// Unit-norm modes w_j.
    pub modes: CMatrix,
    /// 𝔞_j = ‖ŵ_j‖.
    pub amplitudes: Vec<f64>,
    pub ritz_values: Vec<C64>,
    /// Ŵ_m = X_m·V_m⁻¹.
    pub raw_modes: CMatrix,
    pub model: CompanionModel,
}

impl ModalDecomposition {
    /// Σ_j w_j·𝔞_j·λ_j^{i−1} for i = 1..count.
    pub fn reconstruct(&self, count: usize) -> CMatrix {
        let v = CMatrix::vandermonde(&self.ritz_values, count);
        self.raw_modes.matmul(&v)
    }
}

/// Modes and amplitudes of the snapshots. When n > m+1 the data are
/// compressed first and the modes mapped back through Q̂.
pub fn modal_decomposition(
    x: &SnapshotMatrix,
    solver: InverseSolver,
    opts: CompanionOptions,
) -> Result<ModalDecomposition> {
    let m = x.m();
    let compressed = if x.n() > m + 1 { Some(compress_qr(x)?) } else { None };
    let work = compressed.as_ref().map_or_else(|| x.clone(), |c| c.as_snapshots());
    let model = companion_from_snapshots(&work, opts)?;
    let w_small = apply_inverse_vandermonde(&work.x_m(), &model.ritz_values, solver)?;
    let raw_modes = match &compressed {
        Some(c) => c.q.matmul(&w_small),
        None => w_small,
    };
    let model = match &compressed {
        Some(c) => CompanionModel { residual: c.q.mul_vec(&model.residual), ..model },
        None => model,
    };
    let amplitudes: Vec<f64> = (0..m).map(|j| norm2(raw_modes.col(j))).collect();
    let mut modes = raw_modes.clone();
    for (j, &a) in amplitudes.iter().enumerate() {
        if a > 0.0 {
            for z in modes.col_mut(j) {
                *z /= a;
            }
        }
    }
    Ok(ModalDecomposition { modes, amplitudes, ritz_values: model.ritz_values.clone(), raw_modes, model })
}
