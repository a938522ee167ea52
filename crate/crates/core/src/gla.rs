//! Generalized Laplace analysis: ergodic averages (1/m)Σ λ^{−i+1}f_i, GLA
//! reconstruction weights, the weighted-GLA form of the reflexive weights
//! and eigenvector-adapted hermitian forms.

use crate::error::{Error, Result};
use crate::linalg::{norm2, solve_upper, thin_qr, CMatrix, Lu, C64, ONE, ZERO};
use crate::reconstruction::{reflexive_weights, ReconstructionProblem, ReconstructionWeights, WeightMethod};

const OVERFLOW_LIMIT: f64 = 1e300;

/// λ^{−(i−1)} for i = 1..m by repeated division. Fails when
/// |λ|^{−(m−1)} exceeds 1e300.
pub fn inverse_powers(lam: C64, m: usize, index: usize) -> Result<Vec<C64>> {
    if lam == ZERO {
        return Err(Error::ZeroEigenvalue { index });
    }
    let a = lam.norm();
    if a < 1.0 && (m.saturating_sub(1) as f64) * (-a.log10()) > OVERFLOW_LIMIT.log10() {
        return Err(Error::InversePowerOverflow { index });
    }
    let mut out = Vec::with_capacity(m);
    let mut p = ONE;
    for _ in 0..m {
        out.push(p);
        p /= lam;
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct GlaAverage {
    /// (1/m)Σ_{i=1}^m λ^{−i+1}f_i
    pub average: Vec<C64>,
    /// The same average over the first ⌊m/2⌋ snapshots.
    pub half_average: Vec<C64>,
    /// ‖average − half_average‖₂
    pub cauchy_difference: f64,
}

fn weighted_average(x: &CMatrix, w: &[C64], count: usize) -> Vec<C64> {
    let mut acc = vec![ZERO; x.rows()];
    for (i, &wi) in w.iter().enumerate().take(count) {
        for (a, &v) in acc.iter_mut().zip(x.col(i)) {
            *a += wi * v;
        }
    }
    let s = 1.0 / count.max(1) as f64;
    acc.iter().map(|v| v * s).collect()
}

/// Finite-m projection average for a dominant eigenvalue λ.
pub fn gla_dominant_projection(snapshots: &CMatrix, lam: C64) -> Result<GlaAverage> {
    let m = snapshots.cols();
    let w = inverse_powers(lam, m, 0)?;
    let average = weighted_average(snapshots, &w, m);
    let half_average = weighted_average(snapshots, &w, (m / 2).max(1));
    let diff: Vec<C64> = average.iter().zip(&half_average).map(|(a, b)| a - b).collect();
    Ok(GlaAverage { cauchy_difference: norm2(&diff), average, half_average })
}

/// (1/m)Σ_i Λ^{−(i−1)}Z_n⁻¹f_i for a full eigenbasis Z_n.
pub fn coordinate_gla(z: &CMatrix, snapshots: &CMatrix, lams: &[C64]) -> Result<Vec<C64>> {
    let n = z.rows();
    if z.cols() != n || lams.len() != n || snapshots.rows() != n {
        return Err(Error::Dimension("coordinate GLA needs a square basis matching the data".into()));
    }
    let lu = Lu::factor(z)?;
    let m = snapshots.cols();
    let mut acc = vec![ZERO; n];
    let pows: Vec<Vec<C64>> =
        lams.iter().enumerate().map(|(j, &l)| inverse_powers(l, m, j)).collect::<Result<_>>()?;
    for i in 0..m {
        let c = lu.solve(snapshots.col(i))?;
        for j in 0..n {
            acc[j] += pows[j][i] * c[j];
        }
    }
    Ok(acc.iter().map(|v| v / m as f64).collect())
}

/// Reconstruction problem with nonzero selected eigenvalues, plus the
/// per-step diagonal weights W_m^{(i)} = diag(w_{m,j}(i)).
#[derive(Clone, Debug)]
pub struct GlaConfig {
    problem: ReconstructionProblem,
}

impl GlaConfig {
    pub fn new(problem: ReconstructionProblem) -> Result<Self> {
        if let Some(j) = problem.lambdas().iter().position(|&l| l == ZERO) {
            return Err(Error::ZeroEigenvalue { index: j });
        }
        Ok(Self { problem })
    }

    pub fn problem(&self) -> &ReconstructionProblem {
        &self.problem
    }

    /// Row j holds w_{m,j}(i) = |λ_j|^{2(i−1)}/Σ_k |λ_j|^{2(k−1)}, i = 1..m.
    pub fn step_weights(&self) -> Vec<Vec<f64>> {
        let m = self.problem.m();
        self.problem.lambdas().iter().map(|&l| step_weights(l.norm(), m)).collect()
    }
}

/// w_m(i) = a^{2(i−1)}/Σ_k a^{2(k−1)} for i = 1..m, without overflow.
pub fn step_weights(a: f64, m: usize) -> Vec<f64> {
    let (q, reversed) = if a <= 1.0 { (a * a, false) } else { (1.0 / (a * a), true) };
    let mut w = Vec::with_capacity(m);
    let mut t = 1.0;
    for _ in 0..m {
        w.push(t);
        t *= q;
    }
    let s: f64 = w.iter().sum();
    for v in &mut w {
        *v /= s;
    }
    if reversed {
        w.reverse();
    }
    w
}

/// α_GLA = (1/m)Σ_i Λ^{−i+1}R⁻¹g_i.
pub fn gla_weights(cfg: &GlaConfig) -> Result<ReconstructionWeights> {
    let p = &cfg.problem;
    let m = p.m();
    let h = p.r_inv_g();
    let mut alpha = Vec::with_capacity(p.l());
    for (j, &lam) in p.lambdas().iter().enumerate() {
        let pw = inverse_powers(lam, m, j)?;
        let s = pw.iter().enumerate().fold(ZERO, |acc, (i, w)| acc + w * h[(j, i)]);
        alpha.push(s / m as f64);
    }
    Ok(ReconstructionWeights::new(p, WeightMethod::Gla, alpha))
}

/// α = Σ_i W_m^{(i)}Λ^{−i+1}R⁻¹g_i.
pub fn weighted_gla_weights(cfg: &GlaConfig) -> Result<ReconstructionWeights> {
    let p = &cfg.problem;
    let m = p.m();
    let h = p.r_inv_g();
    let w = cfg.step_weights();
    let mut alpha = Vec::with_capacity(p.l());
    for (j, &lam) in p.lambdas().iter().enumerate() {
        let pw = inverse_powers(lam, m, j)?;
        let s = (0..m).fold(ZERO, |acc, i| acc + pw[i] * w[j][i] * h[(j, i)]);
        alpha.push(s);
    }
    Ok(ReconstructionWeights::new(p, WeightMethod::WeightedGla, alpha))
}

/// Three-mode setup with z₁ ⟂ z₂ and z₃ coupled to both, reconstructed
/// from {z₁, z₂}.
#[derive(Clone, Debug)]
pub struct ConsistencyConfig {
    pub lambdas: [C64; 3],
    /// (⟨z₃, z₁⟩, ⟨z₃, z₂⟩) with ⟨x, y⟩ = y*x.
    pub inner: [C64; 2],
    pub beta: [C64; 3],
    pub m_grid: Vec<usize>,
    /// Grid points ignored when testing monotonicity.
    pub burn_in: usize,
    /// Consistent when the last error is at most `decay_ratio` times the
    /// first post-burn-in error, or below `abs_tol`.
    pub decay_ratio: f64,
    pub abs_tol: f64,
}

impl Default for ConsistencyConfig {
    fn default() -> Self {
        Self {
            lambdas: [C64::new(0.9, 0.0), C64::new(0.8, 0.0), C64::new(0.4, 0.0)],
            inner: [C64::new(0.5, 0.0), C64::new(0.5, 0.0)],
            beta: [ONE, ONE, ONE],
            m_grid: vec![10, 20, 50, 100, 200, 500, 1000, 2000],
            burn_in: 1,
            decay_ratio: 0.1,
            abs_tol: 1e-10,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ConsistencyRow {
    pub m: usize,
    /// ‖α_GLA − (β₁, β₂)‖
    pub gla_error: f64,
    /// ‖α★ − (β₁, β₂)‖
    pub star_error: f64,
    /// Objectives in the metric I⊗(RR*)⁻¹.
    pub gla_m_objective: f64,
    pub star_m_objective: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub consistent: bool,
    pub optimal: bool,
}

#[derive(Clone, Debug)]
pub struct ConsistencyReport {
    pub rows: Vec<ConsistencyRow>,
    pub gla: Verdict,
    pub star: Verdict,
}

impl ConsistencyConfig {
    /// Snapshots f_i = Σ_k β_k z_k λ_k^{i−1}, i = 1..m, in ℂ³ with
    /// z₁ = e₁, z₂ = e₂, z₃ = (⟨z₃,z₁⟩, ⟨z₃,z₂⟩, 1).
    pub fn snapshots(&self, m: usize) -> CMatrix {
        let z = self.basis();
        let mut x = CMatrix::zeros(3, m);
        let mut pw = [ONE; 3];
        for i in 0..m {
            let coef: Vec<C64> = (0..3).map(|k| self.beta[k] * pw[k]).collect();
            x.set_col(i, &z.mul_vec(&coef));
            for k in 0..3 {
                pw[k] *= self.lambdas[k];
            }
        }
        x
    }

    pub fn basis(&self) -> CMatrix {
        CMatrix::from_columns(&[
            vec![ONE, ZERO, ZERO],
            vec![ZERO, ONE, ZERO],
            vec![self.inner[0], self.inner[1], ONE],
        ])
        .expect("fixed shape")
    }

    fn validate(&self) -> Result<()> {
        let a: Vec<f64> = self.lambdas.iter().map(|l| l.norm()).collect();
        if !(a[0] <= 1.0 && a[0] >= a[1] && a[1] > a[2] && a[2] > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "need 1 >= |l1| >= |l2| > |l3| > 0, got {:?}",
                a
            )));
        }
        if self.m_grid.is_empty() || self.m_grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidConfig("m grid must be nonempty and increasing".into()));
        }
        Ok(())
    }
}

fn is_consistent(errors: &[f64], cfg: &ConsistencyConfig) -> bool {
    let tail = &errors[cfg.burn_in.min(errors.len() - 1)..];
    let last = *tail.last().expect("nonempty");
    if last <= cfg.abs_tol {
        return true;
    }
    let monotone = tail.windows(2).all(|w| w[1] <= w[0]);
    monotone && last <= cfg.decay_ratio * tail[0]
}

/// Error curves of α_GLA and α★ against (β₁, β₂) over the m grid.
pub fn consistency_experiment(cfg: &ConsistencyConfig) -> Result<ConsistencyReport> {
    cfg.validate()?;
    let z = cfg.basis().columns(0..2);
    let lams = vec![cfg.lambdas[0], cfg.lambdas[1]];
    let target = [cfg.beta[0], cfg.beta[1]];
    let err = |a: &[C64]| norm2(&[a[0] - target[0], a[1] - target[1]]);
    let mut rows = Vec::with_capacity(cfg.m_grid.len());
    for &m in &cfg.m_grid {
        let p = ReconstructionProblem::new(z.clone(), lams.clone(), cfg.snapshots(m))?;
        let star = reflexive_weights(&p);
        let gla = gla_weights(&GlaConfig::new(p.clone())?)?;
        rows.push(ConsistencyRow {
            m,
            gla_error: err(&gla.alpha),
            star_error: err(&star.alpha),
            gla_m_objective: p.m_objective(&gla.alpha),
            star_m_objective: p.m_objective(&star.alpha),
        });
    }
    let gla_err: Vec<f64> = rows.iter().map(|r| r.gla_error).collect();
    let star_err: Vec<f64> = rows.iter().map(|r| r.star_error).collect();
    let slack = |a: f64, b: f64| a <= b * (1.0 + 1e-12) + 1e-28;
    let star_optimal = rows.iter().all(|r| slack(r.star_m_objective, r.gla_m_objective));
    let gla_optimal = rows.iter().all(|r| slack(r.gla_m_objective, r.star_m_objective));
    Ok(ConsistencyReport {
        gla: Verdict { consistent: is_consistent(&gla_err, cfg), optimal: gla_optimal },
        star: Verdict { consistent: is_consistent(&star_err, cfg), optimal: star_optimal },
        rows,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PFormMode {
    /// Z is a full invertible eigenbasis; P = Z⁻*Z⁻¹.
    Full,
    /// The first ℓ columns of Z; P = Q_ℓR⁻*R⁻¹Q_ℓ* + Q_ℓ^⊥Q_ℓ^⊥*.
    Adapted(usize),
}

#[derive(Clone, Debug)]
pub struct PForm {
    pub p: CMatrix,
    pub mode: PFormMode,
}

impl PForm {
    /// ⟨x, y⟩_P = y*Px.
    pub fn inner(&self, x: &[C64], y: &[C64]) -> C64 {
        crate::linalg::dot(y, &self.p.mul_vec(x))
    }
}

/// Hermitian form under which the selected modes are orthonormal and
/// P-orthogonal to the orthogonal complement of their span.
pub fn p_form(z: &CMatrix, mode: PFormMode) -> Result<PForm> {
    let n = z.rows();
    let l = match mode {
        PFormMode::Full => {
            if z.cols() != n {
                return Err(Error::Dimension("full P-form needs a square basis".into()));
            }
            n
        }
        PFormMode::Adapted(l) => {
            if l == 0 || l > z.cols() || l > n {
                return Err(Error::Dimension(format!("cannot adapt to {l} modes")));
            }
            l
        }
    };
    let zl = z.columns(0..l);
    let (q, r) = thin_qr(&zl)?;
    let rmax = r.diag().iter().fold(0.0f64, |a, d| a.max(d.norm()));
    if let Some(k) = r.diag().iter().position(|d| d.norm() <= n as f64 * f64::EPSILON * rmax) {
        return Err(Error::Singular { step: k });
    }
    let mut rinv = CMatrix::zeros(l, l);
    for c in 0..l {
        let mut e = vec![ZERO; l];
        e[c] = ONE;
        rinv.set_col(c, &solve_upper(&r, &e)?);
    }
    let qr = q.matmul(&rinv.adjoint());
    let mut p = qr.matmul(&qr.adjoint());
    let qq = q.matmul(&q.adjoint());
    for j in 0..n {
        for i in 0..n {
            let id = if i == j { ONE } else { ZERO };
            p[(i, j)] += id - qq[(i, j)];
        }
    }
    // Symmetrize away rounding.
    let p = CMatrix::from_fn(n, n, |i, j| (p[(i, j)] + p[(j, i)].conj()) * 0.5);
    Ok(PForm { p, mode })
}

/// Minimizer of Σ_i ‖f_i − Σ_j z_j λ_j^{i−1}β_j‖²_P with P adapted to Z_ℓ,
/// from the P-weighted normal equations.
pub fn p_norm_weights(z: &CMatrix, lams: &[C64], x: &CMatrix) -> Result<ReconstructionWeights> {
    let l = z.cols();
    let pf = p_form(z, PFormMode::Adapted(l))?;
    let pz = pf.p.matmul(z);
    let gram_p = z.adjoint().matmul(&pz);
    let proj = pz.adjoint().matmul(x);
    let m = x.cols();
    let mut lhs = CMatrix::zeros(l, l);
    let mut rhs = vec![ZERO; l];
    let mut pw = vec![ONE; l];
    for i in 0..m {
        for a in 0..l {
            for b in 0..l {
                lhs[(a, b)] += pw[a].conj() * gram_p[(a, b)] * pw[b];
            }
            rhs[a] += pw[a].conj() * proj[(a, i)];
        }
        for (v, lam) in pw.iter_mut().zip(lams) {
            *v *= lam;
        }
    }
    let alpha = Lu::factor(&lhs)?.solve(&rhs)?;
    let problem = ReconstructionProblem::new(z.clone(), lams.to_vec(), x.clone())?;
    Ok(ReconstructionWeights::new(&problem, WeightMethod::Reflexive, alpha))
}
