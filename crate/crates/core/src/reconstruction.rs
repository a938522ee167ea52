//! Snapshot reconstruction from a subset of modes: f_i ≈ Σ_j z_j α_j λ_j^{i−1}.
//!
//! With Z_ℓ = QR and g_i = Q*f_i the objective is
//! Ω²(α) = Σ_i ‖g_i − RΔ_{Λ_i}α‖² + Σ_i ‖(I − QQ*)f_i‖², where
//! Δ_{Λ_i} = diag(λ_j^{i−1}). The stacked operator is S = [RΔ_{Λ_1}; …; RΔ_{Λ_m}].

use std::ops::Range;

use crate::error::{Error, Result};
use crate::linalg::{
    condition_2, lstsq, norm2, solve_upper, svd, thin_qr, CMatrix, Lu, C64, ONE, ZERO,
};
use crate::vandermonde::{apply_dft, dft_transform, powu, GeneralizedCauchy};

#[derive(Clone, Debug)]
pub struct ReconstructionProblem {
    z: CMatrix,
    lambdas: Vec<C64>,
    x: CMatrix,
    q: CMatrix,
    r: CMatrix,
    /// Column i is g_i = Q*f_i.
    g: CMatrix,
}

impl ReconstructionProblem {
    /// `z`: n×ℓ selected modes, `lambdas`: their Ritz values, `x`: n×m snapshots.
    pub fn new(z: CMatrix, lambdas: Vec<C64>, x: CMatrix) -> Result<Self> {
        let (n, l) = z.shape();
        if lambdas.len() != l {
            return Err(Error::Dimension(format!("{l} modes but {} eigenvalues", lambdas.len())));
        }
        if x.rows() != n {
            return Err(Error::Dimension(format!("modes have {n} rows, snapshots have {}", x.rows())));
        }
        if l > x.cols() {
            return Err(Error::Dimension(format!("{l} modes exceed {} snapshots", x.cols())));
        }
        let (q, r) = thin_qr(&z)?;
        let rmax = r.diag().iter().fold(0.0f64, |a, d| a.max(d.norm()));
        if let Some(k) = r.diag().iter().position(|d| d.norm() <= n as f64 * f64::EPSILON * rmax) {
            return Err(Error::Singular { step: k });
        }
        let g = q.adjoint().matmul(&x);
        Ok(Self { z, lambdas, x, q, r, g })
    }

    pub fn l(&self) -> usize {
        self.z.cols()
    }

    pub fn m(&self) -> usize {
        self.x.cols()
    }

    pub fn modes(&self) -> &CMatrix {
        &self.z
    }

    pub fn lambdas(&self) -> &[C64] {
        &self.lambdas
    }

    pub fn snapshots(&self) -> &CMatrix {
        &self.x
    }

    pub fn q(&self) -> &CMatrix {
        &self.q
    }

    pub fn r(&self) -> &CMatrix {
        &self.r
    }

    /// Projected snapshots g_i as columns.
    pub fn g(&self) -> &CMatrix {
        &self.g
    }

    /// Columns R⁻¹g_i.
    pub fn r_inv_g(&self) -> CMatrix {
        let mut h = CMatrix::zeros(self.l(), self.m());
        for i in 0..self.m() {
            let col = solve_upper(&self.r, self.g.col(i)).expect("R checked invertible");
            h.set_col(i, &col);
        }
        h
    }

    /// Ω²(α) = Σ_i ‖f_i − Σ_j z_j α_j λ_j^{i−1}‖², evaluated directly.
    pub fn objective(&self, alpha: &[C64]) -> f64 {
        let rec = reconstruct(&self.z, &self.lambdas, alpha, &self.x, 0..self.m());
        rec.errors.iter().map(|e| e * e).sum()
    }

    /// Σ_i ‖R⁻¹g_i − Δ_{Λ_i}α‖², the objective in the metric M = I⊗(RR*)⁻¹.
    pub fn m_objective(&self, alpha: &[C64]) -> f64 {
        let h = self.r_inv_g();
        let mut pw = vec![ONE; self.l()];
        let mut s = 0.0;
        for i in 0..self.m() {
            for j in 0..self.l() {
                s += (h[(j, i)] - pw[j] * alpha[j]).norm_sqr();
                pw[j] *= self.lambdas[j];
            }
        }
        s
    }

    /// S = [RΔ_{Λ_1}; …; RΔ_{Λ_m}], mℓ×ℓ.
    pub fn stacked_s(&self) -> CMatrix {
        let (l, m) = (self.l(), self.m());
        let mut s = CMatrix::zeros(m * l, l);
        let mut pw = vec![ONE; l];
        for i in 0..m {
            for c in 0..l {
                for r in 0..=c {
                    s[(i * l + r, c)] = self.r[(r, c)] * pw[c];
                }
            }
            for (p, lam) in pw.iter_mut().zip(&self.lambdas) {
                *p *= lam;
            }
        }
        s
    }

    /// g = (g_1; …; g_m).
    pub fn stacked_g(&self) -> Vec<C64> {
        self.g.data().to_vec()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeightMethod {
    MoorePenrose,
    Reflexive,
    ReflexiveFrequency,
    Gla,
    WeightedGla,
}

impl WeightMethod {
    pub fn name(self) -> &'static str {
        match self {
            WeightMethod::MoorePenrose => "mp",
            WeightMethod::Reflexive => "reflexive",
            WeightMethod::ReflexiveFrequency => "reflexive-freq",
            WeightMethod::Gla => "gla",
            WeightMethod::WeightedGla => "weighted-gla",
        }
    }
}

#[derive(Clone, Debug)]
pub struct ReconstructionWeights {
    pub method: WeightMethod,
    pub alpha: Vec<C64>,
    /// Ω²(α), evaluated directly.
    pub objective: f64,
    pub rank_deficient: bool,
}

impl ReconstructionWeights {
    pub fn new(problem: &ReconstructionProblem, method: WeightMethod, alpha: Vec<C64>) -> Self {
        let objective = problem.objective(&alpha);
        Self { method, alpha, objective, rank_deficient: false }
    }
}

/// Indices of the ℓ largest amplitudes, ordered by decreasing amplitude;
/// ties go to the lower index.
pub fn select_dominant(amplitudes: &[f64], l: usize) -> Result<Vec<usize>> {
    if l > amplitudes.len() {
        return Err(Error::Dimension(format!("cannot select {l} of {} modes", amplitudes.len())));
    }
    let mut idx: Vec<usize> = (0..amplitudes.len()).collect();
    idx.sort_by(|&a, &b| amplitudes[b].abs().total_cmp(&amplitudes[a].abs()).then(a.cmp(&b)));
    idx.truncate(l);
    Ok(idx)
}

/// Moore–Penrose weights S†g from the structured normal equations
/// (R*R ∘ Σ_i Λ̄_i Λ_iᵀ)·α = Σ_i Δ*_{Λ_i}R*g_i, with a dense QR least-squares
/// fallback when the Gram matrix has condition above 1e12.
pub fn optimal_weights(p: &ReconstructionProblem) -> Result<ReconstructionWeights> {
    let (l, m) = (p.l(), p.m());
    let rr = p.r.adjoint().matmul(&p.r);
    let rg = p.r.adjoint().matmul(&p.g);
    let mut pw_sum = CMatrix::zeros(l, l);
    let mut rhs = vec![ZERO; l];
    let mut pw = vec![ONE; l];
    for i in 0..m {
        for a in 0..l {
            for b in 0..l {
                pw_sum[(a, b)] += pw[a].conj() * pw[b];
            }
            rhs[a] += pw[a].conj() * rg[(a, i)];
        }
        for (x, lam) in pw.iter_mut().zip(&p.lambdas) {
            *x *= lam;
        }
    }
    let gram = CMatrix::from_fn(l, l, |a, b| rr[(a, b)] * pw_sum[(a, b)]);
    let well_posed = gram.is_finite() && condition_2(&gram) <= 1e12;
    if well_posed {
        if let Ok(lu) = Lu::factor(&gram) {
            let alpha = lu.solve(&rhs)?;
            return Ok(ReconstructionWeights::new(p, WeightMethod::MoorePenrose, alpha));
        }
    }
    let sol = lstsq(&p.stacked_s(), &p.stacked_g())?;
    let mut w = ReconstructionWeights::new(p, WeightMethod::MoorePenrose, sol.x);
    w.rank_deficient = sol.rank_deficient;
    Ok(w)
}

/// Coefficients c_i = λ̄^{i−1}/Σ_k |λ|^{2(k−1)}, i = 1..m, evaluated without
/// overflow for |λ| > 1.
pub fn reflexive_coefficients(lam: C64, m: usize) -> Vec<C64> {
    let a = lam.norm();
    if a <= 1.0 {
        let a2 = a * a;
        let mut s = 0.0;
        let mut t = 1.0;
        for _ in 0..m {
            s += t;
            t *= a2;
        }
        let mut out = Vec::with_capacity(m);
        let mut p = ONE;
        for _ in 0..m {
            out.push(p / s);
            p *= lam.conj();
        }
        out
    } else {
        // λ̄^{i−1}/S = λ^{−(i−1)}·μ^{m−i}/Σ_k μ^k with μ = |λ|⁻².
        let mu = 1.0 / (a * a);
        let mut s = 0.0;
        let mut t = 1.0;
        let mut mu_pows = Vec::with_capacity(m);
        for _ in 0..m {
            mu_pows.push(t);
            s += t;
            t *= mu;
        }
        let inv = lam.inv();
        let mut out = Vec::with_capacity(m);
        let mut p = ONE;
        for i in 0..m {
            out.push(p * mu_pows[m - 1 - i] / s);
            p *= inv;
        }
        out
    }
}

/// Reflexive g-inverse weights α★_j = Σ_i [λ̄_j^{i−1}/Σ_k |λ_j|^{2(k−1)}]·(R⁻¹g_i)_j.
pub fn reflexive_weights(p: &ReconstructionProblem) -> ReconstructionWeights {
    let h = p.r_inv_g();
    let alpha = (0..p.l())
        .map(|j| {
            reflexive_coefficients(p.lambdas[j], p.m())
                .iter()
                .enumerate()
                .fold(ZERO, |acc, (i, c)| acc + c * h[(j, i)])
        })
        .collect();
    ReconstructionWeights::new(p, WeightMethod::Reflexive, alpha)
}

/// Pseudo-inverse through the SVD with tolerance max(shape)·ε·σ₁.
pub fn pinv(a: &CMatrix) -> CMatrix {
    let s = svd(a);
    let tol = a.rows().max(a.cols()) as f64 * f64::EPSILON * s.sigma[0];
    let inv: Vec<C64> =
        s.sigma.iter().map(|&x| if x > tol { C64::new(1.0 / x, 0.0) } else { ZERO }).collect();
    s.v.scale_columns(&inv).matmul(&s.u.adjoint())
}

#[derive(Clone, Debug)]
pub struct GInverseReport {
    /// ‖SS⁻S − S‖_F/‖S‖_F
    pub axiom1: f64,
    /// ‖S⁻SS⁻ − S⁻‖_F/‖S⁻‖_F
    pub axiom2: f64,
    /// ‖(S⁻S)* − S⁻S‖_F
    pub axiom3: f64,
    /// max |SS⁻ − (SS⁻)*|
    pub ss_asymmetry: f64,
    pub ss_hermitian: bool,
    /// ‖S⁻ − S†‖_F/‖S†‖_F
    pub distance_to_pinv: f64,
    pub holds: bool,
}

/// S⁻ = T†(I⊗R⁻¹) with T = [Δ_{Λ_1}; …; Δ_{Λ_m}], assembled densely.
pub fn reflexive_g_inverse(p: &ReconstructionProblem) -> CMatrix {
    let (l, m) = (p.l(), p.m());
    let rinv = {
        let mut ri = CMatrix::zeros(l, l);
        for c in 0..l {
            let mut e = vec![ZERO; l];
            e[c] = ONE;
            ri.set_col(c, &solve_upper(&p.r, &e).expect("R invertible"));
        }
        ri
    };
    let mut sm = CMatrix::zeros(l, m * l);
    for j in 0..l {
        let coef = reflexive_coefficients(p.lambdas[j], m);
        for (i, c) in coef.iter().enumerate() {
            for k in 0..l {
                sm[(j, i * l + k)] = c * rinv[(j, k)];
            }
        }
    }
    sm
}

/// Check the reflexive g-inverse axioms on a small instance (ℓ·m ≤ 200).
pub fn g_inverse_axioms_check(p: &ReconstructionProblem) -> Result<GInverseReport> {
    if p.l() * p.m() > 200 {
        return Err(Error::InvalidConfig("dense g-inverse check is limited to l*m <= 200".into()));
    }
    let s = p.stacked_s();
    let sm = reflexive_g_inverse(p);
    let ssm = s.matmul(&sm);
    let sms = sm.matmul(&s);
    let axiom1 = ssm.matmul(&s).sub(&s).norm_fro() / s.norm_fro();
    let axiom2 = sm.matmul(&s).matmul(&sm).sub(&sm).norm_fro() / sm.norm_fro();
    let axiom3 = sms.adjoint().sub(&sms).norm_fro();
    let ss_asymmetry = ssm.adjoint().sub(&ssm).max_abs();
    let sp = pinv(&s);
    let distance_to_pinv = sm.sub(&sp).norm_fro() / sp.norm_fro();
    let tol = 1e-10;
    Ok(GInverseReport {
        axiom1,
        axiom2,
        axiom3,
        ss_asymmetry,
        ss_hermitian: ss_asymmetry <= tol * ssm.max_abs().max(1.0),
        distance_to_pinv,
        holds: axiom1 <= tol && axiom2 <= tol && axiom3 <= tol,
    })
}

/// X̂ = X·F·D₂*, the frequency-domain snapshots.
pub fn frequency_snapshots(x: &CMatrix) -> CMatrix {
    let m = x.cols();
    let y = crate::vandermonde::roots_of_unity(m);
    let conj: Vec<C64> = y.iter().map(|v| v.conj()).collect();
    apply_dft(x).scale_columns(&conj)
}

/// Frequency-domain reflexive weights when no λ_i is an m-th root of unity:
/// α_i = √m/(λ_i^m − 1)·Σ_j [(1/(λ̄_i − ω^{j−1}))/Σ_k 1/|λ_i − ω̄^{k−1}|²]·(R⁻¹ĝ_j)_i.
pub fn freq_weights_case1(p: &ReconstructionProblem) -> Result<ReconstructionWeights> {
    let m = p.m();
    let g = dft_transform(&p.lambdas, m)?;
    if let Some((i, j)) = g.coincidence.iter().enumerate().find_map(|(i, c)| c.map(|j| (i, j))) {
        return Err(Error::RootOfUnity { index: i, freq: j });
    }
    let xhat = frequency_snapshots(&p.x);
    let ghat = p.q.adjoint().matmul(&xhat);
    let y = &g.y_nodes;
    let sm = (m as f64).sqrt();
    let mut alpha = Vec::with_capacity(p.l());
    let mut h = CMatrix::zeros(p.l(), m);
    for j in 0..m {
        h.set_col(j, &solve_upper(&p.r, ghat.col(j))?);
    }
    for (i, &lam) in p.lambdas.iter().enumerate() {
        let denom: f64 = y.iter().map(|&yk| 1.0 / (lam - yk).norm_sqr()).sum();
        let mut acc = ZERO;
        for j in 0..m {
            let c = ONE / (lam.conj() - y[j].conj());
            acc += c / denom * h[(i, j)];
        }
        alpha.push(acc * sm / (powu(lam, m) - ONE));
    }
    Ok(ReconstructionWeights::new(p, WeightMethod::ReflexiveFrequency, alpha))
}

#[derive(Clone, Debug, PartialEq)]
pub struct CoincidentMode {
    pub mode: usize,
    /// Frequency column j with λ = ω^{1−j} (0-based).
    pub freq: usize,
    /// ∏_{k≠j}(λ − ω^{1−k}).
    pub product: C64,
}

#[derive(Clone, Debug)]
pub struct Case2Structure {
    pub coincident: Vec<CoincidentMode>,
    /// Nonzero pattern of Ĉ, ℓ rows × m columns.
    pub pattern: Vec<Vec<bool>>,
    pub transform: GeneralizedCauchy,
}

impl Case2Structure {
    /// D̂₁·Ĉ = V_{ℓ,m}·F·D₂*.
    pub fn assemble(&self) -> CMatrix {
        let t = &self.transform;
        CMatrix::from_fn(t.rows(), t.cols(), |i, j| t.d1[i] * t.c_entry(i, j))
    }
}

/// Structure of the frequency-domain problem when some λ_i are m-th roots
/// of unity: each such mode enters a single transformed snapshot.
pub fn freq_case2_structure(lams: &[C64], m: usize) -> Result<Case2Structure> {
    let t = dft_transform(lams, m)?;
    let coincident: Vec<CoincidentMode> = t
        .coincidence
        .iter()
        .enumerate()
        .filter_map(|(i, c)| c.map(|j| CoincidentMode { mode: i, freq: j, product: t.coincident_value[i] }))
        .collect();
    if coincident.is_empty() {
        return Err(Error::InvalidConfig("no eigenvalue is an m-th root of unity".into()));
    }
    let pattern = (0..t.rows()).map(|i| (0..m).map(|j| t.c_entry(i, j) != ZERO).collect()).collect();
    Ok(Case2Structure { coincident, pattern, transform: t })
}

#[derive(Clone, Debug)]
pub struct Reconstruction {
    /// Column k approximates snapshot `range.start + k`.
    pub approx: CMatrix,
    /// ‖f_i − f̃_i‖₂ for each i in the range.
    pub errors: Vec<f64>,
}

/// f̃_i = Σ_j z_j α_j λ_j^{i−1} for 0-based snapshot indices i in `range`.
pub fn reconstruct(z: &CMatrix, lams: &[C64], alpha: &[C64], x: &CMatrix, range: Range<usize>) -> Reconstruction {
    let l = z.cols();
    let mut approx = CMatrix::zeros(z.rows(), range.len());
    let mut errors = Vec::with_capacity(range.len());
    for (k, i) in range.enumerate() {
        let coef: Vec<C64> = (0..l).map(|j| alpha[j] * powu(lams[j], i)).collect();
        let f = z.mul_vec(&coef);
        let diff: Vec<C64> = x.col(i).iter().zip(&f).map(|(a, b)| a - b).collect();
        errors.push(norm2(&diff));
        approx.set_col(k, &f);
    }
    Reconstruction { approx, errors }
}
