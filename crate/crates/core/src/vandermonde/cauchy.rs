use std::f64::consts::PI;
use std::sync::Arc;

use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, C64, ONE, ZERO};

/// y_j = ω^{1−j} = exp(−2πi(j−1)/m), j = 1..m.
pub fn roots_of_unity(m: usize) -> Vec<C64> {
    (0..m)
        .map(|j| C64::from_polar(1.0, -2.0 * PI * j as f64 / m as f64))
        .collect()
}

/// Unitary DFT matrix F_{jk} = ω^{(j−1)(k−1)}/√m with ω = exp(2πi/m).
pub fn dft_matrix(m: usize) -> CMatrix {
    let s = 1.0 / (m as f64).sqrt();
    CMatrix::from_fn(m, m, |j, k| {
        let e = (j * k) % m;
        C64::from_polar(s, 2.0 * PI * e as f64 / m as f64)
    })
}

/// z^p by binary powering.
pub fn powu(z: C64, mut p: usize) -> C64 {
    let mut acc = ONE;
    let mut b = z;
    while p > 0 {
        if p & 1 == 1 {
            acc *= b;
        }
        b *= b;
        p >>= 1;
    }
    acc
}

/// Row-wise X·F. With an unnormalized inverse FFT this is
/// X·F = invFFT(X)/√m, i.e. √m times the 1/m-normalized inverse transform.
pub fn apply_dft(x: &CMatrix) -> CMatrix {
    let (n, m) = x.shape();
    let fft: Arc<dyn Fft<f64>> = FftPlanner::new().plan_fft_inverse(m);
    let s = 1.0 / (m as f64).sqrt();
    let mut out = CMatrix::zeros(n, m);
    let mut buf = vec![ZERO; m];
    for i in 0..n {
        for (j, b) in buf.iter_mut().enumerate() {
            *b = x[(i, j)];
        }
        fft.process(&mut buf);
        for (j, &b) in buf.iter().enumerate() {
            out[(i, j)] = b * s;
        }
    }
    out
}

/// Row-wise X·F* (the forward transform, inverse of `apply_dft`).
pub fn apply_dft_adjoint(x: &CMatrix) -> CMatrix {
    let (n, m) = x.shape();
    let fft: Arc<dyn Fft<f64>> = FftPlanner::new().plan_fft_forward(m);
    let s = 1.0 / (m as f64).sqrt();
    let mut out = CMatrix::zeros(n, m);
    let mut buf = vec![ZERO; m];
    for i in 0..n {
        for (j, b) in buf.iter_mut().enumerate() {
            *b = x[(i, j)];
        }
        fft.process(&mut buf);
        for (j, &b) in buf.iter().enumerate() {
            out[(i, j)] = b * s;
        }
    }
    out
}

/// Implicit D₁·C·D₂ with C_ij = 1/(x_i − y_j), except rows flagged as
/// coincident, which carry a single entry in the coincident column.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneralizedCauchy {
    pub x_nodes: Vec<C64>,
    pub y_nodes: Vec<C64>,
    pub d1: Vec<C64>,
    pub d2: Vec<C64>,
    /// For row i, `Some(j)` when x_i = y_j within tolerance.
    pub coincidence: Vec<Option<usize>>,
    /// Entry of C in the coincident position of each coincident row.
    pub coincident_value: Vec<C64>,
}

impl GeneralizedCauchy {
    /// Explicit Cauchy-like matrix d1_i·d2_j/(x_i − y_j). No x-node may equal
    /// a y-node.
    pub fn from_nodes(x: Vec<C64>, y: Vec<C64>, d1: Vec<C64>, d2: Vec<C64>) -> Result<Self> {
        if x.is_empty() || y.is_empty() {
            return Err(Error::EmptyMatrix { rows: x.len(), cols: y.len() });
        }
        if d1.len() != x.len() || d2.len() != y.len() {
            return Err(Error::Dimension("scaling lengths must match node counts".into()));
        }
        for (i, xi) in x.iter().enumerate() {
            if let Some(j) = y.iter().position(|yj| yj == xi) {
                return Err(Error::InvalidConfig(format!(
                    "x-node {i} equals y-node {j}; explicit Cauchy nodes must be disjoint"
                )));
            }
        }
        let l = x.len();
        Ok(Self { x_nodes: x, y_nodes: y, d1, d2, coincidence: vec![None; l], coincident_value: vec![ZERO; l] })
    }

    /// Plain Cauchy matrix 1/(x_i − y_j).
    pub fn plain(x: Vec<C64>, y: Vec<C64>) -> Result<Self> {
        let d1 = vec![ONE; x.len()];
        let d2 = vec![ONE; y.len()];
        Self::from_nodes(x, y, d1, d2)
    }

    pub fn rows(&self) -> usize {
        self.x_nodes.len()
    }

    pub fn cols(&self) -> usize {
        self.y_nodes.len()
    }

    /// Entry of C.
    pub fn c_entry(&self, i: usize, j: usize) -> C64 {
        match self.coincidence[i] {
            Some(jc) if jc == j => self.coincident_value[i],
            Some(_) => ZERO,
            None => ONE / (self.x_nodes[i] - self.y_nodes[j]),
        }
    }

    /// Entry of D₁·C·D₂.
    pub fn entry(&self, i: usize, j: usize) -> C64 {
        match self.coincidence[i] {
            Some(jc) if jc == j => self.d1[i] * self.coincident_value[i] * self.d2[j],
            Some(_) => ZERO,
            None => self.d1[i] * self.d2[j] / (self.x_nodes[i] - self.y_nodes[j]),
        }
    }

    pub fn c_matrix(&self) -> CMatrix {
        CMatrix::from_fn(self.rows(), self.cols(), |i, j| self.c_entry(i, j))
    }

    /// D₁·C·D₂ assembled entrywise.
    pub fn assemble(&self) -> CMatrix {
        CMatrix::from_fn(self.rows(), self.cols(), |i, j| self.entry(i, j))
    }

    /// Same matrix with the row scaling of non-coincident rows removed.
    /// Returns the reduced matrix and the removed factors, so that
    /// self = diag(removed)·reduced.
    pub fn without_row_scaling(&self) -> (Self, Vec<C64>) {
        let mut g = self.clone();
        let mut removed = vec![ONE; self.rows()];
        for i in 0..self.rows() {
            if self.coincidence[i].is_none() {
                removed[i] = self.d1[i];
                g.d1[i] = ONE;
            }
        }
        (g, removed)
    }
}

/// Generalized Cauchy form of V_{ℓ,m}(Λ)·F: D₁ = diag((λ_i^m − 1)/√m),
/// C_ij = 1/(λ_i − y_j), D₂ = diag(y_j), y_j = ω^{1−j}. A node within
/// √m·ε of some y_j makes its row a single entry
/// (1/√m)·∏_{k≠j}(λ_i − y_k)·y_j.
pub fn dft_transform(lams: &[C64], m: usize) -> Result<GeneralizedCauchy> {
    if lams.is_empty() || m == 0 {
        return Err(Error::EmptyMatrix { rows: lams.len(), cols: m });
    }
    let y = roots_of_unity(m);
    let s = 1.0 / (m as f64).sqrt();
    let tol = (m as f64).sqrt() * f64::EPSILON;
    let l = lams.len();
    let mut d1 = Vec::with_capacity(l);
    let mut coincidence = vec![None; l];
    let mut coincident_value = vec![ZERO; l];
    for (i, &lam) in lams.iter().enumerate() {
        match y.iter().position(|&yj| (lam - yj).norm() <= tol) {
            Some(j) => {
                let p = y
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| k != j)
                    .fold(ONE, |acc, (_, &yk)| acc * (lam - yk));
                coincidence[i] = Some(j);
                coincident_value[i] = p;
                d1.push(C64::new(s, 0.0));
            }
            None => d1.push((powu(lam, m) - ONE) * s),
        }
    }
    Ok(GeneralizedCauchy {
        x_nodes: lams.to_vec(),
        d2: y.clone(),
        y_nodes: y,
        d1,
        coincidence,
        coincident_value,
    })
}

/// Error unless all entries are pairwise distinct.
pub fn check_distinct(nodes: &[C64]) -> Result<()> {
    for i in 0..nodes.len() {
        for j in i + 1..nodes.len() {
            if nodes[i] == nodes[j] {
                return Err(Error::CoincidentNodes { i, j });
            }
        }
    }
    Ok(())
}
