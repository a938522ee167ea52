//! Seeded test ensembles of eigenvalue sets and the conditioning of their
//! Vandermonde matrices.

use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::{eigenvalues, CMatrix, C64};
use crate::vandermonde::{accurate_condition, vandermonde_ldu};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EnsembleKind {
    /// Entries uniform on [0, 1).
    Rand,
    /// Standard normal entries.
    Randn,
    /// expm(−inv(A)) with A uniform; its eigenvalues are exp(−1/μ) for the
    /// eigenvalues μ of A.
    ExpmInvRand,
}

impl EnsembleKind {
    pub fn name(self) -> &'static str {
        match self {
            EnsembleKind::Rand => "rand",
            EnsembleKind::Randn => "randn",
            EnsembleKind::ExpmInvRand => "expm-inv-rand",
        }
    }
}

impl FromStr for EnsembleKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rand" => Ok(EnsembleKind::Rand),
            "randn" => Ok(EnsembleKind::Randn),
            "expm-inv-rand" => Ok(EnsembleKind::ExpmInvRand),
            _ => Err(Error::InvalidConfig(format!("unknown ensemble kind '{s}'"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct EnsembleTrial {
    /// Eigenvalues scaled to unit spectral radius.
    pub eigenvalues: Vec<C64>,
    /// κ₂(V_n(λ)) from the accurate SVD; infinite when the eigenvalues are
    /// numerically coincident (a zero pivot in the Cauchy factorization).
    pub condition: f64,
}

/// Generator for trial `trial` of a run seeded with `seed`; trials use
/// separate ChaCha streams so they can be produced in any order.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Scaled eigenvalues of one random matrix of the given recipe.
pub fn sample_eigenvalues(kind: EnsembleKind, n: usize, rng: &mut ChaCha8Rng) -> Result<Vec<C64>> {
    let a = CMatrix::from_fn(n, n, |_, _| {
        let v = match kind {
            EnsembleKind::Rand | EnsembleKind::ExpmInvRand => rng.random::<f64>(),
            EnsembleKind::Randn => rng.sample::<f64, _>(StandardNormal),
        };
        C64::new(v, 0.0)
    });
    let mut lams = eigenvalues(&a)?;
    if kind == EnsembleKind::ExpmInvRand {
        for l in &mut lams {
            *l = (-l.inv()).exp();
        }
    }
    let rho = lams.iter().fold(0.0f64, |m, l| m.max(l.norm()));
    if rho == 0.0 {
        return Err(Error::InvalidConfig("zero spectral radius".into()));
    }
    Ok(lams.iter().map(|l| l / rho).collect())
}

pub fn generate_ensemble(kind: EnsembleKind, n: usize, count: usize, seed: u64) -> Result<Vec<EnsembleTrial>> {
    if n < 2 {
        return Err(Error::InvalidConfig("ensemble matrices need n >= 2".into()));
    }
    (0..count)
        .map(|t| {
            let mut rng = trial_rng(seed, t as u64);
            let eigenvalues = sample_eigenvalues(kind, n, &mut rng)?;
            let condition = match vandermonde_ldu(&eigenvalues) {
                Ok((_, ldu)) => accurate_condition(&ldu),
                Err(Error::Singular { .. } | Error::CoincidentNodes { .. }) => f64::INFINITY,
                Err(e) => return Err(e),
            };
            Ok(EnsembleTrial { condition, eigenvalues })
        })
        .collect()
}

/// Median of a nonempty sample.
pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let k = v.len();
    if k % 2 == 1 {
        v[k / 2]
    } else {
        0.5 * (v[k / 2 - 1] + v[k / 2])
    }
}
