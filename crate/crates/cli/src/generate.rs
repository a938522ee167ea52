//! Seeded synthetic snapshot sequences, selected by a spec string
//! `name[:key=value,...]`.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use anyhow::{bail, Context, Result};
use kvcauchy::{CMatrix, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

#[derive(Clone, Debug)]
pub struct Generated {
    /// n×(m+1) snapshots.
    pub x: CMatrix,
    /// Eigenvalues of the generating dynamics, when known.
    pub eigenvalues: Option<Vec<C64>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorSpec {
    pub name: String,
    params: BTreeMap<String, f64>,
}

pub const NAMES: [&str; 5] = ["cyclic", "krylov", "modal", "graded", "disc"];

impl GeneratorSpec {
    pub fn parse(s: &str) -> Result<Self> {
        let (name, rest) = s.split_once(':').unwrap_or((s, ""));
        if !NAMES.contains(&name) {
            bail!("unknown generator '{name}' (expected one of {})", NAMES.join(", "));
        }
        let mut params = BTreeMap::new();
        for kv in rest.split(',').filter(|t| !t.is_empty()) {
            let (k, v) = kv.split_once('=').with_context(|| format!("generator parameter '{kv}' is not key=value"))?;
            let v: f64 = v.parse().with_context(|| format!("generator parameter {k} = '{v}' is not a number"))?;
            params.insert(k.to_string(), v);
        }
        let spec = Self { name: name.to_string(), params };
        spec.check_keys()?;
        Ok(spec)
    }

    fn allowed(&self) -> &'static [&'static str] {
        match self.name.as_str() {
            "cyclic" => &["m"],
            "krylov" => &["n", "m"],
            "modal" => &["n", "m", "lo", "hi", "decay", "noise"],
            "graded" => &["n", "m", "lo", "hi", "noise"],
            _ => &["n", "m", "radius", "center", "noise"],
        }
    }

    fn check_keys(&self) -> Result<()> {
        for k in self.params.keys() {
            if !self.allowed().contains(&k.as_str()) {
                bail!("generator '{}' has no parameter '{k}' (allowed: {})", self.name, self.allowed().join(", "));
            }
        }
        Ok(())
    }

    fn get(&self, key: &str, default: f64) -> f64 {
        self.params.get(key).copied().unwrap_or(default)
    }

    fn count(&self, key: &str, default: usize, min: usize) -> Result<usize> {
        let v = self.get(key, default as f64);
        if v.fract() != 0.0 || v < min as f64 {
            bail!("generator parameter {key} must be an integer >= {min}, got {v}");
        }
        Ok(v as usize)
    }

    /// Canonical text form, used to echo the configuration.
    pub fn canonical(&self) -> String {
        let kv: Vec<String> = self.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        if kv.is_empty() {
            self.name.clone()
        } else {
            format!("{}:{}", self.name, kv.join(","))
        }
    }

    pub fn generate(&self, seed: u64) -> Result<Generated> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        match self.name.as_str() {
            "cyclic" => {
                let m = self.count("m", 8, 1)?;
                let x = CMatrix::from_fn(m, m + 1, |i, j| if i == j % m { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) });
                let roots = (0..m).map(|k| C64::from_polar(1.0, TAU * k as f64 / m as f64)).collect();
                Ok(Generated { x, eigenvalues: Some(roots) })
            }
            "krylov" => {
                let n = self.count("n", 10, 1)?;
                let m = self.count("m", 6, 1)?;
                let a = normal_matrix(&mut rng, n, n).scale(C64::new(1.0 / (2.0 * n as f64).sqrt(), 0.0));
                let mut cols = vec![(0..n).map(|_| cnormal(&mut rng)).collect::<Vec<_>>()];
                for k in 0..m {
                    let next = a.mul_vec(&cols[k]);
                    cols.push(next);
                }
                Ok(Generated { x: CMatrix::from_columns(&cols)?, eigenvalues: None })
            }
            "modal" => {
                let (n, m) = (self.count("n", 12, 1)?, self.count("m", 8, 1)?);
                let (lo, hi) = (self.get("lo", 0.8), self.get("hi", 1.0));
                let lams: Vec<C64> =
                    (0..m).map(|_| C64::from_polar(lo + (hi - lo) * rng.random::<f64>(), TAU * rng.random::<f64>())).collect();
                let decay = self.get("decay", 1.0);
                let scale: Vec<C64> = (0..m).map(|j| C64::new(decay.powi(j as i32), 0.0)).collect();
                let z = normal_matrix(&mut rng, n, m).scale_columns(&scale);
                Ok(self.modal(&mut rng, z, lams))
            }
            "graded" => {
                let (n, m) = (self.count("n", 30, 1)?, self.count("m", 20, 1)?);
                let (lo, hi) = (self.get("lo", -2.0), self.get("hi", 2.0));
                let lams: Vec<C64> = (0..m)
                    .map(|_| C64::from_polar(10f64.powf(lo + (hi - lo) * rng.random::<f64>()), TAU * rng.random::<f64>()))
                    .collect();
                let z = normal_matrix(&mut rng, n, m);
                Ok(self.modal(&mut rng, z, lams))
            }
            _ => {
                let (n, m) = (self.count("n", 4, 1)?, self.count("m", 20, 1)?);
                let (radius, center) = (self.get("radius", 1e-2), self.get("center", 0.5));
                let lams: Vec<C64> = (0..m)
                    .map(|_| C64::from_polar(radius * rng.random::<f64>(), TAU * rng.random::<f64>()) + C64::new(center, 0.0))
                    .collect();
                let z = normal_matrix(&mut rng, n, m);
                Ok(self.modal(&mut rng, z, lams))
            }
        }
    }

    /// X = Z·V(Λ, m+1) plus relative Gaussian noise.
    fn modal(&self, rng: &mut ChaCha8Rng, z: CMatrix, lams: Vec<C64>) -> Generated {
        let x0 = z.matmul(&CMatrix::vandermonde(&lams, lams.len() + 1));
        let noise = self.get("noise", 0.0);
        let x = if noise > 0.0 {
            let s = noise * x0.norm_fro() / (x0.data().len() as f64).sqrt();
            CMatrix::from_fn(x0.rows(), x0.cols(), |i, j| x0[(i, j)] + cnormal(rng) * s)
        } else {
            x0
        };
        Generated { x, eigenvalues: Some(lams) }
    }
}

fn cnormal(rng: &mut ChaCha8Rng) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

fn normal_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| cnormal(rng))
}
