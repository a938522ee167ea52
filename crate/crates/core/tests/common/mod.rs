//! Independent oracles and fixtures shared by the integration tests.
#![allow(dead_code)]

pub mod dd;
pub mod exact;

use kvcauchy::{CMatrix, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn cnormal(rng: &mut ChaCha8Rng) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| cnormal(rng))
}

pub fn rel_err(a: &CMatrix, b: &CMatrix) -> f64 {
    a.sub(b).norm_fro() / b.norm_fro()
}

pub fn vec_err(a: &[C64], b: &[C64]) -> f64 {
    a.iter().zip(b).fold(0.0f64, |m, (x, y)| m.max((x - y).norm()))
}

/// Nodes with modulus uniform in [lo, hi] and uniform phase.
pub fn annulus(rng: &mut ChaCha8Rng, m: usize, lo: f64, hi: f64) -> Vec<C64> {
    (0..m)
        .map(|_| C64::from_polar(lo + (hi - lo) * rng.random::<f64>(), std::f64::consts::TAU * rng.random::<f64>()))
        .collect()
}

/// Moduli 10^U(−2, 2) with uniform phases; κ₂(V) for m = 20 is ~1e40.
pub fn graded_nodes(rng: &mut ChaCha8Rng, m: usize) -> Vec<C64> {
    (0..m)
        .map(|_| {
            C64::from_polar(10f64.powf(4.0 * rng.random::<f64>() - 2.0), std::f64::consts::TAU * rng.random::<f64>())
        })
        .collect()
}

/// X = Z·V(Λ) plus relative noise of size `noise`.
pub fn noisy_snapshots(rng: &mut ChaCha8Rng, n: usize, lams: &[C64], noise: f64) -> CMatrix {
    let m = lams.len();
    let z = random_matrix(rng, n, m);
    let x0 = z.matmul(&CMatrix::vandermonde(lams, m));
    let scale = noise * x0.norm_fro() / ((n * m) as f64).sqrt();
    CMatrix::from_fn(n, m, |i, j| x0[(i, j)] + cnormal(rng) * scale)
}

/// Modified Gram–Schmidt QR with a second orthogonalization pass.
pub fn mgs_qr(a: &CMatrix) -> (CMatrix, CMatrix) {
    let (n, m) = a.shape();
    let mut q = a.clone();
    let mut r = CMatrix::zeros(m, m);
    for j in 0..m {
        for _pass in 0..2 {
            for k in 0..j {
                let h: C64 = (0..n).map(|i| q[(i, k)].conj() * q[(i, j)]).sum();
                r[(k, j)] += h;
                for i in 0..n {
                    let v = q[(i, k)];
                    q[(i, j)] -= h * v;
                }
            }
        }
        let nrm = q.col_norm(j);
        r[(j, j)] = C64::new(nrm, 0.0);
        for v in q.col_mut(j) {
            *v /= nrm;
        }
    }
    (q, r)
}

/// Durand–Kerner iteration for the roots of z^m − Σ c_k z^{k−1}, the
/// characteristic polynomial of the companion matrix with last column c.
pub fn durand_kerner(c: &[C64]) -> Vec<C64> {
    let m = c.len();
    let p = |z: C64| {
        let mut acc = C64::new(1.0, 0.0);
        for k in (0..m).rev() {
            acc = acc * z - c[k];
        }
        acc
    };
    let scale = 1.0 + c.iter().fold(0.0f64, |a, v| a.max(v.norm()));
    let mut z: Vec<C64> = (0..m).map(|k| C64::new(0.4, 0.9).powu(k as u32) * scale).collect();
    for _ in 0..2000 {
        let mut delta = 0.0f64;
        for i in 0..m {
            let mut den = C64::new(1.0, 0.0);
            for j in 0..m {
                if j != i {
                    den *= z[i] - z[j];
                }
            }
            let step = p(z[i]) / den;
            z[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-15 * scale {
            break;
        }
    }
    z
}

/// Coefficient vector of Π_k (z − r_k) in increasing degree.
pub fn poly_from_roots(roots: &[C64]) -> Vec<C64> {
    let mut p = vec![C64::new(1.0, 0.0)];
    for &r in roots {
        let mut q = vec![C64::new(0.0, 0.0); p.len() + 1];
        for (k, &a) in p.iter().enumerate() {
            q[k + 1] += a;
            q[k] -= r * a;
        }
        p = q;
    }
    p
}

/// The 20 singular values of the 20×20 Hilbert matrix (tests/oracles).
pub const HILBERT20_SIGMA: [f64; 20] = [
    1.907134720407253103,
    0.4870384065720488678,
    0.075595821305440958439,
    0.0089611286148564804426,
    0.00086767110917149801722,
    0.000070334314731935324533,
    4.8305100488023714518e-6,
    2.8276520552478540887e-7,
    1.4139547582533804815e-8,
    6.0360953293918637191e-10,
    2.1928907569892015253e-11,
    6.7408082331639843639e-13,
    1.737906708298964433e-14,
    3.7109770253440721628e-16,
    6.4467646276571415379e-18,
    8.8800759473682196341e-20,
    9.3311941014009525764e-22,
    7.0264420417909102336e-24,
    3.3763048272628992247e-26,
    7.7773773968564126443e-29,
];

/// Nodes of the clustered 16×16 Vandermonde fixture.
pub fn cluster16() -> Vec<C64> {
    (0..16)
        .map(|k| C64::new(0.5 + (k as f64 - 8.0) / 64.0, ((3 * k) % 7) as f64 / 128.0 - 3.0 / 128.0))
        .collect()
}

pub const CLUSTER16_SIGMA: [f64; 16] = [
    4.6106401736914324794,
    0.4514335562050788877,
    0.041642434259889120568,
    0.0039727143325448658204,
    0.00038251910242180952255,
    0.000034450530161483969817,
    2.6485308496484595196e-6,
    1.7286212102596128486e-7,
    8.9560147344185739671e-9,
    3.840304697950832561e-10,
    1.249480135389311986e-11,
    3.3684647451756079163e-13,
    6.6417863146017395164e-15,
    9.6966822989740912138e-17,
    8.9553274660616905395e-19,
    3.5524569195746415761e-21,
];
