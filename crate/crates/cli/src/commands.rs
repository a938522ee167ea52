use std::fmt;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Result};
use kvcauchy::dmd::{dmd_amplitudes, schmid_dmd};
use kvcauchy::ensemble::{generate_ensemble, median, EnsembleKind};
use kvcauchy::gla::{consistency_experiment, gla_weights, weighted_gla_weights, ConsistencyConfig, GlaConfig};
use kvcauchy::krylov::{companion_from_snapshots, modal_decomposition, CompanionOptions, SnapshotMatrix};
use kvcauchy::linalg::{condition_2, norm2};
use kvcauchy::reconstruction::{
    freq_weights_case1, optimal_weights, reconstruct as rebuild, reflexive_weights, select_dominant,
    ReconstructionProblem, ReconstructionWeights,
};
use kvcauchy::vandermonde::{
    accurate_condition, apply_inverse_vandermonde, ldu_svd, regularized_apply_fft, vandermonde_ldu, InverseSolver,
};
use kvcauchy::{CMatrix, C64};

use crate::generate::GeneratorSpec;
use crate::io::{csv_bytes, encode_kvc1, fmt, read_snapshots, write_atomic};
use crate::report::{summary, Json};
use crate::{DataArgs, EnsembleArgs, GlaArgs, OutputArgs, ReconstructArgs, Solver, Weights};

/// Bad input or configuration, reported with exit code 2.
#[derive(Debug)]
pub struct InputError(pub String);

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InputError {}

fn input_err(msg: impl Into<String>) -> anyhow::Error {
    anyhow::Error::new(InputError(msg.into()))
}

fn as_input<T>(r: Result<T>) -> Result<T> {
    r.map_err(|e| input_err(format!("{e:#}")))
}

/// Core errors from invalid configurations count as input errors.
fn core<T>(r: kvcauchy::Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        kvcauchy::Error::InvalidConfig(_) => input_err(e.to_string()),
        other => anyhow!(other),
    })
}

fn out_dir(o: &OutputArgs) -> PathBuf {
    o.out.clone().unwrap_or_else(|| std::env::var_os("KVCAUCHY_OUT").map_or_else(|| PathBuf::from("kvcauchy-out"), PathBuf::from))
}

impl Solver {
    fn name(self) -> &'static str {
        match self {
            Solver::Dmd => "dmd",
            s => s.inverse().expect("not dmd").name(),
        }
    }

    fn inverse(self) -> Option<InverseSolver> {
        match self {
            Solver::Naive => Some(InverseSolver::Naive),
            Solver::RowScaled => Some(InverseSolver::RowScaled),
            Solver::ColScaled => Some(InverseSolver::ColumnScaled),
            Solver::Bp => Some(InverseSolver::BjorckPereyra),
            Solver::DftCauchy => Some(InverseSolver::DftCauchy),
            Solver::Dmd => None,
        }
    }
}

impl Weights {
    const ALL: [Weights; 5] = [Weights::Mp, Weights::Reflexive, Weights::ReflexiveFreq, Weights::Gla, Weights::WeightedGla];

    fn name(self) -> &'static str {
        match self {
            Weights::Mp => "mp",
            Weights::Reflexive => "reflexive",
            Weights::ReflexiveFreq => "reflexive-freq",
            Weights::Gla => "gla",
            Weights::WeightedGla => "weighted-gla",
        }
    }
}

struct Data {
    x: SnapshotMatrix,
    eigenvalues: Option<Vec<C64>>,
    source: String,
}

fn load(a: &DataArgs) -> Result<Data> {
    let (x, eigenvalues, source) = match (&a.input, &a.generator) {
        (Some(p), _) => (as_input(read_snapshots(p))?, None, p.display().to_string()),
        (None, Some(g)) => {
            let spec = as_input(GeneratorSpec::parse(g))?;
            let gen = as_input(spec.generate(a.output.seed))?;
            (gen.x, gen.eigenvalues, spec.canonical())
        }
        (None, None) => return Err(input_err("either --input or --generator is required")),
    };
    let x = SnapshotMatrix::new(x).map_err(|e| input_err(e.to_string()))?;
    Ok(Data { x, eigenvalues, source })
}

fn validate(a: &DataArgs) -> Result<()> {
    if !(a.eta >= 0.0 && a.eta.is_finite()) {
        return Err(input_err(format!("--eta must be finite and nonnegative, got {}", a.eta)));
    }
    if a.eta > 0.0 && a.solver != Solver::DftCauchy {
        return Err(input_err("--eta applies only to --solver dft-cauchy"));
    }
    if a.true_ritz && a.solver == Solver::Dmd {
        return Err(input_err("--true-ritz cannot be combined with --solver dmd"));
    }
    Ok(())
}

/// X_m ≈ raw·V(ritz) with amplitudes ‖raw(:, j)‖.
struct Modes {
    ritz: Vec<C64>,
    raw: CMatrix,
    amplitudes: Vec<f64>,
    residual_norm: Option<f64>,
    near_coincident: usize,
}

impl Modes {
    fn unit(&self) -> CMatrix {
        let mut u = self.raw.clone();
        for (j, &a) in self.amplitudes.iter().enumerate() {
            if a > 0.0 {
                for z in u.col_mut(j) {
                    *z /= a;
                }
            }
        }
        u
    }
}

fn compute_modes(a: &DataArgs, d: &Data) -> Result<Modes> {
    let x = &d.x;
    let opts = CompanionOptions::default();
    if a.solver == Solver::Dmd {
        let r = core(schmid_dmd(&x.x_m(), &x.y_m(), None))?;
        let amp = core(dmd_amplitudes(&r))?;
        let raw = r.z.scale_columns(&amp.values);
        let amplitudes = (0..r.rank).map(|j| norm2(raw.col(j))).collect();
        return Ok(Modes { ritz: r.lambdas, raw, amplitudes, residual_norm: None, near_coincident: 0 });
    }
    let solver = a.solver.inverse().expect("checked");
    if !a.true_ritz && a.eta == 0.0 {
        let md = core(modal_decomposition(x, solver, opts))?;
        return Ok(Modes {
            residual_norm: Some(norm2(&md.model.residual)),
            near_coincident: md.model.near_coincident.len(),
            ritz: md.ritz_values,
            raw: md.raw_modes,
            amplitudes: md.amplitudes,
        });
    }
    let (ritz, residual_norm, near) = if a.true_ritz {
        let lams = d.eigenvalues.clone().ok_or_else(|| input_err("this generator does not know its eigenvalues"))?;
        if lams.len() != x.m() {
            return Err(input_err(format!("{} eigenvalues for {} snapshots", lams.len(), x.m())));
        }
        (lams, None, 0)
    } else {
        let model = core(companion_from_snapshots(x, opts))?;
        (model.ritz_values, Some(norm2(&model.residual)), model.near_coincident.len())
    };
    let raw = if a.eta > 0.0 {
        let (_, ldu) = core(vandermonde_ldu(&ritz))?;
        regularized_apply_fft(&x.x_m(), &ldu_svd(&ldu), a.eta)
    } else {
        core(apply_inverse_vandermonde(&x.x_m(), &ritz, solver))?
    };
    let amplitudes = (0..raw.cols()).map(|j| norm2(raw.col(j))).collect();
    Ok(Modes { ritz, raw, amplitudes, residual_norm, near_coincident: near })
}

fn data_config(a: &DataArgs, d: &Data) -> Json {
    Json::obj()
        .with("source", d.source.as_str())
        .with("solver", a.solver.name())
        .with("eta", a.eta)
        .with("true_ritz", a.true_ritz)
        .with("seed", a.output.seed)
        .with("n", d.x.n())
        .with("m", d.x.m())
}

fn complex_rows(vals: &[C64]) -> Vec<Vec<String>> {
    vals.iter().enumerate().map(|(k, z)| vec![k.to_string(), fmt(z.re), fmt(z.im)]).collect()
}

fn write(dir: &Path, name: &str, bytes: &[u8]) -> Result<()> {
    write_atomic(&dir.join(name), bytes)
}

pub fn decompose(a: &DataArgs) -> Result<PathBuf> {
    validate(a)?;
    let d = load(a)?;
    let modes = compute_modes(a, &d)?;
    let xm = d.x.x_m();
    let v = CMatrix::vandermonde(&modes.ritz, xm.cols());
    let rec_err = modes.raw.matmul(&v).sub(&xm).norm_fro() / xm.norm_fro();
    let kappa = vandermonde_ldu(&modes.ritz).ok().map(|(_, ldu)| accurate_condition(&ldu));
    let dir = out_dir(&a.output);
    write(&dir, "ritz.csv", &csv_bytes(&["index", "re", "im"], &complex_rows(&modes.ritz))?)?;
    let amp_rows: Vec<Vec<String>> = modes.amplitudes.iter().enumerate().map(|(k, v)| vec![k.to_string(), fmt(*v)]).collect();
    write(&dir, "amplitudes.csv", &csv_bytes(&["index", "amplitude"], &amp_rows)?)?;
    write(&dir, "modes.kvc1", &encode_kvc1(&modes.unit()))?;
    let results = Json::obj()
        .with("modes", modes.ritz.len())
        .with("residual_norm", modes.residual_norm)
        .with("near_coincident_pairs", modes.near_coincident)
        .with("condition_accurate", kappa)
        .with("condition_plain", condition_2(&v))
        .with("reconstruction_error", rec_err);
    write(&dir, "summary.json", summary("decompose", data_config(a, &d), results).render().as_bytes())?;
    Ok(dir)
}

fn weights_for(w: Weights, p: &ReconstructionProblem) -> kvcauchy::Result<ReconstructionWeights> {
    match w {
        Weights::Mp => optimal_weights(p),
        Weights::Reflexive => Ok(reflexive_weights(p)),
        Weights::ReflexiveFreq => freq_weights_case1(p),
        Weights::Gla => gla_weights(&GlaConfig::new(p.clone())?),
        Weights::WeightedGla => weighted_gla_weights(&GlaConfig::new(p.clone())?),
    }
}

pub fn reconstruct(a: &ReconstructArgs) -> Result<PathBuf> {
    validate(&a.data)?;
    let d = load(&a.data)?;
    let m = d.x.m();
    let l = a.modes.unwrap_or(m);
    if l == 0 || l > m {
        return Err(input_err(format!("--modes must be in 1..={m}, got {l}")));
    }
    let modes = compute_modes(&a.data, &d)?;
    if l > modes.ritz.len() {
        return Err(input_err(format!("only {} modes are available, asked for {l}", modes.ritz.len())));
    }
    let chosen = core(select_dominant(&modes.amplitudes, l))?;
    let z = modes.unit().select_columns(&chosen);
    let lams: Vec<C64> = chosen.iter().map(|&j| modes.ritz[j]).collect();
    let xm = d.x.x_m();
    let problem = core(ReconstructionProblem::new(z.clone(), lams.clone(), xm.clone()))?;

    let methods: Vec<Weights> = a.weights.map_or_else(|| Weights::ALL.to_vec(), |w| vec![w]);
    let norms: Vec<f64> = (0..m).map(|i| norm2(xm.col(i))).collect();
    let mut err_rows = Vec::new();
    let mut sweep_rows = Vec::new();
    let mut per_method = Vec::new();
    for &w in &methods {
        match weights_for(w, &problem) {
            Ok(res) => {
                let rec = rebuild(&z, &lams, &res.alpha, &xm, 0..m);
                let rel: Vec<f64> =
                    rec.errors.iter().zip(&norms).map(|(e, n)| if *n > 0.0 { e / n } else { *e }).collect();
                for (i, e) in rel.iter().enumerate() {
                    err_rows.push(vec![w.name().to_string(), i.to_string(), fmt(*e)]);
                }
                let worst = rel.iter().cloned().fold(0.0, f64::max);
                sweep_rows.push(vec![w.name().to_string(), fmt(res.objective), fmt(worst), "ok".to_string()]);
                per_method.push((w, res.objective));
            }
            Err(e) if a.weights.is_none() => {
                sweep_rows.push(vec![w.name().to_string(), String::new(), String::new(), format!("skipped: {e}")]);
            }
            Err(e) => return Err(anyhow!(e)),
        }
    }
    let obj = |w: Weights| per_method.iter().find(|(k, _)| *k == w).map(|p| p.1);
    let le = |p: Option<f64>, q: Option<f64>| match (p, q) {
        (Some(p), Some(q)) => Json::Bool(p <= q * (1.0 + 1e-12)),
        _ => Json::Null,
    };

    let dir = out_dir(&a.data.output);
    let mode_rows: Vec<Vec<String>> = chosen
        .iter()
        .enumerate()
        .map(|(r, &j)| vec![r.to_string(), j.to_string(), fmt(modes.ritz[j].re), fmt(modes.ritz[j].im), fmt(modes.amplitudes[j])])
        .collect();
    write(&dir, "modes.csv", &csv_bytes(&["rank", "index", "lambda_re", "lambda_im", "amplitude"], &mode_rows)?)?;
    write(&dir, "errors.csv", &csv_bytes(&["method", "snapshot", "rel_error"], &err_rows)?)?;
    write(&dir, "sweep.csv", &csv_bytes(&["method", "objective", "max_rel_error", "status"], &sweep_rows)?)?;
    let objectives = Json::Obj(per_method.iter().map(|(w, o)| (w.name().to_string(), Json::Num(*o))).collect());
    let results = Json::obj()
        .with("selected", chosen.clone())
        .with("objective", objectives)
        .with("mp_le_reflexive", le(obj(Weights::Mp), obj(Weights::Reflexive)))
        .with("reflexive_le_gla", le(obj(Weights::Reflexive), obj(Weights::Gla)));
    let config = data_config(&a.data, &d)
        .with("modes", l)
        .with("weights", a.weights.map(|w| w.name()));
    write(&dir, "summary.json", summary("reconstruct", config, results).render().as_bytes())?;
    Ok(dir)
}

fn parse_complex(s: &str) -> Result<C64> {
    let (re, im) = s.split_once(':').unwrap_or((s, "0"));
    let p = |t: &str| t.trim().parse::<f64>().map_err(|_| input_err(format!("'{s}' is not a number or re:im pair")));
    Ok(C64::new(p(re)?, p(im)?))
}

fn parse_fixed<const K: usize>(v: &Option<Vec<String>>, flag: &str, default: [C64; K]) -> Result<[C64; K]> {
    let Some(v) = v else { return Ok(default) };
    if v.len() != K {
        return Err(input_err(format!("--{flag} needs {K} values, got {}", v.len())));
    }
    let mut out = default;
    for (o, s) in out.iter_mut().zip(v) {
        *o = parse_complex(s)?;
    }
    Ok(out)
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

pub fn gla_compare(a: &GlaArgs) -> Result<PathBuf> {
    let base = ConsistencyConfig::default();
    let cfg = ConsistencyConfig {
        lambdas: parse_fixed(&a.lambdas, "lambdas", base.lambdas)?,
        inner: parse_fixed(&a.inner, "inner", base.inner)?,
        beta: parse_fixed(&a.beta, "beta", base.beta)?,
        m_grid: a.m_grid.clone().unwrap_or(base.m_grid.clone()),
        ..base
    };
    let rep = core(consistency_experiment(&cfg))?;
    let rows: Vec<Vec<String>> = rep
        .rows
        .iter()
        .map(|r| {
            vec![r.m.to_string(), fmt(r.gla_error), fmt(r.star_error), fmt(r.gla_m_objective), fmt(r.star_m_objective)]
        })
        .collect();
    let dir = out_dir(&a.output);
    write(&dir, "gla.csv", &csv_bytes(&["m", "gla_error", "star_error", "gla_m_objective", "star_m_objective"], &rows)?)?;
    let cstr = |z: &C64| format!("{}:{}", fmt(z.re), fmt(z.im));
    let config = Json::obj()
        .with("lambdas", cfg.lambdas.iter().map(cstr).collect::<Vec<_>>())
        .with("inner", cfg.inner.iter().map(cstr).collect::<Vec<_>>())
        .with("beta", cfg.beta.iter().map(cstr).collect::<Vec<_>>())
        .with("m_grid", cfg.m_grid.clone());
    let verdict = |v: kvcauchy::gla::Verdict| Json::obj().with("consistent", yes_no(v.consistent)).with("optimal", yes_no(v.optimal));
    let last = rep.rows.last().expect("nonempty grid");
    let results = Json::obj()
        .with("gla", verdict(rep.gla))
        .with("reflexive", verdict(rep.star))
        .with("final_gla_error", last.gla_error)
        .with("final_reflexive_error", last.star_error);
    write(&dir, "summary.json", summary("gla-compare", config, results).render().as_bytes())?;
    Ok(dir)
}

pub fn ensemble(a: &EnsembleArgs) -> Result<PathBuf> {
    let kind: EnsembleKind = core(a.kind.parse())?;
    if a.count == 0 {
        return Err(input_err("--count must be positive"));
    }
    let trials = core(generate_ensemble(kind, a.n, a.count, a.output.seed))?;
    let cond: Vec<f64> = trials.iter().map(|t| t.condition).collect();
    let rows: Vec<Vec<String>> = cond.iter().enumerate().map(|(k, c)| vec![k.to_string(), fmt(*c)]).collect();
    let mut eig_rows = Vec::new();
    for (k, t) in trials.iter().enumerate() {
        for (j, z) in t.eigenvalues.iter().enumerate() {
            eig_rows.push(vec![k.to_string(), j.to_string(), fmt(z.re), fmt(z.im)]);
        }
    }
    let dir = out_dir(&a.output);
    write(&dir, "ensemble.csv", &csv_bytes(&["trial", "condition"], &rows)?)?;
    write(&dir, "eigenvalues.csv", &csv_bytes(&["trial", "index", "re", "im"], &eig_rows)?)?;
    let finite: Vec<f64> = cond.iter().cloned().filter(|c| c.is_finite()).collect();
    let results = Json::obj()
        .with("median_condition", median(&cond))
        .with("min_condition", cond.iter().cloned().fold(f64::INFINITY, f64::min))
        .with("max_finite_condition", finite.iter().cloned().fold(f64::NAN, f64::max))
        .with("infinite_count", cond.len() - finite.len());
    let config = Json::obj().with("kind", kind.name()).with("n", a.n).with("count", a.count).with("seed", a.output.seed);
    write(&dir, "summary.json", summary("ensemble", config, results).render().as_bytes())?;
    Ok(dir)
}
