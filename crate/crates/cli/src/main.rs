mod commands;
mod generate;
mod io;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "kvcauchy", version, about = "Companion-matrix DMD with accurate Vandermonde inversion")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Ritz values, modes and amplitudes of a snapshot sequence.
    Decompose(DataArgs),
    /// Reconstruct the snapshots from the dominant modes.
    Reconstruct(ReconstructArgs),
    /// GLA versus reflexive weights on the three-mode consistency setup.
    GlaCompare(GlaArgs),
    /// Vandermonde conditioning of random-matrix eigenvalue ensembles.
    Ensemble(EnsembleArgs),
}

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    /// Output directory; defaults to $KVCAUCHY_OUT or ./kvcauchy-out.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Debug, Clone)]
pub struct DataArgs {
    /// Snapshot file (CSV or KVC1), one snapshot per column.
    #[arg(long, conflicts_with = "generator", required_unless_present = "generator")]
    pub input: Option<PathBuf>,
    /// Synthetic data, e.g. `graded:n=30,m=20` (cyclic, krylov, modal, graded, disc).
    #[arg(long)]
    pub generator: Option<String>,
    #[arg(long, value_enum, default_value_t = Solver::DftCauchy)]
    pub solver: Solver,
    /// Tikhonov parameter for the dft-cauchy solve through the accurate SVD.
    #[arg(long, default_value_t = 0.0)]
    pub eta: f64,
    /// Use the generator's eigenvalues instead of the computed Ritz values.
    #[arg(long, requires = "generator")]
    pub true_ritz: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Clone)]
pub struct ReconstructArgs {
    #[command(flatten)]
    pub data: DataArgs,
    /// Number of dominant modes ℓ; defaults to all.
    #[arg(long)]
    pub modes: Option<usize>,
    /// Weight method; all methods are compared when omitted.
    #[arg(long, value_enum)]
    pub weights: Option<Weights>,
}

#[derive(Args, Debug, Clone)]
pub struct GlaArgs {
    /// λ₁,λ₂,λ₃ as `re` or `re:im`.
    #[arg(long, value_delimiter = ',')]
    pub lambdas: Option<Vec<String>>,
    /// ⟨z₃,z₁⟩,⟨z₃,z₂⟩ as `re` or `re:im`.
    #[arg(long, value_delimiter = ',')]
    pub inner: Option<Vec<String>>,
    /// β₁,β₂,β₃ as `re` or `re:im`.
    #[arg(long, value_delimiter = ',')]
    pub beta: Option<Vec<String>>,
    #[arg(long, value_delimiter = ',')]
    pub m_grid: Option<Vec<usize>>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Clone)]
pub struct EnsembleArgs {
    #[arg(long, default_value = "rand")]
    pub kind: String,
    #[arg(long, default_value_t = 20)]
    pub n: usize,
    #[arg(long, default_value_t = 100)]
    pub count: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Solver {
    Naive,
    RowScaled,
    ColScaled,
    Bp,
    DftCauchy,
    Dmd,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Weights {
    Mp,
    Reflexive,
    ReflexiveFreq,
    Gla,
    WeightedGla,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.command {
        Command::Decompose(a) => commands::decompose(&a),
        Command::Reconstruct(a) => commands::reconstruct(&a),
        Command::GlaCompare(a) => commands::gla_compare(&a),
        Command::Ensemble(a) => commands::ensemble(&a),
    };
    match res {
        Ok(dir) => {
            println!("wrote {}", dir.display());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<commands::InputError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
