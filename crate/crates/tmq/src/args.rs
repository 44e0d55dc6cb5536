use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Debug, Parser)]
#[command(name = "tmq", version, about = "Spectral scans of the Thue-Morse quasicrystal")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Default, Clone, Args)]
pub struct GlobalArgs {
    /// Long tile length, as "num/den" or an integer.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub a: Option<String>,

    /// Short tile length, as "num/den" or an integer.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub b: Option<String>,

    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    #[arg(long, global = true)]
    pub limit: Option<u64>,

    /// Exponent `h` of the largest size `2^h` (command dependent).
    #[arg(long, global = true)]
    pub horizon: Option<u32>,

    /// Comma list of values or "start:step:count".
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub grid: Option<String>,

    /// Worker threads; all cores when absent.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,

    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// JSON file with default values for any of the flags.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WeightKind {
    /// `w ≡ 1`.
    Unit,
    /// `w ≡ 0`.
    Zero,
    /// 1 on perfect squares, 0 elsewhere.
    Squares,
    /// 1 except -1 on perfect squares.
    FlipSquares,
    /// Seeded uniform weights in the unit disc.
    Random,
    /// The `random` weights with the sign flipped on perfect squares.
    RandomFlipSquares,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rows (n, s(n), η_n, f(n)) for 0 <= n < limit.
    Sequence,
    /// Approximant densities ν and exponents α_l over a grid of q = k(a+b)/(4π).
    Diffract(DiffractArgs),
    /// Class, class number, fundamental unit, β and regime of the odd primes up to --limit.
    ClassifyPrimes,
    /// Spectral verdicts for a grid of rational q.
    Spectrum,
    /// Samples of the fractal profile ψ_{p,j}.
    Profile(ProfileArgs),
    /// Rarefied sums S_{p,j}(n) for every residue j.
    Rarefy(RarefyArgs),
    /// Marcinkiewicz norms and intensity gap of two weight sequences.
    Marcinkiewicz(MarcinkiewiczArgs),
}

#[derive(Debug, Clone, Args)]
pub struct DiffractArgs {
    /// Comma list of sizes l; defaults to 2^1, ..., 2^horizon.
    #[arg(long)]
    pub sizes: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct ProfileArgs {
    #[arg(long)]
    pub p: Option<u64>,

    #[arg(long)]
    pub j: Option<u64>,

    /// Samples per period.
    #[arg(long)]
    pub resolution: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct RarefyArgs {
    #[arg(long)]
    pub p: Option<u64>,
}

#[derive(Debug, Clone, Args)]
pub struct MarcinkiewiczArgs {
    #[arg(long, value_enum)]
    pub weights: Option<WeightKind>,

    #[arg(long, value_enum)]
    pub compare: Option<WeightKind>,
}
