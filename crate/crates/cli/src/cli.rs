use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(
    name = "gl-decode",
    version,
    about = "Goldreich-Levin list decoding experiments"
)]
pub struct Cli {
    /// Master seed for every random choice.
    #[arg(long, global = true, env = "GL_DECODE_SEED", default_value_t = 0)]
    pub seed: u64,

    /// Worker threads for trial-parallel commands (0 = one per core).
    #[arg(long, global = true, default_value_t = 0)]
    pub jobs: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run inversion trials against a planted guesser.
    Invert(InvertArgs),
    /// Estimate a guesser's success rate on the padded function.
    Rate(RateArgs),
    /// Walsh-Hadamard transform of an integer-per-line file.
    Fwht(FwhtArgs),
    /// Extract bits from a junk source with a Toeplitz hash.
    Extract(ExtractArgs),
    /// Iterate a keyed bijection and emit predicate bits.
    Prg(PrgArgs),
    /// Run the frequency and runs tests on a bit file.
    TestBits(TestBitsArgs),
    /// Exact pairwise-independence check of the query points.
    PairwiseCheck(PairwiseArgs),
}

#[derive(Debug, Args)]
pub struct InvertArgs {
    #[arg(long)]
    pub instance: PathBuf,
    #[arg(long, default_value_t = 100)]
    pub trials: u64,
    /// Fixed spectrum dimension.
    #[arg(
        long,
        conflicts_with = "randomized_k",
        required_unless_present = "randomized_k"
    )]
    pub k: Option<usize>,
    /// Draw the dimension per trial.
    #[arg(long)]
    pub randomized_k: bool,
    #[arg(long, default_value_t = gl_decode_core::inverter::DEFAULT_K_MAX)]
    pub k_max: usize,
    /// Keep only candidates that evaluate to the target.
    #[arg(long)]
    pub verify: bool,
    /// Include per-trial records in the report.
    #[arg(long)]
    pub transcripts: bool,
    /// Write one CSV row per trial.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Exit 3 if the success rate is below this value.
    #[arg(long)]
    pub assert_bound: Option<f64>,
    /// Samples for the reference rate estimate (0 skips it).
    #[arg(long, default_value_t = 10_000)]
    pub reference_samples: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RateArgs {
    #[arg(long)]
    pub instance: PathBuf,
    #[arg(long, default_value_t = 100_000)]
    pub samples: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FwhtArgs {
    pub input: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExtractArgs {
    #[arg(long)]
    pub source: PathBuf,
    /// Output bits per sample.
    #[arg(long)]
    pub i: usize,
    /// Number of source samples.
    #[arg(long)]
    pub count: usize,
    /// Toeplitz seed as a bit string of length n + i - 1.
    #[arg(long)]
    pub toeplitz: Option<String>,
    #[arg(long)]
    pub binary: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Write a JSON report here.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PrgArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub bits: usize,
    /// Emit `i` Toeplitz bits per step instead of one inner-product bit.
    #[arg(long)]
    pub i: Option<usize>,
    /// Bijection key; defaults to the master seed.
    #[arg(long)]
    pub key: Option<u64>,
    #[arg(long)]
    pub binary: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TestBitsArgs {
    pub file: PathBuf,
    /// Read packed bytes instead of '0'/'1' text.
    #[arg(long)]
    pub binary: bool,
    /// Exit 3 unless both tests pass.
    #[arg(long)]
    pub assert_pass: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PairwiseArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}
