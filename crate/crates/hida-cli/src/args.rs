//! Command-line surface: subcommands, flags, defaults, and inline help.
//!
//! Conventions shared by every subcommand:
//!
//! - Randomized commands take a mandatory `--seed`; nothing is ever seeded
//!   from the clock, so a command line pins its output bytes exactly.
//! - `--out` redirects the primary JSON (or text) document to a file;
//!   without it the document goes to standard output. Commands that also
//!   produce a sample table accept `--csv` for it.
//! - `--threads` works on every subcommand and only changes how much
//!   parallelism is used, never the result.
//! - Size guards: `--N` accepts at most 12 coordinates and degree flags at
//!   most 20, matching the engine's exact-arithmetic envelope.

use clap::{ArgGroup, Parser, Subcommand};
use std::path::PathBuf;

/// Desk-scale white-noise calculus: Wick algebra probes, transforms, and
/// stochastic demos on truncated chaos expansions.
#[derive(Debug, Parser)]
#[command(name = "hida", version, max_term_width = 80)]
pub struct Cli {
    /// Worker threads for parallel sections (default: one per CPU core).
    /// Any setting produces identical output bytes.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Hunt for Wick-product zero divisors over seeded random pairs.
    ///
    /// Each trial draws two nonzero expansions, multiplies them without
    /// truncation, and checks that the product is nonzero and that its
    /// lowest homogeneous part factors exactly. Exits nonzero if any trial
    /// fails (none is expected: the algebra is an integral domain).
    ProbeZeroDivisor(ProbeArgs),

    /// Solve Wick geometric Brownian motion and report its moments.
    SolveGbm(GbmArgs),

    /// Fit the quadratic-exponential growth bound of a functional along a
    /// complex ray and report a bounded / super-quadratic verdict.
    CheckGrowth(GrowthArgs),

    /// Verify canonical commutation relations, the quantum decomposition,
    /// and creation/annihilation duality on basis terms and random input.
    CcrCheck(CcrArgs),

    /// Evaluate the S-transform of a stored expansion at given points.
    SEval(EvalArgs),

    /// Evaluate the T-transform of a stored expansion at given points.
    TEval(EvalArgs),

    /// Print the probabilists' Hermite polynomial He_n in symbolic form.
    Hermite(HermiteArgs),

    /// Integrate seeded adapted integrands on a time grid and print the
    /// discrete Ito-isometry table.
    HsDemo(HsArgs),

    /// Validate a serialized expansion and re-emit it in canonical form.
    Convert(ConvertArgs),
}

#[derive(Debug, clap::Args)]
pub struct ProbeArgs {
    /// Maximum coordinate dimension a trial may draw (1..=12).
    #[arg(long = "N")]
    pub n: usize,

    /// Maximum degree cap an operand may draw (1..=10, so untruncated
    /// products stay inside the engine's degree cap of 20).
    #[arg(long = "D")]
    pub d: usize,

    /// Number of independent trials.
    #[arg(long)]
    pub trials: u64,

    /// Master seed; trial t draws from the dedicated stream (seed, t).
    #[arg(long)]
    pub seed: u64,

    /// Probability that an enumerated multi-index receives a coefficient.
    #[arg(long, default_value_t = 0.5)]
    pub density: f64,

    /// Draw real coefficients instead of complex ones.
    #[arg(long)]
    pub real: bool,

    /// Write the JSON report here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
pub struct GbmArgs {
    /// Time horizon (must be positive).
    #[arg(long = "T")]
    pub t: f64,

    /// Number of grid cells; the chaos expansion lives over one Gaussian
    /// coordinate per cell.
    #[arg(long = "M")]
    pub m: usize,

    /// Chaos degree cap for the solution (1..=20).
    #[arg(long)]
    pub degree: usize,

    /// Integration method: closed_form (exact Wick exponential) or
    /// wick_euler (Wick-Euler stepping).
    #[arg(long)]
    pub method: String,

    /// Monte Carlo samples for the mean estimate (0 disables sampling).
    #[arg(long)]
    pub mc_samples: usize,

    /// Master seed for the Monte Carlo streams.
    #[arg(long)]
    pub seed: u64,

    /// Write the JSON moment report here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Also write the per-degree L2-mass table as CSV.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
#[command(group(ArgGroup::new("input").required(true).args(["expansion", "form"])))]
pub struct GrowthArgs {
    /// Path to a serialized expansion; its S-transform is the functional
    /// under test.
    #[arg(long)]
    pub expansion: Option<PathBuf>,

    /// Name of a registered closed-form functional
    /// (exp_linear, exp_cubic, abs_z, gaussian_kernel_s).
    #[arg(long)]
    pub form: Option<String>,

    /// Ray direction: comma-separated real coordinates, e.g. 1,0.5.
    #[arg(long)]
    pub xi: String,

    /// Oscillator weight power p; the fitted coefficient is reported
    /// relative to the p-weighted norm of the direction.
    #[arg(long, default_value_t = 1)]
    pub p: u32,

    /// Radii ladder: comma-separated, positive, strictly increasing.
    /// Default: 0.5,1,2,4,8,16.
    #[arg(long)]
    pub radii: Option<String>,

    /// Phase samples per radius.
    #[arg(long, default_value_t = 32)]
    pub phases: usize,

    /// Write the JSON growth report here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Also write the (r, M_r) sample table as CSV.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
pub struct CcrArgs {
    /// Coordinate dimension (1..=12).
    #[arg(long = "N")]
    pub n: usize,

    /// Degree cap (1..=20); basis terms are enumerated one degree below
    /// it so creation has headroom.
    #[arg(long = "D")]
    pub d: usize,

    /// Master seed for the random-expansion phase.
    #[arg(long)]
    pub seed: u64,

    /// Number of random expansion pairs to test after the exhaustive
    /// basis sweep.
    #[arg(long, default_value_t = 100)]
    pub trials: u64,

    /// Write the JSON report here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
pub struct EvalArgs {
    /// Path to the serialized expansion.
    #[arg(long = "in")]
    pub input: PathBuf,

    /// Evaluation point: comma-separated complex components in a+bi form,
    /// one component per coordinate (e.g. --at 0.5+0.25i,-1). Repeat the
    /// flag to evaluate several points.
    #[arg(long = "at", required = true)]
    pub at: Vec<String>,

    /// Cross-check each point against the integral-form quadrature oracle
    /// (requires real components and dimension at most 3).
    #[arg(long)]
    pub quadrature: bool,

    /// Write the JSON report here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
pub struct HermiteArgs {
    /// Polynomial index n (0..=30; coefficients stay exact integers).
    #[arg(long)]
    pub n: usize,

    /// Write the polynomial text here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
pub struct HsArgs {
    /// Time horizon (must be positive).
    #[arg(long = "T", default_value_t = 1.0)]
    pub t: f64,

    /// Number of grid cells. The default 16 makes dt an even power of two,
    /// so the isometry holds bit for bit; other cell counts may differ in
    /// the last unit of precision.
    #[arg(long = "M", default_value_t = 16)]
    pub m: usize,

    /// Degree cap of the integral (1..=20); integrands are drawn at least
    /// one degree below it so creation has headroom.
    #[arg(long, default_value_t = 4)]
    pub degree: usize,

    /// Master seed; cell k draws its integrand from the stream (seed, k).
    #[arg(long)]
    pub seed: u64,

    /// Write the JSON report here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Also write the per-cell isometry table as CSV.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
pub struct ConvertArgs {
    /// Path to the serialized expansion to validate and canonicalize.
    #[arg(long = "in")]
    pub input: PathBuf,

    /// Write the canonical JSON here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}
