//! Command-line flags.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use sds_core::{BranchKind, HalfInt, Spin};

use crate::report::Format;

fn parse_half(s: &str) -> Result<HalfInt, String> {
    s.parse().map_err(|e: sds_core::Error| e.to_string())
}

fn parse_spin(s: &str) -> Result<Spin, String> {
    s.parse().map_err(|e: sds_core::Error| e.to_string())
}

fn parse_branch(s: &str) -> Result<BranchKind, String> {
    s.parse().map_err(|e: sds_core::Error| e.to_string())
}

/// Spectra, regimes and wavefunctions of the Dirac oscillator with deformed commutators.
#[derive(Debug, Parser)]
#[command(name = "sds", version)]
pub struct Cli {
    /// Subcommand.
    #[command(subcommand)]
    pub command: Command,
}

/// Available subcommands.
#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form energy levels of one branch.
    Spectrum(SpectrumArgs),
    /// Admissibility of the four ground-state branches.
    Classify(ClassifyArgs),
    /// Large and small radial components sampled on the momentum grid.
    Wavefunction(WavefunctionArgs),
    /// Minimal position and momentum uncertainties.
    Uncertainty(UncertaintyArgs),
    /// Numerical verification suites.
    Verify(VerifyArgs),
}

/// Model parameters.
#[derive(Debug, Clone, Args)]
pub struct PhysicsArgs {
    /// Minimal-momentum deformation, > 0.
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: f64,
    /// Minimal-length deformation, > 0.
    #[arg(long, allow_hyphen_values = true)]
    pub beta: f64,
    /// Mass, > 0.
    #[arg(long, allow_hyphen_values = true)]
    pub m: f64,
    /// Oscillator frequency, > 0.
    #[arg(long, allow_hyphen_values = true)]
    pub omega: f64,
    /// Gauge parameter.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub lambda: f64,
    /// Total angular momentum, e.g. 0.5 or 1/2.
    #[arg(long, value_parser = parse_half)]
    pub j: HalfInt,
    /// Spin projection, +0.5 or -0.5 (fractions accepted).
    #[arg(long, value_parser = parse_spin, allow_hyphen_values = true)]
    pub s: Spin,
}

/// Destination and encoding.
#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output encoding.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write to this file atomically instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

/// `spectrum` flags.
#[derive(Debug, Clone, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub physics: PhysicsArgs,
    /// Highest radial quantum number, at most 64.
    #[arg(long, default_value_t = 10)]
    pub n_max: u32,
    /// Branch to tabulate; defaults to the physical branch.
    #[arg(long, value_parser = parse_branch)]
    pub branch: Option<BranchKind>,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// `classify` flags.
#[derive(Debug, Clone, Args)]
pub struct ClassifyArgs {
    #[command(flatten)]
    pub physics: PhysicsArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// `wavefunction` flags.
#[derive(Debug, Clone, Args)]
pub struct WavefunctionArgs {
    #[command(flatten)]
    pub physics: PhysicsArgs,
    /// Radial quantum number.
    #[arg(long, default_value_t = 0)]
    pub n: u32,
    /// Number of interior grid points; default from SDS_DEFAULT_GRID or 2000.
    #[arg(long)]
    pub grid: Option<usize>,
    /// Branch to use; defaults to the physical branch.
    #[arg(long, value_parser = parse_branch)]
    pub branch: Option<BranchKind>,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// `uncertainty` flags.
#[derive(Debug, Clone, Args)]
pub struct UncertaintyArgs {
    /// Minimal-momentum deformation, > 0.
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: f64,
    /// Minimal-length deformation, > 0.
    #[arg(long, allow_hyphen_values = true)]
    pub beta: f64,
    /// Position expectation value.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub mean_x: f64,
    /// Momentum expectation value.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub mean_p: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// Verification suites.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    /// Oracle eigenvalues against the closed forms.
    Oracle,
    /// Normalization, orthogonality, intertwining and recursion.
    Wavefunction,
    /// Discrete adjointness of the ladder operators and ground-state annihilation.
    Adjoint,
    /// Gauge independence of the spectrum.
    Lambda,
    /// Small-deformation and classical limits.
    Limits,
    /// Shape-invariance telescoping.
    Telescoping,
    /// Uncertainty-relation consistency.
    Uncertainty,
    /// Every suite above.
    All,
}

/// `verify` flags.
#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub physics: PhysicsArgs,
    /// Suite to run.
    #[arg(long, value_enum, default_value_t = Suite::All)]
    pub suite: Suite,
    /// Number of interior grid points; default from SDS_DEFAULT_GRID or 2000.
    #[arg(long)]
    pub grid: Option<usize>,
    /// Relative tolerance of the oracle level comparison.
    #[arg(long, default_value_t = 1e-3)]
    pub tolerance: f64,
    /// Number of oracle levels, 2 to 12.
    #[arg(long, default_value_t = 5)]
    pub levels: usize,
    /// Highest level of the normalization check.
    #[arg(long, default_value_t = 8)]
    pub n_max: u32,
    #[command(flatten)]
    pub output: OutputArgs,
}
