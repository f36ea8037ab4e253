use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hyperfrac_core::spectral::radial_grid;
use hyperfrac_core::{ProblemParams, Spacing};

use crate::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "hyperfrac",
    version,
    about = "Fractional Laplacian on hyperbolic space"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate the Green's function, singular kernel, spherical function or Plancherel density.
    Tabulate {
        #[arg(value_enum)]
        kind: TableKind,
        /// Spectral parameter for `spherical`.
        #[arg(long, default_value_t = 1.0)]
        lambda: f64,
        #[command(flatten)]
        config: RunConfig,
    },
    /// Run a verification suite and write a pass/fail report.
    Check {
        #[arg(value_enum)]
        suite: Suite,
        /// Kernel exponent for the `hls` suite, in (0, n).
        #[arg(long, default_value_t = 1.0)]
        lambda_exp: f64,
        /// Seed for the randomized `maxprinciple` profiles.
        #[arg(long, default_value_t = 2024)]
        seed: u64,
        #[command(flatten)]
        config: RunConfig,
    },
    /// Solve u = ∫ G_s u^p for a radial profile.
    Solve {
        /// Accept p equal to the critical exponent.
        #[arg(long)]
        allow_critical: bool,
        #[arg(long, default_value_t = 5000)]
        max_iter: usize,
        /// Where to write the JSON report in csv mode (default: next to --out).
        #[arg(long)]
        report: Option<PathBuf>,
        #[command(flatten)]
        config: RunConfig,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableKind {
    Green,
    Kernel,
    Spherical,
    Density,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Asymptotics,
    Inversion,
    Plancherel,
    Maxprinciple,
    Hls,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GridSpacing {
    Log,
    Uniform,
    Mixed,
}

impl From<GridSpacing> for Spacing {
    fn from(s: GridSpacing) -> Self {
        match s {
            GridSpacing::Log => Spacing::Log,
            GridSpacing::Uniform => Spacing::Uniform,
            GridSpacing::Mixed => Spacing::Mixed,
        }
    }
}

/// Options shared by every subcommand.
#[derive(Debug, Clone, Args)]
pub struct RunConfig {
    /// Dimension of H^n.
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    /// Fractional order, in (0, 1).
    #[arg(long, default_value_t = 0.5)]
    pub s: f64,
    /// Nonlinearity exponent.
    #[arg(long, default_value_t = 1.5)]
    pub p: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub rho_min: f64,
    #[arg(long, default_value_t = 15.0)]
    pub rho_max: f64,
    #[arg(long, default_value_t = 200)]
    pub nodes: usize,
    #[arg(long, value_enum, default_value_t = GridSpacing::Mixed)]
    pub spacing: GridSpacing,
    /// Spectral cutoff; chosen from the data when omitted (`density` uses 10).
    #[arg(long)]
    pub lambda_max: Option<f64>,
    /// Solver tolerance (default 1e-6), or the error bound of the
    /// `inversion` and `plancherel` suites.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output path; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn params(&self) -> Result<ProblemParams, CliError> {
        Ok(ProblemParams::new(self.n, self.s, self.p)?)
    }

    pub fn grid(&self) -> Result<Vec<f64>, CliError> {
        Ok(radial_grid(
            self.spacing.into(),
            self.rho_min,
            self.rho_max,
            self.nodes,
        )?)
    }
}
