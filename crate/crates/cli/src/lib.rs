//! Command-line front end for the `evanescent` library.

pub mod commands;
pub mod config;
pub mod report;
pub mod verify;

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Parser, Subcommand};
use evanescent::Density;

use config::{ConfigError, Format, Overrides, Plan, RunConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "evanescent", version, about = "Evanescent TE10 modes in a cut-off rectangular waveguide")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// JSON run configuration; flags override its values.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Write the table here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, value_parser = parse_density, value_name = "full|variant")]
    pub density: Option<Density>,

    /// Absolute quadrature tolerance on G / ω_c².
    #[arg(long, global = true, value_name = "FLOAT")]
    pub tol: Option<f64>,

    /// Worker threads for parallel sweeps.
    #[arg(long, global = true, value_name = "N")]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// |T|², |R|² and arg T over the frequency grid.
    Scatter,
    /// Average energy velocity over the frequency and z grids.
    Velocity,
    /// Field profile and energy densities at x = a/2, t = 0.
    Fields,
    /// Correlation function series, decay fits and closed-form comparison.
    Propagator,
    /// Every invariant with its measured margin.
    Verify,
}

fn parse_density(s: &str) -> Result<Density, String> {
    Density::from_str(s).map_err(|_| format!("`{s}` is not one of full, variant"))
}

#[derive(Debug)]
pub enum CliError {
    Config(ConfigError),
    Numerical(evanescent::Error),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io(_) => EXIT_CONFIG,
            CliError::Numerical(_) => EXIT_NUMERICAL,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(e) => write!(f, "config error: {e}"),
            CliError::Numerical(e) => write!(f, "numerical failure: {e}"),
            CliError::Io(e) => write!(f, "{e}"),
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e)
    }
}

impl From<evanescent::Error> for CliError {
    fn from(e: evanescent::Error) -> Self {
        CliError::Numerical(e)
    }
}

/// Rendered output plus where it goes.
#[derive(Debug)]
pub struct Outcome {
    pub text: String,
    pub out: Option<PathBuf>,
    pub exit_code: i32,
}

pub fn plan(cli: &Cli) -> Result<Plan, CliError> {
    let cfg = match &cli.config {
        Some(path) => RunConfig::from_file(path)?,
        None => RunConfig::default(),
    };
    let overrides = Overrides {
        format: cli.format,
        out: cli.out.clone(),
        density: cli.density,
        tol: cli.tol,
    };
    Ok(cfg.resolve(&overrides)?)
}

/// Validate everything, then compute. Nothing runs if the config is bad.
pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let plan = plan(cli)?;
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(ConfigError {
                path: "--threads".into(),
                message: "must be at least 1".into(),
            }
            .into());
        }
        // A second call in the same process keeps the first pool.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let (table, exit_code) = match cli.command {
        Command::Scatter => (commands::scatter(&plan)?, EXIT_OK),
        Command::Velocity => (commands::velocity(&plan)?, EXIT_OK),
        Command::Fields => (commands::fields(&plan)?, EXIT_OK),
        Command::Propagator => (commands::propagator(&plan)?, EXIT_OK),
        Command::Verify => {
            let (table, pass) = verify::verify(&plan)?;
            (table, if pass { EXIT_OK } else { EXIT_VERIFY_FAILED })
        }
    };
    Ok(Outcome {
        text: table.render(plan.format),
        out: plan.out,
        exit_code,
    })
}
