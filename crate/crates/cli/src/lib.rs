//! Command-line front end: reports, trajectories, reduction times, grid
//! sweeps and the self-verification suite.
//!
//! Exit codes: 0 success, 1 verification failure, 2 configuration error,
//! 3 numeric failure.

use std::ffi::OsString;
use std::fmt;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub mod commands;
pub mod config;
pub mod output;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    Config(String),
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Numeric(_) => EXIT_NUMERIC,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "invalid configuration: {m}"),
            CliError::Numeric(m) => write!(f, "numerical failure: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<gravred::Error> for CliError {
    fn from(e: gravred::Error) -> Self {
        use gravred::Error::*;
        match e {
            Domain(_) | InvalidParameter(_) | Singularity | Kind { .. } | Bracketing { .. } => {
                CliError::Config(e.to_string())
            }
            Accuracy { .. } | Stiffness { .. } | Numeric { .. } | InsufficientData(_) => CliError::Numeric(e.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Units {
    Si,
    Cgs,
    Dimensionless,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Point,
    Sphere,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Law {
    GravityPoint,
    MixedPoint,
    GravityObject,
}

#[derive(Debug, Parser)]
#[command(name = "gravred", version, about = "Gravity-induced wave-function reduction of Bohmian trajectories")]
pub struct Cli {
    /// Unit system of every dimensional input and output.
    #[arg(long, global = true, value_enum, default_value_t = Units::Si)]
    pub units: Units,
    /// Shorthand for `--units dimensionless` (hbar = G = 1).
    #[arg(long, global = true)]
    pub dimensionless: bool,
    /// Override the reduced Planck constant.
    #[arg(long, global = true)]
    pub hbar: Option<f64>,
    /// Override the gravitational constant.
    #[arg(long = "G", global = true)]
    pub g: Option<f64>,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// `key = value` file; command-line flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct BodyArgs {
    #[arg(long)]
    pub mass: f64,
    #[arg(long)]
    pub sigma0: f64,
    #[arg(long, value_enum, default_value_t = Kind::Point)]
    pub kind: Kind,
    /// Sphere radius.
    #[arg(long)]
    pub radius: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Critical mass and width, force ratio and regime.
    Critical {
        #[command(flatten)]
        body: BodyArgs,
        /// Energy-minimization bracket, as multiples of the analytic minimizer.
        #[arg(long, default_value_t = 0.1)]
        bracket_lo: f64,
        #[arg(long, default_value_t = 10.0)]
        bracket_hi: f64,
    },
    /// Integrate a radial equation of motion.
    Simulate {
        #[arg(long, value_enum)]
        law: Law,
        #[arg(long)]
        mass: f64,
        #[arg(long)]
        sigma0: f64,
        #[arg(long)]
        radius: Option<f64>,
        #[arg(long)]
        r0: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        v0: f64,
        #[arg(long)]
        t_end: f64,
        #[arg(long, default_value_t = 1e-9)]
        rtol: f64,
        #[arg(long, default_value_t = 1e-12)]
        atol: f64,
        /// Physical initial step; `t_char / 1000` by default.
        #[arg(long)]
        initial_step: Option<f64>,
        /// Use the sigma0^2 quantum term of the printed mixed law.
        #[arg(long)]
        printed_mixed: bool,
        /// Also write a gnuplot script plotting the CSV.
        #[arg(long)]
        gnuplot_script: Option<PathBuf>,
    },
    /// Reduction-time estimates.
    Tau {
        #[command(flatten)]
        body: BodyArgs,
        /// Include the numerically integrated quarter period (point bodies).
        #[arg(long)]
        numeric: bool,
    },
    /// Evaluate critical quantities over a parameter grid.
    Sweep {
        /// `param:min:max:points[:log|linear]` with param one of mass, sigma0, radius.
        #[arg(long = "grid", required = true)]
        grids: Vec<String>,
        #[arg(long)]
        mass: Option<f64>,
        #[arg(long)]
        sigma0: Option<f64>,
        #[arg(long, value_enum, default_value_t = Kind::Point)]
        kind: Kind,
        #[arg(long)]
        radius: Option<f64>,
    },
    /// Run the closed-form, gradient, energy and order-of-magnitude checks.
    Verify {
        /// Scale closed forms by `1 + perturb` (negative control).
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        perturb: f64,
    },
}

/// Parses `args` (including the program name), runs the command and
/// returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let args = match config::merge_config(args) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match commands::execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
