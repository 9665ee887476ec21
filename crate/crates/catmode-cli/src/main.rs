//! `catmode` — equilibrium, frequencies, and mode shapes of a slack
//! inextensible catenary, plus the degenerate-basis replay and a
//! rigid-link oracle comparison. Output is deterministic JSON (or CSV
//! for sampled shapes): identical configuration, identical bytes.

mod commands;
mod config;
mod error;
mod output;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use config::{resolve, OutputFormat, Overrides, Settings};
use error::AppError;

#[derive(Parser)]
#[command(name = "catmode", version, about = "Slack-catenary oscillation analysis")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Default)]
struct CommonArgs {
    /// Horizontal span between the supports
    #[arg(long)]
    b: Option<f64>,
    /// Vertical offset of the right support
    #[arg(long)]
    h: Option<f64>,
    /// Chain length (default 1)
    #[arg(long)]
    length: Option<f64>,
    /// Mass per unit length (default 1)
    #[arg(long)]
    mass: Option<f64>,
    /// Gravitational acceleration (default 1)
    #[arg(long)]
    gravity: Option<f64>,
    /// Sine-basis size (default 4)
    #[arg(long = "N")]
    basis_size: Option<usize>,
    /// Quadrature panels (default 16, or CATMODE_QUAD_PANELS)
    #[arg(long)]
    panels: Option<usize>,
    /// Gauss-Legendre nodes per panel (default 10)
    #[arg(long)]
    order: Option<usize>,
    /// Output samples per curve (default 401)
    #[arg(long)]
    samples: Option<usize>,
    /// json or csv (default json)
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
    /// Output file (json) or directory (csv); stdout when absent
    #[arg(long)]
    output: Option<PathBuf>,
    /// Flat key = value config file; flags override it
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct OracleArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Number of rigid links in the discrete chain (default 200)
    #[arg(long)]
    links: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the static catenary and sample its profile
    Equilibrium(CommonArgs),
    /// Assemble the constrained system and solve for modes
    Modes(CommonArgs),
    /// Replay with computed modes as the basis: degeneracy + second-order frequencies
    Nonlinear(CommonArgs),
    /// Compare against the rigid-link chain oracle
    Oracle(OracleArgs),
}

impl CommonArgs {
    fn overrides(&self) -> Overrides {
        Overrides {
            b: self.b,
            h: self.h,
            length: self.length,
            mass: self.mass,
            gravity: self.gravity,
            basis_size: self.basis_size,
            panels: self.panels,
            order: self.order,
            samples: self.samples,
            links: None,
            format: self.format,
            output: self.output.clone(),
        }
    }

    fn settings(&self) -> Result<Settings, AppError> {
        resolve(self.config.as_deref(), &self.overrides()).map_err(AppError::Input)
    }
}

fn run(cli: &Cli) -> Result<(), AppError> {
    match &cli.command {
        Command::Equilibrium(args) => commands::run_equilibrium(&args.settings()?),
        Command::Modes(args) => commands::run_modes(&args.settings()?),
        Command::Nonlinear(args) => commands::run_nonlinear_check(&args.settings()?),
        Command::Oracle(args) => {
            let mut over = args.common.overrides();
            over.links = args.links;
            let settings =
                resolve(args.common.config.as_deref(), &over).map_err(AppError::Input)?;
            commands::run_oracle_compare(&settings)
        }
    }
}

fn main() {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => {}
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
