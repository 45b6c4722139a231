//! `nudging` — spin-up, twin experiments, inequality checks, parameter advice.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "nudging", version, about = "Nudging data assimilation for 2D Navier–Stokes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evolve from rest and write a checkpoint plus diagnostics.
    Spinup {
        config: PathBuf,
        /// Output directory.
        #[arg(long, env = "NUDGING_OUT_DIR", default_value = "out")]
        out: PathBuf,
    },
    /// Run a twin experiment from a spun-up checkpoint.
    Assimilate {
        config: PathBuf,
        checkpoint: PathBuf,
        #[arg(long, env = "NUDGING_OUT_DIR", default_value = "out")]
        out: PathBuf,
    },
    /// Check the spectral and interpolation inequalities.
    Verify {
        config: PathBuf,
        #[arg(long, env = "NUDGING_OUT_DIR", default_value = "out")]
        out: PathBuf,
    },
    /// Evaluate the parameter relations for given constants.
    Advise {
        #[arg(long)]
        nu: f64,
        #[arg(long = "grashof")]
        grashof: f64,
        #[arg(long = "n-modes")]
        n_modes: f64,
        #[arg(long)]
        epsilon: f64,
        #[arg(long, default_value_t = 1.0)]
        c: f64,
        #[arg(long = "c-omega", default_value_t = 1.0)]
        c_omega: f64,
        #[arg(long, default_value_t = 1.0)]
        c0: f64,
    },
    /// Time plain and nudged steps.
    Bench {
        #[arg(long, default_value_t = 128)]
        n: usize,
        #[arg(long, default_value_t = 200)]
        steps: u64,
    },
}

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Numerical(String),
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io(_) => 1,
        }
    }

    fn line(&self) -> String {
        match self {
            CliError::Config(m) => format!("error: config: {m}"),
            CliError::Numerical(m) => format!("error: numerical: {m}"),
            CliError::Io(m) => format!("error: io: {m}"),
        }
    }
}

impl From<config::ConfigError> for CliError {
    fn from(e: config::ConfigError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<nudging::Error> for CliError {
    fn from(e: nudging::Error) -> Self {
        use nudging::Error as E;
        let msg = e.to_string();
        match e {
            E::BlowUp { .. }
            | E::GevreyOverflow(_)
            | E::Overflow(_)
            | E::DegenerateRatio(_)
            | E::DegenerateReference
            | E::SaturatedSeries(_)
            | E::TooFewSamples { .. }
            | E::NonFinite(_)
            | E::NotHermitian(_)
            | E::NonzeroMean(_) => CliError::Numerical(msg),
            E::Io(_) => CliError::Io(msg),
            _ => CliError::Config(msg),
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Spinup { config, out } => commands::cmd_spinup(&config, &out),
        Command::Assimilate {
            config,
            checkpoint,
            out,
        } => commands::cmd_assimilate(&config, &checkpoint, &out),
        Command::Verify { config, out } => commands::cmd_verify(&config, &out),
        Command::Advise {
            nu,
            grashof,
            n_modes,
            epsilon,
            c,
            c_omega,
            c0,
        } => {
            let text = commands::cmd_advise(&commands::AdviseArgs {
                nu,
                grashof,
                c,
                c_omega,
                n_modes,
                epsilon,
                c0,
            })?;
            print!("{text}");
            Ok(())
        }
        Command::Bench { n, steps } => {
            print!("{}", commands::cmd_bench(n, steps)?);
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.line());
            ExitCode::from(e.exit_code())
        }
    }
}
