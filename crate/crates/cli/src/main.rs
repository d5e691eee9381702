//! `molcomm`: sweeps, Monte Carlo checks and figure presets for timing
//! molecular communication over anomalous diffusion channels.

mod commands;
mod config;
mod figures;
mod table;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{Flags, Settings};
use figures::McOptions;
use table::Table;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Model(#[from] molcomm::Error),
    #[error("{0}")]
    Config(String),
    #[error("i/o: {0}")]
    Io(#[from] io::Error),
}

#[derive(Debug, Parser)]
#[command(name = "molcomm", version, about = "Timing molecular communication over (α,β)-anomalous diffusion")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// First-passage time CDF from the ℓth nearest transmitter (columns t,pdf,cdf)
    FptCdf,
    /// Bit error rate against data rate (columns rate,ber_fixed[,ber_known][,mu,ber_interference,ber_mitigated])
    BerCurve,
    /// Interference count moments against time (columns T,mu,var,campbell)
    Interference,
    /// Random-walk first-passage CDF against the analytic law (columns t,analytic,empirical,stderr)
    McValidate,
    /// Regenerate the data behind one of the figures 3 to 12
    Reproduce {
        #[arg(long)]
        figure: u32,
    },
}

fn run(cli: &Cli) -> Result<Table, CliError> {
    match cli.command {
        Command::Reproduce { figure } => {
            let defaults = McOptions::default();
            let file = match &cli.flags.config {
                Some(_) => Some(Settings::resolve(&cli.flags)?),
                None => None,
            };
            let mc = McOptions {
                walkers: cli.flags.walkers.or(file.as_ref().map(|s| s.walkers)).unwrap_or(defaults.walkers),
                seed: cli.flags.seed.or(file.as_ref().map(|s| s.seed)).unwrap_or(defaults.seed),
            };
            figures::reproduce(figure, mc)
        }
        Command::FptCdf => commands::fpt_cdf(&Settings::resolve(&cli.flags)?),
        Command::BerCurve => commands::ber_curve(&Settings::resolve(&cli.flags)?),
        Command::Interference => commands::interference(&Settings::resolve(&cli.flags)?),
        Command::McValidate => commands::mc_validate(&Settings::resolve(&cli.flags)?),
    }
}

fn emit(cli: &Cli, table: &Table) -> Result<(), CliError> {
    let stdout = io::stdout();
    match &cli.flags.out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            table.write_csv(&mut w)?;
            w.flush()?;
        }
        None if !cli.flags.json => table.write_csv(stdout.lock())?,
        None => {}
    }
    if cli.flags.json {
        let mut out = stdout.lock();
        serde_json::to_writer_pretty(&mut out, &table.to_json()).map_err(io::Error::from)?;
        writeln!(out)?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli).and_then(|t| emit(&cli, &t)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
