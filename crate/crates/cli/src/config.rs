//! Run configuration: an optional JSON file overridden by command-line flags.

use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use molcomm::channel::DiffusionParams;
use molcomm::pointfield::{IntensityLaw, Region};
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum FieldKind {
    Poisson,
    Gamma,
}

/// Flags shared by every command. All units are SI.
#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// JSON file with any of the flag names as keys; flags take precedence
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Space-fractional exponent α in (0, 2]
    #[arg(long, global = true)]
    pub alpha: Option<f64>,
    /// Time-fractional exponent β in (0, 1], at most α
    #[arg(long, global = true)]
    pub beta: Option<f64>,
    /// Diffusion coefficient K in m^α/s^β
    #[arg(long = "K", global = true)]
    pub k: Option<f64>,
    /// Transmitter field: Poisson or Cox with gamma intensity
    #[arg(long, global = true)]
    pub field: Option<FieldKind>,
    /// Gamma intensity shape
    #[arg(long, global = true)]
    pub a: Option<f64>,
    /// Gamma intensity scale in 1/m² (mean intensity is a·b)
    #[arg(long, global = true)]
    pub b: Option<f64>,
    /// Intensity in 1/m² (Poisson), or the gamma mean when b is not given
    #[arg(long, global = true)]
    pub lambda0: Option<f64>,
    /// Radius of the interference region in m
    #[arg(long, global = true)]
    pub omega: Option<f64>,
    /// Index of the nearest transmitter, starting at 1
    #[arg(long, global = true)]
    pub ell: Option<usize>,
    /// Comma-separated data rates in bits/s
    #[arg(long, global = true)]
    pub rates: Option<String>,
    /// Comma-separated times in s (or radii in m for radius sweeps)
    #[arg(long, global = true)]
    pub times: Option<String>,
    /// Monte Carlo walkers or trials
    #[arg(long, global = true)]
    pub walkers: Option<usize>,
    /// Monte Carlo seed
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Mean intensity of interfering molecules in 1/m² (ber-curve)
    #[arg(long, global = true)]
    pub interferers: Option<f64>,
    /// Only compute the fixed-threshold BER (ber-curve)
    #[arg(long, global = true)]
    pub fixed_threshold: bool,
    /// CSV output path; standard output when absent
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Print a JSON summary (to standard output; the CSV then needs --out)
    #[arg(long, global = true)]
    pub json: bool,
}

/// Keys accepted in a configuration file.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    alpha: Option<f64>,
    beta: Option<f64>,
    #[serde(rename = "K")]
    k: Option<f64>,
    field: Option<FieldKind>,
    a: Option<f64>,
    b: Option<f64>,
    lambda0: Option<f64>,
    omega: Option<f64>,
    ell: Option<usize>,
    rates: Option<Vec<f64>>,
    times: Option<Vec<f64>>,
    walkers: Option<usize>,
    seed: Option<u64>,
    interferers: Option<f64>,
    fixed_threshold: Option<bool>,
}

/// Fully resolved settings.
#[derive(Debug, Clone)]
pub struct Settings {
    pub d: DiffusionParams,
    pub law: IntensityLaw,
    pub region: Region,
    pub ell: usize,
    pub rates: Option<Vec<f64>>,
    pub times: Option<Vec<f64>>,
    pub walkers: usize,
    pub seed: u64,
    pub interferers: Option<f64>,
    pub fixed_threshold: bool,
}

fn parse_list(name: &str, s: &str) -> Result<Vec<f64>, CliError> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<f64>().map_err(|_| CliError::Config(format!("{name}: cannot parse {t:?} as a number"))))
        .collect()
}

fn read_file(path: &Path) -> Result<FileConfig, CliError> {
    let text = std::fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

impl Settings {
    pub fn resolve(flags: &Flags) -> Result<Self, CliError> {
        let file = match &flags.config {
            Some(p) => read_file(p)?,
            None => FileConfig::default(),
        };
        let alpha = flags.alpha.or(file.alpha).unwrap_or(2.0);
        let beta = flags.beta.or(file.beta).unwrap_or(1.0);
        let k = flags.k.or(file.k).unwrap_or(1e-10);
        let d = DiffusionParams::new(alpha, beta, k)?;

        let lambda0 = flags.lambda0.or(file.lambda0).unwrap_or(1e10);
        let law = match flags.field.or(file.field).unwrap_or(FieldKind::Poisson) {
            FieldKind::Poisson => IntensityLaw::Deterministic { lambda0 },
            FieldKind::Gamma => {
                let a = flags.a.or(file.a).unwrap_or(5.0);
                match flags.b.or(file.b) {
                    Some(b) => IntensityLaw::Gamma { a, b },
                    None => IntensityLaw::gamma_with_mean(a, lambda0),
                }
            }
        };
        law.validate()?;
        let region = Region::new(flags.omega.or(file.omega).unwrap_or(1e-4))?;
        let ell = flags.ell.or(file.ell).unwrap_or(1);
        if ell == 0 {
            return Err(CliError::Config("ell must be at least 1".into()));
        }
        let rates = match &flags.rates {
            Some(s) => Some(parse_list("rates", s)?),
            None => file.rates,
        };
        let times = match &flags.times {
            Some(s) => Some(parse_list("times", s)?),
            None => file.times,
        };
        Ok(Settings {
            d,
            law,
            region,
            ell,
            rates,
            times,
            walkers: flags.walkers.or(file.walkers).unwrap_or(20_000),
            seed: flags.seed.or(file.seed).unwrap_or(1),
            interferers: flags.interferers.or(file.interferers),
            fixed_threshold: flags.fixed_threshold || file.fixed_threshold.unwrap_or(false),
        })
    }
}

/// Checks a grid is nonempty with positive finite entries.
pub fn check_grid(name: &str, grid: &[f64]) -> Result<(), CliError> {
    if grid.is_empty() {
        return Err(CliError::Config(format!("the {name} grid is empty")));
    }
    if let Some(bad) = grid.iter().find(|v| !(**v > 0.0 && v.is_finite())) {
        return Err(CliError::Config(format!("{name} must be positive, got {bad}")));
    }
    Ok(())
}

/// `n` points from `10^lo` to `10^hi`, evenly spaced in the exponent.
pub fn logspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| 10f64.powf(lo + (hi - lo) * i as f64 / (n - 1) as f64)).collect()
}
