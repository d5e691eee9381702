//! Continuous-time random walk simulation of first passage.
//!
//! Walkers wait Mittag-Leffler distributed times and make symmetric
//! α-stable jumps. With waiting scale `γ_t` and jump scale `γ_x` the
//! diffusion limit of the walk has coefficient `K = γ_x^α / γ_t^β`, so the
//! jump scale is set as a fraction of the target distance and the waiting
//! scale follows from `K`.

use std::io::{self, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};
use serde::{Deserialize, Serialize};

use crate::channel::DiffusionParams;
use crate::error::{Error, Result};
use crate::pointfield::{sample_nearest_distance, IntensityLaw};

/// Mittag-Leffler waiting time with scale `scale`; exponential for `β = 1`.
pub fn sample_mittag_leffler<R: Rng + ?Sized>(beta: f64, scale: f64, rng: &mut R) -> f64 {
    let e: f64 = Exp1.sample(rng);
    if beta >= 1.0 {
        return scale * e;
    }
    let v: f64 = rng.random();
    let bp = beta * std::f64::consts::PI;
    let w = bp.sin() / (bp * v).tan() - bp.cos();
    scale * e * w.powf(1.0 / beta)
}

/// Symmetric α-stable variate with characteristic function
/// `exp(-|scale·k|^α)` (Chambers–Mallows–Stuck); Gaussian with variance
/// `2·scale²` at `α = 2`.
pub fn sample_stable_jump<R: Rng + ?Sized>(alpha: f64, scale: f64, rng: &mut R) -> f64 {
    let half_pi = std::f64::consts::FRAC_PI_2;
    let v = half_pi * (2.0 * rng.random::<f64>() - 1.0);
    let w: f64 = Exp1.sample(rng);
    let x = if alpha == 2.0 {
        2.0 * v.sin() * w.sqrt()
    } else if alpha == 1.0 {
        v.tan()
    } else {
        (alpha * v).sin() / v.cos().powf(1.0 / alpha) * ((v - alpha * v).cos() / w).powf((1.0 - alpha) / alpha)
    };
    scale * x
}

/// Simulation settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WalkConfig {
    pub d: DiffusionParams,
    pub n_walkers: usize,
    /// Censoring horizon in seconds.
    pub t_max: f64,
    pub seed: u64,
    /// Jump scale as a fraction of the target distance.
    pub step_fraction: f64,
    /// Walker is abandoned (censored) after this many jumps.
    pub max_steps: u64,
}

impl WalkConfig {
    pub fn new(d: DiffusionParams, n_walkers: usize, t_max: f64, seed: u64) -> Self {
        WalkConfig { d, n_walkers, t_max, seed, step_fraction: 1.0 / 20.0, max_steps: 50_000_000 }
    }

    pub fn validate(&self) -> Result<()> {
        self.d.validate()?;
        if self.n_walkers == 0 {
            return Err(Error::InvalidArgument("at least one walker is needed".into()));
        }
        if !(self.t_max > 0.0) {
            return Err(Error::InvalidArgument(format!("t_max must be positive, got {}", self.t_max)));
        }
        if !(self.step_fraction > 0.0 && self.step_fraction <= 1.0) {
            return Err(Error::InvalidArgument(format!(
                "step fraction must lie in (0, 1], got {}",
                self.step_fraction
            )));
        }
        Ok(())
    }

    /// Time scale `γ_t` matching jump scale `γ_x`.
    pub fn waiting_scale(&self, jump_scale: f64) -> f64 {
        (jump_scale.powf(self.d.alpha) / self.d.k).powf(1.0 / self.d.beta)
    }

    /// Independent generator for walker `index`.
    pub fn stream(&self, index: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index);
        rng
    }
}

/// Sorted first-passage times plus the number of censored walkers.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FptEstimate {
    pub samples: Vec<f64>,
    pub censor_count: usize,
}

impl FptEstimate {
    fn from_outcomes(outcomes: impl IntoIterator<Item = Option<f64>>) -> Self {
        let mut samples = Vec::new();
        let mut censor_count = 0;
        for o in outcomes {
            match o {
                Some(t) => samples.push(t),
                None => censor_count += 1,
            }
        }
        samples.sort_by(f64::total_cmp);
        FptEstimate { samples, censor_count }
    }

    pub fn n_walkers(&self) -> usize {
        self.samples.len() + self.censor_count
    }

    /// Fraction of walkers absorbed by time `t`.
    pub fn ecdf(&self, t: f64) -> f64 {
        let k = self.samples.partition_point(|&s| s <= t);
        k as f64 / self.n_walkers() as f64
    }

    /// `(t, ecdf, binomial standard error)` rows.
    pub fn cdf_table(&self, times: &[f64]) -> Vec<(f64, f64, f64)> {
        let n = self.n_walkers() as f64;
        times
            .iter()
            .map(|&t| {
                let p = self.ecdf(t);
                (t, p, (p * (1.0 - p) / n).sqrt())
            })
            .collect()
    }

    /// Writes the sorted samples, one per row.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "fpt")?;
        for s in &self.samples {
            writeln!(w, "{s:e}")?;
        }
        Ok(())
    }
}

/// First crossing of level `r` by one walker started at 0, or `None` if
/// censored.
///
/// For `α = 2` the Gaussian jump is bridged: a jump that ends below `r`
/// still counts as a crossing with the Brownian-bridge probability of
/// having passed `r` on the way. Heavy-tailed jumps are only checked at
/// their end point, so overshooting (leapover) jumps count as crossings.
fn walk_once<R: Rng + ?Sized>(r: f64, cfg: &WalkConfig, jump: f64, wait: f64, rng: &mut R) -> Option<f64> {
    let (alpha, beta) = (cfg.d.alpha, cfg.d.beta);
    let bridged = alpha == 2.0;
    let two_var = 2.0 * jump * jump;
    let mut x = 0.0;
    let mut t = 0.0;
    for _ in 0..cfg.max_steps {
        t += sample_mittag_leffler(beta, wait, rng);
        if t > cfg.t_max {
            return None;
        }
        let x1 = x + sample_stable_jump(alpha, jump, rng);
        if x1 >= r {
            return Some(t);
        }
        if bridged {
            // P(max of the bridge ≥ r) = exp(-2(r-x)(r-x1)/σ²), σ² = 2γ_x²
            let p = (-2.0 * (r - x) * (r - x1) / two_var).exp();
            if rng.random::<f64>() < p {
                return Some(t);
            }
        }
        x = x1;
    }
    None
}

/// First-passage times to distance `r` for `cfg.n_walkers` walkers.
pub fn simulate_fpt(r: f64, cfg: &WalkConfig) -> Result<FptEstimate> {
    cfg.validate()?;
    if !(r > 0.0) {
        return Err(Error::InvalidArgument(format!("distance must be positive, got {r}")));
    }
    let jump = r * cfg.step_fraction;
    let wait = cfg.waiting_scale(jump);
    Ok(FptEstimate::from_outcomes((0..cfg.n_walkers as u64).map(|i| {
        let mut rng = cfg.stream(i);
        walk_once(r, cfg, jump, wait, &mut rng)
    })))
}

/// First-passage times when each walker starts at the ℓth nearest point of
/// an independently drawn field.
pub fn estimate_network_fpt(law: &IntensityLaw, ell: usize, cfg: &WalkConfig) -> Result<FptEstimate> {
    cfg.validate()?;
    law.validate()?;
    if ell == 0 {
        return Err(Error::InvalidArgument("the nearest-point index starts at 1".into()));
    }
    Ok(FptEstimate::from_outcomes((0..cfg.n_walkers as u64).map(|i| {
        let mut rng = cfg.stream(i);
        let r = sample_nearest_distance(law, ell, &mut rng);
        let jump = r * cfg.step_fraction;
        walk_once(r, cfg, jump, cfg.waiting_scale(jump), &mut rng)
    })))
}

/// One first-passage time to `r` drawn from the walker stream `rng`.
pub fn sample_fpt<R: Rng + ?Sized>(r: f64, cfg: &WalkConfig, rng: &mut R) -> Option<f64> {
    let jump = r * cfg.step_fraction;
    walk_once(r, cfg, jump, cfg.waiting_scale(jump), rng)
}

/// Mean squared displacement of unconstrained walkers with jump scale
/// `jump` at the given (ascending) times.
pub fn free_msd(cfg: &WalkConfig, jump: f64, times: &[f64]) -> Vec<f64> {
    let wait = cfg.waiting_scale(jump);
    let mut acc = vec![0.0; times.len()];
    for i in 0..cfg.n_walkers as u64 {
        let mut rng = cfg.stream(i);
        let (mut x, mut t) = (0.0, 0.0);
        let mut next = 0;
        while next < times.len() {
            t += sample_mittag_leffler(cfg.d.beta, wait, &mut rng);
            while next < times.len() && times[next] < t {
                acc[next] += x * x;
                next += 1;
            }
            x += sample_stable_jump(cfg.d.alpha, jump, &mut rng);
        }
    }
    acc.iter().map(|s| s / cfg.n_walkers as f64).collect()
}
