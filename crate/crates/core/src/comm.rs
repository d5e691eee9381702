//! Timing binary modulation: thresholds, bit error rates and interference.
//!
//! A bit is sent by releasing one molecule at `s ∈ {0, T_b/2}`; the
//! receiver compares the arrival time with a threshold `γ`.

use rand::Rng;
use rand_distr::{Bernoulli, Distribution};
use serde::{Deserialize, Serialize};

use crate::channel::{fpt_fixed, fpt_nearest, DiffusionParams, FptLaw};
use crate::ctrw::{sample_fpt, WalkConfig};
use crate::error::{Error, Result};
use crate::hcore::{FoxH, OrderSeq};
use crate::pointfield::{
    nearest_distance_law, sample_field, sample_nearest_distance, IntensityLaw, PointFieldModel, Region,
};
use crate::quad::{gauss_legendre, integrate};
use crate::special::q_function;

/// How the detection threshold is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThresholdMode {
    /// Per-distance optimum; needs the distance at the receiver.
    OptimalPerDistance,
    /// `γ = T_b/2`.
    Fixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimingConfig {
    /// Data rate in bits/s.
    pub rate: f64,
    pub threshold_mode: ThresholdMode,
}

impl TimingConfig {
    pub fn new(rate: f64, threshold_mode: ThresholdMode) -> Result<Self> {
        check_rate(rate)?;
        Ok(TimingConfig { rate, threshold_mode })
    }

    pub fn bit_period(&self) -> f64 {
        1.0 / self.rate
    }
}

fn check_rate(rate: f64) -> Result<()> {
    if rate > 0.0 && rate.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("rate must be positive, got {rate}")))
    }
}

/// Interfering molecules scattered over a disk around the receiver.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InterferenceModel {
    pub law: IntensityLaw,
    pub region: Region,
    pub d: DiffusionParams,
}

/// Mean and variance of the number of interfering arrivals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InterferenceStats {
    pub mu_t: f64,
    pub sigma2_t: f64,
}

/// Threshold solution; `fallback` is set when no crossing was found and
/// `γ = T_b/2` was used instead.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Threshold {
    pub gamma: f64,
    pub fallback: bool,
}

/// Optimal threshold for a fixed-distance law: the crossing of
/// `f(γ - T_b/2)` and `f(γ)` on `[T_b/2, T_b/2 + 50 T_b]`, by bisection.
///
/// The bisection runs on the offset `δ = γ - T_b/2`, geometrically while
/// the bracket spans decades, and stops at relative width 1e-9 in `δ`.
/// Close transmitters put the crossing many orders of magnitude below
/// `T_b`.
pub fn optimal_threshold(fpt: &FptLaw, rate: f64) -> Result<f64> {
    check_rate(rate)?;
    let half = 0.5 / rate;
    let diff = |delta: f64| -> Result<f64> { Ok(fpt.pdf(delta)? - fpt.pdf(half + delta)?) };
    let (mut lo, mut hi) = (0.0, 100.0 * half);
    if diff(hi)? <= 0.0 {
        return Err(Error::NoRoot { lo: half, hi: half + hi });
    }
    for _ in 0..4000 {
        if hi - lo <= 1e-9 * hi || hi < f64::MIN_POSITIVE {
            break;
        }
        let mid = if lo == 0.0 {
            hi / 256.0
        } else if hi > 4.0 * lo {
            (lo * hi).sqrt()
        } else {
            0.5 * (lo + hi)
        };
        if diff(mid)? > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(half + 0.5 * (lo + hi))
}

/// [`optimal_threshold`] falling back to `T_b/2` when there is no root.
pub fn detection_threshold(fpt: &FptLaw, rate: f64) -> Result<Threshold> {
    match optimal_threshold(fpt, rate) {
        Ok(gamma) => Ok(Threshold { gamma, fallback: false }),
        Err(Error::NoRoot { .. }) => Ok(Threshold { gamma: 0.5 / rate, fallback: true }),
        Err(e) => Err(e),
    }
}

/// BER with threshold `γ` and a known first-passage law.
pub fn conditional_ber(fpt: &FptLaw, rate: f64, gamma: f64) -> Result<f64> {
    let tb = 1.0 / rate;
    let late = fpt.sf(gamma)?;
    let early = if gamma > 0.5 * tb { fpt.cdf(gamma - 0.5 * tb)? } else { 0.0 };
    Ok((0.5 * (late + early)).clamp(0.0, 0.5))
}

/// BER when the receiver knows its distance and uses the optimal threshold,
/// averaged over the ℓth nearest distance.
pub fn ber_known_distance(law: &IntensityLaw, ell: usize, d: &DiffusionParams, rate: f64) -> Result<f64> {
    ber_known_distance_law(&nearest_distance_law(law, ell)?, d, rate)
}

/// [`ber_known_distance`] for an arbitrary distance law.
///
/// 64-point Gauss–Legendre in `u` with `r = r_max u²`, where `r_max` is
/// the `1 - 1e-8` quantile of the distance.
pub fn ber_known_distance_law(dist: &FoxH<f64>, d: &DiffusionParams, rate: f64) -> Result<f64> {
    check_rate(rate)?;
    d.validate()?;
    let eval = dist.evaluator()?;
    let r_max = quantile(|r| eval.sf(r), 1e-8, 1.0 / dist.params.c)?;
    let mut acc = 0.0;
    for (x, w) in gauss_legendre::<f64>(64) {
        let u = 0.5 * (x + 1.0);
        let r = r_max * u * u;
        let fpt = fpt_fixed(d, r)?;
        let th = detection_threshold(&fpt, rate)?;
        // T_b/2 is always a candidate, so never do worse than it
        let ber = conditional_ber(&fpt, rate, th.gamma)?.min(conditional_ber(&fpt, rate, 0.5 / rate)?);
        // dr = 2 r_max u du, du = dx/2
        acc += w * ber * eval.pdf(r)? * r_max * u;
    }
    Ok(acc.clamp(0.0, 0.5))
}

/// Smallest `r` with `sf(r) ≤ tail`, to relative precision 1e-10.
fn quantile(sf: impl Fn(f64) -> Result<f64>, tail: f64, guess: f64) -> Result<f64> {
    let (mut lo, mut hi) = (guess, guess);
    while sf(hi)? > tail {
        lo = hi;
        hi *= 2.0;
    }
    while lo == hi || sf(lo)? <= tail {
        lo *= 0.5;
        if lo < guess * 1e-30 {
            return Ok(hi);
        }
    }
    while (hi - lo) > 1e-10 * hi {
        let mid = 0.5 * (lo + hi);
        if sf(mid)? > tail {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(hi)
}

/// BER with the fixed threshold `T_b/2`.
pub fn ber_fixed_threshold(law: &IntensityLaw, ell: usize, d: &DiffusionParams, rate: f64) -> Result<f64> {
    ber_fixed_from(&fpt_nearest(d, law, ell)?, rate)
}

/// `½ P(t > T_b/2)` for a given first-passage law.
pub fn ber_fixed_from(fpt: &FptLaw, rate: f64) -> Result<f64> {
    check_rate(rate)?;
    Ok((0.5 * fpt.sf(0.5 / rate)?).clamp(0.0, 0.5))
}

/// Exponent `ζ` of `BER ∝ R^ζ` as `R → 0` for a distance H-variate.
pub fn low_rate_slope(dist: &FoxH<f64>, d: &DiffusionParams) -> f64 {
    let ratio = d.beta / d.alpha;
    let n = dist.order.n;
    let p = &dist.params;
    (0..n).map(|j| ratio * ((1.0 - p.a[j]) / p.a_scale[j] - 1.0)).fold(ratio.min(d.beta), f64::min)
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn fit_log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Probability that a molecule released at distance `x` has arrived by `t`.
pub fn arrival_prob(x: f64, d: &DiffusionParams, t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::InvalidArgument(format!("time must be positive, got {t}")));
    }
    if !(x > 0.0) {
        return Err(Error::InvalidArgument(format!("distance must be positive, got {x}")));
    }
    let arg = x.powf(d.alpha / d.beta) / t;
    Ok(arrival_sequence(d)?.eval(arg)?.clamp(0.0, 1.0))
}

/// `H^{2,1}_{3,3}` giving the arrival probability as a function of
/// `x^{α/β} / t`.
pub fn arrival_sequence(d: &DiffusionParams) -> Result<FoxH<f64>> {
    d.validate()?;
    let DiffusionParams { alpha, beta, k } = *d;
    let h = alpha / (2.0 * beta);
    FoxH::from_slices(
        OrderSeq::new(2, 1, 3, 3),
        2.0 / beta,
        1.0 / k.powf(1.0 / beta),
        &[1.0, 1.0, 1.0],
        &[0.0, 1.0, 1.0],
        &[1.0 / beta, 1.0, h],
        &[alpha / beta, 1.0 / beta, h],
    )
}

/// `H^{2,2}_{4,4}` giving the mean interference count as a function of
/// `ω T^{-β/α}`.
pub fn mean_sequence(d: &DiffusionParams) -> Result<FoxH<f64>> {
    d.validate()?;
    let DiffusionParams { alpha, beta, k } = *d;
    let ia = 1.0 / alpha;
    FoxH::from_slices(
        OrderSeq::new(2, 2, 4, 4),
        k.powf(2.0 * ia),
        k.powf(-ia),
        &[1.0, 1.0 + 2.0 * ia, 1.0 + 2.0 * beta * ia, 2.0],
        &[2.0, 1.0 + 2.0 * ia, 2.0, 0.0],
        &[1.0, ia, beta * ia, 0.5],
        &[1.0, ia, 0.5, 1.0],
    )
}

/// Mean and variance of the number of interfering molecules arriving
/// within `t`. The count is Poisson given the field, so both are equal.
pub fn interference_moments(model: &InterferenceModel, t: f64) -> Result<InterferenceStats> {
    if !(t > 0.0) {
        return Err(Error::InvalidArgument(format!("time must be positive, got {t}")));
    }
    model.law.validate()?;
    let d = &model.d;
    let mean_lambda = model.law.mean();
    let mu = if mean_lambda == 0.0 {
        0.0
    } else {
        let h = mean_sequence(d)?.eval(model.region.omega * t.powf(-d.beta / d.alpha))?;
        4.0 * std::f64::consts::PI * mean_lambda * t.powf(2.0 * d.beta / d.alpha) / d.alpha * h
    };
    let mu = mu.clamp(0.0, model.region.area() * mean_lambda);
    Ok(InterferenceStats { mu_t: mu, sigma2_t: mu })
}

/// Mean interference count by direct quadrature of the arrival
/// probability over the disk.
pub fn campbell_mean(model: &InterferenceModel, t: f64) -> Result<f64> {
    let mut err = None;
    let omega = model.region.omega;
    let mut integrand = |r: f64| {
        if r <= 0.0 {
            return 0.0;
        }
        match fpt_fixed(&model.d, r).and_then(|f| f.cdf(t)) {
            Ok(q) => q * r,
            Err(e) => {
                err.get_or_insert(e);
                0.0
            }
        }
    };
    // decade pieces, since the arrival probability may switch off at a
    // radius far below ω; below ω·1e-12 the integrand is at most r
    let mut total = 0.5 * (omega * 1e-12).powi(2);
    let mut hi = omega;
    for _ in 0..12 {
        let lo = hi * 0.1;
        total += integrate(&mut integrand, lo, hi, 0.0, 1e-11, 200).value;
        hi = lo;
    }
    if let Some(e) = err {
        return Err(e);
    }
    Ok(std::f64::consts::TAU * model.law.mean() * total)
}

/// First-arrival BER in the presence of interference with mean count `mu`.
///
/// Written as `P e^{-μ} + ½(1 - e^{-μ})` so that `μ = 0` returns `P`
/// exactly.
pub fn first_arrival_ber(ber_fixed: f64, mu: f64) -> f64 {
    let keep = (-mu).exp();
    ber_fixed * keep + 0.5 * (1.0 - keep)
}

/// BER of the fixed threshold detector when interfering molecules may
/// arrive first.
pub fn ber_with_interference(
    law: &IntensityLaw,
    ell: usize,
    model: &InterferenceModel,
    d: &DiffusionParams,
    rate: f64,
) -> Result<f64> {
    let p = ber_fixed_threshold(law, ell, d, rate)?;
    let mu = interference_moments(model, 0.5 / rate)?.mu_t;
    Ok(first_arrival_ber(p, mu))
}

/// BER when decoding on the (n+1)th arrival with `n` the nearest integer
/// to the interference mean, under a Gaussian count model.
pub fn mitigated_ber(ber_fixed: f64, sigma: f64) -> f64 {
    if sigma == 0.0 {
        return ber_fixed;
    }
    let q = q_function(0.5 / sigma);
    ber_fixed * (1.0 - 2.0 * q) + q
}

/// BER of the (n+1)th-arrival detector for an arbitrary `n`, with the
/// Gaussian count probability `P(z = n)` continuity corrected.
pub fn nth_arrival_ber(ber_fixed: f64, mu: f64, sigma: f64, n: u64) -> f64 {
    let nf = n as f64;
    let hit = if sigma == 0.0 {
        if (mu - nf).abs() < 0.5 {
            1.0
        } else {
            0.0
        }
    } else {
        q_function((nf - 0.5 - mu) / sigma) - q_function((nf + 0.5 - mu) / sigma)
    };
    ber_fixed * hit + 0.5 * (1.0 - hit)
}

/// Number of interfering arrivals to skip: the mean rounded to an integer.
pub fn skip_count(mu: f64) -> u64 {
    mu.round().max(0.0) as u64
}

/// BER of the (n+1)th-arrival detector with `n = round(μ)`.
pub fn ber_mitigated(
    law: &IntensityLaw,
    ell: usize,
    model: &InterferenceModel,
    d: &DiffusionParams,
    rate: f64,
) -> Result<f64> {
    let p = ber_fixed_threshold(law, ell, d, rate)?;
    let stats = interference_moments(model, 0.5 / rate)?;
    Ok(mitigated_ber(p, stats.sigma2_t.sqrt()))
}

/// Receiver rule simulated by [`mc_ber`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Detector {
    /// The first arrival is compared with `T_b/2`.
    FirstArrival,
    /// The (n+1)th arrival is compared with `T_b/2`.
    NthArrival { n: u64 },
    /// Distance-aware optimal threshold; interference is ignored.
    KnownDistance,
}

/// Empirical BER with a Wilson 95% interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McBer {
    pub ber: f64,
    pub lo: f64,
    pub hi: f64,
    pub errors: u64,
    pub trials: u64,
}

impl McBer {
    pub fn contains(&self, p: f64) -> bool {
        self.lo <= p && p <= self.hi
    }
}

/// Wilson score interval for `k` successes in `n` trials.
pub fn wilson(k: u64, n: u64, z: f64) -> (f64, f64) {
    let (kf, nf) = (k as f64, n as f64);
    let p = kf / nf;
    let z2 = z * z;
    let denom = 1.0 + z2 / nf;
    let center = (p + z2 / (2.0 * nf)) / denom;
    let half = z * (p * (1.0 - p) / nf + z2 / (4.0 * nf * nf)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// Monte Carlo BER: random bits, CTRW first-passage of the signal molecule
/// and of every interfering molecule in a freshly drawn field.
///
/// `walk.t_max` is ignored; walks stop at `T_b/2` (or the threshold for
/// [`Detector::KnownDistance`]).
pub fn mc_ber(
    law: &IntensityLaw,
    ell: usize,
    interference: Option<&InterferenceModel>,
    rate: f64,
    detector: Detector,
    walk: &WalkConfig,
    trials: u64,
) -> Result<McBer> {
    check_rate(rate)?;
    walk.validate()?;
    law.validate()?;
    if trials == 0 {
        return Err(Error::InvalidArgument("at least one trial is needed".into()));
    }
    let half = 0.5 / rate;
    let coin = Bernoulli::new(0.5).expect("valid probability");
    let mut errors = 0u64;
    for i in 0..trials {
        let mut rng = walk.stream(i);
        let late_bit = coin.sample(&mut rng);
        let r = sample_nearest_distance(law, ell, &mut rng);
        let error = match detector {
            Detector::KnownDistance => {
                let fpt = fpt_fixed(&walk.d, r)?;
                let gamma = detection_threshold(&fpt, rate)?.gamma;
                let release = if late_bit { half } else { 0.0 };
                let cfg = WalkConfig { t_max: gamma - release, ..*walk };
                let arrived = gamma > release && sample_fpt(r, &cfg, &mut rng).is_some();
                if late_bit {
                    arrived
                } else {
                    !arrived
                }
            }
            Detector::FirstArrival | Detector::NthArrival { .. } => {
                let n = match detector {
                    Detector::NthArrival { n } => n,
                    _ => 0,
                };
                let z = match interference {
                    Some(m) => interferer_arrivals(m, half, walk, &mut rng),
                    None => 0,
                };
                if late_bit {
                    z > n
                } else {
                    let cfg = WalkConfig { t_max: half, ..*walk };
                    let signal = sample_fpt(r, &cfg, &mut rng).is_some() as u64;
                    z + signal < n + 1
                }
            }
        };
        errors += error as u64;
    }
    let (lo, hi) = wilson(errors, trials, 1.959_963_984_540_054);
    Ok(McBer { ber: errors as f64 / trials as f64, lo, hi, errors, trials })
}

/// Number of molecules of a freshly drawn interfering field that reach the
/// receiver within `t`.
pub fn interferer_arrivals<R: Rng + ?Sized>(model: &InterferenceModel, t: f64, walk: &WalkConfig, rng: &mut R) -> u64 {
    let field = sample_field(&PointFieldModel { law: model.law, region: model.region }, rng);
    let cfg = WalkConfig { d: model.d, t_max: t, ..*walk };
    field
        .points
        .iter()
        .filter(|p| {
            let r = p[0].hypot(p[1]);
            r > 0.0 && sample_fpt(r, &cfg, rng).is_some()
        })
        .count() as u64
}

/// Sample moments of simulated interference counts with normal-theory
/// 95% half-widths.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McCounts {
    pub mean: f64,
    pub var: f64,
    pub mean_half_width: f64,
    pub var_half_width: f64,
    pub trials: u64,
}

/// Simulates the number of interfering molecules arriving within `t`.
pub fn mc_interference(model: &InterferenceModel, t: f64, walk: &WalkConfig, trials: u64) -> Result<McCounts> {
    walk.validate()?;
    model.law.validate()?;
    if trials < 2 {
        return Err(Error::InvalidArgument("at least two trials are needed".into()));
    }
    let counts: Vec<f64> =
        (0..trials).map(|i| interferer_arrivals(model, t, walk, &mut walk.stream(i)) as f64).collect();
    let n = trials as f64;
    let mean = counts.iter().sum::<f64>() / n;
    let m2 = counts.iter().map(|c| (c - mean).powi(2)).sum::<f64>() / n;
    let m4 = counts.iter().map(|c| (c - mean).powi(4)).sum::<f64>() / n;
    let var = m2 * n / (n - 1.0);
    let z = 1.959_963_984_540_054;
    Ok(McCounts {
        mean,
        var,
        mean_half_width: z * (var / n).sqrt(),
        var_half_width: z * ((m4 - m2 * m2).max(0.0) / n).sqrt(),
        trials,
    })
}
