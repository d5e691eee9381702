//! The (α,β)-anomalous diffusion channel: regimes, propagator and
//! first-passage-time laws.

use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hcore::{Evaluator, FoxH, OrderSeq, ParamSeq};
use crate::pointfield::{nearest_distance_law, IntensityLaw};
use crate::special::gamma;

/// Diffusion exponents and coefficient: `0 < α ≤ 2`, `0 < β ≤ 1`, `α ≥ β`,
/// `K > 0` in m^α/s^β.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiffusionParams {
    pub alpha: f64,
    pub beta: f64,
    #[serde(rename = "K")]
    pub k: f64,
}

impl DiffusionParams {
    pub fn new(alpha: f64, beta: f64, k: f64) -> Result<Self> {
        let d = DiffusionParams { alpha, beta, k };
        d.validate()?;
        Ok(d)
    }

    pub fn normal(k: f64) -> Self {
        DiffusionParams { alpha: 2.0, beta: 1.0, k }
    }

    pub fn validate(&self) -> Result<()> {
        let DiffusionParams { alpha, beta, k } = *self;
        if !(alpha > 0.0 && alpha <= 2.0) {
            return Err(Error::InvalidArgument(format!("alpha must lie in (0, 2], got {alpha}")));
        }
        if !(beta > 0.0 && beta <= 1.0) {
            return Err(Error::InvalidArgument(format!("beta must lie in (0, 1], got {beta}")));
        }
        if !(k > 0.0) || !k.is_finite() {
            return Err(Error::InvalidArgument(format!("K must be positive, got {k}")));
        }
        if alpha < beta {
            return Err(Error::UnsupportedRegime { alpha, beta });
        }
        Ok(())
    }

    /// Diffusion exponent 2β/α of the mean squared displacement.
    pub fn exponent(&self) -> f64 {
        2.0 * self.beta / self.alpha
    }
}

/// Whether the mean squared displacement grows slower, equal to, or faster
/// than linearly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Dispersion {
    Subdiffusion,
    Normal,
    Superdiffusion,
}

/// Classification of a parameter pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Regime {
    pub dispersion: Dispersion,
    /// α = 2, β = 1.
    pub standard: bool,
    /// β = 1, α < 2.
    pub space_fractional: bool,
    /// α = 2, β < 1.
    pub time_fractional: bool,
    /// α = β.
    pub neutral: bool,
}

impl Regime {
    pub fn labels(&self) -> Vec<&'static str> {
        let mut out = vec![match self.dispersion {
            Dispersion::Subdiffusion => "subdiffusion",
            Dispersion::Normal => "normal",
            Dispersion::Superdiffusion => "superdiffusion",
        }];
        for (flag, name) in [
            (self.standard, "standard"),
            (self.space_fractional, "space-fractional"),
            (self.time_fractional, "time-fractional"),
            (self.neutral, "neutral"),
        ] {
            if flag {
                out.push(name);
            }
        }
        out
    }
}

pub fn classify(d: &DiffusionParams) -> Regime {
    let e = d.exponent();
    let dispersion = if (e - 1.0).abs() < 1e-12 {
        Dispersion::Normal
    } else if e < 1.0 {
        Dispersion::Subdiffusion
    } else {
        Dispersion::Superdiffusion
    };
    Regime {
        dispersion,
        standard: d.alpha == 2.0 && d.beta == 1.0,
        space_fractional: d.beta == 1.0 && d.alpha < 2.0,
        time_fractional: d.alpha == 2.0 && d.beta < 1.0,
        neutral: d.alpha == d.beta,
    }
}

/// Fundamental solution `w(x, t)` of the space-time fractional diffusion
/// equation started from `δ(x)`.
///
/// At `x = 0` the value is the continuous limit for `α = 2`; for `α < 2`
/// the `1/|x|` prefactor makes `x = 0` a domain error.
pub fn propagator(d: &DiffusionParams, x: f64, t: f64) -> Result<f64> {
    d.validate()?;
    if !(t > 0.0) {
        return Err(Error::InvalidArgument(format!("time must be positive, got {t}")));
    }
    let DiffusionParams { alpha, beta, k } = *d;
    let scale = k.powf(1.0 / alpha) * t.powf(beta / alpha);
    if x == 0.0 {
        if alpha == 2.0 {
            return Ok(1.0 / (2.0 * scale * gamma(1.0 - beta / 2.0)));
        }
        return Err(Error::InvalidArgument("the propagator is singular at x = 0 for alpha < 2".into()));
    }
    let fox = FoxH::from_slices(
        OrderSeq::new(2, 1, 3, 3),
        1.0,
        1.0,
        &[1.0, 1.0, 1.0],
        &[1.0, 1.0, 1.0],
        &[1.0 / alpha, beta / alpha, 0.5],
        &[1.0, 1.0 / alpha, 0.5],
    )?;
    let ax = x.abs();
    Ok(fox.eval(ax / scale)? / (alpha * ax))
}

/// Where the transmitter of a first-passage law sits.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FptSource {
    FixedDistance {
        r: f64,
    },
    NearestTn {
        law: IntensityLaw,
        ell: usize,
    },
    /// A caller-supplied distance law.
    DistanceLaw,
}

/// First-passage time as an H-variate.
#[derive(Debug, Clone)]
pub struct FptLaw {
    pub d: DiffusionParams,
    pub source: FptSource,
    pub h_rep: FoxH<f64>,
    eval: Evaluator<f64>,
}

/// One row of [`FptLaw::tabulate`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FptRow {
    pub t: f64,
    pub pdf: f64,
    pub cdf: f64,
}

impl FptLaw {
    fn build(d: DiffusionParams, source: FptSource, h_rep: FoxH<f64>) -> Result<Self> {
        let eval = h_rep.evaluator()?;
        Ok(FptLaw { d, source, h_rep, eval })
    }

    pub fn pdf(&self, t: f64) -> Result<f64> {
        if t <= 0.0 {
            return Ok(0.0);
        }
        self.eval.pdf(t)
    }

    pub fn cdf(&self, t: f64) -> Result<f64> {
        self.eval.cdf(t)
    }

    pub fn sf(&self, t: f64) -> Result<f64> {
        self.eval.sf(t)
    }

    pub fn evaluator(&self) -> &Evaluator<f64> {
        &self.eval
    }

    pub fn tabulate(&self, times: &[f64]) -> Result<Vec<FptRow>> {
        times.iter().map(|&t| Ok(FptRow { t, pdf: self.pdf(t)?, cdf: self.cdf(t)? })).collect()
    }

    pub fn write_csv<W: Write>(&self, rows: &[FptRow], mut w: W) -> io::Result<()> {
        writeln!(w, "t,pdf,cdf")?;
        for r in rows {
            writeln!(w, "{:e},{:e},{:e}", r.t, r.pdf, r.cdf)?;
        }
        Ok(())
    }
}

/// The fixed-distance first-passage sequence before scaling by `r^{α/β}/K^{1/β}`.
fn base_fpt_sequence(d: &DiffusionParams) -> Result<FoxH<f64>> {
    let DiffusionParams { alpha, beta, .. } = *d;
    let (ab, ib, h) = (alpha / beta, 1.0 / beta, alpha / (2.0 * beta));
    FoxH::from_slices(
        OrderSeq::new(1, 2, 3, 3),
        2.0 / alpha,
        1.0,
        &[-ab, -ib, -h],
        &[-ib, -1.0, -h],
        &[ab, ib, h],
        &[ib, 1.0, h],
    )
}

/// First-passage time to distance `r` from the origin.
pub fn fpt_fixed(d: &DiffusionParams, r: f64) -> Result<FptLaw> {
    d.validate()?;
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::InvalidArgument(format!("distance must be positive, got {r}")));
    }
    let scale = r.powf(d.alpha / d.beta) / d.k.powf(1.0 / d.beta);
    FptLaw::build(*d, FptSource::FixedDistance { r }, base_fpt_sequence(d)?.scaled(scale))
}

/// First-passage time when the distance is itself an H-variate.
pub fn fpt_random(d: &DiffusionParams, distance_law: &FoxH<f64>) -> Result<FptLaw> {
    let h = fpt_random_sequence(d, distance_law)?;
    FptLaw::build(*d, FptSource::DistanceLaw, h)
}

/// First-passage time from the ℓth nearest transmitter of a field.
pub fn fpt_nearest(d: &DiffusionParams, law: &IntensityLaw, ell: usize) -> Result<FptLaw> {
    let dist = nearest_distance_law(law, ell)?;
    let h = fpt_random_sequence(d, &dist)?;
    FptLaw::build(*d, FptSource::NearestTn { law: *law, ell }, h)
}

fn fpt_random_sequence(d: &DiffusionParams, dist: &FoxH<f64>) -> Result<FoxH<f64>> {
    d.validate()?;
    let DiffusionParams { alpha, beta, k } = *d;
    let OrderSeq { m, n, p, q } = dist.order;
    let pl = &dist.params;
    let ab = alpha / beta;
    let h = alpha / (2.0 * beta);
    let shift = 1.0 - ab;

    let mut a = vec![-ab, -1.0 / beta];
    a.extend(pl.a.iter().zip(&pl.a_scale).map(|(a, aa)| a + shift * aa));
    a.push(-h);
    let mut a_scale = vec![ab, 1.0 / beta];
    a_scale.extend(pl.a_scale.iter().map(|v| ab * v));
    a_scale.push(h);

    let mut b = vec![-1.0 / beta];
    b.extend(pl.b.iter().zip(&pl.b_scale).map(|(b, bb)| b + shift * bb));
    b.extend([-1.0, -h]);
    let mut b_scale = vec![1.0 / beta];
    b_scale.extend(pl.b_scale.iter().map(|v| ab * v));
    b_scale.extend([1.0, h]);

    let seq = FoxH::new(
        OrderSeq::new(m + 1, n + 2, p + 3, q + 3),
        ParamSeq { k: 2.0 * pl.k / (alpha * pl.c.powf(1.0 - ab)), c: pl.c.powf(ab), a, b, a_scale, b_scale },
    )?;
    Ok(seq.scaled(1.0 / k.powf(1.0 / beta)))
}

/// The normal-diffusion form of [`fpt_random`], order `(m, n+1, p+1, q+1)`.
pub fn fpt_random_normal(k: f64, dist: &FoxH<f64>) -> Result<FoxH<f64>> {
    let OrderSeq { m, n, p, q } = dist.order;
    let pl = &dist.params;
    let mut a = vec![-2.0];
    a.extend(pl.a.iter().zip(&pl.a_scale).map(|(a, aa)| a - aa));
    let mut a_scale = vec![2.0];
    a_scale.extend(pl.a_scale.iter().map(|v| 2.0 * v));
    let mut b: Vec<f64> = pl.b.iter().zip(&pl.b_scale).map(|(b, bb)| b - bb).collect();
    b.push(-1.0);
    let mut b_scale: Vec<f64> = pl.b_scale.iter().map(|v| 2.0 * v).collect();
    b_scale.push(1.0);
    let seq = FoxH::new(
        OrderSeq::new(m, n + 1, p + 1, q + 1),
        ParamSeq { k: pl.k * pl.c, c: pl.c * pl.c, a, b, a_scale, b_scale },
    )?;
    Ok(seq.scaled(1.0 / k))
}
