//! Cox point fields of transmitters and interferers in a disk.

use std::io::{self, Write};

use rand::Rng;
use rand_distr::{Distribution, Exp1, Gamma, Poisson};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hcore::{FoxH, OrderSeq, ParamSeq};
use crate::special::ln_gamma_abs;

/// Law of the random intensity λ (molecules per m²).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum IntensityLaw {
    /// λ = λ₀ almost surely: a homogeneous Poisson field.
    Deterministic { lambda0: f64 },
    /// λ ~ Gamma(shape a, scale b), mean a·b.
    Gamma { a: f64, b: f64 },
}

impl IntensityLaw {
    /// Gamma law with shape `a` and mean `mean`.
    pub fn gamma_with_mean(a: f64, mean: f64) -> Self {
        IntensityLaw::Gamma { a, b: mean / a }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            IntensityLaw::Deterministic { lambda0 } => lambda0 >= 0.0 && lambda0.is_finite(),
            IntensityLaw::Gamma { a, b } => a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite(),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!("invalid intensity law {self:?}")))
        }
    }

    pub fn mean(&self) -> f64 {
        match *self {
            IntensityLaw::Deterministic { lambda0 } => lambda0,
            IntensityLaw::Gamma { a, b } => a * b,
        }
    }

    pub fn variance(&self) -> f64 {
        match *self {
            IntensityLaw::Deterministic { .. } => 0.0,
            IntensityLaw::Gamma { a, b } => a * b * b,
        }
    }

    /// The intensity as an H-variate; `None` for a point mass.
    pub fn as_hvariate(&self) -> Option<FoxH<f64>> {
        match *self {
            IntensityLaw::Deterministic { .. } => None,
            IntensityLaw::Gamma { a, b } => {
                let k = 1.0 / (b * ln_gamma_abs(a).exp());
                FoxH::from_slices(OrderSeq::new(1, 0, 0, 1), k, 1.0 / b, &[], &[a - 1.0], &[], &[1.0]).ok()
            }
        }
    }

    /// Draws one intensity.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            IntensityLaw::Deterministic { lambda0 } => lambda0,
            IntensityLaw::Gamma { a, b } => Gamma::new(a, b).expect("validated gamma law").sample(rng),
        }
    }
}

/// Disk of radius `omega` (m) centred on the receiver.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Region {
    pub omega: f64,
}

impl Region {
    pub fn new(omega: f64) -> Result<Self> {
        if omega > 0.0 {
            Ok(Region { omega })
        } else {
            Err(Error::InvalidArgument(format!("region radius must be positive, got {omega}")))
        }
    }

    pub fn area(&self) -> f64 {
        std::f64::consts::PI * self.omega * self.omega
    }
}

/// Intensity law plus the region it is observed in.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointFieldModel {
    pub law: IntensityLaw,
    pub region: Region,
}

/// One realization of the field.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldSample {
    pub intensity_draw: f64,
    pub points: Vec<[f64; 2]>,
}

impl FieldSample {
    /// Writes `x,y` rows in metres.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "x,y")?;
        for p in &self.points {
            writeln!(w, "{:e},{:e}", p[0], p[1])?;
        }
        Ok(())
    }

    /// Distance of the ℓth nearest point, if there are at least ℓ.
    pub fn nearest(&self, ell: usize) -> Option<f64> {
        let mut d: Vec<f64> = self.points.iter().map(|p| p[0].hypot(p[1])).collect();
        if ell == 0 || d.len() < ell {
            return None;
        }
        d.select_nth_unstable_by(ell - 1, |a, b| a.total_cmp(b));
        Some(d[ell - 1])
    }
}

/// Probability of exactly `ell` points in the region: Poisson for a
/// deterministic intensity, negative binomial NB(a, b|R|/(b|R|+1)) for gamma.
pub fn count_pmf(law: &IntensityLaw, region: &Region, ell: usize) -> f64 {
    let area = region.area();
    let l = ell as f64;
    match *law {
        IntensityLaw::Deterministic { lambda0 } => {
            let mu = lambda0 * area;
            if mu == 0.0 {
                return if ell == 0 { 1.0 } else { 0.0 };
            }
            (l * mu.ln() - mu - ln_gamma_abs(l + 1.0)).exp()
        }
        IntensityLaw::Gamma { a, b } => {
            let x = b * area;
            let ln_p = x.ln() - x.ln_1p();
            let ln_q = -x.ln_1p();
            (ln_gamma_abs(l + a) - ln_gamma_abs(l + 1.0) - ln_gamma_abs(a) + l * ln_p + a * ln_q).exp()
        }
    }
}

/// Count PMF for an arbitrary H-variate intensity, by evaluating the
/// H-function representation of the mixed Poisson law at `|R|`.
pub fn count_pmf_hpath(intensity: &FoxH<f64>, region: &Region, ell: usize) -> Result<f64> {
    let OrderSeq { m, n, p, q } = intensity.order;
    let ps = &intensity.params;
    let area = region.area();
    let fact = ln_gamma_abs(ell as f64 + 1.0).exp();
    let mut b = vec![1.0 + ell as f64];
    b.extend(ps.a.iter().map(|v| 1.0 - v));
    let mut b_scale = vec![1.0];
    b_scale.extend(ps.a_scale.iter().copied());
    let fox = FoxH::new(
        OrderSeq::new(n + 1, m, q, p + 1),
        ParamSeq {
            k: ps.k / (area * fact),
            c: 1.0 / ps.c,
            a: ps.b.iter().map(|v| 1.0 - v).collect(),
            b,
            a_scale: ps.b_scale.clone(),
            b_scale,
        },
    )?;
    fox.eval(area)
}

/// Smallest count beyond which the PMF mass is below `1e-12`, at least
/// `mean + 12·sd`.
pub fn count_support(law: &IntensityLaw, region: &Region) -> usize {
    let area = region.area();
    let mean = law.mean() * area;
    let var = mean + law.variance() * area * area;
    let mut hi = (mean + 12.0 * var.sqrt()).ceil() as usize + 1;
    loop {
        let cdf: f64 = (0..=hi).map(|l| count_pmf(law, region, l)).sum();
        if 1.0 - cdf < 1e-12 || hi > 100_000_000 {
            return hi;
        }
        hi *= 2;
    }
}

/// H-variate of the distance to the ℓth nearest point of an unbounded field.
pub fn nearest_distance_law(law: &IntensityLaw, ell: usize) -> Result<FoxH<f64>> {
    if ell == 0 {
        return Err(Error::InvalidArgument("the nearest-point index starts at 1".into()));
    }
    law.validate()?;
    let fact = ln_gamma_abs(ell as f64).exp();
    let half_ell = ell as f64 - 0.5;
    match *law {
        IntensityLaw::Deterministic { lambda0 } => {
            if lambda0 <= 0.0 {
                return Err(Error::InvalidArgument("an empty field has no nearest point".into()));
            }
            let s = (lambda0 * std::f64::consts::PI).sqrt();
            FoxH::from_slices(OrderSeq::new(1, 0, 0, 1), s / fact, s, &[], &[half_ell], &[], &[0.5])
        }
        IntensityLaw::Gamma { a, b } => {
            let s = (std::f64::consts::PI * b).sqrt();
            let k = s / (ln_gamma_abs(a).exp() * fact);
            FoxH::from_slices(OrderSeq::new(1, 1, 1, 1), k, s, &[0.5 - a], &[half_ell], &[0.5], &[0.5])
        }
    }
}

/// ℓth-nearest distance law for an arbitrary H-variate intensity.
pub fn nearest_distance_hpath(intensity: &FoxH<f64>, ell: usize) -> Result<FoxH<f64>> {
    if ell == 0 {
        return Err(Error::InvalidArgument("the nearest-point index starts at 1".into()));
    }
    let OrderSeq { m, n, p, q } = intensity.order;
    let ps = &intensity.params;
    let pi = std::f64::consts::PI;
    let fact = ln_gamma_abs(ell as f64).exp();
    let mut b = vec![ell as f64 - 0.5];
    b.extend(ps.a.iter().zip(&ps.a_scale).map(|(a, aa)| 1.0 - a - 1.5 * aa));
    let mut b_scale = vec![0.5];
    b_scale.extend(ps.a_scale.iter().map(|v| 0.5 * v));
    FoxH::new(
        OrderSeq::new(n + 1, m, q, p + 1),
        ParamSeq {
            k: ps.k * pi.sqrt() / (ps.c.powf(1.5) * fact),
            c: (pi / ps.c).sqrt(),
            a: ps.b.iter().zip(&ps.b_scale).map(|(b, bb)| 1.0 - b - 1.5 * bb).collect(),
            b,
            a_scale: ps.b_scale.iter().map(|v| 0.5 * v).collect(),
            b_scale,
        },
    )
}

/// Draws λ, then `N ~ Poisson(λ|R|)` points uniform in the disk.
pub fn sample_field<R: Rng + ?Sized>(model: &PointFieldModel, rng: &mut R) -> FieldSample {
    let lambda = model.law.sample(rng);
    let mean = lambda * model.region.area();
    let n = if mean > 0.0 { Poisson::new(mean).map(|d| d.sample(rng) as usize).unwrap_or(0) } else { 0 };
    let omega = model.region.omega;
    let points = (0..n)
        .map(|_| {
            let r = omega * rng.random::<f64>().sqrt();
            let phi = std::f64::consts::TAU * rng.random::<f64>();
            [r * phi.cos(), r * phi.sin()]
        })
        .collect();
    FieldSample { intensity_draw: lambda, points }
}

/// Draws the ℓth nearest distance of an unbounded field directly: given λ,
/// `π λ r_ℓ²` is a sum of ℓ unit exponentials.
pub fn sample_nearest_distance<R: Rng + ?Sized>(law: &IntensityLaw, ell: usize, rng: &mut R) -> f64 {
    let lambda = law.sample(rng);
    let e: f64 = (0..ell).map(|_| -> f64 { Exp1.sample(rng) }).sum();
    (e / (std::f64::consts::PI * lambda)).sqrt()
}
