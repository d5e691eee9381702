//! Preset sweeps for the published figures.

use molcomm::channel::{fpt_nearest, DiffusionParams};
use molcomm::comm::{
    ber_fixed_from, ber_known_distance_law, first_arrival_ber, fit_log_slope, interference_moments, low_rate_slope,
    mitigated_ber, InterferenceModel,
};
use molcomm::ctrw::{estimate_network_fpt, WalkConfig};
use molcomm::pointfield::{nearest_distance_law, IntensityLaw, Region};
use molcomm::Error;
use serde_json::json;

use crate::config::logspace;
use crate::table::{Cell, Table};
use crate::CliError;

pub const K: f64 = 1e-10;
pub const MEAN_INTENSITY: f64 = 1e10;
pub const OMEGA: f64 = 1e-4;
pub const T_INTERFERENCE: f64 = 10.0;
pub const SHAPES: [f64; 4] = [0.2, 0.4, 1.0, 5.0];
pub const WALKERS: usize = 20_000;

/// Monte Carlo settings a preset may take from the command line.
#[derive(Debug, Clone, Copy)]
pub struct McOptions {
    pub walkers: usize,
    pub seed: u64,
}

impl Default for McOptions {
    fn default() -> Self {
        McOptions { walkers: WALKERS, seed: 1 }
    }
}

fn normal() -> DiffusionParams {
    DiffusionParams::normal(K)
}

fn poisson() -> IntensityLaw {
    IntensityLaw::Deterministic { lambda0: MEAN_INTENSITY }
}

fn gamma(a: f64) -> IntensityLaw {
    IntensityLaw::gamma_with_mean(a, MEAN_INTENSITY)
}

fn three_regimes() -> Vec<(String, DiffusionParams)> {
    [(2.0, 1.0), (2.0, 0.8), (1.8, 1.0)]
        .iter()
        .map(|&(a, b)| (format!("alpha={a} beta={b}"), DiffusionParams { alpha: a, beta: b, k: K }))
        .collect()
}

fn shape_series() -> Vec<(String, IntensityLaw)> {
    let mut out: Vec<(String, IntensityLaw)> = SHAPES.iter().map(|&a| (format!("a={a}"), gamma(a))).collect();
    out.push(("poisson".into(), poisson()));
    out
}

pub fn reproduce(figure: u32, mc: McOptions) -> Result<Table, CliError> {
    match figure {
        3 => fpt_figure(3, shape_series().into_iter().map(|(s, l)| (s, normal(), l, 1)).collect(), mc),
        4 => fpt_figure(4, (1..=5).map(|ell| (format!("ell={ell}"), normal(), poisson(), ell)).collect(), mc),
        5 => fpt_figure(5, three_regimes().into_iter().map(|(s, d)| (s, d, gamma(5.0), 1)).collect(), mc),
        6 => figure6(),
        7 => ber_figure(7, shape_series().into_iter().map(|(s, l)| (s, normal(), l)).collect()),
        8 => ber_figure(8, three_regimes().into_iter().map(|(s, d)| (s, d, gamma(5.0))).collect()),
        9 => time_sweep(),
        10 => radius_sweep(10, &[(2.0, 1.0), (2.0, 0.5)]),
        11 => radius_sweep(11, &[(0.2, 1.0), (0.5, 1.0), (0.8, 1.0), (1.0, 1.0)]),
        12 => figure12(),
        _ => Err(CliError::Config(format!("no preset for figure {figure}; choose 3 to 12"))),
    }
}

fn fpt_figure(
    figure: u32,
    series: Vec<(String, DiffusionParams, IntensityLaw, usize)>,
    mc: McOptions,
) -> Result<Table, CliError> {
    let times = logspace(-2.0, 2.0, 17);
    let t_max = times[times.len() - 1];
    let mut table = Table::new(&format!("figure-{figure}"), &["series", "t", "cdf", "empirical"]);
    table.note("walkers", json!(mc.walkers));
    table.note("seed", json!(mc.seed));
    for (name, d, law, ell) in series {
        let fpt = fpt_nearest(&d, &law, ell)?;
        let est = if mc.walkers > 0 {
            Some(estimate_network_fpt(&law, ell, &WalkConfig::new(d, mc.walkers, t_max, mc.seed))?)
        } else {
            None
        };
        for &t in &times {
            let emp = est.as_ref().map_or(f64::NAN, |e| e.ecdf(t));
            table.push(vec![name.clone().into(), t.into(), fpt.cdf(t)?.into(), emp.into()]);
        }
    }
    Ok(table)
}

fn ber_rates() -> Vec<f64> {
    logspace(-4.0, 2.0, 13)
}

fn slope_rates() -> Vec<f64> {
    logspace(-4.0, -2.0, 9)
}

fn figure6() -> Result<Table, CliError> {
    let mut table = Table::new("figure-6", &["series", "rate", "ber_known", "ber_fixed"]);
    let d = normal();
    for ell in 1..=5 {
        let fpt = fpt_nearest(&d, &poisson(), ell)?;
        let dist = nearest_distance_law(&poisson(), ell)?;
        for rate in ber_rates() {
            let known = ber_known_distance_law(&dist, &d, rate)?;
            let fixed = ber_fixed_from(&fpt, rate)?;
            table.push(vec![format!("ell={ell}").into(), rate.into(), known.into(), fixed.into()]);
        }
    }
    Ok(table)
}

fn ber_figure(figure: u32, series: Vec<(String, DiffusionParams, IntensityLaw)>) -> Result<Table, CliError> {
    let mut table = Table::new(&format!("figure-{figure}"), &["series", "rate", "ber_fixed"]);
    let mut slopes = serde_json::Map::new();
    for (name, d, law) in series {
        let fpt = fpt_nearest(&d, &law, 1)?;
        for rate in ber_rates() {
            table.push(vec![name.clone().into(), rate.into(), ber_fixed_from(&fpt, rate)?.into()]);
        }
        let xs = slope_rates();
        let ys = xs.iter().map(|&r| ber_fixed_from(&fpt, r)).collect::<Result<Vec<_>, _>>()?;
        let predicted = low_rate_slope(&nearest_distance_law(&law, 1)?, &d);
        slopes.insert(name, json!({ "fitted": fit_log_slope(&xs, &ys), "asymptotic": predicted }));
    }
    table.note("low_rate_slopes", serde_json::Value::Object(slopes));
    Ok(table)
}

fn interference_model(d: DiffusionParams, mean: f64, omega: f64) -> Result<InterferenceModel, CliError> {
    Ok(InterferenceModel { law: IntensityLaw::Deterministic { lambda0: mean }, region: Region::new(omega)?, d })
}

fn time_sweep() -> Result<Table, CliError> {
    let mut table = Table::new("figure-9", &["series", "T", "mu", "var"]);
    for &(a, b) in &[(2.0, 1.0), (2.0, 0.5)] {
        let model = interference_model(DiffusionParams::new(a, b, K)?, MEAN_INTENSITY, OMEGA)?;
        for t in logspace(-2.0, 8.0, 21) {
            let s = interference_moments(&model, t)?;
            table.push(vec![format!("alpha={a} beta={b}").into(), t.into(), s.mu_t.into(), s.sigma2_t.into()]);
        }
    }
    table.note("max_count", json!(std::f64::consts::PI * OMEGA * OMEGA * MEAN_INTENSITY));
    Ok(table)
}

fn radius_sweep(figure: u32, cases: &[(f64, f64)]) -> Result<Table, CliError> {
    let mut table = Table::new(&format!("figure-{figure}"), &["series", "omega", "mu", "var"]);
    let mut skipped = Vec::new();
    for &(a, b) in cases {
        let d = match DiffusionParams::new(a, b, K) {
            Ok(d) => d,
            Err(e @ Error::UnsupportedRegime { .. }) => {
                eprintln!("warning: skipping alpha={a} beta={b}: {e}");
                skipped.push(json!({ "alpha": a, "beta": b, "reason": e.to_string() }));
                continue;
            }
            Err(e) => return Err(e.into()),
        };
        for omega in logspace(-6.0, -1.0, 21) {
            let s = interference_moments(&interference_model(d, MEAN_INTENSITY, omega)?, T_INTERFERENCE)?;
            table.push(vec![format!("alpha={a} beta={b}").into(), omega.into(), s.mu_t.into(), s.sigma2_t.into()]);
        }
    }
    table.note("skipped", json!(skipped));
    Ok(table)
}

fn figure12() -> Result<Table, CliError> {
    let mut table =
        Table::new("figure-12", &["series", "rate", "mu", "ber_fixed", "ber_interference", "ber_mitigated"]);
    let d = normal();
    let fpt = fpt_nearest(&d, &gamma(5.0), 1)?;
    for &mean in &[1e5, 1e6] {
        let model = interference_model(d, mean, OMEGA)?;
        for rate in ber_rates() {
            let fixed = ber_fixed_from(&fpt, rate)?;
            let s = interference_moments(&model, 0.5 / rate)?;
            let row: Vec<Cell> = vec![
                format!("interferers={mean:e}").into(),
                rate.into(),
                s.mu_t.into(),
                fixed.into(),
                first_arrival_ber(fixed, s.mu_t).into(),
                mitigated_ber(fixed, s.sigma2_t.sqrt()).into(),
            ];
            table.push(row);
        }
    }
    Ok(table)
}
