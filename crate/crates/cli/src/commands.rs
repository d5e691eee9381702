//! Sweep commands.

use molcomm::channel::{classify, fpt_nearest};
use molcomm::comm::{
    ber_fixed_from, ber_known_distance_law, campbell_mean, first_arrival_ber, interference_moments, mitigated_ber,
    InterferenceModel,
};
use molcomm::ctrw::{estimate_network_fpt, WalkConfig};
use molcomm::pointfield::{nearest_distance_law, IntensityLaw};
use serde_json::json;

use crate::config::{check_grid, logspace, Settings};
use crate::table::Table;
use crate::CliError;

fn describe(s: &Settings, t: &mut Table) {
    t.note("diffusion", json!(s.d));
    t.note("regime", json!(classify(&s.d).labels()));
    t.note("field", json!(s.law));
    t.note("ell", json!(s.ell));
}

pub fn fpt_cdf(s: &Settings) -> Result<Table, CliError> {
    let times = s.times.clone().unwrap_or_else(|| logspace(-3.0, 3.0, 25));
    check_grid("time", &times)?;
    let law = fpt_nearest(&s.d, &s.law, s.ell)?;
    let mut t = Table::new("fpt-cdf", &["t", "pdf", "cdf"]);
    describe(s, &mut t);
    for row in law.tabulate(&times)? {
        t.push(vec![row.t.into(), row.pdf.into(), row.cdf.into()]);
    }
    Ok(t)
}

pub fn ber_curve(s: &Settings) -> Result<Table, CliError> {
    let rates = s.rates.clone().unwrap_or_else(|| logspace(-4.0, 2.0, 13));
    check_grid("rate", &rates)?;
    let fpt = fpt_nearest(&s.d, &s.law, s.ell)?;
    let dist = nearest_distance_law(&s.law, s.ell)?;
    let model = s.interferers.map(|mean| InterferenceModel {
        law: IntensityLaw::Deterministic { lambda0: mean },
        region: s.region,
        d: s.d,
    });
    let mut columns = vec!["rate", "ber_fixed"];
    if !s.fixed_threshold {
        columns.push("ber_known");
    }
    if model.is_some() {
        columns.extend(["mu", "ber_interference", "ber_mitigated"]);
    }
    let mut t = Table::new("ber-curve", &columns);
    describe(s, &mut t);
    for &rate in &rates {
        let fixed = ber_fixed_from(&fpt, rate)?;
        let mut row = vec![rate.into(), fixed.into()];
        if !s.fixed_threshold {
            row.push(ber_known_distance_law(&dist, &s.d, rate)?.into());
        }
        if let Some(m) = &model {
            let stats = interference_moments(m, 0.5 / rate)?;
            row.push(stats.mu_t.into());
            row.push(first_arrival_ber(fixed, stats.mu_t).into());
            row.push(mitigated_ber(fixed, stats.sigma2_t.sqrt()).into());
        }
        t.push(row);
    }
    Ok(t)
}

pub fn interference(s: &Settings) -> Result<Table, CliError> {
    let times = s.times.clone().unwrap_or_else(|| logspace(-2.0, 8.0, 21));
    check_grid("time", &times)?;
    let model = InterferenceModel { law: s.law, region: s.region, d: s.d };
    let mut t = Table::new("interference", &["T", "mu", "var", "campbell"]);
    t.note("diffusion", json!(s.d));
    t.note("interferers", json!(s.law));
    t.note("omega", json!(s.region.omega));
    t.note("max_count", json!(s.region.area() * s.law.mean()));
    for &time in &times {
        let stats = interference_moments(&model, time)?;
        let campbell = campbell_mean(&model, time)?;
        t.push(vec![time.into(), stats.mu_t.into(), stats.sigma2_t.into(), campbell.into()]);
    }
    Ok(t)
}

pub fn mc_validate(s: &Settings) -> Result<Table, CliError> {
    let times = s.times.clone().unwrap_or_else(|| logspace(-2.0, 2.0, 10));
    check_grid("time", &times)?;
    let t_max = times.iter().cloned().fold(0.0, f64::max);
    let cfg = WalkConfig::new(s.d, s.walkers, t_max, s.seed);
    let est = estimate_network_fpt(&s.law, s.ell, &cfg)?;
    let law = fpt_nearest(&s.d, &s.law, s.ell)?;
    let mut t = Table::new("mc-validate", &["t", "analytic", "empirical", "stderr"]);
    describe(s, &mut t);
    t.note("walkers", json!(s.walkers));
    t.note("seed", json!(s.seed));
    let mut worst: f64 = 0.0;
    for (time, emp, se) in est.cdf_table(&times) {
        let an = law.cdf(time)?;
        let sd = (an * (1.0 - an) / est.n_walkers() as f64).sqrt();
        if sd > 0.0 {
            worst = worst.max((emp - an).abs() / sd);
        }
        t.push(vec![time.into(), an.into(), emp.into(), se.into()]);
    }
    t.note("max_abs_z", json!(worst));
    t.note("within_3_sigma", json!(worst <= 3.0));
    Ok(t)
}
