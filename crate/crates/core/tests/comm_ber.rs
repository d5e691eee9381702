use molcomm::channel::{fpt_fixed, DiffusionParams};
use molcomm::comm::{
    arrival_prob, ber_fixed_threshold, ber_known_distance, ber_mitigated, ber_with_interference, campbell_mean,
    conditional_ber, detection_threshold, first_arrival_ber, interference_moments, mc_ber, mc_interference,
    mitigated_ber, nth_arrival_ber, optimal_threshold, skip_count, Detector, InterferenceModel, ThresholdMode,
    TimingConfig,
};
use molcomm::ctrw::WalkConfig;
use molcomm::pointfield::{IntensityLaw, Region};
use molcomm::special::erfc;
use std::f64::consts::PI;

const K: f64 = 1e-10;

fn levy_pdf(t: f64, r: f64) -> f64 {
    r / (4.0 * PI * K * t.powi(3)).sqrt() * (-r * r / (4.0 * K * t)).exp()
}

fn poisson() -> IntensityLaw {
    IntensityLaw::Deterministic { lambda0: 1e10 }
}

fn model(d: DiffusionParams, mean: f64, omega: f64) -> InterferenceModel {
    InterferenceModel { law: IntensityLaw::Deterministic { lambda0: mean }, region: Region::new(omega).unwrap(), d }
}

#[test]
fn optimal_threshold_matches_direct_root() {
    let d = DiffusionParams::normal(K);
    let r = 1e-5;
    let rate = 1.0;
    let got = optimal_threshold(&fpt_fixed(&d, r).unwrap(), rate).unwrap();
    // bisection on the closed-form density
    let g = |x: f64| levy_pdf(x - 0.5, r) - levy_pdf(x, r);
    let (mut lo, mut hi) = (0.5 + 1e-9, 50.5);
    assert!(g(lo) < 0.0 && g(hi) > 0.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    assert!((got / lo - 1.0).abs() < 1e-8, "{got} vs {lo}");
}

#[test]
fn threshold_properties() {
    let d = DiffusionParams::normal(K);
    for &r in &[1e-7, 1e-6, 1e-5, 1e-4] {
        let fpt = fpt_fixed(&d, r).unwrap();
        for &rate in &[1e-3, 1e-1, 1.0, 10.0] {
            let th = detection_threshold(&fpt, rate).unwrap();
            assert!(th.gamma >= 0.5 / rate, "r={r} R={rate}");
            let best = conditional_ber(&fpt, rate, th.gamma).unwrap();
            let fixed = conditional_ber(&fpt, rate, 0.5 / rate).unwrap();
            assert!(best <= fixed * (1.0 + 1e-9), "r={r} R={rate}: {best} > {fixed}");
        }
    }
    // close transmitter and slow signalling: the crossing sits just after T_b/2
    let th = optimal_threshold(&fpt_fixed(&d, 1e-7).unwrap(), 1e-3).unwrap();
    assert!((th - 500.0) / 500.0 < 1e-6, "{th}");
    assert!(optimal_threshold(&fpt_fixed(&d, 1e-5).unwrap(), 0.0).is_err());
    let cfg = TimingConfig::new(4.0, ThresholdMode::Fixed).unwrap();
    assert_eq!(cfg.bit_period(), 0.25);
    assert!(TimingConfig::new(-1.0, ThresholdMode::OptimalPerDistance).is_err());
}

#[test]
fn ber_bounds_and_orderings() {
    let d = DiffusionParams::normal(K);
    for &rate in &[1e-4, 1e-2, 1.0, 1e2] {
        let mut prev = 0.0;
        for ell in 1..=4 {
            let b = ber_fixed_threshold(&poisson(), ell, &d, rate).unwrap();
            assert!((0.0..=0.5).contains(&b));
            assert!(b > prev, "R={rate} ell={ell}");
            prev = b;
        }
        let mut prev = 0.5;
        for &a in &[0.2, 1.0, 5.0] {
            let b = ber_fixed_threshold(&IntensityLaw::gamma_with_mean(a, 1e10), 1, &d, rate).unwrap();
            assert!(b < prev, "R={rate} a={a}");
            prev = b;
        }
        let known = ber_known_distance(&poisson(), 1, &d, rate).unwrap();
        assert!(known <= ber_fixed_threshold(&poisson(), 1, &d, rate).unwrap());
    }
    assert!(ber_fixed_threshold(&poisson(), 1, &d, 1e-9).unwrap() < 1e-3);
    assert!(ber_fixed_threshold(&poisson(), 1, &d, 1e6).unwrap() > 0.49);
}

#[test]
fn arrival_probability_matches_erfc() {
    let d = DiffusionParams::normal(K);
    for &x in &[1e-6, 1e-5, 1e-4] {
        for &t in &[1e-2, 1.0, 1e2] {
            let want = erfc(x / (4.0 * K * t).sqrt());
            let got = arrival_prob(x, &d, t).unwrap();
            assert!((got - want).abs() < 1e-8, "x={x} t={t}: {got} vs {want}");
        }
    }
    for &(a, b) in &[(1.8, 1.0), (2.0, 0.7), (1.5, 0.5)] {
        let d = DiffusionParams::new(a, b, K).unwrap();
        for &t in &[0.1, 1.0, 10.0] {
            let want = fpt_fixed(&d, 1e-5).unwrap().cdf(t).unwrap();
            let got = arrival_prob(1e-5, &d, t).unwrap();
            assert!((got - want).abs() < 1e-8, "({a},{b}) t={t}: {got} vs {want}");
        }
    }
    assert!(arrival_prob(0.0, &d, 1.0).is_err());
    assert!(arrival_prob(1e-5, &d, 0.0).is_err());
}

#[test]
fn interference_mean_properties() {
    let normal = DiffusionParams::normal(K);
    let sub = DiffusionParams::new(2.0, 0.5, K).unwrap();
    for d in [normal, sub, DiffusionParams::new(1.0, 1.0, K).unwrap()] {
        let m = model(d, 1e10, 1e-4);
        let cap = PI * 1e-8 * 1e10;
        let mut prev = 0.0;
        for &t in &[1e-2, 1.0, 1e2, 1e4] {
            let s = interference_moments(&m, t).unwrap();
            assert_eq!(s.mu_t, s.sigma2_t);
            assert!(s.mu_t > prev && s.mu_t <= cap, "{d:?} t={t}");
            let c = campbell_mean(&m, t).unwrap();
            assert!((s.mu_t / c - 1.0).abs() < 1e-5, "{d:?} t={t}: {} vs {c}", s.mu_t);
            prev = s.mu_t;
        }
        let mut prev = 0.0;
        for &omega in &[1e-6, 1e-5, 1e-4, 1e-3] {
            let mu = interference_moments(&model(d, 1e10, omega), 10.0).unwrap().mu_t;
            assert!(mu > prev, "{d:?} omega={omega}");
            prev = mu;
        }
    }
    // Cauchy jumps: the mean grows linearly in the radius once the radius is large
    let cauchy = DiffusionParams::new(1.0, 1.0, K).unwrap();
    let a = interference_moments(&model(cauchy, 1e10, 1e-2), 1.0).unwrap().mu_t;
    let b = interference_moments(&model(cauchy, 1e10, 1.0), 1.0).unwrap().mu_t;
    assert!((b / a / 100.0 - 1.0).abs() < 1e-3, "{a} {b}");
    let empty = model(normal, 0.0, 1e-4);
    assert_eq!(interference_moments(&empty, 1.0).unwrap().mu_t, 0.0);
}

#[test]
fn interference_ber_limits() {
    let d = DiffusionParams::normal(K);
    let law = IntensityLaw::gamma_with_mean(5.0, 1e10);
    for &rate in &[1e-3, 1e-1, 10.0] {
        let fixed = ber_fixed_threshold(&law, 1, &d, rate).unwrap();
        assert_eq!(ber_with_interference(&law, 1, &model(d, 0.0, 1e-4), &d, rate).unwrap(), fixed);
        assert_eq!(ber_mitigated(&law, 1, &model(d, 0.0, 1e-4), &d, rate).unwrap(), fixed);
        let heavy = ber_with_interference(&law, 1, &model(d, 1e14, 1e-3), &d, rate).unwrap();
        assert!((heavy - 0.5).abs() < 1e-12, "{heavy}");
    }
    assert!((mitigated_ber(0.1, 1e-3) - 0.1).abs() < 1e-15);
    assert!((mitigated_ber(0.1, 1e3) - 0.5).abs() < 1e-3);
    for &mu in &[0.3, 2.7, 12.2] {
        let sigma = f64::sqrt(mu);
        let n = skip_count(mu);
        let best = nth_arrival_ber(0.05, mu, sigma, n);
        for m in [n.saturating_sub(1), n + 1] {
            if m != n {
                assert!(nth_arrival_ber(0.05, mu, sigma, m) >= best);
            }
        }
    }
    assert_eq!(first_arrival_ber(0.2, 0.0), 0.2);
}

#[test]
fn monte_carlo_ber_without_interference() {
    let d = DiffusionParams::normal(K);
    let law = poisson();
    let walk = WalkConfig::new(d, 1, 1.0, 31);
    for &rate in &[1e-2, 3e-2, 1e-1, 0.3, 1.0, 3.0] {
        let want = ber_fixed_threshold(&law, 1, &d, rate).unwrap();
        let mc = mc_ber(&law, 1, None, rate, Detector::FirstArrival, &walk, 4000).unwrap();
        // the 95% interval widened to roughly 4.7 standard errors
        let slack = 0.7 * (mc.hi - mc.lo);
        assert!(mc.lo - slack <= want && want <= mc.hi + slack, "R={rate}: {want} vs {mc:?}");
        let nth = mc_ber(&law, 1, None, rate, Detector::NthArrival { n: 0 }, &walk, 4000).unwrap();
        assert_eq!(nth, mc);
    }
    assert!(mc_ber(&law, 1, None, 1.0, Detector::FirstArrival, &walk, 0).is_err());
}

#[test]
fn monte_carlo_known_distance() {
    let d = DiffusionParams::normal(K);
    let law = poisson();
    let want = ber_known_distance(&law, 1, &d, 1.0).unwrap();
    let mc = mc_ber(&law, 1, None, 1.0, Detector::KnownDistance, &WalkConfig::new(d, 1, 1.0, 32), 1000).unwrap();
    let sd = (want * (1.0 - want) / 1000.0).sqrt();
    assert!((mc.ber - want).abs() < 3.0 * sd, "{} vs {want}", mc.ber);
}

#[test]
fn monte_carlo_interference_counts() {
    let d = DiffusionParams::normal(K);
    let m = model(d, 1e10, 2e-5);
    let want = interference_moments(&m, 1.0).unwrap().mu_t;
    let mc = mc_interference(&m, 1.0, &WalkConfig::new(d, 1, 1.0, 33), 2000).unwrap();
    assert!((mc.mean - want).abs() < 1.5 * mc.mean_half_width, "mean {} vs {want}", mc.mean);
    assert!((mc.var - want).abs() < 1.5 * mc.var_half_width, "var {} vs {want}", mc.var);
}
