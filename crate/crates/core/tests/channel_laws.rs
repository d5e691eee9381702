use molcomm::channel::{self, classify, fpt_fixed, fpt_nearest, fpt_random, propagator, DiffusionParams};
use molcomm::hcore::validate_density;
use molcomm::pointfield::{nearest_distance_law, IntensityLaw};
use molcomm::quad::{integrate, integrate_log};
use molcomm::special::erfc;
use std::f64::consts::PI;

const K: f64 = 1e-10;

fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64)).collect()
}

fn levy_pdf(t: f64, r: f64) -> f64 {
    r / (4.0 * PI * K * t.powi(3)).sqrt() * (-r * r / (4.0 * K * t)).exp()
}

/// Density of the ℓth nearest distance, from the gamma-mixed Erlang law of πλr².
fn distance_pdf(law: &IntensityLaw, ell: usize, r: f64) -> f64 {
    let lg = |x: f64| statrs::function::gamma::ln_gamma(x);
    match *law {
        IntensityLaw::Deterministic { lambda0 } => {
            let u = lambda0 * PI * r * r;
            2.0 * (ell as f64 * u.ln() - u - lg(ell as f64)).exp() / r
        }
        IntensityLaw::Gamma { a, b } => {
            // πb r² ~ BetaPrime(ℓ, a)
            let u = PI * b * r * r;
            let l = ell as f64;
            let ln_f = (l - 1.0) * u.ln() - (l + a) * u.ln_1p() - (lg(l) + lg(a) - lg(l + a));
            2.0 * u * ln_f.exp() / r
        }
    }
}

fn mixture(pdf_fixed: impl Fn(f64) -> f64, law: &IntensityLaw, ell: usize) -> f64 {
    let scale = 1.0 / (PI * law.mean()).sqrt();
    integrate_log(|r| pdf_fixed(r) * distance_pdf(law, ell, r), scale * 1e-7, scale * 1e7, 1e-300, 1e-10).value
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

#[test]
fn fixed_distance_normal_diffusion() {
    let d = DiffusionParams::normal(K);
    let law = fpt_fixed(&d, 1e-5).unwrap();
    assert!((law.cdf(1.0).unwrap() - 0.479_500_122_186_953_5).abs() < 1e-12);
    for t in log_grid(1e-3, 1e5, 25) {
        let want = erfc(1e-5 / (4.0 * K * t).sqrt());
        assert!((law.cdf(t).unwrap() - want).abs() < 1e-10, "t={t}");
        let p = levy_pdf(t, 1e-5);
        if p > 1e-250 {
            assert!(rel(law.pdf(t).unwrap(), p) < 1e-8, "pdf t={t}");
        }
    }
    assert!(law.cdf(1e-9).unwrap() < 1e-12);
    // mode r²/(6K) = 1/6 s
    let mode = 1.0 / 6.0;
    let h = 1e-4;
    assert!(law.pdf(mode - h).unwrap() < law.pdf(mode).unwrap());
    assert!(law.pdf(mode + h).unwrap() < law.pdf(mode).unwrap());
}

#[test]
fn propagator_shape() {
    let d = DiffusionParams::normal(K);
    assert!((propagator(&d, 1e-5, 1.0).unwrap() - 21_969.564_473_386_1).abs() < 1e-6);
    for &(a, b) in &[(2.0, 1.0), (1.8, 1.0), (2.0, 0.8), (1.5, 0.75)] {
        let d = DiffusionParams::new(a, b, K).unwrap();
        for &t in &[0.1, 1.0, 10.0] {
            let x = 3e-6;
            let (w1, w2) = (propagator(&d, x, t).unwrap(), propagator(&d, -x, t).unwrap());
            assert_eq!(w1, w2);
            let scale = K.powf(1.0 / a) * t.powf(b / a);
            let half = integrate_log(|x| propagator(&d, x, t).unwrap(), scale * 1e-9, scale * 1e9, 1e-300, 1e-9).value;
            assert!((2.0 * half - 1.0).abs() < 1e-5, "({a},{b}) t={t}: mass {}", 2.0 * half);
        }
    }
}

#[test]
fn mixture_consistency_normal_diffusion() {
    let d = DiffusionParams::normal(K);
    let mut laws: Vec<(IntensityLaw, usize)> =
        (1..=5).map(|l| (IntensityLaw::Deterministic { lambda0: 1e10 }, l)).collect();
    for a in [0.2, 1.0, 5.0] {
        laws.push((IntensityLaw::gamma_with_mean(a, 1e10), 1));
    }
    for (law, ell) in laws {
        let fpt = fpt_nearest(&d, &law, ell).unwrap();
        for t in log_grid(1e-2, 1e3, 20) {
            let want = mixture(|r| levy_pdf(t, r), &law, ell);
            let got = fpt.pdf(t).unwrap();
            assert!(rel(got, want) < 1e-4, "{law:?} ell={ell} t={t}: {got} vs {want}");
        }
    }
}

#[test]
fn mixture_consistency_anomalous() {
    for &(a, b) in &[(2.0, 0.8), (1.8, 1.0)] {
        let d = DiffusionParams::new(a, b, K).unwrap();
        for law in [IntensityLaw::Deterministic { lambda0: 1e10 }, IntensityLaw::gamma_with_mean(1.0, 1e10)] {
            let fpt = fpt_nearest(&d, &law, 2).unwrap();
            for t in log_grid(1e-2, 1e3, 8) {
                let want = mixture(|r| fpt_fixed(&d, r).unwrap().pdf(t).unwrap(), &law, 2);
                let got = fpt.pdf(t).unwrap();
                assert!(rel(got, want) < 1e-4, "({a},{b}) {law:?} t={t}: {got} vs {want}");
            }
        }
    }
}

#[test]
fn poisson_nearest_cdf_matches_quadrature() {
    let d = DiffusionParams::normal(K);
    let law = IntensityLaw::Deterministic { lambda0: 1e10 };
    let fpt = fpt_nearest(&d, &law, 1).unwrap();
    for &t in &[1e-2, 1.0, 1e2] {
        let oracle = integrate(
            |r: f64| erfc(r / (4.0 * K * t).sqrt()) * 2.0 * 1e10 * PI * r * (-1e10 * PI * r * r).exp(),
            0.0,
            1e-3,
            1e-15,
            1e-12,
            500,
        )
        .value;
        assert!(rel(fpt.cdf(t).unwrap(), oracle) < 1e-8, "t={t}");
    }
}

#[test]
fn normal_reduction_agrees_with_general_sequence() {
    let law = IntensityLaw::gamma_with_mean(0.4, 1e10);
    let dist = nearest_distance_law(&law, 3).unwrap();
    let general = fpt_random(&DiffusionParams::normal(K), &dist).unwrap();
    let reduced = channel::fpt_random_normal(K, &dist).unwrap();
    for t in log_grid(1e-2, 1e3, 12) {
        assert!(rel(reduced.eval(t).unwrap(), general.pdf(t).unwrap()) < 1e-8, "t={t}");
    }
}

#[test]
fn laws_are_densities() {
    for &(a, b) in &[(2.0, 1.0), (2.0, 0.8), (2.0, 0.5), (1.8, 1.0), (1.5, 0.9), (1.0, 1.0)] {
        let d = DiffusionParams::new(a, b, K).unwrap();
        let rep = validate_density(&fpt_fixed(&d, 1e-5).unwrap().h_rep);
        assert!(rep.valid, "fixed ({a},{b}): {:?}", rep.violations);
        for law in [IntensityLaw::Deterministic { lambda0: 1e10 }, IntensityLaw::gamma_with_mean(0.4, 1e10)] {
            let rep = validate_density(&fpt_nearest(&d, &law, 2).unwrap().h_rep);
            assert!(rep.valid, "random ({a},{b}) {law:?}: {:?}", rep.violations);
        }
    }
}

#[test]
fn scale_covariance() {
    let d = DiffusionParams::new(2.0, 0.8, K).unwrap();
    let (r, lam) = (1e-5, 3.0);
    let near = fpt_fixed(&d, r).unwrap();
    let far = fpt_fixed(&d, lam * r).unwrap();
    for t in log_grid(1e-2, 1e3, 10) {
        let lhs = far.cdf(t).unwrap();
        let rhs = near.cdf(t * lam.powf(-d.alpha / d.beta)).unwrap();
        assert!((lhs - rhs).abs() < 1e-10, "t={t}");
    }
}

#[test]
fn orderings() {
    let d = DiffusionParams::normal(K);
    let law = IntensityLaw::Deterministic { lambda0: 1e10 };
    let first = fpt_nearest(&d, &law, 1).unwrap();
    let second = fpt_nearest(&d, &law, 2).unwrap();
    let sub = fpt_nearest(&DiffusionParams::new(2.0, 0.8, K).unwrap(), &law, 1).unwrap();
    for t in log_grid(1e-3, 1e3, 13) {
        assert!(first.cdf(t).unwrap() >= second.cdf(t).unwrap(), "t={t}");
    }
    for t in log_grid(1e1, 1e4, 6) {
        assert!(sub.cdf(t).unwrap() < first.cdf(t).unwrap(), "t={t}");
    }
    assert!(classify(&d).standard);
}
