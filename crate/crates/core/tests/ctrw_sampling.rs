use molcomm::channel::{fpt_fixed, fpt_nearest, DiffusionParams};
use molcomm::comm::fit_log_slope;
use molcomm::ctrw::{
    estimate_network_fpt, free_msd, sample_mittag_leffler, sample_stable_jump, simulate_fpt, WalkConfig,
};
use molcomm::pointfield::IntensityLaw;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const K: f64 = 1e-10;

fn binomial_sd(p: f64, n: usize) -> f64 {
    (p * (1.0 - p) / n as f64).sqrt()
}

#[test]
fn exponential_waiting_times() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let n = 1_000_000;
    let mut xs: Vec<f64> = (0..n).map(|_| sample_mittag_leffler(1.0, 2.0, &mut rng)).collect();
    let mean = xs.iter().sum::<f64>() / n as f64;
    assert!((mean - 2.0).abs() < 0.008, "mean {mean}");
    xs.sort_by(f64::total_cmp);
    let median = xs[n / 2];
    assert!((median / (2.0 * 2f64.ln()) - 1.0).abs() < 0.01, "median {median}");
}

#[test]
fn mittag_leffler_tail() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let n = 400_000;
    let xs: Vec<f64> = (0..n).map(|_| sample_mittag_leffler(0.5, 1.0, &mut rng)).collect();
    assert!(xs.iter().all(|x| *x > 0.0 && x.is_finite()));
    let ts = [1e2, 3e2, 1e3, 3e3, 1e4];
    let sf: Vec<f64> = ts.iter().map(|&t| xs.iter().filter(|&&x| x > t).count() as f64 / n as f64).collect();
    let slope = fit_log_slope(&ts, &sf);
    assert!((slope + 0.5).abs() < 0.05, "tail slope {slope}");
    // P(T > t) ≈ t^{-β} / Γ(1 - β) with Γ(1/2) = √π
    let want = 1e2f64.powf(-0.5) / std::f64::consts::PI.sqrt();
    assert!((sf[0] / want - 1.0).abs() < 0.05, "{} vs {want}", sf[0]);
}

#[test]
fn stable_jumps() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let n = 1_000_000;
    let xs: Vec<f64> = (0..n).map(|_| sample_stable_jump(2.0, 1.0, &mut rng)).collect();
    let var = xs.iter().map(|x| x * x).sum::<f64>() / n as f64;
    assert!((var - 2.0).abs() < 0.02, "variance {var}");
    let pos = xs.iter().filter(|&&x| x > 0.0).count() as f64 / n as f64;
    assert!((pos - 0.5).abs() < 0.003, "positive fraction {pos}");

    let cauchy: Vec<f64> = (0..200_000).map(|_| sample_stable_jump(1.0, 1.0, &mut rng)).collect();
    let below = cauchy.iter().filter(|&&x| x <= 1.0).count() as f64 / cauchy.len() as f64;
    assert!((below - 0.75).abs() < 0.01, "Cauchy CDF at 1: {below}");

    let heavy: Vec<f64> = (0..200_000).map(|_| sample_stable_jump(1.5, 1.0, &mut rng)).collect();
    let pos = heavy.iter().filter(|&&x| x > 0.0).count() as f64 / heavy.len() as f64;
    assert!((pos - 0.5).abs() < 0.005, "positive fraction {pos}");
}

#[test]
fn normal_walk_matches_first_passage_law() {
    let d = DiffusionParams::normal(K);
    let r = 1e-5;
    let cfg = WalkConfig::new(d, 4000, 1.0, 7);
    let est = simulate_fpt(r, &cfg).unwrap();
    let want = fpt_fixed(&d, r).unwrap().cdf(1.0).unwrap();
    assert!((want - 0.4795).abs() < 1e-4);
    let got = est.ecdf(1.0);
    assert!((got - want).abs() < 3.0 * binomial_sd(want, 4000), "{got} vs {want}");
}

#[test]
fn step_refinement_is_consistent() {
    let d = DiffusionParams::normal(K);
    let coarse = simulate_fpt(1e-5, &WalkConfig::new(d, 4000, 3.0, 8)).unwrap();
    let fine =
        simulate_fpt(1e-5, &WalkConfig { step_fraction: 1.0 / 40.0, ..WalkConfig::new(d, 4000, 3.0, 9) }).unwrap();
    for &t in &[0.3, 1.0, 3.0] {
        let (a, b) = (coarse.ecdf(t), fine.ecdf(t));
        let sd = (binomial_sd(a, 4000).powi(2) + binomial_sd(b, 4000).powi(2)).sqrt();
        assert!((a - b).abs() < 3.0 * sd, "t={t}: {a} vs {b}");
    }
}

#[test]
fn censoring_and_determinism() {
    let d = DiffusionParams::normal(K);
    let cfg = WalkConfig::new(d, 500, 0.05, 4);
    let est = simulate_fpt(1e-5, &cfg).unwrap();
    assert_eq!(est.n_walkers(), 500);
    assert!(est.censor_count > 400);
    assert!(est.samples.iter().all(|&t| t <= 0.05));
    assert_eq!(est, simulate_fpt(1e-5, &cfg).unwrap());
    let other = simulate_fpt(1e-5, &WalkConfig { seed: 5, ..cfg }).unwrap();
    assert_ne!(est.samples, other.samples);

    let mut csv = Vec::new();
    est.write_csv(&mut csv).unwrap();
    assert!(csv.starts_with(b"fpt\n"));
}

#[test]
fn invalid_walk_settings_are_rejected() {
    let d = DiffusionParams::normal(K);
    assert!(simulate_fpt(1e-5, &WalkConfig::new(d, 0, 1.0, 1)).is_err());
    assert!(simulate_fpt(1e-5, &WalkConfig::new(d, 10, 0.0, 1)).is_err());
    assert!(simulate_fpt(-1e-5, &WalkConfig::new(d, 10, 1.0, 1)).is_err());
    let cfg = WalkConfig { step_fraction: 0.0, ..WalkConfig::new(d, 10, 1.0, 1) };
    assert!(simulate_fpt(1e-5, &cfg).is_err());
}

#[test]
fn mean_squared_displacement() {
    let times: Vec<f64> = (0..9).map(|i| 10f64.powf(-1.0 + 0.25 * i as f64)).collect();
    let normal = WalkConfig::new(DiffusionParams::normal(K), 4000, 0.0, 12);
    let msd = free_msd(&normal, 1e-7, &times);
    let slope = fit_log_slope(&times, &msd);
    assert!((slope - 1.0).abs() < 0.02, "slope {slope}");
    let coef: f64 = msd.iter().zip(&times).map(|(m, t)| m / t).sum::<f64>() / times.len() as f64;
    assert!((coef / (2.0 * K) - 1.0).abs() < 0.05, "2K estimate {coef}");

    let sub = WalkConfig::new(DiffusionParams::new(2.0, 0.8, K).unwrap(), 4000, 0.0, 13);
    let slope = fit_log_slope(&times, &free_msd(&sub, 1e-7, &times));
    assert!((slope - 0.8).abs() < 0.05, "subdiffusive slope {slope}");
}

#[test]
fn network_walks_follow_the_random_distance_law() {
    let d = DiffusionParams::normal(K);
    let n = 4000;
    let probes = [0.1, 1.0, 10.0];
    for (law, ell) in [
        (IntensityLaw::Deterministic { lambda0: 1e10 }, 1),
        (IntensityLaw::gamma_with_mean(1.0, 1e10), 1),
        (IntensityLaw::Deterministic { lambda0: 1e10 }, 3),
    ] {
        let est = estimate_network_fpt(&law, ell, &WalkConfig::new(d, n, 10.0, 21)).unwrap();
        let fpt = fpt_nearest(&d, &law, ell).unwrap();
        for &t in &probes {
            let want = fpt.cdf(t).unwrap();
            let got = est.ecdf(t);
            assert!((got - want).abs() < 3.5 * binomial_sd(want, n), "{law:?} ell={ell} t={t}: {got} vs {want}");
        }
    }
    let near =
        estimate_network_fpt(&IntensityLaw::Deterministic { lambda0: 1e10 }, 1, &WalkConfig::new(d, n, 10.0, 22))
            .unwrap();
    let far = estimate_network_fpt(&IntensityLaw::Deterministic { lambda0: 1e10 }, 5, &WalkConfig::new(d, n, 10.0, 22))
        .unwrap();
    for &t in &probes {
        assert!(far.ecdf(t) < near.ecdf(t), "t={t}");
    }
}
