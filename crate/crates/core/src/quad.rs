//! Quadrature rules: adaptive Gauss–Kronrod and fixed Gauss–Legendre.

use crate::scalar::Real;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] =
    [0.129_484_966_168_869_7, 0.279_705_391_489_276_7, 0.381_830_050_505_118_9, 0.417_959_183_673_469_4];

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct Integral<T> {
    pub value: T,
    pub error: T,
    pub intervals: usize,
}

fn gk15<T: Real, F: FnMut(T) -> T>(f: &mut F, a: T, b: T) -> (T, T) {
    let center = (a + b) * T::lit(0.5);
    let half = (b - a) * T::lit(0.5);
    let fc = f(center);
    let mut kronrod = fc * T::lit(WGK[7]);
    let mut gauss = fc * T::lit(WG[3]);
    for j in 0..7 {
        let dx = half * T::lit(XGK[j]);
        let s = f(center - dx) + f(center + dx);
        kronrod = kronrod + s * T::lit(WGK[j]);
        if j % 2 == 1 {
            gauss = gauss + s * T::lit(WG[j / 2]);
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

/// Adaptive Gauss–Kronrod (7/15) integration of `f` over `[a, b]`.
///
/// Bisects the interval with the largest error estimate until the total
/// error falls below `max(abs_tol, rel_tol·|I|)` or `max_intervals` is hit.
pub fn integrate<T: Real, F: FnMut(T) -> T>(
    mut f: F,
    a: T,
    b: T,
    abs_tol: T,
    rel_tol: T,
    max_intervals: usize,
) -> Integral<T> {
    let (v, e) = gk15(&mut f, a, b);
    let mut parts = vec![(a, b, v, e)];
    loop {
        let (value, error) = parts.iter().fold((T::zero(), T::zero()), |(s, er), p| (s + p.2, er + p.3));
        if error <= abs_tol.max(rel_tol * value.abs()) || parts.len() >= max_intervals {
            return Integral { value, error, intervals: parts.len() };
        }
        let worst = parts
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.partial_cmp(&y.1 .3).unwrap_or(std::cmp::Ordering::Equal))
            .map(|(i, _)| i)
            .unwrap_or(0);
        let (lo, hi, _, _) = parts.swap_remove(worst);
        let mid = (lo + hi) * T::lit(0.5);
        if mid <= lo || mid >= hi {
            // interval exhausted at machine resolution
            return Integral { value, error, intervals: parts.len() + 1 };
        }
        let (v1, e1) = gk15(&mut f, lo, mid);
        let (v2, e2) = gk15(&mut f, mid, hi);
        parts.push((lo, mid, v1, e1));
        parts.push((mid, hi, v2, e2));
    }
}

/// Integrates `f(x)` over `[x_lo, x_hi]` (both positive) in the variable
/// `u = ln x`, which suits densities spread over several decades.
pub fn integrate_log<T: Real, F: FnMut(T) -> T>(mut f: F, x_lo: T, x_hi: T, abs_tol: T, rel_tol: T) -> Integral<T> {
    integrate(
        |u: T| {
            let x = u.exp();
            f(x) * x
        },
        x_lo.ln(),
        x_hi.ln(),
        abs_tol,
        rel_tol,
        2000,
    )
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre<T: Real>(n: usize) -> Vec<(T, T)> {
    let mut out = Vec::with_capacity(n);
    let nf = n as f64;
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 0 {
                1.0
            } else if n == 1 {
                x
            } else {
                p1
            };
            let pn1 = if n == 1 { 1.0 } else { p0 };
            dp = nf * (x * pn - pn1) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out.push((T::lit(x), T::lit(w)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kronrod_polynomial_and_smooth() {
        let r = integrate(|x: f64| x.powi(5) - 2.0 * x, 0.0, 2.0, 1e-14, 1e-14, 50);
        assert!((r.value - (64.0 / 6.0 - 4.0)).abs() < 1e-12);
        let r = integrate(|x: f64| (-x * x).exp(), -10.0, 10.0, 1e-14, 1e-13, 200);
        assert!((r.value - std::f64::consts::PI.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn log_grid_handles_decades() {
        // ∫_{1e-8}^{1e8} 1/(1+x)^2 dx
        let r = integrate_log(|x: f64| 1.0 / ((1.0 + x) * (1.0 + x)), 1e-8, 1e8, 1e-14, 1e-12);
        let exact = 1.0 / (1.0 + 1e-8) - 1.0 / (1.0 + 1e8);
        assert!((r.value - exact).abs() < 1e-10);
    }

    #[test]
    fn legendre_rule_is_exact_for_polynomials() {
        let rule = gauss_legendre::<f64>(64);
        let s: f64 = rule.iter().map(|&(x, w)| w * x.powi(126)).sum();
        assert!((s - 2.0 / 127.0).abs() < 1e-13);
        let total: f64 = rule.iter().map(|&(_, w)| w).sum();
        assert!((total - 2.0).abs() < 1e-13);
        let small = gauss_legendre::<f64>(3);
        assert!((small[0].0.abs() - (0.6f64).sqrt()).abs() < 1e-14);
    }
}
