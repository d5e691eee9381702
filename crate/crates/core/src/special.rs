//! Gamma-family special functions over real and complex arguments.

use num_complex::Complex;

use crate::scalar::Real;

/// B_{2k} / (2k (2k-1)) for k = 1..=10, the Stirling series coefficients.
const STIRLING: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
    43867.0 / 244188.0,
    -174611.0 / 125400.0,
];

/// Principal-branch-equivalent complex log-gamma.
///
/// The imaginary part is only defined modulo 2π; callers exponentiate the
/// result, so the branch is irrelevant. Returns `+inf` real part at poles.
pub fn ln_gamma<T: Real>(z: Complex<T>) -> Complex<T> {
    let half = T::lit(0.5);
    if z.re < half {
        // reflection: lnΓ(z) = ln π − ln sin(πz) − lnΓ(1−z)
        if z.im == T::zero() && z.re == z.re.floor() {
            return Complex::new(T::infinity(), T::zero());
        }
        let one = Complex::new(T::one(), T::zero());
        return Complex::new(T::PI().ln(), T::zero()) - ln_sin_pi(z) - ln_gamma(one - z);
    }
    let min_abs = T::lit(10.0);
    let mut w = z;
    let mut shift = Complex::new(T::one(), T::zero());
    let mut shifted = false;
    while w.norm() < min_abs {
        shift = shift * w;
        w = w + T::one();
        shifted = true;
    }
    let mut out = stirling(w);
    if shifted {
        out = out - shift.ln();
    }
    out
}

fn stirling<T: Real>(z: Complex<T>) -> Complex<T> {
    let half = T::lit(0.5);
    let half_ln_two_pi = T::lit(0.918_938_533_204_672_8);
    let mut out = (z - half) * z.ln() - z + half_ln_two_pi;
    let inv = z.inv();
    let inv2 = inv * inv;
    let mut pow = inv;
    for &c in STIRLING.iter() {
        let term = pow * T::lit(c);
        out = out + term;
        if term.norm() <= T::epsilon() * out.norm() {
            break;
        }
        pow = pow * inv2;
    }
    out
}

/// ln sin(πz) without overflow for large |Im z|.
fn ln_sin_pi<T: Real>(z: Complex<T>) -> Complex<T> {
    let w = z * T::PI();
    if w.im.abs() < T::one() {
        return w.sin().ln();
    }
    if w.im > T::zero() {
        // sin w = −e^{−iw}(1 − e^{2iw})/(2i)
        let i = Complex::new(T::zero(), T::one());
        let e2 = (i * w * T::lit(2.0)).exp();
        -(i * w) + Complex::new(T::lit(0.5), T::zero()).ln() + i.ln() + (Complex::new(T::one(), T::zero()) - e2).ln()
    } else {
        ln_sin_pi(z.conj()).conj()
    }
}

/// Natural log of |Γ(x)| for real x.
pub fn ln_gamma_abs<T: Real>(x: T) -> T {
    ln_gamma(Complex::new(x, T::zero())).re
}

/// Γ(x) for real x, including negative non-integers. Infinite at poles.
pub fn gamma<T: Real>(x: T) -> T {
    if x <= T::zero() && x == x.floor() {
        return T::nan();
    }
    let lg = ln_gamma(Complex::new(x, T::zero()));
    // the imaginary part is a multiple of π carrying the sign
    let sign = lg.im.cos().signum();
    sign * lg.re.exp()
}

/// Smooth lower bound of ln|Γ(x)| on the real axis. Left of 1/2 it drops the
/// 1/|sin πx| factor so it stays finite through the poles.
pub(crate) fn ln_gamma_envelope<T: Real>(x: T) -> T {
    let half = T::lit(0.5);
    if x >= half {
        ln_gamma_abs(x)
    } else {
        T::PI().ln() - ln_gamma_abs(T::one() - x)
    }
}

/// Complementary error function (double precision).
pub fn erfc(x: f64) -> f64 {
    libm::erfc(x)
}

/// Gaussian tail probability Q(x) = P(N(0,1) > x).
pub fn q_function(x: f64) -> f64 {
    0.5 * erfc(x / std::f64::consts::SQRT_2)
}
