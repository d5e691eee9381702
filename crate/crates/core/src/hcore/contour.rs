//! Numerical inversion of the Mellin–Barnes integral along a vertical line.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;

use super::kernel::MellinKernel;
use super::FoxH;

/// Vertical integration line `Re s = anchor`, truncated at `|Im s| ≤ half_length`
/// and sampled initially with `nodes` trapezoid intervals on `[0, half_length]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourSpec<T> {
    pub anchor: T,
    pub half_length: T,
    pub nodes: usize,
}

impl<T: Real> ContourSpec<T> {
    /// Checks a user-chosen contour against the analyticity strip of `fox`.
    pub fn new(fox: &FoxH<T>, anchor: T, half_length: T, nodes: usize) -> Result<Self> {
        let kernel = MellinKernel::from_params(&fox.order, &fox.params).reduced();
        let strip = kernel.strip()?;
        check_anchor(&kernel, strip, anchor)?;
        if !(half_length > T::zero()) || !half_length.is_finite() || nodes == 0 {
            return Err(Error::InvalidArgument(format!(
                "contour needs positive half length and node count, got {half_length} and {nodes}"
            )));
        }
        Ok(ContourSpec { anchor, half_length, nodes })
    }

    /// The contour the evaluator would choose for `H(x; fox)`.
    pub fn auto(fox: &FoxH<T>, x: T) -> Result<Self> {
        if !(x > T::zero()) {
            return Err(Error::InvalidArgument(format!("H is evaluated at x > 0, got {x}")));
        }
        let kernel = MellinKernel::from_params(&fox.order, &fox.params).reduced();
        let strip = kernel.strip()?;
        let ln_z = (fox.params.c * x).ln();
        let anchor = choose_anchor(&kernel, strip, ln_z);
        let half_length = truncation(&kernel, anchor, ln_z)?;
        let h0 = initial_step(strip, anchor);
        let nodes = (half_length / h0).ceil().to_usize().unwrap_or(1).max(1);
        Ok(ContourSpec { anchor, half_length, nodes })
    }
}

fn check_anchor<T: Real>(kernel: &MellinKernel<T>, strip: (T, T), anchor: T) -> Result<()> {
    let (l, r) = strip;
    if anchor == l || anchor == r || kernel.is_pole(anchor) {
        return Err(Error::PoleOnContour { anchor: anchor.as_f64() });
    }
    if !(anchor > l && anchor < r) {
        return Err(Error::AnchorOutsideStrip { anchor: anchor.as_f64(), left: l.as_f64(), right: r.as_f64() });
    }
    Ok(())
}

/// Outcome of a line integral, already multiplied by `1/π` and the scale.
#[derive(Debug, Clone, Copy)]
pub(crate) struct LineValue<T> {
    pub value: T,
}

/// Minimises the smooth envelope of `ln|θ(σ) z^σ|` over the strip interior,
/// which approximately places the line through the saddle of the integrand.
pub(crate) fn choose_anchor<T: Real>(kernel: &MellinKernel<T>, strip: (T, T), ln_z: T) -> T {
    let (l, r) = strip;
    let phi = |s: T| kernel.ln_envelope(s) + s * ln_z;
    let unbounded_margin = T::lit(0.25);
    // geometric steps into an unbounded side continue while φ keeps falling
    let outward = |from: T, dir: T| -> Vec<T> {
        let mut pts = Vec::new();
        let mut step = T::lit(0.125);
        let mut prev = phi(from);
        while step < T::lit(1e12) {
            let s = from + dir * step;
            let v = phi(s);
            pts.push(s);
            if step > T::lit(4.0) && !(v < prev) {
                break;
            }
            prev = v;
            step = step * T::lit(2.0);
        }
        pts
    };
    let mut grid: Vec<T> = Vec::new();
    match (l.is_finite(), r.is_finite()) {
        (true, true) => {
            let delta = (r - l) * T::lit(0.1);
            let (lo, hi) = (l + delta, r - delta);
            for i in 0..=24 {
                grid.push(lo + (hi - lo) * T::lit(i as f64 / 24.0));
            }
        }
        (true, false) => {
            let lo = l + unbounded_margin;
            grid.push(lo);
            grid.extend(outward(lo, T::one()));
        }
        (false, true) => {
            let hi = r - unbounded_margin;
            grid.extend(outward(hi, -T::one()).into_iter().rev());
            grid.push(hi);
        }
        (false, false) => {
            grid.extend(outward(T::zero(), -T::one()).into_iter().rev());
            grid.push(T::zero());
            grid.extend(outward(T::zero(), T::one()));
        }
    }
    let values: Vec<T> = grid.iter().map(|&s| phi(s)).collect();
    let mut best = 0;
    for i in 1..grid.len() {
        if values[i] < values[best] || !values[best].is_finite() {
            best = i;
        }
    }
    let a = grid[best.saturating_sub(1)];
    let b = grid[(best + 1).min(grid.len() - 1)];
    golden_min(&phi, a, b, grid[best])
}

fn golden_min<T: Real, F: Fn(T) -> T>(f: &F, mut a: T, mut b: T, fallback: T) -> T {
    if !(b > a) {
        return fallback;
    }
    let g = T::lit(0.618_033_988_749_894_9);
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..48 {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = f(x2);
        }
    }
    let m = (a + b) * T::lit(0.5);
    if f(m).is_finite() {
        m
    } else {
        fallback
    }
}

fn initial_step<T: Real>(strip: (T, T), anchor: T) -> T {
    let d = (anchor - strip.0).min(strip.1 - anchor);
    T::lit(0.5).min(d * T::lit(0.5))
}

/// Scans `|θ(σ+iy) z^{iy}|` outward until it has dropped below the
/// truncation level relative to its running maximum.
fn truncation<T: Real>(kernel: &MellinKernel<T>, sigma: T, ln_z: T) -> Result<T> {
    let decay = kernel.decay_rate();
    if !(decay > T::zero()) {
        return Err(Error::ContourDivergence(format!("gamma factors give no exponential decay (rate {decay})")));
    }
    let ln_level = (T::refine_tol() * T::lit(1e-3)).ln();
    let y_max = T::lit(2.0e4);
    let mag = |y: T| kernel.ln_eval(Complex::new(sigma, y)).re + sigma * ln_z;
    let mut running = mag(T::zero());
    let mut y = T::zero();
    let mut step = T::lit(0.25);
    let mut quiet = 0;
    loop {
        y = y + step;
        step = step * T::lit(1.08);
        let m = mag(y);
        if m.is_finite() && m > running || !running.is_finite() {
            running = m;
        }
        if m < running + ln_level || m == T::neg_infinity() {
            quiet += 1;
            if quiet >= 3 && y >= T::lit(2.0) {
                return Ok(y);
            }
        } else {
            quiet = 0;
        }
        if y > y_max {
            return Err(Error::ContourDivergence(format!(
                "integrand still above truncation level at |Im s| = {y_max}"
            )));
        }
    }
}

/// True when the integrand at the saddle-point anchor is far below the
/// smallest positive scalar, so the integral is zero to working precision.
fn underflows<T: Real>(kernel: &MellinKernel<T>, sigma: T, ln_z: T) -> bool {
    let at_axis = kernel.ln_eval(Complex::new(sigma, T::zero())).re + sigma * ln_z;
    let envelope = kernel.ln_envelope(sigma) + sigma * ln_z;
    let floor = T::min_positive_value().ln() - T::lit(60.0);
    let peak = if at_axis.is_nan() { envelope } else { at_axis.max(envelope) };
    peak < floor
}

/// `(1/π) ∫_0^Y Re[θ(σ+iy) z^{σ+iy}] dy` by trapezoid refinement.
pub(crate) fn line_integral<T: Real>(
    kernel: &MellinKernel<T>,
    ln_z: T,
    sigma: T,
    half_length: T,
    h0: T,
) -> LineValue<T> {
    // factor out the real-axis envelope so the summands stay O(1)
    let ln_scale = kernel.ln_envelope(sigma) + sigma * ln_z;
    let ln_scale = if ln_scale.is_finite() { ln_scale } else { T::zero() };
    let f = |y: T| -> (T, T) {
        let w =
            kernel.ln_eval(Complex::new(sigma, y)) + Complex::new(sigma, y) * ln_z - Complex::new(ln_scale, T::zero());
        if !(w.re > T::lit(-700.0)) {
            return (T::zero(), T::zero());
        }
        let g = w.exp();
        (g.re, g.norm())
    };
    let mut n = (half_length / h0).ceil().to_usize().unwrap_or(1).max(2);
    let mut h = half_length / T::lit(n as f64);
    let (f0, a0) = f(T::zero());
    let (mut sum, mut abs_sum) = (f0 * T::lit(0.5), a0 * T::lit(0.5));
    for j in 1..=n {
        let (v, a) = f(h * T::lit(j as f64));
        sum = sum + v;
        abs_sum = abs_sum + a;
    }
    let mut estimate = sum * h;
    let tol = T::refine_tol();
    let floor = T::epsilon() * T::lit(64.0);
    for _ in 0..16 {
        let mut add = T::zero();
        let mut add_abs = T::zero();
        for j in 0..n {
            let (v, a) = f(h * (T::lit(j as f64) + T::lit(0.5)));
            add = add + v;
            add_abs = add_abs + a;
        }
        sum = sum + add;
        abs_sum = abs_sum + add_abs;
        n *= 2;
        h = h * T::lit(0.5);
        let refined = sum * h;
        let error = (refined - estimate).abs();
        estimate = refined;
        if error <= tol * estimate.abs() || error <= floor * abs_sum * h {
            break;
        }
    }
    let scale = ln_scale.exp() / T::PI();
    LineValue { value: estimate * scale }
}

/// Parameters of a sequence prepared for repeated evaluation.
#[derive(Debug, Clone)]
pub(crate) struct Prepared<T> {
    pub kernel: MellinKernel<T>,
    pub strip: (T, T),
}

impl<T: Real> Prepared<T> {
    pub fn new(kernel: MellinKernel<T>) -> Result<Self> {
        let kernel = kernel.reduced();
        let strip = kernel.strip()?;
        Ok(Prepared { kernel, strip })
    }

    /// A kernel whose strip is the given interval, for θ multiplied by
    /// factors whose side of the contour is fixed by construction.
    pub fn with_strip(kernel: MellinKernel<T>, strip: (T, T)) -> Result<Self> {
        if !(strip.0 < strip.1) {
            return Err(Error::NoStrip { left: strip.0.as_f64(), right: strip.1.as_f64() });
        }
        Ok(Prepared { kernel: kernel.reduced(), strip })
    }

    /// `(1/2πi) ∫ θ(s) z^s ds` on the automatically chosen line.
    pub fn integrate(&self, z: T) -> Result<LineValue<T>> {
        let ln_z = z.ln();
        let anchor = choose_anchor(&self.kernel, self.strip, ln_z);
        if self.kernel.decay_rate() > T::zero() && underflows(&self.kernel, anchor, ln_z) {
            return Ok(LineValue { value: T::zero() });
        }
        let half_length = truncation(&self.kernel, anchor, ln_z)?;
        Ok(line_integral(&self.kernel, ln_z, anchor, half_length, initial_step(self.strip, anchor)))
    }

    pub fn integrate_with(&self, z: T, spec: &ContourSpec<T>) -> Result<LineValue<T>> {
        check_anchor(&self.kernel, self.strip, spec.anchor)?;
        if self.kernel.decay_rate() <= T::zero() {
            return Err(Error::ContourDivergence("gamma factors give no exponential decay".into()));
        }
        let h0 = spec.half_length / T::lit(spec.nodes.max(1) as f64);
        Ok(line_integral(&self.kernel, z.ln(), spec.anchor, spec.half_length, h0))
    }
}
