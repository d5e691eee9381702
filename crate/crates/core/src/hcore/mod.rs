//! Fox H-function sequences and their numerical evaluation.
//!
//! A sequence `P = (k, c, a, b, A, B)` of order `(m, n, p, q)` defines
//!
//! ```text
//! H(x; P) = k · (1/2πi) ∫_L θ(s) (c x)^s ds
//! θ(s) = ∏_{j≤m} Γ(b_j − B_j s) ∏_{j≤n} Γ(1 − a_j + A_j s)
//!      / (∏_{j>m} Γ(1 − b_j + B_j s) ∏_{j>n} Γ(a_j − A_j s))
//! ```
//!
//! where `L` is a vertical line separating the poles of the `Γ(b − Bs)`
//! factors (to its right) from those of the `Γ(1 − a + As)` factors (to its
//! left). When `H(·; P)` is a probability density it is called an H-variate.

mod contour;
mod kernel;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad;
use crate::scalar::Real;

pub use contour::ContourSpec;
use contour::Prepared;
use kernel::MellinKernel;

/// Order `(m, n, p, q)` of an H-function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OrderSeq {
    pub m: usize,
    pub n: usize,
    pub p: usize,
    pub q: usize,
}

impl OrderSeq {
    pub const fn new(m: usize, n: usize, p: usize, q: usize) -> Self {
        OrderSeq { m, n, p, q }
    }
}

/// Parameters `(k, c, a, b, A, B)`; `a_scale` and `b_scale` hold `A` and `B`.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamSeq<T> {
    pub k: T,
    pub c: T,
    pub a: Vec<T>,
    pub b: Vec<T>,
    pub a_scale: Vec<T>,
    pub b_scale: Vec<T>,
}

/// An H-function: order plus parameters, validated for shape.
#[derive(Debug, Clone, PartialEq)]
pub struct FoxH<T> {
    pub order: OrderSeq,
    pub params: ParamSeq<T>,
}

/// A Mellin moment `E[X^r]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Moment<T> {
    Finite(T),
    /// `-(r+1)` lies outside the analyticity strip.
    Divergent,
}

impl<T: Real> Moment<T> {
    pub fn finite(self) -> Option<T> {
        match self {
            Moment::Finite(v) => Some(v),
            Moment::Divergent => None,
        }
    }
}

/// Outcome of [`validate_density`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityReport {
    pub valid: bool,
    /// `∫_0^∞ H(x; P) dx`, when it could be computed.
    pub normalization: Option<f64>,
    /// Smallest `x·H(x; P)` seen on the probe grid.
    pub min_scaled_value: f64,
    pub violations: Vec<String>,
}

impl<T: Real> FoxH<T> {
    pub fn new(order: OrderSeq, params: ParamSeq<T>) -> Result<Self> {
        let OrderSeq { m, n, p, q } = order;
        let bad = |msg: String| Err(Error::InvalidParams(msg));
        if m > q || n > p {
            return bad(format!("order requires m <= q and n <= p, got ({m}, {n}, {p}, {q})"));
        }
        if params.a.len() != p || params.a_scale.len() != p {
            return bad(format!("a and A need length p = {p}"));
        }
        if params.b.len() != q || params.b_scale.len() != q {
            return bad(format!("b and B need length q = {q}"));
        }
        if !(params.c > T::zero()) || !params.c.is_finite() {
            return bad(format!("scale c must be positive, got {}", params.c));
        }
        if !params.k.is_finite() {
            return bad(format!("constant k must be finite, got {}", params.k));
        }
        let all = params.a.iter().chain(params.b.iter());
        if all.clone().any(|v| !v.is_finite()) {
            return bad("a and b must be finite".into());
        }
        if params.a_scale.iter().chain(params.b_scale.iter()).any(|v| !(*v > T::zero()) || !v.is_finite()) {
            return bad("A and B must be positive".into());
        }
        Ok(FoxH { order, params })
    }

    /// Shorthand taking slices.
    pub fn from_slices(order: OrderSeq, k: T, c: T, a: &[T], b: &[T], a_scale: &[T], b_scale: &[T]) -> Result<Self> {
        FoxH::new(
            order,
            ParamSeq { k, c, a: a.to_vec(), b: b.to_vec(), a_scale: a_scale.to_vec(), b_scale: b_scale.to_vec() },
        )
    }

    /// Density of `a·X` when `self` is the density of `X`.
    pub fn scaled(&self, a: T) -> Self {
        let mut out = self.clone();
        out.params.k = out.params.k / a;
        out.params.c = out.params.c / a;
        out
    }

    /// `a* = Σ_{j≤n} A_j − Σ_{j>n} A_j + Σ_{j≤m} B_j − Σ_{j>m} B_j`.
    pub fn a_star(&self) -> T {
        let OrderSeq { m, n, .. } = self.order;
        let p = &self.params;
        let sa = p.a_scale.iter().enumerate().fold(T::zero(), |s, (j, v)| if j < n { s + *v } else { s - *v });
        let sb = p.b_scale.iter().enumerate().fold(T::zero(), |s, (j, v)| if j < m { s + *v } else { s - *v });
        sa + sb
    }

    /// Prepares the sequence for repeated evaluation.
    pub fn evaluator(&self) -> Result<Evaluator<T>> {
        Evaluator::new(self)
    }

    pub fn eval(&self, x: T) -> Result<T> {
        self.evaluator()?.value(x)
    }

    pub fn pdf(&self, x: T) -> Result<T> {
        self.evaluator()?.pdf(x)
    }

    pub fn cdf(&self, x: T) -> Result<T> {
        self.evaluator()?.cdf(x)
    }

    pub fn sf(&self, x: T) -> Result<T> {
        self.evaluator()?.sf(x)
    }

    pub fn theta(&self, s: Complex<T>) -> Result<Complex<T>> {
        self.evaluator()?.theta(s)
    }

    pub fn moment(&self, r: T) -> Result<Moment<T>> {
        self.evaluator()?.moment(r)
    }
}

/// A sequence with its reduced kernels and strips precomputed.
#[derive(Debug, Clone)]
pub struct Evaluator<T> {
    k: T,
    c: T,
    theta: Prepared<T>,
    cdf: Option<Prepared<T>>,
    sf: Option<Prepared<T>>,
}

impl<T: Real> Evaluator<T> {
    pub fn new(fox: &FoxH<T>) -> Result<Self> {
        let base = MellinKernel::from_params(&fox.order, &fox.params);
        let theta = Prepared::new(base.clone())?;
        let one = T::one();
        // ∫_0^x: 1/(1+s), left pole at -1; ∫_x^∞: 1/(-1-s), right pole at -1
        let (l, r) = theta.strip;
        let cdf = Prepared::with_strip(base.clone().divide_linear(one, one), (l.max(-one), r)).ok();
        let sf = Prepared::with_strip(base.divide_linear(-one, -one), (l, r.min(-one))).ok();
        Ok(Evaluator { k: fox.params.k, c: fox.params.c, theta, cdf, sf })
    }

    /// Analyticity strip `(left, right)` of θ.
    pub fn strip(&self) -> (T, T) {
        self.theta.strip
    }

    /// `H(x; P)`.
    pub fn value(&self, x: T) -> Result<T> {
        let z = self.checked_arg(x)?;
        Ok(self.k * self.theta.integrate(z)?.value)
    }

    /// `H(x; P)` on a caller-supplied contour.
    pub fn value_with(&self, x: T, spec: &ContourSpec<T>) -> Result<T> {
        let z = self.checked_arg(x)?;
        Ok(self.k * self.theta.integrate_with(z, spec)?.value)
    }

    /// `H(x; P)` for a density: zero for negative `x`, round-off negatives
    /// with `|x·H| < 1e-8` clipped to zero.
    pub fn pdf(&self, x: T) -> Result<T> {
        if x < T::zero() {
            return Ok(T::zero());
        }
        let v = self.value(x)?;
        if v < T::zero() && v * x > T::lit(-1e-8) {
            Ok(T::zero())
        } else {
            Ok(v)
        }
    }

    fn raw_cdf(&self, x: T) -> Result<T> {
        let prep =
            self.cdf.as_ref().ok_or_else(|| Error::NoStrip { left: -1.0, right: self.theta.strip.1.as_f64() })?;
        let z = self.c * x;
        Ok(self.k / self.c * z * prep.integrate(z)?.value)
    }

    fn raw_sf(&self, x: T) -> Result<T> {
        let prep = self.sf.as_ref().ok_or_else(|| Error::NoStrip { left: self.theta.strip.0.as_f64(), right: -1.0 })?;
        let z = self.c * x;
        Ok(self.k / self.c * z * prep.integrate(z)?.value)
    }

    /// `∫_0^x H(y; P) dy` by contour integration, clamped to `[0, 1]`.
    pub fn cdf(&self, x: T) -> Result<T> {
        if !(x > T::zero()) {
            return Ok(T::zero());
        }
        if x == T::infinity() {
            return Ok(T::one());
        }
        let lower = self.raw_cdf(x)?;
        let v = if lower > T::lit(0.5) && self.sf.is_some() { T::one() - self.raw_sf(x)? } else { lower };
        Ok(v.max(T::zero()).min(T::one()))
    }

    /// `∫_x^∞ H(y; P) dy`, clamped to `[0, 1]`.
    pub fn sf(&self, x: T) -> Result<T> {
        if !(x > T::zero()) {
            return Ok(T::one());
        }
        if x == T::infinity() {
            return Ok(T::zero());
        }
        let upper = self.raw_sf(x)?;
        let v = if upper > T::lit(0.5) && self.cdf.is_some() { T::one() - self.raw_cdf(x)? } else { upper };
        Ok(v.max(T::zero()).min(T::one()))
    }

    /// `∫_0^x H(y; P) dy` by adaptive quadrature of the density in `ln y`
    /// starting fourteen decades below `x`; an independent path to [`cdf`].
    ///
    /// [`cdf`]: Evaluator::cdf
    pub fn cdf_by_quadrature(&self, x: T) -> Result<T> {
        if !(x > T::zero()) {
            return Ok(T::zero());
        }
        let mut failure = None;
        let r = quad::integrate_log(
            |y| match self.pdf(y) {
                Ok(v) => v,
                Err(e) => {
                    failure.get_or_insert(e);
                    T::zero()
                }
            },
            x * T::lit(1e-14),
            x,
            T::refine_tol() * T::lit(0.01),
            T::refine_tol(),
        );
        match failure {
            Some(e) => Err(e),
            None => Ok(r.value),
        }
    }

    /// θ(s) of the reduced kernel.
    pub fn theta(&self, s: Complex<T>) -> Result<Complex<T>> {
        let kernel = &self.theta.kernel;
        if s.im == T::zero() && kernel.is_pole(s.re) {
            return Err(Error::Pole { at: s.re.as_f64() });
        }
        Ok(kernel.ln_eval(s).exp())
    }

    /// `E[X^r] = k c^{-(r+1)} θ(-(r+1))` when `-(r+1)` is inside the strip.
    pub fn moment(&self, r: T) -> Result<Moment<T>> {
        let s = -(r + T::one());
        let (l, rt) = self.theta.strip;
        if !(s > l && s < rt) {
            return Ok(Moment::Divergent);
        }
        let th = self.theta(Complex::new(s, T::zero()))?;
        Ok(Moment::Finite(self.k * self.c.powf(s) * th.re))
    }

    fn checked_arg(&self, x: T) -> Result<T> {
        if !(x > T::zero()) || !x.is_finite() {
            return Err(Error::InvalidArgument(format!("H is evaluated at finite x > 0, got {x}")));
        }
        Ok(self.c * x)
    }

    fn scale(&self) -> T {
        T::one() / self.c
    }
}

/// `H(x; P)`.
pub fn eval_h<T: Real>(fox: &FoxH<T>, x: T) -> Result<T> {
    fox.eval(x)
}

/// Distribution function of an H-variate.
pub fn hvariate_cdf<T: Real>(fox: &FoxH<T>, x: T) -> Result<T> {
    fox.cdf(x)
}

/// θ(s) of the sequence, after cancelling removable singularities.
pub fn theta<T: Real>(fox: &FoxH<T>, s: Complex<T>) -> Result<Complex<T>> {
    fox.theta(s)
}

/// `E[X^r]` of an H-variate.
pub fn mellin_moment<T: Real>(fox: &FoxH<T>, r: T) -> Result<Moment<T>> {
    fox.moment(r)
}

/// Checks the conditions for `H(·; P)` to be a probability density on
/// `(0, ∞)`: `a_j + A_j < 1` for `j ≤ n`, unit mass and non-negativity on a
/// logarithmic probe grid spanning eight decades around `1/c`.
pub fn validate_density<T: Real>(fox: &FoxH<T>) -> DensityReport {
    let mut violations = Vec::new();
    let n = fox.order.n;
    for j in 0..n {
        let s = fox.params.a[j] + fox.params.a_scale[j];
        if !(s < T::one()) {
            violations.push(format!("a[{j}] + A[{j}] = {s} is not below 1"));
        }
    }
    let ev = match fox.evaluator() {
        Ok(ev) => ev,
        Err(e) => {
            violations.push(e.to_string());
            return DensityReport { valid: false, normalization: None, min_scaled_value: f64::NAN, violations };
        }
    };
    let normalization = total_mass(&ev);
    match &normalization {
        Ok(v) if (v.as_f64() - 1.0).abs() > 1e-6 => violations.push(format!("total mass {v} differs from 1")),
        Ok(_) => {}
        Err(e) => violations.push(format!("total mass not computable: {e}")),
    }
    let mut min_scaled = f64::INFINITY;
    let x0 = ev.scale();
    for i in 0..=40 {
        let x = x0 * T::lit(10f64.powf(-4.0 + 8.0 * i as f64 / 40.0));
        match ev.value(x) {
            Ok(v) => min_scaled = min_scaled.min((v * x).as_f64()),
            Err(e) => {
                violations.push(format!("H not computable at x = {x}: {e}"));
                break;
            }
        }
    }
    if min_scaled < -1e-8 {
        violations.push(format!("x·H(x) reaches {min_scaled} < 0"));
    }
    DensityReport {
        valid: violations.is_empty(),
        normalization: normalization.ok().map(|v| v.as_f64()),
        min_scaled_value: min_scaled,
        violations,
    }
}

/// Mass below `0.01/c` and above `100/c` by contour, the middle by quadrature.
fn total_mass<T: Real>(ev: &Evaluator<T>) -> Result<T> {
    let x1 = ev.scale() * T::lit(0.01);
    let x2 = ev.scale() * T::lit(100.0);
    let low = ev.raw_cdf(x1)?;
    let high = ev.raw_sf(x2)?;
    let mut failure = None;
    let mid = quad::integrate_log(
        |y| match ev.value(y) {
            Ok(v) => v,
            Err(e) => {
                failure.get_or_insert(e);
                T::zero()
            }
        },
        x1,
        x2,
        T::refine_tol() * T::lit(0.01),
        T::refine_tol(),
    );
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(low + mid.value + high)
}

#[derive(Serialize, Deserialize)]
struct FoxHJson {
    k: f64,
    c: f64,
    m: usize,
    n: usize,
    p: usize,
    q: usize,
    a: Vec<f64>,
    b: Vec<f64>,
    #[serde(rename = "A")]
    a_scale: Vec<f64>,
    #[serde(rename = "B")]
    b_scale: Vec<f64>,
}

impl<T: Real> Serialize for FoxH<T> {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let v = |xs: &[T]| xs.iter().map(|x| x.as_f64()).collect::<Vec<_>>();
        FoxHJson {
            k: self.params.k.as_f64(),
            c: self.params.c.as_f64(),
            m: self.order.m,
            n: self.order.n,
            p: self.order.p,
            q: self.order.q,
            a: v(&self.params.a),
            b: v(&self.params.b),
            a_scale: v(&self.params.a_scale),
            b_scale: v(&self.params.b_scale),
        }
        .serialize(ser)
    }
}

impl<'de, T: Real> Deserialize<'de> for FoxH<T> {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let j = FoxHJson::deserialize(de)?;
        let v = |xs: Vec<f64>| xs.into_iter().map(T::lit).collect::<Vec<_>>();
        FoxH::new(
            OrderSeq::new(j.m, j.n, j.p, j.q),
            ParamSeq {
                k: T::lit(j.k),
                c: T::lit(j.c),
                a: v(j.a),
                b: v(j.b),
                a_scale: v(j.a_scale),
                b_scale: v(j.b_scale),
            },
        )
        .map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exp_law() -> FoxH<f64> {
        FoxH::from_slices(OrderSeq::new(1, 0, 0, 1), 1.0, 1.0, &[], &[0.0], &[], &[1.0]).unwrap()
    }

    #[test]
    fn exponential_density_and_tails() {
        let f = exp_law();
        let ev = f.evaluator().unwrap();
        for &x in &[0.01, 0.3, 1.0, 4.0, 25.0] {
            let v = ev.value(x).unwrap();
            assert!((v / (-x).exp() - 1.0).abs() < 1e-9, "x={x} v={v}");
            let c = ev.cdf(x).unwrap();
            assert!((c - (1.0 - (-x).exp())).abs() < 1e-10, "cdf x={x}");
            let s = ev.sf(x).unwrap();
            assert!((s - (-x).exp()).abs() < 1e-10 * (-x).exp().max(1e-3), "sf x={x}");
        }
    }

    #[test]
    fn moments_and_divergence() {
        let f = exp_law();
        // E[X^r] = Γ(1+r)
        assert!((f.moment(2.0).unwrap().finite().unwrap() - 2.0).abs() < 1e-12);
        assert_eq!(f.moment(-1.5).unwrap(), Moment::Divergent);
    }

    #[test]
    fn json_round_trip() {
        let f = exp_law().scaled(3.0);
        let s = serde_json::to_string(&f).unwrap();
        assert!(s.contains("\"A\":[]") && s.contains("\"B\":[1.0]"));
        let back: FoxH<f64> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn shape_errors() {
        let r = FoxH::from_slices(OrderSeq::new(2, 0, 0, 1), 1.0, 1.0, &[], &[0.0], &[], &[1.0]);
        assert!(matches!(r, Err(Error::InvalidParams(_))));
        let r = FoxH::from_slices(OrderSeq::new(1, 0, 0, 1), 1.0, 1.0, &[], &[0.0], &[], &[-1.0]);
        assert!(matches!(r, Err(Error::InvalidParams(_))));
    }
}
