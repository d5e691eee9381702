//! The Mellin–Barnes integrand θ(s) as a product of gamma and linear factors.
//!
//! Identical and integer-shifted gamma pairs between numerator and
//! denominator are cancelled symbolically before anything is evaluated, so
//! removable singularities never reach the log-gamma routine and the
//! analyticity strip is computed from the poles that actually survive.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::special::{ln_gamma, ln_gamma_envelope};

use super::{OrderSeq, ParamSeq};

/// Γ(u + v·s).
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct GammaTerm<T> {
    pub u: T,
    pub v: T,
}

/// (u + v·s).
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct LinearTerm<T> {
    pub u: T,
    pub v: T,
}

/// Side of the contour a pole family lies on. Factors with positive slope in
/// `s` have their poles to the left of the contour, negative slope to the right.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Side {
    Left,
    Right,
}

fn side_of<T: Real>(v: T) -> Side {
    if v > T::zero() {
        Side::Left
    } else {
        Side::Right
    }
}

/// Number of poles enumerated per gamma factor when locating the strip.
const POLE_DEPTH: usize = 160;
/// Largest integer shift folded into linear factors during reduction.
const MAX_SHIFT: i64 = 32;

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct MellinKernel<T> {
    pub num: Vec<GammaTerm<T>>,
    pub den: Vec<GammaTerm<T>>,
    pub lin_num: Vec<LinearTerm<T>>,
    pub lin_den: Vec<LinearTerm<T>>,
}

impl<T: Real> MellinKernel<T> {
    /// θ(s) of a parameter sequence, unreduced, with the index ranges of the
    /// Mellin–Barnes definition.
    pub fn from_params(order: &OrderSeq, p: &ParamSeq<T>) -> Self {
        let one = T::one();
        let mut num = Vec::new();
        let mut den = Vec::new();
        for j in 0..order.q {
            if j < order.m {
                num.push(GammaTerm { u: p.b[j], v: -p.b_scale[j] });
            } else {
                den.push(GammaTerm { u: one - p.b[j], v: p.b_scale[j] });
            }
        }
        for j in 0..order.p {
            if j < order.n {
                num.push(GammaTerm { u: one - p.a[j], v: p.a_scale[j] });
            } else {
                den.push(GammaTerm { u: p.a[j], v: -p.a_scale[j] });
            }
        }
        MellinKernel { num, den, lin_num: Vec::new(), lin_den: Vec::new() }
    }

    /// Multiplies by 1/(u + v s).
    pub fn divide_linear(mut self, u: T, v: T) -> Self {
        self.lin_den.push(LinearTerm { u, v });
        self
    }

    /// Cancels numerator/denominator gamma pairs of equal slope whose
    /// arguments differ by an integer.
    pub fn reduced(mut self) -> Self {
        let tol = T::lit(1e-12).max(T::epsilon() * T::lit(64.0));
        // exact pairs first, then the smallest integer shifts
        for pass_shift in 0..=MAX_SHIFT {
            let mut i = 0;
            while i < self.num.len() {
                let g = self.num[i];
                let hit = self.den.iter().position(|d| {
                    let same_slope = (d.v - g.v).abs() <= tol * g.v.abs().max(T::one());
                    let diff = d.u - g.u;
                    same_slope
                        && (diff - diff.round()).abs() <= tol * diff.abs().max(T::one())
                        && diff.round().abs().to_i64() == Some(pass_shift)
                });
                match hit {
                    Some(jd) => {
                        let d = self.den.swap_remove(jd);
                        self.num.swap_remove(i);
                        let shift = (d.u - g.u).round().to_i64().unwrap_or(0);
                        if shift > 0 {
                            // Γ(u+vs)/Γ(u+d+vs) = 1/∏_{i<d}(u+i+vs)
                            for k in 0..shift {
                                self.lin_den.push(LinearTerm { u: g.u + T::lit(k as f64), v: g.v });
                            }
                        } else if shift < 0 {
                            // Γ(u+vs)/Γ(u−d+vs) = ∏_{1≤i≤d}(u−i+vs)
                            for k in 1..=(-shift) {
                                self.lin_num.push(LinearTerm { u: g.u - T::lit(k as f64), v: g.v });
                            }
                        }
                    }
                    None => i += 1,
                }
            }
        }
        self
    }

    /// ln θ(s).
    pub fn ln_eval(&self, s: Complex<T>) -> Complex<T> {
        let mut acc = Complex::new(T::zero(), T::zero());
        for g in &self.num {
            acc = acc + ln_gamma(s * g.v + g.u);
        }
        for g in &self.den {
            acc = acc - ln_gamma(s * g.v + g.u);
        }
        for l in &self.lin_num {
            acc = acc + (s * l.v + l.u).ln();
        }
        for l in &self.lin_den {
            acc = acc - (s * l.v + l.u).ln();
        }
        acc
    }

    /// Smooth surrogate for ln|θ(σ)| on the real axis used to place the
    /// contour anchor.
    pub fn ln_envelope(&self, sigma: T) -> T {
        let mut acc = T::zero();
        for g in &self.num {
            acc = acc + ln_gamma_envelope(g.u + g.v * sigma);
        }
        for g in &self.den {
            acc = acc - ln_gamma_envelope(g.u + g.v * sigma);
        }
        for l in &self.lin_num {
            let w = l.u + l.v * sigma;
            acc = acc + (w * w + l.v * l.v).sqrt().ln();
        }
        for l in &self.lin_den {
            let w = l.u + l.v * sigma;
            acc = acc - w.abs().ln();
        }
        acc
    }

    /// Exponential decay rate of |θ(σ+iy)| in units of π|y|/2.
    pub fn decay_rate(&self) -> T {
        let n: T = self.num.iter().fold(T::zero(), |a, g| a + g.v.abs());
        let d: T = self.den.iter().fold(T::zero(), |a, g| a + g.v.abs());
        n - d
    }

    /// True if a surviving numerator singularity sits at real `s`.
    pub fn is_pole(&self, s: T) -> bool {
        let tol = T::lit(1e-12).max(T::epsilon() * T::lit(64.0));
        let at_pole = |w: T| w <= tol && (w - w.round()).abs() <= tol * w.abs().max(T::one());
        self.num.iter().any(|g| at_pole(g.u + g.v * s))
            || self.lin_den.iter().any(|l| (l.u + l.v * s).abs() <= tol * l.u.abs().max(T::one()))
    }

    /// The open interval of real parts a vertical contour may occupy: every
    /// surviving left-family pole lies at or below `left`, every right-family
    /// pole at or above `right`.
    ///
    /// Coincident left and right poles partially cancelled by a denominator
    /// zero are attributed to the right family, which places the strip on
    /// the side where the integral converges for the composed sequences.
    pub fn strip(&self) -> Result<(T, T)> {
        #[derive(Clone, Copy)]
        enum Ev {
            Pole(Side),
            Zero,
        }
        let mut events: Vec<(T, Ev)> = Vec::new();
        for g in &self.num {
            let side = side_of(g.v);
            for k in 0..POLE_DEPTH {
                events.push((-(g.u + T::lit(k as f64)) / g.v, Ev::Pole(side)));
            }
        }
        for l in &self.lin_den {
            events.push((-l.u / l.v, Ev::Pole(side_of(l.v))));
        }
        for g in &self.den {
            for k in 0..POLE_DEPTH {
                events.push((-(g.u + T::lit(k as f64)) / g.v, Ev::Zero));
            }
        }
        for l in &self.lin_num {
            events.push((-l.u / l.v, Ev::Zero));
        }
        events.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(std::cmp::Ordering::Equal));

        let tol = T::lit(1e-9);
        let mut left = T::neg_infinity();
        let mut right = T::infinity();
        let mut i = 0;
        while i < events.len() {
            let pos = events[i].0;
            let (mut nl, mut nr, mut nz) = (0i64, 0i64, 0i64);
            let mut j = i;
            while j < events.len() && (events[j].0 - pos).abs() <= tol * pos.abs().max(T::one()) {
                match events[j].1 {
                    Ev::Pole(Side::Left) => nl += 1,
                    Ev::Pole(Side::Right) => nr += 1,
                    Ev::Zero => nz += 1,
                }
                j += 1;
            }
            let rem_left = (nl - nz).max(0);
            let spare_zeros = (nz - nl).max(0);
            let rem_right = (nr - spare_zeros).max(0);
            let net = nl + nr - nz;
            if net > 0 {
                if rem_right > 0 {
                    right = right.min(pos);
                }
                if rem_left > 0 {
                    left = left.max(pos);
                }
            }
            i = j;
        }
        if left >= right {
            return Err(Error::NoStrip { left: left.as_f64(), right: right.as_f64() });
        }
        Ok((left, right))
    }
}
