//! Scalar abstraction for the numerical kernels.
//!
//! The special functions, quadrature rules and the H-function evaluator are
//! written once against [`Real`] and instantiated for `f32` and `f64`. The
//! physics layers (`channel`, `comm`, `ctrw`, `pointfield`) work in `f64`.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating point scalar accepted by the generic numerical kernels.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal into `Self`.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in scalar type")
    }

    /// Converts to `f64`, used for diagnostics and serialization.
    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Relative tolerance the contour and quadrature refinements aim for.
    fn refine_tol() -> Self;
}

impl Real for f32 {
    fn refine_tol() -> Self {
        1.0e-5
    }
}

impl Real for f64 {
    fn refine_tol() -> Self {
        1.0e-10
    }
}
