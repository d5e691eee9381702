use thiserror::Error;

/// Errors raised by the numerical kernels and the channel models.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter sequence: {0}")]
    InvalidParams(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("s = {at} is a pole of a numerator gamma factor")]
    Pole { at: f64 },

    #[error("contour anchor {anchor} lies on a pole of the Mellin-Barnes integrand")]
    PoleOnContour { anchor: f64 },

    #[error("no vertical contour separates the pole families (left bound {left}, right bound {right})")]
    NoStrip { left: f64, right: f64 },

    #[error("contour anchor {anchor} is outside the analyticity strip ({left}, {right})")]
    AnchorOutsideStrip { anchor: f64, left: f64, right: f64 },

    #[error("Mellin-Barnes integrand does not decay along the contour: {0}")]
    ContourDivergence(String),

    #[error("unsupported diffusion regime alpha = {alpha} < beta = {beta}")]
    UnsupportedRegime { alpha: f64, beta: f64 },

    #[error("no sign change of the threshold equation in [{lo}, {hi}]")]
    NoRoot { lo: f64, hi: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
