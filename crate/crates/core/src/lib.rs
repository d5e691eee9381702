//! Numerics for molecular communication over anomalous diffusion channels.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod channel;
pub mod comm;
pub mod ctrw;
pub mod error;
pub mod hcore;
pub mod pointfield;
pub mod quad;
pub mod scalar;
pub mod special;

pub use channel::{DiffusionParams, FptLaw};
pub use error::{Error, Result};
pub use hcore::{ContourSpec, DensityReport, Evaluator, FoxH, Moment, OrderSeq, ParamSeq};
pub use pointfield::{IntensityLaw, PointFieldModel, Region};
pub use scalar::Real;

pub type FoxH64 = FoxH<f64>;
pub type FoxH32 = FoxH<f32>;
