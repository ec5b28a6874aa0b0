//! Wavelet cascade, transfer and Zak operators with exact arithmetic where the
//! filters allow it.
//!
//! Conventions: `z = e^{-iω}` on the circle, sampled grids `z_j = e^{-2πij/N}`,
//! filter masks stored as `c_n = √2·a_n` so that `m₀(z) = Σ c_n zⁿ / √2`.

pub mod cascade;
pub mod circle;
pub mod filter;
pub mod interval;
pub mod laurent;
pub mod rng;
pub mod ruelle;
pub mod scalar;
pub mod wold;
pub mod zak;

pub use circle::{grid_point, SampledCircleFn};
pub use filter::QmfFilter;
pub use interval::{IntervalSet, PeriodicIntervalSet, SetOp};
pub use laurent::{AnyPoly, ExactPoly, FloatPoly, LaurentPoly};
pub use scalar::{ratio, ExactScalar, Scalar, ScalarKind};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("scalar kinds differ: {left:?} vs {right:?}")]
    KindMismatch { left: ScalarKind, right: ScalarKind },
    #[error("affine map with zero scale")]
    DegenerateScale,
    #[error("operation needs a {expected} filter")]
    UnsupportedRepresentation { expected: &'static str },
    #[error("degree bound {got} too small, need at least {need}")]
    DegreeBound { got: i64, need: i64 },
    #[error("degree {degree} exceeds configured bound {bound}")]
    Overflow { degree: i64, bound: i64 },
    #[error("grid error: {0}")]
    Grid(String),
    #[error("resolution ladder exhausted: {0}")]
    LadderExhausted(String),
    #[error("window half-width {got}π smaller than required {need}π")]
    Window { got: String, need: String },
    #[error("filter definition: {0}")]
    Parse(String),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
}
