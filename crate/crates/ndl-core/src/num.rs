//! Scalar abstraction for the numeric kernels.
//!
//! Everything combinatorial in this crate works with integer counts; the
//! spectral, percolation-prediction and certificate arithmetic is generic
//! over a floating-point scalar so the same code runs in `f32` or `f64`.
//! Concrete `f64` aliases live at the crate root.

use num_traits::{Float, FromPrimitive, NumAssign, ToPrimitive};

/// Floating-point scalar: `f32` or `f64`.
pub trait Real:
    Float
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + std::iter::Sum
    + std::fmt::Debug
    + std::fmt::Display
    + 'static
{
    /// Lossy conversion from a count. Counts in this crate stay far below
    /// 2^53 so the conversion is exact for `f64`.
    fn from_count(c: usize) -> Self {
        Self::from_usize(c).expect("count representable in scalar type")
    }
}

impl<T> Real for T where
    T: Float
        + FromPrimitive
        + ToPrimitive
        + NumAssign
        + std::iter::Sum
        + std::fmt::Debug
        + std::fmt::Display
        + 'static
{
}
