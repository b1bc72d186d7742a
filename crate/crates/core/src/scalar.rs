//! Scalar abstraction shared by every estimator.

use nalgebra::RealField;
use num_traits::{FromPrimitive, ToPrimitive};

/// Real scalar type the library is generic over (`f32` and `f64`).
///
/// Decompositions come from nalgebra's `RealField`; conversions to and from
/// `f64` (RNG draws, file IO, tolerances) go through num-traits.
pub trait Real: RealField + Copy + FromPrimitive + ToPrimitive + Send + Sync + 'static {
    /// Converts an `f64` literal or draw into `Self`.
    #[inline]
    fn lit(x: f64) -> Self {
        <Self as FromPrimitive>::from_f64(x).expect("f64 is representable")
    }

    /// Widens to `f64`.
    #[inline]
    fn as_f64(self) -> f64 {
        <Self as ToPrimitive>::to_f64(&self).expect("finite conversion")
    }

    #[inline]
    fn from_count(n: usize) -> Self {
        Self::lit(n as f64)
    }

    /// Machine epsilon of the concrete type.
    fn eps() -> Self;
}

impl Real for f64 {
    fn eps() -> Self {
        f64::EPSILON
    }
}

impl Real for f32 {
    fn eps() -> Self {
        f32::EPSILON
    }
}
