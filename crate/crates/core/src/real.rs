//! Scalar abstraction: the numerical core is generic over the floating point
//! type, with `f64` as the working precision and `f32` available for callers
//! that can tolerate the reduced accuracy.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive};

/// Floating point scalar: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + Debug + Display + Send + Sync + 'static
{
    /// Convert an `f64` constant.
    #[inline]
    fn of(v: f64) -> Self {
        Self::from_f64(v).expect("f64 constant representable in scalar type")
    }

    /// Convert a small integer index.
    #[inline]
    fn of_usize(v: usize) -> Self {
        Self::from_usize(v).expect("index representable in scalar type")
    }

    /// `1 - e^{-2s}` evaluated without cancellation for small `s`.
    #[inline]
    fn one_minus_exp_neg(two_s: Self) -> Self {
        -(-two_s).exp_m1()
    }
}

impl Real for f32 {}
impl Real for f64 {}
