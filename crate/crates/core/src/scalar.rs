use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, NumAssign, ToPrimitive};

/// Floating point type the pipeline and optimizer are generic over.
///
/// Implemented for `f32` and `f64`. Everything numerical in this crate is
/// written against this trait; the crate root exposes `f64` aliases for the
/// common case.
pub trait Scalar:
    'static
    + Float
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Default
    + Sum
    + Debug
    + Display
    + Send
    + Sync
{
    /// Converts an `f64` literal into this scalar type.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in scalar type")
    }

    /// Converts a count into this scalar type.
    #[inline]
    fn count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable in scalar type")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Sign as -1, 0 or +1 (unlike `Float::signum`, zero maps to zero).
    #[inline]
    fn sign(self) -> i8 {
        if self > Self::zero() {
            1
        } else if self < Self::zero() {
            -1
        } else {
            0
        }
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
