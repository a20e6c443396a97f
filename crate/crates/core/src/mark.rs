use serde::{Deserialize, Serialize};

use crate::params::PipelineParams;
use crate::scalar::Scalar;

/// Isosceles triangular deposit with apex `(center, height)` and base
/// `[center - half_base, center + half_base]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mark<T = f64> {
    pub center: T,
    pub half_base: T,
    pub height: T,
}

impl<T: Scalar> Mark<T> {
    pub fn new(center: T, half_base: T, height: T) -> Self {
        debug_assert!(half_base > T::zero());
        debug_assert!(height >= T::zero());
        Self {
            center,
            half_base,
            height,
        }
    }

    /// Intensity of the triangle at position `x`.
    #[inline]
    pub fn intensity_at(&self, x: T) -> T {
        let r = T::one() - (x - self.center).abs() / self.half_base;
        if r > T::zero() {
            self.height * r
        } else {
            T::zero()
        }
    }

    /// Portion of the base that lies inside `[0, 1]`.
    pub fn support(&self) -> (T, T) {
        (
            (self.center - self.half_base).max(T::zero()),
            (self.center + self.half_base).min(T::one()),
        )
    }
}

/// Releases a unit-height mark centred on an already-unbiased sample.
pub fn release_mark<T: Scalar>(value: T, params: &PipelineParams<T>) -> Mark<T> {
    Mark::new(value, params.epsilon, T::one())
}
