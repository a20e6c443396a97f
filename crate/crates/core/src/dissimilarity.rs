use crate::prototype::{shape_similarity, Prototype};
use crate::scalar::Scalar;
use crate::series::TrendClass;
use crate::smf::{smf, SmfParams};

/// Signed dissimilarity between the current prototype and an earlier one:
/// `(1 - S) * sign(p_current - p_previous)`.
pub fn delta_p<T: Scalar>(current: &Prototype<T>, previous: &Prototype<T>) -> T {
    match (current.center - previous.center).sign() {
        0 => T::zero(),
        s => (T::one() - shape_similarity(current, previous)) * T::lit(f64::from(s)),
    }
}

/// Three-way discretization of a dissimilarity: the sign of `delta` when
/// `smf(|delta|)` reaches one half, stable otherwise.
pub fn classify<T: Scalar>(delta: T, p: &SmfParams<T>) -> TrendClass {
    if smf(delta.abs(), p) >= T::lit(0.5) {
        TrendClass::from_sign(delta.sign())
    } else {
        TrendClass::Stable
    }
}
