//! S-shaped unbiasing function.
//!
//! The standard piecewise-quadratic s-membership function: flat at 0 below
//! `alpha`, flat at 1 above `beta`, and two quadratic arcs meeting at the
//! midpoint `(alpha + beta) / 2` with value 0.5. Weak inputs are pushed down,
//! strong inputs pushed up.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Lower and upper thresholds of one unbiasing stage.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SmfParams<T = f64> {
    pub alpha: T,
    pub beta: T,
}

impl<T: Scalar> SmfParams<T> {
    pub fn new(alpha: T, beta: T) -> Result<Self> {
        let p = Self { alpha, beta };
        p.validate("smf")?;
        Ok(p)
    }

    pub fn validate(&self, name: &str) -> Result<()> {
        if !(self.alpha >= T::zero() && self.alpha < self.beta && self.beta.is_finite()) {
            return Err(Error::param(
                name,
                format!("need 0 <= alpha < beta, got alpha={} beta={}", self.alpha, self.beta),
            ));
        }
        Ok(())
    }

    /// Checks the thresholds lie inside `[0, upper]`.
    pub fn validate_within(&self, name: &str, upper: T) -> Result<()> {
        self.validate(name)?;
        if self.beta > upper {
            return Err(Error::param(name, format!("beta={} exceeds upper bound {upper}", self.beta)));
        }
        Ok(())
    }

    pub fn midpoint(&self) -> T {
        (self.alpha + self.beta) * T::lit(0.5)
    }
}

/// Evaluates the s-shaped function at `x`.
#[inline]
pub fn smf<T: Scalar>(x: T, p: &SmfParams<T>) -> T {
    let (a, b) = (p.alpha, p.beta);
    if x <= a {
        return T::zero();
    }
    if x >= b {
        return T::one();
    }
    let two = T::lit(2.0);
    let width = b - a;
    if x <= p.midpoint() {
        let r = (x - a) / width;
        two * r * r
    } else {
        let r = (x - b) / width;
        T::one() - two * r * r
    }
}
