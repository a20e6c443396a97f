//! Time series and trend class types.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Which indicator a series measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Indicator {
    /// Specialization.
    S,
    /// Related variety.
    R,
    /// Unrelated variety.
    U,
    #[serde(rename = "synthetic")]
    Synthetic,
}

impl fmt::Display for Indicator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Indicator::S => "S",
            Indicator::R => "R",
            Indicator::U => "U",
            Indicator::Synthetic => "synthetic",
        })
    }
}

/// Discrete trend: decreasing, stable or increasing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "i8", into = "i8")]
pub enum TrendClass {
    Decrease,
    Stable,
    Increase,
}

impl TrendClass {
    pub const ALL: [TrendClass; 3] = [TrendClass::Decrease, TrendClass::Stable, TrendClass::Increase];

    pub fn value(self) -> i8 {
        match self {
            TrendClass::Decrease => -1,
            TrendClass::Stable => 0,
            TrendClass::Increase => 1,
        }
    }

    /// Class from the sign of an integer (any negative is a decrease).
    pub fn from_sign(sign: i8) -> Self {
        match sign.signum() {
            -1 => TrendClass::Decrease,
            0 => TrendClass::Stable,
            _ => TrendClass::Increase,
        }
    }

    /// Row/column index in a 3x3 confusion matrix.
    pub fn index(self) -> usize {
        (self.value() + 1) as usize
    }
}

impl TryFrom<i8> for TrendClass {
    type Error = Error;

    fn try_from(v: i8) -> Result<Self> {
        match v {
            -1 => Ok(TrendClass::Decrease),
            0 => Ok(TrendClass::Stable),
            1 => Ok(TrendClass::Increase),
            other => Err(Error::InvalidInput(format!("trend class must be -1, 0 or 1, got {other}"))),
        }
    }
}

impl From<TrendClass> for i8 {
    fn from(c: TrendClass) -> i8 {
        c.value()
    }
}

impl fmt::Display for TrendClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

/// One indicator for one region, sampled monthly and normalized to `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeSeries<T = f64> {
    pub region_id: String,
    pub indicator: Indicator,
    /// Step index of the first sample; later samples follow with unit stride.
    pub start_step: i64,
    pub values: Vec<T>,
}

impl<T: Scalar> TimeSeries<T> {
    /// Builds a series, checking that every value lies in `[0, 1]`.
    pub fn new(region_id: impl Into<String>, indicator: Indicator, start_step: i64, values: Vec<T>) -> Result<Self> {
        let region_id = region_id.into();
        if let Some((i, v)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| !(**v >= T::zero() && **v <= T::one()))
        {
            return Err(Error::InvalidInput(format!(
                "series {region_id}: value {v} at position {i} is outside [0, 1]"
            )));
        }
        Ok(Self {
            region_id,
            indicator,
            start_step,
            values,
        })
    }

    /// Builds a series from `(step, value)` samples, which must have unit stride.
    pub fn from_samples(region_id: impl Into<String>, indicator: Indicator, samples: &[(i64, T)]) -> Result<Self> {
        let region_id = region_id.into();
        let Some(&(start, _)) = samples.first() else {
            return Err(Error::InvalidInput(format!("series {region_id} has no samples")));
        };
        for (w, pair) in samples.windows(2).enumerate() {
            if pair[1].0 != pair[0].0 + 1 {
                return Err(Error::InvalidInput(format!(
                    "series {region_id}: step {} follows step {} (position {}); steps must increase with unit stride",
                    pair[1].0,
                    pair[0].0,
                    w + 1
                )));
            }
        }
        Self::new(region_id, indicator, start, samples.iter().map(|s| s.1).collect())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Step index of the sample at `position`.
    pub fn step_at(&self, position: usize) -> i64 {
        self.start_step + position as i64
    }

    pub fn samples(&self) -> impl Iterator<Item = (i64, T)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(move |(i, v)| (self.start_step + i as i64, *v))
    }

    /// `(region_id, indicator)` key identifying the series.
    pub fn key(&self) -> (String, Indicator) {
        (self.region_id.clone(), self.indicator)
    }
}
