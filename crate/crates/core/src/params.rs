//! Pipeline parameters and their 8-dimensional search encoding.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::smf::SmfParams;
use crate::track::saturation_height;

/// Number of tunable parameters.
pub const GENOME_LEN: usize = 8;

/// Names of the tunable parameters in genome order.
pub const GENOME_NAMES: [&str; GENOME_LEN] = [
    "marking.alpha",
    "marking.beta",
    "epsilon",
    "theta",
    "prototyping.alpha",
    "prototyping.beta",
    "dissimilarity.alpha",
    "dissimilarity.beta",
];

pub const DEFAULT_LAG: usize = 24;
pub const DEFAULT_BINS: usize = 1000;
pub const MIN_BINS: usize = 100;

/// Minimum gap enforced between decoded `alpha` and `beta`.
const MIN_SMF_WIDTH: f64 = 1e-6;

/// Structural parameters of the trend pipeline.
///
/// `prototyping` thresholds are in intensity units, within `(0, I_max)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineParams<T = f64> {
    pub marking: SmfParams<T>,
    pub epsilon: T,
    pub theta: T,
    pub prototyping: SmfParams<T>,
    pub dissimilarity: SmfParams<T>,
    #[serde(default = "default_lag")]
    pub lag: usize,
    #[serde(default = "default_bins")]
    pub bins: usize,
    #[serde(default)]
    pub warmup: usize,
}

fn default_lag() -> usize {
    DEFAULT_LAG
}

fn default_bins() -> usize {
    DEFAULT_BINS
}

/// Settings held fixed while the 8 parameters are tuned.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixedSettings {
    pub lag: usize,
    pub bins: usize,
    pub warmup: usize,
}

impl Default for FixedSettings {
    fn default() -> Self {
        Self {
            lag: DEFAULT_LAG,
            bins: DEFAULT_BINS,
            warmup: 0,
        }
    }
}

impl<T: Scalar> PipelineParams<T> {
    /// Hand-tuned expert values with default lag, grid and warm-up.
    pub fn expert() -> Self {
        Self::expert_with(FixedSettings::default())
    }

    pub fn expert_with(fixed: FixedSettings) -> Self {
        let s = |a: f64, b: f64| SmfParams {
            alpha: T::lit(a),
            beta: T::lit(b),
        };
        Self {
            marking: s(0.2, 0.8),
            epsilon: T::lit(0.2),
            theta: T::lit(0.65),
            prototyping: s(0.15, 0.75),
            dissimilarity: s(0.35, 0.65),
            lag: fixed.lag,
            bins: fixed.bins,
            warmup: fixed.warmup,
        }
    }

    pub fn fixed(&self) -> FixedSettings {
        FixedSettings {
            lag: self.lag,
            bins: self.bins,
            warmup: self.warmup,
        }
    }

    /// Saturation height for unit marks, `1 / (1 - theta)`.
    pub fn i_max(&self) -> Result<T> {
        saturation_height(T::one(), self.theta)
    }

    pub fn validate(&self) -> Result<()> {
        let unit = |name: &str, v: T| -> Result<()> {
            if !(v > T::zero() && v < T::one()) {
                return Err(Error::param(name, format!("must lie in (0, 1), got {v}")));
            }
            Ok(())
        };
        self.marking.validate_within("marking", T::one())?;
        unit("epsilon", self.epsilon)?;
        unit("theta", self.theta)?;
        self.prototyping.validate_within("prototyping", self.i_max()?)?;
        self.dissimilarity.validate_within("dissimilarity", T::one())?;
        if self.lag < 1 {
            return Err(Error::param("lag", "must be at least 1"));
        }
        if self.bins < MIN_BINS {
            return Err(Error::param("bins", format!("must be at least {MIN_BINS}, got {}", self.bins)));
        }
        Ok(())
    }

    /// Encodes as a genome; prototyping thresholds become fractions of `I_max`.
    pub fn to_genome(&self) -> Result<[T; GENOME_LEN]> {
        let i_max = self.i_max()?;
        Ok([
            self.marking.alpha,
            self.marking.beta,
            self.epsilon,
            self.theta,
            self.prototyping.alpha / i_max,
            self.prototyping.beta / i_max,
            self.dissimilarity.alpha,
            self.dissimilarity.beta,
        ])
    }

    /// Decodes a genome whose components all lie in `(0, 1)`.
    ///
    /// Each `(alpha, beta)` pair is ordered, and separated by a minimal gap
    /// if the two coincide.
    pub fn from_genome(genome: &[T], fixed: FixedSettings) -> Result<Self> {
        if genome.len() != GENOME_LEN {
            return Err(Error::InvalidInput(format!(
                "genome has {} components, expected {GENOME_LEN}",
                genome.len()
            )));
        }
        let theta = genome[3];
        let i_max = saturation_height(T::one(), theta)?;
        let pair = |a: T, b: T, scale: T| {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            let hi = hi.max(lo + T::lit(MIN_SMF_WIDTH));
            SmfParams {
                alpha: lo * scale,
                beta: hi * scale,
            }
        };
        Ok(Self {
            marking: pair(genome[0], genome[1], T::one()),
            epsilon: genome[2],
            theta,
            prototyping: pair(genome[4], genome[5], i_max),
            dissimilarity: pair(genome[6], genome[7], T::one()),
            lag: fixed.lag,
            bins: fixed.bins,
            warmup: fixed.warmup,
        })
    }

    pub fn to_f64(&self) -> PipelineParams<f64> {
        let c = |p: &SmfParams<T>| SmfParams {
            alpha: p.alpha.as_f64(),
            beta: p.beta.as_f64(),
        };
        PipelineParams {
            marking: c(&self.marking),
            epsilon: self.epsilon.as_f64(),
            theta: self.theta.as_f64(),
            prototyping: c(&self.prototyping),
            dissimilarity: c(&self.dissimilarity),
            lag: self.lag,
            bins: self.bins,
            warmup: self.warmup,
        }
    }
}
