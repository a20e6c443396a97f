//! The full trend pipeline for one series: unbias, mark, trail, prototype,
//! compare against the prototype `lag` steps earlier, classify.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::dissimilarity::{classify, delta_p};
use crate::error::{Error, Result};
use crate::mark::release_mark;
use crate::params::PipelineParams;
use crate::prototype::{Prototype, PrototypeFitter};
use crate::scalar::Scalar;
use crate::series::{TimeSeries, TrendClass};
use crate::smf::smf;
use crate::track::{unbias_into, Track};

/// Whether an emitted classification rests on two fitted prototypes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EmissionFlag {
    Ok,
    /// The current or lagged unbiased track was identically zero.
    Degenerate,
}

impl std::fmt::Display for EmissionFlag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            EmissionFlag::Ok => "ok",
            EmissionFlag::Degenerate => "degenerate",
        })
    }
}

/// Classification emitted at one step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Emission<T = f64> {
    pub step: i64,
    pub class: TrendClass,
    pub delta: T,
    pub flag: EmissionFlag,
}

/// Step-at-a-time pipeline state for a single series.
#[derive(Debug, Clone)]
pub struct Pipeline<T = f64> {
    params: PipelineParams<T>,
    i_max: T,
    track: Track<T>,
    unbiased: Vec<T>,
    fitter: PrototypeFitter<T>,
    /// Prototypes of the last `lag + 1` steps, oldest first.
    history: VecDeque<Option<Prototype<T>>>,
    position: usize,
}

impl<T: Scalar> Pipeline<T> {
    pub fn new(params: PipelineParams<T>) -> Result<Self> {
        params.validate()?;
        let i_max = params.i_max()?;
        Ok(Self {
            i_max,
            track: Track::empty(params.bins),
            unbiased: Vec::with_capacity(params.bins),
            fitter: PrototypeFitter::new(params.bins, params.epsilon, i_max),
            history: VecDeque::with_capacity(params.lag + 1),
            position: 0,
            params,
        })
    }

    pub fn params(&self) -> &PipelineParams<T> {
        &self.params
    }

    pub fn track(&self) -> &Track<T> {
        &self.track
    }

    /// Feeds one raw sample; returns a classification once `warmup + lag`
    /// steps have been seen.
    pub fn push(&mut self, step: i64, raw: T) -> Option<Emission<T>> {
        let p = &self.params;
        let value = smf(raw, &p.marking);
        let mark = release_mark(value, p);
        self.track.deposit(&mark, p.theta);
        unbias_into(&self.track.intensities, &p.prototyping, self.i_max, &mut self.unbiased);
        let proto = match self.fitter.best_bin(&self.unbiased) {
            Ok((k, _)) => Some(Prototype {
                center: crate::track::bin_center(k, p.bins),
                half_base: p.epsilon,
                height: self.i_max,
            }),
            Err(_) => None,
        };

        if self.history.len() == p.lag + 1 {
            self.history.pop_front();
        }
        self.history.push_back(proto);
        let t = self.position;
        self.position += 1;
        if t < p.warmup + p.lag {
            return None;
        }

        let previous = self.history.front().copied().flatten();
        Some(match (proto, previous) {
            (Some(cur), Some(prev)) => {
                let delta = delta_p(&cur, &prev);
                Emission {
                    step,
                    class: classify(delta, &p.dissimilarity),
                    delta,
                    flag: EmissionFlag::Ok,
                }
            }
            _ => Emission {
                step,
                class: TrendClass::Stable,
                delta: T::zero(),
                flag: EmissionFlag::Degenerate,
            },
        })
    }
}

/// Runs the pipeline over a whole series.
pub fn run_pipeline<T: Scalar>(series: &TimeSeries<T>, params: &PipelineParams<T>) -> Result<Vec<Emission<T>>> {
    let required = params.lag + params.warmup;
    if series.len() <= required {
        return Err(Error::InsufficientData {
            len: series.len(),
            required,
        });
    }
    let mut pipeline = Pipeline::new(params.clone())?;
    Ok(series
        .samples()
        .filter_map(|(step, v)| pipeline.push(step, v))
        .collect())
}
