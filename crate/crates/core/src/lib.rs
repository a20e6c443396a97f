//! Trend detection for noisy indicator series by marker-based stigmergy.
//!
//! Each normalized sample is unbiased and released as a triangular mark;
//! marks accumulate and evaporate into a track; the track is unbiased and
//! abstracted as a best-fit triangular prototype; prototypes `lag` steps
//! apart are compared by intersection over union, and the signed
//! dissimilarity is discretized into decrease / stable / increase. The eight
//! structural parameters are tuned by differential evolution against a
//! labeled corpus.
//!
//! The numerical core is generic over [`Scalar`] (`f32` or `f64`); the
//! aliases below fix it to `f64`.

pub mod corpus;
pub mod datagen;
pub mod dissimilarity;
pub mod error;
pub mod eval;
pub mod mark;
pub mod optimizer;
pub mod params;
pub mod pipeline;
pub mod prototype;
pub mod scalar;
pub mod series;
pub mod smf;
pub mod track;

pub use dissimilarity::{classify, delta_p};
pub use error::{Error, ErrorKind, Result};
pub use mark::release_mark;
pub use params::{FixedSettings, GENOME_LEN};
pub use pipeline::{run_pipeline, EmissionFlag};
pub use prototype::{fit_prototype, grid_similarity, shape_similarity};
pub use scalar::Scalar;
pub use series::{Indicator, TrendClass};
pub use smf::smf;
pub use track::{saturation_height, trail_step, unbias_track};

pub type TimeSeries = series::TimeSeries<f64>;
pub type SmfParams = smf::SmfParams<f64>;
pub type Mark = mark::Mark<f64>;
pub type Track = track::Track<f64>;
pub type Prototype = prototype::Prototype<f64>;
pub type PipelineParams = params::PipelineParams<f64>;
pub type Pipeline = pipeline::Pipeline<f64>;
pub type Emission = pipeline::Emission<f64>;
pub type LabeledCorpus = corpus::LabeledCorpus<f64>;
pub type LabeledSeries = corpus::LabeledSeries<f64>;
pub type Candidate = optimizer::Candidate<f64>;
pub type Bounds = optimizer::Bounds<f64>;
pub type DeOutcome = optimizer::DeOutcome<f64>;
pub use optimizer::DeConfig;

/// Single-precision aliases.
pub mod f32 {
    pub type TimeSeries = crate::series::TimeSeries<f32>;
    pub type SmfParams = crate::smf::SmfParams<f32>;
    pub type Track = crate::track::Track<f32>;
    pub type Prototype = crate::prototype::Prototype<f32>;
    pub type PipelineParams = crate::params::PipelineParams<f32>;
    pub type Pipeline = crate::pipeline::Pipeline<f32>;
}
