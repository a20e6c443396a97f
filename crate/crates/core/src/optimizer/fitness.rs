use crate::corpus::LabeledCorpus;
use crate::error::{Error, Result};
use crate::params::{FixedSettings, PipelineParams};
use crate::pipeline::{run_pipeline, Emission};
use crate::scalar::Scalar;
use crate::series::TrendClass;

/// Comparison points skipped at the start of each series before scoring.
pub const SKIPPED_COMPARISONS: usize = 3;

/// Pairs `(truth, predicted)` for every emitted step that carries a label,
/// after dropping the first [`SKIPPED_COMPARISONS`] emissions.
pub fn scored_pairs<T: Scalar>(emissions: &[Emission<T>], labels: &[(i64, TrendClass)]) -> Vec<(TrendClass, TrendClass)> {
    let mut out = Vec::with_capacity(emissions.len());
    let mut li = labels.iter().peekable();
    for e in emissions.iter().skip(SKIPPED_COMPARISONS) {
        while li.next_if(|(step, _)| *step < e.step).is_some() {}
        if let Some(&&(step, truth)) = li.peek() {
            if step == e.step {
                out.push((truth, e.class));
            }
        }
    }
    out
}

/// Mean squared class residual of the pipeline over a corpus.
pub fn params_mse<T: Scalar>(params: &PipelineParams<T>, corpus: &LabeledCorpus<T>) -> Result<T> {
    if corpus.is_empty() {
        return Err(Error::InvalidInput("empty corpus".into()));
    }
    let mut sum = 0i64;
    let mut count = 0usize;
    for entry in &corpus.entries {
        let emissions = run_pipeline(&entry.series, params)?;
        for (truth, pred) in scored_pairs(&emissions, &entry.labels) {
            let r = i64::from(truth.value() - pred.value());
            sum += r * r;
            count += 1;
        }
    }
    if count == 0 {
        return Err(Error::InvalidInput("corpus has no scored comparison points".into()));
    }
    Ok(T::lit(sum as f64) / T::count(count))
}

/// Fitness of an 8-component genome: MSE of the decoded pipeline on `corpus`.
pub fn fitness_mse<T: Scalar>(genome: &[T], corpus: &LabeledCorpus<T>, fixed: FixedSettings) -> Result<T> {
    let params = PipelineParams::from_genome(genome, fixed)?;
    params_mse(&params, corpus)
}
