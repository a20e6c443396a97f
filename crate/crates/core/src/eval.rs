//! Repeated holdout evaluation, confusion matrices and the F x CR grid study.

use std::io::Write;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::corpus::LabeledCorpus;
use crate::datagen::derive_seed;
use crate::error::{Error, Result};
use crate::optimizer::{fitness_mse, optimize, scored_pairs, Bounds, DeConfig};
use crate::params::{FixedSettings, PipelineParams};
use crate::pipeline::{run_pipeline, Emission};
use crate::series::{TimeSeries, TrendClass};

/// Smallest corpus that can be split.
pub const MIN_SPLIT_SERIES: usize = 5;

/// Paper-protocol grid values.
pub const GRID_F: [f64; 3] = [0.4, 0.6, 0.8];
pub const GRID_CR: [f64; 3] = [0.3, 0.6, 0.9];

/// Random partition of `0..n` into train and test indices, each sorted.
pub fn split_indices(n: usize, train_fraction: f64, seed: u64) -> Result<(Vec<usize>, Vec<usize>)> {
    if n < MIN_SPLIT_SERIES {
        return Err(Error::InvalidInput(format!(
            "corpus has {n} series, splitting needs at least {MIN_SPLIT_SERIES}"
        )));
    }
    if !(0.0..=1.0).contains(&train_fraction) {
        return Err(Error::Config(format!("train_fraction must lie in [0, 1], got {train_fraction}")));
    }
    let n_train = (train_fraction * n as f64).round() as usize;
    if n_train == 0 {
        return Err(Error::Config("train_fraction leaves the training set empty".into()));
    }
    if n_train == n {
        return Err(Error::Config("train_fraction leaves the test set empty".into()));
    }
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut train = idx[..n_train].to_vec();
    let mut test = idx[n_train..].to_vec();
    train.sort_unstable();
    test.sort_unstable();
    Ok((train, test))
}

/// Partitions the corpus by series.
pub fn split(corpus: &LabeledCorpus, train_fraction: f64, seed: u64) -> Result<(LabeledCorpus, LabeledCorpus)> {
    let (train, test) = split_indices(corpus.len(), train_fraction, seed)?;
    Ok((corpus.subset(&train), corpus.subset(&test)))
}

/// Counts of (truth, predicted) pairs; rows are truth, columns predictions,
/// both ordered decrease, stable, increase.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Confusion {
    pub counts: [[u64; 3]; 3],
}

impl Confusion {
    pub fn record(&mut self, truth: TrendClass, predicted: TrendClass) {
        self.counts[truth.index()][predicted.index()] += 1;
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    pub fn row_sums(&self) -> [u64; 3] {
        self.counts.map(|r| r.iter().sum())
    }

    pub fn merge(&mut self, other: &Confusion) {
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
        }
    }

    /// Mean squared class residual; `None` when empty.
    pub fn mse(&self) -> Option<f64> {
        let total = self.total();
        if total == 0 {
            return None;
        }
        let mut sum = 0u64;
        for (i, row) in self.counts.iter().enumerate() {
            for (j, &c) in row.iter().enumerate() {
                let d = i.abs_diff(j) as u64;
                sum += c * d * d;
            }
        }
        Some(sum as f64 / total as f64)
    }
}

/// Anything that maps a series to per-step emissions.
pub trait Classifier: Sync {
    fn classify(&self, series: &TimeSeries) -> Result<Vec<Emission<f64>>>;
}

impl Classifier for PipelineParams<f64> {
    fn classify(&self, series: &TimeSeries) -> Result<Vec<Emission<f64>>> {
        run_pipeline(series, self)
    }
}

/// Confusion of a classifier over every scored point of a corpus.
pub fn confusion<C: Classifier + ?Sized>(classifier: &C, corpus: &LabeledCorpus) -> Result<Confusion> {
    let mut m = Confusion::default();
    for entry in &corpus.entries {
        let emissions = classifier.classify(&entry.series)?;
        for (truth, pred) in scored_pairs(&emissions, &entry.labels) {
            m.record(truth, pred);
        }
    }
    Ok(m)
}

fn corpus_mse<C: Classifier + ?Sized>(classifier: &C, corpus: &LabeledCorpus) -> Result<(Confusion, f64)> {
    let m = confusion(classifier, corpus)?;
    let mse = m
        .mse()
        .ok_or_else(|| Error::InvalidInput("corpus has no scored comparison points".into()))?;
    Ok((m, mse))
}

/// Output of training on one split.
#[derive(Debug, Clone)]
pub struct Trained<C> {
    pub classifier: C,
    /// Genome of the trained parameters, empty when not applicable.
    pub params: Vec<f64>,
    /// Best fitness per generation, empty when nothing was optimized.
    pub history: Vec<f64>,
}

pub trait Trainer: Sync {
    type Output: Classifier + Send;

    fn train(&self, train: &LabeledCorpus, seed: u64) -> Result<Trained<Self::Output>>;
}

/// Differential evolution of the pipeline parameters.
#[derive(Debug, Clone)]
pub struct DeTrainer {
    pub config: DeConfig,
    pub fixed: FixedSettings,
    pub bounds: Bounds<f64>,
}

impl DeTrainer {
    pub fn new(config: DeConfig, fixed: FixedSettings) -> Self {
        Self { config, fixed, bounds: Bounds::pipeline() }
    }
}

impl Trainer for DeTrainer {
    type Output = PipelineParams<f64>;

    fn train(&self, train: &LabeledCorpus, seed: u64) -> Result<Trained<Self::Output>> {
        let config = DeConfig { seed, ..self.config.clone() };
        let outcome = optimize(|g: &[f64]| fitness_mse(g, train, self.fixed), &config, &self.bounds)?;
        let params = PipelineParams::from_genome(&outcome.best.vector, self.fixed)?;
        Ok(Trained {
            params: params.to_genome()?.to_vec(),
            classifier: params,
            history: outcome.history,
        })
    }
}

/// Fixed parameters, no training.
#[derive(Debug, Clone)]
pub struct FixedTrainer(pub PipelineParams<f64>);

impl Trainer for FixedTrainer {
    type Output = PipelineParams<f64>;

    fn train(&self, _train: &LabeledCorpus, _seed: u64) -> Result<Trained<Self::Output>> {
        Ok(Trained {
            params: self.0.to_genome()?.to_vec(),
            classifier: self.0.clone(),
            history: Vec::new(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Protocol {
    pub trials: usize,
    pub repetitions: usize,
    pub train_fraction: f64,
    pub seed: u64,
}

impl Default for Protocol {
    fn default() -> Self {
        Self { trials: 5, repetitions: 5, train_fraction: 0.2, seed: 0 }
    }
}

impl Protocol {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 || self.repetitions == 0 {
            return Err(Error::Config("trials and repetitions must be positive".into()));
        }
        Ok(())
    }

    /// Split and training seeds of one run. They depend only on the protocol
    /// seed and the run position, so different trainers see the same splits.
    pub fn run_seeds(&self, trial: usize, repetition: usize) -> (u64, u64) {
        let run = derive_seed(self.seed, (trial * self.repetitions + repetition) as u64);
        (derive_seed(run, 0), derive_seed(run, 1))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialReport {
    pub trial_id: usize,
    pub repetition: usize,
    pub split_seed: u64,
    pub train_seed: u64,
    pub train_series: Vec<String>,
    pub train_mse: f64,
    pub test_mse: f64,
    /// Test-set confusion.
    pub confusion: Confusion,
    pub params_used: Vec<f64>,
    /// Test MSE of the baseline classifier on the same split.
    pub baseline_test_mse: Option<f64>,
    pub history: Vec<f64>,
}

/// Mean, sample standard deviation and 95% Student-t half-width.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub n: usize,
    pub mean: f64,
    pub std: f64,
    pub ci95: f64,
}

impl Summary {
    /// Standard deviation and interval are zero for a single value.
    pub fn of(values: &[f64]) -> Result<Self> {
        let n = values.len();
        if n == 0 {
            return Err(Error::InvalidInput("no values to summarize".into()));
        }
        let mean = values.iter().sum::<f64>() / n as f64;
        if n == 1 {
            return Ok(Self { n, mean, std: 0.0, ci95: 0.0 });
        }
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        let std = var.sqrt();
        let t = StudentsT::new(0.0, 1.0, (n - 1) as f64)
            .map_err(|e| Error::InvalidInput(e.to_string()))?
            .inverse_cdf(0.975);
        Ok(Self { n, mean, std, ci95: t * std / (n as f64).sqrt() })
    }
}

/// One row of the per-trial table: statistics over the repetitions of a trial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialSummary {
    pub trial_id: usize,
    pub train: Summary,
    pub test: Summary,
    pub baseline_test: Option<Summary>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialsOutcome {
    pub protocol: Protocol,
    pub reports: Vec<TrialReport>,
    pub trials: Vec<TrialSummary>,
    /// Over trial means.
    pub train: Summary,
    pub test: Summary,
    pub baseline_test: Option<Summary>,
    /// Pooled test confusion of every run.
    pub confusion: Confusion,
    /// Per-generation mean of the best-fitness histories; empty without optimization.
    pub mean_history: Vec<f64>,
}

impl TrialsOutcome {
    /// Relative drop of the mean best fitness between two generations.
    pub fn relative_improvement(&self, from: usize, to: usize) -> Option<f64> {
        let a = *self.mean_history.get(from)?;
        let b = *self.mean_history.get(to)?;
        (a > 0.0).then(|| (a - b) / a)
    }

    /// Per-trial table: `trial,train_mean,train_std,test_mean,test_std`.
    pub fn write_trial_table<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["trial", "train_mean", "train_std", "test_mean", "test_std"])?;
        for t in &self.trials {
            w.write_record([
                (t.trial_id + 1).to_string(),
                fmt(t.train.mean),
                fmt(t.train.std),
                fmt(t.test.mean),
                fmt(t.test.std),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    /// Fitness histories in long form: `trial,repetition,generation,best_fitness`.
    pub fn write_history<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["trial", "repetition", "generation", "best_fitness"])?;
        for r in &self.reports {
            for (g, f) in r.history.iter().enumerate() {
                w.write_record([
                    (r.trial_id + 1).to_string(),
                    (r.repetition + 1).to_string(),
                    g.to_string(),
                    fmt(*f),
                ])?;
            }
        }
        w.flush()?;
        Ok(())
    }
}

fn fmt(v: f64) -> String {
    format!("{v:.6}")
}

/// Repeated holdout: every (trial, repetition) run draws a fresh split,
/// trains on it and scores train and test sets. The optional baseline is
/// scored on the same test sets. Runs execute concurrently and are reported
/// in (trial, repetition) order.
pub fn run_trials<T: Trainer, B: Classifier>(
    corpus: &LabeledCorpus,
    trainer: &T,
    baseline: Option<&B>,
    protocol: &Protocol,
) -> Result<TrialsOutcome> {
    protocol.validate()?;
    let runs: Vec<(usize, usize)> = (0..protocol.trials)
        .flat_map(|t| (0..protocol.repetitions).map(move |r| (t, r)))
        .collect();
    let reports = runs
        .par_iter()
        .map(|&(trial_id, repetition)| {
            let (split_seed, train_seed) = protocol.run_seeds(trial_id, repetition);
            let (train_idx, test_idx) = split_indices(corpus.len(), protocol.train_fraction, split_seed)?;
            let train = corpus.subset(&train_idx);
            let test = corpus.subset(&test_idx);
            let trained = trainer.train(&train, train_seed)?;
            let (_, train_mse) = corpus_mse(&trained.classifier, &train)?;
            let (confusion, test_mse) = corpus_mse(&trained.classifier, &test)?;
            let baseline_test_mse = baseline.map(|b| corpus_mse(b, &test).map(|r| r.1)).transpose()?;
            Ok(TrialReport {
                trial_id,
                repetition,
                split_seed,
                train_seed,
                train_series: train.entries.iter().map(|e| e.series.region_id.clone()).collect(),
                train_mse,
                test_mse,
                confusion,
                params_used: trained.params,
                baseline_test_mse,
                history: trained.history,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    summarize(*protocol, reports)
}

fn summarize(protocol: Protocol, reports: Vec<TrialReport>) -> Result<TrialsOutcome> {
    let mut trials = Vec::with_capacity(protocol.trials);
    for t in 0..protocol.trials {
        let runs: Vec<&TrialReport> = reports.iter().filter(|r| r.trial_id == t).collect();
        let pick = |f: fn(&TrialReport) -> f64| runs.iter().map(|r| f(r)).collect::<Vec<_>>();
        let baseline: Option<Vec<f64>> = runs.iter().map(|r| r.baseline_test_mse).collect();
        trials.push(TrialSummary {
            trial_id: t,
            train: Summary::of(&pick(|r| r.train_mse))?,
            test: Summary::of(&pick(|r| r.test_mse))?,
            baseline_test: baseline.map(|b| Summary::of(&b)).transpose()?,
        });
    }
    let means = |f: fn(&TrialSummary) -> f64| trials.iter().map(f).collect::<Vec<_>>();
    let train = Summary::of(&means(|t| t.train.mean))?;
    let test = Summary::of(&means(|t| t.test.mean))?;
    let baseline_test = trials
        .iter()
        .map(|t| t.baseline_test.map(|s| s.mean))
        .collect::<Option<Vec<_>>>()
        .map(|b| Summary::of(&b))
        .transpose()?;
    let mut confusion = Confusion::default();
    for r in &reports {
        confusion.merge(&r.confusion);
    }
    let generations = reports.iter().map(|r| r.history.len()).min().unwrap_or(0);
    let mean_history = (0..generations)
        .map(|g| reports.iter().map(|r| r.history[g]).sum::<f64>() / reports.len() as f64)
        .collect();
    Ok(TrialsOutcome {
        protocol,
        reports,
        trials,
        train,
        test,
        baseline_test,
        confusion,
        mean_history,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridCell {
    pub f: f64,
    pub cr: f64,
    pub train: Summary,
    pub test: Summary,
    pub mean_history: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridReport {
    pub protocol: Protocol,
    pub f_values: Vec<f64>,
    pub cr_values: Vec<f64>,
    /// Row-major by CR, then F.
    pub cells: Vec<GridCell>,
}

impl GridReport {
    pub fn cell(&self, f: f64, cr: f64) -> Option<&GridCell> {
        self.cells.iter().find(|c| c.f == f && c.cr == cr)
    }

    /// 1-based rank of a cell by mean test MSE; ties share the better rank.
    pub fn rank(&self, f: f64, cr: f64) -> Option<usize> {
        let m = self.cell(f, cr)?.test.mean;
        Some(1 + self.cells.iter().filter(|c| c.test.mean < m).count())
    }

    /// Table with one row per CR and one column per F, cells `mean ± ci95`.
    pub fn write_table<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        let mut header = vec!["CR\\F".to_string()];
        header.extend(self.f_values.iter().map(|f| f.to_string()));
        w.write_record(&header)?;
        for &cr in &self.cr_values {
            let mut row = vec![cr.to_string()];
            for &f in &self.f_values {
                let c = self.cell(f, cr).expect("grid cell");
                row.push(format!("{:.4} ± {:.4}", c.test.mean, c.test.ci95));
            }
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Runs the protocol once per (F, CR) pair. Every cell sees the same splits
/// and training seeds.
pub fn grid_study(
    corpus: &LabeledCorpus,
    base: &DeConfig,
    fixed: FixedSettings,
    f_values: &[f64],
    cr_values: &[f64],
    protocol: &Protocol,
) -> Result<GridReport> {
    if f_values.is_empty() || cr_values.is_empty() {
        return Err(Error::Config("grid needs at least one F and one CR value".into()));
    }
    let mut cells = Vec::with_capacity(f_values.len() * cr_values.len());
    for &cr in cr_values {
        for &f in f_values {
            let trainer = DeTrainer::new(DeConfig { f, cr, ..base.clone() }, fixed);
            let out = run_trials::<_, PipelineParams<f64>>(corpus, &trainer, None, protocol)?;
            cells.push(GridCell {
                f,
                cr,
                train: out.train,
                test: out.test,
                mean_history: out.mean_history,
            });
        }
    }
    Ok(GridReport {
        protocol: *protocol,
        f_values: f_values.to_vec(),
        cr_values: cr_values.to_vec(),
        cells,
    })
}
