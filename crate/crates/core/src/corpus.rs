//! Labeled corpora and their CSV representation.

use std::collections::HashMap;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pipeline::{Emission, EmissionFlag};
use crate::scalar::Scalar;
use crate::series::{Indicator, TimeSeries, TrendClass};

pub const SERIES_FILE: &str = "series.csv";
pub const LABELS_FILE: &str = "labels.csv";

/// A series with its ground-truth class at each scored step.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledSeries<T = f64> {
    pub series: TimeSeries<T>,
    pub labels: Vec<(i64, TrendClass)>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct LabeledCorpus<T = f64> {
    pub entries: Vec<LabeledSeries<T>>,
}

impl<T: Scalar> LabeledCorpus<T> {
    pub fn new(entries: Vec<LabeledSeries<T>>) -> Self {
        Self { entries }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Sub-corpus made of the entries at `indices`, in that order.
    pub fn subset(&self, indices: &[usize]) -> Self {
        Self {
            entries: indices.iter().map(|&i| self.entries[i].clone()).collect(),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct SeriesRow {
    region_id: String,
    indicator: Indicator,
    step: i64,
    value: f64,
}

#[derive(Debug, Serialize, Deserialize)]
struct LabelRow {
    region_id: String,
    indicator: Indicator,
    step: i64,
    label: TrendClass,
}

#[derive(Debug, Serialize, Deserialize)]
struct ClassRow {
    region_id: String,
    indicator: Indicator,
    step: i64,
    class: TrendClass,
    delta: f64,
    flag: EmissionFlag,
}

/// Reads series in `region_id,indicator,step,value` format. Series appear in
/// order of first occurrence; rows within a series may be in any order.
pub fn read_series<R: Read>(reader: R) -> Result<Vec<TimeSeries<f64>>> {
    let mut order: Vec<(String, Indicator)> = Vec::new();
    let mut rows: HashMap<(String, Indicator), Vec<(i64, f64)>> = HashMap::new();
    for row in csv::Reader::from_reader(reader).deserialize() {
        let row: SeriesRow = row?;
        let key = (row.region_id, row.indicator);
        let slot = rows.entry(key.clone()).or_insert_with(|| {
            order.push(key);
            Vec::new()
        });
        slot.push((row.step, row.value));
    }
    order
        .into_iter()
        .map(|key| {
            let mut samples = rows.remove(&key).unwrap_or_default();
            samples.sort_by_key(|s| s.0);
            TimeSeries::from_samples(key.0, key.1, &samples)
        })
        .collect()
}

pub fn write_series<W: Write>(writer: W, series: &[TimeSeries<f64>]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    for s in series {
        for (step, value) in s.samples() {
            w.serialize(SeriesRow {
                region_id: s.region_id.clone(),
                indicator: s.indicator,
                step,
                value,
            })?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn read_labels<R: Read>(reader: R) -> Result<HashMap<(String, Indicator), Vec<(i64, TrendClass)>>> {
    let mut out: HashMap<(String, Indicator), Vec<(i64, TrendClass)>> = HashMap::new();
    for row in csv::Reader::from_reader(reader).deserialize() {
        let row: LabelRow = row?;
        out.entry((row.region_id, row.indicator))
            .or_default()
            .push((row.step, row.label));
    }
    for labels in out.values_mut() {
        labels.sort_by_key(|l| l.0);
    }
    Ok(out)
}

pub fn write_labels<W: Write>(writer: W, corpus: &LabeledCorpus<f64>) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    for e in &corpus.entries {
        for &(step, label) in &e.labels {
            w.serialize(LabelRow {
                region_id: e.series.region_id.clone(),
                indicator: e.series.indicator,
                step,
                label,
            })?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Writes pipeline output in `region_id,indicator,step,class,delta,flag` format.
pub fn write_classes<W: Write>(writer: W, results: &[(&TimeSeries<f64>, Vec<Emission<f64>>)]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    for (s, emissions) in results {
        for e in emissions {
            w.serialize(ClassRow {
                region_id: s.region_id.clone(),
                indicator: s.indicator,
                step: e.step,
                class: e.class,
                delta: e.delta,
                flag: e.flag,
            })?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Joins series and labels; every series must have at least one label and
/// every label must refer to a step inside its series.
pub fn join(series: Vec<TimeSeries<f64>>, mut labels: HashMap<(String, Indicator), Vec<(i64, TrendClass)>>) -> Result<LabeledCorpus<f64>> {
    let mut entries = Vec::with_capacity(series.len());
    for s in series {
        let Some(l) = labels.remove(&s.key()) else {
            return Err(Error::InvalidInput(format!(
                "series {}/{} has no labels",
                s.region_id, s.indicator
            )));
        };
        let last = s.step_at(s.len().saturating_sub(1));
        if let Some(&(step, _)) = l.iter().find(|(step, _)| *step < s.start_step || *step > last) {
            return Err(Error::InvalidInput(format!(
                "label at step {step} lies outside series {}/{}",
                s.region_id, s.indicator
            )));
        }
        entries.push(LabeledSeries { series: s, labels: l });
    }
    if let Some((region, ind)) = labels.keys().next() {
        return Err(Error::InvalidInput(format!("labels for unknown series {region}/{ind}")));
    }
    Ok(LabeledCorpus { entries })
}

/// Loads `series.csv` and `labels.csv` from a corpus directory.
pub fn load_corpus(dir: &Path) -> Result<LabeledCorpus<f64>> {
    let series = read_series(std::fs::File::open(dir.join(SERIES_FILE))?)?;
    let labels = read_labels(std::fs::File::open(dir.join(LABELS_FILE))?)?;
    join(series, labels)
}

/// Writes `series.csv` and `labels.csv` into a corpus directory.
pub fn save_corpus(dir: &Path, corpus: &LabeledCorpus<f64>) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let series: Vec<TimeSeries<f64>> = corpus.entries.iter().map(|e| e.series.clone()).collect();
    write_series(std::fs::File::create(dir.join(SERIES_FILE))?, &series)?;
    write_labels(std::fs::File::create(dir.join(LABELS_FILE))?, corpus)?;
    Ok(())
}
