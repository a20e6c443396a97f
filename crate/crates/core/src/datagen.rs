//! Normalized, labeled series: min-max normalization, monthly granulation of
//! annual group statistics, and synthetic piecewise-linear corpora.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::corpus::{LabeledCorpus, LabeledSeries};
use crate::error::{Error, Result};
use crate::params::DEFAULT_LAG;
use crate::series::{Indicator, TimeSeries, TrendClass};

pub const MONTHS_PER_YEAR: usize = 12;

/// Affine map of `raw` onto `[0, 1]`.
pub fn normalize_minmax(raw: &[f64]) -> Result<Vec<f64>> {
    let (lo, hi) = raw
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)));
    if !(hi > lo) || !(hi - lo).is_finite() {
        return Err(Error::DegenerateNormalization);
    }
    let range = hi - lo;
    Ok(raw.iter().map(|&x| ((x - lo) / range).clamp(0.0, 1.0)).collect())
}

/// SplitMix64 finalizer: derives an independent stream seed from a master
/// seed and a stream index.
pub fn derive_seed(master: u64, stream: u64) -> u64 {
    let mut z = master ^ stream.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Annual mean and standard deviation of one indicator for a group of regions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnualGroupStats {
    pub group_id: String,
    pub years: Vec<YearStats>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct YearStats {
    pub mu: f64,
    pub sigma: f64,
}

impl AnnualGroupStats {
    pub fn validate(&self) -> Result<()> {
        if self.years.is_empty() {
            return Err(Error::InvalidInput(format!("group {} has no years", self.group_id)));
        }
        if let Some((i, y)) = self
            .years
            .iter()
            .enumerate()
            .find(|(_, y)| !(y.sigma >= 0.0) || !y.mu.is_finite() || !y.sigma.is_finite())
        {
            return Err(Error::InvalidInput(format!(
                "group {} year {i}: need finite mu and sigma >= 0, got mu={} sigma={}",
                self.group_id, y.mu, y.sigma
            )));
        }
        Ok(())
    }
}

/// Twelve draws per year from `Normal(mu / 12, sigma^2 / 12)`, unnormalized.
pub fn monthly_samples<R: Rng>(stats: &AnnualGroupStats, rng: &mut R) -> Result<Vec<f64>> {
    stats.validate()?;
    let months = MONTHS_PER_YEAR as f64;
    let mut out = Vec::with_capacity(stats.years.len() * MONTHS_PER_YEAR);
    for y in &stats.years {
        let normal = Normal::new(y.mu / months, y.sigma / months.sqrt())
            .map_err(|e| Error::InvalidInput(format!("group {}: {e}", stats.group_id)))?;
        out.extend((0..MONTHS_PER_YEAR).map(|_| normal.sample(rng)));
    }
    Ok(out)
}

/// Monthly series derived from annual group statistics, min-max normalized.
pub fn monthly_from_annual<R: Rng>(stats: &AnnualGroupStats, indicator: Indicator, rng: &mut R) -> Result<TimeSeries<f64>> {
    let raw = monthly_samples(stats, rng)?;
    TimeSeries::new(stats.group_id.clone(), indicator, 0, normalize_minmax(&raw)?)
}

/// Span of constant slope in a latent signal; `end_step` is exclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrendSegment {
    pub start_step: i64,
    pub end_step: i64,
    pub slope_class: TrendClass,
    /// Absolute change per step, in the units of the unnormalized latent signal.
    pub slope_magnitude: f64,
}

impl TrendSegment {
    fn slope(&self) -> f64 {
        f64::from(self.slope_class.value()) * self.slope_magnitude
    }
}

/// Checks segments are contiguous, non-empty and start at step 0.
pub fn validate_segments(segments: &[TrendSegment]) -> Result<()> {
    let Some(first) = segments.first() else {
        return Err(Error::InvalidInput("no segments".into()));
    };
    if first.start_step != 0 {
        return Err(Error::InvalidInput("first segment must start at step 0".into()));
    }
    for (i, s) in segments.iter().enumerate() {
        if s.end_step <= s.start_step {
            return Err(Error::InvalidInput(format!("segment {i} is empty")));
        }
        if !(s.slope_magnitude >= 0.0 && s.slope_magnitude.is_finite()) {
            return Err(Error::InvalidInput(format!("segment {i}: slope magnitude must be finite and >= 0")));
        }
        if i > 0 && segments[i - 1].end_step != s.start_step {
            return Err(Error::InvalidInput(format!("segment {i} does not start where segment {} ends", i - 1)));
        }
    }
    Ok(())
}

/// Unnormalized piecewise-linear levels starting from `start`.
pub fn walk_levels(start: f64, segments: &[TrendSegment]) -> Result<Vec<f64>> {
    validate_segments(segments)?;
    let mut level = start;
    let mut raw = Vec::new();
    for s in segments {
        for _ in s.start_step..s.end_step {
            raw.push(level);
            level += s.slope();
        }
    }
    Ok(raw)
}

/// Piecewise-linear latent signal over the segments, normalized to `[0, 1]`.
/// A signal with no variation sits at 0.5.
pub fn latent_signal(segments: &[TrendSegment]) -> Result<Vec<f64>> {
    let raw = walk_levels(0.0, segments)?;
    Ok(normalize_minmax(&raw).unwrap_or_else(|_| vec![0.5; raw.len()]))
}

/// Ground truth from a latent signal: at each step `t >= lag`, the sign of
/// `latent[t] - latent[t - lag]` when its magnitude exceeds `band`, else stable.
pub fn lag_labels(latent: &[f64], lag: usize, band: f64) -> Vec<(i64, TrendClass)> {
    (lag..latent.len())
        .map(|t| {
            let diff = latent[t] - latent[t - lag];
            let class = if diff.abs() > band {
                TrendClass::from_sign(if diff > 0.0 { 1 } else { -1 })
            } else {
                TrendClass::Stable
            };
            (t as i64, class)
        })
        .collect()
}

/// Explicit segment as written in a corpus spec.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SegmentSpec {
    pub months: usize,
    /// Signed change per month in latent units.
    pub slope: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesSpec {
    pub region_id: String,
    #[serde(default = "default_indicator")]
    pub indicator: Indicator,
    pub segments: Vec<SegmentSpec>,
}

/// Randomly drawn piecewise-linear series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RandomSeriesSpec {
    pub count: usize,
    pub years: usize,
    pub min_segments: usize,
    pub max_segments: usize,
    pub min_segment_months: usize,
    /// Range of per-month slope magnitudes for rising or falling segments.
    pub slope_range: (f64, f64),
    /// Interval the latent walk is kept inside.
    pub level_range: (f64, f64),
    pub region_prefix: String,
}

impl Default for RandomSeriesSpec {
    fn default() -> Self {
        Self {
            count: 50,
            years: 15,
            min_segments: 2,
            max_segments: 4,
            min_segment_months: 30,
            slope_range: (0.004, 0.012),
            level_range: (0.2, 0.8),
            region_prefix: "syn".into(),
        }
    }
}

/// Series granulated from annual statistics; labelled from the annual means.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSpec {
    #[serde(default = "default_indicator")]
    pub indicator: Indicator,
    #[serde(flatten)]
    pub stats: AnnualGroupStats,
}

fn default_indicator() -> Indicator {
    Indicator::Synthetic
}

/// Description of a synthetic corpus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CorpusSpec {
    /// Standard deviation of additive Gaussian noise, in normalized units.
    pub noise: f64,
    /// Minimum lag-difference of the latent signal that counts as a trend.
    pub stability_band: f64,
    pub lag: usize,
    pub series: Vec<SeriesSpec>,
    pub random: Option<RandomSeriesSpec>,
    pub groups: Vec<GroupSpec>,
}

impl Default for CorpusSpec {
    fn default() -> Self {
        Self {
            noise: 0.02,
            stability_band: 0.05,
            lag: DEFAULT_LAG,
            series: Vec::new(),
            random: None,
            groups: Vec::new(),
        }
    }
}

impl CorpusSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |field: &str, why: &str| Err(Error::Config(format!("corpus spec field `{field}`: {why}")));
        if !(self.noise >= 0.0 && self.noise.is_finite()) {
            return bad("noise", "must be finite and >= 0");
        }
        if !(self.stability_band >= 0.0 && self.stability_band < 1.0) {
            return bad("stability_band", "must lie in [0, 1)");
        }
        if self.lag < 1 {
            return bad("lag", "must be at least 1");
        }
        for (i, s) in self.series.iter().enumerate() {
            if s.segments.is_empty() {
                return bad(&format!("series[{i}].segments"), "must not be empty");
            }
            if s.segments.iter().any(|g| g.months == 0 || !g.slope.is_finite()) {
                return bad(&format!("series[{i}].segments"), "months must be positive and slopes finite");
            }
            if s.segments.iter().map(|g| g.months).sum::<usize>() <= self.lag {
                return bad(&format!("series[{i}].segments"), "total months must exceed lag");
            }
        }
        if let Some(r) = &self.random {
            if r.min_segments < 1 || r.max_segments < r.min_segments {
                return bad("random.min_segments", "need 1 <= min_segments <= max_segments");
            }
            if r.years * MONTHS_PER_YEAR < r.max_segments * r.min_segment_months.max(1) {
                return bad("random.years", "too short for max_segments of min_segment_months");
            }
            if r.years * MONTHS_PER_YEAR <= self.lag {
                return bad("random.years", "series must be longer than lag");
            }
            let (lo, hi) = r.slope_range;
            if !(lo >= 0.0 && hi >= lo && hi.is_finite()) {
                return bad("random.slope_range", "need 0 <= low <= high");
            }
            let (floor, ceil) = r.level_range;
            if !(0.0..1.0).contains(&floor) || !(floor < ceil && ceil <= 1.0) {
                return bad("random.level_range", "need 0 <= low < high <= 1");
            }
        }
        for (i, g) in self.groups.iter().enumerate() {
            g.stats
                .validate()
                .or_else(|e| bad(&format!("groups[{i}]"), &e.to_string()))?;
            if g.stats.years.len() * MONTHS_PER_YEAR <= self.lag {
                return bad(&format!("groups[{i}].years"), "series must be longer than lag");
            }
        }
        if self.series.is_empty() && self.groups.is_empty() && self.random.as_ref().is_none_or(|r| r.count == 0) {
            return bad("series", "spec describes no series");
        }
        Ok(())
    }
}

fn segments_from_spec(spec: &[SegmentSpec]) -> Vec<TrendSegment> {
    let mut start = 0i64;
    spec.iter()
        .map(|g| {
            let end = start + g.months as i64;
            let seg = TrendSegment {
                start_step: start,
                end_step: end,
                slope_class: TrendClass::from_sign(if g.slope > 0.0 {
                    1
                } else if g.slope < 0.0 {
                    -1
                } else {
                    0
                }),
                slope_magnitude: g.slope.abs(),
            };
            start = end;
            seg
        })
        .collect()
}

/// Segment layout of a random series together with its starting level.
#[derive(Debug, Clone, PartialEq)]
pub struct LatentWalk {
    pub start_level: f64,
    pub segments: Vec<TrendSegment>,
}

impl LatentWalk {
    pub fn levels(&self) -> Result<Vec<f64>> {
        walk_levels(self.start_level, &self.segments)
    }
}

/// Draws random contiguous segments covering the series, as a walk that stays
/// inside `[0, 1]`. A segment that would leave the domain turns around; when
/// neither direction fits, its slope shrinks, and below the minimum slope the
/// segment goes flat.
pub fn random_walk<R: Rng>(spec: &RandomSeriesSpec, rng: &mut R) -> LatentWalk {
    let months = spec.years * MONTHS_PER_YEAR;
    let k = rng.random_range(spec.min_segments..=spec.max_segments);
    let slack = months - k * spec.min_segment_months;
    let mut cuts: Vec<usize> = (0..k - 1).map(|_| rng.random_range(0..=slack)).collect();
    cuts.sort_unstable();
    let (floor, ceil) = spec.level_range;
    let start_level = floor + (ceil - floor) * rng.random::<f64>();
    let mut level = start_level;
    let mut start = 0usize;
    let mut prev_cut = 0usize;
    let segments = (0..k)
        .map(|i| {
            let extra = if i + 1 < k { cuts[i] - prev_cut } else { slack - prev_cut };
            if i + 1 < k {
                prev_cut = cuts[i];
            }
            let len = spec.min_segment_months + extra;
            let mut class = TrendClass::ALL[rng.random_range(0..3)];
            let (lo, hi) = spec.slope_range;
            let mut magnitude = lo + (hi - lo) * rng.random::<f64>();
            if class == TrendClass::Stable {
                magnitude = 0.0;
            } else {
                let run = len as f64;
                let room = |c: TrendClass| if c == TrendClass::Increase { ceil - level } else { level - floor };
                if magnitude * run > room(class) {
                    let other = if class == TrendClass::Increase { TrendClass::Decrease } else { TrendClass::Increase };
                    if magnitude * run <= room(other) {
                        class = other;
                    } else {
                        if room(other) > room(class) {
                            class = other;
                        }
                        magnitude = room(class) / run;
                        if magnitude < lo {
                            class = TrendClass::Stable;
                            magnitude = 0.0;
                        }
                    }
                }
            }
            level += f64::from(class.value()) * magnitude * len as f64;
            let seg = TrendSegment {
                start_step: start as i64,
                end_step: (start + len) as i64,
                slope_class: class,
                slope_magnitude: magnitude,
            };
            start += len;
            seg
        })
        .collect();
    LatentWalk { start_level, segments }
}

/// Noisy observation of a latent signal, clamped to `[0, 1]`.
fn observe<R: Rng>(latent: &[f64], noise: f64, rng: &mut R) -> Vec<f64> {
    match Normal::new(0.0, noise) {
        Ok(n) if noise > 0.0 => latent.iter().map(|&x| (x + n.sample(rng)).clamp(0.0, 1.0)).collect(),
        _ => latent.to_vec(),
    }
}

/// Labeled series from segments: labels come from the noiseless latent signal.
pub fn labeled_from_segments<R: Rng>(
    region_id: &str,
    indicator: Indicator,
    segments: &[TrendSegment],
    spec: &CorpusSpec,
    rng: &mut R,
) -> Result<LabeledSeries<f64>> {
    labeled_from_latent(region_id, indicator, &latent_signal(segments)?, spec, rng)
}

/// Labeled series from a latent signal already inside `[0, 1]`.
pub fn labeled_from_latent<R: Rng>(
    region_id: &str,
    indicator: Indicator,
    latent: &[f64],
    spec: &CorpusSpec,
    rng: &mut R,
) -> Result<LabeledSeries<f64>> {
    let values = observe(latent, spec.noise, rng);
    Ok(LabeledSeries {
        series: TimeSeries::new(region_id, indicator, 0, values)?,
        labels: lag_labels(latent, spec.lag, spec.stability_band),
    })
}

/// Generates the corpus described by `spec`: explicit series first, then
/// random series, then granulated groups. Series `i` draws from its own
/// stream derived from `seed`.
pub fn synthesize_labeled(spec: &CorpusSpec, seed: u64) -> Result<LabeledCorpus<f64>> {
    spec.validate()?;
    let mut entries = Vec::new();
    let mut stream = 0u64;
    let mut next_rng = || {
        let rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, stream));
        stream += 1;
        rng
    };

    for s in &spec.series {
        let mut rng = next_rng();
        entries.push(labeled_from_segments(&s.region_id, s.indicator, &segments_from_spec(&s.segments), spec, &mut rng)?);
    }
    if let Some(r) = &spec.random {
        let width = r.count.max(1).to_string().len();
        for i in 0..r.count {
            let mut rng = next_rng();
            let walk = random_walk(r, &mut rng);
            let id = format!("{}{:0width$}", r.region_prefix, i);
            entries.push(labeled_from_latent(&id, Indicator::Synthetic, &walk.levels()?, spec, &mut rng)?);
        }
    }
    for g in &spec.groups {
        let mut rng = next_rng();
        let series = monthly_from_annual(&g.stats, g.indicator, &mut rng)?;
        let means: Vec<f64> = g
            .stats
            .years
            .iter()
            .flat_map(|y| std::iter::repeat_n(y.mu / MONTHS_PER_YEAR as f64, MONTHS_PER_YEAR))
            .collect();
        let latent = normalize_minmax(&means).unwrap_or_else(|_| vec![0.5; means.len()]);
        entries.push(LabeledSeries {
            series,
            labels: lag_labels(&latent, spec.lag, spec.stability_band),
        });
    }
    Ok(LabeledCorpus::new(entries))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn minmax_examples() {
        assert_eq!(normalize_minmax(&[2.0, 4.0, 6.0]).unwrap(), vec![0.0, 0.5, 1.0]);
        assert_eq!(normalize_minmax(&[0.0, 1.0]).unwrap(), vec![0.0, 1.0]);
        assert!(matches!(normalize_minmax(&[5.0, 5.0, 5.0]), Err(Error::DegenerateNormalization)));
        assert!(normalize_minmax(&[]).is_err());
    }

    #[test]
    fn zero_variance_months_are_exact() {
        let stats = AnnualGroupStats {
            group_id: "g".into(),
            years: vec![YearStats { mu: 0.6, sigma: 0.0 }],
        };
        let raw = monthly_samples(&stats, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
        assert_eq!(raw.len(), 12);
        for v in raw {
            assert_abs_diff_eq!(v, 0.05, epsilon = 1e-15);
        }
        let bad = AnnualGroupStats {
            group_id: "g".into(),
            years: vec![YearStats { mu: 0.6, sigma: -1.0 }],
        };
        assert!(monthly_samples(&bad, &mut ChaCha8Rng::seed_from_u64(1)).is_err());
    }

    #[test]
    fn monthly_series_is_seeded_and_normalized() {
        let stats = AnnualGroupStats {
            group_id: "g".into(),
            years: (0..15).map(|y| YearStats { mu: 0.2 + 0.04 * y as f64, sigma: 0.01 }).collect(),
        };
        let a = monthly_from_annual(&stats, Indicator::U, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        let b = monthly_from_annual(&stats, Indicator::U, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 180);
        assert!(a.values.iter().all(|v| (0.0..=1.0).contains(v)));
    }

    #[test]
    fn labels_from_latent() {
        let flat = [TrendSegment {
            start_step: 0,
            end_step: 60,
            slope_class: TrendClass::Stable,
            slope_magnitude: 0.0,
        }];
        let latent = latent_signal(&flat).unwrap();
        assert!(latent.iter().all(|&v| v == 0.5));
        assert!(lag_labels(&latent, 24, 0.05).iter().all(|l| l.1 == TrendClass::Stable));

        let rise = [TrendSegment {
            slope_class: TrendClass::Increase,
            slope_magnitude: 0.01,
            ..flat[0]
        }];
        let labels = lag_labels(&latent_signal(&rise).unwrap(), 24, 0.05);
        assert_eq!(labels.len(), 36);
        assert_eq!(labels[0].0, 24);
        assert!(labels.iter().all(|l| l.1 == TrendClass::Increase));
    }

    #[test]
    fn rise_then_fall_labels() {
        // independent count: latent normalized to peak 1 at step 60; over lag 24
        // the difference is exactly 0 at t = 72 and the band is crossed 1.5 steps
        // either side of it
        let segs = segments_from_spec(&[
            SegmentSpec { months: 60, slope: 0.01 },
            SegmentSpec { months: 60, slope: -0.01 },
        ]);
        let latent = latent_signal(&segs).unwrap();
        let labels = lag_labels(&latent, 24, 0.05);
        let class_at = |t: i64| labels.iter().find(|l| l.0 == t).unwrap().1;
        assert_eq!(class_at(24), TrendClass::Increase);
        assert_eq!(class_at(70), TrendClass::Increase);
        for t in 71..=73 {
            assert_eq!(class_at(t), TrendClass::Stable, "t={t}");
        }
        assert_eq!(class_at(74), TrendClass::Decrease);
        assert_eq!(class_at(119), TrendClass::Decrease);
    }

    #[test]
    fn noise_never_changes_labels() {
        let spec = CorpusSpec {
            series: vec![SeriesSpec {
                region_id: "a".into(),
                indicator: Indicator::R,
                segments: vec![SegmentSpec { months: 50, slope: 0.01 }, SegmentSpec { months: 50, slope: -0.02 }],
            }],
            ..CorpusSpec::default()
        };
        let quiet = synthesize_labeled(&CorpusSpec { noise: 0.0, ..spec.clone() }, 1).unwrap();
        let loud = synthesize_labeled(&CorpusSpec { noise: 0.3, ..spec }, 2).unwrap();
        assert_eq!(quiet.entries[0].labels, loud.entries[0].labels);
        assert_ne!(quiet.entries[0].series.values, loud.entries[0].series.values);
    }

    #[test]
    fn random_walk_covers_the_series_inside_the_domain() {
        let spec = RandomSeriesSpec::default();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..200 {
            let walk = random_walk(&spec, &mut rng);
            let levels = walk.levels().unwrap();
            assert!(levels.iter().all(|v| (0.2 - 1e-12..=0.8 + 1e-12).contains(v)), "{levels:?}");
            let segs = walk.segments;
            validate_segments(&segs).unwrap();
            assert_eq!(segs.last().unwrap().end_step, 180);
            assert!(segs.iter().all(|s| s.end_step - s.start_step >= 30));
            assert!((2..=4).contains(&segs.len()));
        }
    }

    #[test]
    fn corpus_is_deterministic_in_seed() {
        let spec = CorpusSpec {
            random: Some(RandomSeriesSpec { count: 5, ..RandomSeriesSpec::default() }),
            groups: vec![GroupSpec {
                indicator: Indicator::S,
                stats: AnnualGroupStats {
                    group_id: "g0".into(),
                    years: (0..4).map(|y| YearStats { mu: y as f64, sigma: 0.1 }).collect(),
                },
            }],
            ..CorpusSpec::default()
        };
        let a = synthesize_labeled(&spec, 42).unwrap();
        assert_eq!(a, synthesize_labeled(&spec, 42).unwrap());
        assert_ne!(a, synthesize_labeled(&spec, 43).unwrap());
        assert_eq!(a.len(), 6);
        assert_eq!(a.entries[0].series.region_id, "syn0");
        assert_eq!(a.entries[5].series.indicator, Indicator::S);
        for e in &a.entries {
            assert!(e.series.values.iter().all(|v| (0.0..=1.0).contains(v)));
        }
    }

    #[test]
    fn spec_validation_names_fields() {
        let err = CorpusSpec { noise: -1.0, random: Some(RandomSeriesSpec::default()), ..CorpusSpec::default() }
            .validate()
            .unwrap_err();
        assert!(err.to_string().contains("noise"));
        let err = CorpusSpec::default().validate().unwrap_err();
        assert!(err.to_string().contains("series"));
        let parse = serde_json::from_str::<CorpusSpec>(r#"{"nosie": 0.1}"#).unwrap_err();
        assert!(parse.to_string().contains("nosie"));
    }

    #[test]
    fn derived_seeds_differ() {
        let s: std::collections::HashSet<u64> = (0..1000).map(|i| derive_seed(7, i)).collect();
        assert_eq!(s.len(), 1000);
    }
}
