//! Acceptance suite. Each criterion prints one `PASS` / `FAIL` line to
//! stderr (bypassing output capture) and then asserts.

use std::io::Write;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stigtrend::corpus::{load_corpus, save_corpus};
use stigtrend::datagen::{synthesize_labeled, CorpusSpec, RandomSeriesSpec};
use stigtrend::eval::{grid_study, run_trials, DeTrainer, Protocol, TrialsOutcome, GRID_CR, GRID_F};
use stigtrend::optimizer::{fitness_mse, optimize};
use stigtrend::track::bin_center;
use stigtrend::{
    classify, delta_p, shape_similarity, smf, Bounds, DeConfig, FixedSettings, Mark, PipelineParams, Prototype,
    SmfParams, Track, TrendClass,
};

fn report(n: u32, pass: bool, detail: &str) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    let _ = writeln!(std::io::stderr().lock(), "criterion {n}: {verdict}  {detail}");
}

fn check(n: u32, pass: bool, detail: String) {
    report(n, pass, &detail);
    assert!(pass, "criterion {n}: {detail}");
}

#[test]
fn criterion_1_smf_suite() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst_identity = 0.0f64;
    let mut violations = 0usize;
    for _ in 0..10_000 {
        let a: f64 = rng.random_range(0.0..0.9);
        let b: f64 = rng.random_range(a + 1e-3..1.0);
        let p = SmfParams::new(a, b).unwrap();
        worst_identity = worst_identity
            .max(smf(a, &p).abs())
            .max((smf(b, &p) - 1.0).abs())
            .max((smf((a + b) / 2.0, &p) - 0.5).abs());
        let x1: f64 = rng.random_range(-0.2..1.2);
        let x2: f64 = rng.random_range(-0.2..1.2);
        let (lo, hi) = if x1 <= x2 { (x1, x2) } else { (x2, x1) };
        if smf(lo, &p) > smf(hi, &p) {
            violations += 1;
        }
    }
    let elapsed = start.elapsed();
    check(
        1,
        worst_identity <= 1e-12 && violations == 0 && elapsed < Duration::from_secs(1),
        format!("max identity error {worst_identity:.1e}, {violations} monotonicity violations in 10^4 triples, {elapsed:.2?}"),
    );
}

#[test]
fn criterion_2_track_saturation() {
    let start = Instant::now();
    let theta = 0.65;
    let i_max = 1.0 / (1.0 - theta);
    let bins = 1000;
    let mark = Mark::new(bin_center(500, bins), 0.2, 1.0);
    let mut track = Track::empty(bins);
    let mut worst = 0.0f64;
    let mut above = false;
    for n in 1..=200 {
        track.deposit(&mark, theta);
        let expected = (1.0 - theta.powi(n)) / (1.0 - theta);
        worst = worst.max((track.max() - expected).abs());
        above |= track.intensities.iter().any(|&v| v > i_max);
    }
    let elapsed = start.elapsed();
    check(
        2,
        worst <= 1e-9 && !above && elapsed < Duration::from_secs(1),
        format!("max apex error {worst:.1e} over 200 steps, exceeds I_max: {above}, {elapsed:.2?}"),
    );
}

/// Pointwise sum-min over sum-max of two triangles sampled at `n` points of [0, 1].
fn grid_jaccard(a: &Prototype, b: &Prototype, n: usize) -> f64 {
    let tri = |p: &Prototype, x: f64| (p.height * (1.0 - (x - p.center).abs() / p.half_base)).max(0.0);
    let (mut inter, mut union) = (0.0, 0.0);
    for i in 0..n {
        let x = (i as f64 + 0.5) / n as f64;
        let (u, v) = (tri(a, x), tri(b, x));
        inter += u.min(v);
        union += u.max(v);
    }
    inter / union
}

#[test]
fn criterion_3_similarity_oracle() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let eps: f64 = rng.random_range(0.02..0.2);
        let h: f64 = rng.random_range(0.1..5.0);
        let c1: f64 = rng.random_range(eps..1.0 - eps);
        let c2: f64 = rng.random_range(eps..1.0 - eps);
        let a = Prototype { center: c1, half_base: eps, height: h };
        let b = Prototype { center: c2, half_base: eps, height: h };
        worst = worst.max((shape_similarity(&a, &b) - grid_jaccard(&a, &b, 100_000)).abs());
    }
    let a = Prototype { center: 0.4, half_base: 0.2, height: 2.0 };
    let b = Prototype { center: 0.6, ..a };
    let at_eps = shape_similarity(&a, &b);
    let elapsed = start.elapsed();
    check(
        3,
        worst <= 1e-3 && (at_eps - 1.0 / 7.0).abs() <= 1e-6 && elapsed < Duration::from_secs(5),
        format!("max |closed - grid| {worst:.1e} on 100 cases, S(d=eps) = {at_eps:.9}, {elapsed:.2?}"),
    );
}

#[test]
fn criterion_4_dissimilarity_anchor() {
    let expert = PipelineParams::expert();
    let (eps, h) = (expert.epsilon, expert.i_max().unwrap());
    // S = i / (2 - i) with i = (1 - d / 2 eps)^2
    let s: f64 = 0.0097;
    let i = 2.0 * s / (1.0 + s);
    let d = 2.0 * eps * (1.0 - i.sqrt());
    let previous = Prototype { center: 0.3, half_base: eps, height: h };
    let current = Prototype { center: 0.3 + d, ..previous };
    let sim = shape_similarity(&current, &previous);
    let delta = delta_p(&current, &previous);
    let class = classify(delta, &expert.dissimilarity);
    check(
        4,
        (sim - s).abs() <= 1e-6 && (delta - 0.9903).abs() <= 1e-6 && class == TrendClass::Increase,
        format!("S = {sim:.7}, delta = {delta:.7}, class {}", class.value()),
    );
}

#[test]
fn criterion_5_de_sphere() {
    let start = Instant::now();
    let sphere = |x: &[f64]| Ok(x.iter().map(|v| v * v).sum::<f64>());
    let bounds = Bounds::uniform(8, -5.12, 5.12).unwrap();
    let config = DeConfig { generations: 100, seed: 5, ..DeConfig::default() };
    let a = optimize(sphere, &config, &bounds).unwrap();
    let b = optimize(sphere, &config, &bounds).unwrap();
    let best = a.best.fitness.unwrap();
    let monotone = a.history.windows(2).all(|w| w[1] <= w[0]);
    let elapsed = start.elapsed();
    check(
        5,
        best < 1e-2 && monotone && a.history == b.history && a.best == b.best && elapsed < Duration::from_secs(5),
        format!("best {best:.2e} after 100 generations, monotone {monotone}, reproducible {}, {elapsed:.2?}", a.history == b.history),
    );
}

fn protocol_corpus() -> stigtrend::LabeledCorpus {
    let spec = CorpusSpec { random: Some(RandomSeriesSpec::default()), ..CorpusSpec::default() };
    synthesize_labeled(&spec, 1).unwrap()
}

struct ProtocolRun {
    outcome: TrialsOutcome,
    elapsed: Duration,
}

fn protocol_run() -> &'static ProtocolRun {
    static RUN: OnceLock<ProtocolRun> = OnceLock::new();
    RUN.get_or_init(|| {
        let start = Instant::now();
        let corpus = protocol_corpus();
        let trainer = DeTrainer::new(DeConfig::default(), FixedSettings::default());
        let expert = PipelineParams::expert();
        let outcome = run_trials(&corpus, &trainer, Some(&expert), &Protocol::default()).unwrap();
        ProtocolRun { outcome, elapsed: start.elapsed() }
    })
}

#[test]
fn criterion_6_protocol_reproduction() {
    let corpus = protocol_corpus();
    let shape_ok = corpus.len() >= 50 && corpus.entries.iter().all(|e| e.series.len() == 180);
    let run = protocol_run();
    let out = &run.outcome;
    let de = out.test.mean;
    let expert = out.baseline_test.unwrap().mean;
    let mut lines = String::new();
    for t in &out.trials {
        lines.push_str(&format!(
            "\n    trial {}: train {:.4} ± {:.4}  test {:.4} ± {:.4}  expert {:.4}",
            t.trial_id + 1,
            t.train.mean,
            t.train.std,
            t.test.mean,
            t.test.std,
            t.baseline_test.unwrap().mean
        ));
    }
    check(
        6,
        shape_ok && out.reports.len() == 25 && de <= 0.05 && expert >= 2.0 * de,
        format!(
            "{} series, 25 runs: DE test MSE {de:.4} ± {:.4}, expert {expert:.4} ({:.1}x), {:.0?}{lines}",
            corpus.len(),
            out.test.ci95,
            expert / de,
            run.elapsed
        ),
    );
}

#[test]
fn criterion_7_convergence_shape() {
    let out = &protocol_run().outcome;
    let h = &out.mean_history;
    let rel = out.relative_improvement(15, 30).unwrap();
    check(
        7,
        rel < 0.05,
        format!(
            "mean best fitness gen 0 {:.4}, gen 15 {:.4}, gen 30 {:.4}: relative improvement 15->30 {:.1}%",
            h[0],
            h[15],
            h[30],
            100.0 * rel
        ),
    );
}

#[test]
fn criterion_8_grid_study() {
    let start = Instant::now();
    let corpus = protocol_corpus();
    let protocol = Protocol { trials: 5, repetitions: 1, ..Protocol::default() };
    let grid = grid_study(&corpus, &DeConfig::default(), FixedSettings::default(), &GRID_F, &GRID_CR, &protocol).unwrap();
    let mut table = Vec::new();
    grid.write_table(&mut table).unwrap();
    let table = String::from_utf8(table).unwrap();
    let rank = grid.rank(0.6, 0.6).unwrap();
    let layout_ok = grid.cells.len() == 9 && table.lines().count() == 4;
    let indented: String = table.lines().map(|l| format!("\n    {l}")).collect();
    check(
        8,
        layout_ok && rank <= 2,
        format!("(F=0.6, CR=0.6) ranks {rank} of 9, {:.0?}{indented}", start.elapsed()),
    );
}

/// gen -> train -> eval through files, returning the report bytes.
fn chain(dir: &std::path::Path, seed: u64) -> Vec<(String, Vec<u8>)> {
    let spec = CorpusSpec {
        random: Some(RandomSeriesSpec { count: 10, years: 6, max_segments: 2, ..RandomSeriesSpec::default() }),
        ..CorpusSpec::default()
    };
    let corpus_dir = dir.join("corpus");
    save_corpus(&corpus_dir, &synthesize_labeled(&spec, seed).unwrap()).unwrap();

    let corpus = load_corpus(&corpus_dir).unwrap();
    let fixed = FixedSettings::default();
    let de = DeConfig { population_size: 8, generations: 3, seed, ..DeConfig::default() };
    let trained = optimize(|g: &[f64]| fitness_mse(g, &corpus, fixed), &de, &Bounds::pipeline()).unwrap();
    let params = PipelineParams::from_genome(&trained.best.vector, fixed).unwrap();
    std::fs::write(dir.join("params.json"), serde_json::to_vec_pretty(&params).unwrap()).unwrap();
    std::fs::write(dir.join("train.json"), serde_json::to_vec_pretty(&trained).unwrap()).unwrap();

    let protocol = Protocol { trials: 2, repetitions: 2, train_fraction: 0.3, seed };
    let out = run_trials(&corpus, &DeTrainer::new(de, fixed), Some(&params), &protocol).unwrap();
    std::fs::write(dir.join("report.json"), serde_json::to_vec_pretty(&out).unwrap()).unwrap();
    out.write_trial_table(std::fs::File::create(dir.join("trials.csv")).unwrap()).unwrap();

    ["corpus/series.csv", "corpus/labels.csv", "params.json", "train.json", "report.json", "trials.csv"]
        .iter()
        .map(|f| (f.to_string(), std::fs::read(dir.join(f)).unwrap()))
        .collect()
}

#[test]
fn criterion_9_end_to_end_determinism() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let first = chain(a.path(), 42);
    let second = chain(b.path(), 42);
    let differing: Vec<&str> = first
        .iter()
        .zip(&second)
        .filter(|(x, y)| x.1 != y.1)
        .map(|(x, _)| x.0.as_str())
        .collect();
    check(
        9,
        differing.is_empty(),
        format!("{} files compared across two seeded runs, differing: {differing:?}", first.len()),
    );
}
