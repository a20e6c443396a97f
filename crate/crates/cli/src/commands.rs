use std::fs::File;
use std::io::BufWriter;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;
use stigtrend::corpus::{load_corpus, read_series, save_corpus, write_classes};
use stigtrend::datagen::{synthesize_labeled, CorpusSpec};
use stigtrend::eval::{
    grid_study, run_trials, DeTrainer, FixedTrainer, GridReport, Protocol, TrialsOutcome, GRID_CR, GRID_F,
};
use stigtrend::optimizer::{fitness_mse, optimize};
use stigtrend::{Bounds, DeConfig, Error, ErrorKind, FixedSettings, PipelineParams, Result};

use crate::manifest::{sibling, ManifestBuilder};
use crate::{EvalArgs, Fixed, GenArgs, RunArgs, TrainArgs};

pub const EXIT_CONFIG: u8 = 3;
pub const EXIT_DATA: u8 = 4;
pub const EXIT_RUNTIME: u8 = 5;

pub fn exit_code(e: &Error) -> u8 {
    match e.kind() {
        ErrorKind::Config => EXIT_CONFIG,
        ErrorKind::Data => EXIT_DATA,
        ErrorKind::Runtime => EXIT_RUNTIME,
    }
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let file = File::open(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    serde_json::from_reader(std::io::BufReader::new(file))
        .map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

fn ensure_parent(path: &Path) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    Ok(())
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    ensure_parent(path)?;
    Ok(BufWriter::new(File::create(path)?))
}

impl Fixed {
    fn settings(&self) -> FixedSettings {
        self.apply(FixedSettings::default())
    }

    fn apply(&self, mut fixed: FixedSettings) -> FixedSettings {
        if let Some(lag) = self.lag {
            fixed.lag = lag;
        }
        if let Some(bins) = self.bins {
            fixed.bins = bins;
        }
        fixed
    }
}

fn de_config(path: Option<&Path>, inject_expert: bool, fixed: FixedSettings) -> Result<DeConfig> {
    let mut config: DeConfig = match path {
        Some(p) => read_json(p)?,
        None => DeConfig::default(),
    };
    if inject_expert {
        let expert = PipelineParams::expert_with(fixed).to_genome()?;
        config.injected.insert(0, expert.to_vec());
    }
    Ok(config)
}

pub fn gen(a: &GenArgs) -> Result<()> {
    let mut manifest = ManifestBuilder::new("gen", Some(a.seed));
    manifest.config(&a.spec);
    let spec: CorpusSpec = read_json(&a.spec)?;
    let corpus = synthesize_labeled(&spec, a.seed)?;
    save_corpus(&a.out, &corpus)?;
    manifest
        .output(&a.out.join(stigtrend::corpus::SERIES_FILE))
        .output(&a.out.join(stigtrend::corpus::LABELS_FILE));
    manifest.write(&a.out.join("manifest.json"))?;
    println!("wrote {} series to {}", corpus.len(), a.out.display());
    Ok(())
}

#[derive(Serialize)]
struct TrainReport<'a> {
    de: &'a DeConfig,
    fixed: FixedSettings,
    best_vector: &'a [f64],
    best_fitness: f64,
    history: &'a [f64],
    evaluations: usize,
}

pub fn train(a: &TrainArgs) -> Result<()> {
    let fixed = a.fixed.settings();
    let mut config = de_config(a.de.as_deref(), a.inject_expert, fixed)?;
    if let Some(seed) = a.seed {
        config.seed = seed;
    }
    let mut manifest = ManifestBuilder::new("train", Some(config.seed));
    if let Some(p) = &a.de {
        manifest.config(p);
    }
    manifest.input(&a.corpus);
    let corpus = load_corpus(&a.corpus)?;
    if corpus.is_empty() {
        return Err(Error::InvalidInput(format!("corpus {} has no series", a.corpus.display())));
    }
    let outcome = optimize(|g: &[f64]| fitness_mse(g, &corpus, fixed), &config, &Bounds::pipeline())?;
    let params = PipelineParams::from_genome(&outcome.best.vector, fixed)?;
    let fitness = outcome.best.fitness.unwrap_or(f64::INFINITY);

    ensure_parent(&a.out)?;
    write_json(&a.out, &params)?;
    let report_path = sibling(&a.out, "report.json");
    write_json(
        &report_path,
        &TrainReport {
            de: &config,
            fixed,
            best_vector: &outcome.best.vector,
            best_fitness: fitness,
            history: &outcome.history,
            evaluations: outcome.evaluations,
        },
    )?;
    let history_path = sibling(&a.out, "history.csv");
    let mut w = create(&history_path)?;
    {
        use std::io::Write;
        writeln!(w, "generation,best_fitness")?;
        for (g, f) in outcome.history.iter().enumerate() {
            writeln!(w, "{g},{f}")?;
        }
        w.flush()?;
    }
    manifest.output(&a.out).output(&report_path).output(&history_path);
    manifest.write(&sibling(&a.out, "manifest.json"))?;
    println!("best fitness {fitness:.6} after {} evaluations", outcome.evaluations);
    Ok(())
}

pub fn run(a: &RunArgs) -> Result<()> {
    let mut manifest = ManifestBuilder::new("run", None);
    let params = match &a.params {
        Some(p) => {
            manifest.config(p);
            let params: PipelineParams = read_json(p)?;
            let fixed = a.fixed.apply(params.fixed());
            PipelineParams { lag: fixed.lag, bins: fixed.bins, ..params }
        }
        None => PipelineParams::expert_with(a.fixed.settings()),
    };
    params.validate()?;
    manifest.input(&a.series);
    let series = read_series(File::open(&a.series)?)?;
    let results = series
        .iter()
        .map(|s| Ok((s, stigtrend::run_pipeline(s, &params)?)))
        .collect::<Result<Vec<_>>>()?;
    write_classes(create(&a.out)?, &results)?;
    manifest.output(&a.out);
    manifest.write(&sibling(&a.out, "manifest.json"))?;
    let emitted: usize = results.iter().map(|r| r.1.len()).sum();
    println!("classified {} series, {emitted} steps", results.len());
    Ok(())
}

#[derive(Serialize)]
struct EvalReport<'a> {
    mode: &'static str,
    fixed: FixedSettings,
    de: Option<&'a DeConfig>,
    params: Option<&'a PipelineParams>,
    trials: Option<&'a TrialsOutcome>,
    grid: Option<&'a GridReport>,
}

pub fn eval(a: &EvalArgs) -> Result<()> {
    let fixed = a.fixed.settings();
    let protocol = Protocol {
        trials: a.trials,
        repetitions: a.repetitions,
        train_fraction: a.train_fraction,
        seed: a.seed,
    };
    protocol.validate()?;
    let mut manifest = ManifestBuilder::new("eval", Some(a.seed));
    for p in [&a.de, &a.params].into_iter().flatten() {
        manifest.config(p);
    }
    manifest.input(&a.corpus);
    let corpus = load_corpus(&a.corpus)?;
    let expert = PipelineParams::expert_with(fixed);
    ensure_parent(&a.out)?;

    if a.grid {
        let base = de_config(a.de.as_deref(), a.inject_expert, fixed)?;
        let grid = grid_study(&corpus, &base, fixed, &GRID_F, &GRID_CR, &protocol)?;
        let table = sibling(&a.out, "grid.csv");
        grid.write_table(create(&table)?)?;
        write_json(
            &a.out,
            &EvalReport { mode: "grid", fixed, de: Some(&base), params: None, trials: None, grid: Some(&grid) },
        )?;
        manifest.output(&a.out).output(&table);
        for c in &grid.cells {
            println!("F={} CR={}: test MSE {:.4} ± {:.4}", c.f, c.cr, c.test.mean, c.test.ci95);
        }
    } else {
        let (mode, outcome, de, params) = if a.expert || a.params.is_some() {
            let params = match &a.params {
                Some(p) => {
                    let params: PipelineParams = read_json(p)?;
                    let f = a.fixed.apply(params.fixed());
                    PipelineParams { lag: f.lag, bins: f.bins, ..params }
                }
                None => expert.clone(),
            };
            params.validate()?;
            let baseline = (!a.expert).then_some(&expert);
            let out = run_trials(&corpus, &FixedTrainer(params.clone()), baseline, &protocol)?;
            (if a.expert { "expert" } else { "params" }, out, None, Some(params))
        } else {
            let config = de_config(a.de.as_deref(), a.inject_expert, fixed)?;
            let out = run_trials(&corpus, &DeTrainer::new(config.clone(), fixed), Some(&expert), &protocol)?;
            ("de", out, Some(config), None)
        };
        let table = sibling(&a.out, "trials.csv");
        outcome.write_trial_table(create(&table)?)?;
        manifest.output(&a.out).output(&table);
        if !outcome.mean_history.is_empty() {
            let history = sibling(&a.out, "history.csv");
            outcome.write_history(create(&history)?)?;
            manifest.output(&history);
        }
        write_json(
            &a.out,
            &EvalReport { mode, fixed, de: de.as_ref(), params: params.as_ref(), trials: Some(&outcome), grid: None },
        )?;
        print!("test MSE {:.4} ± {:.4}", outcome.test.mean, outcome.test.ci95);
        match outcome.baseline_test {
            Some(b) => println!(" (expert {:.4})", b.mean),
            None => println!(),
        }
    }
    manifest.write(&sibling(&a.out, "manifest.json"))?;
    Ok(())
}
