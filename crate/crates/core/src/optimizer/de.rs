//! DE/rand-to-best/1/bin.
//!
//! ```text
//! for each target x_i:
//!   v = x_r1 + F (x_best - x_r1) + F (x_r2 - x_r3)     r1, r2, r3 distinct, != i
//!   u_j = v_j if rand_j < CR or j == j_rand else x_ij
//!   x_i <- u if f(u) <= f(x_i)
//! ```
//!
//! Mutants are repaired by clamping into the bounds. All random draws of a
//! generation happen before its trials are evaluated, so the result does not
//! depend on how evaluations are scheduled across threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::GENOME_LEN;
use crate::scalar::Scalar;

/// Per-dimension closed box `[low, high]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bounds<T = f64> {
    pub low: Vec<T>,
    pub high: Vec<T>,
}

impl<T: Scalar> Bounds<T> {
    pub fn new(low: Vec<T>, high: Vec<T>) -> Result<Self> {
        if low.len() != high.len() || low.is_empty() {
            return Err(Error::Config("bounds need matching, non-empty low/high vectors".into()));
        }
        if let Some(j) = (0..low.len()).find(|&j| !(low[j] < high[j])) {
            return Err(Error::Config(format!("bounds dimension {j}: low must be below high")));
        }
        Ok(Self { low, high })
    }

    pub fn uniform(dim: usize, low: T, high: T) -> Result<Self> {
        Self::new(vec![low; dim], vec![high; dim])
    }

    /// Search box for pipeline genomes: every component in `(0, 1)`, kept a
    /// small margin away from the open ends.
    pub fn pipeline() -> Self {
        Self::uniform(GENOME_LEN, T::lit(1e-3), T::lit(1.0 - 1e-3)).expect("static bounds")
    }

    pub fn dim(&self) -> usize {
        self.low.len()
    }

    pub fn clamp(&self, v: &mut [T]) {
        for (j, x) in v.iter_mut().enumerate() {
            *x = x.max(self.low[j]).min(self.high[j]);
        }
    }

    pub fn contains(&self, v: &[T]) -> bool {
        v.len() == self.dim() && v.iter().enumerate().all(|(j, &x)| x >= self.low[j] && x <= self.high[j])
    }

    fn sample<R: Rng>(&self, rng: &mut R) -> Vec<T> {
        (0..self.dim())
            .map(|j| self.low[j] + (self.high[j] - self.low[j]) * T::lit(rng.random::<f64>()))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Candidate<T = f64> {
    pub vector: Vec<T>,
    pub fitness: Option<T>,
}

impl<T: Scalar> Candidate<T> {
    pub fn evaluated(vector: Vec<T>, fitness: T) -> Self {
        Self {
            vector,
            fitness: Some(fitness),
        }
    }

    fn score(&self) -> T {
        self.fitness.unwrap_or_else(T::infinity)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DeConfig {
    pub population_size: usize,
    /// Differential weight.
    pub f: f64,
    /// Crossover rate.
    pub cr: f64,
    pub generations: usize,
    pub seed: u64,
    /// Vectors placed in the initial population before random members.
    pub injected: Vec<Vec<f64>>,
}

impl Default for DeConfig {
    fn default() -> Self {
        Self {
            population_size: 20,
            f: 0.6,
            cr: 0.6,
            generations: 30,
            seed: 0,
            injected: Vec::new(),
        }
    }
}

impl DeConfig {
    pub fn validate(&self, dim: usize) -> Result<()> {
        if self.population_size < 4 {
            return Err(Error::Config(format!(
                "population_size must be at least 4, got {}",
                self.population_size
            )));
        }
        if !(0.0..=2.0).contains(&self.f) {
            return Err(Error::Config(format!("f must lie in [0, 2], got {}", self.f)));
        }
        if !(0.0..=1.0).contains(&self.cr) {
            return Err(Error::Config(format!("cr must lie in [0, 1], got {}", self.cr)));
        }
        if self.injected.len() > self.population_size {
            return Err(Error::Config("more injected vectors than population members".into()));
        }
        if let Some(v) = self.injected.iter().find(|v| v.len() != dim) {
            return Err(Error::Config(format!(
                "injected vector has {} components, expected {dim}",
                v.len()
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeOutcome<T = f64> {
    pub best: Candidate<T>,
    /// Best-ever fitness after initialization (index 0) and after each generation.
    pub history: Vec<T>,
    pub population: Vec<Candidate<T>>,
    pub evaluations: usize,
}

/// `x_r1 + F (x_best - x_r1) + F (x_r2 - x_r3)`.
pub fn rand_to_best<T: Scalar>(r1: &[T], best: &[T], r2: &[T], r3: &[T], f: T) -> Vec<T> {
    (0..r1.len())
        .map(|j| r1[j] + f * (best[j] - r1[j]) + f * (r2[j] - r3[j]))
        .collect()
}

/// Builds the mutant for `target` from three distinct random members other
/// than the target, then clamps it into `bounds`.
pub fn mutate<T: Scalar, R: Rng>(
    population: &[Vec<T>],
    target: usize,
    best: usize,
    f: T,
    bounds: &Bounds<T>,
    rng: &mut R,
) -> Result<Vec<T>> {
    let n = population.len();
    if n < 4 {
        return Err(Error::Config(format!("mutation needs at least 4 members, got {n}")));
    }
    let mut pick = |taken: &[usize]| loop {
        let r = rng.random_range(0..n);
        if !taken.contains(&r) {
            break r;
        }
    };
    let r1 = pick(&[target]);
    let r2 = pick(&[target, r1]);
    let r3 = pick(&[target, r1, r2]);
    let mut v = rand_to_best(&population[r1], &population[best], &population[r2], &population[r3], f);
    bounds.clamp(&mut v);
    Ok(v)
}

/// Binomial crossover with one forced mutant component.
pub fn crossover_binomial<T: Scalar, R: Rng>(target: &[T], mutant: &[T], cr: f64, rng: &mut R) -> Vec<T> {
    let dim = target.len();
    let forced = rng.random_range(0..dim);
    (0..dim)
        .map(|j| {
            let take = rng.random::<f64>() < cr || j == forced;
            if take {
                mutant[j]
            } else {
                target[j]
            }
        })
        .collect()
}

/// Keeps the fitter of the two; the trial wins ties.
pub fn select<T: Scalar>(target: Candidate<T>, trial: Candidate<T>) -> Candidate<T> {
    if trial.score() <= target.score() {
        trial
    } else {
        target
    }
}

fn best_index<T: Scalar>(pop: &[Candidate<T>]) -> usize {
    pop.iter()
        .enumerate()
        .fold(0, |b, (i, c)| if c.score() < pop[b].score() { i } else { b })
}

/// Minimizes `objective` over `bounds`.
pub fn optimize<T, F>(objective: F, config: &DeConfig, bounds: &Bounds<T>) -> Result<DeOutcome<T>>
where
    T: Scalar,
    F: Fn(&[T]) -> Result<T> + Sync,
{
    config.validate(bounds.dim())?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let f = T::lit(config.f);

    let mut vectors: Vec<Vec<T>> = config
        .injected
        .iter()
        .map(|v| {
            let mut v: Vec<T> = v.iter().map(|&x| T::lit(x)).collect();
            bounds.clamp(&mut v);
            v
        })
        .collect();
    while vectors.len() < config.population_size {
        vectors.push(bounds.sample(&mut rng));
    }
    let fitness = evaluate(&objective, &vectors)?;
    let mut population: Vec<Candidate<T>> = vectors
        .into_iter()
        .zip(fitness)
        .map(|(v, s)| Candidate::evaluated(v, s))
        .collect();
    let mut evaluations = population.len();
    let mut best = population[best_index(&population)].clone();
    let mut history = vec![best.score()];

    for _ in 0..config.generations {
        let current: Vec<Vec<T>> = population.iter().map(|c| c.vector.clone()).collect();
        let b = best_index(&population);
        let trials = (0..current.len())
            .map(|i| {
                let mutant = mutate(&current, i, b, f, bounds, &mut rng)?;
                Ok(crossover_binomial(&current[i], &mutant, config.cr, &mut rng))
            })
            .collect::<Result<Vec<_>>>()?;
        let scores = evaluate(&objective, &trials)?;
        evaluations += trials.len();
        population = population
            .into_iter()
            .zip(trials.into_iter().zip(scores))
            .map(|(target, (v, s))| select(target, Candidate::evaluated(v, s)))
            .collect();
        let gen_best = &population[best_index(&population)];
        if gen_best.score() < best.score() {
            best = gen_best.clone();
        }
        history.push(best.score());
    }

    Ok(DeOutcome {
        best,
        history,
        population,
        evaluations,
    })
}

fn evaluate<T, F>(objective: &F, vectors: &[Vec<T>]) -> Result<Vec<T>>
where
    T: Scalar,
    F: Fn(&[T]) -> Result<T> + Sync,
{
    vectors.par_iter().map(|v| objective(v)).collect()
}
