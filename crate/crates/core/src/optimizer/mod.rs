//! Parameter adaptation by differential evolution against a labeled corpus.

mod de;
mod fitness;

pub use de::{
    crossover_binomial, mutate, optimize, rand_to_best, select, Bounds, Candidate, DeConfig, DeOutcome,
};
pub use fitness::{fitness_mse, params_mse, scored_pairs, SKIPPED_COMPARISONS};
