//! (μ, λ) and (μ + λ) evolution strategies with one self-adapted step size
//! per individual.
//!
//! A child takes each locus from one of two uniformly chosen parents and
//! the mean of their step sizes. The step size is mutated log-normally
//! before it is used to perturb the continuous genes.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::{rng_for, sort_best_first, Objective, Recorder, RunTrace, Scored};
use crate::error::{Error, Result};
use crate::fitness::{Genome, CONTINUOUS_GENES, LOCI};
use crate::geometry::MASK_BITS;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Selection {
    /// Survivors come from the children only.
    #[default]
    Comma,
    /// Survivors come from parents and children together.
    Plus,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EsConfig {
    pub mu: usize,
    pub lambda: usize,
    /// Chosen by the algorithm label, not by the config file.
    #[serde(skip)]
    pub selection: Selection,
    pub budget: usize,
    /// Learning rate of the shared log-normal factor.
    pub tau_prime: f64,
    /// Learning rate of the per-draw log-normal factor.
    pub tau: f64,
    pub sigma_init: f64,
    pub sigma_floor: f64,
    pub bit_flip_prob: f64,
    pub checkpoint_interval: usize,
    pub runs: usize,
}

impl EsConfig {
    pub fn new(selection: Selection) -> Self {
        let n = CONTINUOUS_GENES as f64;
        EsConfig {
            mu: 50,
            lambda: 350,
            selection,
            budget: 10_000,
            tau_prime: 1.0 / (2.0 * n).sqrt(),
            tau: 1.0 / (2.0 * n.sqrt()).sqrt(),
            sigma_init: 5.0,
            sigma_floor: 0.5,
            bit_flip_prob: 1.0 / MASK_BITS as f64,
            checkpoint_interval: 800,
            runs: 30,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.mu < 1 {
            return Err(Error::config("es.mu", "must be at least 1"));
        }
        if self.lambda < 1 {
            return Err(Error::config("es.lambda", "must be at least 1"));
        }
        if self.selection == Selection::Comma && self.lambda < self.mu {
            return Err(Error::config(
                "es.lambda",
                "must be at least mu for comma selection",
            ));
        }
        if self.budget < self.mu {
            return Err(Error::config(
                "es.budget",
                "must cover the initial population",
            ));
        }
        if !(self.tau > 0.0 && self.tau_prime > 0.0) {
            return Err(Error::config("es.tau", "learning rates must be positive"));
        }
        if !(self.sigma_floor > 0.0) {
            return Err(Error::config("es.sigma_floor", "must be positive"));
        }
        if !(self.sigma_init > 0.0) {
            return Err(Error::config("es.sigma_init", "must be positive"));
        }
        if !(0.0..=1.0).contains(&self.bit_flip_prob) {
            return Err(Error::config("es.bit_flip_prob", "must be within [0, 1]"));
        }
        if self.checkpoint_interval < 1 {
            return Err(Error::config(
                "es.checkpoint_interval",
                "must be at least 1",
            ));
        }
        if self.runs < 1 {
            return Err(Error::config("es.runs", "must be at least 1"));
        }
        Ok(())
    }
}

impl Default for EsConfig {
    fn default() -> Self {
        EsConfig::new(Selection::Comma)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EsIndividual {
    pub genome: Genome,
    pub sigma: f64,
}

pub fn run<O: Objective + ?Sized>(config: &EsConfig, objective: &O, seed: u64) -> Result<RunTrace> {
    run_observed(config, objective, seed, |_| {})
}

/// Runs the strategy, handing the surviving population to `inspect` after
/// initialization and after every generation.
pub fn run_observed<O, F>(
    config: &EsConfig,
    objective: &O,
    seed: u64,
    mut inspect: F,
) -> Result<RunTrace>
where
    O: Objective + ?Sized,
    F: FnMut(&[EsIndividual]),
{
    config.validate()?;
    let mut rng = rng_for(seed);
    let mut rec = Recorder::new(config.checkpoint_interval);

    let mut parents: Vec<Scored<EsIndividual>> = (0..config.mu)
        .map(|_| {
            let genome = Genome::random(&mut rng);
            let fitness = rec.evaluate(objective, &genome);
            Scored {
                item: EsIndividual {
                    genome,
                    sigma: config.sigma_init.max(config.sigma_floor),
                },
                fitness,
            }
        })
        .collect();
    rec.observe(parents.iter().map(|s| s.fitness));
    inspect(&snapshot(&parents));

    while rec.evaluations() < config.budget {
        let count = config.lambda.min(config.budget - rec.evaluations());
        // all random draws happen before any evaluation
        let children: Vec<EsIndividual> = (0..count)
            .map(|_| make_child(&parents, config, &mut rng))
            .collect();
        let children: Vec<Scored<EsIndividual>> = children
            .into_iter()
            .map(|item| {
                let fitness = rec.evaluate(objective, &item.genome);
                Scored { item, fitness }
            })
            .collect();

        parents = match config.selection {
            Selection::Plus => {
                let mut pool = parents;
                pool.extend(children);
                sort_best_first(&mut pool);
                pool.truncate(config.mu);
                pool
            }
            Selection::Comma => {
                let mut pool = children;
                sort_best_first(&mut pool);
                if pool.len() < config.mu {
                    // truncated last generation: top up with the best parents
                    sort_best_first(&mut parents);
                    let missing = config.mu - pool.len();
                    pool.extend(parents.into_iter().take(missing));
                    sort_best_first(&mut pool);
                }
                pool.truncate(config.mu);
                pool
            }
        };
        rec.observe(parents.iter().map(|s| s.fitness));
        inspect(&snapshot(&parents));
    }
    Ok(rec.finish())
}

fn snapshot(pop: &[Scored<EsIndividual>]) -> Vec<EsIndividual> {
    pop.iter().map(|s| s.item.clone()).collect()
}

fn make_child<R: Rng + ?Sized>(
    parents: &[Scored<EsIndividual>],
    config: &EsConfig,
    rng: &mut R,
) -> EsIndividual {
    let a = &parents[rng.random_range(0..parents.len())].item;
    let b = &parents[rng.random_range(0..parents.len())].item;

    let mut genome = a.genome.clone();
    for locus in 0..LOCI {
        if rng.random_bool(0.5) {
            genome.copy_locus(&b.genome, locus);
        }
    }
    let sigma = mutate_sigma((a.sigma + b.sigma) / 2.0, config, rng);

    for i in 0..CONTINUOUS_GENES {
        let step: f64 = rng.sample(StandardNormal);
        genome.set_continuous(i, genome.continuous(i) + sigma * step);
    }
    for bit in 0..MASK_BITS {
        if rng.random_bool(config.bit_flip_prob) {
            genome.mask.flip(bit);
        }
    }
    genome.resolve();
    EsIndividual { genome, sigma }
}

/// `σ · exp(τ'·N(0,1) + τ·N(0,1))`, floored.
pub fn mutate_sigma<R: Rng + ?Sized>(sigma: f64, config: &EsConfig, rng: &mut R) -> f64 {
    let shared: f64 = rng.sample(StandardNormal);
    let own: f64 = rng.sample(StandardNormal);
    (sigma * (config.tau_prime * shared + config.tau * own).exp()).max(config.sigma_floor)
}
