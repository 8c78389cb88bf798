//! Evolutionary programming with one self-adapted step size per gene.
//!
//! Every parent produces one child by mutation alone. Parents and children
//! then compete in `q` random pairwise contests each, and the individuals
//! with the most wins survive.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::{rng_for, Objective, Recorder, RunTrace, Scored};
use crate::error::{Error, Result};
use crate::fitness::{Genome, CONTINUOUS_GENES};
use crate::geometry::MASK_BITS;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EpConfig {
    pub population: usize,
    pub budget: usize,
    pub bit_flip_prob: f64,
    pub learning_rate: f64,
    pub sigma_init: f64,
    pub sigma_floor: f64,
    /// Contests per individual during survivor selection.
    pub q: usize,
    pub checkpoint_interval: usize,
    pub runs: usize,
}

impl Default for EpConfig {
    fn default() -> Self {
        EpConfig {
            population: 10,
            budget: 4000,
            bit_flip_prob: 0.2,
            learning_rate: 0.2,
            sigma_init: 5.0,
            sigma_floor: 0.5,
            q: 10,
            checkpoint_interval: 100,
            runs: 30,
        }
    }
}

impl EpConfig {
    pub fn validate(&self) -> Result<()> {
        if self.population < 1 {
            return Err(Error::config("ep.population", "must be at least 1"));
        }
        if self.budget < self.population {
            return Err(Error::config(
                "ep.budget",
                "must cover the initial population",
            ));
        }
        if !(0.0..=1.0).contains(&self.bit_flip_prob) {
            return Err(Error::config("ep.bit_flip_prob", "must be within [0, 1]"));
        }
        if !(self.learning_rate >= 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::config("ep.learning_rate", "must be non-negative"));
        }
        if !(self.sigma_floor > 0.0) {
            return Err(Error::config("ep.sigma_floor", "must be positive"));
        }
        if !(self.sigma_init > 0.0) {
            return Err(Error::config("ep.sigma_init", "must be positive"));
        }
        if self.q < 1 {
            return Err(Error::config("ep.q", "must be at least 1"));
        }
        if self.checkpoint_interval < 1 {
            return Err(Error::config(
                "ep.checkpoint_interval",
                "must be at least 1",
            ));
        }
        if self.runs < 1 {
            return Err(Error::config("ep.runs", "must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EpIndividual {
    pub genome: Genome,
    pub sigmas: [f64; CONTINUOUS_GENES],
}

pub fn run<O: Objective + ?Sized>(config: &EpConfig, objective: &O, seed: u64) -> Result<RunTrace> {
    run_observed(config, objective, seed, |_| {})
}

/// Runs the program, handing the population to `inspect` after
/// initialization and after every survivor selection.
pub fn run_observed<O, F>(
    config: &EpConfig,
    objective: &O,
    seed: u64,
    mut inspect: F,
) -> Result<RunTrace>
where
    O: Objective + ?Sized,
    F: FnMut(&[EpIndividual]),
{
    config.validate()?;
    let mut rng = rng_for(seed);
    let mut rec = Recorder::new(config.checkpoint_interval);
    let initial_sigma = config.sigma_init.max(config.sigma_floor);

    let mut population: Vec<Scored<EpIndividual>> = (0..config.population)
        .map(|_| {
            let genome = Genome::random(&mut rng);
            let fitness = rec.evaluate(objective, &genome);
            Scored {
                item: EpIndividual {
                    genome,
                    sigmas: [initial_sigma; CONTINUOUS_GENES],
                },
                fitness,
            }
        })
        .collect();
    rec.observe(population.iter().map(|s| s.fitness));
    inspect(&snapshot(&population));

    while rec.evaluations() < config.budget {
        let count = population.len().min(config.budget - rec.evaluations());
        let children: Vec<EpIndividual> = population[..count]
            .iter()
            .map(|parent| make_child(&parent.item, config, &mut rng))
            .collect();
        let mut pool = population;
        for item in children {
            let fitness = rec.evaluate(objective, &item.genome);
            pool.push(Scored { item, fitness });
        }
        population = round_robin(pool, config.population, config.q, &mut rng);
        rec.observe(population.iter().map(|s| s.fitness));
        inspect(&snapshot(&population));
    }
    Ok(rec.finish())
}

fn snapshot(pop: &[Scored<EpIndividual>]) -> Vec<EpIndividual> {
    pop.iter().map(|s| s.item.clone()).collect()
}

fn make_child<R: Rng + ?Sized>(
    parent: &EpIndividual,
    config: &EpConfig,
    rng: &mut R,
) -> EpIndividual {
    let mut sigmas = parent.sigmas;
    for s in &mut sigmas {
        let n: f64 = rng.sample(StandardNormal);
        *s = (*s * (1.0 + config.learning_rate * n)).max(config.sigma_floor);
    }
    let mut genome = parent.genome.clone();
    for (i, s) in sigmas.iter().enumerate() {
        let n: f64 = rng.sample(StandardNormal);
        genome.set_continuous(i, genome.continuous(i) + s * n);
    }
    for bit in 0..MASK_BITS {
        if rng.random_bool(config.bit_flip_prob) {
            genome.mask.flip(bit);
        }
    }
    genome.resolve();
    EpIndividual { genome, sigmas }
}

/// Each member meets `q` random opponents (never itself) and scores a win
/// for every strictly fitter comparison. The `keep` best scorers survive;
/// ties go to higher fitness, then to earlier position.
pub(crate) fn round_robin<T, R: Rng + ?Sized>(
    pool: Vec<Scored<T>>,
    keep: usize,
    q: usize,
    rng: &mut R,
) -> Vec<Scored<T>> {
    let n = pool.len();
    let wins: Vec<usize> = (0..n)
        .map(|i| {
            if n < 2 {
                return 0;
            }
            (0..q)
                .filter(|_| {
                    let mut j = rng.random_range(0..n - 1);
                    if j >= i {
                        j += 1;
                    }
                    pool[i].fitness > pool[j].fitness
                })
                .count()
        })
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        wins[b]
            .cmp(&wins[a])
            .then(pool[b].fitness.total_cmp(&pool[a].fitness))
    });
    order.truncate(keep);
    let mut slots: Vec<Option<Scored<T>>> = pool.into_iter().map(Some).collect();
    order
        .into_iter()
        .map(|i| slots[i].take().expect("each index once"))
        .collect()
}
