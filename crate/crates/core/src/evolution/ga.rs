//! Steady-state genetic algorithm.
//!
//! Each step picks two parents by binary tournament, applies one-point
//! crossover over the 64 loci (16 cut bits, then 48 continuous genes),
//! mutates both children and lets them replace the two worst members of
//! the population.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{rng_for, Objective, Recorder, RunTrace, Scored};
use crate::error::{Error, Result};
use crate::fitness::{GeneKind, Genome, LOCI};
use crate::geometry::MASK_BITS;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GaConfig {
    pub population: usize,
    pub budget: usize,
    pub tournament_arity: usize,
    /// Gene positions drawn (with replacement) per child.
    pub mutation_gene_draws: usize,
    /// Chance that a drawn position is actually mutated.
    pub mutation_prob: f64,
    pub checkpoint_interval: usize,
    pub runs: usize,
}

impl Default for GaConfig {
    fn default() -> Self {
        GaConfig {
            population: 100,
            budget: 4000,
            tournament_arity: 2,
            mutation_gene_draws: 10,
            mutation_prob: 0.5,
            checkpoint_interval: 100,
            runs: 30,
        }
    }
}

impl GaConfig {
    pub fn validate(&self) -> Result<()> {
        if self.population < 2 {
            return Err(Error::config("ga.population", "must be at least 2"));
        }
        if self.budget < self.population {
            return Err(Error::config(
                "ga.budget",
                format!("must cover the initial population of {}", self.population),
            ));
        }
        if self.tournament_arity < 1 {
            return Err(Error::config("ga.tournament_arity", "must be at least 1"));
        }
        if !(0.0..=1.0).contains(&self.mutation_prob) {
            return Err(Error::config("ga.mutation_prob", "must be within [0, 1]"));
        }
        if self.checkpoint_interval < 1 {
            return Err(Error::config(
                "ga.checkpoint_interval",
                "must be at least 1",
            ));
        }
        if self.runs < 1 {
            return Err(Error::config("ga.runs", "must be at least 1"));
        }
        Ok(())
    }
}

pub fn run<O: Objective + ?Sized>(config: &GaConfig, objective: &O, seed: u64) -> Result<RunTrace> {
    config.validate()?;
    let mut rng = rng_for(seed);
    let initial = (0..config.population)
        .map(|_| Genome::random(&mut rng))
        .collect();
    evolve(config, objective, initial, &mut rng)
}

/// Like [`run`] but starting from a caller-supplied population.
pub fn run_with_population<O: Objective + ?Sized>(
    config: &GaConfig,
    objective: &O,
    initial: Vec<Genome>,
    seed: u64,
) -> Result<RunTrace> {
    config.validate()?;
    if initial.len() != config.population {
        return Err(Error::config(
            "ga.population",
            format!("initial population has {} genomes", initial.len()),
        ));
    }
    evolve(config, objective, initial, &mut rng_for(seed))
}

fn evolve<O: Objective + ?Sized, R: Rng>(
    config: &GaConfig,
    objective: &O,
    initial: Vec<Genome>,
    rng: &mut R,
) -> Result<RunTrace> {
    let mut rec = Recorder::new(config.checkpoint_interval);
    let mut population: Vec<Scored<Genome>> = initial
        .into_iter()
        .map(|mut genome| {
            genome.resolve();
            let fitness = rec.evaluate(objective, &genome);
            Scored {
                item: genome,
                fitness,
            }
        })
        .collect();
    rec.observe(population.iter().map(|s| s.fitness));

    while rec.evaluations() < config.budget {
        let a = tournament(&population, config.tournament_arity, rng);
        let b = tournament(&population, config.tournament_arity, rng);
        let (first, second) = crossover(&population[a].item, &population[b].item, rng);

        let remaining = config.budget - rec.evaluations();
        let mut children = Vec::with_capacity(2);
        for mut child in [first, second].into_iter().take(remaining) {
            mutate(&mut child, config, rng);
            child.resolve();
            let fitness = rec.evaluate(objective, &child);
            children.push(Scored {
                item: child,
                fitness,
            });
        }

        for (slot, child) in worst_indices(&population, children.len())
            .into_iter()
            .zip(children)
        {
            population[slot] = child;
        }
        rec.observe(population.iter().map(|s| s.fitness));
    }
    Ok(rec.finish())
}

/// Index of the winner among `arity` contestants drawn with replacement.
/// Exact ties go to a uniformly chosen contestant.
pub(crate) fn tournament<T, R: Rng + ?Sized>(
    population: &[Scored<T>],
    arity: usize,
    rng: &mut R,
) -> usize {
    let mut winner = rng.random_range(0..population.len());
    let mut tied = 1u32;
    for _ in 1..arity {
        let c = rng.random_range(0..population.len());
        let (fc, fw) = (population[c].fitness, population[winner].fitness);
        if fc > fw {
            winner = c;
            tied = 1;
        } else if fc == fw {
            tied += 1;
            if rng.random_range(0..tied) == 0 {
                winner = c;
            }
        }
    }
    winner
}

/// One-point crossover: the children swap every locus from a uniformly
/// chosen cut point onwards.
pub fn crossover<R: Rng + ?Sized>(a: &Genome, b: &Genome, rng: &mut R) -> (Genome, Genome) {
    let point = rng.random_range(1..LOCI);
    let mut first = a.clone();
    let mut second = b.clone();
    for locus in point..LOCI {
        first.copy_locus(b, locus);
        second.copy_locus(a, locus);
    }
    (first, second)
}

fn mutate<R: Rng + ?Sized>(genome: &mut Genome, config: &GaConfig, rng: &mut R) {
    for _ in 0..config.mutation_gene_draws {
        let locus = rng.random_range(0..LOCI);
        if !rng.random_bool(config.mutation_prob) {
            continue;
        }
        if locus < MASK_BITS {
            genome.mask.flip(locus);
        } else {
            let i = locus - MASK_BITS;
            genome.set_continuous(i, GeneKind::of(i).sample(rng));
        }
    }
}

/// The `n` lowest-fitness positions, worst first (lowest index on ties).
fn worst_indices<T>(population: &[Scored<T>], n: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..population.len()).collect();
    order.sort_by(|&i, &j| population[i].fitness.total_cmp(&population[j].fitness));
    order.truncate(n);
    order
}
