//! Evolutionary engines over [`Genome`]s.
//!
//! Every engine counts the initial population against its fitness budget,
//! stops after exactly `budget` evaluations, and records a [`Checkpoint`]
//! each time the evaluation count passes a multiple of its checkpoint
//! interval.

pub mod ep;
pub mod es;
pub mod ga;
pub mod stub;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::fitness::{FitnessModel, Genome};

pub use ep::{EpConfig, EpIndividual};
pub use es::{EsConfig, EsIndividual, Selection};
pub use ga::GaConfig;

/// Something an engine can maximize.
pub trait Objective {
    fn fitness(&self, genome: &Genome) -> f64;
}

impl Objective for FitnessModel {
    fn fitness(&self, genome: &Genome) -> f64 {
        self.evaluate(genome)
            .expect("engine produced a genome outside the legal ranges")
            .fitness
    }
}

impl<F: Fn(&Genome) -> f64> Objective for F {
    fn fitness(&self, genome: &Genome) -> f64 {
        self(genome)
    }
}

/// The random stream for one run.
pub fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Checkpoint {
    pub evaluations: usize,
    pub average_fitness: f64,
    pub best_fitness: f64,
}

/// Outcome of one independent run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunTrace {
    pub checkpoints: Vec<Checkpoint>,
    /// Best genome evaluated at any point of the run.
    pub best_genome: Genome,
    pub best_fitness: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone)]
pub(crate) struct Scored<T> {
    pub item: T,
    pub fitness: f64,
}

/// Sorts best first; equal fitness keeps the incoming order.
pub(crate) fn sort_best_first<T>(pool: &mut [Scored<T>]) {
    pool.sort_by(|a, b| b.fitness.total_cmp(&a.fitness));
}

/// Checkpoints plus the best-ever genome of a run.
pub(crate) struct Recorder {
    interval: usize,
    next: usize,
    checkpoints: Vec<Checkpoint>,
    best: Option<(Genome, f64)>,
    evaluations: usize,
}

impl Recorder {
    pub fn new(interval: usize) -> Self {
        Recorder {
            interval,
            next: interval,
            checkpoints: Vec::new(),
            best: None,
            evaluations: 0,
        }
    }

    pub fn evaluations(&self) -> usize {
        self.evaluations
    }

    /// Evaluates `genome`, counting it and tracking the best so far.
    pub fn evaluate<O: Objective + ?Sized>(&mut self, objective: &O, genome: &Genome) -> f64 {
        let fitness = objective.fitness(genome);
        self.evaluations += 1;
        if self.best.as_ref().is_none_or(|(_, f)| fitness > *f) {
            self.best = Some((genome.clone(), fitness));
        }
        fitness
    }

    /// Emits a checkpoint for every interval boundary reached so far,
    /// summarizing the given population.
    pub fn observe<I: IntoIterator<Item = f64>>(&mut self, fitnesses: I) {
        if self.next > self.evaluations {
            return;
        }
        let (sum, count, best) = fitnesses
            .into_iter()
            .fold((0.0, 0usize, f64::NEG_INFINITY), |(s, n, b), f| {
                (s + f, n + 1, b.max(f))
            });
        let average_fitness = sum / count as f64;
        while self.next <= self.evaluations {
            self.checkpoints.push(Checkpoint {
                evaluations: self.next,
                average_fitness,
                best_fitness: best,
            });
            self.next += self.interval;
        }
    }

    pub fn finish(self) -> RunTrace {
        let (best_genome, best_fitness) = self.best.expect("at least one evaluation");
        RunTrace {
            checkpoints: self.checkpoints,
            best_genome,
            best_fitness,
            evaluations: self.evaluations,
        }
    }
}
