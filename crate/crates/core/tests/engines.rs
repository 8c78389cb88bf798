use std::cell::Cell;

use solartree::evolution::{ep, es, ga, EpConfig, EsConfig, GaConfig, Selection};
use solartree::fitness::{FitnessModel, Genome};
use solartree::solar::Scenario;

fn model() -> FitnessModel {
    FitnessModel::new(Scenario::default()).unwrap()
}

/// Runs `f` with an objective that counts calls and checks every genome.
fn counted<F>(f: F) -> usize
where
    F: FnOnce(&dyn Fn(&Genome) -> f64),
{
    let m = model();
    let calls = Cell::new(0);
    let objective = |g: &Genome| {
        calls.set(calls.get() + 1);
        g.validate().expect("engines only evaluate valid genomes");
        assert!(g.mask.is_resolved());
        m.evaluate(g).unwrap().fitness
    };
    f(&objective);
    calls.get()
}

#[test]
fn budgets_are_exact() {
    for budget in [100, 101, 777, 4000] {
        let c = GaConfig {
            budget,
            ..GaConfig::default()
        };
        assert_eq!(
            counted(|o| {
                ga::run(&c, &o, 1).unwrap();
            }),
            budget,
            "ga {budget}"
        );
    }
    for budget in [50, 399, 1234] {
        for sel in [Selection::Comma, Selection::Plus] {
            let c = EsConfig {
                budget,
                ..EsConfig::new(sel)
            };
            assert_eq!(
                counted(|o| {
                    es::run(&c, &o, 2).unwrap();
                }),
                budget,
                "es {budget}"
            );
        }
    }
    for budget in [10, 15, 999] {
        let c = EpConfig {
            budget,
            ..EpConfig::default()
        };
        assert_eq!(
            counted(|o| {
                ep::run(&c, &o, 3).unwrap();
            }),
            budget,
            "ep {budget}"
        );
    }
}

#[test]
fn same_seed_same_trace() {
    let m = model();
    let g = GaConfig {
        budget: 600,
        ..GaConfig::default()
    };
    assert_eq!(ga::run(&g, &m, 9).unwrap(), ga::run(&g, &m, 9).unwrap());
    assert_ne!(ga::run(&g, &m, 9).unwrap(), ga::run(&g, &m, 10).unwrap());
    let e = EsConfig {
        budget: 1000,
        ..EsConfig::default()
    };
    assert_eq!(es::run(&e, &m, 9).unwrap(), es::run(&e, &m, 9).unwrap());
    let p = EpConfig {
        budget: 600,
        ..EpConfig::default()
    };
    assert_eq!(ep::run(&p, &m, 9).unwrap(), ep::run(&p, &m, 9).unwrap());
}

#[test]
fn reported_best_matches_its_genome() {
    let m = model();
    let trace = ga::run(
        &GaConfig {
            budget: 500,
            ..GaConfig::default()
        },
        &m,
        4,
    )
    .unwrap();
    assert_eq!(
        m.evaluate(&trace.best_genome).unwrap().fitness,
        trace.best_fitness
    );
    let last = trace.checkpoints.last().unwrap();
    assert!(last.best_fitness <= trace.best_fitness);
    assert!(last.average_fitness <= last.best_fitness);
}

#[test]
fn plus_selection_never_loses_best() {
    let m = model();
    for seed in 0..5 {
        let t = es::run(
            &EsConfig {
                budget: 3000,
                ..EsConfig::new(Selection::Plus)
            },
            &m,
            seed,
        )
        .unwrap();
        for w in t.checkpoints.windows(2) {
            assert!(w[1].best_fitness >= w[0].best_fitness);
        }
    }
}
