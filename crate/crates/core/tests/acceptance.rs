//! Acceptance checks. Run with `cargo test --release --test acceptance`;
//! prints one PASS/FAIL line per criterion and exits non-zero on any FAIL.

use std::fs;
use std::path::Path;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::Rng;

use solartree::cli::cmd_evolve;
use solartree::config::ExperimentConfig;
use solartree::evolution::stub::SphereStub;
use solartree::evolution::{
    ep, es, ga, rng_for, EpConfig, EsConfig, GaConfig, RunTrace, Selection,
};
use solartree::fitness::{FitnessModel, Genome, REFERENCE_FLAT_WATTS};
use solartree::geometry::{
    decode, resolve_cuts, CutMask, PanelSpec, PlacedPlate, Placement, MAX_CUTS, MAX_PLATES,
};
use solartree::stats::t_test_two_tailed;

#[path = "oracle_values.rs"]
#[allow(dead_code, unused_imports)]
mod oracle;

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn model() -> FitnessModel {
    let scenario = ExperimentConfig::default().scenario.resolve().unwrap();
    FitnessModel::new(scenario).unwrap()
}

fn geometry_exhaustive() -> Outcome {
    let start = Instant::now();
    let spec = PanelSpec::STANDARD;
    for bits in 0..=u16::MAX {
        let r = resolve_cuts(CutMask::from_bits(bits));
        if r.count() > MAX_CUTS || resolve_cuts(r) != r {
            return Err(format!("mask {bits:#06x}: bad resolution {r}"));
        }
        let plates = decode(r, &spec);
        let rows = 1 + (0..9).filter(|&i| r.get(i)).count();
        let cols = 1 + (10..15).filter(|&i| r.get(i)).count();
        if plates.len() != rows * cols || plates.len() > MAX_PLATES {
            return Err(format!("mask {bits:#06x}: {} plates", plates.len()));
        }
        if plates.iter().map(|p| p.cell_count()).sum::<usize>() != 60 {
            return Err(format!("mask {bits:#06x}: cells do not sum to 60"));
        }
        for (i, a) in plates.iter().enumerate() {
            if plates[i + 1..].iter().any(|b| a.overlaps(b)) {
                return Err(format!("mask {bits:#06x}: overlapping plates"));
            }
        }
    }
    let elapsed = start.elapsed();
    check(
        elapsed < Duration::from_secs(5),
        format!("65536 masks in {:.2} s", elapsed.as_secs_f64()),
    )
}

fn tilt_zero_invariance() -> Outcome {
    let m = model();
    let values: Vec<f64> = [0.0, 90.0, 180.0, 270.0]
        .iter()
        .map(|&az| m.flat_baseline(0.0, az))
        .collect();
    let spread = values
        .iter()
        .map(|v| ((v - values[0]) / values[0]).abs())
        .fold(0.0, f64::max);
    check(
        spread <= 1e-9 && values[0] == REFERENCE_FLAT_WATTS,
        format!("flat 0° = {:?}, max relative spread {spread:e}", values),
    )
}

fn table_orderings() -> Outcome {
    let m = model();
    let tilts = [0.0, 15.0, 30.0, 45.0, 60.0];
    let col = |az: f64| -> Vec<f64> { tilts.iter().map(|&t| m.flat_baseline(t, az)).collect() };
    let (n, e, s, w) = (col(0.0), col(90.0), col(180.0), col(270.0));
    let east_peak = (0..5).all(|i| i == 2 || e[i] < e[2]);
    let decreasing = |c: &[f64]| c.windows(2).all(|p| p[1] < p[0]);
    let esw = (1..5).all(|i| e[i] > s[i] && s[i] > w[i]);
    let ratio = e[2] / e[0];
    check(
        east_peak && decreasing(&w) && decreasing(&n) && esw && (1.02..=1.18).contains(&ratio),
        format!(
            "east peak at 30°: {east_peak}, W/N decreasing: {}/{}, E>S>W: {esw}, E30/flat = {ratio:.4}",
            decreasing(&w),
            decreasing(&n)
        ),
    )
}

fn brute_force_conflicts(plates: &[PlacedPlate]) -> usize {
    let mut n = 0;
    for i in 0..plates.len() {
        for j in i + 1..plates.len() {
            let (a, b) = (plates[i].placement, plates[j].placement);
            let raw = (a.azimuth - b.azimuth).abs() % 360.0;
            let daz = raw.min(360.0 - raw);
            if (a.height - b.height).abs() < 20.0 && (a.tilt - b.tilt).abs() < 90.0 && daz < 45.0 {
                n += 1;
            }
        }
    }
    n
}

fn conflict_accounting() -> Outcome {
    let m = model();
    let mut rng = rng_for(4242);
    for case in 0..10_000 {
        let mut g = Genome::random(&mut rng);
        // crowd some trees so conflicts are common
        if case % 2 == 0 {
            for slot in g.slots.iter_mut() {
                *slot = Placement::new(
                    rng.random_range(40.0..60.0),
                    rng.random_range(-30.0..30.0),
                    rng.random_range(80.0..140.0),
                );
            }
        }
        let r = m.evaluate(&g).unwrap();
        let expected = brute_force_conflicts(&g.placed_plates(&PanelSpec::STANDARD));
        if r.conflict_count != expected || r.fitness != r.gross_watts - 50.0 * expected as f64 {
            return Err(format!("case {case}: {r:?}, brute force {expected}"));
        }
    }
    Ok("10000 random genomes".into())
}

fn spacing_ok(t: &RunTrace, interval: usize, count: usize) -> bool {
    t.checkpoints.len() == count
        && t.checkpoints
            .iter()
            .enumerate()
            .all(|(i, c)| c.evaluations == (i + 1) * interval)
}

fn budgets_and_cadence() -> Outcome {
    let m = model();
    let g = ga::run(&GaConfig::default(), &m, 1).unwrap();
    let p = ep::run(&EpConfig::default(), &m, 1).unwrap();
    let e = es::run(&EsConfig::default(), &m, 1).unwrap();
    let ok = spacing_ok(&g, 100, 40)
        && spacing_ok(&p, 100, 40)
        && spacing_ok(&e, 800, 10_000 / 800)
        && (g.evaluations, p.evaluations, e.evaluations) == (4000, 4000, 10_000);
    check(
        ok,
        format!(
            "GA {} / EP {} / ES {} checkpoints",
            g.checkpoints.len(),
            p.checkpoints.len(),
            e.checkpoints.len()
        ),
    )
}

fn monotonicity() -> Outcome {
    let m = model();
    let mut violations = 0;
    let mut points = 0;
    for seed in 0..30 {
        let g = GaConfig {
            budget: 1000,
            checkpoint_interval: 10,
            ..GaConfig::default()
        };
        let e = EsConfig {
            budget: 1000,
            checkpoint_interval: 10,
            ..EsConfig::new(Selection::Plus)
        };
        for trace in [
            ga::run(&g, &m, seed).unwrap(),
            es::run(&e, &m, seed).unwrap(),
        ] {
            points += trace.checkpoints.len();
            violations += trace
                .checkpoints
                .windows(2)
                .filter(|w| w[1].best_fitness < w[0].best_fitness)
                .count();
        }
    }
    check(
        violations == 0,
        format!("{violations} violations over {points} checkpoints"),
    )
}

fn desk_scale() -> Outcome {
    let start = Instant::now();
    let m = model();
    let config = GaConfig {
        budget: 1000,
        ..GaConfig::default()
    };
    let mut results: Vec<(f64, usize)> = (0..10)
        .map(|seed| {
            let t = ga::run(&config, &m, seed).unwrap();
            (
                t.best_fitness,
                m.evaluate(&t.best_genome).unwrap().conflict_count,
            )
        })
        .collect();
    results.sort_by(|a, b| a.0.total_cmp(&b.0));
    let median = (results[4].0 + results[5].0) / 2.0;
    let floor = 0.75 * m.flat_baseline(0.0, 0.0);
    let conflicts: usize = results.iter().map(|r| r.1).sum();
    let elapsed = start.elapsed();
    check(
        median >= floor && conflicts == 0 && elapsed < Duration::from_secs(120),
        format!(
            "median best {median:.2} W vs floor {floor:.2} W, {conflicts} conflicts, {:.1} s",
            elapsed.as_secs_f64()
        ),
    )
}

fn statistics_oracle() -> Outcome {
    let mut worst_t = 0.0f64;
    let mut worst_p = 0.0f64;
    for c in oracle::WELCH_CASES {
        let r = t_test_two_tailed(c.a, c.b).map_err(|e| e.to_string())?;
        worst_t = worst_t.max((r.t_statistic - c.t).abs());
        worst_p = worst_p.max((r.p_value - c.p).abs());
    }
    let same = oracle::WELCH_CASES[1].a;
    let p_same = t_test_two_tailed(same, same)
        .map_err(|e| e.to_string())?
        .p_value;
    check(
        oracle::WELCH_CASES.len() == 20 && worst_t <= 1e-6 && worst_p <= 1e-6 && p_same == 1.0,
        format!("max |Δt| {worst_t:e}, max |Δp| {worst_p:e}, p(a,a) = {p_same}"),
    )
}

fn read_tree(root: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = fs::read_dir(root)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (
                e.file_name().to_string_lossy().into_owned(),
                fs::read(e.path()).unwrap(),
            )
        })
        .collect();
    files.sort();
    files
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut trees = Vec::new();
    for name in ["first", "second"] {
        let mut config = ExperimentConfig::default();
        config.experiment.out = dir.path().join(name);
        let report = cmd_evolve(&config).map_err(|e| e.to_string())?;
        trees.push(read_tree(&report.dir));
    }
    check(
        trees[0] == trees[1],
        format!("{} files compared byte for byte", trees[0].len()),
    )
}

fn es_stub() -> Outcome {
    let config = EsConfig::new(Selection::Comma);
    let mut errors: Vec<f64> = (0..10)
        .map(|seed| {
            let stub = SphereStub::random(&mut rng_for(1000 + seed));
            let trace = es::run(&config, &stub, seed).unwrap();
            stub.error_fraction(&trace.best_genome)
        })
        .collect();
    errors.sort_by(f64::total_cmp);
    let median = (errors[4] + errors[5]) / 2.0;
    check(
        median < 0.01,
        format!(
            "median error {:.3}% of the box diagonal (runs {:.3}%..{:.3}%)",
            100.0 * median,
            100.0 * errors[0],
            100.0 * errors[9]
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("1 geometry exhaustive", geometry_exhaustive),
        ("2 tilt-0 azimuth invariance", tilt_zero_invariance),
        ("3 flat baseline orderings", table_orderings),
        ("4 conflict accounting", conflict_accounting),
        ("5 budgets and cadence", budgets_and_cadence),
        ("6 monotonicity", monotonicity),
        ("7 desk-scale optimization", desk_scale),
        ("8 statistics oracle", statistics_oracle),
        ("9 determinism", determinism),
        ("10 ES self-adaptation stub", es_stub),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        match f() {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {name}: {detail}");
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
