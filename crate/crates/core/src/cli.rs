//! The `solartree` command-line tool.
//!
//! Output layout of `evolve` (under `--out`, default `results/`):
//!
//! ```text
//! <out>/<algorithm>/meta.txt             run parameters and calibration
//! <out>/<algorithm>/trace_run000.csv     one per run
//! <out>/<algorithm>/summary.csv          per-run bests + aggregates
//! <out>/<algorithm>/averaged_trace.csv   mean population fitness across runs
//! <out>/<algorithm>/best_genome.txt      best genome over all runs
//! ```

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use crate::config::{Algorithm, ExperimentConfig, Overrides};
use crate::error::{Error, Result};
use crate::evolution::{ep, es, ga, RunTrace};
use crate::fitness::FitnessModel;
use crate::output::{
    averaged_trace_csv, baseline_csv, genome_file, parse_genome_file, parse_summary_csv, quantize,
    scene_from_genome, scene_json, summary_csv, trace_csv, GenomeRecord, Scene,
};
use crate::stats::{summarize, t_test_two_tailed, ExperimentSummary, TTestResult};

#[derive(Debug, Parser)]
#[command(
    name = "solartree",
    version,
    about = "Evolve solar trees cut from a flat panel"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Flat-panel output for 4 orientations × 5 tilts.
    Baseline(CommonArgs),
    /// Run independent seeded evolution runs.
    Evolve(CommonArgs),
    /// Welch t-test between two summary CSVs.
    Stats {
        summary_a: PathBuf,
        summary_b: PathBuf,
    },
    /// Convert a genome file into a JSON scene of oriented rectangles.
    ExportScene {
        genome: PathBuf,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args, Default)]
pub struct CommonArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// ga, es-comma, es-plus or ep.
    #[arg(long = "algo")]
    pub algo: Option<String>,
    #[arg(long)]
    pub runs: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl CommonArgs {
    pub fn load(&self) -> Result<ExperimentConfig> {
        let overrides = Overrides {
            algorithm: self.algo.clone(),
            runs: self.runs,
            seed: self.seed,
            out: self.out.clone(),
        };
        ExperimentConfig::load_with(self.config.as_deref(), &overrides)
    }
}

/// Runs a parsed command line, returning what to print on stdout.
pub fn execute(cli: Cli) -> Result<String> {
    match cli.command {
        Command::Baseline(args) => {
            let report = cmd_baseline(&args.load()?)?;
            let mut out = format!("calibration = {}\n", report.calibration);
            out.push_str(&baseline_csv(&report.rows));
            Ok(out)
        }
        Command::Evolve(args) => {
            let report = cmd_evolve(&args.load()?)?;
            let s = &report.summary;
            Ok(format!(
                "{}: {} runs, average best {:.2} W, global best {:.2} W\nwrote {}\n",
                s.method,
                s.run_bests.len(),
                s.average_best,
                s.global_best,
                report.dir.display()
            ))
        }
        Command::Stats {
            summary_a,
            summary_b,
        } => {
            let r = cmd_stats(&summary_a, &summary_b)?;
            Ok(format!(
                "t = {}\ndf = {}\np = {}\nt_statistic,degrees_of_freedom,p_value\n{},{},{}\n",
                r.t_statistic,
                r.degrees_of_freedom,
                r.p_value,
                r.t_statistic,
                r.degrees_of_freedom,
                r.p_value
            ))
        }
        Command::ExportScene { genome, out } => {
            let scene = cmd_export_scene(&genome)?;
            let json = scene_json(&scene);
            match out {
                Some(path) => {
                    write(&path, &json)?;
                    Ok(String::new())
                }
                None => Ok(json),
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct BaselineReport {
    pub calibration: f64,
    /// `(orientation_deg, tilt_deg, watts)`, orientation-major.
    pub rows: Vec<(f64, f64, f64)>,
}

pub const BASELINE_ORIENTATIONS: [f64; 4] = [0.0, 90.0, 180.0, 270.0];
pub const BASELINE_TILTS: [f64; 5] = [0.0, 15.0, 30.0, 45.0, 60.0];

/// Computes the flat-panel sweep and writes `<out>/baseline.csv`.
pub fn cmd_baseline(config: &ExperimentConfig) -> Result<BaselineReport> {
    let scenario = config.scenario.resolve()?;
    let model = FitnessModel::new(scenario)?;
    let rows = BASELINE_ORIENTATIONS
        .iter()
        .flat_map(|&az| BASELINE_TILTS.iter().map(move |&tilt| (az, tilt)))
        .map(|(az, tilt)| (az, tilt, model.flat_baseline(tilt, az)))
        .collect();
    let report = BaselineReport {
        calibration: model.scenario().calibration,
        rows,
    };
    let dir = &config.experiment.out;
    create_dir(dir)?;
    write(&dir.join("baseline.csv"), &baseline_csv(&report.rows))?;
    write(
        &dir.join("baseline_meta.txt"),
        &format!("calibration = {}\n", report.calibration),
    )?;
    Ok(report)
}

#[derive(Debug, Clone)]
pub struct EvolveReport {
    pub dir: PathBuf,
    pub traces: Vec<RunTrace>,
    pub summary: ExperimentSummary,
}

/// Runs every seeded run of the configured algorithm and writes the
/// artifacts. Run `i` uses seed `experiment.seed + i`.
pub fn cmd_evolve(config: &ExperimentConfig) -> Result<EvolveReport> {
    config.validate()?;
    let scenario = config.scenario.resolve()?;
    let model = FitnessModel::new(scenario)?;
    let algorithm = config.experiment.algorithm;
    let runs = config.runs();
    let dir = config.experiment.out.join(algorithm.label());
    create_dir(&dir)?;

    let seeds: Vec<u64> = (0..runs as u64)
        .map(|i| config.experiment.seed.wrapping_add(i))
        .collect();
    let traces: Vec<RunTrace> = seeds
        .par_iter()
        .map(|&seed| run_one(config, algorithm, &model, seed))
        .collect::<Result<_>>()?;

    for (i, t) in traces.iter().enumerate() {
        write(
            &dir.join(format!("trace_run{i:03}.csv")),
            &trace_csv(&t.checkpoints),
        )?;
    }

    let mut summary = summarize(algorithm.label(), &traces)?;
    // aggregates follow the values as written, so the CSV re-summarizes exactly
    let quantized = summary.run_bests.iter().map(|&b| quantize(b)).collect();
    let averaged_trace = std::mem::take(&mut summary.averaged_trace);
    summary = ExperimentSummary::from_bests(algorithm.label(), quantized)?;
    summary.averaged_trace = averaged_trace;
    write(&dir.join("summary.csv"), &summary_csv(&summary))?;
    write(
        &dir.join("averaged_trace.csv"),
        &averaged_trace_csv(&summary.averaged_trace),
    )?;

    // first run wins ties
    let best = traces
        .iter()
        .reduce(|a, b| {
            if b.best_fitness > a.best_fitness {
                b
            } else {
                a
            }
        })
        .expect("at least one run");
    let record = GenomeRecord {
        genome: best.best_genome.clone(),
        eval: Some(model.evaluate(&best.best_genome)?),
    };
    write(&dir.join("best_genome.txt"), &genome_file(&record))?;
    write(&dir.join("meta.txt"), &meta(config, &model))?;

    Ok(EvolveReport {
        dir,
        traces,
        summary,
    })
}

fn run_one(
    config: &ExperimentConfig,
    algorithm: Algorithm,
    model: &FitnessModel,
    seed: u64,
) -> Result<RunTrace> {
    match algorithm {
        Algorithm::Ga => ga::run(&config.ga, model, seed),
        Algorithm::EsComma | Algorithm::EsPlus => es::run(&config.es_config(), model, seed),
        Algorithm::Ep => ep::run(&config.ep, model, seed),
    }
}

fn meta(config: &ExperimentConfig, model: &FitnessModel) -> String {
    let s = model.scenario();
    let mut out = String::new();
    let _ = writeln!(out, "algorithm = {}", config.experiment.algorithm);
    let _ = writeln!(out, "runs = {}", config.runs());
    let _ = writeln!(out, "master_seed = {}", config.experiment.seed);
    let _ = writeln!(out, "latitude = {}", s.latitude);
    let _ = writeln!(out, "longitude = {}", s.longitude);
    let _ = writeln!(out, "day_of_year = {}", s.day_of_year);
    let hours: Vec<String> = s.hours.iter().map(|h| h.to_string()).collect();
    let _ = writeln!(out, "hours = {}", hours.join(" "));
    let _ = writeln!(out, "tz_offset_hours = {}", s.tz_offset_hours);
    let _ = writeln!(out, "albedo = {}", s.albedo);
    let _ = writeln!(out, "calibration = {}", s.calibration);
    let budget = match config.experiment.algorithm {
        Algorithm::Ga => config.ga.budget,
        Algorithm::EsComma | Algorithm::EsPlus => config.es.budget,
        Algorithm::Ep => config.ep.budget,
    };
    let _ = writeln!(out, "budget = {budget}");
    out
}

/// Welch t-test on the per-run bests of two summary files.
pub fn cmd_stats(a: &Path, b: &Path) -> Result<TTestResult> {
    let sa = read_summary(a)?;
    let sb = read_summary(b)?;
    for (path, s) in [(a, &sa), (b, &sb)] {
        if s.run_bests.len() < 2 {
            return Err(Error::InsufficientData(format!(
                "{}: needs at least 2 runs, found {}",
                path.display(),
                s.run_bests.len()
            )));
        }
    }
    t_test_two_tailed(&sa.run_bests, &sb.run_bests)
}

fn read_summary(path: &Path) -> Result<ExperimentSummary> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let method = path
        .parent()
        .and_then(Path::file_name)
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    parse_summary_csv(path, &method, &text)
}

pub fn cmd_export_scene(genome: &Path) -> Result<Scene> {
    let text = fs::read_to_string(genome).map_err(|e| Error::io(genome, e))?;
    let record = parse_genome_file(genome, &text)?;
    Ok(scene_from_genome(
        &record.genome,
        &crate::geometry::PanelSpec::STANDARD,
    ))
}

fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

fn write(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}
