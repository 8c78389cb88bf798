//! File formats written and read by the command-line tool.
//!
//! * trace CSV: `evaluations,avg_fitness,best_fitness`
//! * baseline CSV: `orientation_deg,tilt_deg,watts`
//! * summary CSV: `run,best_fitness`, one row per run followed by
//!   `average_best` and `global_best` rows
//! * genome file: `key = value` lines, `#` starts a comment
//! * scene file: JSON, see [`Scene`]
//!
//! CSV numbers are written with six significant digits.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evolution::Checkpoint;
use crate::fitness::{EvalResult, Genome, SLOTS};
use crate::geometry::{CutMask, PanelSpec, Placement};
use crate::stats::ExperimentSummary;

/// Formats `x` with six significant digits in plain decimal notation.
pub fn format_sig6(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.5e}", x.abs());
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    let digits: String = mantissa.chars().filter(|c| *c != '.').collect();
    let sign = if x < 0.0 { "-" } else { "" };
    let body = if exp < 0 {
        format!("0.{}{}", "0".repeat((-exp - 1) as usize), digits)
    } else if exp >= 5 {
        format!("{}{}", digits, "0".repeat((exp - 5) as usize))
    } else {
        let split = exp as usize + 1;
        format!("{}.{}", &digits[..split], &digits[split..])
    };
    format!("{sign}{body}")
}

/// `x` as it reads back from a six-significant-digit CSV field.
pub fn quantize(x: f64) -> f64 {
    format_sig6(x).parse().expect("formatted number parses")
}

pub fn trace_csv(checkpoints: &[Checkpoint]) -> String {
    let mut out = String::from("evaluations,avg_fitness,best_fitness\n");
    for c in checkpoints {
        let _ = writeln!(
            out,
            "{},{},{}",
            c.evaluations,
            format_sig6(c.average_fitness),
            format_sig6(c.best_fitness)
        );
    }
    out
}

pub fn parse_trace_csv(path: &Path, text: &str) -> Result<Vec<Checkpoint>> {
    let mut rows = data_rows(path, text, "evaluations,avg_fitness,best_fitness")?;
    rows.iter_mut()
        .map(|(line, fields)| {
            if fields.len() != 3 {
                return Err(Error::parse(
                    path,
                    format!("line {line}: expected 3 fields"),
                ));
            }
            Ok(Checkpoint {
                evaluations: parse_field(path, *line, fields[0])?,
                average_fitness: parse_field(path, *line, fields[1])?,
                best_fitness: parse_field(path, *line, fields[2])?,
            })
        })
        .collect()
}

/// Rows of `(orientation_deg, tilt_deg, watts)`.
pub fn baseline_csv(rows: &[(f64, f64, f64)]) -> String {
    let mut out = String::from("orientation_deg,tilt_deg,watts\n");
    for (az, tilt, w) in rows {
        let _ = writeln!(out, "{az},{tilt},{}", format_sig6(*w));
    }
    out
}

pub fn summary_csv(summary: &ExperimentSummary) -> String {
    let mut out = String::from("run,best_fitness\n");
    for (i, b) in summary.run_bests.iter().enumerate() {
        let _ = writeln!(out, "{i},{}", format_sig6(*b));
    }
    let _ = writeln!(out, "average_best,{}", format_sig6(summary.average_best));
    let _ = writeln!(out, "global_best,{}", format_sig6(summary.global_best));
    out
}

/// Reads a summary CSV back. Aggregate rows are checked against the
/// per-run values.
pub fn parse_summary_csv(path: &Path, method: &str, text: &str) -> Result<ExperimentSummary> {
    let rows = data_rows(path, text, "run,best_fitness")?;
    let mut bests = Vec::new();
    let mut aggregates = BTreeMap::new();
    for (line, fields) in rows {
        if fields.len() != 2 {
            return Err(Error::parse(
                path,
                format!("line {line}: expected 2 fields"),
            ));
        }
        let value: f64 = parse_field(path, line, fields[1])?;
        match fields[0] {
            "average_best" | "global_best" => {
                aggregates.insert(fields[0], value);
            }
            run => {
                let index: usize = parse_field(path, line, run)?;
                if index != bests.len() {
                    return Err(Error::parse(
                        path,
                        format!("line {line}: run {index} out of order"),
                    ));
                }
                bests.push(value);
            }
        }
    }
    let summary = ExperimentSummary::from_bests(method, bests)
        .map_err(|e| Error::parse(path, e.to_string()))?;
    for (key, expected) in [
        ("average_best", quantize(summary.average_best)),
        ("global_best", quantize(summary.global_best)),
    ] {
        match aggregates.get(key) {
            Some(&v) if v == expected => {}
            Some(v) => {
                return Err(Error::parse(
                    path,
                    format!("{key} row {v} disagrees with the runs ({expected})"),
                ))
            }
            None => return Err(Error::parse(path, format!("missing {key} row"))),
        }
    }
    Ok(summary)
}

pub fn averaged_trace_csv(trace: &[(usize, f64)]) -> String {
    let mut out = String::from("evaluations,avg_fitness\n");
    for (e, a) in trace {
        let _ = writeln!(out, "{e},{}", format_sig6(*a));
    }
    out
}

fn data_rows<'a>(path: &Path, text: &'a str, header: &str) -> Result<Vec<(usize, Vec<&'a str>)>> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty());
    match lines.next() {
        Some((_, h)) if h.trim() == header => {}
        _ => return Err(Error::parse(path, format!("expected header `{header}`"))),
    }
    Ok(lines
        .map(|(i, l)| (i + 1, l.split(',').map(str::trim).collect()))
        .collect())
}

fn parse_field<T: std::str::FromStr>(path: &Path, line: usize, field: &str) -> Result<T> {
    field
        .parse()
        .map_err(|_| Error::parse(path, format!("line {line}: cannot parse `{field}`")))
}

/// A genome together with the score it had when it was saved.
#[derive(Debug, Clone, PartialEq)]
pub struct GenomeRecord {
    pub genome: Genome,
    pub eval: Option<EvalResult>,
}

/// Writes the genome file. Slot values use shortest round-trip formatting
/// so the genome reads back bit-for-bit.
pub fn genome_file(record: &GenomeRecord) -> String {
    let mut out = String::new();
    out.push_str("# solar tree genome\n");
    out.push_str("# mask: cut bits, bit 0 first (0-9 lengthwise, 10-15 widthwise)\n");
    out.push_str("# slot.NN: height_in tilt_deg azimuth_deg\n");
    let _ = writeln!(out, "mask = {}", record.genome.mask);
    for (i, s) in record.genome.slots.iter().enumerate() {
        let _ = writeln!(out, "slot.{i:02} = {} {} {}", s.height, s.tilt, s.azimuth);
    }
    if let Some(e) = &record.eval {
        let _ = writeln!(out, "gross_watts = {}", e.gross_watts);
        let _ = writeln!(out, "conflicts = {}", e.conflict_count);
        let _ = writeln!(out, "penalty_watts = {}", e.penalty_watts);
        let _ = writeln!(out, "fitness = {}", e.fitness);
    }
    out
}

pub fn parse_genome_file(path: &Path, text: &str) -> Result<GenomeRecord> {
    let mut values = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::parse(path, format!("line {}: expected `key = value`", i + 1)))?;
        values.insert(key.trim().to_string(), value.trim().to_string());
    }
    let get = |key: &str| {
        values
            .get(key)
            .map(String::as_str)
            .ok_or_else(|| Error::parse(path, format!("missing `{key}`")))
    };

    let mask: CutMask = get("mask")?
        .parse()
        .map_err(|e| Error::parse(path, format!("mask: {e}")))?;
    let mut slots = [Placement::new(0.0, 0.0, 0.0); SLOTS];
    for (i, slot) in slots.iter_mut().enumerate() {
        let key = format!("slot.{i:02}");
        let nums: Vec<f64> = get(&key)?
            .split_whitespace()
            .map(|v| v.parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::parse(path, format!("{key}: expected three numbers")))?;
        if nums.len() != 3 {
            return Err(Error::parse(path, format!("{key}: expected three numbers")));
        }
        *slot = Placement::new(nums[0], nums[1], nums[2]);
    }
    let genome = Genome { mask, slots };
    genome
        .validate()
        .map_err(|e| Error::parse(path, e.to_string()))?;

    let eval = if values.contains_key("fitness") {
        let num = |key: &str| -> Result<f64> {
            get(key)?
                .parse()
                .map_err(|_| Error::parse(path, format!("{key}: not a number")))
        };
        Some(EvalResult {
            gross_watts: num("gross_watts")?,
            conflict_count: get("conflicts")?
                .parse()
                .map_err(|_| Error::parse(path, "conflicts: not a count"))?,
            penalty_watts: num("penalty_watts")?,
            fitness: num("fitness")?,
        })
    } else {
        None
    };
    Ok(GenomeRecord { genome, eval })
}

/// One plate as an oriented rectangle, all lengths in inches.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneRect {
    /// Centroid of the plate's cells in the flat layout; `z` is its height.
    pub center: [f64; 3],
    /// Extent along the panel length, then along its width.
    pub extent: [f64; 2],
    pub tilt_deg: f64,
    pub azimuth_deg: f64,
    pub cells: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trunk {
    pub x: f64,
    pub y: f64,
    pub base_z: f64,
    pub top_z: f64,
}

/// A solar tree ready for an external 3D viewer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scene {
    pub units: String,
    pub trunk: Trunk,
    pub plates: Vec<SceneRect>,
}

pub fn scene_from_genome(genome: &Genome, spec: &PanelSpec) -> Scene {
    let cell = spec.cell_in;
    let plates: Vec<SceneRect> = genome
        .placed_plates(spec)
        .into_iter()
        .map(|p| SceneRect {
            center: [
                (p.plate.row_start + p.plate.row_end) as f64 * cell / 2.0,
                (p.plate.col_start + p.plate.col_end) as f64 * cell / 2.0,
                p.placement.height,
            ],
            extent: [p.plate.rows() as f64 * cell, p.plate.cols() as f64 * cell],
            tilt_deg: p.placement.tilt,
            azimuth_deg: p.placement.azimuth,
            cells: p.plate.cell_count(),
        })
        .collect();
    let top_z = plates
        .iter()
        .map(|p| p.center[2])
        .fold(Placement::HEIGHT_RANGE.0, f64::max);
    Scene {
        units: "inches".to_string(),
        trunk: Trunk {
            x: spec.cells_len as f64 * cell / 2.0,
            y: spec.cells_wid as f64 * cell / 2.0,
            base_z: 0.0,
            top_z,
        },
        plates,
    }
}

pub fn scene_json(scene: &Scene) -> String {
    let mut s = serde_json::to_string_pretty(scene).expect("scene serializes");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evolution::rng_for;

    #[test]
    fn six_significant_digits() {
        assert_eq!(format_sig6(666.4), "666.400");
        assert_eq!(format_sig6(728.7123), "728.712");
        assert_eq!(format_sig6(-12.3456789), "-12.3457");
        assert_eq!(format_sig6(0.00123456789), "0.00123457");
        assert_eq!(format_sig6(1234567.0), "1234570");
        assert_eq!(format_sig6(100000.0), "100000");
        assert_eq!(format_sig6(99999.96), "100000");
        assert_eq!(format_sig6(0.0), "0");
        assert_eq!(format_sig6(1.0), "1.00000");
        assert_eq!(quantize(3.14159265), 3.14159);
    }

    #[test]
    fn trace_round_trip() {
        let cps = vec![
            Checkpoint {
                evaluations: 100,
                average_fitness: 412.5,
                best_fitness: 600.25,
            },
            Checkpoint {
                evaluations: 200,
                average_fitness: -40.0,
                best_fitness: 601.0,
            },
        ];
        let text = trace_csv(&cps);
        assert_eq!(parse_trace_csv(Path::new("t.csv"), &text).unwrap(), cps);
        assert!(parse_trace_csv(Path::new("t.csv"), "a,b\n1,2\n").is_err());
    }

    #[test]
    fn summary_round_trip() {
        let s = ExperimentSummary::from_bests("ga", vec![600.0, 620.5, 641.0]).unwrap();
        let text = summary_csv(&s);
        assert!(text.ends_with("average_best,620.500\nglobal_best,641.000\n"));
        let back = parse_summary_csv(Path::new("s.csv"), "ga", &text).unwrap();
        assert_eq!(back.run_bests, s.run_bests);
        let tampered = text.replace("global_best,641.000", "global_best,700");
        assert!(parse_summary_csv(Path::new("s.csv"), "ga", &tampered).is_err());
    }

    #[test]
    fn genome_round_trip() {
        let mut rng = rng_for(17);
        let genome = Genome::random(&mut rng);
        let record = GenomeRecord {
            genome,
            eval: Some(EvalResult {
                gross_watts: 650.125,
                conflict_count: 1,
                penalty_watts: 50.0,
                fitness: 600.125,
            }),
        };
        let text = genome_file(&record);
        assert_eq!(
            parse_genome_file(Path::new("g.txt"), &text).unwrap(),
            record
        );
    }

    #[test]
    fn genome_file_errors() {
        let p = Path::new("g.txt");
        assert!(parse_genome_file(p, "mask = 0000\n").is_err());
        let record = GenomeRecord {
            genome: Genome::uniform(CutMask::EMPTY, Placement::new(50.0, 0.0, 0.0)),
            eval: None,
        };
        let text = genome_file(&record);
        assert!(parse_genome_file(p, &text.replace("slot.03 = 50 0 0", "slot.03 = 50 0")).is_err());
        assert!(
            parse_genome_file(p, &text.replace("slot.03 = 50 0 0", "slot.03 = 99 0 0")).is_err()
        );
        assert!(parse_genome_file(p, "garbage\n").is_err());
    }

    #[test]
    fn uncut_scene() {
        let g = Genome::uniform(CutMask::EMPTY, Placement::new(45.0, 10.0, 90.0));
        let scene = scene_from_genome(&g, &PanelSpec::STANDARD);
        assert_eq!(scene.plates.len(), 1);
        assert_eq!(scene.plates[0].cells, 60);
        assert_eq!(scene.plates[0].extent, [60.0, 36.0]);
        assert_eq!(scene.plates[0].center, [30.0, 18.0, 45.0]);
        let back: Scene = serde_json::from_str(&scene_json(&scene)).unwrap();
        assert_eq!(back, scene);
    }
}
