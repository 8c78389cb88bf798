//! Genome scoring and the flat-panel baseline.
//!
//! Fitness is the calibrated mean, over the scenario hours, of the
//! plane-of-array irradiance on every plate weighted by the plate's share
//! of the panel's cells, minus a fixed penalty for every conflicting pair.

use rand::Rng;

use crate::error::{Error, Result};
use crate::geometry::{
    count_conflicts, decode, resolve_cuts, ConflictRule, CutMask, PanelSpec, PlacedPlate,
    Placement, MASK_BITS, MAX_PLATES,
};
use crate::solar::{clear_sky, plane_of_array, sun_position, Irradiance, Scenario, SunPosition};

/// Flat 0°-tilt baseline that calibration pins, in watts.
pub const REFERENCE_FLAT_WATTS: f64 = 666.40;

/// Number of placement slots in a genome.
pub const SLOTS: usize = MAX_PLATES;
/// Height, tilt and azimuth for each slot.
pub const CONTINUOUS_GENES: usize = 3 * SLOTS;
/// Cut bits followed by continuous genes.
pub const LOCI: usize = MASK_BITS + CONTINUOUS_GENES;

/// The three kinds of continuous gene.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneKind {
    Height,
    Tilt,
    Azimuth,
}

impl GeneKind {
    /// Kind of continuous gene `index` (0..48), laid out slot by slot.
    pub fn of(index: usize) -> GeneKind {
        match index % 3 {
            0 => GeneKind::Height,
            1 => GeneKind::Tilt,
            _ => GeneKind::Azimuth,
        }
    }

    pub fn range(self) -> (f64, f64) {
        match self {
            GeneKind::Height => Placement::HEIGHT_RANGE,
            GeneKind::Tilt => Placement::TILT_RANGE,
            GeneKind::Azimuth => Placement::AZIMUTH_RANGE,
        }
    }

    pub fn span(self) -> f64 {
        let (lo, hi) = self.range();
        hi - lo
    }

    /// Brings a value back into range: azimuth wraps, the others clamp.
    pub fn repair(self, value: f64) -> f64 {
        match self {
            GeneKind::Azimuth => {
                let v = value.rem_euclid(360.0);
                // rem_euclid can round up to exactly 360 for tiny negatives
                if v >= 360.0 {
                    0.0
                } else {
                    v
                }
            }
            _ => {
                let (lo, hi) = self.range();
                value.clamp(lo, hi)
            }
        }
    }

    pub fn sample<R: Rng + ?Sized>(self, rng: &mut R) -> f64 {
        let (lo, hi) = self.range();
        match self {
            GeneKind::Azimuth => rng.random_range(lo..hi),
            _ => rng.random_range(lo..=hi),
        }
    }
}

/// A cut mask plus one placement slot per potential plate.
///
/// Plate `k` in row-major decode order takes slot `k`; the remaining slots
/// are carried along but do not affect fitness.
#[derive(Debug, Clone, PartialEq)]
pub struct Genome {
    pub mask: CutMask,
    pub slots: [Placement; SLOTS],
}

impl Genome {
    /// An uncut panel with every slot set to `placement`.
    pub fn uniform(mask: CutMask, placement: Placement) -> Self {
        Genome {
            mask,
            slots: [placement; SLOTS],
        }
    }

    /// Uniformly random bits and slots, with the mask resolved.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let mask = resolve_cuts(CutMask::from_bits(rng.random::<u16>()));
        let mut slots = [Placement::new(0.0, 0.0, 0.0); SLOTS];
        for slot in &mut slots {
            *slot = Placement::new(
                GeneKind::Height.sample(rng),
                GeneKind::Tilt.sample(rng),
                GeneKind::Azimuth.sample(rng),
            );
        }
        Genome { mask, slots }
    }

    pub fn continuous(&self, index: usize) -> f64 {
        let slot = &self.slots[index / 3];
        match GeneKind::of(index) {
            GeneKind::Height => slot.height,
            GeneKind::Tilt => slot.tilt,
            GeneKind::Azimuth => slot.azimuth,
        }
    }

    /// Stores `value` after clamping or wrapping it into the gene's range.
    pub fn set_continuous(&mut self, index: usize, value: f64) {
        let kind = GeneKind::of(index);
        let value = kind.repair(value);
        let slot = &mut self.slots[index / 3];
        match kind {
            GeneKind::Height => slot.height = value,
            GeneKind::Tilt => slot.tilt = value,
            GeneKind::Azimuth => slot.azimuth = value,
        }
    }

    /// Copies locus `locus` of the 64-locus linearization from `other`.
    pub fn copy_locus(&mut self, other: &Genome, locus: usize) {
        if locus < MASK_BITS {
            self.mask.set(locus, other.mask.get(locus));
        } else {
            let i = locus - MASK_BITS;
            self.set_continuous(i, other.continuous(i));
        }
    }

    pub fn resolve(&mut self) {
        self.mask = resolve_cuts(self.mask);
    }

    pub fn validate(&self) -> Result<()> {
        for (slot, p) in self.slots.iter().enumerate() {
            if !p.is_valid() {
                return Err(Error::InvalidGenome {
                    slot,
                    message: format!("height {} tilt {} azimuth {}", p.height, p.tilt, p.azimuth),
                });
            }
        }
        Ok(())
    }

    /// Decoded plates paired with their slots.
    pub fn placed_plates(&self, spec: &PanelSpec) -> Vec<PlacedPlate> {
        decode(resolve_cuts(self.mask), spec)
            .into_iter()
            .zip(self.slots.iter())
            .map(|(plate, &placement)| PlacedPlate { plate, placement })
            .collect()
    }
}

/// Fitness breakdown for one genome.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalResult {
    pub gross_watts: f64,
    pub conflict_count: usize,
    pub penalty_watts: f64,
    pub fitness: f64,
}

/// A scenario with its per-hour sun positions and irradiance precomputed.
#[derive(Debug, Clone)]
pub struct FitnessModel {
    scenario: Scenario,
    spec: PanelSpec,
    rule: ConflictRule,
    sky: Vec<(SunPosition, Irradiance)>,
}

impl FitnessModel {
    pub fn new(scenario: Scenario) -> Result<Self> {
        Self::with_rule(scenario, ConflictRule::default())
    }

    pub fn with_rule(scenario: Scenario, rule: ConflictRule) -> Result<Self> {
        scenario.validate()?;
        let sky = scenario
            .hours
            .iter()
            .map(|&h| {
                let sun = sun_position(&scenario, h);
                (sun, clear_sky(&sun))
            })
            .collect();
        Ok(FitnessModel {
            scenario,
            spec: PanelSpec::STANDARD,
            rule,
            sky,
        })
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn panel(&self) -> &PanelSpec {
        &self.spec
    }

    pub fn rule(&self) -> &ConflictRule {
        &self.rule
    }

    /// Plane-of-array irradiance on a unit-area plate, summed over hours.
    fn total_poa(&self, placement: &Placement) -> f64 {
        self.sky
            .iter()
            .map(|(sun, irr)| {
                plane_of_array(
                    irr,
                    sun,
                    placement.tilt,
                    placement.azimuth,
                    self.scenario.albedo,
                )
            })
            .sum()
    }

    pub fn evaluate(&self, genome: &Genome) -> Result<EvalResult> {
        genome.validate()?;
        let plates = genome.placed_plates(&self.spec);
        let cells = self.spec.cells_total() as f64;
        // Summing hour by hour, then dividing, keeps the result identical
        // to the flat baseline for an uncut genome.
        let mut total = 0.0;
        for (sun, irr) in &self.sky {
            total += plates
                .iter()
                .map(|p| {
                    plane_of_array(
                        irr,
                        sun,
                        p.placement.tilt,
                        p.placement.azimuth,
                        self.scenario.albedo,
                    ) * (p.plate.cell_count() as f64 / cells)
                })
                .sum::<f64>();
        }
        let gross_watts = self.scenario.calibration * (total / self.sky.len() as f64);
        let conflict_count = count_conflicts(&plates, &self.rule);
        let penalty_watts = self.rule.penalty * conflict_count as f64;
        Ok(EvalResult {
            gross_watts,
            conflict_count,
            penalty_watts,
            fitness: gross_watts - penalty_watts,
        })
    }

    /// Watts from the uncut panel at one orientation.
    pub fn flat_baseline(&self, tilt: f64, azimuth: f64) -> f64 {
        let total = self.total_poa(&Placement::new(50.0, tilt, azimuth));
        self.scenario.calibration * (total / self.sky.len() as f64)
    }
}

pub fn evaluate(genome: &Genome, scenario: &Scenario) -> Result<EvalResult> {
    FitnessModel::new(scenario.clone())?.evaluate(genome)
}

pub fn flat_baseline(scenario: &Scenario, tilt: f64, azimuth: f64) -> Result<f64> {
    Ok(FitnessModel::new(scenario.clone())?.flat_baseline(tilt, azimuth))
}

/// Calibration constant that makes the flat 0° baseline equal
/// [`REFERENCE_FLAT_WATTS`]. The scenario's own calibration is ignored.
pub fn calibrate(scenario: &Scenario) -> Result<f64> {
    calibrate_to(scenario, REFERENCE_FLAT_WATTS)
}

pub fn calibrate_to(scenario: &Scenario, target_watts: f64) -> Result<f64> {
    let model = FitnessModel::new(scenario.clone().with_calibration(1.0))?;
    let total = model.total_poa(&Placement::new(50.0, 0.0, 0.0));
    let hours = model.sky.len() as f64;
    if total <= 0.0 {
        return Err(Error::ZeroBaseline);
    }
    // nudge by ulps until the calibrated baseline reproduces the target exactly
    let mean = total / hours;
    let mut c = target_watts / mean;
    for _ in 0..8 {
        let b = c * mean;
        if b == target_watts {
            break;
        }
        c = if b > target_watts {
            c.next_down()
        } else {
            c.next_up()
        };
    }
    Ok(c)
}
