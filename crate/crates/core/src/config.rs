//! Experiment configuration, read from TOML.
//!
//! Every field has a default, so an empty file (or no file) describes the
//! reference setup: Athens, GA on August 15, hourly from 11:00 to 19:00
//! UTC, with the GA, ES and EP parameters of the original experiments.
//!
//! ```toml
//! [scenario]
//! latitude = 33.957409
//! longitude = -83.376801
//! day_of_year = 227
//! hours = [11, 12, 13, 14, 15, 16, 17, 18, 19]
//! tz_offset_hours = 0.0
//! albedo = 0.2
//! # calibration = 1.08   # omit to pin the flat 0° baseline to reference_flat_watts
//! reference_flat_watts = 666.40
//!
//! [experiment]
//! algorithm = "ga"        # ga | es-comma | es-plus | ep
//! # runs = 30             # overrides the algorithm block's `runs`
//! seed = 2019
//! out = "results"
//!
//! [ga]
//! population = 100
//! budget = 4000
//! ```

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evolution::{EpConfig, EsConfig, GaConfig, Selection};
use crate::fitness::{calibrate_to, REFERENCE_FLAT_WATTS};
use crate::solar::Scenario;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Algorithm {
    Ga,
    EsComma,
    EsPlus,
    Ep,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [
        Algorithm::Ga,
        Algorithm::EsComma,
        Algorithm::EsPlus,
        Algorithm::Ep,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Algorithm::Ga => "ga",
            Algorithm::EsComma => "es-comma",
            Algorithm::EsPlus => "es-plus",
            Algorithm::Ep => "ep",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.label() == s)
            .ok_or_else(|| Error::UnknownAlgorithm(s.to_string()))
    }
}

impl TryFrom<String> for Algorithm {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Algorithm> for String {
    fn from(a: Algorithm) -> String {
        a.label().to_string()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioConfig {
    pub latitude: f64,
    pub longitude: f64,
    pub day_of_year: u32,
    pub hours: Vec<f64>,
    pub tz_offset_hours: f64,
    pub albedo: f64,
    /// Fixed calibration constant; computed from `reference_flat_watts`
    /// when absent.
    pub calibration: Option<f64>,
    pub reference_flat_watts: f64,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        let s = Scenario::default();
        ScenarioConfig {
            latitude: s.latitude,
            longitude: s.longitude,
            day_of_year: s.day_of_year,
            hours: s.hours,
            tz_offset_hours: s.tz_offset_hours,
            albedo: s.albedo,
            calibration: None,
            reference_flat_watts: REFERENCE_FLAT_WATTS,
        }
    }
}

impl ScenarioConfig {
    fn uncalibrated(&self) -> Scenario {
        Scenario {
            latitude: self.latitude,
            longitude: self.longitude,
            day_of_year: self.day_of_year,
            hours: self.hours.clone(),
            tz_offset_hours: self.tz_offset_hours,
            albedo: self.albedo,
            calibration: 1.0,
        }
    }

    /// The scenario with its calibration constant filled in.
    pub fn resolve(&self) -> Result<Scenario> {
        let scenario = self.uncalibrated();
        scenario.validate().map_err(prefix("scenario"))?;
        let calibration = match self.calibration {
            Some(c) => c,
            None => {
                if !(self.reference_flat_watts > 0.0) {
                    return Err(Error::config(
                        "scenario.reference_flat_watts",
                        "must be positive",
                    ));
                }
                calibrate_to(&scenario, self.reference_flat_watts)?
            }
        };
        let scenario = scenario.with_calibration(calibration);
        scenario.validate().map_err(prefix("scenario"))?;
        Ok(scenario)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentSection {
    pub algorithm: Algorithm,
    pub runs: Option<usize>,
    pub seed: u64,
    pub out: PathBuf,
}

impl Default for ExperimentSection {
    fn default() -> Self {
        ExperimentSection {
            algorithm: Algorithm::Ga,
            runs: None,
            seed: 2019,
            out: PathBuf::from("results"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub scenario: ScenarioConfig,
    pub experiment: ExperimentSection,
    pub ga: GaConfig,
    pub es: EsConfig,
    pub ep: EpConfig,
}

/// Flag values that take precedence over the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub algorithm: Option<String>,
    pub runs: Option<usize>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn from_toml(path: &Path, text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::parse(path, e.to_string().trim_end().to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml(path, &text)
    }

    /// Loads `path` if given, otherwise the defaults, then applies flags.
    pub fn load_with(path: Option<&Path>, overrides: &Overrides) -> Result<Self> {
        let mut config = match path {
            Some(p) => Self::load(p)?,
            None => Self::default(),
        };
        config.apply(overrides)?;
        Ok(config)
    }

    pub fn apply(&mut self, overrides: &Overrides) -> Result<()> {
        if let Some(a) = &overrides.algorithm {
            self.experiment.algorithm = a.parse()?;
        }
        if let Some(r) = overrides.runs {
            self.experiment.runs = Some(r);
        }
        if let Some(s) = overrides.seed {
            self.experiment.seed = s;
        }
        if let Some(o) = &overrides.out {
            self.experiment.out = o.clone();
        }
        Ok(())
    }

    /// Number of independent runs for the selected algorithm.
    pub fn runs(&self) -> usize {
        self.experiment
            .runs
            .unwrap_or(match self.experiment.algorithm {
                Algorithm::Ga => self.ga.runs,
                Algorithm::EsComma | Algorithm::EsPlus => self.es.runs,
                Algorithm::Ep => self.ep.runs,
            })
    }

    pub fn es_config(&self) -> EsConfig {
        let selection = match self.experiment.algorithm {
            Algorithm::EsPlus => Selection::Plus,
            _ => Selection::Comma,
        };
        EsConfig {
            selection,
            ..self.es.clone()
        }
    }

    /// Checks the selected algorithm's block and the run count.
    pub fn validate(&self) -> Result<()> {
        self.scenario
            .uncalibrated()
            .validate()
            .map_err(prefix("scenario"))?;
        if self.runs() < 1 {
            return Err(Error::config("experiment.runs", "must be at least 1"));
        }
        match self.experiment.algorithm {
            Algorithm::Ga => self.ga.validate(),
            Algorithm::EsComma | Algorithm::EsPlus => self.es_config().validate(),
            Algorithm::Ep => self.ep.validate(),
        }
    }
}

fn prefix(section: &'static str) -> impl Fn(Error) -> Error {
    move |e| match e {
        Error::Config { field, message } => Error::Config {
            field: format!("{section}.{field}"),
            message,
        },
        other => other,
    }
}
