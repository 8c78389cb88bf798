//! Sun position, clear-sky irradiance and plane-of-array transposition.
//!
//! Angles are degrees throughout. Azimuths are measured clockwise from
//! north, so 90° is east and 180° is south.

use crate::error::{Error, Result};

/// Extraterrestrial irradiance used by the clear-sky model, W/m².
pub const SOLAR_CONSTANT: f64 = 1353.0;
/// Below this elevation the Kasten–Young air mass replaces `1/sin(elevation)`.
const KASTEN_YOUNG_BELOW: f64 = 10.0;
/// Diffuse horizontal irradiance as a fraction of DNI.
const DIFFUSE_FRACTION: f64 = 0.1;

/// Location, day and hours that fix the fitness landscape.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    /// Degrees north.
    pub latitude: f64,
    /// Degrees east.
    pub longitude: f64,
    /// 1..=365.
    pub day_of_year: u32,
    /// Clock hours in the `tz_offset_hours` zone, each in `[0, 24)`.
    pub hours: Vec<f64>,
    pub tz_offset_hours: f64,
    pub albedo: f64,
    /// Multiplier from area-weighted W/m² to reported watts.
    pub calibration: f64,
}

impl Default for Scenario {
    /// Athens, GA on August 15, sampled hourly from 11:00 to 19:00 UTC.
    fn default() -> Self {
        Scenario {
            latitude: 33.957409,
            longitude: -83.376801,
            day_of_year: 227,
            hours: (11..=19).map(f64::from).collect(),
            tz_offset_hours: 0.0,
            albedo: 0.2,
            calibration: 1.0,
        }
    }
}

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        if !(-90.0..=90.0).contains(&self.latitude) {
            return Err(Error::config("latitude", "must be within [-90, 90]"));
        }
        if !(-180.0..=180.0).contains(&self.longitude) {
            return Err(Error::config("longitude", "must be within [-180, 180]"));
        }
        if !(1..=365).contains(&self.day_of_year) {
            return Err(Error::config("day_of_year", "must be within 1..=365"));
        }
        if self.hours.is_empty() {
            return Err(Error::config("hours", "must not be empty"));
        }
        if let Some(h) = self.hours.iter().find(|h| !(0.0..24.0).contains(*h)) {
            return Err(Error::config("hours", format!("value {h} outside [0, 24)")));
        }
        if !self.tz_offset_hours.is_finite() || self.tz_offset_hours.abs() > 14.0 {
            return Err(Error::config("tz_offset_hours", "must be within [-14, 14]"));
        }
        if !(0.0..=1.0).contains(&self.albedo) {
            return Err(Error::config("albedo", "must be within [0, 1]"));
        }
        if !(self.calibration > 0.0 && self.calibration.is_finite()) {
            return Err(Error::config("calibration", "must be positive"));
        }
        Ok(())
    }

    pub fn with_calibration(mut self, calibration: f64) -> Self {
        self.calibration = calibration;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SunPosition {
    /// Degrees above the horizon.
    pub elevation: f64,
    /// Degrees clockwise from north, in `[0, 360)`.
    pub azimuth: f64,
}

impl SunPosition {
    pub fn zenith(&self) -> f64 {
        90.0 - self.elevation
    }
}

/// Irradiance components in W/m².
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Irradiance {
    pub dni: f64,
    pub dhi: f64,
    pub ghi: f64,
}

/// Solar declination, Cooper's formula.
pub fn declination(day_of_year: u32) -> f64 {
    23.45
        * (360.0 * (284.0 + f64::from(day_of_year)) / 365.0)
            .to_radians()
            .sin()
}

/// Equation of time in minutes (Spencer's Fourier series).
pub fn equation_of_time(day_of_year: u32) -> f64 {
    let g = 2.0 * std::f64::consts::PI * (f64::from(day_of_year) - 1.0) / 365.0;
    229.18
        * (0.000075 + 0.001868 * g.cos()
            - 0.032077 * g.sin()
            - 0.014615 * (2.0 * g).cos()
            - 0.040849 * (2.0 * g).sin())
}

/// Offset in hours from scenario clock time to local apparent solar time.
fn solar_time_offset(scenario: &Scenario) -> f64 {
    (4.0 * (scenario.longitude - 15.0 * scenario.tz_offset_hours)
        + equation_of_time(scenario.day_of_year))
        / 60.0
}

/// Clock hour at which the sun crosses the local meridian.
pub fn solar_noon(scenario: &Scenario) -> f64 {
    12.0 - solar_time_offset(scenario)
}

pub fn sun_position(scenario: &Scenario, hour: f64) -> SunPosition {
    let lat = scenario.latitude.to_radians();
    let dec = declination(scenario.day_of_year).to_radians();
    let solar_time = hour + solar_time_offset(scenario);
    let hour_angle = (15.0 * (solar_time - 12.0)).to_radians();

    let sin_elev = lat.sin() * dec.sin() + lat.cos() * dec.cos() * hour_angle.cos();
    let elevation = sin_elev.clamp(-1.0, 1.0).asin().to_degrees();

    // Measured from south, positive towards west; shift to north-based.
    let from_south = hour_angle
        .sin()
        .atan2(hour_angle.cos() * lat.sin() - dec.tan() * lat.cos());
    let azimuth = (from_south.to_degrees() + 180.0).rem_euclid(360.0);
    SunPosition {
        elevation,
        azimuth: if azimuth >= 360.0 { 0.0 } else { azimuth },
    }
}

/// Relative optical air mass.
pub fn air_mass(elevation: f64) -> f64 {
    if elevation >= KASTEN_YOUNG_BELOW {
        1.0 / elevation.to_radians().sin()
    } else {
        let zenith = 90.0 - elevation;
        1.0 / (zenith.to_radians().cos() + 0.50572 * (96.07995 - zenith).powf(-1.6364))
    }
}

/// Meinel-style clear-sky irradiance with a fixed diffuse fraction.
pub fn clear_sky(sun: &SunPosition) -> Irradiance {
    if sun.elevation <= 0.0 {
        return Irradiance::default();
    }
    let am = air_mass(sun.elevation);
    let dni = SOLAR_CONSTANT * 0.7f64.powf(am.powf(0.678));
    let dhi = DIFFUSE_FRACTION * dni;
    Irradiance {
        dni,
        dhi,
        ghi: dni * sun.elevation.to_radians().sin() + dhi,
    }
}

/// Total irradiance on a tilted plane using the isotropic sky model.
///
/// A negative tilt means the plane leans `|tilt|` towards `azimuth + 180°`.
pub fn plane_of_array(
    irr: &Irradiance,
    sun: &SunPosition,
    tilt: f64,
    azimuth: f64,
    albedo: f64,
) -> f64 {
    if sun.elevation <= 0.0 {
        return 0.0;
    }
    let (tilt, azimuth) = if tilt < 0.0 {
        (-tilt, azimuth + 180.0)
    } else {
        (tilt, azimuth)
    };
    let beta = tilt.to_radians();
    let zenith = sun.zenith().to_radians();
    let cos_aoi = zenith.cos() * beta.cos()
        + zenith.sin() * beta.sin() * (sun.azimuth - azimuth).to_radians().cos();

    let beam = irr.dni * cos_aoi.max(0.0);
    let sky = irr.dhi * (1.0 + beta.cos()) / 2.0;
    let ground = irr.ghi * albedo * (1.0 - beta.cos()) / 2.0;
    (beam + sky + ground).max(0.0)
}
