//! Turbine catalogue data and the statistical defaults used to fill gaps in it.

use std::io::Read;

use serde::{Deserialize, Serialize};

use crate::cp::BETZ_LIMIT;
use crate::error::{Error, Result};

/// Most frequent maximum power coefficient across commercial turbines.
pub const DEFAULT_CP_MAX: f64 = 0.44;
pub const DEFAULT_CUT_IN: f64 = 3.0;
pub const DEFAULT_CUT_OUT: f64 = 25.0;

/// `omega_min = a * D^b` (rpm, D in metres).
pub const OMEGA_MIN_COEFF: f64 = 1046.558;
pub const OMEGA_MIN_EXPONENT: f64 = -1.0911;
/// `omega_max = c * D^d` (rpm, D in metres).
pub const OMEGA_MAX_COEFF: f64 = 705.406;
pub const OMEGA_MAX_EXPONENT: f64 = -0.8349;

pub const RPM_TO_RAD_PER_S: f64 = 2.0 * std::f64::consts::PI / 60.0;

/// Header of the turbine CSV format. Empty cells mean "absent".
pub const SPEC_CSV_HEADER: [&str; 9] = [
    "name",
    "rotor_diameter_m",
    "rated_power_kw",
    "cut_in_ms",
    "cut_out_ms",
    "omega_min_rpm",
    "omega_max_rpm",
    "cp_max",
    "hub_height_m",
];

/// Fully resolved catalogue characteristics of one turbine.
///
/// Diameter and hub height are in metres, power in kW, wind speeds in m/s and
/// rotor speeds in rpm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TurbineSpec {
    pub name: String,
    pub rotor_diameter: f64,
    pub rated_power: f64,
    pub cut_in: f64,
    pub cut_out: f64,
    pub omega_min: f64,
    pub omega_max: f64,
    pub cp_max: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hub_height: Option<f64>,
}

impl TurbineSpec {
    pub fn radius(&self) -> f64 {
        0.5 * self.rotor_diameter
    }

    pub fn rotor_area(&self) -> f64 {
        rotor_area(self.rotor_diameter)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidSpec(msg));
        let finite = [
            self.rotor_diameter,
            self.rated_power,
            self.cut_in,
            self.cut_out,
            self.omega_min,
            self.omega_max,
            self.cp_max,
        ];
        if finite.iter().any(|v| !v.is_finite()) {
            return bad("non-finite field".into());
        }
        if self.rotor_diameter <= 0.0 {
            return bad(format!(
                "rotor_diameter={} must be > 0",
                self.rotor_diameter
            ));
        }
        if self.rated_power <= 0.0 {
            return bad(format!("rated_power={} must be > 0", self.rated_power));
        }
        if self.cut_in < 0.0 {
            return bad(format!("cut_in={} must be >= 0", self.cut_in));
        }
        if self.cut_out <= self.cut_in {
            return bad(format!(
                "cut_out={} must exceed cut_in={}",
                self.cut_out, self.cut_in
            ));
        }
        if self.omega_min < 0.0 {
            return bad(format!("omega_min={} must be >= 0", self.omega_min));
        }
        if self.omega_max < self.omega_min {
            return bad(format!(
                "omega_max={} is below omega_min={}",
                self.omega_max, self.omega_min
            ));
        }
        if !(self.cp_max > 0.0 && self.cp_max <= BETZ_LIMIT) {
            return Err(Error::InvalidCpMax(self.cp_max));
        }
        if let Some(h) = self.hub_height {
            check_ground_clearance(h, self.rotor_diameter)?;
        }
        Ok(())
    }

    /// Hub height, which must be present for shear and veer.
    pub fn require_hub_height(&self) -> Result<f64> {
        let h = self.hub_height.ok_or(Error::MissingHubHeight)?;
        check_ground_clearance(h, self.rotor_diameter)?;
        Ok(h)
    }
}

pub(crate) fn check_ground_clearance(hub_height: f64, rotor_diameter: f64) -> Result<()> {
    let radius = 0.5 * rotor_diameter;
    if hub_height > radius {
        Ok(())
    } else {
        Err(Error::GroundStrike { hub_height, radius })
    }
}

pub fn rotor_area(rotor_diameter: f64) -> f64 {
    std::f64::consts::PI * rotor_diameter * rotor_diameter / 4.0
}

/// Turbine record where any characteristic may be missing.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PartialTurbineSpec {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rotor_diameter: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rated_power: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cut_in: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cut_out: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega_min: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega_max: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cp_max: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hub_height: Option<f64>,
}

impl PartialTurbineSpec {
    pub fn new(rotor_diameter: f64, rated_power: f64) -> Self {
        PartialTurbineSpec {
            rotor_diameter: Some(rotor_diameter),
            rated_power: Some(rated_power),
            ..Default::default()
        }
    }

    /// Fields of `other` that are present override those of `self`.
    pub fn overlay(&self, other: &PartialTurbineSpec) -> PartialTurbineSpec {
        PartialTurbineSpec {
            name: other.name.clone().or_else(|| self.name.clone()),
            rotor_diameter: other.rotor_diameter.or(self.rotor_diameter),
            rated_power: other.rated_power.or(self.rated_power),
            cut_in: other.cut_in.or(self.cut_in),
            cut_out: other.cut_out.or(self.cut_out),
            omega_min: other.omega_min.or(self.omega_min),
            omega_max: other.omega_max.or(self.omega_max),
            cp_max: other.cp_max.or(self.cp_max),
            hub_height: other.hub_height.or(self.hub_height),
        }
    }
}

impl From<&TurbineSpec> for PartialTurbineSpec {
    fn from(s: &TurbineSpec) -> Self {
        PartialTurbineSpec {
            name: Some(s.name.clone()),
            rotor_diameter: Some(s.rotor_diameter),
            rated_power: Some(s.rated_power),
            cut_in: Some(s.cut_in),
            cut_out: Some(s.cut_out),
            omega_min: Some(s.omega_min),
            omega_max: Some(s.omega_max),
            cp_max: Some(s.cp_max),
            hub_height: s.hub_height,
        }
    }
}

/// Statistical rule that produced a default value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DefaultRule {
    /// Modal Cp,max of the commercial fleet.
    ModalCpMax,
    /// Recommended cut-in / cut-out wind speeds.
    RecommendedCutSpeeds,
    /// Power-law fit of minimum rotor speed against diameter.
    OmegaMinDiameterFit,
    /// Power-law fit of maximum rotor speed against diameter.
    OmegaMaxDiameterFit,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FilledField {
    pub field: String,
    pub value: f64,
    pub rule: DefaultRule,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct DefaultsReport {
    pub filled_fields: Vec<FilledField>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl DefaultsReport {
    pub fn is_empty(&self) -> bool {
        self.filled_fields.is_empty() && self.warnings.is_empty()
    }

    fn fill(&mut self, field: &str, value: f64, rule: DefaultRule) -> f64 {
        self.filled_fields.push(FilledField {
            field: field.to_string(),
            value,
            rule,
        });
        value
    }
}

pub fn default_cp_max() -> f64 {
    DEFAULT_CP_MAX
}

pub fn default_cut_speeds() -> (f64, f64) {
    (DEFAULT_CUT_IN, DEFAULT_CUT_OUT)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotationSpeedDefaults {
    pub omega_min: f64,
    pub omega_max: f64,
    /// Set when the two diameter fits cross (omega_min > omega_max). This
    /// happens for rotors smaller than about 4.7 m, outside the fitted data.
    pub crossed: bool,
}

pub fn default_rotation_speeds(rotor_diameter: f64) -> RotationSpeedDefaults {
    let omega_min = OMEGA_MIN_COEFF * rotor_diameter.powf(OMEGA_MIN_EXPONENT);
    let omega_max = OMEGA_MAX_COEFF * rotor_diameter.powf(OMEGA_MAX_EXPONENT);
    RotationSpeedDefaults {
        omega_min,
        omega_max,
        crossed: omega_min > omega_max,
    }
}

/// Fills every absent characteristic with its statistical default.
///
/// Rotor diameter and rated power are mandatory. The returned spec is
/// validated; an extrapolated rotor-speed pair that crosses is rejected.
pub fn complete_spec(partial: &PartialTurbineSpec) -> Result<(TurbineSpec, DefaultsReport)> {
    let rotor_diameter = partial
        .rotor_diameter
        .ok_or(Error::MissingMandatoryField("rotor_diameter"))?;
    let rated_power = partial
        .rated_power
        .ok_or(Error::MissingMandatoryField("rated_power"))?;
    if !(rotor_diameter > 0.0) {
        return Err(Error::InvalidSpec(format!(
            "rotor_diameter={rotor_diameter} must be > 0"
        )));
    }

    let mut report = DefaultsReport::default();
    let (cut_in_default, cut_out_default) = default_cut_speeds();
    let rpm = default_rotation_speeds(rotor_diameter);

    let cut_in = partial.cut_in.unwrap_or_else(|| {
        report.fill("cut_in", cut_in_default, DefaultRule::RecommendedCutSpeeds)
    });
    let cut_out = partial.cut_out.unwrap_or_else(|| {
        report.fill(
            "cut_out",
            cut_out_default,
            DefaultRule::RecommendedCutSpeeds,
        )
    });
    let omega_min = partial.omega_min.unwrap_or_else(|| {
        report.fill("omega_min", rpm.omega_min, DefaultRule::OmegaMinDiameterFit)
    });
    let omega_max = partial.omega_max.unwrap_or_else(|| {
        report.fill("omega_max", rpm.omega_max, DefaultRule::OmegaMaxDiameterFit)
    });
    let cp_max = partial
        .cp_max
        .unwrap_or_else(|| report.fill("cp_max", default_cp_max(), DefaultRule::ModalCpMax));

    if rpm.crossed && (partial.omega_min.is_none() || partial.omega_max.is_none()) {
        report.warnings.push(format!(
            "rotor-speed fits cross at D={rotor_diameter} m (omega_min={:.4} > omega_max={:.4})",
            rpm.omega_min, rpm.omega_max
        ));
    }

    let spec = TurbineSpec {
        name: partial
            .name
            .clone()
            .unwrap_or_else(|| "unnamed".to_string()),
        rotor_diameter,
        rated_power,
        cut_in,
        cut_out,
        omega_min,
        omega_max,
        cp_max,
        hub_height: partial.hub_height,
    };
    spec.validate()?;
    Ok((spec, report))
}

fn parse_cell(raw: &str, column: &str, row: usize) -> Result<Option<f64>> {
    let cell = raw.trim();
    if cell.is_empty() {
        return Ok(None);
    }
    cell.parse::<f64>().map(Some).map_err(|_| {
        Error::InvalidInput(format!("row {row}: column {column}: cannot parse '{cell}'"))
    })
}

/// Reads turbine records from CSV with the exact [`SPEC_CSV_HEADER`].
pub fn read_specs_csv<R: Read>(reader: R) -> Result<Vec<PartialTurbineSpec>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(reader);
    let header = rdr.headers()?.clone();
    if header.iter().ne(SPEC_CSV_HEADER.iter().copied()) {
        return Err(Error::InvalidInput(format!(
            "unexpected turbine CSV header '{}'; expected '{}'",
            header.iter().collect::<Vec<_>>().join(","),
            SPEC_CSV_HEADER.join(",")
        )));
    }
    let mut specs = Vec::new();
    for (i, record) in rdr.records().enumerate() {
        let record = record?;
        let row = i + 2;
        let num = |idx: usize| parse_cell(&record[idx], SPEC_CSV_HEADER[idx], row);
        let name = record[0].trim();
        specs.push(PartialTurbineSpec {
            name: (!name.is_empty()).then(|| name.to_string()),
            rotor_diameter: num(1)?,
            rated_power: num(2)?,
            cut_in: num(3)?,
            cut_out: num(4)?,
            omega_min: num(5)?,
            omega_max: num(6)?,
            cp_max: num(7)?,
            hub_height: num(8)?,
        });
    }
    Ok(specs)
}
