//! One-at-a-time sensitivity sweeps around a base configuration.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::cp::registry_names;
use crate::curve::{format_sig, PowerCurve};
use crate::environment::EnvironmentConditions;
use crate::error::{Error, Result};
use crate::pipeline::{synthesize_partial, SynthesisOptions, DEFAULT_CP_MODEL};
use crate::turbine::PartialTurbineSpec;

/// Everything needed to synthesize one curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunParams {
    pub turbine: PartialTurbineSpec,
    pub cp_model: String,
    pub environment: EnvironmentConditions,
    pub options: SynthesisOptions,
}

impl RunParams {
    pub fn synthesize(&self) -> Result<PowerCurve> {
        Ok(synthesize_partial(
            &self.turbine,
            &self.cp_model,
            &self.environment,
            &self.options,
        )?
        .curve)
    }
}

/// The reference 2 MW, 80 m turbine used as the sweep baseline.
pub fn reference_params() -> RunParams {
    RunParams {
        turbine: PartialTurbineSpec {
            name: Some("reference".into()),
            rotor_diameter: Some(80.0),
            rated_power: Some(2000.0),
            cut_in: Some(3.5),
            cut_out: Some(25.0),
            omega_min: Some(10.0),
            omega_max: Some(30.0),
            cp_max: Some(0.4615),
            hub_height: Some(80.0),
        },
        cp_model: DEFAULT_CP_MODEL.to_string(),
        environment: EnvironmentConditions::default(),
        options: SynthesisOptions::default(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParameter {
    RotorDiameter,
    RatedPower,
    CutIn,
    CutOut,
    OmegaMin,
    OmegaMax,
    CpMax,
    CpParameterisation,
    Ti,
    Rho,
    ShearAlpha,
    VeerRate,
}

impl SweepParameter {
    pub const ALL: [SweepParameter; 12] = [
        SweepParameter::RotorDiameter,
        SweepParameter::RatedPower,
        SweepParameter::CutIn,
        SweepParameter::CutOut,
        SweepParameter::OmegaMin,
        SweepParameter::OmegaMax,
        SweepParameter::CpMax,
        SweepParameter::CpParameterisation,
        SweepParameter::Ti,
        SweepParameter::Rho,
        SweepParameter::ShearAlpha,
        SweepParameter::VeerRate,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SweepParameter::RotorDiameter => "rotor_diameter",
            SweepParameter::RatedPower => "rated_power",
            SweepParameter::CutIn => "cut_in",
            SweepParameter::CutOut => "cut_out",
            SweepParameter::OmegaMin => "omega_min",
            SweepParameter::OmegaMax => "omega_max",
            SweepParameter::CpMax => "cp_max",
            SweepParameter::CpParameterisation => "cp_parameterisation",
            SweepParameter::Ti => "ti",
            SweepParameter::Rho => "rho",
            SweepParameter::ShearAlpha => "shear_alpha",
            SweepParameter::VeerRate => "veer_rate",
        }
    }

    /// Typical variation interval; values outside it draw a warning.
    pub fn interval(self) -> Option<(f64, f64)> {
        match self {
            SweepParameter::RotorDiameter => Some((40.0, 120.0)),
            SweepParameter::RatedPower => Some((1500.0, 2500.0)),
            SweepParameter::CutIn => Some((0.0, 5.0)),
            SweepParameter::CutOut => Some((20.0, 30.0)),
            SweepParameter::OmegaMin => Some((0.0, 15.0)),
            SweepParameter::OmegaMax => Some((15.0, 40.0)),
            SweepParameter::CpMax => Some((0.3, 0.59)),
            SweepParameter::CpParameterisation => None,
            SweepParameter::Ti => Some((0.0, 0.15)),
            SweepParameter::Rho => Some((1.15, 1.3)),
            SweepParameter::ShearAlpha => Some((0.0, 0.4)),
            SweepParameter::VeerRate => Some((0.0, 0.75)),
        }
    }

    pub fn is_categorical(self) -> bool {
        self == SweepParameter::CpParameterisation
    }
}

impl fmt::Display for SweepParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepParameter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SweepParameter::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::UnknownParameter(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepValues {
    List(Vec<f64>),
    Range { min: f64, max: f64, count: usize },
    Names(Vec<String>),
}

#[derive(Debug, Clone, PartialEq)]
pub enum SweepValue {
    Number(f64),
    Name(String),
}

impl fmt::Display for SweepValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SweepValue::Number(x) => f.write_str(&format_sig(*x, 6)),
            SweepValue::Name(n) => f.write_str(n),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub parameter: SweepParameter,
    pub values: SweepValues,
}

impl SweepSpec {
    pub fn expand(&self) -> Result<Vec<SweepValue>> {
        let numeric = |xs: Vec<f64>| -> Result<Vec<SweepValue>> {
            if self.parameter.is_categorical() {
                return Err(Error::InvalidInput(format!(
                    "{} takes parameterisation names, not numbers",
                    self.parameter
                )));
            }
            Ok(xs.into_iter().map(SweepValue::Number).collect())
        };
        let values = match &self.values {
            SweepValues::List(xs) => numeric(xs.clone())?,
            SweepValues::Range { min, max, count } => {
                let xs = match *count {
                    0 => Vec::new(),
                    1 => vec![*min],
                    n => (0..n)
                        .map(|i| min + (max - min) * i as f64 / (n - 1) as f64)
                        .collect(),
                };
                numeric(xs)?
            }
            SweepValues::Names(names) => {
                if !self.parameter.is_categorical() {
                    return Err(Error::InvalidInput(format!(
                        "{} takes numeric values",
                        self.parameter
                    )));
                }
                names.iter().cloned().map(SweepValue::Name).collect()
            }
        };
        if values.is_empty() {
            return Err(Error::InvalidInput("sweep has no values".into()));
        }
        Ok(values)
    }

    /// Sweep over every bundled Cp parameterisation.
    pub fn all_parameterisations() -> Self {
        SweepSpec {
            parameter: SweepParameter::CpParameterisation,
            values: SweepValues::Names(registry_names()),
        }
    }
}

/// Returns `base` with one parameter replaced.
pub fn apply_value(
    base: &RunParams,
    parameter: SweepParameter,
    value: &SweepValue,
) -> Result<RunParams> {
    let mut run = base.clone();
    let x = match value {
        SweepValue::Number(x) => *x,
        SweepValue::Name(name) => {
            if parameter != SweepParameter::CpParameterisation {
                return Err(Error::InvalidInput(format!(
                    "{parameter} takes numeric values"
                )));
            }
            run.cp_model = name.clone();
            return Ok(run);
        }
    };
    let t = &mut run.turbine;
    let env = &mut run.environment;
    match parameter {
        SweepParameter::RotorDiameter => t.rotor_diameter = Some(x),
        SweepParameter::RatedPower => t.rated_power = Some(x),
        SweepParameter::CutIn => t.cut_in = Some(x),
        SweepParameter::CutOut => t.cut_out = Some(x),
        SweepParameter::OmegaMin => t.omega_min = Some(x),
        SweepParameter::OmegaMax => t.omega_max = Some(x),
        SweepParameter::CpMax => t.cp_max = Some(x),
        SweepParameter::Ti => env.ti = x,
        SweepParameter::Rho => env.rho = x,
        SweepParameter::ShearAlpha => env.shear_alpha = x,
        SweepParameter::VeerRate => env.veer_rate = x,
        SweepParameter::CpParameterisation => {
            return Err(Error::InvalidInput(format!(
                "{parameter} takes parameterisation names"
            )))
        }
    }
    Ok(run)
}

#[derive(Debug, Clone)]
pub struct SweepResult {
    pub parameter: SweepParameter,
    pub curves: Vec<(SweepValue, PowerCurve)>,
    pub warnings: Vec<String>,
}

pub const SWEEP_CSV_HEADER: &str = "param_value,wind_speed_ms,power_kw";

impl SweepResult {
    /// Long-format CSV, rows in sweep order.
    pub fn to_csv_string(&self) -> String {
        let mut out = String::from(SWEEP_CSV_HEADER);
        out.push('\n');
        for (value, curve) in &self.curves {
            let label = value.to_string();
            for (v, p) in curve.points() {
                out.push_str(&label);
                out.push(',');
                out.push_str(&format_sig(v, 6));
                out.push(',');
                out.push_str(&format_sig(p, 6));
                out.push('\n');
            }
        }
        out
    }
}

pub fn run_sweep(base: &RunParams, sweep: &SweepSpec) -> Result<SweepResult> {
    let values = sweep.expand()?;
    let mut warnings = Vec::new();
    let mut curves = Vec::with_capacity(values.len());
    for value in values {
        if let (SweepValue::Number(x), Some((lo, hi))) = (&value, sweep.parameter.interval()) {
            if *x < lo || *x > hi {
                warnings.push(format!(
                    "{}={} outside typical interval [{lo}, {hi}]",
                    sweep.parameter, x
                ));
            }
        }
        let run = apply_value(base, sweep.parameter, &value)?;
        curves.push((value, run.synthesize()?));
    }
    Ok(SweepResult {
        parameter: sweep.parameter,
        curves,
        warnings,
    })
}
