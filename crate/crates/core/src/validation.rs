//! Checks synthesized curves against manufacturer power curves.
//!
//! A measured curve is screened by inverting the power equation for Cp and
//! comparing its peak with the Betz limit, then scored against synthesized
//! curves over a grid of turbulence intensities. The score is the RMSE over
//! `[cut_in, 0.95·cut_out]` normalised by rated power.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::cp::{scaled_model, BETZ_LIMIT};
use crate::curve::{PowerCurve, SPEED_EPS};
use crate::environment::{EnvironmentConditions, REFERENCE_AIR_DENSITY};
use crate::error::{Error, Result};
use crate::pipeline::{synthesize, SynthesisOptions, DEFAULT_CP_MODEL};
use crate::turbine::{complete_spec, rotor_area, DefaultsReport, PartialTurbineSpec, TurbineSpec};

pub const DEFAULT_TI_GRID: [f64; 5] = [0.0, 0.025, 0.05, 0.075, 0.10];

/// Fraction of the cut-out speed kept in the comparison range.
pub const COMPARISON_CUT_OUT_FRACTION: f64 = 0.95;

/// A best-fit normalised RMSE above this marks the curve's shape as
/// anomalous.
pub const SHAPE_ANOMALY_RMSE: f64 = 0.05;

pub const MIN_SAMPLES: usize = 4;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasuredCurve {
    pub turbine: PartialTurbineSpec,
    /// (wind speed m/s, power kW), strictly increasing in wind speed.
    pub samples: Vec<(f64, f64)>,
}

impl MeasuredCurve {
    pub fn new(turbine: PartialTurbineSpec, samples: Vec<(f64, f64)>) -> Result<Self> {
        let m = MeasuredCurve { turbine, samples };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        if self.samples.len() < MIN_SAMPLES {
            return Err(Error::InvalidInput(format!(
                "measured curve needs at least {MIN_SAMPLES} samples, got {}",
                self.samples.len()
            )));
        }
        for w in self.samples.windows(2) {
            if !(w[1].0 > w[0].0) {
                return Err(Error::InvalidInput(format!(
                    "wind speeds must be strictly increasing ({} then {})",
                    w[0].0, w[1].0
                )));
            }
        }
        if let Some(&(v, p)) = self
            .samples
            .iter()
            .find(|(v, p)| !(*p >= 0.0) || !p.is_finite() || !v.is_finite())
        {
            return Err(Error::InvalidInput(format!("invalid sample ({v}, {p})")));
        }
        Ok(())
    }

    pub fn name(&self) -> String {
        self.turbine
            .name
            .clone()
            .unwrap_or_else(|| "unnamed".into())
    }

    /// Samples a synthesized curve at the given wind speeds.
    pub fn from_curve(curve: &PowerCurve, speeds: &[f64]) -> Self {
        MeasuredCurve {
            turbine: PartialTurbineSpec::from(&curve.meta.spec),
            samples: speeds.iter().map(|&v| (v, curve.interpolate(v))).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CpExtraction {
    /// (wind speed, Cp) for every sample with v > 0.
    pub cp_of_v: Vec<(f64, f64)>,
    pub cp_max: f64,
    pub betz_violation: bool,
}

/// Inverts the power equation sample by sample: `Cp = P / (½ ρ A v³)`.
pub fn invert_cp(m: &MeasuredCurve, rho: f64) -> Result<CpExtraction> {
    let d = m.turbine.rotor_diameter.ok_or(Error::MissingDiameter)?;
    if !(rho > 0.0) {
        return Err(Error::InvalidInput(format!(
            "air density {rho} must be > 0"
        )));
    }
    let area = rotor_area(d);
    let cp_of_v: Vec<(f64, f64)> = m
        .samples
        .iter()
        .filter(|(v, _)| *v > 0.0)
        .map(|&(v, p)| (v, p * 1000.0 / (0.5 * rho * area * v.powi(3))))
        .collect();
    let cp_max = cp_of_v.iter().map(|&(_, cp)| cp).fold(0.0, f64::max);
    Ok(CpExtraction {
        cp_of_v,
        cp_max,
        betz_violation: betz_screen(cp_max),
    })
}

/// True when `cp_max` exceeds the Betz limit 16/27.
pub fn betz_screen(cp_max: f64) -> bool {
    cp_max > BETZ_LIMIT
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TiScore {
    pub ti: f64,
    pub rmse: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationEntry {
    pub name: String,
    pub cp_max_extracted: f64,
    pub betz_violation: bool,
    pub best_ti: f64,
    pub rmse_best: f64,
    pub rmse_by_ti: Vec<TiScore>,
    pub shape_anomaly: bool,
    pub defaults: DefaultsReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MatchOptions {
    pub cp_model: String,
    pub rho: f64,
    pub synthesis: SynthesisOptions,
}

impl Default for MatchOptions {
    fn default() -> Self {
        MatchOptions {
            cp_model: DEFAULT_CP_MODEL.to_string(),
            rho: REFERENCE_AIR_DENSITY,
            synthesis: SynthesisOptions::default(),
        }
    }
}

/// RMSE between `curve` (interpolated) and `samples` over the comparison
/// range of `spec`, divided by rated power.
pub fn normalized_rmse(
    curve: &PowerCurve,
    samples: &[(f64, f64)],
    spec: &TurbineSpec,
) -> Result<f64> {
    let hi = COMPARISON_CUT_OUT_FRACTION * spec.cut_out;
    let (sum, n) = samples
        .iter()
        .filter(|(v, _)| *v >= spec.cut_in - SPEED_EPS && *v <= hi + SPEED_EPS)
        .fold((0.0, 0usize), |(s, n), &(v, p)| {
            let e = curve.interpolate(v) - p;
            (s + e * e, n + 1)
        });
    if n == 0 {
        return Err(Error::InvalidInput(format!(
            "no samples inside the comparison range [{}, {hi}] m/s",
            spec.cut_in
        )));
    }
    Ok((sum / n as f64).sqrt() / spec.rated_power)
}

/// Scores a measured curve against synthesized curves at each TI in
/// `ti_grid`. Ties resolve to the smallest TI.
pub fn match_over_ti(
    m: &MeasuredCurve,
    ti_grid: &[f64],
    options: &MatchOptions,
) -> Result<ValidationEntry> {
    m.validate()?;
    if ti_grid.is_empty() {
        return Err(Error::InvalidInput("TI grid is empty".into()));
    }
    let (spec, defaults) = complete_spec(&m.turbine)?;
    let model = scaled_model(&options.cp_model, spec.cp_max)?;
    let extraction = invert_cp(m, options.rho)?;

    let mut grid = ti_grid.to_vec();
    grid.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
    grid.dedup();

    let mut scores = Vec::with_capacity(grid.len());
    for &ti in &grid {
        let env = EnvironmentConditions {
            ti,
            rho: options.rho,
            ..Default::default()
        };
        let curve = synthesize(&spec, &model, &env, &options.synthesis)?;
        scores.push(TiScore {
            ti,
            rmse: normalized_rmse(&curve, &m.samples, &spec)?,
        });
    }
    let best = scores
        .iter()
        .copied()
        .reduce(|best, s| if s.rmse < best.rmse { s } else { best })
        .expect("grid is non-empty");

    Ok(ValidationEntry {
        name: m.name(),
        cp_max_extracted: extraction.cp_max,
        betz_violation: extraction.betz_violation,
        best_ti: best.ti,
        rmse_best: best.rmse,
        rmse_by_ti: scores,
        shape_anomaly: best.rmse > SHAPE_ANOMALY_RMSE,
        defaults,
    })
}

pub const SUMMARY_CSV_HEADER: &str = "name,cp_max,betz_flag,best_ti,rmse_best";

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub entries: Vec<ValidationEntry>,
}

impl ValidationReport {
    /// Entries ordered by turbine name, whatever order they arrived in.
    pub fn from_entries(mut entries: Vec<ValidationEntry>) -> Self {
        entries.sort_by(|a, b| a.name.cmp(&b.name));
        ValidationReport { entries }
    }

    pub fn summary_csv(&self) -> String {
        let mut out = String::from(SUMMARY_CSV_HEADER);
        out.push('\n');
        for e in &self.entries {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                e.name,
                crate::curve::format_sig(e.cp_max_extracted, 6),
                e.betz_violation,
                e.best_ti,
                crate::curve::format_sig(e.rmse_best, 6)
            ));
        }
        out
    }
}
