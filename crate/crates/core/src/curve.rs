//! Ideal-conditions power curve: rotor-speed schedule, Cp along the curve,
//! and the capped power equation.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::cp::ScaledCpModel;
use crate::environment::EnvironmentConditions;
use crate::error::{Error, Result};
use crate::turbine::{TurbineSpec, RPM_TO_RAD_PER_S};

pub const CURVE_CSV_HEADER: &str = "wind_speed_ms,power_kw";

/// Uniform wind-speed grid `0, step, 2·step, …, v_max`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindGrid {
    pub v_max: f64,
    pub step: f64,
}

impl Default for WindGrid {
    fn default() -> Self {
        WindGrid {
            v_max: 40.0,
            step: 0.05,
        }
    }
}

impl WindGrid {
    pub fn new(v_max: f64, step: f64) -> Result<Self> {
        let grid = WindGrid { v_max, step };
        grid.validate()?;
        Ok(grid)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.step > 0.0 && self.step.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "grid step {} must be > 0",
                self.step
            )));
        }
        if !(self.v_max >= self.step && self.v_max.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "grid v_max {} must be at least one step",
                self.v_max
            )));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        (self.v_max / self.step + 1e-9).floor() as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn speed(&self, i: usize) -> f64 {
        i as f64 * self.step
    }

    pub fn speeds(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len()).map(move |i| self.speed(i))
    }

    /// Index of the last grid point at or below `v`, if any.
    pub fn index_at_or_below(&self, v: f64) -> Option<usize> {
        if v < 0.0 {
            return None;
        }
        let i = ((v / self.step) + 1e-9).floor() as usize;
        Some(i.min(self.len() - 1))
    }
}

/// Everything that went into producing a curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveMeta {
    pub spec: TurbineSpec,
    pub cp_model: String,
    pub lambda_opt: f64,
    pub environment: EnvironmentConditions,
}

/// Electrical power (kW) sampled on a uniform wind grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerCurve {
    pub grid: WindGrid,
    pub power: Vec<f64>,
    pub meta: CurveMeta,
}

impl PowerCurve {
    pub fn len(&self) -> usize {
        self.power.len()
    }

    pub fn is_empty(&self) -> bool {
        self.power.is_empty()
    }

    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.power
            .iter()
            .enumerate()
            .map(move |(i, &p)| (self.grid.speed(i), p))
    }

    /// Linear interpolation; speeds beyond the grid hold the end values.
    pub fn interpolate(&self, v: f64) -> f64 {
        interpolate_uniform(&self.power, self.grid.step, v)
    }

    /// Index of the first grid point where the curve reaches rated power.
    pub fn rated_index(&self) -> Option<usize> {
        let rated = self.meta.spec.rated_power;
        self.power.iter().position(|&p| p >= rated)
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "{CURVE_CSV_HEADER}")?;
        for (v, p) in self.points() {
            writeln!(out, "{},{}", format_sig(v, 6), format_sig(p, 6))?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)
            .expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("csv output is ASCII")
    }
}

pub(crate) fn interpolate_uniform(values: &[f64], step: f64, v: f64) -> f64 {
    let last = values.len() - 1;
    if v <= 0.0 {
        return values[0];
    }
    let x = v / step;
    let i = x.floor() as usize;
    if i >= last {
        return values[last];
    }
    let frac = x - i as f64;
    values[i] + frac * (values[i + 1] - values[i])
}

/// Reads `wind_speed_ms,power_kw` rows.
pub fn read_curve_csv<R: Read>(reader: R) -> Result<Vec<(f64, f64)>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(reader);
    let header = rdr.headers()?.iter().collect::<Vec<_>>().join(",");
    if header != CURVE_CSV_HEADER {
        return Err(Error::InvalidInput(format!(
            "unexpected curve CSV header '{header}'; expected '{CURVE_CSV_HEADER}'"
        )));
    }
    let mut rows = Vec::new();
    for (i, record) in rdr.records().enumerate() {
        let record = record?;
        let parse = |idx: usize| {
            record
                .get(idx)
                .and_then(|c| c.trim().parse::<f64>().ok())
                .ok_or_else(|| Error::InvalidInput(format!("row {}: bad number", i + 2)))
        };
        rows.push((parse(0)?, parse(1)?));
    }
    Ok(rows)
}

/// Formats `x` rounded to `digits` significant digits, trailing zeros trimmed.
pub fn format_sig(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x.is_finite() {
            "0".into()
        } else {
            x.to_string()
        };
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = digits as i32 - 1 - magnitude;
    let s = if decimals > 0 {
        format!("{:.*}", decimals as usize, x)
    } else {
        let unit = 10f64.powi(-decimals);
        format!("{:.0}", (x / unit).round() * unit)
    };
    let s = if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    };
    if s == "-0" {
        "0".into()
    } else {
        s
    }
}

/// Rotor state at one wind speed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OperatingState {
    pub v: f64,
    /// rpm
    pub omega: f64,
    pub lambda: f64,
    /// degrees
    pub beta: f64,
    pub cp: f64,
}

/// Rotor speed (rpm) tracking the optimal tip-speed ratio inside the
/// turbine's speed limits.
pub fn rotor_speed(v: f64, spec: &TurbineSpec, lambda_opt: f64) -> f64 {
    let tracking = lambda_opt * v / spec.radius() / RPM_TO_RAD_PER_S;
    tracking.max(spec.omega_min).min(spec.omega_max)
}

/// Tip-speed ratio for a rotor speed in rpm.
pub fn tsr(v: f64, omega_rpm: f64, rotor_diameter: f64) -> Result<f64> {
    if v == 0.0 {
        return Err(Error::DivisionByZero("tip-speed ratio at zero wind speed"));
    }
    Ok(omega_rpm * RPM_TO_RAD_PER_S * 0.5 * rotor_diameter / v)
}

/// Aerodynamic power `½ ρ A v³ Cp` in kW.
pub fn raw_power(v: f64, cp: f64, rho: f64, rotor_diameter: f64) -> f64 {
    0.5 * rho * crate::turbine::rotor_area(rotor_diameter) * v.powi(3) * cp / 1000.0
}

/// Region-II operating point with β = 0. λ outside the model's domain
/// yields Cp = 0.
pub fn operating_state(
    v: f64,
    spec: &TurbineSpec,
    model: &ScaledCpModel,
) -> Result<OperatingState> {
    let omega = rotor_speed(v, spec, model.lambda_opt);
    let lambda = tsr(v, omega, spec.rotor_diameter)?;
    Ok(OperatingState {
        v,
        omega,
        lambda,
        beta: 0.0,
        cp: model.evaluate_or_zero(lambda, 0.0),
    })
}

/// Tolerance on the cut-in / cut-out comparisons, absorbing grid rounding.
pub(crate) const SPEED_EPS: f64 = 1e-9;

pub(crate) fn above_cut_out(v: f64, spec: &TurbineSpec) -> bool {
    v > spec.cut_out + SPEED_EPS
}

fn ideal_power_at(v: f64, spec: &TurbineSpec, model: &ScaledCpModel, rho: f64) -> Result<f64> {
    if v < spec.cut_in - SPEED_EPS || above_cut_out(v, spec) || v <= 0.0 {
        return Ok(0.0);
    }
    let state = operating_state(v, spec, model)?;
    Ok(raw_power(v, state.cp, rho, spec.rotor_diameter).min(spec.rated_power))
}

/// Power curve under laminar, uniform inflow at density `rho`.
///
/// Zero below cut-in and above cut-out (both limits produce), capped at
/// rated power in between.
pub fn ideal_curve(
    spec: &TurbineSpec,
    model: &ScaledCpModel,
    rho: f64,
    grid: &WindGrid,
) -> Result<PowerCurve> {
    spec.validate()?;
    grid.validate()?;
    if !(rho > 0.0 && rho.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "air density {rho} must be > 0"
        )));
    }
    let power = grid
        .speeds()
        .map(|v| ideal_power_at(v, spec, model, rho))
        .collect::<Result<Vec<_>>>()?;
    Ok(PowerCurve {
        grid: *grid,
        power,
        meta: CurveMeta {
            spec: spec.clone(),
            cp_model: model.name().to_string(),
            lambda_opt: model.lambda_opt,
            environment: EnvironmentConditions {
                rho,
                ..EnvironmentConditions::default()
            },
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cp::scaled_model;

    pub(crate) fn reference_spec() -> TurbineSpec {
        TurbineSpec {
            name: "reference".into(),
            rotor_diameter: 80.0,
            rated_power: 2000.0,
            cut_in: 3.5,
            cut_out: 25.0,
            omega_min: 10.0,
            omega_max: 30.0,
            cp_max: 0.4615,
            hub_height: Some(60.0),
        }
    }

    #[test]
    fn rotor_speed_clamps() {
        let spec = reference_spec();
        assert_eq!(rotor_speed(0.0, &spec, 8.0), 10.0);
        // 8·10/40 = 2 rad/s
        assert!((rotor_speed(10.0, &spec, 8.0) - 19.098_593_171_027_4).abs() < 1e-9);
        assert_eq!(rotor_speed(100.0, &spec, 8.0), 30.0);
    }

    #[test]
    fn tip_speed_ratio() {
        let omega = 2.0 / RPM_TO_RAD_PER_S;
        assert!((tsr(10.0, omega, 80.0).unwrap() - 8.0).abs() < 1e-12);
        assert_eq!(tsr(10.0, 0.0, 80.0).unwrap(), 0.0);
        let a = tsr(7.0, 15.0, 80.0).unwrap();
        let b = tsr(14.0, 30.0, 80.0).unwrap();
        assert!((a - b).abs() < 1e-12);
        assert!(matches!(
            tsr(0.0, 15.0, 80.0),
            Err(Error::DivisionByZero(_))
        ));
    }

    #[test]
    fn power_equation() {
        assert_eq!(raw_power(10.0, 0.0, 1.225, 80.0), 0.0);
        // ½·1.225·π·40²·10³·0.44 / 1000
        assert!((raw_power(10.0, 0.44, 1.225, 80.0) - 1_354.654_752_227_92).abs() < 1e-9);
        let p1 = raw_power(6.0, 0.4, 1.225, 80.0);
        let p2 = raw_power(12.0, 0.4, 1.225, 80.0);
        assert!((p2 / p1 - 8.0).abs() < 1e-12);
    }

    #[test]
    fn regions() {
        let spec = reference_spec();
        let model = scaled_model("Dai2016", spec.cp_max).unwrap();
        let curve = ideal_curve(&spec, &model, 1.225, &WindGrid::default()).unwrap();
        assert_eq!(curve.len(), 801);
        assert_eq!(curve.interpolate(2.0), 0.0);
        assert_eq!(curve.power[520], 0.0); // 26 m/s
        assert_eq!(curve.power[400], 2000.0); // 20 m/s
        assert!(curve.power[500] > 0.0); // exactly cut-out still produces
        assert!(curve.power[70] > 0.0); // exactly cut-in
        for &p in &curve.power {
            assert!((0.0..=2000.0).contains(&p));
        }
    }

    #[test]
    fn sig_digit_formatting() {
        assert_eq!(format_sig(0.0, 6), "0");
        assert_eq!(format_sig(0.05, 6), "0.05");
        assert_eq!(format_sig(0.15000000000000002, 6), "0.15");
        assert_eq!(format_sig(1354.6547522, 6), "1354.65");
        assert_eq!(format_sig(2000.0, 6), "2000");
        assert_eq!(format_sig(1234567.0, 6), "1234570");
        assert_eq!(format_sig(9.9999996, 6), "10");
        assert_eq!(format_sig(-0.000012345678, 6), "-0.0000123457");
    }

    #[test]
    fn csv_round_trip() {
        let spec = reference_spec();
        let model = scaled_model("Dai2016", spec.cp_max).unwrap();
        let curve = ideal_curve(&spec, &model, 1.225, &WindGrid::new(30.0, 0.5).unwrap()).unwrap();
        let text = curve.to_csv_string();
        assert!(text.starts_with("wind_speed_ms,power_kw\n"));
        let rows = read_curve_csv(text.as_bytes()).unwrap();
        assert_eq!(rows.len(), curve.len());
        for ((v, p), (gv, gp)) in rows.iter().zip(curve.points()) {
            assert!((v - gv).abs() < 1e-9);
            assert!((p - gp).abs() <= 1e-5 * gp.abs().max(1.0));
        }
    }

    #[test]
    fn grid_shape() {
        let g = WindGrid::default();
        assert_eq!(g.len(), 801);
        assert_eq!(g.speed(800), 40.0);
        assert_eq!(g.index_at_or_below(25.0), Some(500));
        assert_eq!(g.index_at_or_below(100.0), Some(800));
        assert!(WindGrid::new(40.0, 0.0).is_err());
    }
}
