//! Site corrections applied to an ideal power curve: turbulence smoothing
//! and the rotor-equivalent wind speed under shear and veer.
//!
//! Both transformations work on the curve with its cut-out zeroing lifted
//! (the value at cut-out is held beyond it) and re-apply the cut-out gate on
//! the hub-height wind speed afterwards, so the drop at cut-out stays a
//! single grid step.

use serde::{Deserialize, Serialize};

use crate::curve::{above_cut_out, interpolate_uniform, PowerCurve};
use crate::error::{Error, Result};
use crate::turbine::{check_ground_clearance, TurbineSpec};

/// Gaussian kernels are cut at this many standard deviations.
pub const KERNEL_HALF_WIDTH_SIGMAS: f64 = 5.0;

pub const DEFAULT_BANDS: usize = 100;

pub const REFERENCE_AIR_DENSITY: f64 = 1.225;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EnvironmentConditions {
    /// Turbulence intensity σ(u)/μ(u) as a fraction.
    pub ti: f64,
    /// Air density, kg/m³.
    pub rho: f64,
    /// Power-law shear exponent.
    pub shear_alpha: f64,
    /// Wind veer, degrees per metre of height.
    pub veer_rate: f64,
}

impl Default for EnvironmentConditions {
    fn default() -> Self {
        EnvironmentConditions {
            ti: 0.0,
            rho: REFERENCE_AIR_DENSITY,
            shear_alpha: 0.0,
            veer_rate: 0.0,
        }
    }
}

impl EnvironmentConditions {
    pub fn validate(&self) -> Result<()> {
        if !(self.ti >= 0.0 && self.ti < 1.0) {
            return Err(Error::InvalidInput(format!(
                "ti={} must lie in [0, 1)",
                self.ti
            )));
        }
        if !(self.rho > 0.0 && self.rho.is_finite()) {
            return Err(Error::InvalidInput(format!("rho={} must be > 0", self.rho)));
        }
        if !self.shear_alpha.is_finite() || !self.veer_rate.is_finite() {
            return Err(Error::InvalidInput("shear and veer must be finite".into()));
        }
        Ok(())
    }

    /// Non-fatal plausibility warnings.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !(0.9..=1.5).contains(&self.rho) {
            out.push(format!("air density {} kg/m3 outside [0.9, 1.5]", self.rho));
        }
        out
    }

    pub fn has_shear_or_veer(&self) -> bool {
        self.shear_alpha != 0.0 || self.veer_rate != 0.0
    }
}

/// Power values with the cut-out zeroing removed: every grid point above
/// cut-out holds the value at the last producing point.
pub(crate) fn lift_cut_out(curve: &PowerCurve) -> Vec<f64> {
    let mut ext = curve.power.clone();
    if let Some(k) = curve.grid.index_at_or_below(curve.meta.spec.cut_out + 1e-9) {
        let held = ext[k];
        for p in ext.iter_mut().skip(k + 1) {
            *p = held;
        }
    }
    ext
}

pub(crate) fn gate_cut_out(power: &mut [f64], curve: &PowerCurve) {
    let spec = &curve.meta.spec;
    for (i, p) in power.iter_mut().enumerate() {
        if above_cut_out(curve.grid.speed(i), spec) {
            *p = 0.0;
        }
    }
}

/// Normalised Gaussian weights on grid points `k·step`, `k ≥ first`,
/// covering `center ± 5σ`. Points below zero wind speed are dropped.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelWindow {
    pub first: usize,
    pub weights: Vec<f64>,
}

pub fn gaussian_window(center: f64, sigma: f64, step: f64) -> KernelWindow {
    let reach = KERNEL_HALF_WIDTH_SIGMAS * sigma;
    let lo = ((center - reach) / step).ceil().max(0.0) as usize;
    let hi = ((center + reach) / step).floor().max(lo as f64) as usize;
    let mut weights: Vec<f64> = (lo..=hi)
        .map(|k| {
            let z = (k as f64 * step - center) / sigma;
            (-0.5 * z * z).exp()
        })
        .collect();
    let total: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= total;
    }
    KernelWindow { first: lo, weights }
}

/// Smooths a curve with a Gaussian kernel of mean `U` and standard deviation
/// `U·ti` at every grid speed `U`, then re-applies the cut-out gate.
///
/// Where the kernel is narrower than half a grid step the point is passed
/// through unchanged; `ti = 0` returns the input as is.
pub fn apply_turbulence(curve: &PowerCurve, ti: f64) -> Result<PowerCurve> {
    if !(ti >= 0.0 && ti.is_finite()) {
        return Err(Error::InvalidInput(format!("ti={ti} must be >= 0")));
    }
    let mut out = curve.clone();
    out.meta.environment.ti = ti;
    if ti == 0.0 {
        return Ok(out);
    }
    let ext = lift_cut_out(curve);
    let last = ext.len() - 1;
    let step = curve.grid.step;
    for (i, p) in out.power.iter_mut().enumerate() {
        let u = curve.grid.speed(i);
        let sigma = u * ti;
        if sigma < 0.5 * step {
            *p = ext[i];
            continue;
        }
        let window = gaussian_window(u, sigma, step);
        *p = window
            .weights
            .iter()
            .enumerate()
            .map(|(j, w)| w * ext[(window.first + j).min(last)])
            .sum();
    }
    gate_cut_out(&mut out.power, curve);
    Ok(out)
}

/// Horizontal slices of the rotor disc used for the equivalent wind speed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RotorBands {
    pub n: usize,
    pub hub_height: f64,
    pub radius: f64,
    /// Band-centre heights relative to the hub, bottom to top.
    pub heights: Vec<f64>,
    /// Band areas, m².
    pub areas: Vec<f64>,
}

impl RotorBands {
    pub fn total_area(&self) -> f64 {
        self.areas.iter().sum()
    }
}

/// Area of the disc of radius `r` lying below height `h` (relative to its
/// centre), up to the constant `πr²/2`.
fn disc_area_below(h: f64, r: f64) -> f64 {
    let s = (h / r).clamp(-1.0, 1.0);
    r * r * (s * (1.0 - s * s).sqrt() + s.asin())
}

/// Slices the rotor into `n` equal-height bands with exact circular-segment
/// areas.
pub fn band_areas(rotor_diameter: f64, hub_height: f64, n: usize) -> Result<RotorBands> {
    if n == 0 {
        return Err(Error::InvalidInput("band count must be >= 1".into()));
    }
    if !(rotor_diameter > 0.0) {
        return Err(Error::InvalidInput(format!(
            "rotor_diameter={rotor_diameter} must be > 0"
        )));
    }
    check_ground_clearance(hub_height, rotor_diameter)?;
    let r = 0.5 * rotor_diameter;
    let width = rotor_diameter / n as f64;
    let edge = |k: usize| -r + k as f64 * width;
    let mut heights = Vec::with_capacity(n);
    let mut areas = Vec::with_capacity(n);
    for k in 0..n {
        let (lo, hi) = (edge(k), if k + 1 == n { r } else { edge(k + 1) });
        heights.push(0.5 * (lo + hi));
        areas.push(disc_area_below(hi, r) - disc_area_below(lo, r));
    }
    Ok(RotorBands {
        n,
        hub_height,
        radius: r,
        heights,
        areas,
    })
}

/// Rotor-equivalent wind speed: cube root of the area-weighted mean of the
/// cubed band speeds, each projected onto the hub wind direction.
pub fn rews(u_hub: f64, shear_alpha: f64, veer_rate: f64, bands: &RotorBands) -> f64 {
    let total = bands.total_area();
    let mean_cube: f64 = bands
        .heights
        .iter()
        .zip(&bands.areas)
        .map(|(&dz, &area)| {
            let z = bands.hub_height + dz;
            let speed = u_hub * (z / bands.hub_height).powf(shear_alpha);
            let effective = (speed * (veer_rate * dz).to_radians().cos()).max(0.0);
            area / total * effective.powi(3)
        })
        .sum();
    mean_cube.cbrt()
}

/// [`rews`] for a turbine, building `n_bands` bands from its geometry.
pub fn rews_for_spec(
    u_hub: f64,
    spec: &TurbineSpec,
    shear_alpha: f64,
    veer_rate: f64,
    n_bands: usize,
) -> Result<f64> {
    let bands = band_areas(spec.rotor_diameter, spec.require_hub_height()?, n_bands)?;
    Ok(rews(u_hub, shear_alpha, veer_rate, &bands))
}

/// Re-evaluates the curve at the rotor-equivalent wind speed of every
/// hub-height speed (linear interpolation). Cut-out stays tied to the hub
/// speed.
pub fn apply_shear_veer(
    curve: &PowerCurve,
    shear_alpha: f64,
    veer_rate: f64,
    n_bands: usize,
) -> Result<PowerCurve> {
    let mut out = curve.clone();
    out.meta.environment.shear_alpha = shear_alpha;
    out.meta.environment.veer_rate = veer_rate;
    if shear_alpha == 0.0 && veer_rate == 0.0 {
        return Ok(out);
    }
    // U_eq scales linearly with the hub speed.
    let ratio = rews_for_spec(1.0, &curve.meta.spec, shear_alpha, veer_rate, n_bands)?;
    let ext = lift_cut_out(curve);
    let step = curve.grid.step;
    for (i, p) in out.power.iter_mut().enumerate() {
        *p = interpolate_uniform(&ext, step, ratio * curve.grid.speed(i));
    }
    gate_cut_out(&mut out.power, curve);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cp::scaled_model;
    use crate::curve::{ideal_curve, WindGrid};
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn reference_spec() -> TurbineSpec {
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

    fn reference_curve() -> PowerCurve {
        let spec = reference_spec();
        let model = scaled_model("Dai2016", spec.cp_max).unwrap();
        ideal_curve(&spec, &model, 1.225, &WindGrid::default()).unwrap()
    }

    /// Midpoint-rule REWS over `n` bands with band widths from the chord
    /// length, independent of the analytic segment areas.
    fn rews_quadrature(u_hub: f64, d: f64, hub: f64, alpha: f64, veer: f64, n: usize) -> f64 {
        let r = d / 2.0;
        let dh = d / n as f64;
        let (mut num, mut den) = (0.0, 0.0);
        for k in 0..n {
            let h = -r + (k as f64 + 0.5) * dh;
            let w = 2.0 * (r * r - h * h).sqrt() * dh;
            let u = u_hub * ((hub + h) / hub).powf(alpha) * (veer * h * PI / 180.0).cos();
            num += w * u.powi(3);
            den += w;
        }
        (num / den).cbrt()
    }

    #[test]
    fn zero_ti_is_identity() {
        let curve = reference_curve();
        let out = apply_turbulence(&curve, 0.0).unwrap();
        assert_eq!(out.power, curve.power);
    }

    #[test]
    fn constant_curve_is_preserved() {
        let mut curve = reference_curve();
        curve.meta.spec.cut_out = 40.0;
        curve.power.iter_mut().for_each(|p| *p = 1234.5);
        let out = apply_turbulence(&curve, 0.1).unwrap();
        for p in out.power {
            assert!((p - 1234.5).abs() < 1e-9);
        }
    }

    #[test]
    fn knee_drops_below_rated() {
        let curve = reference_curve();
        let knee = curve.rated_index().unwrap();
        let smoothed = apply_turbulence(&curve, 0.10).unwrap();
        assert!(smoothed.power[knee] < 2000.0 - 1.0);
    }

    #[test]
    fn cut_out_stays_sharp() {
        let curve = reference_curve();
        for ti in [0.025, 0.05, 0.1, 0.15] {
            let s = apply_turbulence(&curve, ti).unwrap();
            assert!(s.power[500] > 1900.0, "ti={ti}");
            assert_eq!(s.power[501], 0.0);
        }
    }

    #[test]
    fn negative_ti_rejected() {
        assert!(apply_turbulence(&reference_curve(), -0.1).is_err());
    }

    #[test]
    fn band_geometry() {
        let one = band_areas(80.0, 60.0, 1).unwrap();
        assert!((one.areas[0] - PI * 1600.0).abs() < 1e-9);
        assert_eq!(one.heights, vec![0.0]);

        let two = band_areas(80.0, 60.0, 2).unwrap();
        for a in &two.areas {
            assert!((a - PI * 1600.0 / 2.0).abs() < 1e-9);
        }

        let many = band_areas(80.0, 60.0, 37).unwrap();
        assert!((many.total_area() / (PI * 1600.0) - 1.0).abs() < 1e-9);
        for i in 0..37 {
            assert!((many.areas[i] - many.areas[36 - i]).abs() < 1e-9);
        }
    }

    #[test]
    fn ground_strike() {
        assert!(matches!(
            band_areas(80.0, 40.0, 10),
            Err(Error::GroundStrike { .. })
        ));
        assert!(band_areas(80.0, 60.0, 0).is_err());
    }

    #[test]
    fn uniform_flow_rews() {
        let bands = band_areas(80.0, 60.0, 100).unwrap();
        assert!((rews(10.0, 0.0, 0.0, &bands) - 10.0).abs() < 1e-9);
        assert!(rews(10.0, 0.0, 0.3, &bands) < 10.0);
    }

    #[test]
    fn shear_rews_close_to_hub_speed() {
        let bands = band_areas(80.0, 60.0, 100).unwrap();
        let u = rews(10.0, 0.2, 0.0, &bands);
        let oracle = rews_quadrature(10.0, 80.0, 60.0, 0.2, 0.0, 10_000);
        assert!((u - oracle).abs() / oracle < 1e-4);
        assert!((u - 10.0).abs() / 10.0 < 0.02);
    }

    #[test]
    fn shear_veer_identity_and_gate() {
        let curve = reference_curve();
        let same = apply_shear_veer(&curve, 0.0, 0.0, 100).unwrap();
        assert_eq!(same.power, curve.power);

        let veered = apply_shear_veer(&curve, 0.0, 0.75, 100).unwrap();
        assert!(veered.power[500] > 0.0);
        assert_eq!(veered.power[501], 0.0);
        for i in 0..curve.len() {
            assert!(veered.power[i] <= curve.power[i] + 1e-9);
        }
    }

    #[test]
    fn shear_needs_hub_height() {
        let mut curve = reference_curve();
        curve.meta.spec.hub_height = None;
        assert!(matches!(
            apply_shear_veer(&curve, 0.2, 0.0, 100),
            Err(Error::MissingHubHeight)
        ));
    }

    proptest! {
        #[test]
        fn kernel_weights_sum_to_one(u in 0.1f64..40.0, ti in 0.01f64..0.3) {
            let w = gaussian_window(u, u * ti, 0.05);
            let total: f64 = w.weights.iter().sum();
            prop_assert!((total - 1.0).abs() < 1e-9);
        }

    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn smoothing_stays_in_bounds(ti in 0.0f64..0.3) {
            let out = apply_turbulence(&reference_curve(), ti).unwrap();
            for p in out.power {
                prop_assert!((0.0..=2000.0 + 1e-9).contains(&p));
            }
        }

        #[test]
        fn veer_lowers_rews(v1 in 0.0f64..0.75, dv in 0.0f64..0.75, alpha in 0.0f64..0.4) {
            let bands = band_areas(80.0, 60.0, 100).unwrap();
            let v2 = (v1 + dv).min(0.75);
            prop_assert!(rews(10.0, alpha, v2, &bands) <= rews(10.0, alpha, v1, &bands) + 1e-12);
        }

        #[test]
        fn band_areas_partition_disc(d in 1.0f64..250.0, n in 1usize..500) {
            let bands = band_areas(d, d, n).unwrap();
            let disc = PI * d * d / 4.0;
            prop_assert!((bands.total_area() / disc - 1.0).abs() < 1e-9);
        }
    }
}
