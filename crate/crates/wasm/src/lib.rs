//! WebAssembly bindings behind `www/index.html`.
//!
//! The plain functions do the work and can be called natively; the
//! `#[wasm_bindgen]` wrappers only convert errors for JavaScript.

use powercurve::cp::registry_names;
use powercurve::{
    complete_spec, scaled_model, synthesize_partial, EnvironmentConditions, PartialTurbineSpec,
    Result, SynthesisOptions, WindGrid,
};
use wasm_bindgen::prelude::*;

/// Tip-speed ratios used by [`cp_curve`]: 0.1, 0.2, …, 16.
pub const LAMBDA_STEP: f64 = 0.1;
pub const LAMBDA_POINTS: usize = 160;

/// Inputs of the interactive power-curve plot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveInputs {
    pub diameter: f64,
    pub rated_power: f64,
    pub cp_max: f64,
    pub ti: f64,
    pub rho: f64,
    pub shear_alpha: f64,
    pub veer_rate: f64,
}

/// Power on the default 0–40 m/s grid. Hub height is taken equal to the
/// rotor diameter; the other characteristics come from the defaults.
pub fn curve_values(model: &str, inputs: &CurveInputs) -> Result<Vec<f64>> {
    let partial = PartialTurbineSpec {
        cp_max: Some(inputs.cp_max),
        hub_height: Some(inputs.diameter),
        ..PartialTurbineSpec::new(inputs.diameter, inputs.rated_power)
    };
    let env = EnvironmentConditions {
        ti: inputs.ti,
        rho: inputs.rho,
        shear_alpha: inputs.shear_alpha,
        veer_rate: inputs.veer_rate,
    };
    let out = synthesize_partial(&partial, model, &env, &SynthesisOptions::default())?;
    Ok(out.curve.power)
}

/// Scaled Cp at λ = 0.1 … 16 for one pitch angle.
pub fn cp_values(model: &str, beta: f64, cp_max: f64) -> Result<Vec<f64>> {
    let m = scaled_model(model, cp_max)?;
    Ok((1..=LAMBDA_POINTS)
        .map(|i| m.evaluate_or_zero(i as f64 * LAMBDA_STEP, beta))
        .collect())
}

/// Completed spec and defaults report as JSON.
pub fn defaults_json(diameter: f64, rated_power: f64) -> Result<String> {
    let (spec, report) = complete_spec(&PartialTurbineSpec::new(diameter, rated_power))?;
    Ok(serde_json::json!({ "spec": spec, "defaults": report }).to_string())
}

fn js(e: powercurve::Error) -> JsError {
    JsError::new(&e.to_string())
}

#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn power_curve(
    model: &str,
    diameter: f64,
    rated_power: f64,
    cp_max: f64,
    ti: f64,
    rho: f64,
    shear_alpha: f64,
    veer_rate: f64,
) -> std::result::Result<Vec<f64>, JsError> {
    let inputs = CurveInputs {
        diameter,
        rated_power,
        cp_max,
        ti,
        rho,
        shear_alpha,
        veer_rate,
    };
    curve_values(model, &inputs).map_err(js)
}

#[wasm_bindgen]
pub fn wind_speeds() -> Vec<f64> {
    WindGrid::default().speeds().collect()
}

#[wasm_bindgen]
pub fn cp_curve(model: &str, beta: f64, cp_max: f64) -> std::result::Result<Vec<f64>, JsError> {
    cp_values(model, beta, cp_max).map_err(js)
}

#[wasm_bindgen]
pub fn defaults(diameter: f64, rated_power: f64) -> std::result::Result<String, JsError> {
    defaults_json(diameter, rated_power).map_err(js)
}

/// JSON array of the bundled Cp parameterisation names.
#[wasm_bindgen]
pub fn model_names() -> String {
    serde_json::to_string(&registry_names()).unwrap_or_else(|_| "[]".into())
}
