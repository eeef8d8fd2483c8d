//! Parametric wind turbine power curves.
//!
//! A curve is built from a handful of catalogue characteristics (rotor
//! diameter, rated power, cut-in / cut-out speeds, rotor-speed limits and the
//! peak power coefficient) plus site conditions: air density, turbulence
//! intensity, wind shear and wind veer. Missing characteristics fall back to
//! fleet-wide statistical defaults.
//!
//! ```
//! use powercurve::{synthesize_partial, EnvironmentConditions, PartialTurbineSpec, SynthesisOptions};
//!
//! let env = EnvironmentConditions { ti: 0.05, ..Default::default() };
//! let out = synthesize_partial(
//!     &PartialTurbineSpec::new(80.0, 2000.0),
//!     "Dai2016",
//!     &env,
//!     &SynthesisOptions::default(),
//! )
//! .unwrap();
//! assert!(out.curve.interpolate(20.0) > 1990.0);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0.0)` also rejects NaN

pub mod cp;
pub mod curve;
pub mod environment;
pub mod error;
pub mod pipeline;
pub mod sweep;
pub mod turbine;
pub mod validation;

pub use cp::{
    cp_general, lambda_opt, lookup, registry, scale_cp, scaled_model, CpParameterisation,
    ScaledCpModel, BETZ_LIMIT,
};
pub use curve::{ideal_curve, raw_power, rotor_speed, tsr, OperatingState, PowerCurve, WindGrid};
pub use environment::{
    apply_shear_veer, apply_turbulence, band_areas, rews, EnvironmentConditions, RotorBands,
};
pub use error::{Error, Result};
pub use pipeline::{synthesize, synthesize_partial, EffectOrder, Synthesis, SynthesisOptions};
pub use sweep::{run_sweep, RunParams, SweepParameter, SweepSpec, SweepValues};
pub use turbine::{
    complete_spec, default_cp_max, default_cut_speeds, default_rotation_speeds, DefaultsReport,
    PartialTurbineSpec, TurbineSpec,
};
pub use validation::{
    betz_screen, invert_cp, match_over_ti, MatchOptions, MeasuredCurve, ValidationEntry,
    ValidationReport,
};

/// Version string recorded in output metadata.
pub const MODEL_VERSION: &str = env!("CARGO_PKG_VERSION");
