//! Run configuration: defaults, then a JSON config file, then a spec file,
//! then command-line flags.

use std::fs;
use std::path::Path;

use clap::{Args, ValueEnum};
use powercurve::turbine::read_specs_csv;
use powercurve::{
    EffectOrder, EnvironmentConditions, Error, PartialTurbineSpec, Result, RunParams,
    SynthesisOptions,
};
use serde_json::Value;

#[derive(Debug, Clone, Default, Args)]
pub struct TurbineArgs {
    /// Turbine name
    #[arg(long)]
    pub name: Option<String>,
    /// Rotor diameter, m
    #[arg(long)]
    pub diameter: Option<f64>,
    /// Rated power, kW
    #[arg(long)]
    pub rated_power: Option<f64>,
    /// Cut-in wind speed, m/s
    #[arg(long)]
    pub cut_in: Option<f64>,
    /// Cut-out wind speed, m/s
    #[arg(long)]
    pub cut_out: Option<f64>,
    /// Minimum rotor speed, rpm
    #[arg(long)]
    pub omega_min: Option<f64>,
    /// Maximum rotor speed, rpm
    #[arg(long)]
    pub omega_max: Option<f64>,
    /// Peak power coefficient
    #[arg(long)]
    pub cp_max: Option<f64>,
    /// Hub height, m (needed for shear and veer)
    #[arg(long)]
    pub hub_height: Option<f64>,
}

impl TurbineArgs {
    pub fn to_partial(&self) -> PartialTurbineSpec {
        PartialTurbineSpec {
            name: self.name.clone(),
            rotor_diameter: self.diameter,
            rated_power: self.rated_power,
            cut_in: self.cut_in,
            cut_out: self.cut_out,
            omega_min: self.omega_min,
            omega_max: self.omega_max,
            cp_max: self.cp_max,
            hub_height: self.hub_height,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum OrderArg {
    ShearThenTurbulence,
    TurbulenceThenShear,
}

impl From<OrderArg> for EffectOrder {
    fn from(o: OrderArg) -> Self {
        match o {
            OrderArg::ShearThenTurbulence => EffectOrder::ShearThenTurbulence,
            OrderArg::TurbulenceThenShear => EffectOrder::TurbulenceThenShear,
        }
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub turbine: TurbineArgs,
    /// Cp parameterisation name
    #[arg(long)]
    pub cp_model: Option<String>,
    /// Turbulence intensity as a fraction (0.05, not 5)
    #[arg(long)]
    pub ti: Option<f64>,
    /// Air density, kg/m3
    #[arg(long)]
    pub rho: Option<f64>,
    /// Power-law shear exponent
    #[arg(long)]
    pub shear_alpha: Option<f64>,
    /// Wind veer, degrees per metre
    #[arg(long)]
    pub veer_rate: Option<f64>,
    /// Number of horizontal rotor bands for the equivalent wind speed
    #[arg(long)]
    pub n_bands: Option<usize>,
    /// Order of the shear/veer and turbulence corrections
    #[arg(long, value_enum)]
    pub order: Option<OrderArg>,
    /// Upper end of the wind-speed grid, m/s
    #[arg(long)]
    pub v_max: Option<f64>,
    /// Wind-speed grid step, m/s
    #[arg(long)]
    pub dv: Option<f64>,
    /// JSON config file (a metadata sidecar works too)
    #[arg(long)]
    pub config: Option<std::path::PathBuf>,
    /// Turbine spec file, JSON or turbine CSV
    #[arg(long)]
    pub spec: Option<std::path::PathBuf>,
}

/// Starting point for `generate`: nothing known about the turbine.
pub fn empty_params() -> RunParams {
    RunParams {
        turbine: PartialTurbineSpec::default(),
        cp_model: powercurve::pipeline::DEFAULT_CP_MODEL.to_string(),
        environment: EnvironmentConditions::default(),
        options: SynthesisOptions::default(),
    }
}

/// Recursive object merge; nulls in `top` leave `base` untouched.
fn merge(base: &mut Value, top: Value) {
    match (base, top) {
        (_, Value::Null) => {}
        (Value::Object(b), Value::Object(t)) => {
            for (k, v) in t {
                match b.get_mut(&k) {
                    Some(slot) => merge(slot, v),
                    None => {
                        if !v.is_null() {
                            b.insert(k, v);
                        }
                    }
                }
            }
        }
        (slot, v) => *slot = v,
    }
}

fn read_to_string(path: &Path) -> Result<String> {
    fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))
}

/// Reads a turbine spec from JSON or from a turbine CSV. A CSV with several
/// rows needs `name` to pick one.
pub fn load_spec(path: &Path, name: Option<&str>) -> Result<PartialTurbineSpec> {
    let text = read_to_string(path)?;
    let is_csv = path
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("csv"));
    if !is_csv {
        return Ok(serde_json::from_str(&text)?);
    }
    let mut specs = read_specs_csv(text.as_bytes())?;
    match (specs.len(), name) {
        (0, _) => Err(Error::InvalidInput(format!(
            "{} has no turbines",
            path.display()
        ))),
        (1, _) => Ok(specs.remove(0)),
        (_, Some(n)) => specs
            .into_iter()
            .find(|s| s.name.as_deref() == Some(n))
            .ok_or_else(|| {
                Error::InvalidInput(format!("no turbine named '{n}' in {}", path.display()))
            }),
        (_, None) => Err(Error::InvalidInput(format!(
            "{} holds several turbines; pick one with --name",
            path.display()
        ))),
    }
}

pub fn resolve(base: RunParams, args: &RunArgs) -> Result<RunParams> {
    let mut run = base;
    if let Some(path) = &args.config {
        let mut value = serde_json::to_value(&run)?;
        let file: Value = serde_json::from_str(&read_to_string(path)?)?;
        if !file.is_object() {
            return Err(Error::InvalidInput(format!(
                "{}: config must be a JSON object",
                path.display()
            )));
        }
        merge(&mut value, file);
        run = serde_json::from_value(value)?;
    }
    if let Some(path) = &args.spec {
        let spec = load_spec(path, args.turbine.name.as_deref())?;
        run.turbine = run.turbine.overlay(&spec);
    }
    run.turbine = run.turbine.overlay(&args.turbine.to_partial());
    if let Some(m) = &args.cp_model {
        run.cp_model = m.clone();
    }
    let env = &mut run.environment;
    env.ti = args.ti.unwrap_or(env.ti);
    env.rho = args.rho.unwrap_or(env.rho);
    env.shear_alpha = args.shear_alpha.unwrap_or(env.shear_alpha);
    env.veer_rate = args.veer_rate.unwrap_or(env.veer_rate);
    let opts = &mut run.options;
    opts.n_bands = args.n_bands.unwrap_or(opts.n_bands);
    if let Some(o) = args.order {
        opts.order = o.into();
    }
    opts.grid.v_max = args.v_max.unwrap_or(opts.grid.v_max);
    opts.grid.step = args.dv.unwrap_or(opts.grid.step);
    opts.grid.validate()?;
    Ok(run)
}
