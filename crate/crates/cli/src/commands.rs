use std::fs;
use std::path::{Path, PathBuf};

use powercurve::cp::registry_json;
use powercurve::curve::{format_sig, read_curve_csv};
use powercurve::sweep::reference_params;
use powercurve::turbine::read_specs_csv;
use powercurve::validation::MatchOptions;
use powercurve::{
    complete_spec, lookup, match_over_ti, registry, run_sweep, scale_cp, synthesize_partial,
    DefaultsReport, Error, MeasuredCurve, PartialTurbineSpec, Result, RunParams, SweepParameter,
    SweepSpec, SweepValues, TurbineSpec, ValidationReport, MODEL_VERSION,
};
use serde::Serialize;

use crate::config::{empty_params, resolve};
use crate::{CpTableArgs, DefaultsArgs, GenerateArgs, SweepArgs, ValidateArgs};

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents)
        .map_err(|e| Error::InvalidInput(format!("cannot write {}: {e}", path.display())))
}

fn write_or_print(path: Option<&Path>, contents: &str) -> Result<()> {
    match path {
        Some(p) => write_file(p, contents),
        None => {
            print!("{contents}");
            Ok(())
        }
    }
}

fn warn(msg: &str) {
    eprintln!("warning: {msg}");
}

fn parse_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidInput(format!("'{x}' is not a number")))
        })
        .collect()
}

/// `power_curve.csv` -> `power_curve.meta.json`
pub fn sidecar_path(output: &Path) -> PathBuf {
    output.with_extension("meta.json")
}

#[derive(Serialize)]
struct ScalingInfo {
    lambda_opt: f64,
    raw_cp_at_opt: f64,
    scale_factor: f64,
}

/// Sidecar contents. The flattened run parameters make it usable as a
/// `--config` file.
#[derive(Serialize)]
struct Metadata<'a> {
    #[serde(flatten)]
    run: &'a RunParams,
    model_version: &'a str,
    cp_scaling: ScalingInfo,
    defaults: &'a DefaultsReport,
}

pub fn generate(args: &GenerateArgs) -> Result<()> {
    let run = resolve(empty_params(), &args.run)?;
    let out = synthesize_partial(&run.turbine, &run.cp_model, &run.environment, &run.options)?;
    for w in &out.defaults.warnings {
        warn(w);
    }
    let resolved = RunParams {
        turbine: PartialTurbineSpec::from(&out.spec),
        cp_model: out.model.name().to_string(),
        ..run
    };
    let meta = Metadata {
        run: &resolved,
        model_version: MODEL_VERSION,
        cp_scaling: ScalingInfo {
            lambda_opt: out.model.lambda_opt,
            raw_cp_at_opt: out.model.raw_cp_at_opt,
            scale_factor: out.model.scale_factor(),
        },
        defaults: &out.defaults,
    };
    write_file(&args.output, &out.curve.to_csv_string())?;
    let mut json = serde_json::to_string_pretty(&meta)?;
    json.push('\n');
    write_file(&sidecar_path(&args.output), &json)
}

pub fn sweep(args: &SweepArgs) -> Result<()> {
    let base = resolve(reference_params(), &args.run)?;
    let parameter: SweepParameter = args.param.parse()?;
    let values = match (&args.values, &args.range) {
        (Some(v), _) if parameter.is_categorical() => {
            SweepValues::Names(v.split(',').map(|s| s.trim().to_string()).collect())
        }
        (Some(v), _) => SweepValues::List(parse_list(v)?),
        (None, Some(r)) => {
            let xs = parse_list(r)?;
            match xs.as_slice() {
                &[min, max, count] if count >= 1.0 && count.fract() == 0.0 => SweepValues::Range {
                    min,
                    max,
                    count: count as usize,
                },
                _ => {
                    return Err(Error::InvalidInput(format!(
                        "--range wants min,max,count, got '{r}'"
                    )))
                }
            }
        }
        (None, None) if parameter.is_categorical() => SweepSpec::all_parameterisations().values,
        (None, None) => return Err(Error::InvalidInput("give --values or --range".into())),
    };
    let result = run_sweep(&base, &SweepSpec { parameter, values })?;
    for w in &result.warnings {
        warn(w);
    }
    write_file(&args.output, &result.to_csv_string())
}

#[derive(Serialize)]
struct Completed {
    spec: TurbineSpec,
    defaults: DefaultsReport,
}

fn complete(partial: &PartialTurbineSpec) -> Result<Completed> {
    let (spec, defaults) = complete_spec(partial)?;
    for w in &defaults.warnings {
        warn(w);
    }
    Ok(Completed { spec, defaults })
}

pub fn defaults(args: &DefaultsArgs) -> Result<()> {
    let json = match &args.input {
        Some(path) => {
            let file = fs::File::open(path)
                .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
            let rows = read_specs_csv(file)?
                .iter()
                .map(|p| complete(&p.overlay(&args.turbine.to_partial())))
                .collect::<Result<Vec<_>>>()?;
            serde_json::to_string_pretty(&rows)?
        }
        None => serde_json::to_string_pretty(&complete(&args.turbine.to_partial())?)?,
    };
    write_or_print(args.output.as_deref(), &(json + "\n"))
}

pub fn cp_table(args: &CpTableArgs) -> Result<()> {
    let models = match &args.model {
        Some(name) => vec![lookup(name)?],
        None => registry(),
    };
    let betas = parse_list(&args.beta)?;
    if !(args.dlambda > 0.0 && args.lambda_max >= args.dlambda) {
        return Err(Error::InvalidInput("need 0 < dlambda <= lambda-max".into()));
    }
    let steps = (args.lambda_max / args.dlambda + 1e-9).floor() as usize;

    let mut out = String::from("model,beta_deg,lambda,cp\n");
    for p in &models {
        let scaled = args.cp_max.map(|c| scale_cp(p, c)).transpose()?;
        for &beta in &betas {
            for i in 1..=steps {
                let lambda = i as f64 * args.dlambda;
                let cp = match &scaled {
                    Some(s) => s.evaluate_or_zero(lambda, beta),
                    None => p.evaluate_or_zero(lambda, beta),
                };
                out.push_str(&format!(
                    "{},{},{},{}\n",
                    p.name,
                    format_sig(beta, 6),
                    format_sig(lambda, 6),
                    format_sig(cp, 6)
                ));
            }
        }
    }
    if let Some(path) = &args.export_registry {
        write_file(path, &(registry_json()? + "\n"))?;
    }
    write_or_print(args.output.as_deref(), &out)
}

/// `<name>.csv` files that have a `<name>.json` next to them, sorted.
fn measured_pairs(dir: &Path) -> Result<Vec<(PathBuf, PathBuf)>> {
    let entries = fs::read_dir(dir)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", dir.display())))?;
    let mut pairs = Vec::new();
    for entry in entries {
        let path = entry?.path();
        if path.extension().is_some_and(|e| e == "csv") {
            let spec = path.with_extension("json");
            if spec.is_file() {
                pairs.push((path, spec));
            }
        }
    }
    pairs.sort();
    Ok(pairs)
}

fn load_measured(csv: &Path, json: &Path) -> Result<MeasuredCurve> {
    let read = |p: &Path| {
        fs::read_to_string(p)
            .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", p.display())))
    };
    let mut turbine: PartialTurbineSpec = serde_json::from_str(&read(json)?)?;
    if turbine.name.is_none() {
        turbine.name = csv.file_stem().map(|s| s.to_string_lossy().into_owned());
    }
    let samples = read_curve_csv(read(csv)?.as_bytes())?;
    MeasuredCurve::new(turbine, samples)
}

pub fn validate(args: &ValidateArgs) -> Result<()> {
    let pairs = measured_pairs(&args.dir)?;
    if pairs.is_empty() {
        return Err(Error::InvalidInput(format!(
            "no <name>.csv + <name>.json pairs in {}",
            args.dir.display()
        )));
    }
    let ti_grid = parse_list(&args.ti_grid)?;
    let options = MatchOptions {
        cp_model: args.cp_model.clone(),
        rho: args.rho,
        ..Default::default()
    };
    let mut entries = Vec::with_capacity(pairs.len());
    for (csv, json) in &pairs {
        let m = load_measured(csv, json)?;
        let entry = match_over_ti(&m, &ti_grid, &options)?;
        if entry.betz_violation {
            warn(&format!(
                "{}: extracted Cp exceeds the Betz limit",
                entry.name
            ));
        }
        if entry.shape_anomaly {
            warn(&format!(
                "{}: poor fit at every TI (rmse {:.3})",
                entry.name, entry.rmse_best
            ));
        }
        entries.push(entry);
    }
    let report = ValidationReport::from_entries(entries);
    write_file(
        &args.report,
        &(serde_json::to_string_pretty(&report)? + "\n"),
    )?;
    write_file(&args.summary, &report.summary_csv())
}
