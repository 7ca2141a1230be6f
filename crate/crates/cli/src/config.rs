//! Experiment settings: command-line flags over a JSON file over presets.

use std::path::{Path, PathBuf};

use bellwalk::asymptotics::BasisTerm;
use bellwalk::linalg::Qubit;
use bellwalk::measures::{QuadratureSpec, Subsystem};
use bellwalk::presets::{parse_fraction, CoinPreset, SpinPreset};
use bellwalk::{CoinParams, SpinVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::args::{Format, Measure, RunArgs};
use crate::error::CliError;

/// The JSON document accepted by `--config`. Every field is optional.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct ExperimentConfig {
    pub command: Option<String>,
    pub coin: Option<Value>,
    pub initial_spin: Option<Value>,
    pub spin_preset: Option<String>,
    #[serde(rename = "T")]
    pub steps: Option<usize>,
    pub alpha: Option<Value>,
    pub quadrature: Option<QuadratureConfig>,
    pub window: Option<(usize, usize)>,
    pub subsystem: Option<String>,
    pub keep: Option<String>,
    pub measure: Option<Measure>,
    pub input: Option<PathBuf>,
    pub basis_preset: Option<String>,
    pub basis: Option<Vec<BasisTerm>>,
    pub tolerance: Option<f64>,
    pub output_path: Option<PathBuf>,
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct QuadratureConfig {
    pub n_theta: Option<usize>,
    pub n_alpha: Option<usize>,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("bad config {}: {e}", path.display())))
    }
}

/// Fully resolved settings for one run.
#[derive(Debug, Clone)]
pub struct Settings {
    pub command: String,
    pub coin: CoinParams,
    pub coin_preset: Option<CoinPreset>,
    pub spin: SpinVector,
    pub steps: usize,
    pub alpha: f64,
    pub quadrature: QuadratureSpec,
    pub window: Option<(usize, usize)>,
    pub subsystem: Subsystem,
    pub keep: Qubit,
    pub measure: Measure,
    pub input: Option<PathBuf>,
    pub basis: Option<Vec<BasisTerm>>,
    pub tolerance: f64,
    pub output: Option<PathBuf>,
    pub format: Format,
    pub warnings: Vec<String>,
}

/// The part of the settings echoed into JSON output.
#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Meta {
    pub command: String,
    pub version: &'static str,
    pub coin: [f64; 3],
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coin_preset: Option<&'static str>,
    pub initial_spin: [[f64; 2]; 4],
    #[serde(rename = "T")]
    pub steps: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quadrature: Option<QuadratureSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subsystem: Option<Subsystem>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window: Option<(usize, usize)>,
}

impl Settings {
    pub fn meta(&self) -> Meta {
        let cmd = self.command.as_str();
        Meta {
            command: self.command.clone(),
            version: env!("CARGO_PKG_VERSION"),
            coin: [self.coin.x(), self.coin.y(), self.coin.z()],
            coin_preset: self.coin_preset.map(|p| p.name()),
            initial_spin: self.spin.0.map(|a| [a.re, a.im]),
            steps: self.steps,
            alpha: (cmd == "renyi" || (cmd == "fit" && matches!(self.measure, Measure::Srd | Measure::Rre)))
                .then_some(self.alpha),
            quadrature: (cmd == "epower" || (cmd == "fit" && self.measure == Measure::Epower))
                .then_some(self.quadrature),
            subsystem: (cmd == "entropy-series" || (cmd == "fit" && self.measure == Measure::Entropy))
                .then_some(self.subsystem),
            window: self.window,
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

pub fn parse_coin(text: &str) -> Result<(CoinParams, Option<CoinPreset>), CliError> {
    if let Some(p) = CoinPreset::from_name(text.trim()) {
        return Ok((p.params(), Some(p)));
    }
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 3 {
        return Err(usage(format!("coin needs three values x,y,z or a preset, got '{text}'")));
    }
    let v: Vec<f64> = parts
        .iter()
        .map(|p| parse_fraction(p).map_err(|e| usage(e.to_string())))
        .collect::<Result<_, _>>()?;
    let params = CoinParams::new(v[0], v[1], v[2]).map_err(|e| usage(e.to_string()))?;
    Ok((params, None))
}

fn coin_from_json(v: &Value) -> Result<(CoinParams, Option<CoinPreset>), CliError> {
    match v {
        Value::String(s) => parse_coin(s),
        Value::Array(items) if items.len() == 3 => {
            let parts: Vec<String> = items
                .iter()
                .map(|x| match x {
                    Value::Number(n) => Ok(n.to_string()),
                    Value::String(s) => Ok(s.clone()),
                    _ => Err(usage("coin entries must be numbers or fraction strings")),
                })
                .collect::<Result<_, _>>()?;
            parse_coin(&parts.join(","))
        }
        _ => Err(usage("coin must be a preset name, \"x,y,z\" or a 3-element array")),
    }
}

fn parse_complex(text: &str) -> Result<Complex64, CliError> {
    let t = text.trim();
    t.parse::<Complex64>()
        .map_err(|_| usage(format!("cannot parse '{t}' as a complex number")))
}

pub fn parse_spin(text: &str) -> Result<[Complex64; 4], CliError> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 4 {
        return Err(usage(format!("spin needs four components, got '{text}'")));
    }
    let mut out = [Complex64::new(0.0, 0.0); 4];
    for (slot, p) in out.iter_mut().zip(parts) {
        *slot = parse_complex(p)?;
    }
    Ok(out)
}

fn spin_from_json(v: &Value) -> Result<[Complex64; 4], CliError> {
    match v {
        Value::String(s) => parse_spin(s),
        Value::Array(items) if items.len() == 4 => {
            let mut out = [Complex64::new(0.0, 0.0); 4];
            for (slot, item) in out.iter_mut().zip(items) {
                *slot = match item {
                    Value::Number(n) => Complex64::new(n.as_f64().unwrap_or(f64::NAN), 0.0),
                    Value::String(s) => parse_complex(s)?,
                    Value::Array(pair) if pair.len() == 2 => {
                        let re = pair[0].as_f64().ok_or_else(|| usage("spin [re, im] must be numbers"))?;
                        let im = pair[1].as_f64().ok_or_else(|| usage("spin [re, im] must be numbers"))?;
                        Complex64::new(re, im)
                    }
                    _ => return Err(usage("spin entries must be numbers, strings or [re, im]")),
                };
            }
            Ok(out)
        }
        _ => Err(usage("initialSpin must be a string or a 4-element array")),
    }
}

/// Unit-normalizes the parsed spin. Inputs off by more than 1e-6 are
/// rejected; smaller drift is corrected, with a warning above 1e-9.
pub fn normalize_spin(amps: [Complex64; 4], warnings: &mut Vec<String>) -> Result<SpinVector, CliError> {
    let raw = SpinVector::new(amps);
    let norm = raw.norm_sqr().sqrt();
    if !norm.is_finite() || (norm - 1.0).abs() > 1e-6 {
        return Err(usage(format!("initial spin has norm {norm}, expected 1")));
    }
    if (norm - 1.0).abs() > 1e-9 {
        warnings.push(format!("initial spin norm {norm} renormalized to 1"));
    }
    raw.normalized().map_err(|e| usage(e.to_string()))
}

fn parse_window(text: &str) -> Result<(usize, usize), CliError> {
    let (a, b) = text
        .split_once(',')
        .ok_or_else(|| usage(format!("window must be t0,t1, got '{text}'")))?;
    let a: usize = a.trim().parse().map_err(|_| usage(format!("bad window start '{a}'")))?;
    let b: usize = b.trim().parse().map_err(|_| usage(format!("bad window end '{b}'")))?;
    if a > b {
        return Err(usage(format!("window start {a} exceeds end {b}")));
    }
    Ok((a, b))
}

fn parse_alpha_json(v: &Value) -> Result<f64, CliError> {
    match v {
        Value::Number(n) => n.as_f64().ok_or_else(|| usage("alpha is not a number")),
        Value::String(s) => parse_fraction(s).map_err(|e| usage(e.to_string())),
        _ => Err(usage("alpha must be a number or a fraction string")),
    }
}

fn parse_keep(text: &str) -> Result<Qubit, CliError> {
    match text {
        "a" | "A" => Ok(Qubit::A),
        "b" | "B" => Ok(Qubit::B),
        other => Err(usage(format!("keep must be a or b, got '{other}'"))),
    }
}

fn default_steps(command: &str, measure: Measure) -> usize {
    match command {
        "entropy-series" => 1000,
        "epower" | "check-closed-form" => 50,
        "fit" => match measure {
            Measure::Entropy => 1000,
            Measure::Epower => 50,
            Measure::Srd | Measure::Rre => 100,
        },
        _ => 100,
    }
}

pub fn load_basis(path: &Path) -> Result<Vec<BasisTerm>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read basis {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| usage(format!("bad basis {}: {e}", path.display())))
}

pub fn resolve(command: &str, args: &RunArgs) -> Result<Settings, CliError> {
    let file = match &args.config {
        Some(p) => ExperimentConfig::load(p)?,
        None => ExperimentConfig::default(),
    };
    if let Some(c) = &file.command {
        if c != command {
            return Err(usage(format!("config is for '{c}' but the command is '{command}'")));
        }
    }
    let mut warnings = Vec::new();

    let (coin, coin_preset) = match (&args.coin, &file.coin) {
        (Some(s), _) => parse_coin(s)?,
        (None, Some(v)) => coin_from_json(v)?,
        (None, None) => (CoinPreset::P1.params(), Some(CoinPreset::P1)),
    };

    let default_spin = if command == "renyi" || matches!(args.measure.or(file.measure), Some(Measure::Srd | Measure::Rre)) {
        SpinPreset::Renyi
    } else {
        SpinPreset::Initen
    };
    let spin_preset = |name: &str| {
        SpinPreset::from_name(name)
            .map(|p| p.spin().0)
            .ok_or_else(|| usage(format!("unknown spin preset '{name}'")))
    };
    let amps = if let Some(s) = &args.spin {
        parse_spin(s)?
    } else if let Some(p) = &args.spin_preset {
        spin_preset(p)?
    } else if let Some(v) = &file.initial_spin {
        spin_from_json(v)?
    } else if let Some(p) = &file.spin_preset {
        spin_preset(p)?
    } else {
        default_spin.spin().0
    };
    let spin = normalize_spin(amps, &mut warnings)?;

    let measure = args.measure.or(file.measure).unwrap_or(Measure::Entropy);
    let steps = args.steps.or(file.steps).unwrap_or_else(|| default_steps(command, measure));

    let alpha = match (&args.alpha, &file.alpha) {
        (Some(s), _) => parse_fraction(s).map_err(|e| usage(e.to_string()))?,
        (None, Some(v)) => parse_alpha_json(v)?,
        (None, None) => 0.25,
    };

    let fq = file.quadrature.clone().unwrap_or_default();
    let defaults = QuadratureSpec::default();
    let quadrature = QuadratureSpec::new(
        args.n_theta.or(fq.n_theta).unwrap_or(defaults.n_theta),
        args.n_alpha.or(fq.n_alpha).unwrap_or(defaults.n_alpha),
    )
    .map_err(|e| usage(e.to_string()))?;

    let window = match &args.window {
        Some(w) => Some(parse_window(w)?),
        None => file.window,
    };

    let subsystem = match args.subsystem.as_ref().or(file.subsystem.as_ref()) {
        Some(s) => s.parse().map_err(|e: bellwalk::WalkError| usage(e.to_string()))?,
        None => Subsystem::default(),
    };
    let keep = match args.keep.as_ref().or(file.keep.as_ref()) {
        Some(k) => parse_keep(k)?,
        None => Qubit::A,
    };

    let basis = if let Some(p) = &args.basis {
        Some(load_basis(p)?)
    } else if let Some(name) = args.basis_preset.as_ref() {
        Some(preset_basis(name, measure)?)
    } else if let Some(b) = &file.basis {
        Some(b.clone())
    } else if let Some(name) = file.basis_preset.as_ref() {
        Some(preset_basis(name, measure)?)
    } else {
        coin_preset.map(|p| basis_for(p, measure))
    };

    Ok(Settings {
        command: command.to_string(),
        coin,
        coin_preset,
        spin,
        steps,
        alpha,
        quadrature,
        window,
        subsystem,
        keep,
        measure,
        input: args.input.clone().or(file.input),
        basis,
        tolerance: args.tolerance.or(file.tolerance).unwrap_or(1e-10),
        output: args.output.clone().or(file.output_path),
        format: args.format.or(file.format).unwrap_or(Format::Csv),
        warnings,
    })
}

fn basis_for(preset: CoinPreset, measure: Measure) -> Vec<BasisTerm> {
    match measure {
        Measure::Entropy => preset.entropy_basis(),
        Measure::Epower => preset.entangling_power_basis(),
        Measure::Srd | Measure::Rre => preset.renyi_basis(),
    }
}

fn preset_basis(name: &str, measure: Measure) -> Result<Vec<BasisTerm>, CliError> {
    CoinPreset::from_name(name)
        .map(|p| basis_for(p, measure))
        .ok_or_else(|| usage(format!("unknown basis preset '{name}'")))
}
