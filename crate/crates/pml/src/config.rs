//! Layered settings: built-in defaults, then a JSON config file, then flags.
//!
//! Every layer is a flat JSON object with snake_case keys. Flags are
//! serialized with unset values skipped, so only flags actually given
//! override the lower layers. A run manifest is also accepted as a config
//! file; its `config` object is used.

use std::path::Path;

use pml_core::montecarlo::{CurveFamily, CurveSpec, ExperimentConfig, SourceDistribution, SourceKind};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{CliError, CliResult};

pub fn load_config_file(path: &Path) -> CliResult<Map<String, Value>> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let value: Value = serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("--config {}: {e}", path.display())))?;
    let Value::Object(mut map) = value else {
        return Err(CliError::Usage(format!(
            "--config {}: expected a JSON object",
            path.display()
        )));
    };
    if let Some(Value::Object(inner)) = map.remove("config") {
        return Ok(inner);
    }
    Ok(map)
}

/// Merges `defaults < config < flags` and deserializes the result.
pub fn resolve<T, F>(defaults: Value, config: Option<&Map<String, Value>>, flags: &F) -> CliResult<T>
where
    T: DeserializeOwned,
    F: Serialize,
{
    let Value::Object(mut merged) = defaults else {
        unreachable!("defaults are always an object");
    };
    let known: Vec<String> = merged.keys().cloned().collect();
    if let Some(config) = config {
        for (k, v) in config {
            // other subcommands' keys may share the file
            if known.contains(k) {
                merged.insert(k.clone(), v.clone());
            }
        }
    }
    if let Value::Object(flags) = serde_json::to_value(flags)? {
        for (k, v) in flags {
            if !v.is_null() {
                merged.insert(k, v);
            }
        }
    }
    serde_json::from_value(Value::Object(merged)).map_err(|e| CliError::Usage(format!("configuration: {e}")))
}

/// Curve selection after layering.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CurveSettings {
    pub family: String,
    pub gamma: f64,
    pub b: Option<f64>,
    pub delta: f64,
    pub simple: bool,
}

impl CurveSettings {
    pub fn defaults(family: &str) -> Value {
        serde_json::json!({
            "family": family,
            "gamma": 1.0,
            "b": null,
            "delta": 0.3,
            "simple": false,
        })
    }

    pub fn spec(&self) -> CliResult<CurveSpec> {
        let family = parse_family(&self.family)?;
        Ok(CurveSpec {
            family,
            gamma: self.gamma,
            b: self.b,
            delta: self.delta,
            simple: self.simple,
        })
    }
}

pub fn parse_family(name: &str) -> CliResult<CurveFamily> {
    match name {
        "poly" => Ok(CurveFamily::Poly),
        "log" => Ok(CurveFamily::Log),
        "exp" => Ok(CurveFamily::Exp),
        "circle" => Ok(CurveFamily::Circle),
        "kink" => Ok(CurveFamily::Kink),
        other => Err(CliError::Usage(format!(
            "invalid value '{other}' for --family: expected poly, log, exp, circle or kink"
        ))),
    }
}

pub fn parse_source_kind(name: &str) -> CliResult<SourceKind> {
    match name {
        "normal_y" => Ok(SourceKind::NormalY),
        "normal_xy" => Ok(SourceKind::NormalXY),
        "uniform_y" => Ok(SourceKind::UniformY),
        "point_mass_x0" => Ok(SourceKind::PointMassX0),
        other => Err(CliError::Usage(format!(
            "invalid value '{other}' for --dist: expected normal_y, normal_xy, uniform_y or point_mass_x0"
        ))),
    }
}

/// Curve, source and replicate settings of a simulation after layering.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ExperimentSettings {
    #[serde(flatten)]
    pub curve: CurveSettings,
    pub dist: String,
    pub sigma: f64,
    pub sigma_x: f64,
    pub correlation: f64,
    pub n: u64,
    pub reps: u64,
    pub seed: u64,
    pub shortcut: bool,
}

impl ExperimentSettings {
    pub fn defaults(family: &str, sigma: f64, n: u64, reps: u64) -> Value {
        let mut v = CurveSettings::defaults(family);
        let extra = serde_json::json!({
            "dist": "normal_y",
            "sigma": sigma,
            "sigma_x": 0.0,
            "correlation": 0.0,
            "n": n,
            "reps": reps,
            "seed": 0,
            "shortcut": true,
        });
        v.as_object_mut().unwrap().extend(extra.as_object().unwrap().clone());
        v
    }

    pub fn experiment(&self) -> CliResult<ExperimentConfig> {
        let source = SourceDistribution::new(
            parse_source_kind(&self.dist)?,
            self.sigma,
            self.sigma_x,
            self.correlation,
        )?;
        let mut cfg = ExperimentConfig::new(self.curve.spec()?, source, self.n, self.reps, self.seed);
        cfg.gaussian_shortcut = self.shortcut;
        cfg.validate()?;
        Ok(cfg)
    }
}
