//! Run configuration: JSON ingestion with defaults, validation with field
//! paths, dotted-path overrides, and the built-in parameter presets.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::atom::AtomParams;
use crate::cavity::CavityParams;
use crate::spectra::ScanGrid;
use crate::susceptibility::SusceptibilityModel;

/// Data file format for the CLI writers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OutputFormat {
    #[serde(rename = "csv")]
    Csv,
    #[serde(rename = "json")]
    Json,
}

/// Output routing: data format/path, optional SVG plot, peak normalization
/// for the plot ordinate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    pub format: OutputFormat,
    /// Data destination; stdout when absent.
    pub path: Option<String>,
    pub plot_path: Option<String>,
    /// Scale plotted series so the maximum ordinate is exactly 1.
    pub normalize_peak: bool,
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig {
            format: OutputFormat::Csv,
            path: None,
            plot_path: None,
            normalize_peak: false,
        }
    }
}

/// Complete description of a run: atom, susceptibility model, cavity, scan
/// grid and output routing. Every field has a documented default, so `{}` is
/// a valid configuration.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub atom: AtomParams,
    pub model: SusceptibilityModel,
    pub cavity: CavityParams,
    pub scan: ScanGrid,
    pub output: OutputConfig,
}

impl RunConfig {
    /// Check every nested invariant, reporting the dotted field path of the
    /// first violation.
    pub fn validate(&self) -> Result<(), ConfigError> {
        let scope = |prefix: &str, e: crate::atom::ParamError| ConfigError::Validation {
            path: format!("{prefix}.{}", e.field),
            message: e.message,
        };
        self.atom.validate().map_err(|e| scope("atom", e))?;
        self.model.validate().map_err(|e| scope("model", e))?;
        self.cavity.validate().map_err(|e| scope("cavity", e))?;
        self.scan.validate().map_err(|e| scope("scan", e))?;
        Ok(())
    }
}

/// Loading/validation failures with position or field-path context.
#[derive(Debug, Clone, Error)]
pub enum ConfigError {
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{path}: {message}")]
    Validation { path: String, message: String },
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
}

fn from_serde(err: serde_json::Error) -> ConfigError {
    match err.classify() {
        serde_json::error::Category::Syntax | serde_json::error::Category::Eof => {
            ConfigError::Parse {
                line: err.line(),
                column: err.column(),
                message: err.to_string(),
            }
        }
        _ => ConfigError::Validation {
            path: String::new(),
            message: err.to_string(),
        },
    }
}

/// Parse and validate a configuration document (JSON object; `{}` gives all
/// defaults). Unknown keys are rejected with the offending key named.
pub fn load_config_str(text: &str) -> Result<RunConfig, ConfigError> {
    let config: RunConfig = serde_json::from_str(text).map_err(from_serde)?;
    config.validate()?;
    Ok(config)
}

/// [`load_config_str`] on a file. The path may also name a preset (see
/// [`preset`]); preset names take precedence over files of the same name.
pub fn load_config_file(path: &str) -> Result<RunConfig, ConfigError> {
    if let Some(config) = preset(path) {
        return Ok(config);
    }
    let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io {
        path: path.to_string(),
        message: e.to_string(),
    })?;
    load_config_str(&text)
}

/// Parse a configuration with dotted-path `--set` overrides applied on top
/// (overrides beat the document, the document beats defaults).
pub fn load_config_with_overrides(
    base: &str,
    sets: &[(String, String)],
) -> Result<RunConfig, ConfigError> {
    let mut value: serde_json::Value = if let Some(preset_config) = preset(base) {
        serde_json::to_value(&preset_config).expect("preset serializes")
    } else {
        serde_json::from_str(base).map_err(from_serde)?
    };
    if !value.is_object() {
        return Err(ConfigError::Validation {
            path: String::new(),
            message: "configuration must be a JSON object".to_string(),
        });
    }
    for (path, raw) in sets {
        let mut cursor = &mut value;
        let mut segments = path.split('.').peekable();
        while let Some(segment) = segments.next() {
            if segment.is_empty() {
                return Err(ConfigError::Validation {
                    path: path.clone(),
                    message: "empty segment in override path".to_string(),
                });
            }
            let obj = cursor
                .as_object_mut()
                .ok_or_else(|| ConfigError::Validation {
                    path: path.clone(),
                    message: "override path descends into a non-object value".to_string(),
                })?;
            if segments.peek().is_none() {
                let parsed: serde_json::Value = serde_json::from_str(raw)
                    .unwrap_or_else(|_| serde_json::Value::String(raw.clone()));
                obj.insert(segment.to_string(), parsed);
                break;
            }
            cursor = obj
                .entry(segment.to_string())
                .or_insert_with(|| serde_json::Value::Object(Default::default()));
        }
    }
    let config: RunConfig = serde_json::from_value(value).map_err(from_serde)?;
    config.validate()?;
    Ok(config)
}

/// The eight built-in parameter sets. fig2x and fig4x share parameters (the
/// transmission figures use the susceptibility figures' atoms); they differ
/// only in which quantity one usually plots from them.
pub const PRESET_NAMES: [&str; 8] = [
    "fig2a", "fig2b", "fig2c", "fig2d", "fig4a", "fig4b", "fig4c", "fig4d",
];

/// Look up a built-in preset by name.
///
/// - `fig2a`/`fig4a`: double dark, Ω1 = 2, Ω2 = 0.3, Δ1 = −Δ2 = −1
/// - `fig2b`/`fig4b`: as (a) but Δ2 = 3
/// - `fig2c`/`fig4c`: as (a) but Ω2 = 2 (symmetric controls)
/// - `fig2d`/`fig4d`: single dark, Ω2 = 0, Δ1 = Δ2 = 0
pub fn preset(name: &str) -> Option<RunConfig> {
    let base = RunConfig::default();
    let atom = match name {
        "fig2a" | "fig4a" => AtomParams::default(),
        "fig2b" | "fig4b" => AtomParams {
            delta2: 3.0,
            ..AtomParams::default()
        },
        "fig2c" | "fig4c" => AtomParams {
            omega2: 2.0,
            ..AtomParams::default()
        },
        "fig2d" | "fig4d" => AtomParams {
            omega2: 0.0,
            delta1: 0.0,
            delta2: 0.0,
            ..AtomParams::default()
        },
        _ => return None,
    };
    Some(RunConfig { atom, ..base })
}
