//! Run configuration: a flat TOML file, validated into typed settings before
//! anything executes.

use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};
use thiserror::Error;

use vbqc::blindness::{BlindnessOptions, Conditioning};
use vbqc::devices::{NoiseParams, PcOffsetMode, ServerBehavior};
use vbqc::protocol::{Algorithm, ProtocolConfig, ProtocolVariant, RoundOptions, SecondMeasurement};
use vbqc::{Angle8, Thresholds};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Missing {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot parse config {path}: {source}")]
    Parse {
        path: PathBuf,
        #[source]
        source: Box<toml::de::Error>,
    },
    #[error("invalid `{field}`: {reason}")]
    Invalid { field: String, reason: String },
}

impl ConfigError {
    /// Stable machine-readable category.
    pub fn kind(&self) -> &'static str {
        match self {
            ConfigError::Missing { .. } => "missing-file",
            ConfigError::Parse { .. } => "parse-error",
            ConfigError::Invalid { .. } => "invalid-value",
        }
    }

    pub fn field(&self) -> Option<&str> {
        match self {
            ConfigError::Invalid { field, .. } => Some(field),
            _ => None,
        }
    }

    fn invalid(field: &str, reason: impl ToString) -> Self {
        ConfigError::Invalid {
            field: field.to_string(),
            reason: reason.to_string(),
        }
    }
}

impl From<vbqc::Error> for ConfigError {
    fn from(e: vbqc::Error) -> Self {
        match e {
            vbqc::Error::InvalidParameter { name, reason } => ConfigError::invalid(name, reason),
            vbqc::Error::IllPosedThresholds(reason) => ConfigError::invalid("omega", reason),
            other => ConfigError::invalid("config", other),
        }
    }
}

/// An angle written either as a three-bit code string or a unit count.
#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(untagged)]
enum AngleValue {
    Units(i64),
    Code(String),
}

impl AngleValue {
    fn resolve(&self, field: &str) -> Result<Angle8, ConfigError> {
        match self {
            AngleValue::Units(k) if (0..8).contains(k) => Ok(Angle8::new(*k as u8)),
            AngleValue::Units(k) => Err(ConfigError::invalid(field, format!("{k} is not in 0..=7"))),
            AngleValue::Code(s) => s.parse().map_err(|e| ConfigError::invalid(field, e)),
        }
    }
}

/// File schema. Every key is optional except `n` and `seed`.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    phi1: Option<AngleValue>,
    phi2: Option<AngleValue>,
    x1: Option<u8>,
    x2: Option<u8>,
    n: Option<u64>,
    test_fraction: Option<f64>,
    omega: Option<f64>,
    nu: Option<f64>,
    k: Option<u32>,
    p: Option<f64>,
    noise: Option<String>,
    v: Option<f64>,
    lambda: Option<f64>,
    lc_err_halfwidth: Option<f64>,
    hwp_err_halfwidth: Option<f64>,
    pc_phase_offset: Option<f64>,
    pc_offset_mode: Option<String>,
    adversary: Option<String>,
    seed: Option<u64>,
    output_dir: Option<PathBuf>,
    variant: Option<String>,
    second_measurement: Option<String>,
    blindness: Option<bool>,
    blindness_delta1: Option<AngleValue>,
    blindness_conditioning: Option<String>,
    blindness_full_averaging: Option<bool>,
}

/// Validated settings for one run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub algorithm: Algorithm,
    pub n: u64,
    pub test_fraction: f64,
    pub thresholds: Thresholds,
    pub noise: NoiseParams,
    #[serde(serialize_with = "as_descriptor")]
    pub adversary: ServerBehavior,
    pub seed: u64,
    pub output_dir: PathBuf,
    pub options: RoundOptions,
    /// `None` skips the blindness analysis.
    pub blindness: Option<BlindnessOptions>,
}

fn as_descriptor<S: serde::Serializer>(b: &ServerBehavior, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(b)
}

impl RunConfig {
    pub fn protocol(&self) -> ProtocolConfig {
        ProtocolConfig {
            alg: self.algorithm,
            n: self.n,
            test_fraction: self.test_fraction,
            noise: self.noise,
            behavior: self.adversary.clone(),
            options: self.options,
        }
    }

    /// Re-checks every cross-field constraint.
    pub fn validate(&self) -> Result<(), ConfigError> {
        self.protocol().validate()?;
        self.thresholds.validate()?;
        Ok(())
    }
}

fn bit(field: &str, v: Option<u8>) -> Result<bool, ConfigError> {
    match v.unwrap_or(0) {
        0 => Ok(false),
        1 => Ok(true),
        other => Err(ConfigError::invalid(field, format!("{other} is not a bit"))),
    }
}

fn required<T>(field: &str, v: Option<T>) -> Result<T, ConfigError> {
    v.ok_or_else(|| ConfigError::invalid(field, "missing required key"))
}

impl RawConfig {
    fn into_config(self, base_dir: &Path) -> Result<RunConfig, ConfigError> {
        let phi = |field: &str, v: &Option<AngleValue>| {
            v.as_ref().map_or(Ok(Angle8::FRAC_PI_2), |a| a.resolve(field))
        };
        let algorithm = Algorithm {
            phi: [phi("phi1", &self.phi1)?, phi("phi2", &self.phi2)?],
            x: [bit("x1", self.x1)?, bit("x2", self.x2)?],
        };

        let mut noise = match self.noise.as_deref().unwrap_or("measured") {
            "measured" => NoiseParams::measured(),
            "ideal" => NoiseParams::ideal(),
            other => {
                return Err(ConfigError::invalid(
                    "noise",
                    format!("unknown preset `{other}` (expected `measured` or `ideal`)"),
                ))
            }
        };
        noise.v = self.v.unwrap_or(noise.v);
        noise.lambda = self.lambda.unwrap_or(noise.lambda);
        noise.lc_err_halfwidth = self.lc_err_halfwidth.unwrap_or(noise.lc_err_halfwidth);
        noise.hwp_err_halfwidth = self.hwp_err_halfwidth.unwrap_or(noise.hwp_err_halfwidth);
        noise.pc_phase_offset = self.pc_phase_offset.unwrap_or(noise.pc_phase_offset);
        if let Some(mode) = self.pc_offset_mode.as_deref() {
            noise.pc_offset_mode = match mode {
                "fixed" => PcOffsetMode::Fixed,
                "random" => PcOffsetMode::Random,
                other => return Err(ConfigError::invalid("pc_offset_mode", format!("unknown mode `{other}`"))),
            };
        }

        let thresholds = Thresholds {
            omega: self.omega.unwrap_or(0.18),
            nu: self.nu.unwrap_or(0.14),
            k: self.k.unwrap_or(2),
            p: self.p.unwrap_or(0.0),
            sigma: 0.0,
        };
        let sigma = vbqc::sigma_threshold(thresholds.k, thresholds.p)?;
        let thresholds = Thresholds { sigma, ..thresholds };

        let adversary = match self.adversary.as_deref() {
            None => ServerBehavior::Honest,
            Some(s) => s.parse().map_err(|e| ConfigError::invalid("adversary", e))?,
        };

        let variant = match self.variant.as_deref().unwrap_or("verifiable") {
            "verifiable" => ProtocolVariant::Verifiable,
            "baseline" => ProtocolVariant::Baseline,
            other => return Err(ConfigError::invalid("variant", format!("unknown variant `{other}`"))),
        };
        let second = match self.second_measurement.as_deref().unwrap_or("pockels-cell") {
            "pockels-cell" => SecondMeasurement::PockelsCell,
            "direct" => SecondMeasurement::Direct,
            other => return Err(ConfigError::invalid("second_measurement", format!("unknown mode `{other}`"))),
        };

        let mut bl = BlindnessOptions::default();
        if let Some(d) = &self.blindness_delta1 {
            bl.delta1 = d.resolve("blindness_delta1")?;
        }
        bl.conditioning = match self.blindness_conditioning.as_deref().unwrap_or("unconditioned") {
            "unconditioned" => Conditioning::Unconditioned,
            "0" => Conditioning::Outcome(false),
            "1" => Conditioning::Outcome(true),
            other => {
                return Err(ConfigError::invalid(
                    "blindness_conditioning",
                    format!("`{other}` is not `unconditioned`, `0` or `1`"),
                ))
            }
        };
        bl.full_averaging = self.blindness_full_averaging.unwrap_or(false);

        let output_dir = self.output_dir.unwrap_or_else(|| PathBuf::from("out"));
        let output_dir = if output_dir.is_relative() { base_dir.join(output_dir) } else { output_dir };

        let cfg = RunConfig {
            algorithm,
            n: required("n", self.n)?,
            test_fraction: self.test_fraction.unwrap_or(0.5),
            thresholds,
            noise,
            adversary,
            seed: required("seed", self.seed)?,
            output_dir,
            options: RoundOptions { variant, second },
            blindness: self.blindness.unwrap_or(false).then_some(bl),
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Parses TOML text; relative `output_dir`s resolve against `base_dir`.
pub fn parse_config(text: &str, path: &Path, base_dir: &Path) -> Result<RunConfig, ConfigError> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| ConfigError::Parse {
        path: path.to_path_buf(),
        source: Box::new(e),
    })?;
    raw.into_config(base_dir)
}

/// Reads and validates a config file. A relative `output_dir` is taken
/// relative to the file's directory.
pub fn load_config(path: &Path) -> Result<RunConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Missing {
        path: path.to_path_buf(),
        source,
    })?;
    parse_config(&text, path, path.parent().unwrap_or(Path::new("")))
}

/// Command-line replacements for config values, echoed into the summary.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Overrides {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rounds: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub adversary: Option<String>,
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub blindness: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

impl Overrides {
    pub fn apply(&self, mut cfg: RunConfig) -> Result<RunConfig, ConfigError> {
        if let Some(seed) = self.seed {
            cfg.seed = seed;
        }
        if let Some(n) = self.rounds {
            cfg.n = n;
        }
        if let Some(omega) = self.omega {
            cfg.thresholds.omega = omega;
        }
        if let Some(a) = &self.adversary {
            cfg.adversary = a.parse().map_err(|e| ConfigError::invalid("adversary", e))?;
        }
        if self.blindness && cfg.blindness.is_none() {
            cfg.blindness = Some(BlindnessOptions::default());
        }
        if let Some(out) = &self.out {
            cfg.output_dir = out.clone();
        }
        cfg.validate()?;
        Ok(cfg)
    }
}
