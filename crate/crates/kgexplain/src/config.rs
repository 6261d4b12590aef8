//! Run configuration: a flat JSON object whose keys mirror the command-line
//! flags in camelCase. Built-in defaults < config file < flags.

use std::collections::BTreeMap;

use serde::Deserialize;
use serde_json::Value;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("malformed config: {0}")]
    Json(#[from] serde_json::Error),
    #[error("config must be a flat JSON object; `{0}` is nested")]
    Nested(String),
    #[error("config key `beamWidth`: expected a positive integer, \"inf\" or null")]
    Beam,
}

/// Every key is optional. Keys are shared between subcommands; a key that a
/// subcommand does not use is ignored by it.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FileConfig {
    // mine
    pub theta_pos: Option<f64>,
    pub theta_neg: Option<f64>,
    pub alpha: Option<f64>,
    pub min_support: Option<usize>,
    pub max_dimension: Option<usize>,
    #[serde(skip)]
    pub beam_width: Option<Beam>,
    pub feature: Option<String>,
    pub jobs: Option<usize>,
    // enrich
    pub hops: Option<usize>,
    pub ambiguous: Option<String>,
    pub label_predicates: Option<String>,
    pub radius: Option<usize>,
    // zsl-justify
    pub k: Option<usize>,
    pub attention_hops: Option<usize>,
    pub seed: Option<u64>,
    pub feature_dim: Option<usize>,
    pub slope: Option<f64>,
    pub property_predicates: Option<String>,
    pub subclass_predicate: Option<String>,
    // synth
    pub domains: Option<usize>,
    pub transfers: Option<usize>,
    pub noise_sigma: Option<f64>,
    pub base_score: Option<f64>,
    #[serde(flatten)]
    pub unknown: BTreeMap<String, Value>,
}

/// Beam width: a number of combinations kept per dimension, or unbounded.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Beam {
    Width(usize),
    Unbounded,
}

impl Beam {
    pub fn parse(s: &str) -> Option<Beam> {
        match s {
            "inf" | "none" | "unbounded" => Some(Beam::Unbounded),
            _ => s.parse().ok().filter(|&w| w > 0).map(Beam::Width),
        }
    }

    pub fn width(self) -> Option<usize> {
        match self {
            Beam::Width(w) => Some(w),
            Beam::Unbounded => None,
        }
    }
}

impl std::str::FromStr for Beam {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Beam::parse(s).ok_or_else(|| format!("`{s}` is not a positive integer or `inf`"))
    }
}

/// Parses a config document. Unknown keys come back as warnings.
pub fn parse_config(text: &str) -> Result<(FileConfig, Vec<String>), ConfigError> {
    let mut map: serde_json::Map<String, Value> = serde_json::from_str(text)?;
    if let Some((k, _)) = map.iter().find(|(_, v)| v.is_object() || v.is_array()) {
        return Err(ConfigError::Nested(k.clone()));
    }
    let beam = match map.remove("beamWidth") {
        None => None,
        Some(Value::Null) => Some(Beam::Unbounded),
        Some(Value::String(s)) => Some(Beam::parse(&s).ok_or(ConfigError::Beam)?),
        Some(Value::Number(n)) => Some(
            n.as_u64()
                .filter(|&w| w > 0)
                .map(|w| Beam::Width(w as usize))
                .ok_or(ConfigError::Beam)?,
        ),
        Some(_) => return Err(ConfigError::Beam),
    };
    let mut cfg: FileConfig = serde_json::from_value(Value::Object(map))?;
    cfg.beam_width = beam;
    let warnings = cfg
        .unknown
        .keys()
        .map(|k| format!("unknown config key `{k}` ignored"))
        .collect();
    Ok((cfg, warnings))
}
