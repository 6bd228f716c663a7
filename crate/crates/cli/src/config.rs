use std::path::Path;

use anyhow::Context;
use persym::{Connectivity, Transform};
use serde::Deserialize;

/// Values read from `--config FILE`. Every field present in the file
/// overrides the matching command-line flag.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub method: Option<Method>,
    pub k: Option<usize>,
    pub seed: Option<u64>,
    pub connectivity: Option<Connectivity>,
    pub block: Option<usize>,
    pub range: Option<[f64; 2]>,
    pub label: Option<String>,
    pub weights: Option<Vec<f64>>,
    pub optimize: Option<bool>,
    pub positive: Option<String>,
    pub neighbors: Option<usize>,
    pub grid_step: Option<f64>,
    pub count: Option<usize>,
    pub points: Option<usize>,
    pub noise_fraction: Option<f64>,
    pub prefix: Option<String>,
    pub sequential: Option<bool>,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> anyhow::Result<Self> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path).with_context(|| format!("{}", path.display()))?;
        let config = serde_json::from_str(&text)
            .map_err(persym::Error::from)
            .with_context(|| format!("{}", path.display()))?;
        Ok(config)
    }
}

pub fn set<T>(slot: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *slot = v;
    }
}

/// Distance method: the exact bottleneck distance or one of the two
/// symmetric-function surrogates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
pub enum Method {
    #[serde(rename = "bottleneck")]
    #[value(name = "bottleneck")]
    Bottleneck,
    #[value(name = "T", alias = "t")]
    T,
    #[value(name = "R", alias = "r")]
    R,
}

impl Method {
    pub fn transform(self) -> Option<Transform> {
        match self {
            Method::Bottleneck => None,
            Method::T => Some(Transform::T),
            Method::R => Some(Transform::R),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Method::Bottleneck => "bottleneck",
            Method::T => "T",
            Method::R => "R",
        }
    }
}
