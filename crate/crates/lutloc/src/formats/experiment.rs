//! Experiment description.
//!
//! ```toml
//! model = "toy1"        # or "toy2"
//! runs = 100
//! seed = 1
//! # optional, model defaults otherwise
//! dt = 0.1
//! horizon = 30.0
//! ramp = true
//! bug = true            # apply the model's built-in fault
//! formulas = ["alw[0,30](y2 <= 30)"]
//!
//! [[faults]]            # extra edits, applied after the built-in fault
//! index = [19]
//! set = 0.8             # or: scale = -2.0
//! ```

use std::path::Path;

use lutloc_core::lutmap::{EditKind, FaultEdit};
use lutloc_core::sim::{ExperimentConfig, Model};
use lutloc_core::EntryIndex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fsio;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FaultLine {
    pub index: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub set: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scale: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentFile {
    pub model: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub runs: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub horizon: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ramp: Option<bool>,
    #[serde(default = "yes")]
    pub bug: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub formulas: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub faults: Vec<FaultLine>,
}

fn yes() -> bool {
    true
}

impl ExperimentFile {
    pub fn into_config(self) -> std::result::Result<ExperimentConfig, String> {
        let seed = self.seed.unwrap_or(0);
        let mut cfg = match Model::from_name(&self.model) {
            Some(Model::Toy1) => ExperimentConfig::toy1(seed),
            Some(Model::Toy2) => ExperimentConfig::toy2(seed),
            Some(Model::ExternalTrace) => return Err("external-trace experiments cannot be simulated".into()),
            None => return Err(format!("unknown model `{}`", self.model)),
        };
        if !self.bug {
            cfg.faults.clear();
        }
        for f in self.faults {
            let kind = match (f.set, f.scale) {
                (Some(v), None) => EditKind::Set(v),
                (None, Some(k)) => EditKind::Scale(k),
                _ => return Err(format!("fault {:?} needs exactly one of `set` or `scale`", f.index)),
            };
            cfg.faults.push(FaultEdit { index: EntryIndex(f.index), kind });
        }
        if let Some(n) = self.runs {
            cfg.n_runs = n;
        }
        if let Some(dt) = self.dt {
            cfg.dt = dt;
        }
        if let Some(h) = self.horizon {
            cfg.horizon = h;
        }
        if let Some(r) = self.ramp {
            cfg.ramp = r;
        }
        if let Some(fs) = self.formulas {
            cfg.formulas = fs;
        }
        cfg.validate().map_err(|e| e.to_string())?;
        cfg.map().map_err(|e| e.to_string())?;
        cfg.parsed_formulas().map_err(|e| e.to_string())?;
        Ok(cfg)
    }
}

pub fn parse_experiment(text: &str) -> std::result::Result<ExperimentConfig, String> {
    let file: ExperimentFile = toml::from_str(text).map_err(|e| e.to_string())?;
    file.into_config()
}

pub fn read_experiment(path: &Path) -> Result<ExperimentConfig> {
    parse_experiment(&fsio::read_to_string(path)?).map_err(|e| Error::format(path, e))
}
