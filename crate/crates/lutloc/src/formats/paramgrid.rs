use std::path::Path;

use lutloc_core::sim::{ParamGridSpec, ParamSample};
use serde::{Deserialize, Serialize};

use super::{from_json, to_json};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleLine {
    pub params: Vec<f64>,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamGridFile {
    pub bounds: Vec<(f64, f64)>,
    /// Cells per dimension.
    pub counts: Vec<usize>,
    #[serde(default)]
    pub samples: Vec<SampleLine>,
}

impl ParamGridFile {
    pub fn from_spec(spec: &ParamGridSpec) -> Self {
        Self {
            bounds: spec.bounds.clone(),
            counts: spec.counts.clone(),
            samples: spec.samples.iter().map(|s| SampleLine { params: s.params.clone(), score: s.score }).collect(),
        }
    }

    pub fn into_spec(self) -> lutloc_core::Result<ParamGridSpec> {
        let mut spec = ParamGridSpec::new(self.bounds, self.counts)?;
        spec.samples = self.samples.into_iter().map(|s| ParamSample { params: s.params, score: s.score }).collect();
        spec.validate()?;
        Ok(spec)
    }
}

pub fn paramgrid_json(spec: &ParamGridSpec) -> String {
    to_json(&ParamGridFile::from_spec(spec))
}

pub fn read_paramgrid(path: &Path) -> Result<ParamGridSpec> {
    let file: ParamGridFile = from_json(path)?;
    file.into_spec().map_err(|e| Error::format(path, e))
}
