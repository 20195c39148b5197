use std::path::Path;

use lutloc_core::{GridAxis, LookupMap, Scheme};
use serde::{Deserialize, Serialize};

use super::{from_json, to_json};
use crate::error::{Error, Result};
use crate::fsio;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MapFile {
    pub axes: Vec<Vec<f64>>,
    /// Row-major, last axis fastest.
    pub values: Vec<f64>,
    #[serde(default = "default_scheme")]
    pub scheme: String,
}

fn default_scheme() -> String {
    Scheme::default().name().into()
}

impl MapFile {
    pub fn from_map(map: &LookupMap) -> Self {
        Self {
            axes: map.axes().iter().map(|a| a.breakpoints().to_vec()).collect(),
            values: map.values().to_vec(),
            scheme: map.scheme().name().into(),
        }
    }

    pub fn into_map(self) -> lutloc_core::Result<LookupMap> {
        let scheme = Scheme::from_name(&self.scheme)
            .ok_or_else(|| lutloc_core::Error::InvalidMap(format!("unknown scheme `{}`", self.scheme)))?;
        let axes = self.axes.into_iter().map(GridAxis::new).collect::<lutloc_core::Result<Vec<_>>>()?;
        LookupMap::new(axes, self.values, scheme)
    }
}

pub fn map_json(map: &LookupMap) -> String {
    to_json(&MapFile::from_map(map))
}

pub fn read_map(path: &Path) -> Result<LookupMap> {
    let file: MapFile = from_json(path)?;
    file.into_map().map_err(|e| Error::format(path, e))
}

pub fn write_map(path: &Path, map: &LookupMap) -> Result<()> {
    fsio::write_atomic(path, map_json(map).as_bytes())
}
