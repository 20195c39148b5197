//! On-disk formats.
//!
//! | file | format |
//! |------|--------|
//! | map | JSON `{"axes": [[..], ..], "values": [..], "scheme": "multilinear"}`, values row-major |
//! | traces | JSON lines, one run per line |
//! | ranking | JSON, entries most suspicious first, `"inf"` for infinite scores |
//! | spectra | JSON report of `sus_U`, `sus_IU`, `M_F`, `M_S` |
//! | buggy set | JSON array of index tuples |
//! | parameter samples | JSON `{"bounds", "counts", "samples"}` |
//! | experiment | TOML, see [`experiment`] |
//! | signal | CSV, first column time, one column per channel |
//! | formula | plain text in the grammar of `lutloc_core::stl::parse` |

pub mod experiment;
pub mod map;
pub mod paramgrid;
pub mod ranking;
pub mod signal;
pub mod spectra;
pub mod traces;

use std::path::Path;

use lutloc_core::{EntryIndex, LookupMap};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fsio;

pub use experiment::{read_experiment, ExperimentFile};
pub use map::{read_map, write_map};
pub use paramgrid::read_paramgrid;
pub use ranking::{read_ranking, ranking_json};
pub use signal::{read_signal_csv, signal_csv};
pub use spectra::spectra_json;
pub use traces::{read_traces, traces_jsonl};

/// A real that may be infinite: finite values are JSON numbers, infinities
/// are the strings `"inf"` and `"-inf"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Real {
    Num(f64),
    Text(String),
}

impl Real {
    pub fn from_f64(x: f64) -> Self {
        if x.is_finite() {
            Real::Num(x)
        } else if x > 0.0 {
            Real::Text("inf".into())
        } else {
            Real::Text("-inf".into())
        }
    }

    pub fn to_f64(&self) -> Option<f64> {
        match self {
            Real::Num(x) => Some(*x),
            Real::Text(s) => match s.as_str() {
                "inf" | "+inf" => Some(f64::INFINITY),
                "-inf" => Some(f64::NEG_INFINITY),
                _ => None,
            },
        }
    }
}

pub(crate) fn entry_index(map: &LookupMap, coords: &[usize]) -> lutloc_core::Result<usize> {
    map.flat_index(&EntryIndex(coords.to_vec()))
}

pub(crate) fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

pub(crate) fn from_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fsio::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| Error::format(path, e))
}

/// Reads a ground-truth set of faulty entries.
pub fn read_buggy(path: &Path, map: &LookupMap) -> Result<lutloc_core::exam::BuggySet> {
    let tuples: Vec<Vec<usize>> = from_json(path)?;
    let idx: Vec<EntryIndex> = tuples.into_iter().map(EntryIndex).collect();
    Ok(lutloc_core::exam::BuggySet::new(map, &idx)?)
}

pub fn buggy_json(map: &LookupMap, set: &lutloc_core::exam::BuggySet) -> String {
    let tuples: Vec<Vec<usize>> = set.entries().iter().map(|&e| map.entry_index(e).0).collect();
    to_json(&tuples)
}

pub fn read_formula(path: &Path) -> Result<lutloc_core::Formula> {
    let text = fsio::read_to_string(path)?;
    let body: String = text.lines().filter(|l| !l.trim_start().starts_with('#')).collect::<Vec<_>>().join("\n");
    body.parse().map_err(|e: lutloc_core::Error| Error::format(path, e))
}
