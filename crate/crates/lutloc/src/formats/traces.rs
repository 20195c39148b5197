use std::path::Path;

use lutloc_core::{LookupMap, QueryRecord, Signal, TraceRun};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fsio;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QueryLine {
    pub seq: usize,
    pub point: Vec<f64>,
    /// Grid coordinates of every entry read.
    pub depends: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelLine {
    pub t: Vec<f64>,
    pub v: Vec<f64>,
}

/// Channels keyed by name, kept in the order they were recorded.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Channels(pub Vec<(String, ChannelLine)>);

impl Serialize for Channels {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut m = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            m.serialize_entry(k, v)?;
        }
        m.end()
    }
}

impl<'de> Deserialize<'de> for Channels {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl<'de> serde::de::Visitor<'de> for V {
            type Value = Channels;
            fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
                f.write_str("a map from channel name to {\"t\", \"v\"}")
            }
            fn visit_map<A: serde::de::MapAccess<'de>>(self, mut a: A) -> std::result::Result<Channels, A::Error> {
                let mut out = Vec::new();
                while let Some(entry) = a.next_entry()? {
                    out.push(entry);
                }
                Ok(Channels(out))
            }
        }
        d.deserialize_map(V)
    }
}

/// One line of a trace file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunLine {
    pub id: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub score: Option<f64>,
    pub queries: Vec<QueryLine>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub signals: Option<Channels>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub diverged: bool,
}

impl RunLine {
    pub fn from_run(run: &TraceRun, map: &LookupMap) -> Self {
        let queries = run
            .queries
            .iter()
            .map(|q| QueryLine {
                seq: q.seq,
                point: q.point.clone(),
                depends: q.depends.iter().map(|&e| map.entry_index(e).0).collect(),
            })
            .collect();
        let signals = run.signals.as_ref().map(|s| {
            Channels(
                s.channel_names()
                    .iter()
                    .map(|n| (n.clone(), ChannelLine { t: s.times().to_vec(), v: s.channel(n).unwrap().to_vec() }))
                    .collect(),
            )
        });
        Self { id: run.id, score: run.score, queries, signals, diverged: run.diverged }
    }

    pub fn into_run(self, map: &LookupMap) -> std::result::Result<TraceRun, String> {
        let mut queries = Vec::with_capacity(self.queries.len());
        for q in self.queries {
            if q.point.len() != map.dims() {
                return Err(format!("query {} has {} coordinates, map has {}", q.seq, q.point.len(), map.dims()));
            }
            let mut depends = q
                .depends
                .iter()
                .map(|c| super::entry_index(map, c))
                .collect::<lutloc_core::Result<Vec<_>>>()
                .map_err(|e| format!("query {}: {e}", q.seq))?;
            depends.sort_unstable();
            depends.dedup();
            queries.push(QueryRecord { seq: q.seq, point: q.point, depends });
        }
        let signals = match self.signals {
            None => None,
            Some(Channels(chans)) => {
                let times = chans.first().map(|(_, c)| c.t.clone()).unwrap_or_default();
                let mut sig = Signal::new(times).map_err(|e| e.to_string())?;
                for (name, c) in chans {
                    if c.t != sig.times() {
                        return Err(format!("channel `{name}` does not share the time base of the first channel"));
                    }
                    sig.push_channel(name, c.v).map_err(|e| e.to_string())?;
                }
                Some(sig)
            }
        };
        if let Some(s) = self.score {
            if !s.is_finite() {
                return Err("score must be finite".into());
            }
        }
        Ok(TraceRun { id: self.id, queries, score: self.score, signals, diverged: self.diverged })
    }
}

/// One compact JSON object per run, in the given order.
pub fn traces_jsonl(runs: &[TraceRun], map: &LookupMap) -> String {
    let mut out = String::new();
    for r in runs {
        out.push_str(&serde_json::to_string(&RunLine::from_run(r, map)).expect("serializable"));
        out.push('\n');
    }
    out
}

pub fn write_traces(path: &Path, runs: &[TraceRun], map: &LookupMap) -> Result<()> {
    fsio::write_atomic(path, traces_jsonl(runs, map).as_bytes())
}

pub fn parse_traces(text: &str, map: &LookupMap) -> std::result::Result<Vec<TraceRun>, String> {
    let mut runs = Vec::new();
    for (k, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let rl: RunLine = serde_json::from_str(line).map_err(|e| format!("line {}: {e}", k + 1))?;
        runs.push(rl.into_run(map).map_err(|e| format!("line {}: {e}", k + 1))?);
    }
    Ok(runs)
}

pub fn read_traces(path: &Path, map: &LookupMap) -> Result<Vec<TraceRun>> {
    let text = fsio::read_to_string(path)?;
    parse_traces(&text, map).map_err(|e| Error::format(path, e))
}
