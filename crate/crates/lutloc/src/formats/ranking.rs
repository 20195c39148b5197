use std::path::Path;

use lutloc_core::{AffectConfig, AffectMode, Aggregation, DistanceMode, LookupMap, RankingResult, ScoreShift};
use serde::{Deserialize, Serialize};

use super::{from_json, to_json, Real};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigFile {
    pub mode: String,
    pub lambda: f64,
    pub radius: Real,
    pub aggregation: String,
    pub distance: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShiftFile {
    pub neg_shift: f64,
    pub pos_shift: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedEntry {
    pub index: Vec<usize>,
    pub score: Real,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankingFile {
    pub heuristic: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    pub config: ConfigFile,
    pub shift: ShiftFile,
    /// Most suspicious first.
    pub entries: Vec<RankedEntry>,
}

impl RankingFile {
    pub fn from_ranking(r: &RankingResult, map: &LookupMap) -> Self {
        Self {
            heuristic: r.heuristic.clone(),
            gamma: r.gamma,
            config: ConfigFile {
                mode: r.config.mode.name().into(),
                lambda: r.config.lambda,
                radius: Real::from_f64(r.config.radius),
                aggregation: r.config.aggregation.name().into(),
                distance: r.config.distance.name().into(),
            },
            shift: ShiftFile { neg_shift: r.shift.neg_shift, pos_shift: r.shift.pos_shift },
            entries: r
                .order
                .iter()
                .map(|&e| RankedEntry { index: map.entry_index(e).0, score: Real::from_f64(r.scores[e]) })
                .collect(),
        }
    }

    pub fn into_ranking(self, map: &LookupMap) -> std::result::Result<RankingResult, String> {
        let c = &self.config;
        let config = AffectConfig {
            mode: AffectMode::from_name(&c.mode).ok_or_else(|| format!("unknown mode `{}`", c.mode))?,
            lambda: c.lambda,
            radius: c.radius.to_f64().ok_or("radius must be a number or \"inf\"")?,
            aggregation: Aggregation::from_name(&c.aggregation)
                .ok_or_else(|| format!("unknown aggregation `{}`", c.aggregation))?,
            distance: DistanceMode::from_name(&c.distance).ok_or_else(|| format!("unknown distance `{}`", c.distance))?,
        };
        if self.entries.len() != map.len() {
            return Err(format!("ranking lists {} entries, map has {}", self.entries.len(), map.len()));
        }
        let mut scores = vec![f64::NAN; map.len()];
        let mut order = Vec::with_capacity(map.len());
        for e in &self.entries {
            let flat = super::entry_index(map, &e.index).map_err(|err| err.to_string())?;
            if !scores[flat].is_nan() {
                return Err(format!("entry {:?} listed twice", e.index));
            }
            scores[flat] = e.score.to_f64().ok_or("score must be a number or \"inf\"/\"-inf\"")?;
            order.push(flat);
        }
        Ok(RankingResult {
            heuristic: self.heuristic,
            gamma: self.gamma,
            config,
            shift: ScoreShift { neg_shift: self.shift.neg_shift, pos_shift: self.shift.pos_shift },
            scores,
            order,
        })
    }
}

pub fn ranking_json(r: &RankingResult, map: &LookupMap) -> String {
    to_json(&RankingFile::from_ranking(r, map))
}

pub fn read_ranking(path: &Path, map: &LookupMap) -> Result<RankingResult> {
    let file: RankingFile = from_json(path)?;
    file.into_ranking(map).map_err(|e| Error::format(path, e))
}
