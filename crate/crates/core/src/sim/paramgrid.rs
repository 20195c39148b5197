//! Localization over a gridded parameter space.
//!
//! A box of parameters is split into equal cells. Each sampled parameter
//! vector becomes a run with a single query, so the usual rankers tell which
//! cells the failing samples concentrate in. Ranking the negated scores
//! instead looks for cells where the behavior is good.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::lutmap::{GridAxis, LookupMap, Scheme};
use crate::rankers::{rank, Heuristic, RankingResult, ScoreShift};
use crate::traces::{AffectConfig, TraceRun};

/// A sampled parameter vector and its score (negative = failing).
#[derive(Debug, Clone, PartialEq)]
pub struct ParamSample {
    pub params: Vec<f64>,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParamGridSpec {
    /// Closed interval per dimension.
    pub bounds: Vec<(f64, f64)>,
    /// Number of cells per dimension.
    pub counts: Vec<usize>,
    pub samples: Vec<ParamSample>,
}

/// What the ranking looks for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Objective {
    /// Cells where failures concentrate.
    #[default]
    Failures,
    /// Cells where high scores concentrate.
    Desirable,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParamGridRanking {
    /// One entry per cell, located at the cell center.
    pub map: LookupMap,
    pub ranking: RankingResult,
}

impl ParamGridSpec {
    pub fn new(bounds: Vec<(f64, f64)>, counts: Vec<usize>) -> Result<Self> {
        let s = Self { bounds, counts, samples: Vec::new() };
        s.validate_grid()?;
        Ok(s)
    }

    pub fn dims(&self) -> usize {
        self.bounds.len()
    }

    pub fn push(&mut self, params: Vec<f64>, score: f64) {
        self.samples.push(ParamSample { params, score });
    }

    fn validate_grid(&self) -> Result<()> {
        if self.bounds.is_empty() || self.bounds.len() != self.counts.len() {
            return Err(Error::InvalidConfig(format!(
                "{} intervals but {} grid counts",
                self.bounds.len(),
                self.counts.len()
            )));
        }
        for (k, (&(lo, hi), &n)) in self.bounds.iter().zip(&self.counts).enumerate() {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(Error::InvalidConfig(format!("dimension {k}: empty interval [{lo}, {hi}]")));
            }
            if n < 2 {
                return Err(Error::InvalidConfig(format!("dimension {k}: grid count must be at least 2")));
            }
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        self.validate_grid()?;
        for (i, s) in self.samples.iter().enumerate() {
            if !s.score.is_finite() {
                return Err(Error::InvalidConfig(format!("sample {i} has a non-finite score")));
            }
            if s.params.len() != self.dims() {
                return Err(Error::DimensionMismatch { expected: self.dims(), got: s.params.len() });
            }
            let inside = s.params.iter().zip(&self.bounds).all(|(&p, &(lo, hi))| p >= lo && p <= hi);
            if !inside {
                return Err(Error::SampleOutsideBox { index: i });
            }
        }
        Ok(())
    }

    fn width(&self, k: usize) -> f64 {
        (self.bounds[k].1 - self.bounds[k].0) / self.counts[k] as f64
    }

    /// Map with one entry at each cell center, read by nearest lookup.
    pub fn grid_map(&self) -> Result<LookupMap> {
        self.validate_grid()?;
        let axes = (0..self.dims())
            .map(|k| {
                let (lo, w) = (self.bounds[k].0, self.width(k));
                GridAxis::new((0..self.counts[k]).map(|i| lo + (i as f64 + 0.5) * w).collect())
            })
            .collect::<Result<Vec<_>>>()?;
        LookupMap::from_fn(axes, Scheme::Nearest, |_| 0.0)
    }

    /// Closed bounds of a cell given by flat index.
    pub fn cell_box(&self, flat: usize) -> Vec<(f64, f64)> {
        let mut rem = flat;
        let mut out = alloc::vec![(0.0, 0.0); self.dims()];
        for k in (0..self.dims()).rev() {
            let i = rem % self.counts[k];
            rem /= self.counts[k];
            out[k] = self.cell_interval(k, i as isize, i as isize);
        }
        out
    }

    fn cell_interval(&self, k: usize, from: isize, to: isize) -> (f64, f64) {
        let (lo, hi) = self.bounds[k];
        let n = self.counts[k] as isize;
        let w = self.width(k);
        let from = from.max(0);
        let to = to.min(n - 1);
        let a = if from == 0 { lo } else { lo + from as f64 * w };
        let b = if to == n - 1 { hi } else { lo + (to + 1) as f64 * w };
        (a, b)
    }

    /// A finer grid over `cell` widened by `expand` cells on every side
    /// (clipped to the current box), keeping the samples that fall inside.
    pub fn refine(&self, cell: usize, expand: usize) -> Self {
        let mut rem = cell;
        let mut bounds = alloc::vec![(0.0, 0.0); self.dims()];
        for k in (0..self.dims()).rev() {
            let i = (rem % self.counts[k]) as isize;
            rem /= self.counts[k];
            bounds[k] = self.cell_interval(k, i - expand as isize, i + expand as isize);
        }
        let samples = self
            .samples
            .iter()
            .filter(|s| s.params.iter().zip(&bounds).all(|(&p, &(lo, hi))| p >= lo && p <= hi))
            .cloned()
            .collect();
        Self { bounds, counts: self.counts.clone(), samples }
    }
}

/// Ranks the cells of the grid by the samples they contain.
pub fn param_grid_rank(
    spec: &ParamGridSpec,
    heuristic: Heuristic,
    cfg: &AffectConfig,
    objective: Objective,
) -> Result<ParamGridRanking> {
    spec.validate()?;
    if spec.samples.is_empty() {
        return Err(Error::InvalidConfig("at least one sample is required".into()));
    }
    let map = spec.grid_map()?;
    let runs = spec
        .samples
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let mut run = TraceRun::new(i as u64);
            run.query(&map, &s.params)?;
            run.set_score(match objective {
                Objective::Failures => s.score,
                Objective::Desirable => -s.score,
            })?;
            Ok(run)
        })
        .collect::<Result<Vec<_>>>()?;
    let ranking = rank(&runs, &map, heuristic, cfg, &ScoreShift::default())?;
    Ok(ParamGridRanking { map, ranking })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn failing_cell_first() {
        let mut s = ParamGridSpec::new(vec![(0.0, 1.0), (0.0, 1.0)], vec![4, 4]).unwrap();
        s.push(vec![0.6, 0.1], -1.0);
        s.push(vec![0.7, 0.2], -2.0);
        s.push(vec![0.1, 0.9], 1.0);
        s.push(vec![0.9, 0.9], 1.0);
        let r = param_grid_rank(&s, Heuristic::Tarantula, &AffectConfig::default(), Objective::Failures).unwrap();
        assert_eq!(r.ranking.order[0], 2 * 4);
        assert_eq!(s.cell_box(8), vec![(0.5, 0.75), (0.0, 0.25)]);
    }

    #[test]
    fn desirable_mode() {
        let mut s = ParamGridSpec::new(vec![(0.0, 2.0)], vec![2]).unwrap();
        s.push(vec![0.5], -1.0);
        s.push(vec![1.5], 3.0);
        s.push(vec![1.7], 2.0);
        let r = param_grid_rank(&s, Heuristic::Tarantula, &AffectConfig::default(), Objective::Desirable).unwrap();
        assert_eq!(r.ranking.order[0], 1);
    }

    #[test]
    fn outside_box() {
        let mut s = ParamGridSpec::new(vec![(0.0, 1.0)], vec![2]).unwrap();
        s.push(vec![0.5], -1.0);
        s.push(vec![1.5], -1.0);
        assert_eq!(
            param_grid_rank(&s, Heuristic::Tarantula, &AffectConfig::default(), Objective::Failures),
            Err(Error::SampleOutsideBox { index: 1 })
        );
        assert!(ParamGridSpec::new(vec![(0.0, 1.0)], vec![1]).is_err());
    }

    #[test]
    fn refine_keeps_inner_samples() {
        let mut s = ParamGridSpec::new(vec![(0.0, 1.0)], vec![4]).unwrap();
        s.push(vec![0.3], -1.0);
        s.push(vec![0.9], 1.0);
        let f = s.refine(1, 0);
        assert_eq!(f.bounds, vec![(0.25, 0.5)]);
        assert_eq!(f.samples.len(), 1);
        let g = s.refine(0, 1);
        assert_eq!(g.bounds, vec![(0.0, 0.5)]);
    }
}
