//! Run records and the affect weights that link runs to map entries.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::lutmap::{DistanceMode, EntryIndex, LookupMap, Metric};
use crate::math::pow;
use crate::stl::Signal;

/// One evaluation of the map during a run.
#[derive(Debug, Clone, PartialEq)]
pub struct QueryRecord {
    /// 1-based position within the run.
    pub seq: usize,
    pub point: Vec<f64>,
    /// Flat indices of the entries read, ascending.
    pub depends: Vec<usize>,
}

/// One execution: its query log, optional output signals and score.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TraceRun {
    pub id: u64,
    pub queries: Vec<QueryRecord>,
    /// Negative means failing.
    pub score: Option<f64>,
    pub signals: Option<Signal>,
    /// Set by simulators that had to stop a run that blew up.
    pub diverged: bool,
}

impl TraceRun {
    pub fn new(id: u64) -> Self {
        Self { id, ..Self::default() }
    }

    /// Number of queries, `|z|`.
    pub fn len(&self) -> usize {
        self.queries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.queries.is_empty()
    }

    /// Evaluates `map` at `point` and appends the query to the log.
    pub fn query(&mut self, map: &LookupMap, point: &[f64]) -> Result<f64> {
        let r = map.interpolate(point)?;
        self.queries.push(QueryRecord { seq: self.queries.len() + 1, point: point.to_vec(), depends: r.depends });
        Ok(r.value)
    }

    pub fn set_score(&mut self, score: f64) -> Result<()> {
        if !score.is_finite() {
            return Err(Error::InvalidConfig(format!("run {}: score must be finite, got {score}", self.id)));
        }
        self.score = Some(score);
        Ok(())
    }

    pub fn score_or_err(&self) -> Result<f64> {
        self.score.ok_or(Error::Unscored(self.id))
    }

    /// Whether some query read the entry directly or through interpolation.
    pub fn accesses(&self, flat: usize) -> bool {
        self.queries.iter().any(|q| q.depends.binary_search(&flat).is_ok())
    }

    /// Every entry the run read, ascending and deduplicated.
    pub fn accessed(&self) -> Vec<usize> {
        let mut all: Vec<usize> = self.queries.iter().flat_map(|q| q.depends.iter().copied()).collect();
        all.sort_unstable();
        all.dedup();
        all
    }

    /// Checks that sequence numbers run 1..=|z| and that every recorded
    /// dependency set matches `map`.
    pub fn validate_against(&self, map: &LookupMap) -> Result<()> {
        for (k, q) in self.queries.iter().enumerate() {
            if q.seq != k + 1 {
                return Err(Error::InvalidConfig(format!(
                    "run {}: query {} has seq {}, expected {}",
                    self.id,
                    k,
                    q.seq,
                    k + 1
                )));
            }
            if let Some(&bad) = q.depends.iter().find(|&&d| d >= map.len()) {
                return Err(Error::InvalidConfig(format!(
                    "run {}: query {} depends on flat entry {bad}, map has {}",
                    self.id,
                    q.seq,
                    map.len()
                )));
            }
            if map.depends(&q.point)? != q.depends {
                return Err(Error::InvalidConfig(format!(
                    "run {}: query {} dependency set does not match the map",
                    self.id, q.seq
                )));
            }
        }
        if let Some(s) = self.score {
            if !s.is_finite() {
                return Err(Error::InvalidConfig(format!("run {}: score is not finite", self.id)));
            }
        }
        Ok(())
    }
}

/// Which weight a run contributes to an entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum AffectMode {
    /// 1 if the run read the entry, else 0.
    #[default]
    Basic,
    /// Strongest `λ^dist` over the run's queries, cut off at the radius.
    Metric,
    /// Fraction of the run's queries that read the entry.
    FreqBasic,
    /// Mean of `λ^dist` over the run's queries.
    FreqMetric,
}

impl AffectMode {
    pub fn name(self) -> &'static str {
        match self {
            AffectMode::Basic => "basic",
            AffectMode::Metric => "metric",
            AffectMode::FreqBasic => "freq-basic",
            AffectMode::FreqMetric => "freq-metric",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "basic" => Some(AffectMode::Basic),
            "metric" => Some(AffectMode::Metric),
            "freq-basic" | "freq" => Some(AffectMode::FreqBasic),
            "freq-metric" => Some(AffectMode::FreqMetric),
            _ => None,
        }
    }

    pub fn is_metric(self) -> bool {
        matches!(self, AffectMode::Metric | AffectMode::FreqMetric)
    }

    pub fn is_frequency(self) -> bool {
        matches!(self, AffectMode::FreqBasic | AffectMode::FreqMetric)
    }
}

/// How per-query weights combine into a per-run weight in metric mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Aggregation {
    #[default]
    Max,
    /// Sum, clamped to 1.
    Sum,
}

impl Aggregation {
    pub fn name(self) -> &'static str {
        match self {
            Aggregation::Max => "max",
            Aggregation::Sum => "sum",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "max" => Some(Aggregation::Max),
            "sum" => Some(Aggregation::Sum),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffectConfig {
    pub mode: AffectMode,
    /// Decay base, in (0, 1).
    pub lambda: f64,
    /// Cut-off distance, may be `f64::INFINITY`.
    pub radius: f64,
    pub aggregation: Aggregation,
    pub distance: DistanceMode,
}

impl Default for AffectConfig {
    fn default() -> Self {
        Self {
            mode: AffectMode::Basic,
            lambda: 0.5,
            radius: 2.0,
            aggregation: Aggregation::Max,
            distance: DistanceMode::GridScaled,
        }
    }
}

impl AffectConfig {
    pub fn with_mode(mode: AffectMode) -> Self {
        Self { mode, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.mode.is_metric() && !(self.lambda > 0.0 && self.lambda < 1.0) {
            return Err(Error::InvalidConfig(format!("lambda must lie in (0, 1), got {}", self.lambda)));
        }
        if self.radius.is_nan() || self.radius < 0.0 {
            return Err(Error::InvalidConfig(format!("radius must be >= 0, got {}", self.radius)));
        }
        Ok(())
    }
}

/// Evaluates affect weights of runs against one map.
#[derive(Debug, Clone)]
pub struct Affect {
    cfg: AffectConfig,
    metric: Metric,
    entries: usize,
}

/// Reusable dense buffer for [`Affect::weights_with`].
#[derive(Debug, Clone, Default)]
pub struct AffectScratch {
    dense: Vec<f64>,
    touched: Vec<usize>,
}

impl Affect {
    pub fn new(map: &LookupMap, cfg: AffectConfig) -> Result<Self> {
        cfg.validate()?;
        Ok(Self { cfg, metric: Metric::new(map, cfg.distance), entries: map.len() })
    }

    pub fn config(&self) -> &AffectConfig {
        &self.cfg
    }

    pub fn metric(&self) -> &Metric {
        &self.metric
    }

    /// Weight a single query gives an entry (boolean or decayed, by mode).
    pub fn maffect(&self, query: &QueryRecord, flat: usize) -> f64 {
        if self.cfg.mode.is_metric() {
            let d = self.metric.point_distance(&query.point, flat);
            if d <= self.cfg.radius {
                pow(self.cfg.lambda, d)
            } else {
                0.0
            }
        } else if query.depends.binary_search(&flat).is_ok() {
            1.0
        } else {
            0.0
        }
    }

    /// Per-run weight ignoring frequency: boolean access, or the aggregated
    /// decayed weight.
    pub fn raffect(&self, run: &TraceRun, flat: usize) -> f64 {
        let per_query = run.queries.iter().map(|q| self.maffect(q, flat));
        match (self.cfg.mode.is_metric(), self.cfg.aggregation) {
            (true, Aggregation::Sum) => per_query.sum::<f64>().min(1.0),
            _ => per_query.fold(0.0, f64::max),
        }
    }

    /// Mean per-query weight; 0 for a run without queries.
    pub fn fraffect(&self, run: &TraceRun, flat: usize) -> f64 {
        if run.is_empty() {
            return 0.0;
        }
        run.queries.iter().map(|q| self.maffect(q, flat)).sum::<f64>() / run.len() as f64
    }

    /// The weight the configured mode assigns: `fraffect` in frequency modes,
    /// `raffect` otherwise.
    pub fn weight(&self, run: &TraceRun, flat: usize) -> f64 {
        if self.cfg.mode.is_frequency() {
            self.fraffect(run, flat)
        } else {
            self.raffect(run, flat)
        }
    }

    /// All nonzero weights of `run`, ascending by entry. Agrees with
    /// [`Affect::weight`] on every entry.
    pub fn weights(&self, run: &TraceRun) -> Vec<(usize, f64)> {
        self.weights_with(run, &mut AffectScratch::default())
    }

    pub fn weights_with(&self, run: &TraceRun, scratch: &mut AffectScratch) -> Vec<(usize, f64)> {
        if scratch.dense.len() != self.entries {
            scratch.dense = vec![0.0; self.entries];
        }
        scratch.touched.clear();
        let metric = self.cfg.mode.is_metric();
        let max = metric && !self.cfg.mode.is_frequency() && self.cfg.aggregation == Aggregation::Max;
        let dense = &mut scratch.dense;
        let touched = &mut scratch.touched;
        let mut add = |flat: usize, w: f64| {
            if dense[flat] == 0.0 {
                touched.push(flat);
            }
            if max {
                dense[flat] = dense[flat].max(w);
            } else {
                dense[flat] += w;
            }
        };
        for q in &run.queries {
            if metric {
                let p = self.metric.scale_point(&q.point);
                let lambda = self.cfg.lambda;
                self.metric.for_each_within(&p, self.cfg.radius, |flat, d| add(flat, pow(lambda, d)));
            } else {
                for &flat in &q.depends {
                    add(flat, 1.0);
                }
            }
        }
        touched.sort_unstable();
        touched.dedup();
        let n = run.len() as f64;
        let mut out = Vec::with_capacity(touched.len());
        for &flat in touched.iter() {
            let acc = dense[flat];
            dense[flat] = 0.0;
            let w = match self.cfg.mode {
                AffectMode::Basic => 1.0,
                AffectMode::Metric => match self.cfg.aggregation {
                    Aggregation::Max => acc,
                    Aggregation::Sum => acc.min(1.0),
                },
                AffectMode::FreqBasic | AffectMode::FreqMetric => acc / n,
            };
            if w > 0.0 {
                out.push((flat, w));
            }
        }
        out
    }
}

/// Convenience wrappers addressed by [`EntryIndex`].
impl Affect {
    pub fn raffect_at(&self, map: &LookupMap, run: &TraceRun, entry: &EntryIndex) -> Result<f64> {
        Ok(self.raffect(run, map.flat_index(entry)?))
    }

    pub fn fraffect_at(&self, map: &LookupMap, run: &TraceRun, entry: &EntryIndex) -> Result<f64> {
        Ok(self.fraffect(run, map.flat_index(entry)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lutmap::{GridAxis, Scheme};

    fn line(n: usize) -> LookupMap {
        let ax = GridAxis::new((0..n).map(|k| k as f64).collect()).unwrap();
        LookupMap::from_fn(vec![ax], Scheme::Multilinear, |p| p[0]).unwrap()
    }

    fn run_at(map: &LookupMap, pts: &[f64]) -> TraceRun {
        let mut r = TraceRun::new(0);
        for &p in pts {
            r.query(map, &[p]).unwrap();
        }
        r
    }

    #[test]
    fn query_log_records_depends() {
        let m = line(10);
        let r = run_at(&m, &[2.0, 2.5, 11.0]);
        assert_eq!(r.queries[0].depends, vec![2]);
        assert_eq!(r.queries[1].depends, vec![2, 3]);
        assert_eq!(r.queries[2].depends, vec![8, 9]);
        assert_eq!(r.queries[2].seq, 3);
        assert!(r.accesses(3) && !r.accesses(4));
        assert_eq!(r.accessed(), vec![2, 3, 8, 9]);
        assert!(r.validate_against(&m).is_ok());
        assert!(!TraceRun::new(1).accesses(0));
    }

    #[test]
    fn metric_examples() {
        let m = line(10);
        let cfg = AffectConfig { mode: AffectMode::Metric, radius: f64::INFINITY, ..Default::default() };
        let a = Affect::new(&m, cfg).unwrap();
        let r = run_at(&m, &[4.0, 8.0]);
        assert_eq!(a.maffect(&r.queries[0], 4), 1.0);
        assert_eq!(a.maffect(&r.queries[0], 6), 0.25);
        // entry 5 is 1 away from the query at 4 and 3 away from the one at 8
        assert_eq!(a.raffect(&r, 5), 0.5);
        let cut = Affect::new(&m, AffectConfig { radius: 3.0, ..cfg }).unwrap();
        assert_eq!(cut.maffect(&r.queries[0], 0), 0.0);
        assert_eq!(cut.raffect(&run_at(&m, &[9.0]), 0), 0.0);
    }

    #[test]
    fn frequency_examples() {
        let m = line(10);
        let a = Affect::new(&m, AffectConfig::with_mode(AffectMode::FreqBasic)).unwrap();
        let r = run_at(&m, &[1.0, 5.0, 1.0, 7.0]);
        assert_eq!(a.fraffect(&r, 1), 0.5);
        assert_eq!(a.fraffect(&run_at(&m, &[3.0, 3.0]), 3), 1.0);
        assert_eq!(a.fraffect(&r, 9), 0.0);
        assert_eq!(a.fraffect(&TraceRun::new(3), 1), 0.0);
    }

    #[test]
    fn sum_aggregation_clamps() {
        let m = line(10);
        let cfg = AffectConfig { mode: AffectMode::Metric, aggregation: Aggregation::Sum, ..Default::default() };
        let a = Affect::new(&m, cfg).unwrap();
        let r = run_at(&m, &[4.0, 4.0, 5.0]);
        assert_eq!(a.raffect(&r, 4), 1.0);
        assert_eq!(a.raffect(&run_at(&m, &[4.0]), 5), 0.5);
    }

    #[test]
    fn sparse_weights_match_pointwise() {
        let m = line(12);
        let r = run_at(&m, &[0.3, 4.0, 4.5, 11.9, 20.0]);
        for mode in [AffectMode::Basic, AffectMode::Metric, AffectMode::FreqBasic, AffectMode::FreqMetric] {
            for aggregation in [Aggregation::Max, Aggregation::Sum] {
                let cfg = AffectConfig { mode, aggregation, lambda: 0.3, radius: 2.5, ..Default::default() };
                let a = Affect::new(&m, cfg).unwrap();
                let sparse = a.weights(&r);
                let mut dense = vec![0.0; m.len()];
                for &(i, w) in &sparse {
                    dense[i] = w;
                }
                for (i, &d) in dense.iter().enumerate() {
                    approx::assert_abs_diff_eq!(d, a.weight(&r, i), epsilon = 1e-15);
                }
            }
        }
    }

    #[test]
    fn rejects_bad_config() {
        let m = line(3);
        let bad = AffectConfig { mode: AffectMode::Metric, lambda: 1.0, ..Default::default() };
        assert!(Affect::new(&m, bad).is_err());
        let bad = AffectConfig { radius: -1.0, ..Default::default() };
        assert!(Affect::new(&m, bad).is_err());
        // lambda is irrelevant without decay
        assert!(Affect::new(&m, AffectConfig { lambda: 7.0, ..Default::default() }).is_ok());
    }
}
