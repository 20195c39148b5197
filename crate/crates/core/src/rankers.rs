//! Score-weighted similarity coefficients over map entries.
//!
//! For every entry the runs are folded into six [`BuildingBlocks`]; a
//! [`Coefficient`] turns those into a suspiciousness value, and entries are
//! sorted by it. Failing runs have negative scores, so the failing sums are
//! `<= 0` and the passing sums `>= 0`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::error::{Error, Result};
use crate::lutmap::{EntryIndex, LookupMap};
use crate::math::pow;
use crate::traces::{Affect, AffectConfig, AffectScratch, TraceRun};

/// Score-weighted aggregates for one entry.
///
/// `f_a`/`p_a` weigh failing/passing scores by how strongly each run affects
/// the entry, `f_u`/`p_u` collect the unaffected part and `f`/`p` are the
/// totals over all failing/passing runs.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BuildingBlocks {
    pub f_a: f64,
    pub p_a: f64,
    pub f_u: f64,
    pub p_u: f64,
    pub f: f64,
    pub p: f64,
}

/// `r_f / (r_f + r_p)` with `r_f = F_A / F`, `r_p = P_A / P`; zero
/// denominators give 0.
pub fn tarantula(bb: &BuildingBlocks) -> f64 {
    let rf = if bb.f != 0.0 { bb.f_a / bb.f } else { 0.0 };
    let rp = if bb.p != 0.0 { bb.p_a / bb.p } else { 0.0 };
    if rf + rp > 0.0 {
        rf / (rf + rp)
    } else {
        0.0
    }
}

/// `|F_A| / (|F_U| + P_A)`.
pub fn kulczynski(bb: &BuildingBlocks) -> f64 {
    ratio(bb.f_a.abs(), bb)
}

/// `|F_A|^γ / (|F_U| + P_A)`, `γ >= 1`.
pub fn dstar(bb: &BuildingBlocks, gamma: f64) -> Result<f64> {
    check_gamma(gamma)?;
    Ok(dstar_unchecked(bb, gamma))
}

fn dstar_unchecked(bb: &BuildingBlocks, gamma: f64) -> f64 {
    let n = bb.f_a.abs();
    ratio(if gamma == 1.0 { n } else { pow(n, gamma) }, bb)
}

/// Zero numerator gives 0, zero denominator gives `+inf`.
fn ratio(num: f64, bb: &BuildingBlocks) -> f64 {
    if num == 0.0 {
        return 0.0;
    }
    let den = bb.f_u.abs() + bb.p_a;
    if den == 0.0 {
        f64::INFINITY
    } else {
        num / den
    }
}

fn check_gamma(gamma: f64) -> Result<()> {
    if gamma.is_finite() && gamma >= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidConfig(format!("gamma must be a finite number >= 1, got {gamma}")))
    }
}

/// A similarity coefficient. Implement this to rank with coefficients
/// beyond the built-in ones.
pub trait Coefficient {
    fn name(&self) -> String;
    fn score(&self, bb: &BuildingBlocks) -> f64;
}

impl<F: Fn(&BuildingBlocks) -> f64> Coefficient for (&str, F) {
    fn name(&self) -> String {
        self.0.into()
    }

    fn score(&self, bb: &BuildingBlocks) -> f64 {
        (self.1)(bb)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Heuristic {
    Tarantula,
    Kulczynski,
    DStar { gamma: f64 },
}

impl Heuristic {
    /// D* with the usual exponent 2.
    pub const DSTAR2: Heuristic = Heuristic::DStar { gamma: 2.0 };

    pub fn label(&self) -> &'static str {
        match self {
            Heuristic::Tarantula => "tarantula",
            Heuristic::Kulczynski => "kulczynski",
            Heuristic::DStar { .. } => "dstar",
        }
    }

    /// Parses a heuristic name; `gamma` is only used by D*.
    pub fn from_name(name: &str, gamma: f64) -> Option<Self> {
        match name {
            "tarantula" => Some(Heuristic::Tarantula),
            "kulczynski" | "kul" => Some(Heuristic::Kulczynski),
            "dstar" | "d*" => Some(Heuristic::DStar { gamma }),
            _ => None,
        }
    }

    pub fn gamma(&self) -> Option<f64> {
        match self {
            Heuristic::DStar { gamma } => Some(*gamma),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Heuristic::DStar { gamma } => check_gamma(*gamma),
            _ => Ok(()),
        }
    }
}

impl Coefficient for Heuristic {
    fn name(&self) -> String {
        self.label().into()
    }

    fn score(&self, bb: &BuildingBlocks) -> f64 {
        match self {
            Heuristic::Tarantula => tarantula(bb),
            Heuristic::Kulczynski => kulczynski(bb),
            Heuristic::DStar { gamma } => dstar_unchecked(bb, *gamma),
        }
    }
}

/// Constants added to run scores before ranking: `neg_shift <= 0` to
/// negative scores, `pos_shift >= 0` to the others.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ScoreShift {
    pub neg_shift: f64,
    pub pos_shift: f64,
}

impl ScoreShift {
    pub fn validate(&self) -> Result<()> {
        if !(self.neg_shift <= 0.0 && self.neg_shift.is_finite()) {
            return Err(Error::InvalidConfig(format!("neg_shift must be <= 0, got {}", self.neg_shift)));
        }
        if !(self.pos_shift >= 0.0 && self.pos_shift.is_finite()) {
            return Err(Error::InvalidConfig(format!("pos_shift must be >= 0, got {}", self.pos_shift)));
        }
        Ok(())
    }

    pub fn apply(&self, score: f64) -> f64 {
        if score < 0.0 {
            score + self.neg_shift
        } else {
            score + self.pos_shift
        }
    }
}

/// Entries sorted by suspiciousness.
#[derive(Debug, Clone, PartialEq)]
pub struct RankingResult {
    /// Name of the coefficient used.
    pub heuristic: String,
    pub gamma: Option<f64>,
    pub config: AffectConfig,
    pub shift: ScoreShift,
    /// Score of every entry, by flat index.
    pub scores: Vec<f64>,
    /// All flat indices, most suspicious first; ties by ascending index.
    pub order: Vec<usize>,
}

impl RankingResult {
    /// Builds a ranking from per-entry scores using the standard order.
    pub fn from_scores(heuristic: impl Into<String>, config: AffectConfig, scores: Vec<f64>) -> Self {
        let order = sort_order(&scores);
        Self { heuristic: heuristic.into(), gamma: None, config, shift: ScoreShift::default(), scores, order }
    }

    /// 1-based rank of an entry.
    pub fn position(&self, flat: usize) -> Option<usize> {
        self.order.iter().position(|&e| e == flat).map(|p| p + 1)
    }

    /// Rank of every entry (1-based), by flat index.
    pub fn ranks(&self) -> Vec<usize> {
        let mut r = vec![0; self.order.len()];
        for (pos, &e) in self.order.iter().enumerate() {
            r[e] = pos + 1;
        }
        r
    }

    pub fn top(&self, k: usize) -> &[usize] {
        &self.order[..k.min(self.order.len())]
    }

    /// Whether every entry received the same score.
    pub fn is_uninformative(&self) -> bool {
        self.scores.windows(2).all(|w| w[0] == w[1])
    }
}

/// Indices sorted by descending score (`+inf` first), ties by ascending
/// index. NaN scores sort last.
pub fn sort_order(scores: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| {
        let (x, y) = (scores[a], scores[b]);
        match (x.is_nan(), y.is_nan()) {
            (true, false) => Ordering::Greater,
            (false, true) => Ordering::Less,
            _ => y.total_cmp(&x),
        }
        .then(a.cmp(&b))
    });
    order
}

/// Run indices sorted by id, with every score present and finite.
fn scored_runs<'a>(runs: &'a [TraceRun], shift: &ScoreShift) -> Result<Vec<(&'a TraceRun, f64)>> {
    if runs.is_empty() {
        return Err(Error::InvalidConfig("at least one run is required".into()));
    }
    let mut out = Vec::with_capacity(runs.len());
    for r in runs {
        let s = r.score_or_err()?;
        if !s.is_finite() {
            return Err(Error::InvalidConfig(format!("run {} has a non-finite score", r.id)));
        }
        out.push((r, shift.apply(s)));
    }
    out.sort_by_key(|(r, _)| r.id);
    Ok(out)
}

/// Building blocks of every entry, by flat index.
///
/// Runs are accumulated in ascending id order. In basic and metric modes
/// `f_u`/`p_u` sum the scores of runs whose weight on the entry is exactly
/// zero; in frequency modes they are the remainders `f - f_a` and `p - p_a`,
/// and `f`/`p` are stored as `f_a + f_u`/`p_a + p_u`.
pub fn building_blocks_all(
    runs: &[TraceRun],
    map: &LookupMap,
    cfg: &AffectConfig,
    shift: &ScoreShift,
) -> Result<Vec<BuildingBlocks>> {
    shift.validate()?;
    let affect = Affect::new(map, *cfg)?;
    let runs = scored_runs(runs, shift)?;
    let n = map.len();
    let mut bb = vec![BuildingBlocks::default(); n];
    let (mut f_tot, mut p_tot) = (0.0, 0.0);
    let freq = cfg.mode.is_frequency();
    // which run last gave the entry a nonzero weight
    let mut touched_by = vec![usize::MAX; n];
    let mut scratch = AffectScratch::default();
    for (k, &(run, s)) in runs.iter().enumerate() {
        let fail = s < 0.0;
        if fail {
            f_tot += s;
        } else {
            p_tot += s;
        }
        for (e, w) in affect.weights_with(run, &mut scratch) {
            touched_by[e] = k;
            if fail {
                bb[e].f_a += w * s;
            } else {
                bb[e].p_a += w * s;
            }
        }
        if !freq {
            for (e, b) in bb.iter_mut().enumerate() {
                if touched_by[e] != k {
                    if fail {
                        b.f_u += s;
                    } else {
                        b.p_u += s;
                    }
                }
            }
        }
    }
    for b in &mut bb {
        if freq {
            b.f_u = f_tot - b.f_a;
            b.p_u = p_tot - b.p_a;
            b.f = b.f_a + b.f_u;
            b.p = b.p_a + b.p_u;
        } else {
            b.f = f_tot;
            b.p = p_tot;
        }
    }
    Ok(bb)
}

/// Building blocks of a single entry.
pub fn building_blocks(
    runs: &[TraceRun],
    map: &LookupMap,
    entry: &EntryIndex,
    cfg: &AffectConfig,
) -> Result<BuildingBlocks> {
    let flat = map.flat_index(entry)?;
    Ok(building_blocks_all(runs, map, cfg, &ScoreShift::default())?[flat])
}

/// Ranks all entries of `map` with a built-in heuristic.
pub fn rank(
    runs: &[TraceRun],
    map: &LookupMap,
    heuristic: Heuristic,
    cfg: &AffectConfig,
    shift: &ScoreShift,
) -> Result<RankingResult> {
    heuristic.validate()?;
    let mut r = rank_with(runs, map, &heuristic, cfg, shift)?;
    r.gamma = heuristic.gamma();
    Ok(r)
}

/// Ranks all entries with any coefficient.
pub fn rank_with(
    runs: &[TraceRun],
    map: &LookupMap,
    coefficient: &dyn Coefficient,
    cfg: &AffectConfig,
    shift: &ScoreShift,
) -> Result<RankingResult> {
    let bb = building_blocks_all(runs, map, cfg, shift)?;
    let scores: Vec<f64> = bb.iter().map(|b| coefficient.score(b)).collect();
    let order = sort_order(&scores);
    Ok(RankingResult { heuristic: coefficient.name(), gamma: None, config: *cfg, shift: *shift, scores, order })
}
