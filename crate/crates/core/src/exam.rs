//! Ranking quality against known faulty entries.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::lutmap::{EntryIndex, LookupMap};
use crate::rankers::RankingResult;

/// Ground-truth faulty entries, as sorted flat indices. Never empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BuggySet {
    entries: Vec<usize>,
}

impl BuggySet {
    pub fn new(map: &LookupMap, indices: &[EntryIndex]) -> Result<Self> {
        let flat = indices.iter().map(|i| map.flat_index(i)).collect::<Result<Vec<_>>>()?;
        Self::from_flat(map, flat)
    }

    pub fn from_flat(map: &LookupMap, mut entries: Vec<usize>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptyBuggySet);
        }
        if let Some(&bad) = entries.iter().find(|&&e| e >= map.len()) {
            return Err(Error::IndexOutOfRange(EntryIndex(alloc::vec![bad])));
        }
        entries.sort_unstable();
        entries.dedup();
        Ok(Self { entries })
    }

    pub fn entries(&self) -> &[usize] {
        &self.entries
    }

    pub fn contains(&self, flat: usize) -> bool {
        self.entries.binary_search(&flat).is_ok()
    }
}

/// How entries tied with the first faulty one are counted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TieMode {
    /// Follow the ranking's deterministic order.
    #[default]
    Ordered,
    /// Faulty entries come first among equals.
    Best,
    /// Faulty entries come last among equals.
    Worst,
}

impl TieMode {
    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "ordered" => Some(TieMode::Ordered),
            "best" => Some(TieMode::Best),
            "worst" => Some(TieMode::Worst),
            _ => None,
        }
    }
}

/// Number of entries inspected, in rank order, up to and including the first
/// faulty one.
pub fn abs_exam_score(ranking: &RankingResult, buggy: &BuggySet) -> Result<usize> {
    abs_exam_with(ranking, buggy, TieMode::Ordered)
}

pub fn abs_exam_with(ranking: &RankingResult, buggy: &BuggySet, ties: TieMode) -> Result<usize> {
    let n = ranking.order.len();
    if let Some(&bad) = buggy.entries().iter().find(|&&e| e >= n) {
        return Err(Error::IndexOutOfRange(EntryIndex(alloc::vec![bad])));
    }
    let first = ranking
        .order
        .iter()
        .position(|&e| buggy.contains(e))
        .ok_or(Error::EmptyBuggySet)?;
    if ties == TieMode::Ordered {
        return Ok(first + 1);
    }
    let s = ranking.scores[ranking.order[first]];
    let same = |x: f64| x.total_cmp(&s).is_eq();
    let above = ranking.scores.iter().filter(|&&x| x.total_cmp(&s).is_gt()).count();
    Ok(match ties {
        TieMode::Best => above + 1,
        _ => {
            let tied_clean = (0..n).filter(|&e| same(ranking.scores[e]) && !buggy.contains(e)).count();
            above + tied_clean + 1
        }
    })
}

/// `abs_exam / |M| * 100`.
pub fn exam_score(ranking: &RankingResult, buggy: &BuggySet) -> Result<f64> {
    exam_with(ranking, buggy, TieMode::Ordered)
}

pub fn exam_with(ranking: &RankingResult, buggy: &BuggySet, ties: TieMode) -> Result<f64> {
    let abs = abs_exam_with(ranking, buggy, ties)?;
    Ok(exam_percent(abs, ranking.order.len()))
}

pub fn exam_percent(abs: usize, entries: usize) -> f64 {
    abs as f64 / entries as f64 * 100.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lutmap::{GridAxis, Scheme};
    use crate::traces::AffectConfig;
    use alloc::vec;

    fn map(n: usize) -> LookupMap {
        LookupMap::from_fn(vec![GridAxis::new((0..n).map(|k| k as f64).collect()).unwrap()], Scheme::Nearest, |_| 0.0)
            .unwrap()
    }

    #[test]
    fn examples() {
        let m = map(3);
        let r = RankingResult::from_scores("t", AffectConfig::default(), vec![3.0, 2.0, 1.0]);
        let b = BuggySet::from_flat(&m, vec![1]).unwrap();
        assert_eq!(abs_exam_score(&r, &b).unwrap(), 2);
        let b0 = BuggySet::from_flat(&m, vec![0]).unwrap();
        assert_eq!(abs_exam_score(&r, &b0).unwrap(), 1);
        assert_eq!(exam_percent(2, 10), 20.0);
        approx::assert_abs_diff_eq!(exam_percent(1, 1681), 0.0594883997620464, epsilon = 1e-15);
        approx::assert_abs_diff_eq!(exam_percent(1, 90), 1.1111111111111112, epsilon = 1e-15);
    }

    #[test]
    fn tie_modes() {
        let m = map(5);
        let r = RankingResult::from_scores("t", AffectConfig::default(), vec![1.0, 5.0, 1.0, 1.0, 0.0]);
        let b = BuggySet::from_flat(&m, vec![2]).unwrap();
        assert_eq!(abs_exam_with(&r, &b, TieMode::Ordered).unwrap(), 3);
        assert_eq!(abs_exam_with(&r, &b, TieMode::Best).unwrap(), 2);
        assert_eq!(abs_exam_with(&r, &b, TieMode::Worst).unwrap(), 4);
    }

    #[test]
    fn invalid_sets() {
        let m = map(3);
        assert_eq!(BuggySet::from_flat(&m, vec![]), Err(Error::EmptyBuggySet));
        assert!(BuggySet::from_flat(&m, vec![3]).is_err());
        assert!(BuggySet::new(&m, &[EntryIndex(vec![7])]).is_err());
    }
}
