//! Set-spectra localization.
//!
//! `M_F` and `M_S` are the entries read by failing (score < 0) and passing
//! (score >= 0) runs. The union model flags failing-only entries that are
//! more than `r` away from anything a passing run read; the
//! intersection-union model further keeps only those close to a failing-only
//! access of every failing run.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::Result;
use crate::lutmap::{DistanceMode, LookupMap, Metric};
use crate::rankers::RankingResult;
use crate::traces::{AffectConfig, TraceRun};

/// A member of `sus_U` with its ranking quantities.
#[derive(Debug, Clone, PartialEq)]
pub struct UnionEntry {
    pub entry: usize,
    /// Smallest `|score|` among failing runs reading the entry.
    pub s_u: f64,
    /// Distance to the nearest entry read by a passing run.
    pub d_u: f64,
    /// `s_u * d_u`.
    pub r_u: f64,
    /// Axis-adjacent grid entries worth inspecting alongside.
    pub neighbors: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectraResult {
    pub radius: f64,
    pub distance: DistanceMode,
    pub m_f: Vec<usize>,
    pub m_s: Vec<usize>,
    /// Sorted by `r_u` descending, ties by ascending entry.
    pub sus_u: Vec<UnionEntry>,
    /// Ascending.
    pub sus_iu: Vec<usize>,
}

impl SpectraResult {
    /// Ranking over all entries: `sus_U` members by `R_U`, the rest after
    /// them with score 0.
    pub fn union_ranking(&self, entries: usize) -> RankingResult {
        let mut scores = vec![0.0; entries];
        for u in &self.sus_u {
            scores[u.entry] = u.r_u;
        }
        let cfg = AffectConfig { radius: self.radius, distance: self.distance, ..AffectConfig::default() };
        RankingResult::from_scores("union", cfg, scores)
    }

    pub fn sus_u_entries(&self) -> Vec<usize> {
        self.sus_u.iter().map(|u| u.entry).collect()
    }
}

/// `(M_F, M_S)`, each ascending. Runs without a score are skipped.
pub fn accessed_sets(runs: &[TraceRun], entries: usize) -> (Vec<usize>, Vec<usize>) {
    let mut fail = vec![false; entries];
    let mut pass = vec![false; entries];
    for r in runs {
        let Some(s) = r.score else { continue };
        let target = if s < 0.0 { &mut fail } else { &mut pass };
        for q in &r.queries {
            for &e in &q.depends {
                target[e] = true;
            }
        }
    }
    (indices(&fail), indices(&pass))
}

fn indices(mask: &[bool]) -> Vec<usize> {
    mask.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i).collect()
}

/// Entries within `r` of some member of `x`, ascending, as a mask.
pub fn ball_mask(metric: &Metric, entries: usize, x: &[usize], r: f64) -> Vec<bool> {
    let mut mask = vec![false; entries];
    for &m in x {
        if r == 0.0 {
            mask[m] = true;
        } else {
            for e in metric.entries_within(m, r) {
                mask[e] = true;
            }
        }
    }
    mask
}

/// `ball(X, r)`, ascending.
pub fn ball(metric: &Metric, entries: usize, x: &[usize], r: f64) -> Vec<usize> {
    indices(&ball_mask(metric, entries, x, r))
}

/// Union model with `R_U` ranking, plus `sus_IU`.
pub fn spectra(runs: &[TraceRun], map: &LookupMap, r: f64, mode: DistanceMode) -> Result<SpectraResult> {
    if r.is_nan() || r < 0.0 {
        return Err(crate::Error::InvalidConfig(alloc::format!("radius must be >= 0, got {r}")));
    }
    for run in runs {
        run.score_or_err()?;
    }
    let n = map.len();
    let metric = Metric::new(map, mode);
    let (m_f, m_s) = accessed_sets(runs, n);
    let near_pass = ball_mask(&metric, n, &m_s, r);
    let sus: Vec<usize> = m_f.iter().copied().filter(|&e| !near_pass[e]).collect();

    let fallback = metric.diameter() + 1.0;
    let mut s_u = vec![f64::INFINITY; n];
    for run in runs {
        let s = run.score.unwrap_or(0.0);
        if s < 0.0 {
            for e in run.accessed() {
                s_u[e] = s_u[e].min(-s);
            }
        }
    }
    let mut sus_u: Vec<UnionEntry> = sus
        .iter()
        .map(|&e| {
            let d_u = if m_s.is_empty() {
                fallback
            } else {
                m_s.iter().map(|&m| metric.entry_distance(e, m)).fold(f64::INFINITY, f64::min)
            };
            UnionEntry { entry: e, s_u: s_u[e], d_u, r_u: s_u[e] * d_u, neighbors: map.neighbors(e) }
        })
        .collect();
    sus_u.sort_by(|a, b| b.r_u.total_cmp(&a.r_u).then(a.entry.cmp(&b.entry)));

    let sus_iu = intersection_union_phi(runs, &metric, n, &m_f, &near_pass, r);
    Ok(SpectraResult { radius: r, distance: mode, m_f, m_s, sus_u, sus_iu })
}

/// `Φ(r) \ ball(M_S, r)` where `m ∈ Φ(r)` iff `m ∈ M_F` and every failing run
/// reads some `m_z` outside `ball(M_S, r)` with `dist(m, m_z) <= r`.
fn intersection_union_phi(
    runs: &[TraceRun],
    metric: &Metric,
    n: usize,
    m_f: &[usize],
    near_pass: &[bool],
    r: f64,
) -> Vec<usize> {
    let failing: Vec<&TraceRun> = runs.iter().filter(|z| z.score.is_some_and(|s| s < 0.0)).collect();
    let mut phi = vec![false; n];
    for &m in m_f {
        phi[m] = true;
    }
    for z in failing {
        // entries within r of one of this run's accesses that are far from M_S
        let mut reach = vec![false; n];
        for mz in z.accessed() {
            if near_pass[mz] {
                continue;
            }
            for e in metric.entries_within(mz, r) {
                reach[e] = true;
            }
        }
        for (p, hit) in phi.iter_mut().zip(reach) {
            *p &= hit;
        }
    }
    (0..n).filter(|&e| phi[e] && !near_pass[e]).collect()
}

/// The same set characterised from `sus_U`: members such that every failing
/// run reads some `sus_U` entry within `r`.
pub fn intersection_union_from_sus_u(runs: &[TraceRun], metric: &Metric, sus_u: &[usize], r: f64) -> Vec<usize> {
    let mut in_sus = Vec::new();
    if let Some(&max) = sus_u.iter().max() {
        in_sus = vec![false; max + 1];
        for &e in sus_u {
            in_sus[e] = true;
        }
    }
    let failing: Vec<Vec<usize>> = runs
        .iter()
        .filter(|z| z.score.is_some_and(|s| s < 0.0))
        .map(|z| z.accessed().into_iter().filter(|&e| in_sus.get(e).copied().unwrap_or(false)).collect())
        .collect();
    let mut out: Vec<usize> = sus_u
        .iter()
        .copied()
        .filter(|&m| failing.iter().all(|acc| acc.iter().any(|&mz| metric.entry_distance(m, mz) <= r)))
        .collect();
    out.sort_unstable();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lutmap::{GridAxis, Scheme};

    fn line(n: usize) -> LookupMap {
        LookupMap::from_fn(vec![GridAxis::new((0..n).map(|k| k as f64).collect()).unwrap()], Scheme::Nearest, |_| 0.0)
            .unwrap()
    }

    fn run(map: &LookupMap, id: u64, score: f64, pts: &[f64]) -> TraceRun {
        let mut r = TraceRun::new(id);
        for &p in pts {
            r.query(map, &[p]).unwrap();
        }
        r.set_score(score).unwrap();
        r
    }

    #[test]
    fn accessed_sets_examples() {
        let m = line(4);
        let runs = [run(&m, 1, -1.0, &[0.0]), run(&m, 2, 1.0, &[3.0]), run(&m, 3, 0.0, &[2.0])];
        assert_eq!(accessed_sets(&runs, 4), (vec![0], vec![2, 3]));
        assert_eq!(accessed_sets(&[], 4), (vec![], vec![]));
    }

    #[test]
    fn ball_examples() {
        let m = line(10);
        let d = Metric::new(&m, DistanceMode::GridScaled);
        assert_eq!(ball(&d, 10, &[5], 1.0), vec![4, 5, 6]);
        assert_eq!(ball(&d, 10, &[5, 0], 0.0), vec![0, 5]);
        assert_eq!(ball(&d, 10, &[], 3.0), Vec::<usize>::new());
    }

    #[test]
    fn union_hand_example() {
        let m = line(10);
        let runs = [run(&m, 1, -2.0, &[0.0]), run(&m, 2, 1.0, &[5.0])];
        let s = spectra(&runs, &m, 1.0, DistanceMode::GridScaled).unwrap();
        assert_eq!(s.sus_u.len(), 1);
        let u = &s.sus_u[0];
        assert_eq!((u.entry, u.s_u, u.d_u, u.r_u), (0, 2.0, 5.0, 10.0));
        assert_eq!(u.neighbors, vec![1]);
        assert_eq!(s.sus_iu, vec![0]);
        let rk = s.union_ranking(10);
        assert_eq!(rk.order[0], 0);
    }

    #[test]
    fn radius_zero_all_passing_access() {
        let m = line(3);
        let runs = [run(&m, 1, -1.0, &[0.0, 1.0, 2.0]), run(&m, 2, 1.0, &[0.0, 1.0, 2.0])];
        let s = spectra(&runs, &m, 0.0, DistanceMode::GridScaled).unwrap();
        assert!(s.sus_u.is_empty() && s.sus_iu.is_empty());
    }

    #[test]
    fn fallback_distance_without_passing_runs() {
        let m = line(5);
        let runs = [run(&m, 1, -3.0, &[1.0]), run(&m, 2, -1.0, &[1.0, 2.0])];
        let s = spectra(&runs, &m, 1.0, DistanceMode::GridScaled).unwrap();
        assert_eq!(s.sus_u[0].d_u, 5.0);
        assert_eq!(s.sus_u.iter().map(|u| (u.entry, u.s_u)).collect::<Vec<_>>(), vec![(1, 1.0), (2, 1.0)]);
        assert_eq!(s.sus_iu, vec![1, 2]);
    }

    #[test]
    fn disjoint_failures_give_empty_iu() {
        let m = line(20);
        let runs = [run(&m, 1, -1.0, &[0.0]), run(&m, 2, -1.0, &[19.0])];
        let s = spectra(&runs, &m, 2.0, DistanceMode::GridScaled).unwrap();
        assert_eq!(s.sus_u.len(), 2);
        assert!(s.sus_iu.is_empty());
        let d = Metric::new(&m, DistanceMode::GridScaled);
        assert!(intersection_union_from_sus_u(&runs, &d, &s.sus_u_entries(), 2.0).is_empty());
    }
}
