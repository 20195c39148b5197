use lutloc_core::lutmap::{DistanceMode, GridAxis, LookupMap, Metric, Scheme};
use lutloc_core::spectra::{intersection_union_from_sus_u, spectra};
use lutloc_core::traces::TraceRun;
use proptest::prelude::*;

/// Runs on a `rows × cols` unit grid, each reading a few grid points
/// directly, with a score.
#[derive(Debug, Clone)]
struct Instance {
    rows: usize,
    cols: usize,
    runs: Vec<(Vec<usize>, f64)>,
    r: f64,
}

fn instance() -> impl Strategy<Value = Instance> {
    (2usize..=2, 2usize..=5)
        .prop_flat_map(|(rows, cols)| {
            let n = rows * cols;
            let run = (prop::collection::vec(0..n, 0..4), prop::sample::select(vec![-2.0, -1.0, -0.5, 0.0, 0.5, 1.0]));
            (Just(rows), Just(cols), prop::collection::vec(run, 1..=6), prop::sample::select(vec![0.0, 0.5, 1.0, 1.5, 2.0, 3.0]))
        })
        .prop_map(|(rows, cols, runs, r)| Instance { rows, cols, runs, r })
}

fn build(inst: &Instance) -> (LookupMap, Vec<TraceRun>) {
    let ax = |n: usize| GridAxis::new((0..n).map(|k| k as f64).collect()).unwrap();
    let map = LookupMap::from_fn(vec![ax(inst.rows), ax(inst.cols)], Scheme::Multilinear, |_| 0.0).unwrap();
    let runs = inst
        .runs
        .iter()
        .enumerate()
        .map(|(i, (pts, s))| {
            let mut z = TraceRun::new(i as u64);
            for &e in pts {
                z.query(&map, &map.entry_point(e)).unwrap();
            }
            z.set_score(*s).unwrap();
            z
        })
        .collect();
    (map, runs)
}

struct Oracle<'a> {
    inst: &'a Instance,
}

impl Oracle<'_> {
    fn n(&self) -> usize {
        self.inst.rows * self.inst.cols
    }

    fn dist(&self, a: usize, b: usize) -> f64 {
        let c = self.inst.cols;
        let (ar, ac, br, bc) = ((a / c) as f64, (a % c) as f64, (b / c) as f64, (b % c) as f64);
        ((ar - br).powi(2) + (ac - bc).powi(2)).sqrt()
    }

    fn accessed(&self, fail: bool) -> Vec<usize> {
        (0..self.n())
            .filter(|e| self.inst.runs.iter().any(|(pts, s)| (*s < 0.0) == fail && pts.contains(e)))
            .collect()
    }

    fn in_ball(&self, x: &[usize], e: usize) -> bool {
        x.iter().any(|&m| self.dist(m, e) <= self.inst.r)
    }

    fn sus_u(&self) -> Vec<usize> {
        let ms = self.accessed(false);
        self.accessed(true).into_iter().filter(|&e| !self.in_ball(&ms, e)).collect()
    }

    fn sus_iu(&self) -> Vec<usize> {
        let ms = self.accessed(false);
        let failing: Vec<&Vec<usize>> = self.inst.runs.iter().filter(|(_, s)| *s < 0.0).map(|(p, _)| p).collect();
        self.sus_u()
            .into_iter()
            .filter(|&m| {
                failing.iter().all(|pts| pts.iter().any(|&mz| !self.in_ball(&ms, mz) && self.dist(m, mz) <= self.inst.r))
            })
            .collect()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn sets_match_brute_force(inst in instance()) {
        let (map, runs) = build(&inst);
        let o = Oracle { inst: &inst };
        let s = spectra(&runs, &map, inst.r, DistanceMode::GridScaled).unwrap();
        let mut sus = s.sus_u_entries();
        sus.sort_unstable();
        prop_assert_eq!(&s.m_f, &o.accessed(true));
        prop_assert_eq!(&s.m_s, &o.accessed(false));
        prop_assert_eq!(&sus, &o.sus_u());
        prop_assert_eq!(&s.sus_iu, &o.sus_iu());
        let metric = Metric::new(&map, DistanceMode::GridScaled);
        prop_assert_eq!(&intersection_union_from_sus_u(&runs, &metric, &sus, inst.r), &s.sus_iu);
        prop_assert!(s.sus_iu.iter().all(|e| sus.contains(e)));
        for u in &s.sus_u {
            prop_assert!(!o.in_ball(&s.m_s, u.entry));
            prop_assert_eq!(u.r_u, u.s_u * u.d_u);
        }
    }

    #[test]
    fn larger_radius_never_grows_sus_u(inst in instance(), extra in 0.0f64..3.0) {
        let (map, runs) = build(&inst);
        let a = spectra(&runs, &map, inst.r, DistanceMode::GridScaled).unwrap().sus_u_entries();
        let b = spectra(&runs, &map, inst.r + extra, DistanceMode::GridScaled).unwrap().sus_u_entries();
        prop_assert!(b.iter().all(|e| a.contains(e)));
    }
}

#[test]
fn everything_passing_accessed_gives_empty_sets() {
    let inst = Instance { rows: 2, cols: 3, runs: vec![((0..6).collect(), 1.0), (vec![2, 3], -1.0)], r: 0.0 };
    let (map, runs) = build(&inst);
    let s = spectra(&runs, &map, 0.0, DistanceMode::GridScaled).unwrap();
    assert!(s.sus_u.is_empty() && s.sus_iu.is_empty());
}
