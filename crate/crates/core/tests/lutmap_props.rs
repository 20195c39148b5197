use lutloc_core::lutmap::{DistanceMode, GridAxis, LookupMap, Metric, Scheme};
use proptest::prelude::*;

fn axis() -> impl Strategy<Value = Vec<f64>> {
    (prop::collection::vec(0.1f64..3.0, 1..5), -5.0f64..5.0).prop_map(|(steps, start)| {
        let mut v = vec![start];
        for s in steps {
            v.push(v.last().unwrap() + s);
        }
        v
    })
}

fn map_strategy() -> impl Strategy<Value = LookupMap> {
    prop::collection::vec(axis(), 1..4).prop_flat_map(|axes| {
        let n: usize = axes.iter().map(Vec::len).product();
        prop::collection::vec(-100.0f64..100.0, n).prop_map(move |values| {
            let axes = axes.iter().map(|a| GridAxis::new(a.clone()).unwrap()).collect();
            LookupMap::new(axes, values, Scheme::Multilinear).unwrap()
        })
    })
}

fn point_in(map: &LookupMap, fr: &[f64]) -> Vec<f64> {
    map.axes()
        .iter()
        .zip(fr)
        .map(|(a, &f)| a.first() + f * (a.last() - a.first()))
        .collect()
}

proptest! {
    #[test]
    fn grid_entries_are_reproduced(map in map_strategy(), pick in any::<prop::sample::Index>()) {
        let flat = pick.index(map.len());
        let p = map.entry_point(flat);
        let r = map.interpolate(&p).unwrap();
        prop_assert_eq!(r.value, map.value(flat));
        prop_assert_eq!(r.depends, vec![flat]);
    }

    #[test]
    fn inside_hull_is_convex_combination(map in map_strategy(), fr in prop::collection::vec(0.0f64..=1.0, 3)) {
        let p = point_in(&map, &fr[..map.dims()]);
        let r = map.interpolate(&p).unwrap();
        let vals: Vec<f64> = r.depends.iter().map(|&e| map.value(e)).collect();
        let lo = vals.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let tol = 1e-9 * (1.0 + lo.abs().max(hi.abs()));
        prop_assert!(r.value >= lo - tol && r.value <= hi + tol);
        prop_assert!(!r.depends.is_empty() && r.depends.len() <= 1 << map.dims());
    }

    #[test]
    fn depends_size_outside_hull(map in map_strategy(), fr in prop::collection::vec(-2.0f64..3.0, 3)) {
        let p = point_in(&map, &fr[..map.dims()]);
        let d = map.depends(&p).unwrap();
        prop_assert!(!d.is_empty() && d.len() <= 1 << map.dims());
        prop_assert!(d.windows(2).all(|w| w[0] < w[1]));
        let near = Scheme::Nearest;
        prop_assert_eq!(map.clone().with_scheme(near).depends(&p).unwrap().len(), 1);
    }

    #[test]
    fn metric_axioms(map in map_strategy(), picks in prop::collection::vec(any::<prop::sample::Index>(), 3), mode in 0usize..3) {
        let mode = [DistanceMode::Index, DistanceMode::Physical, DistanceMode::GridScaled][mode];
        let m = Metric::new(&map, mode);
        let [a, b, c] = [0, 1, 2].map(|k| picks[k].index(map.len()));
        prop_assert_eq!(m.entry_distance(a, a), 0.0);
        prop_assert_eq!(m.entry_distance(a, b), m.entry_distance(b, a));
        if a != b {
            prop_assert!(m.entry_distance(a, b) > 0.0);
        }
        prop_assert!(m.entry_distance(a, c) <= m.entry_distance(a, b) + m.entry_distance(b, c) + 1e-12);
    }
}

#[test]
fn uniform_grid_scaled_neighbors_are_one_apart() {
    let ax = GridAxis::linspace(-10.0, 10.0, 41).unwrap();
    let map = LookupMap::from_fn(vec![ax.clone(), ax], Scheme::Multilinear, |_| 0.0).unwrap();
    let m = Metric::new(&map, DistanceMode::GridScaled);
    for e in [0, 100, 840, 1680] {
        for n in map.neighbors(e) {
            assert_eq!(m.entry_distance(e, n), 1.0);
        }
    }
}

#[test]
fn non_finite_queries_are_rejected() {
    let map = LookupMap::from_fn(vec![GridAxis::linspace(0.0, 1.0, 3).unwrap()], Scheme::Multilinear, |p| p[0]).unwrap();
    assert!(map.interpolate(&[f64::NAN]).is_err());
    assert!(map.interpolate(&[f64::INFINITY]).is_err());
    assert!(map.interpolate(&[0.5, 0.5]).is_err());
}
