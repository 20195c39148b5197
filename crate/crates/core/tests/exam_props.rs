use lutloc_core::exam::{abs_exam_score, abs_exam_with, exam_percent, exam_score, BuggySet, TieMode};
use lutloc_core::lutmap::{GridAxis, LookupMap, Scheme};
use lutloc_core::rankers::RankingResult;
use lutloc_core::traces::AffectConfig;
use proptest::prelude::*;

fn map(n: usize) -> LookupMap {
    LookupMap::from_fn(vec![GridAxis::new((0..n).map(|k| k as f64).collect()).unwrap()], Scheme::Nearest, |_| 0.0).unwrap()
}

fn case() -> impl Strategy<Value = (Vec<f64>, Vec<usize>)> {
    (2usize..40).prop_flat_map(|n| {
        (prop::collection::vec((-8i32..8).prop_map(|k| k as f64 * 0.5), n), prop::collection::vec(0..n, 1..4))
    })
}

proptest! {
    #[test]
    fn percent_is_abs_over_size((scores, buggy) in case()) {
        let n = scores.len();
        let m = map(n);
        let r = RankingResult::from_scores("t", AffectConfig::default(), scores);
        let b = BuggySet::from_flat(&m, buggy).unwrap();
        let abs = abs_exam_score(&r, &b).unwrap();
        prop_assert!(abs >= 1 && abs <= n);
        prop_assert_eq!(exam_score(&r, &b).unwrap(), abs as f64 / n as f64 * 100.0);
        prop_assert_eq!(exam_percent(abs, n), abs as f64 / n as f64 * 100.0);
        let best = abs_exam_with(&r, &b, TieMode::Best).unwrap();
        let worst = abs_exam_with(&r, &b, TieMode::Worst).unwrap();
        prop_assert!(best <= abs && abs <= worst);
    }

    #[test]
    fn only_the_order_matters((scores, buggy) in case(), a in 0.1f64..10.0, b in -5.0f64..5.0, cube in any::<bool>()) {
        let m = map(scores.len());
        let set = BuggySet::from_flat(&m, buggy).unwrap();
        let transformed: Vec<f64> = scores.iter().map(|&s| if cube { s * s * s + b } else { a * s + b }).collect();
        let r1 = RankingResult::from_scores("t", AffectConfig::default(), scores);
        let r2 = RankingResult::from_scores("t", AffectConfig::default(), transformed);
        prop_assert_eq!(abs_exam_score(&r1, &set).unwrap(), abs_exam_score(&r2, &set).unwrap());
    }
}
