use std::fs;
use std::path::Path;

use lutloc::cli::run_with;
use lutloc::formats::{read_map, read_ranking, read_traces};

struct Out {
    code: i32,
    stdout: String,
    stderr: String,
}

fn run(args: &[&str]) -> Out {
    let mut o = Vec::new();
    let mut e = Vec::new();
    let mut argv = vec!["lutloc"];
    argv.extend_from_slice(args);
    let code = run_with(argv, &mut o, &mut e);
    Out { code, stdout: String::from_utf8(o).unwrap(), stderr: String::from_utf8(e).unwrap() }
}

fn p(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_string()
}

#[test]
fn usage_errors_exit_one() {
    let o = run(&["frobnicate"]);
    assert_eq!(o.code, 1);
    assert!(o.stderr.contains("Usage"));
    assert_eq!(run(&["rank", "--map", "m.json", "--traces", "t.jsonl", "--bogus"]).code, 1);
    assert_eq!(run(&["rank", "--map", "m.json", "--traces", "t.jsonl", "--heuristic", "ochiai"]).code, 1);
    assert_eq!(run(&["rank", "--map", "m.json"]).code, 1);
    assert_eq!(run(&[]).code, 1);
}

#[test]
fn help_and_version_exit_zero() {
    let o = run(&["--help"]);
    assert_eq!(o.code, 0);
    assert!(o.stdout.contains("paramgrid"));
    assert_eq!(run(&["--version"]).code, 0);
    assert_eq!(run(&["rank", "--help"]).code, 0);
}

#[test]
fn data_errors_exit_two() {
    let d = tempfile::tempdir().unwrap();
    let o = run(&["rank", "--map", &p(d.path(), "missing.json"), "--traces", &p(d.path(), "t.jsonl")]);
    assert_eq!(o.code, 2);
    assert!(o.stderr.contains("missing.json"));
    fs::write(d.path().join("bad.json"), "{ not json").unwrap();
    assert_eq!(run(&["rank", "--map", &p(d.path(), "bad.json"), "--traces", "x"]).code, 2);
    // unscored traces cannot be ranked
    let (map, tr) = (p(d.path(), "map.json"), p(d.path(), "tr.jsonl"));
    assert_eq!(run(&["simulate", "--model", "toy1", "--runs", "2", "--out", &tr, "--map-out", &map]).code, 0);
    let o = run(&["rank", "--map", &map, "--traces", &tr]);
    assert_eq!(o.code, 2);
    assert!(o.stderr.contains("no score"), "{}", o.stderr);
    // gamma must be positive
    assert_eq!(run(&["score", "--map", &map, "--traces", &tr, "--formula", "alw[0,30](y2 <= 30)", "--out", &tr]).code, 0);
    assert_eq!(run(&["rank", "--map", &map, "--traces", &tr, "--gamma", "0"]).code, 2);
    assert_eq!(run(&["score", "--map", &map, "--traces", &tr, "--formula", "alw[0,30](speed < 1)"]).code, 2);
}

#[test]
fn toy1_dstar_freq_ranks_the_bug_high() {
    let d = tempfile::tempdir().unwrap();
    let (map, tr, r) = (p(d.path(), "map.json"), p(d.path(), "tr.jsonl"), p(d.path(), "r.json"));
    assert_eq!(run(&["simulate", "--model", "toy1", "--seed", "1", "--out", &tr, "--map-out", &map]).code, 0);
    let o = run(&["score", "--map", &map, "--traces", &tr, "--formula", "alw[0,30](y2 <= 30)", "--out", &tr]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let o = run(&["rank", "--map", &map, "--traces", &tr, "--heuristic", "dstar", "--gamma", "2", "--mode", "freq-basic", "--out", &r]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let m = read_map(Path::new(&map)).unwrap();
    let ranking = read_ranking(Path::new(&r), &m).unwrap();
    assert_eq!(m.entry_point(19), vec![2.0]);
    assert!(ranking.position(19).unwrap() <= 3, "entry 2.0 at {:?}", ranking.position(19));

    fs::write(d.path().join("bug.json"), "[[19]]").unwrap();
    let o = run(&["exam", "--map", &map, "--ranking", &r, "--buggy", &p(d.path(), "bug.json")]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert!(o.stdout.contains("absEXAM: ") && o.stdout.contains("EXAM: "));
    let abs: usize = o.stdout.lines().find_map(|l| l.strip_prefix("absEXAM: ")).unwrap().parse().unwrap();
    assert_eq!(abs, ranking.position(19).unwrap());

    let h = p(d.path(), "h.csv");
    let svg = p(d.path(), "h.svg");
    let o = run(&["heatmap", "--map", &map, "--ranking", &r, "--traces", &tr, "--out", &h, "--svg", &svg]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert_eq!(fs::read_to_string(&h).unwrap().lines().count(), 2);
    assert!(fs::read_to_string(&svg).unwrap().contains("</svg>"));
}

#[test]
fn exam_reports_worst_over_rankings() {
    let d = tempfile::tempdir().unwrap();
    fs::write(d.path().join("map.json"), r#"{"axes": [[0, 1, 2]], "values": [0, 0, 0]}"#).unwrap();
    let cfg = r#""config": {"mode": "basic", "lambda": 0.5, "radius": "inf", "aggregation": "max", "distance": "index"}, "shift": {"neg_shift": 0, "pos_shift": 0}"#;
    let entries = |a: usize, b: usize, c: usize| {
        format!(
            r#"{{"heuristic": "x", {cfg}, "entries": [{{"index": [{a}], "score": 3}}, {{"index": [{b}], "score": 2}}, {{"index": [{c}], "score": 1}}]}}"#
        )
    };
    fs::write(d.path().join("a.json"), entries(1, 0, 2)).unwrap();
    fs::write(d.path().join("b.json"), entries(0, 2, 1)).unwrap();
    fs::write(d.path().join("bug.json"), "[[1]]").unwrap();
    let o = run(&[
        "exam", "--map", &p(d.path(), "map.json"),
        "--ranking", &p(d.path(), "a.json"), "--ranking", &p(d.path(), "b.json"),
        "--buggy", &p(d.path(), "bug.json"),
    ]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert!(o.stdout.contains("absEXAM: 3\n"), "{}", o.stdout);
    assert!(o.stdout.contains("EXAM: 100.0000%"), "{}", o.stdout);
    fs::write(d.path().join("bug.json"), "[[5]]").unwrap();
    let o = run(&["exam", "--map", &p(d.path(), "map.json"), "--ranking", &p(d.path(), "a.json"), "--buggy", &p(d.path(), "bug.json")]);
    assert_eq!(o.code, 2);
    fs::write(d.path().join("bug.json"), "[]").unwrap();
    let o = run(&["exam", "--map", &p(d.path(), "map.json"), "--ranking", &p(d.path(), "a.json"), "--buggy", &p(d.path(), "bug.json")]);
    assert_eq!(o.code, 2);
}

#[test]
fn spectra_radius_zero_with_everything_pass_accessed_is_empty() {
    let d = tempfile::tempdir().unwrap();
    fs::write(d.path().join("map.json"), r#"{"axes": [[0, 1, 2, 3]], "values": [0, 0, 0, 0]}"#).unwrap();
    let q = |seq: usize, x: f64, i: usize| format!(r#"{{"seq": {seq}, "point": [{x}], "depends": [[{i}]]}}"#);
    let pass = format!(r#"{{"id": 0, "score": 1.0, "queries": [{}, {}, {}, {}]}}"#, q(0, 0.0, 0), q(1, 1.0, 1), q(2, 2.0, 2), q(3, 3.0, 3));
    let fail = format!(r#"{{"id": 1, "score": -1.0, "queries": [{}]}}"#, q(0, 2.0, 2));
    fs::write(d.path().join("tr.jsonl"), format!("{pass}\n{fail}\n")).unwrap();
    let o = run(&["spectra", "--map", &p(d.path(), "map.json"), "--traces", &p(d.path(), "tr.jsonl"), "--radius", "0"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let v: serde_json::Value = serde_json::from_str(&o.stdout).unwrap();
    assert_eq!(v["sus_u"], serde_json::json!([]));
    assert_eq!(v["sus_iu"], serde_json::json!([]));
    assert_eq!(v["m_f"], serde_json::json!([[2]]));
}

#[test]
fn heatmap_three_dimensions_needs_slice() {
    let d = tempfile::tempdir().unwrap();
    let spec = r#"{"bounds": [[0, 1], [0, 1], [0, 1]], "counts": [2, 2, 2],
        "samples": [{"params": [0.1, 0.1, 0.1], "score": -1}, {"params": [0.9, 0.9, 0.9], "score": 2}]}"#;
    fs::write(d.path().join("grid.json"), spec).unwrap();
    let (map, r, tr) = (p(d.path(), "cells.json"), p(d.path(), "r.json"), p(d.path(), "tr.jsonl"));
    let o = run(&["paramgrid", "--spec", &p(d.path(), "grid.json"), "--heuristic", "kulczynski", "--map-out", &map, "--out", &r]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let m = read_map(Path::new(&map)).unwrap();
    assert_eq!(read_ranking(Path::new(&r), &m).unwrap().order[0], 0);
    let line = r#"{"id": 0, "score": -1, "queries": [{"seq": 0, "point": [0.25, 0.25, 0.25], "depends": [[0, 0, 0]]}]}"#;
    fs::write(&tr, format!("{line}\n")).unwrap();
    assert_eq!(read_traces(Path::new(&tr), &m).unwrap().len(), 1);
    let o = run(&["heatmap", "--map", &map, "--ranking", &r, "--traces", &tr]);
    assert_eq!(o.code, 1);
    assert!(o.stderr.contains("--slice"));
    let o = run(&["heatmap", "--map", &map, "--ranking", &r, "--traces", &tr, "--slice", "2=0"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert_eq!(o.stdout.lines().count(), 3);
}

#[test]
fn simulate_from_experiment_file() {
    let d = tempfile::tempdir().unwrap();
    fs::write(d.path().join("exp.toml"), "model = \"toy2\"\nruns = 3\nseed = 9\n").unwrap();
    let (map, tr) = (p(d.path(), "map.json"), p(d.path(), "tr.jsonl"));
    let o = run(&["simulate", "--spec", &p(d.path(), "exp.toml"), "--score", "0", "--out", &tr, "--map-out", &map]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let m = read_map(Path::new(&map)).unwrap();
    let runs = read_traces(Path::new(&tr), &m).unwrap();
    assert_eq!(runs.len(), 3);
    assert!(runs.iter().all(|r| r.score.is_some()));
    assert_eq!(run(&["simulate", "--spec", &p(d.path(), "exp.toml"), "--score", "4"]).code, 2);
    assert_eq!(run(&["simulate", "--spec", &p(d.path(), "nope.toml")]).code, 2);
    assert_eq!(run(&["simulate", "--spec", "x", "--model", "toy1"]).code, 1);
}
