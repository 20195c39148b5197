//! Command-line driver.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use lutloc_core::exam::{abs_exam_with, exam_percent, TieMode};
use lutloc_core::rankers::rank;
use lutloc_core::sim::{param_grid_rank, score_runs, simulate_all, ExperimentConfig, Model, Objective};
use lutloc_core::spectra::spectra;
use lutloc_core::{AffectConfig, AffectMode, Aggregation, DistanceMode, Formula, Heuristic, ScoreShift};

use crate::error::{Error, Result};
use crate::formats::{self, map::map_json, traces};
use crate::fsio;
use crate::heatmap::{heatmap_csv, heatmap_svg, Heatmap};

#[derive(Debug, Parser)]
#[command(name = "lutloc", version, about = "Fault localization in look-up maps from scored run logs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate a toy model and write its query logs.
    Simulate(SimulateArgs),
    /// Score runs by the robustness of an STL formula at time 0.
    Score(ScoreArgs),
    /// Rank map entries by suspiciousness.
    Rank(RankArgs),
    /// Union and intersection-union spectra.
    Spectra(SpectraArgs),
    /// EXAM and absEXAM of rankings against known faulty entries.
    Exam(ExamArgs),
    /// Heat-map of a ranking as CSV and optionally SVG.
    Heatmap(HeatmapArgs),
    /// Rank the cells of a parameter grid by sample scores.
    Paramgrid(ParamgridArgs),
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Experiment description (TOML).
    #[arg(long, conflicts_with = "model", required_unless_present = "model")]
    pub spec: Option<PathBuf>,
    /// Built-in experiment with its defaults.
    #[arg(long, value_parser = ["toy1", "toy2"])]
    pub model: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub runs: Option<usize>,
    /// Where to write the traces; stdout if omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write the faulted map.
    #[arg(long)]
    pub map_out: Option<PathBuf>,
    /// Score the runs with the experiment's formula number K (0-based).
    #[arg(long, value_name = "K")]
    pub score: Option<usize>,
}

#[derive(Debug, Args)]
pub struct ScoreArgs {
    #[arg(long)]
    pub map: PathBuf,
    #[arg(long)]
    pub traces: PathBuf,
    /// File holding the formula.
    #[arg(long, conflicts_with = "formula", required_unless_present = "formula")]
    pub spec: Option<PathBuf>,
    /// The formula itself.
    #[arg(long)]
    pub formula: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AffectArgs {
    #[arg(long, default_value = "basic", value_parser = ["basic", "metric", "freq-basic", "freq-metric"])]
    pub mode: String,
    #[arg(long, default_value_t = 0.5)]
    pub lambda: f64,
    /// Cut-off distance; `inf` for none.
    #[arg(long, default_value = "2", value_parser = parse_real)]
    pub radius: f64,
    #[arg(long, default_value = "grid-scaled", value_parser = ["index", "physical", "grid-scaled"])]
    pub distance: String,
    #[arg(long, default_value = "max", value_parser = ["max", "sum"])]
    pub agg: String,
}

impl AffectArgs {
    fn config(&self) -> AffectConfig {
        AffectConfig {
            mode: AffectMode::from_name(&self.mode).expect("checked by clap"),
            lambda: self.lambda,
            radius: self.radius,
            aggregation: Aggregation::from_name(&self.agg).expect("checked by clap"),
            distance: DistanceMode::from_name(&self.distance).expect("checked by clap"),
        }
    }
}

#[derive(Debug, Args)]
pub struct HeuristicArgs {
    #[arg(long, default_value = "dstar", value_parser = ["tarantula", "kulczynski", "dstar"])]
    pub heuristic: String,
    /// D* exponent.
    #[arg(long, default_value_t = 2.0)]
    pub gamma: f64,
}

impl HeuristicArgs {
    fn heuristic(&self) -> Heuristic {
        Heuristic::from_name(&self.heuristic, self.gamma).expect("checked by clap")
    }
}

#[derive(Debug, Args)]
pub struct RankArgs {
    #[arg(long)]
    pub map: PathBuf,
    #[arg(long)]
    pub traces: PathBuf,
    #[command(flatten)]
    pub heuristic: HeuristicArgs,
    #[command(flatten)]
    pub affect: AffectArgs,
    /// Added to negative run scores (<= 0).
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub neg_shift: f64,
    /// Added to non-negative run scores (>= 0).
    #[arg(long, default_value_t = 0.0)]
    pub pos_shift: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SpectraArgs {
    #[arg(long)]
    pub map: PathBuf,
    #[arg(long)]
    pub traces: PathBuf,
    #[arg(long, default_value = "1", value_parser = parse_real)]
    pub radius: f64,
    #[arg(long, default_value = "grid-scaled", value_parser = ["index", "physical", "grid-scaled"])]
    pub distance: String,
    /// Also write the union ranking.
    #[arg(long)]
    pub ranking_out: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExamArgs {
    #[arg(long)]
    pub map: PathBuf,
    /// Ranking file; repeat to report the worst over several.
    #[arg(long, required = true)]
    pub ranking: Vec<PathBuf>,
    /// JSON array of faulty index tuples.
    #[arg(long)]
    pub buggy: PathBuf,
    #[arg(long, default_value = "ordered", value_parser = ["ordered", "best", "worst"])]
    pub ties: String,
}

#[derive(Debug, Args)]
pub struct HeatmapArgs {
    #[arg(long)]
    pub map: PathBuf,
    #[arg(long)]
    pub ranking: PathBuf,
    /// Runs used to mark accessed entries.
    #[arg(long)]
    pub traces: PathBuf,
    /// Pin an axis to a breakpoint index, for maps of more than two dimensions.
    #[arg(long, value_name = "AXIS=INDEX", value_parser = parse_slice)]
    pub slice: Vec<(usize, usize)>,
    /// CSV output; stdout if omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub svg: Option<PathBuf>,
    #[arg(long, default_value = "")]
    pub title: String,
}

#[derive(Debug, Args)]
pub struct ParamgridArgs {
    /// Bounds, cell counts and samples (JSON).
    #[arg(long)]
    pub spec: PathBuf,
    #[command(flatten)]
    pub heuristic: HeuristicArgs,
    #[command(flatten)]
    pub affect: AffectArgs,
    /// Rank cells where failures concentrate or where high scores do.
    #[arg(long, default_value = "failures", value_parser = ["failures", "desirable"])]
    pub objective: String,
    /// Also write the cell map, needed to read the ranking back.
    #[arg(long)]
    pub map_out: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_real(s: &str) -> std::result::Result<f64, String> {
    match s {
        "inf" | "+inf" => Ok(f64::INFINITY),
        _ => s.parse().map_err(|_| format!("`{s}` is not a number")),
    }
}

fn parse_slice(s: &str) -> std::result::Result<(usize, usize), String> {
    let (a, i) = s.split_once('=').ok_or("expected AXIS=INDEX")?;
    let a = a.trim().parse().map_err(|_| format!("bad axis `{a}`"))?;
    let i = i.trim().parse().map_err(|_| format!("bad index `{i}`"))?;
    Ok((a, i))
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit status.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                1
            } else {
                let _ = write!(out, "{text}");
                0
            };
        }
    };
    match run(cli.command, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn emit(out: &mut dyn Write, path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fsio::write_atomic(p, text.as_bytes()),
        None => out.write_all(text.as_bytes()).map_err(|e| Error::io("<stdout>", e)),
    }
}

pub fn run(command: Command, out: &mut dyn Write) -> Result<()> {
    match command {
        Command::Simulate(a) => simulate(a, out),
        Command::Score(a) => score(a, out),
        Command::Rank(a) => {
            let map = formats::read_map(&a.map)?;
            let runs = formats::read_traces(&a.traces, &map)?;
            let shift = ScoreShift { neg_shift: a.neg_shift, pos_shift: a.pos_shift };
            let r = rank(&runs, &map, a.heuristic.heuristic(), &a.affect.config(), &shift)?;
            emit(out, a.out.as_deref(), &formats::ranking_json(&r, &map))
        }
        Command::Spectra(a) => {
            let map = formats::read_map(&a.map)?;
            let runs = formats::read_traces(&a.traces, &map)?;
            let mode = DistanceMode::from_name(&a.distance).expect("checked by clap");
            let s = spectra(&runs, &map, a.radius, mode)?;
            if let Some(p) = &a.ranking_out {
                fsio::write_atomic(p, formats::ranking_json(&s.union_ranking(map.len()), &map).as_bytes())?;
            }
            emit(out, a.out.as_deref(), &formats::spectra_json(&s, &map))
        }
        Command::Exam(a) => exam(a, out),
        Command::Heatmap(a) => {
            let map = formats::read_map(&a.map)?;
            let ranking = formats::read_ranking(&a.ranking, &map)?;
            let runs = formats::read_traces(&a.traces, &map)?;
            let h = Heatmap::build(&ranking, &runs, &map, &a.slice)?;
            if let Some(p) = &a.svg {
                let title = if a.title.is_empty() { ranking.heuristic.clone() } else { a.title.clone() };
                fsio::write_atomic(p, heatmap_svg(&h, &title).as_bytes())?;
            }
            emit(out, a.out.as_deref(), &heatmap_csv(&h))
        }
        Command::Paramgrid(a) => {
            let spec = formats::read_paramgrid(&a.spec)?;
            let objective = if a.objective == "desirable" { Objective::Desirable } else { Objective::Failures };
            let pg = param_grid_rank(&spec, a.heuristic.heuristic(), &a.affect.config(), objective)?;
            if let Some(p) = &a.map_out {
                fsio::write_atomic(p, map_json(&pg.map).as_bytes())?;
            }
            emit(out, a.out.as_deref(), &formats::ranking_json(&pg.ranking, &pg.map))
        }
    }
}

fn simulate(a: SimulateArgs, out: &mut dyn Write) -> Result<()> {
    let mut cfg = match (&a.spec, a.model.as_deref()) {
        (Some(p), _) => formats::read_experiment(p)?,
        (None, Some(m)) => match Model::from_name(m) {
            Some(Model::Toy2) => ExperimentConfig::toy2(0),
            _ => ExperimentConfig::toy1(0),
        },
        (None, None) => return Err(Error::Usage("one of --spec or --model is required".into())),
    };
    if let Some(s) = a.seed {
        cfg.seed = s;
    }
    if let Some(n) = a.runs {
        cfg.n_runs = n;
    }
    let map = cfg.map()?;
    let mut runs = simulate_all(&cfg)?;
    if let Some(k) = a.score {
        let formulas = cfg.parsed_formulas()?;
        let f = formulas
            .get(k)
            .ok_or_else(|| Error::Invalid(format!("experiment has {} formulas, asked for number {k}", formulas.len())))?;
        score_runs(&mut runs, f)?;
    }
    if let Some(p) = &a.map_out {
        fsio::write_atomic(p, map_json(&map).as_bytes())?;
    }
    emit(out, a.out.as_deref(), &formats::traces_jsonl(&runs, &map))
}

fn score(a: ScoreArgs, out: &mut dyn Write) -> Result<()> {
    let map = formats::read_map(&a.map)?;
    let mut runs = formats::read_traces(&a.traces, &map)?;
    let formula: Formula = match (&a.spec, &a.formula) {
        (Some(p), _) => formats::read_formula(p)?,
        (None, Some(f)) => f.parse().map_err(|e: lutloc_core::Error| Error::Invalid(format!("formula: {e}")))?,
        (None, None) => return Err(Error::Usage("one of --spec or --formula is required".into())),
    };
    score_runs(&mut runs, &formula)?;
    emit(out, a.out.as_deref(), &traces::traces_jsonl(&runs, &map))
}

fn exam(a: ExamArgs, out: &mut dyn Write) -> Result<()> {
    let map = formats::read_map(&a.map)?;
    let buggy = formats::read_buggy(&a.buggy, &map)?;
    let ties = TieMode::from_name(&a.ties).expect("checked by clap");
    let mut worst: Option<usize> = None;
    let mut text = String::new();
    for p in &a.ranking {
        let r = formats::read_ranking(p, &map)?;
        let abs = abs_exam_with(&r, &buggy, ties)?;
        if a.ranking.len() > 1 {
            text.push_str(&format!("{}: absEXAM {abs} EXAM {:.4}%\n", p.display(), exam_percent(abs, map.len())));
        }
        worst = Some(worst.map_or(abs, |w| w.max(abs)));
    }
    let abs = worst.expect("at least one ranking");
    text.push_str(&format!("absEXAM: {abs}\nEXAM: {:.4}%\n", exam_percent(abs, map.len())));
    out.write_all(text.as_bytes()).map_err(|e| Error::io("<stdout>", e))
}
