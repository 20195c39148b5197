//! Experiment configuration, batch simulation and scoring.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::input::{gen_input, gen_ramp_input};
use super::ode::step_count;
use super::rng::SimRng;
use super::{toy1, toy2};
use crate::error::{Error, Result};
use crate::lutmap::{FaultEdit, LookupMap};
use crate::stl::Formula;
use crate::traces::TraceRun;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Model {
    Toy1,
    Toy2,
    /// Runs come from recorded traces rather than a built-in plant.
    ExternalTrace,
}

impl Model {
    pub fn name(self) -> &'static str {
        match self {
            Model::Toy1 => "toy1",
            Model::Toy2 => "toy2",
            Model::ExternalTrace => "external-trace",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "toy1" => Some(Model::Toy1),
            "toy2" => Some(Model::Toy2),
            "external-trace" | "external" => Some(Model::ExternalTrace),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub model: Model,
    pub n_runs: usize,
    pub seed: u64,
    pub dt: f64,
    pub horizon: f64,
    /// Edits applied to the model's nominal map.
    pub faults: Vec<FaultEdit>,
    /// STL requirements used to score the runs.
    pub formulas: Vec<String>,
    /// Toy-1 only: run 0 gets an input whose first segment sweeps the whole
    /// input range.
    pub ramp: bool,
}

impl ExperimentConfig {
    /// 100 runs of the one-dimensional model with the `M(2) = 0.8` bug.
    pub fn toy1(seed: u64) -> Self {
        Self {
            model: Model::Toy1,
            n_runs: 100,
            seed,
            dt: toy1::DT,
            horizon: toy1::HORIZON,
            faults: alloc::vec![toy1::bug()],
            formulas: alloc::vec![toy1::PHI1.into(), toy1::PHI2.into()],
            ramp: true,
        }
    }

    /// 100 runs of the two-dimensional model with the 30-entry bug region.
    pub fn toy2(seed: u64) -> Self {
        Self {
            model: Model::Toy2,
            n_runs: 100,
            seed,
            dt: toy2::DT,
            horizon: toy2::HORIZON,
            faults: toy2::bug(&toy2::build_map()),
            formulas: alloc::vec![toy2::PHI_FF.into()],
            ramp: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::InvalidConfig(format!("dt must be positive, got {}", self.dt)));
        }
        if step_count(self.dt, self.horizon).is_none() {
            return Err(Error::InvalidConfig(format!(
                "horizon {} is not a non-negative multiple of dt {}",
                self.horizon, self.dt
            )));
        }
        Ok(())
    }

    pub fn nominal_map(&self) -> Result<LookupMap> {
        match self.model {
            Model::Toy1 => Ok(toy1::build_map()),
            Model::Toy2 => Ok(toy2::build_map()),
            Model::ExternalTrace => Err(Error::InvalidConfig("external traces have no built-in map".into())),
        }
    }

    /// The nominal map with the configured faults applied.
    pub fn map(&self) -> Result<LookupMap> {
        self.nominal_map()?.seed_fault(&self.faults)
    }

    pub fn parsed_formulas(&self) -> Result<Vec<Formula>> {
        self.formulas.iter().map(|f| f.parse()).collect()
    }
}

/// Simulates one run of the configured model on `map`.
pub fn simulate_run(cfg: &ExperimentConfig, map: &LookupMap, id: u64) -> Result<TraceRun> {
    let mut rng = SimRng::new(cfg.seed, id);
    match cfg.model {
        Model::Toy1 => {
            let input = if cfg.ramp && id == 0 {
                gen_ramp_input(&mut rng, toy1::INPUT_CONTROLS, toy1::INPUT_RANGE, toy1::HORIZON)?
            } else {
                gen_input(&mut rng, toy1::INPUT_CONTROLS, toy1::INPUT_RANGE, toy1::HORIZON)?
            };
            toy1::simulate(id, &input, map, cfg.dt, cfg.horizon)
        }
        Model::Toy2 => {
            let [(a0, a1), (b0, b1)] = toy2::INIT_BOX;
            let init = [rng.uniform(a0, a1), rng.uniform(b0, b1)];
            toy2::simulate(id, init, map, cfg.dt, cfg.horizon)
        }
        Model::ExternalTrace => Err(Error::InvalidConfig("external traces cannot be simulated".into())),
    }
}

/// Runs `0..n_runs` on the faulted map, in id order.
pub fn simulate_all(cfg: &ExperimentConfig) -> Result<Vec<TraceRun>> {
    cfg.validate()?;
    let map = cfg.map()?;
    (0..cfg.n_runs as u64).map(|id| simulate_run(cfg, &map, id)).collect()
}

/// Sets every run's score to the robustness of `formula` at time 0.
pub fn score_runs(runs: &mut [TraceRun], formula: &Formula) -> Result<()> {
    let channels = formula.channels();
    for run in runs.iter_mut() {
        let sig = run.signals.as_ref().ok_or(Error::NoSignals(run.id))?;
        if let Some(c) = channels.iter().find(|c| !sig.has_channel(c)) {
            return Err(Error::RunMissingChannel { run: run.id, channel: String::from(*c) });
        }
        let rho = formula.robustness(sig, 0.0)?;
        run.set_score(rho)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_validation() {
        let mut c = ExperimentConfig::toy1(1);
        assert!(c.validate().is_ok());
        c.horizon = 30.05;
        assert!(c.validate().is_err());
        c.dt = 0.0;
        assert!(c.validate().is_err());
    }

    #[test]
    fn runs_are_reproducible() {
        let mut c = ExperimentConfig::toy2(9);
        c.n_runs = 3;
        assert_eq!(simulate_all(&c).unwrap(), simulate_all(&c).unwrap());
    }

    #[test]
    fn missing_channel_names_run() {
        let mut c = ExperimentConfig::toy1(1);
        c.n_runs = 2;
        let mut runs = simulate_all(&c).unwrap();
        let f: Formula = "alw[0,1](z > 0)".parse().unwrap();
        assert_eq!(
            score_runs(&mut runs, &f),
            Err(Error::RunMissingChannel { run: 0, channel: "z".into() })
        );
        let mut bare = [TraceRun::new(4)];
        assert_eq!(score_runs(&mut bare, &f), Err(Error::NoSignals(4)));
    }
}
