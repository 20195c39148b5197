//! Deterministic simulation harness: seeded inputs, fixed-step toy plants
//! that log every map query, run scoring and parameter-grid localization.

pub mod experiment;
pub mod input;
pub mod ode;
pub mod paramgrid;
pub mod rng;
pub mod toy1;
pub mod toy2;

pub use experiment::{score_runs, simulate_all, simulate_run, ExperimentConfig, Model};
pub use input::{gen_input, gen_ramp_input, PiecewiseLinearInput};
pub use paramgrid::{param_grid_rank, Objective, ParamGridRanking, ParamGridSpec, ParamSample};
pub use rng::SimRng;
