//! Two-dimensional feedforward cancellation of an unstable nonlinearity.
//!
//! Plant: `ẋ1 = -3x1 + 2x1x2² + u`, `ẋ2 = -x2³ - x2`. The map stores
//! `u = -2x1x2²` on a 0.5-spaced grid over `[-10, 10]²`, which makes the
//! closed loop globally asymptotically stable.

use alloc::vec::Vec;

use super::ode::{rk4_step, sample_times, step_count};
use crate::error::{Error, Result};
use crate::lutmap::{EditKind, FaultEdit, GridAxis, LookupMap, Scheme};
use crate::stl::Signal;
use crate::traces::TraceRun;

pub const DT: f64 = 0.01;
pub const HORIZON: f64 = 2.0;
/// `alw[0.8,2] |x1| < 0.8`
pub const PHI_FF: &str = "alw[0.8,2](abs(x1) < 0.8)";
/// Initial states are drawn from `[-10, 0] × [0, 10]`.
pub const INIT_BOX: [(f64, f64); 2] = [(-10.0, 0.0), (0.0, 10.0)];
/// States beyond this magnitude stop the simulation.
pub const DIVERGENCE_BOUND: f64 = 1e6;
/// Corners of the seeded bug region.
pub const BUG_LO: [f64; 2] = [-10.0, 7.5];
pub const BUG_HI: [f64; 2] = [-8.0, 10.0];

pub fn build_map() -> LookupMap {
    let axis = GridAxis::linspace(-10.0, 10.0, 41).expect("valid axis");
    LookupMap::from_fn(alloc::vec![axis.clone(), axis], Scheme::Multilinear, |p| -2.0 * p[0] * p[1] * p[1])
        .expect("values are finite")
}

/// The 30 entries with `x1 ∈ [-10, -8]`, `x2 ∈ [7.5, 10]`, each scaled by -2.
pub fn bug(map: &LookupMap) -> Vec<FaultEdit> {
    map.entries_in_box(&BUG_LO, &BUG_HI)
        .expect("two-dimensional box")
        .into_iter()
        .map(|flat| FaultEdit { index: map.entry_index(flat), kind: EditKind::Scale(-2.0) })
        .collect()
}

pub fn build_faulty_map() -> LookupMap {
    let m = build_map();
    let edits = bug(&m);
    m.seed_fault(&edits).expect("edits come from the map")
}

fn plant(x: &[f64; 2], u: f64) -> [f64; 2] {
    [-3.0 * x[0] + 2.0 * x[0] * x[1] * x[1] + u, -x[1] * x[1] * x[1] - x[1]]
}

fn clamp(v: f64, prev: f64) -> f64 {
    if v.is_nan() {
        DIVERGENCE_BOUND.copysign(prev)
    } else {
        v.clamp(-DIVERGENCE_BOUND, DIVERGENCE_BOUND)
    }
}

/// Integrates the closed loop with fixed-step RK4, querying the map once at
/// the start of each step and holding `u` over the step.
///
/// Signals `x1`, `x2` and `u` are attached. If the state leaves
/// `|x| ≤ 10⁶` the run stops querying, is marked diverged, and the clamped
/// state is held until the horizon.
pub fn simulate(id: u64, init: [f64; 2], map: &LookupMap, dt: f64, horizon: f64) -> Result<TraceRun> {
    if map.dims() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: map.dims() });
    }
    if init.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinitePoint);
    }
    let n = step_count(dt, horizon)
        .ok_or_else(|| Error::InvalidConfig(alloc::format!("horizon {horizon} is not a multiple of dt {dt}")))?;
    let times = sample_times(dt, n);
    let mut run = TraceRun::new(id);
    let mut x1 = Vec::with_capacity(times.len());
    let mut x2 = Vec::with_capacity(times.len());
    let mut us = Vec::with_capacity(times.len());
    let mut x = init;
    for k in 0..times.len() {
        x1.push(x[0]);
        x2.push(x[1]);
        if run.diverged {
            us.push(us.last().copied().unwrap_or(0.0));
            continue;
        }
        let u = run.query(map, &x)?;
        us.push(u);
        if k == n {
            break;
        }
        let next = rk4_step(|s| plant(s, u), &x, dt);
        if next.iter().any(|v| !v.is_finite() || v.abs() > DIVERGENCE_BOUND) {
            run.diverged = true;
            x = [clamp(next[0], x[0]), clamp(next[1], x[1])];
        } else {
            x = next;
        }
    }
    run.signals = Some(Signal::new(times)?.with_channel("x1", x1)?.with_channel("x2", x2)?.with_channel("u", us)?);
    Ok(run)
}
