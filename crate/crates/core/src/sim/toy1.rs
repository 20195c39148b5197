//! One-dimensional nonlinearity canceller.
//!
//! The map approximates `1/e` to two decimals over `e ∈ {0.1, …, 9.0}`; the
//! plant output `y1 = u·f_M(u)` should stay near 1 and `y2` integrates it.

use alloc::vec::Vec;

use super::input::PiecewiseLinearInput;
use super::ode::{sample_times, step_count};
use crate::error::{Error, Result};
use crate::lutmap::{EditKind, EntryIndex, FaultEdit, GridAxis, LookupMap, Scheme};
use crate::math::round;
use crate::stl::Signal;
use crate::traces::TraceRun;

pub const DT: f64 = 0.1;
pub const HORIZON: f64 = 30.0;
pub const INPUT_CONTROLS: usize = 11;
pub const INPUT_RANGE: (f64, f64) = (0.09, 9.01);
/// `alw[10,30] |y1 - 1| < 0.4`
pub const PHI1: &str = "alw[10,30](abs(y1 - 1) < 0.4)";
/// `alw[0,30] y2 <= 30`
pub const PHI2: &str = "alw[0,30](y2 <= 30)";

/// 90 entries `0.1·k`, `k = 1..=90`, valued `0.01·round(100/e)`.
pub fn build_map() -> LookupMap {
    let axis = GridAxis::new((1..=90).map(|k| k as f64 / 10.0).collect()).expect("axis is increasing");
    LookupMap::from_fn(alloc::vec![axis], Scheme::Multilinear, |p| 0.01 * round(100.0 / p[0]))
        .expect("values are finite")
}

/// Entry `e = 2.0` changed from 0.5 to 0.8.
pub fn bug() -> FaultEdit {
    FaultEdit { index: EntryIndex(alloc::vec![19]), kind: EditKind::Set(0.8) }
}

pub fn build_faulty_map() -> LookupMap {
    build_map().seed_fault(&[bug()]).expect("index 19 exists")
}

/// Simulates one run, logging a map query at every step `t = kΔ`.
///
/// Signals `u`, `y1` and `y2` are attached; `y2(kΔ)` sums `Δ·y1(jΔ)` for
/// `j = 1..=k`. A zero horizon gives an empty run.
pub fn simulate(id: u64, input: &PiecewiseLinearInput, map: &LookupMap, dt: f64, horizon: f64) -> Result<TraceRun> {
    if map.dims() != 1 {
        return Err(Error::DimensionMismatch { expected: 1, got: map.dims() });
    }
    let n = step_count(dt, horizon)
        .ok_or_else(|| Error::InvalidConfig(alloc::format!("horizon {horizon} is not a multiple of dt {dt}")))?;
    let times = sample_times(dt, n);
    let mut run = TraceRun::new(id);
    let mut u = Vec::with_capacity(times.len());
    let mut y1 = Vec::with_capacity(times.len());
    let mut y2 = Vec::with_capacity(times.len());
    let mut acc = 0.0;
    for (k, &t) in times.iter().enumerate() {
        let uk = input.eval(t);
        let y = uk * run.query(map, &[uk])?;
        if k > 0 {
            acc += dt * y;
        }
        u.push(uk);
        y1.push(y);
        y2.push(acc);
    }
    run.signals = Some(Signal::new(times)?.with_channel("u", u)?.with_channel("y1", y1)?.with_channel("y2", y2)?);
    Ok(run)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn map_values() {
        let m = build_map();
        assert_eq!(m.len(), 90);
        assert_eq!(m.evaluate(&[2.0]).unwrap(), 0.5);
        assert_eq!(m.evaluate(&[0.1]).unwrap(), 10.0);
        approx::assert_abs_diff_eq!(m.evaluate(&[2.05]).unwrap(), 0.49, epsilon = 1e-12);
        assert_eq!(build_faulty_map().evaluate(&[2.0]).unwrap(), 0.8);
    }

    #[test]
    fn constant_input_on_faulty_entry() {
        let u = PiecewiseLinearInput::new(HORIZON, alloc::vec![2.0, 2.0]).unwrap();
        let run = simulate(0, &u, &build_faulty_map(), DT, HORIZON).unwrap();
        let sig = run.signals.as_ref().unwrap();
        assert!(sig.channel("y1").unwrap().iter().all(|&y| (y - 1.6).abs() < 1e-12));
        assert_eq!(run.len(), 301);
        let phi1: crate::stl::Formula = PHI1.parse().unwrap();
        assert!(phi1.robustness(sig, 0.0).unwrap() < 0.0);
        let clean = simulate(0, &u, &build_map(), DT, HORIZON).unwrap();
        assert!(phi1.robustness(clean.signals.as_ref().unwrap(), 0.0).unwrap() > 0.0);
    }

    #[test]
    fn zero_horizon() {
        let u = PiecewiseLinearInput::new(HORIZON, alloc::vec![2.0, 2.0]).unwrap();
        let run = simulate(0, &u, &build_map(), DT, 0.0).unwrap();
        assert!(run.is_empty());
        assert!(run.signals.unwrap().is_empty());
    }
}
