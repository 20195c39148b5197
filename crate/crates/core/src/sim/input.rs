//! Piecewise-linear input signals.

use alloc::format;
use alloc::vec::Vec;

use super::rng::SimRng;
use crate::error::{Error, Result};

/// Control values at equally spaced times over `[0, horizon]`, linear in
/// between and held constant past either end.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseLinearInput {
    horizon: f64,
    values: Vec<f64>,
}

impl PiecewiseLinearInput {
    pub fn new(horizon: f64, values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::InvalidConfig("an input needs at least 2 control values".into()));
        }
        if !(horizon.is_finite() && horizon > 0.0) {
            return Err(Error::InvalidConfig(format!("input horizon must be positive, got {horizon}")));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidConfig("input control values must be finite".into()));
        }
        Ok(Self { horizon, values })
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Spacing between consecutive controls.
    pub fn spacing(&self) -> f64 {
        self.horizon / (self.values.len() - 1) as f64
    }

    pub fn control_times(&self) -> Vec<f64> {
        let n = self.values.len() - 1;
        (0..=n).map(|k| if k == n { self.horizon } else { k as f64 * self.spacing() }).collect()
    }

    pub fn eval(&self, t: f64) -> f64 {
        let n = self.values.len() - 1;
        if t <= 0.0 {
            return self.values[0];
        }
        if t >= self.horizon {
            return self.values[n];
        }
        let s = t / self.spacing();
        let k = (s as usize).min(n - 1);
        let w = s - k as f64;
        if w == 0.0 {
            self.values[k]
        } else {
            self.values[k] + w * (self.values[k + 1] - self.values[k])
        }
    }
}

fn check_range(n_ctrl: usize, lo: f64, hi: f64) -> Result<()> {
    if n_ctrl < 2 {
        return Err(Error::InvalidConfig("an input needs at least 2 control values".into()));
    }
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::InvalidConfig(format!("input range [{lo}, {hi}] is empty")));
    }
    Ok(())
}

/// `n_ctrl` control values drawn i.i.d. uniform in `[lo, hi)`.
pub fn gen_input(rng: &mut SimRng, n_ctrl: usize, (lo, hi): (f64, f64), horizon: f64) -> Result<PiecewiseLinearInput> {
    check_range(n_ctrl, lo, hi)?;
    let values = (0..n_ctrl).map(|_| rng.uniform(lo, hi)).collect();
    PiecewiseLinearInput::new(horizon, values)
}

/// Like [`gen_input`], but the first segment ramps from `lo` to `hi`, so the
/// input sweeps the whole range. The remaining controls are random.
pub fn gen_ramp_input(
    rng: &mut SimRng,
    n_ctrl: usize,
    (lo, hi): (f64, f64),
    horizon: f64,
) -> Result<PiecewiseLinearInput> {
    check_range(n_ctrl, lo, hi)?;
    let mut values = Vec::with_capacity(n_ctrl);
    values.push(lo);
    values.push(hi);
    values.extend((2..n_ctrl).map(|_| rng.uniform(lo, hi)));
    PiecewiseLinearInput::new(horizon, values)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toy1_defaults() {
        let mut r = SimRng::new(11, 0);
        let u = gen_input(&mut r, 11, (0.09, 9.01), 30.0).unwrap();
        assert_eq!(u.values().len(), 11);
        assert_eq!(u.spacing(), 3.0);
        assert!(u.values().iter().all(|v| (0.09..9.01).contains(v)));
        assert_eq!(u.control_times()[10], 30.0);
    }

    #[test]
    fn ramp() {
        let mut r = SimRng::new(11, 0);
        let u = gen_ramp_input(&mut r, 11, (0.09, 9.01), 30.0).unwrap();
        assert_eq!(u.eval(0.0), 0.09);
        assert_eq!(u.eval(3.0), 9.01);
        approx::assert_abs_diff_eq!(u.eval(1.5), (0.09 + 9.01) / 2.0, epsilon = 1e-12);
    }

    #[test]
    fn same_seed_same_input() {
        let a = gen_input(&mut SimRng::new(5, 2), 11, (0.0, 1.0), 10.0).unwrap();
        let b = gen_input(&mut SimRng::new(5, 2), 11, (0.0, 1.0), 10.0).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_bad_ranges() {
        assert!(gen_input(&mut SimRng::new(0, 0), 11, (1.0, 1.0), 10.0).is_err());
        assert!(gen_input(&mut SimRng::new(0, 0), 1, (0.0, 1.0), 10.0).is_err());
    }
}
