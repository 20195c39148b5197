use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Breakpoints of one map dimension, strictly increasing, at least two.
#[derive(Debug, Clone, PartialEq)]
pub struct GridAxis {
    breakpoints: Vec<f64>,
}

/// Where a coordinate falls relative to the breakpoints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Bracket {
    /// Coincides with breakpoint `i`.
    On(usize),
    /// Inside (or beyond, for extrapolation) the cell `[lo, lo + 1]` at
    /// fractional position `t`; `t` is outside `(0, 1)` only when extrapolating.
    Cell { lo: usize, t: f64 },
}

impl GridAxis {
    pub fn new(breakpoints: Vec<f64>) -> Result<Self> {
        if breakpoints.len() < 2 {
            return Err(Error::InvalidAxis(format!(
                "need at least 2 breakpoints, got {}",
                breakpoints.len()
            )));
        }
        if let Some(i) = breakpoints.iter().position(|b| !b.is_finite()) {
            return Err(Error::InvalidAxis(format!("breakpoint {i} is not finite")));
        }
        if let Some(i) = breakpoints.windows(2).position(|w| w[0] >= w[1]) {
            return Err(Error::InvalidAxis(format!(
                "breakpoints not strictly increasing at position {}",
                i + 1
            )));
        }
        Ok(Self { breakpoints })
    }

    /// `count` points `start, start + step, ...`, each computed as
    /// `start + k * step` so that integer multiples stay exact where possible.
    pub fn uniform(start: f64, step: f64, count: usize) -> Result<Self> {
        Self::new((0..count).map(|k| start + k as f64 * step).collect())
    }

    /// `count` equally spaced points from `lo` to `hi` inclusive.
    pub fn linspace(lo: f64, hi: f64, count: usize) -> Result<Self> {
        if count < 2 {
            return Err(Error::InvalidAxis(format!("need at least 2 points, got {count}")));
        }
        let n = (count - 1) as f64;
        Self::new(
            (0..count)
                .map(|k| if k + 1 == count { hi } else { lo + (hi - lo) * (k as f64 / n) })
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.breakpoints.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn first(&self) -> f64 {
        self.breakpoints[0]
    }

    pub fn last(&self) -> f64 {
        self.breakpoints[self.breakpoints.len() - 1]
    }

    /// Average spacing `(last - first) / (len - 1)`.
    pub fn mean_step(&self) -> f64 {
        (self.last() - self.first()) / (self.len() - 1) as f64
    }

    pub(crate) fn bracket(&self, x: f64) -> Bracket {
        let bp = &self.breakpoints;
        let n = bp.len();
        let p = bp.partition_point(|&b| b < x);
        if p < n && bp[p] == x {
            return Bracket::On(p);
        }
        let lo = p.saturating_sub(1).min(n - 2);
        let t = (x - bp[lo]) / (bp[lo + 1] - bp[lo]);
        Bracket::Cell { lo, t }
    }

    /// Index of the nearest breakpoint; halfway ties go to the lower one,
    /// points outside the hull clamp to the boundary.
    pub fn nearest(&self, x: f64) -> usize {
        match self.bracket(x) {
            Bracket::On(i) => i,
            Bracket::Cell { lo, t } if t <= 0.5 => lo,
            Bracket::Cell { lo, .. } => lo + 1,
        }
    }

    /// Continuous grid coordinate: `i` on breakpoint `i`, linear inside each
    /// cell, extended with the boundary cell's step outside the hull.
    pub fn fractional_index(&self, x: f64) -> f64 {
        match self.bracket(x) {
            Bracket::On(i) => i as f64,
            Bracket::Cell { lo, t } => lo as f64 + t,
        }
    }
}
