use alloc::vec;
use alloc::vec::Vec;

use super::map::{collect_box, LookupMap};
use crate::math::{round, sqrt};

/// Coordinate system in which distances between points and entries are
/// measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum DistanceMode {
    /// Grid indices; points between breakpoints get fractional indices.
    Index,
    /// Raw axis units.
    Physical,
    /// Axis units divided by the axis' mean breakpoint spacing.
    #[default]
    GridScaled,
}

impl DistanceMode {
    pub fn name(self) -> &'static str {
        match self {
            DistanceMode::Index => "index",
            DistanceMode::Physical => "physical",
            DistanceMode::GridScaled => "grid-scaled",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "index" => Some(DistanceMode::Index),
            "physical" => Some(DistanceMode::Physical),
            "grid-scaled" | "grid_scaled" | "gridscaled" => Some(DistanceMode::GridScaled),
            _ => None,
        }
    }
}

/// Euclidean distances over a map's grid in one [`DistanceMode`].
///
/// Each axis is mapped monotonically to a scaled coordinate, so the entries
/// within a radius of a point can be found by a per-axis binary search.
#[derive(Debug, Clone)]
pub struct Metric {
    mode: DistanceMode,
    /// Scaled coordinate of every breakpoint, per axis.
    coords: Vec<Vec<f64>>,
    /// Breakpoints and spacing needed to scale arbitrary points.
    breakpoints: Vec<Vec<f64>>,
    steps: Vec<f64>,
    strides: Vec<usize>,
}

impl Metric {
    pub fn new(map: &LookupMap, mode: DistanceMode) -> Self {
        let mut strides = vec![1usize; map.dims()];
        for k in (0..map.dims().saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * map.axes()[k + 1].len();
        }
        let steps: Vec<f64> = map.axes().iter().map(|a| a.mean_step()).collect();
        let coords = map
            .axes()
            .iter()
            .zip(&steps)
            .map(|(a, &h)| {
                let bp = a.breakpoints();
                match mode {
                    DistanceMode::Index => (0..bp.len()).map(|i| i as f64).collect(),
                    DistanceMode::Physical => bp.to_vec(),
                    DistanceMode::GridScaled => bp
                        .iter()
                        .map(|&b| {
                            // uniform grids land on integers up to rounding; snap them
                            let c = (b - bp[0]) / h;
                            let r = round(c);
                            if (c - r).abs() < 1e-9 { r } else { c }
                        })
                        .collect(),
                }
            })
            .collect();
        Self {
            mode,
            coords,
            breakpoints: map.axes().iter().map(|a| a.breakpoints().to_vec()).collect(),
            steps,
            strides,
        }
    }

    pub fn mode(&self) -> DistanceMode {
        self.mode
    }

    pub fn dims(&self) -> usize {
        self.coords.len()
    }

    /// Scaled coordinates of a physical point.
    pub fn scale_point(&self, point: &[f64]) -> Vec<f64> {
        point
            .iter()
            .enumerate()
            .map(|(k, &x)| self.scale_coord(k, x))
            .collect()
    }

    fn scale_coord(&self, k: usize, x: f64) -> f64 {
        let bp = &self.breakpoints[k];
        match self.mode {
            DistanceMode::Physical => x,
            DistanceMode::GridScaled => (x - bp[0]) / self.steps[k],
            DistanceMode::Index => {
                let n = bp.len();
                let p = bp.partition_point(|&b| b < x);
                if p < n && bp[p] == x {
                    return p as f64;
                }
                let lo = p.saturating_sub(1).min(n - 2);
                lo as f64 + (x - bp[lo]) / (bp[lo + 1] - bp[lo])
            }
        }
    }

    #[inline]
    fn axis_coord(&self, flat: usize, k: usize) -> f64 {
        let i = (flat / self.strides[k]) % self.coords[k].len();
        self.coords[k][i]
    }

    /// Distance between two entries given by flat index.
    pub fn entry_distance(&self, a: usize, b: usize) -> f64 {
        let mut s = 0.0;
        for k in 0..self.dims() {
            let d = self.axis_coord(a, k) - self.axis_coord(b, k);
            s += d * d;
        }
        sqrt(s)
    }

    /// Distance from an already scaled point to an entry.
    pub fn scaled_distance(&self, scaled: &[f64], flat: usize) -> f64 {
        let mut s = 0.0;
        for (k, &c) in scaled.iter().enumerate() {
            let d = c - self.axis_coord(flat, k);
            s += d * d;
        }
        sqrt(s)
    }

    /// Distance from a physical point to an entry.
    pub fn point_distance(&self, point: &[f64], flat: usize) -> f64 {
        self.scaled_distance(&self.scale_point(point), flat)
    }

    /// Calls `f(flat, distance)` for every entry within `radius` of the
    /// scaled point, in ascending flat order. `radius` may be infinite.
    pub fn for_each_within(&self, scaled: &[f64], radius: f64, mut f: impl FnMut(usize, f64)) {
        let ranges: Vec<(usize, usize)> = self
            .coords
            .iter()
            .zip(scaled)
            .map(|(c, &x)| {
                if radius.is_infinite() {
                    (0, c.len())
                } else {
                    (c.partition_point(|&v| v < x - radius), c.partition_point(|&v| v <= x + radius))
                }
            })
            .collect();
        let mut candidates = Vec::new();
        collect_box(&ranges, &self.strides, &mut candidates);
        for flat in candidates {
            let d = self.scaled_distance(scaled, flat);
            if d <= radius {
                f(flat, d);
            }
        }
    }

    /// Entries within `radius` of an entry, ascending.
    pub fn entries_within(&self, flat: usize, radius: f64) -> Vec<usize> {
        let p: Vec<f64> = (0..self.dims()).map(|k| self.axis_coord(flat, k)).collect();
        let mut out = Vec::new();
        self.for_each_within(&p, radius, |j, _| out.push(j));
        out
    }

    /// Largest distance between two entries (opposite grid corners).
    pub fn diameter(&self) -> f64 {
        let mut s = 0.0;
        for c in &self.coords {
            let d = c[c.len() - 1] - c[0];
            s += d * d;
        }
        sqrt(s)
    }
}
