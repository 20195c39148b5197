use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::axis::{Bracket, GridAxis};
use super::EntryIndex;
use crate::error::{Error, Result};

/// How stored entries are completed to a function on the whole space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Scheme {
    /// Piecewise multilinear inside the grid; the boundary cell's affine
    /// piece is extended outside it.
    #[default]
    Multilinear,
    /// Value of the nearest entry, clamped outside the grid.
    Nearest,
}

impl Scheme {
    pub fn name(self) -> &'static str {
        match self {
            Scheme::Multilinear => "multilinear",
            Scheme::Nearest => "nearest",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "multilinear" | "linear" => Some(Scheme::Multilinear),
            "nearest" => Some(Scheme::Nearest),
            _ => None,
        }
    }
}

/// Result of one map evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct Interpolation {
    pub value: f64,
    /// Flat indices of the entries read, ascending.
    pub depends: Vec<usize>,
}

/// One entry change applied by [`LookupMap::seed_fault`].
#[derive(Debug, Clone, PartialEq)]
pub struct FaultEdit {
    pub index: EntryIndex,
    pub kind: EditKind,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EditKind {
    Set(f64),
    Scale(f64),
}

/// Rectilinear look-up map with scalar entries.
#[derive(Debug, Clone, PartialEq)]
pub struct LookupMap {
    axes: Vec<GridAxis>,
    values: Vec<f64>,
    scheme: Scheme,
    strides: Vec<usize>,
}

impl LookupMap {
    pub fn new(axes: Vec<GridAxis>, values: Vec<f64>, scheme: Scheme) -> Result<Self> {
        if axes.is_empty() {
            return Err(Error::InvalidMap("map needs at least one axis".into()));
        }
        let mut strides = vec![1usize; axes.len()];
        let mut total = 1usize;
        for (k, axis) in axes.iter().enumerate().rev() {
            strides[k] = total;
            total = total
                .checked_mul(axis.len())
                .ok_or_else(|| Error::InvalidMap("grid too large".into()))?;
        }
        if values.len() != total {
            return Err(Error::InvalidMap(format!(
                "expected {total} values for the axis shape, got {}",
                values.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidMap(format!("value {i} is not finite")));
        }
        Ok(Self { axes, values, scheme, strides })
    }

    /// Tabulates `f` at every grid point.
    pub fn from_fn(axes: Vec<GridAxis>, scheme: Scheme, mut f: impl FnMut(&[f64]) -> f64) -> Result<Self> {
        let total: usize = axes.iter().map(GridAxis::len).product();
        let mut values = Vec::with_capacity(total);
        let mut idx = vec![0usize; axes.len()];
        let mut point = vec![0.0; axes.len()];
        for _ in 0..total {
            for (k, a) in axes.iter().enumerate() {
                point[k] = a.breakpoints()[idx[k]];
            }
            values.push(f(&point));
            advance(&mut idx, |k| axes[k].len());
        }
        Self::new(axes, values, scheme)
    }

    pub fn dims(&self) -> usize {
        self.axes.len()
    }

    /// Number of stored entries.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn axes(&self) -> &[GridAxis] {
        &self.axes
    }

    pub fn shape(&self) -> Vec<usize> {
        self.axes.iter().map(GridAxis::len).collect()
    }

    /// Row-major values, last axis fastest.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn with_scheme(mut self, scheme: Scheme) -> Self {
        self.scheme = scheme;
        self
    }

    pub fn flat_index(&self, index: &EntryIndex) -> Result<usize> {
        let c = index.coords();
        if c.len() != self.dims() {
            return Err(Error::IndexOutOfRange(index.clone()));
        }
        let mut flat = 0;
        for (k, &i) in c.iter().enumerate() {
            if i >= self.axes[k].len() {
                return Err(Error::IndexOutOfRange(index.clone()));
            }
            flat += i * self.strides[k];
        }
        Ok(flat)
    }

    /// Panics if `flat >= self.len()`.
    pub fn entry_index(&self, flat: usize) -> EntryIndex {
        assert!(flat < self.len(), "flat index {flat} out of range");
        let mut coords = vec![0; self.dims()];
        self.coords_into(flat, &mut coords);
        EntryIndex(coords)
    }

    pub(crate) fn coords_into(&self, mut flat: usize, out: &mut [usize]) {
        for (k, s) in self.strides.iter().enumerate() {
            out[k] = flat / s;
            flat %= s;
        }
    }

    /// Physical coordinates of an entry.
    pub fn entry_point(&self, flat: usize) -> Vec<f64> {
        let idx = self.entry_index(flat);
        idx.0.iter().zip(&self.axes).map(|(&i, a)| a.breakpoints()[i]).collect()
    }

    pub fn value(&self, flat: usize) -> f64 {
        self.values[flat]
    }

    pub fn get(&self, index: &EntryIndex) -> Result<f64> {
        Ok(self.values[self.flat_index(index)?])
    }

    fn check_point(&self, point: &[f64]) -> Result<()> {
        if point.len() != self.dims() {
            return Err(Error::DimensionMismatch { expected: self.dims(), got: point.len() });
        }
        if point.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinitePoint);
        }
        Ok(())
    }

    /// Evaluates the map at `point` and reports the entries read.
    pub fn interpolate(&self, point: &[f64]) -> Result<Interpolation> {
        self.check_point(point)?;
        match self.scheme {
            Scheme::Nearest => {
                let flat = point
                    .iter()
                    .zip(&self.axes)
                    .zip(&self.strides)
                    .map(|((&x, a), s)| a.nearest(x) * s)
                    .sum();
                Ok(Interpolation { value: self.values[flat], depends: vec![flat] })
            }
            Scheme::Multilinear => Ok(self.multilinear(point)),
        }
    }

    fn multilinear(&self, point: &[f64]) -> Interpolation {
        let mut base = 0usize;
        // (stride, t) for each axis where the point is strictly between breakpoints
        let mut free: Vec<(usize, f64)> = Vec::new();
        for ((&x, a), &s) in point.iter().zip(&self.axes).zip(&self.strides) {
            match a.bracket(x) {
                Bracket::On(i) => base += i * s,
                Bracket::Cell { lo, t } => {
                    base += lo * s;
                    free.push((s, t));
                }
            }
        }
        let corners = 1usize << free.len();
        let mut value = 0.0;
        let mut depends = Vec::with_capacity(corners);
        for mask in 0..corners {
            let mut flat = base;
            let mut w = 1.0;
            for (bit, &(s, t)) in free.iter().enumerate() {
                if mask >> bit & 1 == 1 {
                    flat += s;
                    w *= t;
                } else {
                    w *= 1.0 - t;
                }
            }
            value += w * self.values[flat];
            depends.push(flat);
        }
        depends.sort_unstable();
        Interpolation { value, depends }
    }

    pub fn evaluate(&self, point: &[f64]) -> Result<f64> {
        Ok(self.interpolate(point)?.value)
    }

    pub fn depends(&self, point: &[f64]) -> Result<Vec<usize>> {
        Ok(self.interpolate(point)?.depends)
    }

    /// Copy of the map with the listed entries overwritten or scaled.
    /// Edits apply in order, so repeated indices compose.
    pub fn seed_fault(&self, edits: &[FaultEdit]) -> Result<Self> {
        let mut out = self.clone();
        for e in edits {
            let flat = self.flat_index(&e.index)?;
            let v = match e.kind {
                EditKind::Set(v) => v,
                EditKind::Scale(k) => out.values[flat] * k,
            };
            if !v.is_finite() {
                return Err(Error::InvalidMap(format!("edit at {} gives a non-finite value", e.index)));
            }
            out.values[flat] = v;
        }
        Ok(out)
    }

    /// Flat indices of entries whose coordinates lie in the closed box.
    pub fn entries_in_box(&self, lo: &[f64], hi: &[f64]) -> Result<Vec<usize>> {
        if lo.len() != self.dims() || hi.len() != self.dims() {
            return Err(Error::DimensionMismatch {
                expected: self.dims(),
                got: if lo.len() != self.dims() { lo.len() } else { hi.len() },
            });
        }
        let ranges: Vec<(usize, usize)> = self
            .axes
            .iter()
            .enumerate()
            .map(|(k, a)| {
                let bp = a.breakpoints();
                (bp.partition_point(|&b| b < lo[k]), bp.partition_point(|&b| b <= hi[k]))
            })
            .collect();
        let mut out = Vec::new();
        collect_box(&ranges, &self.strides, &mut out);
        Ok(out)
    }

    /// Entries differing from `flat` by one step along exactly one axis,
    /// ascending.
    pub fn neighbors(&self, flat: usize) -> Vec<usize> {
        let mut coords = vec![0; self.dims()];
        self.coords_into(flat, &mut coords);
        let mut out = Vec::with_capacity(2 * self.dims());
        for (k, &c) in coords.iter().enumerate() {
            if c > 0 {
                out.push(flat - self.strides[k]);
            }
            if c + 1 < self.axes[k].len() {
                out.push(flat + self.strides[k]);
            }
        }
        out.sort_unstable();
        out
    }
}

/// Row-major odometer increment; wraps to all zeros after the last index.
pub(crate) fn advance(idx: &mut [usize], len: impl Fn(usize) -> usize) {
    for k in (0..idx.len()).rev() {
        idx[k] += 1;
        if idx[k] < len(k) {
            return;
        }
        idx[k] = 0;
    }
}

/// Pushes every flat index of the half-open per-axis index box, ascending.
pub(crate) fn collect_box(ranges: &[(usize, usize)], strides: &[usize], out: &mut Vec<usize>) {
    if ranges.iter().any(|&(a, b)| a >= b) {
        return;
    }
    let mut idx: Vec<usize> = ranges.iter().map(|r| r.0).collect();
    loop {
        out.push(idx.iter().zip(strides).map(|(i, s)| i * s).sum());
        let mut k = idx.len();
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < ranges[k].1 {
                break;
            }
            idx[k] = ranges[k].0;
        }
    }
}
