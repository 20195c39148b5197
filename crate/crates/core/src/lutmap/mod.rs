//! N-dimensional look-up maps.
//!
//! A [`LookupMap`] stores one scalar per point of a rectilinear grid and is
//! completed to a function on the whole space by an interpolation [`Scheme`].
//! Every evaluation also reports which stored entries it read, which is what
//! ties simulation runs back to individual map entries.
//!
//! Entries are addressed two ways: [`EntryIndex`] holds per-axis grid
//! coordinates, and a plain `usize` is the row-major flat index (last axis
//! varies fastest). Flat indices are what the ranking code works with; their
//! natural order is the deterministic tie-break order.

mod axis;
mod map;
mod metric;

pub use axis::GridAxis;
pub use map::{EditKind, FaultEdit, Interpolation, LookupMap, Scheme};
pub use metric::{DistanceMode, Metric};

use alloc::vec::Vec;
use core::fmt;

/// Grid coordinates of a map entry, one index per axis.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EntryIndex(pub Vec<usize>);

impl EntryIndex {
    pub fn new(coords: impl Into<Vec<usize>>) -> Self {
        Self(coords.into())
    }

    pub fn coords(&self) -> &[usize] {
        &self.0
    }
}

impl fmt::Display for EntryIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

impl From<Vec<usize>> for EntryIndex {
    fn from(v: Vec<usize>) -> Self {
        Self(v)
    }
}
