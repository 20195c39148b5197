//! Statistical fault localization for control software parameterized by
//! look-up maps.
//!
//! Runs of a closed-loop system are recorded as ordered logs of map queries
//! together with a real-valued score (negative = failing). From these logs the
//! crate ranks map entries by suspiciousness, using score-weighted similarity
//! coefficients ([`rankers`]) or set-spectra methods ([`spectra`]), and scores
//! the quality of a ranking against known faults ([`exam`]).
//!
//! Supporting pieces:
//! - [`lutmap`]: N-dimensional look-up maps with multilinear / nearest
//!   interpolation, dependency resolution and grid metrics.
//! - [`traces`]: query records, runs and the affect weights linking runs to
//!   entries.
//! - [`stl`]: Signal Temporal Logic parsing, boolean and quantitative
//!   semantics over piecewise-linear signals.
//! - [`sim`]: deterministic toy plants and parameter-grid localization.
//!
//! The crate is `no_std` and only needs `alloc`.
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod error;
pub mod exam;
pub mod lutmap;
pub(crate) mod math;
pub mod rankers;
pub mod sim;
pub mod spectra;
pub mod stl;
pub mod traces;

pub use error::{Error, Result};
pub use lutmap::{DistanceMode, EntryIndex, GridAxis, LookupMap, Metric, Scheme};
pub use rankers::{BuildingBlocks, Heuristic, RankingResult, ScoreShift};
pub use spectra::SpectraResult;
pub use stl::{Formula, Signal};
pub use traces::{AffectConfig, AffectMode, Aggregation, QueryRecord, TraceRun};
