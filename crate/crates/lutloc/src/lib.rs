//! File formats, heat-maps and the `lutloc` command-line tool built on
//! [`lutloc_core`].

pub mod cli;
pub mod error;
pub mod formats;
mod fsio;
pub mod heatmap;

pub use error::{Error, Result};
