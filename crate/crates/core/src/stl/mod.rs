//! Signal Temporal Logic over piecewise-linear signals.
//!
//! Formulas are parsed from text ([`parse_formula`]), then evaluated either
//! quantitatively ([`robustness`]) or as booleans ([`eval_bool`]). Both work
//! on exact piecewise-linear representations, so dense-time infima and
//! suprema are computed without sampling.
//!
//! Windows of bounded operators must fit inside the signal unless
//! [`EvalOptions::truncate`] is set; unbounded windows always stop at the
//! end of the signal.

mod boolean;
mod formula;
mod parse;
mod pwl;
mod robust;
mod signal;

pub use boolean::{eval_bool, eval_bool_with, satisfaction_set};
pub use formula::{Expr, Formula, Interval};
pub use parse::{parse_formula, parse_formula_with_channels};
pub use pwl::Pwl;
pub use robust::{robustness, robustness_signal, robustness_with, EvalOptions};
pub use signal::Signal;

impl Formula {
    pub fn robustness(&self, sig: &Signal, t: f64) -> crate::Result<f64> {
        robustness(self, sig, t)
    }

    pub fn eval_bool(&self, sig: &Signal, t: f64) -> crate::Result<bool> {
        eval_bool(self, sig, t)
    }
}

impl core::str::FromStr for Formula {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        parse_formula(s)
    }
}
