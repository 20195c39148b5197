//! Quantitative semantics.
//!
//! Every sub-formula is turned into an exact piecewise-linear robustness
//! signal. Atoms built from channels with `+`, `-`, constants and `abs` are
//! represented exactly (zero crossings of `abs` become knots); `*` and `/`
//! are linearised between the knots of their operands.

use alloc::vec::Vec;

use super::formula::{Expr, Formula, Interval};
use super::pwl::{until_window, Pwl};
use super::signal::Signal;
use crate::error::{Error, Result};
use crate::math::close;

/// Evaluation switches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct EvalOptions {
    /// Clip bounded windows at the end of the signal instead of rejecting
    /// evaluation times whose window does not fit.
    pub truncate: bool,
}

/// `ρ(φ, x, t)` with strict horizons.
pub fn robustness(f: &Formula, sig: &Signal, t: f64) -> Result<f64> {
    robustness_with(f, sig, t, EvalOptions::default())
}

pub fn robustness_with(f: &Formula, sig: &Signal, t: f64, opts: EvalOptions) -> Result<f64> {
    check_signal(f, sig)?;
    at(f, sig, t, opts)
}

/// The whole robustness signal `t ↦ ρ(φ, x, t)` over the times where it is
/// defined.
pub fn robustness_signal(f: &Formula, sig: &Signal, opts: EvalOptions) -> Result<Pwl> {
    check_signal(f, sig)?;
    pwl(f, sig, opts)
}

pub(crate) fn check_signal(f: &Formula, sig: &Signal) -> Result<()> {
    if sig.is_empty() {
        return Err(Error::InvalidSignal("signal has no samples".into()));
    }
    for c in f.channels() {
        if !sig.has_channel(c) {
            return Err(Error::MissingChannel(c.into()));
        }
    }
    Ok(())
}

fn bounds(sig: &Signal) -> (f64, f64) {
    (sig.start().unwrap_or(0.0), sig.end().unwrap_or(0.0))
}

/// Pointwise recursion through the boolean connectives keeps negation and
/// conjunction exact at the evaluation time.
fn at(f: &Formula, sig: &Signal, t: f64, opts: EvalOptions) -> Result<f64> {
    match f {
        Formula::Not(a) => Ok(-at(a, sig, t, opts)?),
        Formula::And(a, b) => Ok(at(a, sig, t, opts)?.min(at(b, sig, t, opts)?)),
        Formula::Or(a, b) => Ok(at(a, sig, t, opts)?.max(at(b, sig, t, opts)?)),
        _ => {
            let p = pwl(f, sig, opts)?;
            let t = snap_into(t, p.start(), p.end(), sig)?;
            Ok(p.eval(t))
        }
    }
}

/// Accepts `t` within tolerance of `[start, end]` and clamps it there.
pub(crate) fn snap_into(t: f64, start: f64, end: f64, sig: &Signal) -> Result<f64> {
    let (s0, s1) = bounds(sig);
    if t.is_nan() || (t < start && !close(t, start)) {
        return Err(Error::TimeOutOfDomain { t, start: s0, end: s1 });
    }
    if t > end && !close(t, end) {
        if t > s1 {
            return Err(Error::TimeOutOfDomain { t, start: s0, end: s1 });
        }
        return Err(Error::HorizonExceeded { needed: t + (s1 - end), available: s1 });
    }
    Ok(t.clamp(start, end))
}

/// End of the output domain of a temporal operator whose operand is defined
/// up to `child_end`.
pub(crate) fn temporal_end(
    f: &Formula,
    i: &Interval,
    start: f64,
    child_end: f64,
    sig: &Signal,
    opts: EvalOptions,
) -> Result<f64> {
    let reach = if i.is_bounded() && !opts.truncate { i.hi } else { i.lo };
    let end = child_end - reach;
    if end >= start {
        Ok(end)
    } else if close(end, start) {
        Ok(start)
    } else {
        let (s0, s1) = bounds(sig);
        Err(Error::HorizonExceeded { needed: s0 + f.horizon(), available: s1 })
    }
}

pub(crate) fn pwl(f: &Formula, sig: &Signal, opts: EvalOptions) -> Result<Pwl> {
    match f {
        Formula::Atom(e) => atom(e, sig),
        Formula::Step { channel, theta } => step(channel, *theta, sig),
        Formula::Not(a) => Ok(pwl(a, sig, opts)?.neg()),
        Formula::And(a, b) => combine(f, &pwl(a, sig, opts)?, &pwl(b, sig, opts)?, sig, Pwl::min),
        Formula::Or(a, b) => combine(f, &pwl(a, sig, opts)?, &pwl(b, sig, opts)?, sig, Pwl::max),
        Formula::Always(i, a) => {
            let c = pwl(a, sig, opts)?;
            let end = temporal_end(f, i, c.start(), c.end(), sig, opts)?;
            Ok(c.window_min(i.lo, i.hi, end))
        }
        Formula::Eventually(i, a) => {
            let c = pwl(a, sig, opts)?;
            let end = temporal_end(f, i, c.start(), c.end(), sig, opts)?;
            Ok(c.window_max(i.lo, i.hi, end))
        }
        Formula::Until(i, a, b) => {
            let (pa, pb) = (pwl(a, sig, opts)?, pwl(b, sig, opts)?);
            let start = pa.start().max(pb.start());
            let common = pa.end().min(pb.end());
            let horizon_err = || {
                let (s0, s1) = bounds(sig);
                Error::HorizonExceeded { needed: s0 + f.horizon(), available: s1 }
            };
            let phi = pa.restrict(start, common).ok_or_else(horizon_err)?;
            let psi = pb.restrict(start, common).ok_or_else(horizon_err)?;
            let span = i.hi - i.lo;
            let inner = Interval { lo: 0.0, hi: span, lo_open: false, hi_open: i.hi_open };
            let w_end = temporal_end(f, &inner, start, phi.end(), sig, opts)?;
            let w = until_window(&phi, &psi, span, w_end);
            if i.lo == 0.0 {
                return Ok(w);
            }
            let end = temporal_end(f, i, start, phi.end(), sig, opts)?;
            let prefix = phi.window_min(0.0, i.lo, phi.end() - i.lo);
            let shifted = w.shift_left(i.lo);
            let out = prefix.min(&shifted).ok_or_else(horizon_err)?;
            Ok(out.restrict(start, end).unwrap_or(out))
        }
    }
}

fn combine(
    f: &Formula,
    a: &Pwl,
    b: &Pwl,
    sig: &Signal,
    op: fn(&Pwl, &Pwl) -> Option<Pwl>,
) -> Result<Pwl> {
    op(a, b).ok_or_else(|| {
        let (s0, s1) = bounds(sig);
        Error::HorizonExceeded { needed: s0 + f.horizon(), available: s1 }
    })
}

enum Val {
    C(f64),
    F(Pwl),
}

fn channel_pwl(name: &str, sig: &Signal) -> Result<Pwl> {
    let v = sig.channel(name).ok_or_else(|| Error::MissingChannel(name.into()))?;
    Ok(Pwl::raw(sig.times().to_vec(), v.to_vec()))
}

fn expr_val(e: &Expr, sig: &Signal) -> Result<Val> {
    let bin = |a: &Expr, b: &Expr, op: fn(f64, f64) -> f64| -> Result<Val> {
        Ok(match (expr_val(a, sig)?, expr_val(b, sig)?) {
            (Val::C(x), Val::C(y)) => Val::C(op(x, y)),
            (Val::C(x), Val::F(g)) => Val::F(g.map_values(|y| op(x, y))),
            (Val::F(g), Val::C(y)) => Val::F(g.map_values(|x| op(x, y))),
            (Val::F(g), Val::F(h)) => Val::F(g.zip_with(&h, op).ok_or(Error::NonFiniteAtom)?),
        })
    };
    let v = match e {
        Expr::Const(c) => Val::C(*c),
        Expr::Channel(name) => Val::F(channel_pwl(name, sig)?),
        Expr::Neg(a) => match expr_val(a, sig)? {
            Val::C(x) => Val::C(-x),
            Val::F(g) => Val::F(g.neg()),
        },
        Expr::Abs(a) => match expr_val(a, sig)? {
            Val::C(x) => Val::C(x.abs()),
            Val::F(g) => Val::F(g.abs()),
        },
        Expr::Add(a, b) => bin(a, b, |x, y| x + y)?,
        Expr::Sub(a, b) => bin(a, b, |x, y| x - y)?,
        Expr::Mul(a, b) => bin(a, b, |x, y| x * y)?,
        Expr::Div(a, b) => bin(a, b, |x, y| x / y)?,
    };
    let finite = match &v {
        Val::C(x) => x.is_finite(),
        Val::F(g) => g.values().iter().all(|x| x.is_finite()),
    };
    if finite {
        Ok(v)
    } else {
        Err(Error::NonFiniteAtom)
    }
}

/// Robustness signal of the atom `e >= 0`.
pub(crate) fn atom(e: &Expr, sig: &Signal) -> Result<Pwl> {
    Ok(match expr_val(e, sig)? {
        Val::F(g) => g,
        Val::C(c) => {
            let (s0, s1) = bounds(sig);
            Pwl::constant(s0, s1, c)
        }
    })
}

/// Knot values `|x_i - x_{i-1}| - θ`, with `-θ` at the first sample.
pub(crate) fn step(channel: &str, theta: f64, sig: &Signal) -> Result<Pwl> {
    let x = sig.channel(channel).ok_or_else(|| Error::MissingChannel(channel.into()))?;
    let v: Vec<f64> = (0..x.len())
        .map(|i| if i == 0 { -theta } else { (x[i] - x[i - 1]).abs() - theta })
        .collect();
    if v.iter().any(|y| !y.is_finite()) {
        return Err(Error::NonFiniteAtom);
    }
    Ok(Pwl::raw(sig.times().to_vec(), v))
}
