//! Boolean semantics over sets of satisfying times.
//!
//! Each sub-formula maps to a finite union of closed intervals. Negation
//! takes the closure of the complement, so every set lies between
//! `{ρ > 0}` and `{ρ >= 0}` of the matching robustness signal.

use alloc::vec::Vec;

use super::formula::Formula;
use super::pwl::Pwl;
use super::robust::{self, check_signal, snap_into, temporal_end, EvalOptions};
use super::signal::Signal;
use crate::error::{Error, Result};
use crate::math::close;

/// `(x, t) ⊨ φ` with strict horizons.
pub fn eval_bool(f: &Formula, sig: &Signal, t: f64) -> Result<bool> {
    eval_bool_with(f, sig, t, EvalOptions::default())
}

pub fn eval_bool_with(f: &Formula, sig: &Signal, t: f64, opts: EvalOptions) -> Result<bool> {
    check_signal(f, sig)?;
    let s = sat(f, sig, opts)?;
    let t = snap_into(t, s.lo, s.hi, sig)?;
    Ok(s.contains(t))
}

/// Satisfying times of `f`, as sorted disjoint closed intervals.
pub fn satisfaction_set(f: &Formula, sig: &Signal, opts: EvalOptions) -> Result<Vec<(f64, f64)>> {
    check_signal(f, sig)?;
    Ok(sat(f, sig, opts)?.iv)
}

#[derive(Debug, Clone)]
struct Sat {
    lo: f64,
    hi: f64,
    iv: Vec<(f64, f64)>,
}

impl Sat {
    fn contains(&self, t: f64) -> bool {
        let p = self.iv.partition_point(|&(_, b)| b < t);
        p < self.iv.len() && self.iv[p].0 <= t
    }

    /// Sorts, clips to the domain and merges overlapping or touching pieces.
    fn normalized(lo: f64, hi: f64, mut iv: Vec<(f64, f64)>) -> Self {
        iv.retain(|&(a, b)| a <= b && b >= lo && a <= hi);
        for p in iv.iter_mut() {
            p.0 = p.0.max(lo);
            p.1 = p.1.min(hi);
        }
        iv.sort_unstable_by(|x, y| x.0.total_cmp(&y.0));
        let mut out: Vec<(f64, f64)> = Vec::with_capacity(iv.len());
        for (a, b) in iv {
            match out.last_mut() {
                Some(last) if a <= last.1 => last.1 = last.1.max(b),
                _ => out.push((a, b)),
            }
        }
        Self { lo, hi, iv: out }
    }

    fn complement_closure(&self) -> Self {
        let Some(first) = self.iv.first() else {
            return Self { lo: self.lo, hi: self.hi, iv: alloc::vec![(self.lo, self.hi)] };
        };
        let mut out = Vec::with_capacity(self.iv.len() + 1);
        if first.0 > self.lo {
            out.push((self.lo, first.0));
        }
        for w in self.iv.windows(2) {
            out.push((w[0].1, w[1].0));
        }
        let last = self.iv[self.iv.len() - 1];
        if last.1 < self.hi {
            out.push((last.1, self.hi));
        }
        Self::normalized(self.lo, self.hi, out)
    }

    fn intersect(&self, other: &Self) -> Self {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.iv.len() && j < other.iv.len() {
            let (a0, a1) = self.iv[i];
            let (b0, b1) = other.iv[j];
            let (s, e) = (a0.max(b0), a1.min(b1));
            if s <= e {
                out.push((s, e));
            }
            if a1 < b1 {
                i += 1;
            } else {
                j += 1;
            }
        }
        Self::normalized(lo, hi, out)
    }

    fn union(&self, other: &Self) -> Self {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        let mut all = self.iv.clone();
        all.extend_from_slice(&other.iv);
        Self::normalized(lo, hi, all)
    }
}

fn horizon_err(f: &Formula, sig: &Signal) -> Error {
    let s0 = sig.start().unwrap_or(0.0);
    Error::HorizonExceeded { needed: s0 + f.horizon(), available: sig.end().unwrap_or(0.0) }
}

/// `{t : g(t) >= 0}` of a piecewise-linear function.
fn nonnegative(g: &Pwl) -> Sat {
    let (t, v) = (g.knots(), g.values());
    let mut iv = Vec::new();
    if t.len() == 1 {
        if v[0] >= 0.0 {
            iv.push((t[0], t[0]));
        }
        return Sat::normalized(t[0], t[0], iv);
    }
    let cross = |i: usize| {
        let c = t[i] + (t[i + 1] - t[i]) * (v[i] / (v[i] - v[i + 1]));
        c.clamp(t[i], t[i + 1])
    };
    for i in 0..t.len() - 1 {
        match (v[i] >= 0.0, v[i + 1] >= 0.0) {
            (true, true) => iv.push((t[i], t[i + 1])),
            (true, false) => iv.push((t[i], if v[i] == 0.0 { t[i] } else { cross(i) })),
            (false, true) => iv.push((if v[i + 1] == 0.0 { t[i + 1] } else { cross(i) }, t[i + 1])),
            (false, false) => {}
        }
    }
    Sat::normalized(t[0], t[t.len() - 1], iv)
}

/// Upper end of a temporal operator's output when the operand's satisfying
/// piece reaches the end of its domain.
fn reaches_end(d: f64, child_hi: f64) -> bool {
    d >= child_hi || close(d, child_hi)
}

fn sat(f: &Formula, sig: &Signal, opts: EvalOptions) -> Result<Sat> {
    match f {
        Formula::Atom(e) => Ok(nonnegative(&robust::atom(e, sig)?)),
        Formula::Step { channel, theta } => Ok(nonnegative(&robust::step(channel, *theta, sig)?)),
        Formula::Not(a) => Ok(sat(a, sig, opts)?.complement_closure()),
        Formula::And(a, b) => {
            let s = sat(a, sig, opts)?.intersect(&sat(b, sig, opts)?);
            if s.hi < s.lo {
                return Err(horizon_err(f, sig));
            }
            Ok(s)
        }
        Formula::Or(a, b) => {
            let s = sat(a, sig, opts)?.union(&sat(b, sig, opts)?);
            if s.hi < s.lo {
                return Err(horizon_err(f, sig));
            }
            Ok(s)
        }
        Formula::Always(i, a) => {
            let c = sat(a, sig, opts)?;
            let end = temporal_end(f, i, c.lo, c.hi, sig, opts)?;
            let clipped = !i.is_bounded() || opts.truncate;
            let iv = c
                .iv
                .iter()
                .map(|&(lo, hi)| {
                    let upper = if clipped && reaches_end(hi, c.hi) { end } else { hi - i.hi };
                    (lo - i.lo, upper)
                })
                .collect();
            Ok(Sat::normalized(c.lo, end, iv))
        }
        Formula::Eventually(i, a) => {
            let c = sat(a, sig, opts)?;
            let end = temporal_end(f, i, c.lo, c.hi, sig, opts)?;
            let iv = c.iv.iter().map(|&(lo, hi)| (lo - i.hi, hi - i.lo)).collect();
            Ok(Sat::normalized(c.lo, end, iv))
        }
        Formula::Until(i, a, b) => {
            let (s1, s2) = (sat(a, sig, opts)?, sat(b, sig, opts)?);
            let lo = s1.lo.max(s2.lo);
            let common = s1.hi.min(s2.hi);
            if common < lo && !close(common, lo) {
                return Err(horizon_err(f, sig));
            }
            let common = common.max(lo);
            let end = temporal_end(f, i, lo, common, sig, opts)?;
            let s1 = Sat::normalized(lo, common, s1.iv);
            let s2 = Sat::normalized(lo, common, s2.iv);
            let mut iv = Vec::new();
            for &(c, d) in &s1.iv {
                for &(e, g) in &s2.iv {
                    if d >= e {
                        iv.push((c.max(e - i.hi), d.min(g) - i.lo));
                    }
                }
            }
            if i.lo == 0.0 {
                iv.extend_from_slice(&s2.iv);
            }
            Ok(Sat::normalized(lo, end, iv))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stl::parse::parse_formula;
    use alloc::vec;

    fn sig(times: Vec<f64>, x: Vec<f64>) -> Signal {
        Signal::new(times).unwrap().with_channel("x", x).unwrap()
    }

    #[test]
    fn toy_examples() {
        let f = parse_formula("alw[10,30](abs(x - 1) < 0.4)").unwrap();
        assert!(eval_bool(&f, &sig(vec![0.0, 30.0], vec![1.0, 1.0]), 0.0).unwrap());
        assert!(!eval_bool(&f, &sig(vec![0.0, 30.0], vec![2.0, 2.0]), 0.0).unwrap());
    }

    #[test]
    fn sets_of_simple_formulas() {
        let s = sig(vec![0.0, 1.0, 2.0, 3.0], vec![-1.0, 1.0, 1.0, -1.0]);
        let atom = parse_formula("x >= 0").unwrap();
        assert_eq!(satisfaction_set(&atom, &s, EvalOptions::default()).unwrap(), vec![(0.5, 2.5)]);
        let not = parse_formula("not x >= 0").unwrap();
        assert_eq!(satisfaction_set(&not, &s, EvalOptions::default()).unwrap(), vec![(0.0, 0.5), (2.5, 3.0)]);
        let alw = parse_formula("alw[0,1] x >= 0").unwrap();
        assert_eq!(satisfaction_set(&alw, &s, EvalOptions::default()).unwrap(), vec![(0.5, 1.5)]);
        let ev = parse_formula("ev[0,1] x >= 0").unwrap();
        assert_eq!(satisfaction_set(&ev, &s, EvalOptions::default()).unwrap(), vec![(0.0, 2.0)]);
    }

    #[test]
    fn truncated_always_reaches_end() {
        let s = sig(vec![0.0, 1.0, 2.0], vec![-1.0, 1.0, 1.0]);
        let f = parse_formula("alw[0,5] x >= 0").unwrap();
        let t = EvalOptions { truncate: true };
        assert_eq!(satisfaction_set(&f, &s, t).unwrap(), vec![(0.5, 2.0)]);
        assert!(eval_bool(&f, &s, 0.0).is_err());
    }

    #[test]
    fn until_sets() {
        let s = Signal::new(vec![0.0, 4.0])
            .unwrap()
            .with_channel("x", vec![0.0, 4.0])
            .unwrap()
            .with_channel("y", vec![1.0, 1.0])
            .unwrap();
        // x >= 3 first holds at t=3; y holds everywhere
        let f = parse_formula("(y > 0) until[1,2] (x >= 3)").unwrap();
        assert_eq!(satisfaction_set(&f, &s, EvalOptions::default()).unwrap(), vec![(1.0, 2.0)]);
    }
}
