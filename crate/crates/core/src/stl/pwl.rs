//! Continuous piecewise-linear functions of time and the exact operations the
//! robustness semantics needs on them.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::close;

/// Continuous piecewise-linear function on `[start, end]`, given by knots.
///
/// A single knot describes a function on a one-point domain.
#[derive(Debug, Clone, PartialEq)]
pub struct Pwl {
    t: Vec<f64>,
    v: Vec<f64>,
}

impl Pwl {
    pub fn new(t: Vec<f64>, v: Vec<f64>) -> Result<Self> {
        if t.is_empty() || t.len() != v.len() {
            return Err(Error::InvalidSignal("knot and value lists must be non-empty and equally long".into()));
        }
        if t.windows(2).any(|w| w[0] >= w[1]) || t.iter().chain(&v).any(|x| !x.is_finite()) {
            return Err(Error::InvalidSignal("knots must be finite and strictly increasing".into()));
        }
        Ok(Self { t, v })
    }

    pub(crate) fn raw(t: Vec<f64>, v: Vec<f64>) -> Self {
        debug_assert!(!t.is_empty() && t.len() == v.len());
        debug_assert!(t.windows(2).all(|w| w[0] < w[1]));
        Self { t, v }
    }

    pub fn constant(start: f64, end: f64, c: f64) -> Self {
        if end > start {
            Self { t: alloc::vec![start, end], v: alloc::vec![c, c] }
        } else {
            Self { t: alloc::vec![start], v: alloc::vec![c] }
        }
    }

    pub fn knots(&self) -> &[f64] {
        &self.t
    }

    pub fn values(&self) -> &[f64] {
        &self.v
    }

    pub fn start(&self) -> f64 {
        self.t[0]
    }

    pub fn end(&self) -> f64 {
        self.t[self.t.len() - 1]
    }

    /// Value at `t`; outside the domain the nearest end value is returned.
    pub fn eval(&self, t: f64) -> f64 {
        let n = self.t.len();
        let p = self.t.partition_point(|&k| k < t);
        if p == n {
            return self.v[n - 1];
        }
        if p == 0 || self.t[p] == t {
            return self.v[p];
        }
        let (t0, t1) = (self.t[p - 1], self.t[p]);
        let (v0, v1) = (self.v[p - 1], self.v[p]);
        v0 + (t - t0) / (t1 - t0) * (v1 - v0)
    }

    pub fn neg(&self) -> Self {
        Self { t: self.t.clone(), v: self.v.iter().map(|x| -x).collect() }
    }

    pub fn map_values(&self, f: impl Fn(f64) -> f64) -> Self {
        Self { t: self.t.clone(), v: self.v.iter().map(|&x| f(x)).collect() }
    }

    /// The function on `[lo, hi] ∩ domain`, or `None` if that is empty.
    pub fn restrict(&self, lo: f64, hi: f64) -> Option<Self> {
        let lo = lo.max(self.start());
        let hi = hi.min(self.end());
        if hi < lo {
            return None;
        }
        let mut t = Vec::new();
        let mut v = Vec::new();
        push_knot(&mut t, &mut v, lo, self.eval(lo));
        for (&k, &x) in self.t.iter().zip(&self.v) {
            if k > lo && k < hi {
                push_knot(&mut t, &mut v, k, x);
            }
        }
        push_knot(&mut t, &mut v, hi, self.eval(hi));
        Some(Self { t, v })
    }

    /// `g(t) = f(t + d)`.
    pub fn shift_left(&self, d: f64) -> Self {
        let mut t = Vec::with_capacity(self.t.len());
        let mut v = Vec::with_capacity(self.t.len());
        for (&k, &x) in self.t.iter().zip(&self.v) {
            push_knot(&mut t, &mut v, k - d, x);
        }
        Self { t, v }
    }

    /// Pointwise combination evaluated at the union of both knot sets, over
    /// the common domain. Exact for affine `op`.
    pub fn zip_with(&self, other: &Self, op: impl Fn(f64, f64) -> f64) -> Option<Self> {
        let ks = merged_knots(self, other)?;
        let v = ks.iter().map(|&k| op(self.eval(k), other.eval(k))).collect();
        Some(Self { t: ks, v })
    }

    /// Pointwise minimum with crossing points inserted, so the result is
    /// exact. `None` if the domains do not overlap.
    pub fn min(&self, other: &Self) -> Option<Self> {
        self.envelope(other, f64::min)
    }

    pub fn max(&self, other: &Self) -> Option<Self> {
        self.envelope(other, f64::max)
    }

    fn envelope(&self, other: &Self, pick: fn(f64, f64) -> f64) -> Option<Self> {
        let ks = merged_knots(self, other)?;
        let mut t = Vec::with_capacity(ks.len());
        let mut v = Vec::with_capacity(ks.len());
        let mut prev: Option<(f64, f64)> = None;
        for &k in &ks {
            let (a, b) = (self.eval(k), other.eval(k));
            let d = a - b;
            if let Some((pk, pd)) = prev {
                if let Some(c) = crossing(pk, pd, k, d) {
                    push_knot(&mut t, &mut v, c, pick(self.eval(c), other.eval(c)));
                }
            }
            push_knot(&mut t, &mut v, k, pick(a, b));
            prev = Some((k, d));
        }
        Some(Self { t, v })
    }

    /// `|f|` with zero crossings inserted.
    pub fn abs(&self) -> Self {
        let mut t = Vec::with_capacity(self.t.len());
        let mut v = Vec::with_capacity(self.t.len());
        for i in 0..self.t.len() {
            if i > 0 {
                if let Some(c) = crossing(self.t[i - 1], self.v[i - 1], self.t[i], self.v[i]) {
                    push_knot(&mut t, &mut v, c, 0.0);
                }
            }
            push_knot(&mut t, &mut v, self.t[i], self.v[i].abs());
        }
        Self { t, v }
    }

    /// Sliding-window minimum
    /// `g(t) = min { f(s) : s ∈ [t + a, min(t + b, end)] }` for
    /// `t ∈ [start, out_end]`. `b` may be infinite. The result is exact:
    /// it carries every knot where the minimiser changes.
    pub fn window_min(&self, a: f64, b: f64, out_end: f64) -> Self {
        let t0 = self.start();
        let end = self.end();
        let out_end = out_end.max(t0);
        let upper = |x: f64| if b.is_finite() { (x + b).min(end) } else { end };
        let rmq = RangeMin::new(&self.v);
        let exact = |x: f64| {
            let lo = x + a;
            let hi = upper(x);
            let mut m = self.eval(lo).min(self.eval(hi));
            let i = self.t.partition_point(|&k| k < lo);
            let j = self.t.partition_point(|&k| k <= hi);
            if i < j {
                m = m.min(rmq.query(i, j));
            }
            m
        };

        let mut breaks: Vec<f64> = Vec::with_capacity(2 * self.t.len() + 3);
        breaks.push(t0);
        breaks.push(out_end);
        for &k in &self.t {
            breaks.push(k - a);
            if b.is_finite() {
                breaks.push(k - b);
            }
        }
        if b.is_finite() {
            breaks.push(end - b);
        }
        breaks.retain(|&x| x >= t0 && x <= out_end);
        breaks.sort_unstable_by(f64::total_cmp);

        let mut t = Vec::with_capacity(breaks.len());
        let mut v = Vec::with_capacity(breaks.len());
        let mut pieces: Vec<f64> = Vec::with_capacity(breaks.len());
        for x in breaks {
            if pieces.last().is_none_or(|&l| !close(l, x)) {
                pieces.push(x);
            }
        }
        if pieces.len() > 1 && close(pieces[pieces.len() - 1], out_end) {
            let n = pieces.len();
            pieces[n - 1] = out_end;
        }

        let mut cand: Vec<f64> = Vec::new();
        for w in pieces.windows(2) {
            let (p, q) = (w[0], w[1]);
            push_knot(&mut t, &mut v, p, exact(p));
            let m = 0.5 * (p + q);
            let i = self.t.partition_point(|&k| k <= m + a);
            let j = self.t.partition_point(|&k| k < upper(m));
            let lines = [
                (self.eval(p + a), self.eval(q + a)),
                (self.eval(upper(p)), self.eval(upper(q))),
                if i < j {
                    let c = rmq.query(i, j);
                    (c, c)
                } else {
                    (f64::INFINITY, f64::INFINITY)
                },
            ];
            cand.clear();
            line_crossings(p, q, &lines, &mut cand);
            for &c in &cand {
                push_knot(&mut t, &mut v, c, exact(c));
            }
        }
        let last = *pieces.last().unwrap_or(&t0);
        push_knot(&mut t, &mut v, last, exact(last));
        Self { t, v }
    }

    /// Sliding-window maximum, the dual of [`Pwl::window_min`].
    pub fn window_max(&self, a: f64, b: f64, out_end: f64) -> Self {
        self.neg().window_min(a, b, out_end).neg()
    }
}

/// Robustness of an until whose interval starts at 0:
/// `W(s) = max(ψ(s), sup_{t ∈ [s, up(s)]} min(ψ(t), inf_{[s, t]} φ))`
/// with `up(s) = min(s + c, end)`, for `s ∈ [start, out_end]`. `c` may be
/// infinite. Both inputs must share a domain.
pub(crate) fn until_window(phi: &Pwl, psi: &Pwl, c: f64, out_end: f64) -> Pwl {
    let ks = merged_knots(phi, psi).expect("until operands share a domain");
    let t0 = ks[0];
    let end = ks[ks.len() - 1];
    let out_end = out_end.max(t0);

    // common knots, with the crossings of ψ - φ inserted
    let mut kt = Vec::with_capacity(ks.len());
    let mut kpsi = Vec::with_capacity(ks.len());
    let mut kphi = Vec::with_capacity(ks.len());
    let mut prev: Option<(f64, f64)> = None;
    for &k in &ks {
        let d = psi.eval(k) - phi.eval(k);
        if let Some((pk, pd)) = prev {
            if let Some(x) = crossing(pk, pd, k, d) {
                let len = kt.len();
                push_knot(&mut kt, &mut kpsi, x, psi.eval(x));
                if kt.len() > len {
                    kphi.push(phi.eval(x));
                }
            }
        }
        let len = kt.len();
        push_knot(&mut kt, &mut kpsi, k, psi.eval(k));
        if kt.len() > len {
            kphi.push(phi.eval(k));
        }
        prev = Some((k, d));
    }
    let psi_m = Pwl::raw(kt.clone(), kpsi.clone());
    let phi_m = Pwl::raw(kt.clone(), kphi.clone());
    let up = |s: f64| if c.is_finite() { (s + c).min(end) } else { end };

    // sup over [from, to] of min(ψ(t), min(m0, inf_{[from, t]} φ))
    let sweep = |from: f64, to: f64, m0: f64| -> f64 {
        let mut best = f64::NEG_INFINITY;
        let mut m = m0.min(phi_m.eval(from));
        let (mut x, mut px, mut fx) = (from, psi_m.eval(from), phi_m.eval(from));
        best = best.max(px.min(m).min(fx));
        let mut j = kt.partition_point(|&k| k <= from);
        loop {
            let (y, py, fy) = if j < kt.len() && kt[j] < to {
                (kt[j], kpsi[j], kphi[j])
            } else {
                (to, psi_m.eval(to), phi_m.eval(to))
            };
            if y > x {
                let h = |w: f64| (px + w * (py - px)).min(m).min(fx + w * (fy - fx));
                best = best.max(h(1.0));
                for (d0, d1) in [(px - fx, py - fy), (px - m, py - m), (fx - m, fy - m)] {
                    if (d0 < 0.0 && d1 > 0.0) || (d0 > 0.0 && d1 < 0.0) {
                        best = best.max(h(d0 / (d0 - d1)));
                    }
                }
                m = m.min(fy);
            }
            if y >= to {
                return best;
            }
            (x, px, fx) = (y, py, fy);
            j += 1;
        }
    };
    let exact = |s: f64| psi_m.eval(s).max(sweep(s, up(s), f64::INFINITY));

    let mut breaks: Vec<f64> = Vec::with_capacity(2 * kt.len() + 3);
    breaks.push(t0);
    breaks.push(out_end);
    breaks.extend_from_slice(&kt);
    if c.is_finite() {
        breaks.extend(kt.iter().map(|&k| k - c));
        breaks.push(end - c);
    }
    breaks.retain(|&x| x >= t0 && x <= out_end);
    breaks.sort_unstable_by(f64::total_cmp);
    let mut pieces: Vec<f64> = Vec::with_capacity(breaks.len());
    for x in breaks {
        if pieces.last().is_none_or(|&l| !close(l, x)) {
            pieces.push(x);
        }
    }
    if pieces.len() > 1 && close(pieces[pieces.len() - 1], out_end) {
        let n = pieces.len();
        pieces[n - 1] = out_end;
    }

    let rmq = RangeMin::new(&kphi);
    let mut t = Vec::with_capacity(pieces.len());
    let mut v = Vec::with_capacity(pieces.len());
    let mut items: Vec<(f64, f64)> = Vec::with_capacity(10);
    let mut cand: Vec<f64> = Vec::new();
    for w in pieces.windows(2) {
        let (p, q) = (w[0], w[1]);
        push_knot(&mut t, &mut v, p, exact(p));
        let mid = 0.5 * (p + q);
        let i0 = kt.partition_point(|&k| k <= mid);
        let i1 = kt.partition_point(|&k| k < up(mid));
        items.clear();
        items.push((psi_m.eval(p), psi_m.eval(q)));
        items.push((phi_m.eval(p), phi_m.eval(q)));
        items.push((psi_m.eval(up(p)), psi_m.eval(up(q))));
        items.push((phi_m.eval(up(p)), phi_m.eval(up(q))));
        if i0 < i1 {
            let last = i1 - 1;
            let h_star = sweep(kt[i0], kt[last], f64::INFINITY);
            for k in [kpsi[i0], kphi[i0], kpsi[last], kphi[last], rmq.query(i0, i1), h_star] {
                items.push((k, k));
            }
        }
        cand.clear();
        line_crossings(p, q, &items, &mut cand);
        for &x in &cand {
            push_knot(&mut t, &mut v, x, exact(x));
        }
    }
    let last = *pieces.last().unwrap_or(&t0);
    push_knot(&mut t, &mut v, last, exact(last));
    Pwl { t, v }
}

/// Appends a knot, dropping it when it is within tolerance of the previous
/// one (the earlier value wins).
pub(crate) fn push_knot(t: &mut Vec<f64>, v: &mut Vec<f64>, k: f64, x: f64) {
    if let Some(&last) = t.last() {
        if k <= last || close(k, last) {
            return;
        }
    }
    t.push(k);
    v.push(x);
}

/// Zero crossing of the segment from `(t0, d0)` to `(t1, d1)` strictly
/// inside it, if the sign changes strictly.
pub(crate) fn crossing(t0: f64, d0: f64, t1: f64, d1: f64) -> Option<f64> {
    if (d0 < 0.0 && d1 > 0.0) || (d0 > 0.0 && d1 < 0.0) {
        let c = t0 + (t1 - t0) * (d0 / (d0 - d1));
        if c > t0 && c < t1 && !close(c, t0) && !close(c, t1) {
            return Some(c);
        }
    }
    None
}

/// Sorted pairwise crossing points in `(p, q)` of lines given by their values
/// at `p` and `q`. Infinite lines never cross.
pub(crate) fn line_crossings(p: f64, q: f64, lines: &[(f64, f64)], out: &mut Vec<f64>) {
    for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            let (a, b) = (lines[i], lines[j]);
            if [a.0, a.1, b.0, b.1].iter().any(|x| !x.is_finite()) {
                continue;
            }
            if let Some(c) = crossing(p, a.0 - b.0, q, a.1 - b.1) {
                out.push(c);
            }
        }
    }
    out.sort_unstable_by(f64::total_cmp);
}

/// Union of both knot lists over the common domain.
pub(crate) fn merged_knots(a: &Pwl, b: &Pwl) -> Option<Vec<f64>> {
    if a.t == b.t {
        return Some(a.t.clone());
    }
    let lo = a.start().max(b.start());
    let mut hi = a.end().min(b.end());
    if hi < lo {
        if !close(hi, lo) {
            return None;
        }
        hi = lo;
    }
    let mut inner: Vec<f64> = a.t.iter().chain(&b.t).copied().filter(|&k| k > lo && k < hi).collect();
    inner.sort_unstable_by(f64::total_cmp);
    let mut out = Vec::with_capacity(inner.len() + 2);
    out.push(lo);
    for k in inner {
        if !close(k, out[out.len() - 1]) {
            out.push(k);
        }
    }
    if hi > lo {
        let n = out.len();
        if !close(out[n - 1], hi) {
            out.push(hi);
        } else if n > 1 {
            out[n - 1] = hi;
        }
    }
    Some(out)
}

/// Sparse table for range-minimum queries over a fixed slice.
struct RangeMin {
    levels: Vec<Vec<f64>>,
}

impl RangeMin {
    fn new(v: &[f64]) -> Self {
        let mut levels = alloc::vec![v.to_vec()];
        let mut w = 1;
        while 2 * w <= v.len() {
            let prev = &levels[levels.len() - 1];
            let next: Vec<f64> = (0..=v.len() - 2 * w).map(|i| prev[i].min(prev[i + w])).collect();
            levels.push(next);
            w *= 2;
        }
        Self { levels }
    }

    /// Minimum over `i..j`, `i < j`.
    fn query(&self, i: usize, j: usize) -> f64 {
        let len = j - i;
        let lvl = (usize::BITS - 1 - len.leading_zeros()) as usize;
        let w = 1 << lvl;
        self.levels[lvl][i].min(self.levels[lvl][j - w])
    }
}
