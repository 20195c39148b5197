use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// Arithmetic over signal channels.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    Channel(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Abs(Box<Expr>),
}

#[allow(clippy::should_implement_trait)]
impl Expr {
    pub fn channel(name: impl Into<String>) -> Self {
        Expr::Channel(name.into())
    }

    pub fn sub(a: Expr, b: Expr) -> Self {
        Expr::Sub(Box::new(a), Box::new(b))
    }

    pub fn add(a: Expr, b: Expr) -> Self {
        Expr::Add(Box::new(a), Box::new(b))
    }

    pub fn abs(a: Expr) -> Self {
        Expr::Abs(Box::new(a))
    }

    fn collect_channels<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            Expr::Const(_) => {}
            Expr::Channel(c) => out.push(c),
            Expr::Neg(a) | Expr::Abs(a) => a.collect_channels(out),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.collect_channels(out);
                b.collect_channels(out);
            }
        }
    }
}

/// Time interval of a temporal operator. `hi` may be `f64::INFINITY`.
///
/// Openness is kept for printing; over continuous signals an open and a
/// closed bound give the same robustness.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
    pub lo_open: bool,
    pub hi_open: bool,
}

impl Interval {
    pub fn closed(lo: f64, hi: f64) -> Self {
        Self { lo, hi, lo_open: false, hi_open: false }
    }

    /// `[0, ∞)`.
    pub fn unbounded() -> Self {
        Self { lo: 0.0, hi: f64::INFINITY, lo_open: false, hi_open: true }
    }

    pub fn is_bounded(&self) -> bool {
        self.hi.is_finite()
    }

    pub fn is_valid(&self) -> bool {
        self.lo.is_finite() && self.lo >= 0.0 && !self.hi.is_nan() && self.lo <= self.hi
    }
}

/// Signal Temporal Logic formula. Atoms are `expr >= 0`.
#[derive(Debug, Clone, PartialEq)]
pub enum Formula {
    Atom(Expr),
    /// `|x(t) - x(t - δ)| >= θ` with δ the local sample step.
    Step { channel: String, theta: f64 },
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Always(Interval, Box<Formula>),
    Eventually(Interval, Box<Formula>),
    /// `lhs U_I rhs`: `rhs` eventually holds within `I`, `lhs` until then.
    Until(Interval, Box<Formula>, Box<Formula>),
}

#[allow(clippy::should_implement_trait)]
impl Formula {
    pub fn atom(e: Expr) -> Self {
        Formula::Atom(e)
    }

    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn always(i: Interval, f: Formula) -> Self {
        Formula::Always(i, Box::new(f))
    }

    pub fn eventually(i: Interval, f: Formula) -> Self {
        Formula::Eventually(i, Box::new(f))
    }

    pub fn until(i: Interval, a: Formula, b: Formula) -> Self {
        Formula::Until(i, Box::new(a), Box::new(b))
    }

    /// Channel names referenced, sorted and deduplicated.
    pub fn channels(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_channels(&mut out);
        out.sort_unstable();
        out.dedup();
        out
    }

    fn collect_channels<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            Formula::Atom(e) => e.collect_channels(out),
            Formula::Step { channel, .. } => out.push(channel),
            Formula::Not(a) | Formula::Always(_, a) | Formula::Eventually(_, a) => a.collect_channels(out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Until(_, a, b) => {
                a.collect_channels(out);
                b.collect_channels(out);
            }
        }
    }

    /// How far past the evaluation time the formula looks. Unbounded
    /// intervals count only their lower bound, since they clip to the end of
    /// the signal.
    pub fn horizon(&self) -> f64 {
        let reach = |i: &Interval| if i.is_bounded() { i.hi } else { i.lo };
        match self {
            Formula::Atom(_) | Formula::Step { .. } => 0.0,
            Formula::Not(a) => a.horizon(),
            Formula::And(a, b) | Formula::Or(a, b) => a.horizon().max(b.horizon()),
            Formula::Always(i, a) | Formula::Eventually(i, a) => reach(i) + a.horizon(),
            Formula::Until(i, a, b) => reach(i) + a.horizon().max(b.horizon()),
        }
    }

    /// Nesting depth; atoms have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Formula::Atom(_) | Formula::Step { .. } => 0,
            Formula::Not(a) | Formula::Always(_, a) | Formula::Eventually(_, a) => 1 + a.depth(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Until(_, a, b) => 1 + a.depth().max(b.depth()),
        }
    }
}

fn fmt_num(f: &mut fmt::Formatter<'_>, x: f64) -> fmt::Result {
    if x.is_infinite() {
        f.write_str(if x > 0.0 { "inf" } else { "-inf" })
    } else if x < 0.0 {
        write!(f, "({x:?})")
    } else {
        write!(f, "{x:?}")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) => fmt_num(f, *c),
            Expr::Channel(c) => f.write_str(c),
            Expr::Neg(a) => write!(f, "-({a})"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "({a} * {b})"),
            Expr::Div(a, b) => write!(f, "({a} / {b})"),
            Expr::Abs(a) => write!(f, "abs({a})"),
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if self.lo_open { "(" } else { "[" })?;
        fmt_num(f, self.lo)?;
        f.write_str(",")?;
        fmt_num(f, self.hi)?;
        f.write_str(if self.hi_open || self.hi.is_infinite() { ")" } else { "]" })
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Atom(e) => write!(f, "({e} >= 0)"),
            Formula::Step { channel, theta } => write!(f, "step({channel}, {theta:?})"),
            Formula::Not(a) => write!(f, "not {a}"),
            Formula::And(a, b) => write!(f, "({a} and {b})"),
            Formula::Or(a, b) => write!(f, "({a} or {b})"),
            Formula::Always(i, a) => write!(f, "alw{i} {a}"),
            Formula::Eventually(i, a) => write!(f, "ev{i} {a}"),
            Formula::Until(i, a, b) => write!(f, "({a} until{i} {b})"),
        }
    }
}
