//! Text syntax for formulas.
//!
//! ```text
//! formula  := disj ( ("=>" | "->") formula )?
//! disj     := conj ( ("or" | "||") conj )*
//! conj     := until ( ("and" | "&&") until )*
//! until    := unary ( "until" interval? unary )*
//! unary    := ("not" | "!") unary
//!           | ("alw" | "always") interval? unary
//!           | ("ev" | "eventually") interval? unary
//!           | primary
//! primary  := "step" "(" name "," number ")"
//!           | expr ("<" | "<=" | ">" | ">=" | "==") expr
//!           | "(" formula ")"
//! interval := ("[" | "(") number "," (number | "inf") ("]" | ")")
//! expr     := term (("+" | "-") term)*
//! term     := factor (("*" | "/") factor)*
//! factor   := "-" factor | number | name | "abs" "(" expr ")" | "(" expr ")"
//! ```
//!
//! A missing interval means `[0, inf)`. Comparisons become atoms `g >= 0`:
//! `a < b` and `a <= b` give `b - a`, `a > b` and `a >= b` give `a - b`,
//! `a == b` gives `-abs(a - b)`.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::formula::{Expr, Formula, Interval};
use crate::error::{Error, Result};

const KEYWORDS: &[&str] =
    &["alw", "always", "ev", "eventually", "not", "and", "or", "until", "step", "abs", "inf"];

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    LParen,
    RParen,
    LBrack,
    RBrack,
    Comma,
    Plus,
    Minus,
    Star,
    Slash,
    Lt,
    Le,
    Gt,
    Ge,
    EqEq,
    Bang,
    AndAnd,
    OrOr,
    Implies,
    End,
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>> {
    let b = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < b.len() {
        let c = b[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let two = |s: &[u8]| b[i..].starts_with(s);
        let tok = if c.is_ascii_digit() || (c == b'.' && b.get(i + 1).is_some_and(u8::is_ascii_digit)) {
            while i < b.len() && (b[i].is_ascii_digit() || b[i] == b'.') {
                i += 1;
            }
            if i < b.len() && (b[i] == b'e' || b[i] == b'E') {
                let mut j = i + 1;
                if j < b.len() && (b[j] == b'+' || b[j] == b'-') {
                    j += 1;
                }
                if j < b.len() && b[j].is_ascii_digit() {
                    i = j;
                    while i < b.len() && b[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let text = &src[start..i];
            let v: f64 = text
                .parse()
                .map_err(|_| Error::Parse { pos: start, msg: format!("malformed number `{text}`") })?;
            out.push((Tok::Num(v), start));
            continue;
        } else if c.is_ascii_alphabetic() || c == b'_' {
            while i < b.len() && (b[i].is_ascii_alphanumeric() || b[i] == b'_' || b[i] == b'.') {
                i += 1;
            }
            out.push((Tok::Ident(src[start..i].to_string()), start));
            continue;
        } else if two(b"<=") {
            i += 2;
            Tok::Le
        } else if two(b">=") {
            i += 2;
            Tok::Ge
        } else if two(b"==") {
            i += 2;
            Tok::EqEq
        } else if two(b"&&") {
            i += 2;
            Tok::AndAnd
        } else if two(b"||") {
            i += 2;
            Tok::OrOr
        } else if two(b"=>") || two(b"->") {
            i += 2;
            Tok::Implies
        } else {
            i += 1;
            match c {
                b'(' => Tok::LParen,
                b')' => Tok::RParen,
                b'[' => Tok::LBrack,
                b']' => Tok::RBrack,
                b',' => Tok::Comma,
                b'+' => Tok::Plus,
                b'-' => Tok::Minus,
                b'*' => Tok::Star,
                b'/' => Tok::Slash,
                b'<' => Tok::Lt,
                b'>' => Tok::Gt,
                b'!' => Tok::Bang,
                _ => {
                    let ch = src[start..].chars().next().unwrap_or('?');
                    return Err(Error::Parse { pos: start, msg: format!("unexpected character `{ch}`") });
                }
            }
        };
        out.push((tok, start));
    }
    out.push((Tok::End, src.len()));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    channels: Option<&'a [&'a str]>,
}

/// Parses a formula without restricting channel names.
pub fn parse_formula(text: &str) -> Result<Formula> {
    parse(text, None)
}

/// Parses a formula and rejects channel names not in `channels`.
pub fn parse_formula_with_channels(text: &str, channels: &[&str]) -> Result<Formula> {
    parse(text, Some(channels))
}

fn parse(text: &str, channels: Option<&[&str]>) -> Result<Formula> {
    let mut p = Parser { toks: lex(text)?, pos: 0, channels };
    let f = p.formula()?;
    match p.peek() {
        Tok::End => Ok(f),
        t => Err(p.err(format!("unexpected {} after formula", describe(t)))),
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Num(v) => format!("number {v}"),
        Tok::Ident(s) => format!("`{s}`"),
        Tok::End => "end of input".into(),
        other => format!("{other:?}"),
    }
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].0
    }

    fn here(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err(&self, msg: String) -> Error {
        Error::Parse { pos: self.here(), msg }
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<()> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(self.err(format!("expected {what}, found {}", describe(self.peek()))))
        }
    }

    fn is_kw(&self, kws: &[&str]) -> bool {
        matches!(self.peek(), Tok::Ident(s) if kws.contains(&s.as_str()))
    }

    fn formula(&mut self) -> Result<Formula> {
        let lhs = self.disj()?;
        if *self.peek() == Tok::Implies {
            self.bump();
            let rhs = self.formula()?;
            return Ok(Formula::or(Formula::not(lhs), rhs));
        }
        Ok(lhs)
    }

    fn disj(&mut self) -> Result<Formula> {
        let mut f = self.conj()?;
        while *self.peek() == Tok::OrOr || self.is_kw(&["or"]) {
            self.bump();
            f = Formula::or(f, self.conj()?);
        }
        Ok(f)
    }

    fn conj(&mut self) -> Result<Formula> {
        let mut f = self.until()?;
        while *self.peek() == Tok::AndAnd || self.is_kw(&["and"]) {
            self.bump();
            f = Formula::and(f, self.until()?);
        }
        Ok(f)
    }

    fn until(&mut self) -> Result<Formula> {
        let mut f = self.unary()?;
        while self.is_kw(&["until"]) {
            self.bump();
            let i = self.interval()?;
            f = Formula::until(i, f, self.unary()?);
        }
        Ok(f)
    }

    fn unary(&mut self) -> Result<Formula> {
        if *self.peek() == Tok::Bang || self.is_kw(&["not"]) {
            self.bump();
            return Ok(Formula::not(self.unary()?));
        }
        if self.is_kw(&["alw", "always"]) {
            self.bump();
            let i = self.interval()?;
            return Ok(Formula::always(i, self.unary()?));
        }
        if self.is_kw(&["ev", "eventually"]) {
            self.bump();
            let i = self.interval()?;
            return Ok(Formula::eventually(i, self.unary()?));
        }
        self.primary()
    }

    /// Optional interval; `(` only starts one when followed by `number ,`.
    fn interval(&mut self) -> Result<Interval> {
        let opens_interval = match self.peek() {
            Tok::LBrack => true,
            Tok::LParen => matches!(self.peek_at(1), Tok::Num(_)) && *self.peek_at(2) == Tok::Comma,
            _ => false,
        };
        if !opens_interval {
            return Ok(Interval::unbounded());
        }
        let start = self.here();
        let lo_open = self.bump() == Tok::LParen;
        let lo = self.number()?;
        self.expect(Tok::Comma, "`,` in interval")?;
        let hi = if self.is_kw(&["inf"]) {
            self.bump();
            f64::INFINITY
        } else {
            self.number()?
        };
        let hi_open = match self.bump() {
            Tok::RBrack => false,
            Tok::RParen => true,
            t => {
                self.pos -= 1;
                return Err(self.err(format!("expected `]` or `)` closing interval, found {}", describe(&t))));
            }
        };
        let i = Interval { lo, hi, lo_open, hi_open };
        if !i.is_valid() {
            return Err(Error::Parse { pos: start, msg: format!("invalid interval {i}: need 0 <= lo <= hi") });
        }
        Ok(i)
    }

    fn number(&mut self) -> Result<f64> {
        let neg = *self.peek() == Tok::Minus;
        if neg {
            self.bump();
        }
        match self.peek().clone() {
            Tok::Num(v) => {
                self.bump();
                Ok(if neg { -v } else { v })
            }
            t => Err(self.err(format!("expected a number, found {}", describe(&t)))),
        }
    }

    fn primary(&mut self) -> Result<Formula> {
        if self.is_kw(&["step"]) && *self.peek_at(1) == Tok::LParen {
            self.bump();
            self.bump();
            let name = self.channel_name()?;
            self.expect(Tok::Comma, "`,` in step(...)")?;
            let theta = self.number()?;
            self.expect(Tok::RParen, "`)` closing step(...)")?;
            return Ok(Formula::Step { channel: name, theta });
        }
        let save = self.pos;
        let cmp = self.comparison();
        if cmp.is_ok() || self.toks[save].0 != Tok::LParen {
            return cmp;
        }
        let e1 = cmp.unwrap_err();
        let e1_pos = match &e1 {
            Error::Parse { pos, .. } | Error::UnknownChannel { pos, .. } => *pos,
            _ => 0,
        };
        self.pos = save;
        self.bump();
        let grouped = self.formula().and_then(|f| {
            self.expect(Tok::RParen, "`)`")?;
            Ok(f)
        });
        match grouped {
            Ok(f) => Ok(f),
            Err(e2) => {
                let e2_pos = match &e2 {
                    Error::Parse { pos, .. } | Error::UnknownChannel { pos, .. } => *pos,
                    _ => 0,
                };
                Err(if e2_pos >= e1_pos { e2 } else { e1 })
            }
        }
    }

    fn comparison(&mut self) -> Result<Formula> {
        let lhs = self.expr()?;
        let op = self.peek().clone();
        if !matches!(op, Tok::Lt | Tok::Le | Tok::Gt | Tok::Ge | Tok::EqEq) {
            return Err(self.err(format!("expected a comparison operator, found {}", describe(&op))));
        }
        self.bump();
        let rhs = self.expr()?;
        let diff = |a: Expr, b: Expr| if b == Expr::Const(0.0) { a } else { Expr::sub(a, b) };
        Ok(Formula::Atom(match op {
            Tok::Lt | Tok::Le => diff(rhs, lhs),
            Tok::Gt | Tok::Ge => diff(lhs, rhs),
            _ => Expr::Neg(Box::new(Expr::abs(Expr::sub(lhs, rhs)))),
        }))
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut e = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    e = Expr::add(e, self.term()?);
                }
                Tok::Minus => {
                    self.bump();
                    e = Expr::sub(e, self.term()?);
                }
                _ => return Ok(e),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut e = self.factor()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    e = Expr::Mul(Box::new(e), Box::new(self.factor()?));
                }
                Tok::Slash => {
                    self.bump();
                    e = Expr::Div(Box::new(e), Box::new(self.factor()?));
                }
                _ => return Ok(e),
            }
        }
    }

    fn factor(&mut self) -> Result<Expr> {
        match self.peek().clone() {
            Tok::Minus => {
                self.bump();
                if let Tok::Num(v) = *self.peek() {
                    self.bump();
                    return Ok(Expr::Const(-v));
                }
                Ok(Expr::Neg(Box::new(self.factor()?)))
            }
            Tok::Num(v) => {
                self.bump();
                Ok(Expr::Const(v))
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            Tok::Ident(s) if s == "abs" => {
                self.bump();
                self.expect(Tok::LParen, "`(` after abs")?;
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)` closing abs(...)")?;
                Ok(Expr::abs(e))
            }
            Tok::Ident(_) => Ok(Expr::Channel(self.channel_name()?)),
            t => Err(self.err(format!("expected an expression, found {}", describe(&t)))),
        }
    }

    fn channel_name(&mut self) -> Result<String> {
        let pos = self.here();
        match self.peek().clone() {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                if let Some(known) = self.channels {
                    if !known.contains(&s.as_str()) {
                        return Err(Error::UnknownChannel { name: s, pos });
                    }
                }
                self.bump();
                Ok(s)
            }
            t => Err(self.err(format!("expected a channel name, found {}", describe(&t)))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(v: f64) -> Expr {
        Expr::Const(v)
    }

    #[test]
    fn toy_requirements() {
        let f = parse_formula("alw[10,30](abs(y1 - 1) < 0.4)").unwrap();
        let atom = Formula::Atom(Expr::sub(c(0.4), Expr::abs(Expr::sub(Expr::channel("y1"), c(1.0)))));
        assert_eq!(f, Formula::always(Interval::closed(10.0, 30.0), atom));

        let f = parse_formula("alw[0,30](y2 <= 30)").unwrap();
        assert_eq!(
            f,
            Formula::always(Interval::closed(0.0, 30.0), Formula::Atom(Expr::sub(c(30.0), Expr::channel("y2"))))
        );

        let f = parse_formula("alw[0.8,2](abs(x1) < 0.8)").unwrap();
        assert_eq!(
            f,
            Formula::always(
                Interval::closed(0.8, 2.0),
                Formula::Atom(Expr::sub(c(0.8), Expr::abs(Expr::channel("x1"))))
            )
        );
    }

    #[test]
    fn eventually_and_defaults() {
        let f = parse_formula("ev[0,1](x >= 0)").unwrap();
        assert_eq!(f, Formula::eventually(Interval::closed(0.0, 1.0), Formula::Atom(Expr::channel("x"))));
        let f = parse_formula("always x > 1").unwrap();
        assert!(matches!(f, Formula::Always(i, _) if i == Interval::unbounded()));
        let f = parse_formula("ev (x > 1)").unwrap();
        assert!(matches!(f, Formula::Eventually(i, _) if i == Interval::unbounded()));
    }

    #[test]
    fn precedence() {
        let f = parse_formula("a > 0 and b > 0 or not c > 0 => d > 0").unwrap();
        let atom = |s: &str| Formula::Atom(Expr::channel(s));
        let want = Formula::or(
            Formula::not(Formula::or(Formula::and(atom("a"), atom("b")), Formula::not(atom("c")))),
            atom("d"),
        );
        assert_eq!(f, want);
        let f = parse_formula("a > 0 until[0,2] b > 0 && c > 0").unwrap();
        assert_eq!(
            f,
            Formula::and(Formula::until(Interval::closed(0.0, 2.0), atom("a"), atom("b")), atom("c"))
        );
    }

    #[test]
    fn parenthesised_expressions_and_formulas() {
        let f = parse_formula("(x + 1) * 2 > 3").unwrap();
        assert_eq!(
            f,
            Formula::Atom(Expr::sub(Expr::Mul(Box::new(Expr::add(Expr::channel("x"), c(1.0))), Box::new(c(2.0))), c(3.0)))
        );
        let f = parse_formula("((x > 1))").unwrap();
        assert_eq!(f, Formula::Atom(Expr::sub(Expr::channel("x"), c(1.0))));
        let f = parse_formula("alw (0.5, inf) (x == 2)").unwrap();
        assert!(matches!(f, Formula::Always(i, _) if i.lo == 0.5 && i.lo_open && i.hi.is_infinite()));
    }

    #[test]
    fn step_atom() {
        let f = parse_formula("ev[0,5] step(r, 0.5)").unwrap();
        assert_eq!(
            f,
            Formula::eventually(Interval::closed(0.0, 5.0), Formula::Step { channel: "r".into(), theta: 0.5 })
        );
    }

    #[test]
    fn errors_carry_positions() {
        match parse_formula("alw[0,1] (x > )") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 14),
            other => panic!("{other:?}"),
        }
        match parse_formula("x > 1 y") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 6),
            other => panic!("{other:?}"),
        }
        match parse_formula("alw[2,1] x > 0") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 3),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_formula("x $ 1"), Err(Error::Parse { pos: 2, .. })));
        assert_eq!(
            parse_formula_with_channels("alw (y1 > 0 and z > 1)", &["y1"]),
            Err(Error::UnknownChannel { name: "z".into(), pos: 16 })
        );
    }

    #[test]
    fn display_round_trips() {
        for s in [
            "alw[10,30](abs(y1 - 1) < 0.4)",
            "not (x > 1 and ev(0.5, 2] y <= -3.5)",
            "(a > 0 until[1,inf) b/2 == a*3) or step(a, 0.25)",
            "alw[0,1] -x + 2 >= 1e-3",
        ] {
            let f = parse_formula(s).unwrap();
            let printed = alloc::format!("{f}");
            assert_eq!(parse_formula(&printed).unwrap(), f, "{printed}");
        }
    }
}
