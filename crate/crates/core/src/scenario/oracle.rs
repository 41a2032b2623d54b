//! Oracle expressions for scenario files.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := '-' unary | atom
//! atom   := number | 'i' | '(' expr ')' | name | name '(' args ')'
//! ```
//!
//! Polydisk atoms: `jet`, `z1`…`zN`, `resonant(t)`, `spiral(re, im, t)`,
//! `zbar_zbar`. Half-plane atoms: `expansion` and `exp(p/q)` for
//! `e^{-(p/q) ζ}`. An expression may not mix the two domains.

use num_complex::Complex64;
use num_rational::Rational64;

use crate::asympt::HolomorphicExpansion;
use crate::counterex::{ResonantExample, SpiralExample};
use crate::flow::to_f64;
use crate::series::TaylorSeries;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Domain {
    Polydisk,
    HalfPlane,
}

#[derive(Clone, Debug)]
enum Atom {
    Const(Complex64),
    Jet(TaylorSeries),
    Coord(usize),
    Resonant(ResonantExample),
    Spiral(SpiralExample),
    ZbarZbar,
    Expansion(HolomorphicExpansion),
    Exp(Rational64),
}

#[derive(Clone, Debug)]
pub enum Expr {
    Atom(Box<AtomNode>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
}

#[derive(Clone, Debug)]
pub struct AtomNode(Atom);

/// Values an expression may refer to by name.
#[derive(Default)]
pub struct Bindings<'a> {
    pub jet: Option<&'a TaylorSeries>,
    pub expansion: Option<&'a HolomorphicExpansion>,
}

impl Expr {
    pub fn parse(text: &str, bindings: &Bindings<'_>) -> Result<Self, String> {
        let tokens = tokenize(text)?;
        let mut p = Parser { tokens, pos: 0, bindings };
        let e = p.expr()?;
        if p.pos != p.tokens.len() {
            return Err(format!("unexpected '{}'", p.tokens[p.pos]));
        }
        e.domain()?;
        Ok(e)
    }

    /// `None` for constant expressions.
    pub fn domain(&self) -> Result<Option<Domain>, String> {
        match self {
            Expr::Atom(a) => Ok(match a.0 {
                Atom::Const(_) => None,
                Atom::Expansion(_) | Atom::Exp(_) => Some(Domain::HalfPlane),
                _ => Some(Domain::Polydisk),
            }),
            Expr::Neg(e) => e.domain(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => match (a.domain()?, b.domain()?) {
                (Some(x), Some(y)) if x != y => Err("expression mixes polydisk and half-plane atoms".into()),
                (x, y) => Ok(x.or(y)),
            },
        }
    }

    /// Largest coordinate index referenced plus one.
    pub fn min_dim(&self) -> usize {
        match self {
            Expr::Atom(a) => match &a.0 {
                Atom::Coord(j) => j + 1,
                Atom::Jet(s) => s.dim(),
                Atom::Resonant(_) | Atom::Spiral(_) | Atom::ZbarZbar => 2,
                _ => 0,
            },
            Expr::Neg(e) => e.min_dim(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => a.min_dim().max(b.min_dim()),
        }
    }

    pub fn eval_polydisk(&self, z: &[Complex64]) -> Complex64 {
        self.eval(&|atom| match atom {
            Atom::Const(c) => *c,
            Atom::Jet(s) => s.eval_unchecked(z),
            Atom::Coord(j) => z[*j],
            Atom::Resonant(ex) => Complex64::new(ex.phi(z), 0.0),
            Atom::Spiral(ex) => ex.phi(z),
            Atom::ZbarZbar => z[0].conj() * z[1].conj(),
            Atom::Expansion(_) | Atom::Exp(_) => Complex64::new(f64::NAN, 0.0),
        })
    }

    pub fn eval_half_plane(&self, zeta: Complex64) -> Complex64 {
        self.eval(&|atom| match atom {
            Atom::Const(c) => *c,
            Atom::Expansion(e) => e.eval(zeta, e.top()),
            Atom::Exp(l) => (-to_f64(*l) * zeta).exp(),
            _ => Complex64::new(f64::NAN, 0.0),
        })
    }

    fn eval(&self, leaf: &dyn Fn(&Atom) -> Complex64) -> Complex64 {
        match self {
            Expr::Atom(a) => leaf(&a.0),
            Expr::Neg(e) => -e.eval(leaf),
            Expr::Add(a, b) => a.eval(leaf) + b.eval(leaf),
            Expr::Sub(a, b) => a.eval(leaf) - b.eval(leaf),
            Expr::Mul(a, b) => a.eval(leaf) * b.eval(leaf),
        }
    }
}

fn tokenize(text: &str) -> Result<Vec<String>, String> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let ch = chars[i];
        if ch.is_whitespace() {
            i += 1;
        } else if "+-*/(),".contains(ch) {
            out.push(ch.to_string());
            i += 1;
        } else if ch.is_ascii_digit() || ch == '.' {
            let start = i;
            while i < chars.len()
                && (chars[i].is_ascii_digit()
                    || chars[i] == '.'
                    || ((chars[i] == 'e' || chars[i] == 'E') && i + 1 < chars.len() && {
                        let n = chars[i + 1];
                        n.is_ascii_digit() || n == '-' || n == '+'
                    })
                    || ((chars[i] == '-' || chars[i] == '+') && i > start && matches!(chars[i - 1], 'e' | 'E')))
            {
                i += 1;
            }
            out.push(chars[start..i].iter().collect());
        } else if ch.is_ascii_alphabetic() || ch == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(chars[start..i].iter().collect());
        } else {
            return Err(format!("unexpected character '{ch}'"));
        }
    }
    Ok(out)
}

struct Parser<'a, 'b> {
    tokens: Vec<String>,
    pos: usize,
    bindings: &'a Bindings<'b>,
}

impl Parser<'_, '_> {
    fn peek(&self) -> Option<&str> {
        self.tokens.get(self.pos).map(String::as_str)
    }

    fn next(&mut self) -> Result<String, String> {
        let t = self.tokens.get(self.pos).cloned().ok_or("unexpected end of expression")?;
        self.pos += 1;
        Ok(t)
    }

    fn expect(&mut self, want: &str) -> Result<(), String> {
        let t = self.next()?;
        if t == want {
            Ok(())
        } else {
            Err(format!("expected '{want}', found '{t}'"))
        }
    }

    fn expr(&mut self) -> Result<Expr, String> {
        let mut lhs = self.term()?;
        while let Some(op) = self.peek() {
            match op {
                "+" => {
                    self.pos += 1;
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                "-" => {
                    self.pos += 1;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => break,
            }
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr, String> {
        let mut lhs = self.unary()?;
        while self.peek() == Some("*") {
            self.pos += 1;
            lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, String> {
        if self.peek() == Some("-") {
            self.pos += 1;
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.atom()
    }

    fn number(&mut self) -> Result<f64, String> {
        let negative = self.peek() == Some("-");
        if negative {
            self.pos += 1;
        }
        let t = self.next()?;
        let v: f64 = t.parse().map_err(|_| format!("expected a number, found '{t}'"))?;
        Ok(if negative { -v } else { v })
    }

    fn args(&mut self, n: usize) -> Result<Vec<f64>, String> {
        self.expect("(")?;
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            if i > 0 {
                self.expect(",")?;
            }
            out.push(self.number()?);
        }
        self.expect(")")?;
        Ok(out)
    }

    fn atom(&mut self) -> Result<Expr, String> {
        let t = self.next()?;
        let leaf = |a: Atom| Ok(Expr::Atom(Box::new(AtomNode(a))));
        if t == "(" {
            let e = self.expr()?;
            self.expect(")")?;
            return Ok(e);
        }
        if let Ok(v) = t.parse::<f64>() {
            return leaf(Atom::Const(Complex64::new(v, 0.0)));
        }
        match t.as_str() {
            "i" => leaf(Atom::Const(Complex64::i())),
            "jet" => match self.bindings.jet {
                Some(s) => leaf(Atom::Jet(s.clone())),
                None => Err("'jet' used but no term lines are given".into()),
            },
            "expansion" => match self.bindings.expansion {
                Some(e) => leaf(Atom::Expansion(e.clone())),
                None => Err("'expansion' used but no coef lines are given".into()),
            },
            "zbar_zbar" => leaf(Atom::ZbarZbar),
            "resonant" => {
                let a = self.args(1)?;
                leaf(Atom::Resonant(ResonantExample::new(a[0]).map_err(|e| e.to_string())?))
            }
            "spiral" => {
                let a = self.args(3)?;
                let ex = SpiralExample::new(Complex64::new(a[0], a[1]), a[2]).map_err(|e| e.to_string())?;
                leaf(Atom::Spiral(ex))
            }
            "exp" => {
                self.expect("(")?;
                let mut text = String::new();
                while self.peek().is_some_and(|t| t != ")") {
                    text.push_str(&self.next()?);
                }
                self.expect(")")?;
                let rate: Rational64 = text.parse().map_err(|_| format!("exp expects a fraction p/q, found '{text}'"))?;
                leaf(Atom::Exp(rate))
            }
            name if name.starts_with('z') && name[1..].parse::<usize>().is_ok_and(|j| j >= 1) => {
                leaf(Atom::Coord(name[1..].parse::<usize>().expect("checked") - 1))
            }
            other => Err(format!("unknown oracle atom '{other}'")),
        }
    }
}
