//! Expression grammar for scalars and series.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | '+' unary | power
//! power  := atom ('^' ['-'] integer)?
//! atom   := integer | 'z' | 'i' | 'zeta' '(' integer ')' | 'O' '(' 'z' '^' integer ')' | '(' expr ')'
//! ```
//!
//! Division needs a denominator with nonzero constant term, or a common power
//! of `z` that cancels exactly (`z/(1-z)` is fine, `1/z` is not).

use num_bigint::BigInt;
use num_integer::Integer;

use crate::error::{GermError, Result};
use crate::germ::Germ;
use crate::scalar::{check_cap, CycloScalar};
use crate::series::TruncatedSeries;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
}

#[derive(Debug, Clone)]
enum Expr {
    Int(BigInt),
    Z,
    I,
    Zeta(u32),
    BigO(usize),
    Neg(Box<Expr>),
    Bin(char, Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
}

fn lcm(a: u32, b: u32) -> u32 {
    a.lcm(&b)
}

fn syntax(pos: usize, message: impl Into<String>) -> GermError {
    GermError::Syntax { pos, message: message.into() }
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push((start, Tok::Int(s.parse().expect("digits"))));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                i += 1;
            }
            out.push((start, Tok::Ident(chars[start..i].iter().collect())));
        } else if "+-*/^()".contains(c) {
            out.push((i, Tok::Sym(c)));
            i += 1;
        } else if c == '\u{2212}' {
            out.push((i, Tok::Sym('-')));
            i += 1;
        } else {
            return Err(syntax(i, format!("unexpected character '{c}'")));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |(p, _)| *p)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(syntax(self.pos(), format!("expected '{c}'")))
        }
    }

    fn integer(&mut self) -> Result<BigInt> {
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.at += 1;
                Ok(n)
            }
            _ => Err(syntax(self.pos(), "expected an integer")),
        }
    }

    fn small_integer(&mut self) -> Result<i64> {
        let pos = self.pos();
        let n = self.integer()?;
        i64::try_from(n).map_err(|_| syntax(pos, "integer too large"))
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            let op = if self.eat('+') {
                '+'
            } else if self.eat('-') {
                '-'
            } else {
                return Ok(lhs);
            };
            let rhs = self.term()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            let op = if self.eat('*') {
                '*'
            } else if self.eat('/') {
                '/'
            } else {
                return Ok(lhs);
            };
            let rhs = self.unary()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let parens = self.eat('(');
        let neg = self.eat('-');
        let e = self.small_integer()?;
        if parens {
            self.expect(')')?;
        }
        Ok(Expr::Pow(Box::new(base), if neg { -e } else { e }))
    }

    fn atom(&mut self) -> Result<Expr> {
        let pos = self.pos();
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.at += 1;
                Ok(Expr::Int(n))
            }
            Some(Tok::Sym('(')) => {
                self.at += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(Tok::Ident(name)) => {
                self.at += 1;
                match name.as_str() {
                    "z" => Ok(Expr::Z),
                    "i" => Ok(Expr::I),
                    "zeta" => {
                        self.expect('(')?;
                        let npos = self.pos();
                        let n = self.small_integer()?;
                        self.expect(')')?;
                        if n < 1 || n > u32::MAX as i64 {
                            return Err(syntax(npos, "zeta order must be positive"));
                        }
                        Ok(Expr::Zeta(n as u32))
                    }
                    "O" => {
                        self.expect('(')?;
                        if self.peek() != Some(&Tok::Ident("z".into())) {
                            return Err(syntax(self.pos(), "expected 'z' inside O(...)"));
                        }
                        self.at += 1;
                        let k = if self.eat('^') {
                            let kpos = self.pos();
                            let k = self.small_integer()?;
                            if k < 1 {
                                return Err(syntax(kpos, "order term exponent must be positive"));
                            }
                            k as usize
                        } else {
                            1
                        };
                        self.expect(')')?;
                        Ok(Expr::BigO(k))
                    }
                    other => Err(syntax(pos, format!("unknown identifier '{other}'"))),
                }
            }
            Some(Tok::Sym(c)) => Err(syntax(pos, format!("unexpected '{c}'"))),
            None => Err(syntax(pos, "unexpected end of input")),
        }
    }
}

fn parse_expr(text: &str) -> Result<Expr> {
    let mut p = Parser { toks: tokenize(text)?, at: 0, end: text.chars().count() };
    let e = p.expr()?;
    if p.at != p.toks.len() {
        return Err(syntax(p.pos(), "trailing input"));
    }
    Ok(e)
}

fn divide(a: &TruncatedSeries, b: &TruncatedSeries) -> Result<TruncatedSeries> {
    let Some(vb) = b.valuation() else {
        return Err(GermError::NonUnitDivision);
    };
    let Some(va) = a.valuation() else {
        return Ok(TruncatedSeries::zero(a.trunc().min(b.trunc().saturating_sub(vb))));
    };
    if va < vb {
        return Err(GermError::NonUnitDivision);
    }
    let num = a.shift_down(vb)?;
    let den = b.shift_down(vb)?;
    Ok(num.mul(&den.reciprocal()?))
}

/// Evaluate with every exact atom known through degree `w`.
fn eval(e: &Expr, w: usize) -> Result<TruncatedSeries> {
    Ok(match e {
        Expr::Int(n) => TruncatedSeries::constant(CycloScalar::from_rational(n.clone().into()), w),
        Expr::Z => TruncatedSeries::z(w),
        Expr::I => TruncatedSeries::constant(CycloScalar::i(), w),
        Expr::Zeta(n) => TruncatedSeries::constant(CycloScalar::primitive_root(*n, 1)?, w),
        Expr::BigO(k) => TruncatedSeries::zero(k - 1),
        Expr::Neg(x) => eval(x, w)?.neg(),
        Expr::Bin(op, x, y) => {
            let (a, b) = (eval(x, w)?, eval(y, w)?);
            check_cap(lcm(a.conductor(), b.conductor()) as u64)?;
            match op {
                '+' => a.add(&b),
                '-' => a.sub(&b),
                '*' => a.mul(&b),
                _ => divide(&a, &b)?,
            }
        }
        Expr::Pow(x, k) => {
            let base = eval(x, w)?;
            let p = base.pow(k.unsigned_abs() as u32);
            if *k < 0 {
                divide(&TruncatedSeries::constant(CycloScalar::one(), w), &p)?
            } else {
                p
            }
        }
    })
}

/// Parse an expression into a series known through degree `n`, or less if the
/// text carries an explicit `O(z^k)` term with `k <= n`.
pub fn parse_series(text: &str, n: usize) -> Result<TruncatedSeries> {
    let e = parse_expr(text)?;
    let mut w = n + 8;
    let mut last = eval(&e, w)?;
    for _ in 0..6 {
        if last.trunc() >= n {
            return Ok(last.truncate(n));
        }
        w = 2 * w + 8;
        let next = eval(&e, w)?;
        if next.trunc() == last.trunc() {
            // Limited by an explicit order term, not by working precision.
            return Ok(next);
        }
        last = next;
    }
    Err(GermError::InsufficientPrecision { needed: n, have: last.trunc() })
}

pub fn parse_germ(text: &str, n: usize) -> Result<Germ> {
    Germ::new(parse_series(text, n)?)
}

/// A scalar literal such as `3/4`, `i`, `zeta(8)^3` or `(1 + i)/2`.
pub fn parse_scalar(text: &str) -> Result<CycloScalar> {
    let s = parse_series(text, 1)?;
    if s.terms().any(|(k, _)| k > 0) {
        return Err(syntax(0, "expected a scalar, found a series in z"));
    }
    Ok(s.coeff(0))
}
