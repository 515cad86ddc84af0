//! Expression language for auxiliary sequences.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := base ('^' factor)?
//! base   := number | 'n' | 'p(' expr ')' | 'ln(' expr ')'
//!         | 'if_even(' expr ',' expr ')' | '(' expr ')'
//! ```
//!
//! ASCII only, whitespace allowed between tokens. There is no unary minus.

use std::fmt;

use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::numeric::decimal::parse_decimal;
use crate::numeric::interval::Interval;
use crate::numeric::EvalValue;
use crate::sieve::Primes;

/// Nesting limit; deeper input is rejected rather than risking the stack.
pub const MAX_DEPTH: usize = 128;
/// Largest prime index `p(...)` may request.
pub const MAX_PRIME_INDEX: u64 = 100_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    fn precedence(self) -> u8 {
        match self {
            BinOp::Add | BinOp::Sub => 1,
            BinOp::Mul | BinOp::Div => 2,
            BinOp::Pow => 3,
        }
    }

    fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
            BinOp::Pow => '^',
        }
    }
}

/// A numeric literal, kept with its source spelling.
#[derive(Debug, Clone, PartialEq)]
pub struct Literal {
    pub text: String,
    pub value: BigRational,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Number(Literal),
    N,
    Prime(Box<Expr>),
    Ln(Box<Expr>),
    Binary {
        op: BinOp,
        lhs: Box<Expr>,
        rhs: Box<Expr>,
    },
    IfEven {
        even: Box<Expr>,
        odd: Box<Expr>,
    },
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Op(BinOp),
    LParen,
    RParen,
    Comma,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => Tok::Op(BinOp::Add),
            b'-' => Tok::Op(BinOp::Sub),
            b'*' => Tok::Op(BinOp::Mul),
            b'/' => Tok::Op(BinOp::Div),
            b'^' => Tok::Op(BinOp::Pow),
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b',' => Tok::Comma,
            b'0'..=b'9' | b'.' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if i < bytes.len() && bytes[i] == b'.' {
                    i += 1;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                }
                let lit = &text[start..i];
                if lit == "." {
                    return Err(Error::Syntax {
                        pos: start,
                        msg: "expected digits".into(),
                    });
                }
                out.push((start, Tok::Num(lit.to_string())));
                continue;
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((start, Tok::Ident(text[start..i].to_string())));
                continue;
            }
            _ => {
                return Err(Error::Syntax {
                    pos: start,
                    msg: format!("unexpected character {:?}", text[start..].chars().next().unwrap_or('?')),
                })
            }
        };
        out.push((start, tok));
        i += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
    depth: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |(p, _)| *p)
    }

    fn error<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            pos: self.pos(),
            msg: msg.into(),
        })
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<()> {
        if self.peek() == Some(&want) {
            self.at += 1;
            Ok(())
        } else {
            self.error(format!("expected {what}"))
        }
    }

    fn enter(&mut self) -> Result<()> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return self.error("expression nested too deeply");
        }
        Ok(())
    }

    fn expr(&mut self) -> Result<Expr> {
        self.enter()?;
        let mut lhs = self.term()?;
        while let Some(Tok::Op(op @ (BinOp::Add | BinOp::Sub))) = self.peek() {
            let op = *op;
            self.at += 1;
            let rhs = self.term()?;
            lhs = Expr::Binary {
                op,
                lhs: Box::new(lhs),
                rhs: Box::new(rhs),
            };
        }
        self.depth -= 1;
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.factor()?;
        while let Some(Tok::Op(op @ (BinOp::Mul | BinOp::Div))) = self.peek() {
            let op = *op;
            self.at += 1;
            let rhs = self.factor()?;
            lhs = Expr::Binary {
                op,
                lhs: Box::new(lhs),
                rhs: Box::new(rhs),
            };
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Expr> {
        self.enter()?;
        let base = self.base()?;
        let out = if let Some(Tok::Op(BinOp::Pow)) = self.peek() {
            self.at += 1;
            let exponent = self.factor()?;
            Expr::Binary {
                op: BinOp::Pow,
                lhs: Box::new(base),
                rhs: Box::new(exponent),
            }
        } else {
            base
        };
        self.depth -= 1;
        Ok(out)
    }

    fn call_arg(&mut self) -> Result<Box<Expr>> {
        self.expect(Tok::LParen, "'('")?;
        let arg = self.expr()?;
        self.expect(Tok::RParen, "')'")?;
        Ok(Box::new(arg))
    }

    fn base(&mut self) -> Result<Expr> {
        let pos = self.pos();
        let Some(tok) = self.peek().cloned() else {
            return self.error("unexpected end of input");
        };
        self.at += 1;
        match tok {
            Tok::Num(text) => {
                let value = parse_decimal(&text).map_err(|_| Error::Syntax {
                    pos,
                    msg: format!("bad number {text:?}"),
                })?;
                Ok(Expr::Number(Literal { text, value }))
            }
            Tok::Ident(name) => match name.as_str() {
                "n" => Ok(Expr::N),
                "p" => Ok(Expr::Prime(self.call_arg()?)),
                "ln" => Ok(Expr::Ln(self.call_arg()?)),
                "if_even" => {
                    self.expect(Tok::LParen, "'('")?;
                    let even = self.expr()?;
                    self.expect(Tok::Comma, "','")?;
                    let odd = self.expr()?;
                    self.expect(Tok::RParen, "')'")?;
                    Ok(Expr::IfEven {
                        even: Box::new(even),
                        odd: Box::new(odd),
                    })
                }
                _ => Err(Error::UnknownIdentifier { name, pos }),
            },
            Tok::LParen => {
                let inner = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(inner)
            }
            Tok::Op(op) => {
                self.at -= 1;
                self.error(format!("unexpected operator '{}'", op.symbol()))
            }
            Tok::RParen => {
                self.at -= 1;
                self.error("unexpected ')'")
            }
            Tok::Comma => {
                self.at -= 1;
                self.error("unexpected ','")
            }
        }
    }
}

/// Parse a sequence expression.
pub fn parse_sequence_expr(text: &str) -> Result<Expr> {
    if text.trim().is_empty() {
        return Err(Error::Syntax {
            pos: 0,
            msg: "empty expression".into(),
        });
    }
    if let Some(pos) = text.bytes().position(|b| !b.is_ascii()) {
        return Err(Error::Syntax {
            pos,
            msg: "non-ASCII input".into(),
        });
    }
    let mut parser = Parser {
        toks: tokenize(text)?,
        at: 0,
        end: text.len(),
        depth: 0,
    };
    let expr = parser.expr()?;
    if parser.at != parser.toks.len() {
        return parser.error("unexpected trailing input");
    }
    Ok(expr)
}

impl Expr {
    fn precedence(&self) -> u8 {
        match self {
            Expr::Binary { op, .. } => op.precedence(),
            _ => 4,
        }
    }

    fn write(&self, out: &mut String) {
        match self {
            Expr::Number(lit) => out.push_str(&lit.text),
            Expr::N => out.push('n'),
            Expr::Prime(arg) => {
                out.push_str("p(");
                arg.write(out);
                out.push(')');
            }
            Expr::Ln(arg) => {
                out.push_str("ln(");
                arg.write(out);
                out.push(')');
            }
            Expr::IfEven { even, odd } => {
                out.push_str("if_even(");
                even.write(out);
                out.push(',');
                odd.write(out);
                out.push(')');
            }
            Expr::Binary { op, lhs, rhs } => {
                let prec = op.precedence();
                let right_assoc = *op == BinOp::Pow;
                let wrap_lhs = lhs.precedence() < prec || (right_assoc && lhs.precedence() == prec);
                let wrap_rhs = rhs.precedence() < prec || (!right_assoc && rhs.precedence() == prec);
                write_wrapped(lhs, wrap_lhs, out);
                out.push(op.symbol());
                write_wrapped(rhs, wrap_rhs, out);
            }
        }
    }

    pub fn uses_primes(&self) -> bool {
        match self {
            Expr::Number(_) | Expr::N => false,
            Expr::Prime(_) => true,
            Expr::Ln(a) => a.uses_primes(),
            Expr::Binary { lhs, rhs, .. } => lhs.uses_primes() || rhs.uses_primes(),
            Expr::IfEven { even, odd } => even.uses_primes() || odd.uses_primes(),
        }
    }

    /// Value at index `n`, exact whenever no `ln` or non-integer power is involved.
    pub fn eval(&self, n: u64, primes: &Primes) -> Result<EvalValue> {
        match self {
            Expr::Number(lit) => Ok(EvalValue::Exact(lit.value.clone())),
            Expr::N => Ok(EvalValue::from(n)),
            Expr::Prime(arg) => {
                let v = arg.eval(n, primes)?;
                let k = v
                    .as_index()
                    .ok_or_else(|| Error::domain(format!("p() argument {v} is not a positive integer")))?;
                prime_at(primes, k).map(EvalValue::from)
            }
            Expr::Ln(arg) => arg.eval(n, primes)?.ln(),
            Expr::IfEven { even, odd } => {
                if n.is_multiple_of(2) {
                    even.eval(n, primes)
                } else {
                    odd.eval(n, primes)
                }
            }
            Expr::Binary { op, lhs, rhs } => {
                let a = lhs.eval(n, primes)?;
                let b = rhs.eval(n, primes)?;
                match op {
                    BinOp::Add => a.add(&b),
                    BinOp::Sub => a.sub(&b),
                    BinOp::Mul => a.mul(&b),
                    BinOp::Div => a.div(&b),
                    BinOp::Pow => a.pow(&b),
                }
            }
        }
    }

    /// Certified enclosure of the value at index `n`.
    pub fn eval_interval(&self, n: u64, primes: &Primes, prec: u64) -> Result<Interval> {
        match self {
            Expr::Number(lit) => Ok(Interval::point(lit.value.clone(), prec)),
            Expr::N => Ok(Interval::point(BigRational::from_integer(n.into()), prec)),
            Expr::Prime(arg) => {
                let v = arg.eval_interval(n, primes, prec)?;
                let k = (v.is_point() && v.lo.is_integer())
                    .then(|| v.lo.numer().to_u64())
                    .flatten()
                    .filter(|&k| k >= 1)
                    .ok_or_else(|| Error::domain("p() argument is not a positive integer"))?;
                let p = prime_at(primes, k)?;
                Ok(Interval::point(BigRational::from_integer(p.into()), prec))
            }
            Expr::Ln(arg) => arg.eval_interval(n, primes, prec)?.ln(),
            Expr::IfEven { even, odd } => {
                if n.is_multiple_of(2) {
                    even.eval_interval(n, primes, prec)
                } else {
                    odd.eval_interval(n, primes, prec)
                }
            }
            Expr::Binary { op, lhs, rhs } => {
                let a = lhs.eval_interval(n, primes, prec)?;
                let b = rhs.eval_interval(n, primes, prec)?;
                match op {
                    BinOp::Add => Ok(a.add(&b)),
                    BinOp::Sub => Ok(a.sub(&b)),
                    BinOp::Mul => Ok(a.mul(&b)),
                    BinOp::Div => a.div(&b),
                    BinOp::Pow => a.pow(&b),
                }
            }
        }
    }
}

fn prime_at(primes: &Primes, k: u64) -> Result<u64> {
    if k > MAX_PRIME_INDEX {
        return Err(Error::domain(format!("prime index {k} exceeds {MAX_PRIME_INDEX}")));
    }
    primes.nth(k)
}

fn write_wrapped(e: &Expr, wrap: bool, out: &mut String) {
    if wrap {
        out.push('(');
        e.write(out);
        out.push(')');
    } else {
        e.write(out);
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        self.write(&mut s);
        f.write_str(&s)
    }
}
