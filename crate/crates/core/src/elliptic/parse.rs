//! A small parser for curve equations such as `y^2 + 2x^3 + 2x^2 + 1 = 0`
//! or `y² + (x + 1)y + 2x³ + x² + ax + 1 = 0` over F_q.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::gf::Fq;

/// Bivariate polynomial: (deg_x, deg_y) → coefficient.
pub(crate) type Bivariate = BTreeMap<(u32, u32), u8>;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(u64),
    X,
    Y,
    A,
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    Eq,
}

fn lex(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let mut chars = s.chars().peekable();
    while let Some(&c) = chars.peek() {
        chars.next();
        match c {
            ' ' | '\t' => {}
            '·' => out.push(Tok::Star),
            '0'..='9' => {
                let mut n = c.to_digit(10).unwrap() as u64;
                while let Some(d) = chars.peek().and_then(|d| d.to_digit(10)) {
                    n = n.checked_mul(10).and_then(|n| n.checked_add(d as u64)).ok_or_else(|| perr("number too large"))?;
                    chars.next();
                }
                out.push(Tok::Num(n));
            }
            'x' | 'X' => out.push(Tok::X),
            'y' | 'Y' => out.push(Tok::Y),
            'a' | 'α' => out.push(Tok::A),
            '+' => out.push(Tok::Plus),
            '-' | '−' => out.push(Tok::Minus),
            '*' => out.push(Tok::Star),
            '^' => out.push(Tok::Caret),
            '²' => out.extend([Tok::Caret, Tok::Num(2)]),
            '³' => out.extend([Tok::Caret, Tok::Num(3)]),
            '(' => out.push(Tok::LParen),
            ')' => out.push(Tok::RParen),
            '=' => out.push(Tok::Eq),
            other => return Err(perr(&format!("unexpected character {other:?}"))),
        }
    }
    Ok(out)
}

fn perr(msg: &str) -> Error {
    Error::Parse(msg.to_string())
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    fq: &'a Fq,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }
    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<Bivariate> {
        let mut acc = Bivariate::new();
        let mut sign_neg = false;
        if let Some(Tok::Minus | Tok::Plus) = self.peek() {
            sign_neg = self.next() == Some(Tok::Minus);
        }
        loop {
            let t = self.term()?;
            let t = if sign_neg { neg(self.fq, &t) } else { t };
            acc = add(self.fq, &acc, &t);
            match self.peek() {
                Some(Tok::Plus) => {
                    self.next();
                    sign_neg = false;
                }
                Some(Tok::Minus) => {
                    self.next();
                    sign_neg = true;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Bivariate> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.next();
                    let f = self.factor()?;
                    acc = mul(self.fq, &acc, &f);
                }
                Some(Tok::Num(_) | Tok::X | Tok::Y | Tok::A | Tok::LParen) => {
                    let f = self.factor()?;
                    acc = mul(self.fq, &acc, &f);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Bivariate> {
        let base = self.primary()?;
        if let Some(Tok::Caret) = self.peek() {
            self.next();
            let Some(Tok::Num(e)) = self.next() else {
                return Err(perr("expected exponent"));
            };
            if e > 64 {
                return Err(perr("exponent too large"));
            }
            let mut acc = constant(1);
            for _ in 0..e {
                acc = mul(self.fq, &acc, &base);
            }
            return Ok(acc);
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Bivariate> {
        match self.next() {
            Some(Tok::Num(n)) => Ok(constant(self.fq.from_int((n % self.fq.p() as u64) as i64))),
            Some(Tok::X) => Ok(Bivariate::from([((1, 0), 1)])),
            Some(Tok::Y) => Ok(Bivariate::from([((0, 1), 1)])),
            Some(Tok::A) => {
                if self.fq.is_prime_field() {
                    return Err(perr("the symbol `a` names the generator of a non-prime F_q"));
                }
                Ok(constant(self.fq.generator()))
            }
            Some(Tok::LParen) => {
                let e = self.expr()?;
                if self.next() != Some(Tok::RParen) {
                    return Err(perr("expected `)`"));
                }
                Ok(e)
            }
            other => Err(perr(&format!("unexpected token {other:?}"))),
        }
    }
}

fn constant(c: u8) -> Bivariate {
    let mut m = Bivariate::new();
    if c != 0 {
        m.insert((0, 0), c);
    }
    m
}

fn add(fq: &Fq, a: &Bivariate, b: &Bivariate) -> Bivariate {
    let mut out = a.clone();
    for (&k, &v) in b {
        let e = out.entry(k).or_insert(0);
        *e = fq.add(*e, v);
    }
    out.retain(|_, v| *v != 0);
    out
}

fn neg(fq: &Fq, a: &Bivariate) -> Bivariate {
    a.iter().map(|(&k, &v)| (k, fq.neg(v))).collect()
}

fn mul(fq: &Fq, a: &Bivariate, b: &Bivariate) -> Bivariate {
    let mut out = Bivariate::new();
    for (&(ax, ay), &av) in a {
        for (&(bx, by), &bv) in b {
            let e = out.entry((ax + bx, ay + by)).or_insert(0);
            *e = fq.add(*e, fq.mul(av, bv));
        }
    }
    out.retain(|_, v| *v != 0);
    out
}

/// Parses `lhs = rhs` (or a bare expression, read as `expr = 0`) and returns
/// lhs − rhs.
pub(crate) fn parse_equation(fq: &Fq, s: &str) -> Result<Bivariate> {
    let toks = lex(s)?;
    let mut p = Parser { toks, pos: 0, fq };
    let lhs = p.expr()?;
    let rhs = match p.next() {
        None => Bivariate::new(),
        Some(Tok::Eq) => p.expr()?,
        Some(t) => return Err(perr(&format!("unexpected token {t:?}"))),
    };
    if p.pos < p.toks.len() {
        return Err(perr("trailing input"));
    }
    Ok(add(fq, &lhs, &neg(fq, &rhs)))
}
