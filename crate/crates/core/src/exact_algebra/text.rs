//! Parser for the canonical text form produced by `to_text`.
//!
//! Accepts `+ - * / ^`, parentheses, integer literals, `sqrt(n)` and the
//! ring's variable names. Linear factors are kept factored through products
//! and quotients so that denominators such as `(x*y*(x - y))` come back as
//! hyperplane factors rather than an expanded residue.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::{AlgebraError, ExactScalar, LinearForm, MultiPoly, RatFunc, Vars};

pub fn parse_ratfunc(src: &str, vars: &Vars) -> Result<RatFunc, AlgebraError> {
    let mut p = Parser { src: src.as_bytes(), pos: 0, vars };
    let v = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("trailing input"));
    }
    Ok(v.collapse())
}

pub fn parse_poly(src: &str, vars: &Vars) -> Result<MultiPoly, AlgebraError> {
    let f = parse_ratfunc(src, vars)?;
    f.as_polynomial().cloned().ok_or(AlgebraError::Parse { pos: 0, msg: "expected a polynomial".into() })
}

pub fn parse_scalar(src: &str) -> Result<ExactScalar, AlgebraError> {
    let vars = Vars::new::<&str>(&[]);
    let p = parse_poly(src, &vars)?;
    Ok(p.constant_value().unwrap_or_else(ExactScalar::zero))
}

/// `base · Π α^k`.
struct Val {
    base: RatFunc,
    factors: BTreeMap<LinearForm, i64>,
}

impl Val {
    fn plain(base: RatFunc) -> Val {
        let vars = base.vars().clone();
        if let Some(p) = base.as_polynomial() {
            if let Some((c, a)) = LinearForm::from_poly(p) {
                return Val { base: RatFunc::constant(&vars, c), factors: BTreeMap::from([(a, 1)]) };
            }
        }
        Val { base, factors: BTreeMap::new() }
    }

    fn collapse(self) -> RatFunc {
        if self.factors.is_empty() {
            return self.base;
        }
        let powers: Vec<_> = self.factors.into_iter().collect();
        self.base.mul_linear_powers(&powers)
    }

    fn mul(mut self, other: Val, sign: i64) -> Result<Val, AlgebraError> {
        self.base = if sign > 0 { &self.base * &other.base } else { self.base.try_div(&other.base)? };
        for (a, k) in other.factors {
            *self.factors.entry(a).or_insert(0) += sign * k;
        }
        self.factors.retain(|_, k| *k != 0);
        Ok(self)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    vars: &'a Vars,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> AlgebraError {
        AlgebraError::Parse { pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<(), AlgebraError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected `{}`", c as char)))
        }
    }

    fn expr(&mut self) -> Result<Val, AlgebraError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(op @ (b'+' | b'-')) => {
                    self.pos += 1;
                    let rhs = self.term()?.collapse();
                    let lhs = acc.collapse();
                    acc = Val::plain(if op == b'+' { &lhs + &rhs } else { &lhs - &rhs });
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Val, AlgebraError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = acc.mul(self.unary()?, 1)?;
                }
                Some(b'/') => {
                    self.pos += 1;
                    acc = acc.mul(self.unary()?, -1)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Val, AlgebraError> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            let mut v = self.unary()?;
            v.base = v.base.neg();
            return Ok(v);
        }
        self.power()
    }

    fn power(&mut self) -> Result<Val, AlgebraError> {
        let base = self.atom()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        let neg = if self.peek() == Some(b'-') {
            self.pos += 1;
            true
        } else {
            false
        };
        let e = self.integer()?;
        let e: i64 = e.try_into().map_err(|_| self.err("exponent too large"))?;
        let e = if neg { -e } else { e };
        let factors = base.factors.into_iter().map(|(a, k)| (a, k * e)).collect();
        Ok(Val { base: base.base.pow(e)?, factors })
    }

    fn integer(&mut self) -> Result<BigInt, AlgebraError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an integer"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(s.parse().expect("digits parse"))
    }

    fn atom(&mut self) -> Result<Val, AlgebraError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                self.expect(b')')?;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                let c = ExactScalar::from_rational(BigRational::from_integer(n));
                Ok(Val::plain(RatFunc::constant(self.vars, c)))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len() && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_') {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii identifier");
                if name == "sqrt" && self.vars.index_of("sqrt").is_none() {
                    self.expect(b'(')?;
                    let n = self.integer()?;
                    self.expect(b')')?;
                    let d: u32 = n.try_into().map_err(|_| self.err("radicand too large"))?;
                    let c = ExactScalar::sqrt_of(d)?;
                    return Ok(Val::plain(RatFunc::constant(self.vars, c)));
                }
                let p = MultiPoly::var_named(self.vars, name)?;
                Ok(Val::plain(RatFunc::from_poly(p)))
            }
            _ => Err(self.err("unexpected input")),
        }
    }
}
