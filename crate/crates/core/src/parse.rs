//! The CLI element language.
//!
//! ```text
//! expr    := sum ('.' expr)?                  action, right associative
//! sum     := ['+'|'-'] prod (('+'|'-') prod)*
//! prod    := postfix ('*' postfix)*
//! postfix := primary (('⊗' | '@') 'z' ['^' int])*
//! primary := number | 'z' ['^' int] | 't[a]' | 'ad[a]' | 'D[(u);r]'
//!          | 'v[s](c1,…)' | '[' expr ',' expr ']' | '(' expr ')'
//! ```
//!
//! Numbers may be rationals `p/q`; `z` is the field generator `ζ_{2N}`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::field::Cyclotomic;
use crate::fock::{FVector, FockModule};
use crate::lattice::ExpVec;
use crate::lie::{GElement, LoopElement};
use crate::torus::TorusElement;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    /// Character offset into the expression.
    pub pos: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "error at position {}: {}", self.pos, self.message)
    }
}

impl std::error::Error for ParseError {}

/// A value of the element language.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Scalar(Cyclotomic),
    Loop(LoopElement),
    Vector(FVector),
}

impl Value {
    fn kind(&self) -> &'static str {
        match self {
            Value::Scalar(_) => "scalar",
            Value::Loop(_) => "algebra element",
            Value::Vector(_) => "module vector",
        }
    }
}

/// The pure torus part at `B`-index 0, if that is all `x` is.
fn as_torus(x: &LoopElement) -> Option<TorusElement> {
    if x.is_zero() {
        return Some(TorusElement::zero());
    }
    match x.parts().iter().next() {
        Some((0, g)) if x.parts().len() == 1 && g.inner().is_empty() && g.witt().is_empty() => Some(g.torus.clone()),
        _ => None,
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Scalar(c) => write!(f, "{c}"),
            Value::Loop(x) => match as_torus(x) {
                Some(t) => write!(f, "{t}"),
                None => write!(f, "{x}"),
            },
            Value::Vector(v) => write!(f, "{v}"),
        }
    }
}

/// Parses and evaluates `src` in the module `m`.
pub fn evaluate(src: &str, m: &FockModule) -> Result<Value, ParseError> {
    let mut p = Parser {
        chars: src.chars().collect(),
        pos: 0,
        m,
    };
    let v = p.expr()?;
    p.skip_ws();
    if p.pos < p.chars.len() {
        return Err(p.err(format!("unexpected {:?}", p.chars[p.pos])));
    }
    Ok(v)
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    m: &'a FockModule,
}

impl Parser<'_> {
    fn err(&self, message: impl Into<String>) -> ParseError {
        ParseError {
            pos: self.pos,
            message: message.into(),
        }
    }

    fn err_at(pos: usize, message: impl Into<String>) -> ParseError {
        ParseError {
            pos,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(format!("expected {c:?}")))
        }
    }

    fn keyword(&mut self, kw: &str) -> bool {
        self.skip_ws();
        let k: Vec<char> = kw.chars().collect();
        if self.chars[self.pos..].starts_with(&k) {
            self.pos += k.len();
            true
        } else {
            false
        }
    }

    fn integer(&mut self) -> Result<i64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        if matches!(self.chars.get(self.pos), Some('-' | '+')) {
            self.pos += 1;
        }
        while self.chars.get(self.pos).is_some_and(char::is_ascii_digit) {
            self.pos += 1;
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        text.parse().map_err(|_| Self::err_at(start, "expected an integer"))
    }

    fn int_list(&mut self, close: char) -> Result<Vec<i64>, ParseError> {
        let mut out = vec![self.integer()?];
        while self.eat(',') {
            out.push(self.integer()?);
        }
        self.expect(close)?;
        Ok(out)
    }

    fn degree(&mut self, close: char) -> Result<ExpVec, ParseError> {
        let start = self.pos;
        let a = ExpVec(self.int_list(close)?);
        if a.len() != self.m.n() {
            return Err(Self::err_at(start, format!("degree needs {} coordinates", self.m.n())));
        }
        Ok(a)
    }

    fn scalar_list(&mut self, close: char, len: usize, what: &str) -> Result<Vec<Cyclotomic>, ParseError> {
        let start = self.pos;
        let mut out = Vec::new();
        loop {
            let at = self.pos;
            match self.sum()? {
                Value::Scalar(c) => out.push(c),
                v => return Err(Self::err_at(at, format!("{what} entries must be scalars, got a {}", v.kind()))),
            }
            if !self.eat(',') {
                break;
            }
        }
        self.expect(close)?;
        if out.len() != len {
            return Err(Self::err_at(start, format!("{what} needs {len} entries, got {}", out.len())));
        }
        Ok(out)
    }

    fn expr(&mut self) -> Result<Value, ParseError> {
        let lhs = self.sum()?;
        let at = self.pos;
        if !self.eat('.') {
            return Ok(lhs);
        }
        let rhs = self.expr()?;
        match (lhs, rhs) {
            (Value::Loop(x), Value::Vector(xi)) => self.m.act(&x, &xi).map(Value::Vector).map_err(|e| Self::err_at(at, e.to_string())),
            (Value::Scalar(c), Value::Vector(xi)) => Ok(Value::Vector(xi.scale(&c))),
            (a, b) => Err(Self::err_at(at, format!("cannot act with a {} on a {}", a.kind(), b.kind()))),
        }
    }

    fn sum(&mut self) -> Result<Value, ParseError> {
        let neg = if self.eat('-') {
            true
        } else {
            self.eat('+');
            false
        };
        let mut acc = self.prod()?;
        if neg {
            acc = self.negate(acc);
        }
        loop {
            let at = self.pos;
            let sign = if self.eat('+') {
                false
            } else if self.eat('-') {
                true
            } else {
                return Ok(acc);
            };
            let mut rhs = self.prod()?;
            if sign {
                rhs = self.negate(rhs);
            }
            acc = match (acc, rhs) {
                (Value::Scalar(a), Value::Scalar(b)) => Value::Scalar(&a + &b),
                (Value::Loop(a), Value::Loop(b)) => Value::Loop(a.add(&b)),
                (Value::Vector(a), Value::Vector(b)) => Value::Vector(a.add(&b)),
                (a, b) => return Err(Self::err_at(at, format!("cannot add a {} and a {}", a.kind(), b.kind()))),
            };
        }
    }

    fn negate(&self, v: Value) -> Value {
        match v {
            Value::Scalar(c) => Value::Scalar(-c),
            Value::Loop(x) => Value::Loop(x.neg()),
            Value::Vector(x) => Value::Vector(x.neg()),
        }
    }

    fn prod(&mut self) -> Result<Value, ParseError> {
        let mut acc = self.postfix()?;
        loop {
            let at = self.pos;
            if !self.eat('*') {
                return Ok(acc);
            }
            let rhs = self.postfix()?;
            acc = self.multiply(acc, rhs, at)?;
        }
    }

    fn multiply(&self, a: Value, b: Value, at: usize) -> Result<Value, ParseError> {
        Ok(match (a, b) {
            (Value::Scalar(a), Value::Scalar(b)) => Value::Scalar(&a * &b),
            (Value::Scalar(c), Value::Loop(x)) | (Value::Loop(x), Value::Scalar(c)) => Value::Loop(x.scale(&c)),
            (Value::Scalar(c), Value::Vector(x)) | (Value::Vector(x), Value::Scalar(c)) => Value::Vector(x.scale(&c)),
            (Value::Loop(x), Value::Loop(y)) => Value::Loop(self.torus_product(&x, &y, at)?),
            (a, b) => return Err(Self::err_at(at, format!("cannot multiply a {} by a {}", a.kind(), b.kind()))),
        })
    }

    /// Product in `C_q ⊗ B`; both factors must be torus elements.
    fn torus_product(&self, x: &LoopElement, y: &LoopElement, at: usize) -> Result<LoopElement, ParseError> {
        let ctx = self.m.ctx();
        let pure = |z: &LoopElement| z.parts().values().all(|g| g.inner().is_empty() && g.witt().is_empty());
        if !pure(x) || !pure(y) {
            return Err(Self::err_at(at, "'*' between algebra elements is the torus product; use [x, y] for brackets"));
        }
        let mut out = LoopElement::zero();
        for (i, gx) in x.parts() {
            for (j, gy) in y.parts() {
                if let Some(k) = self.m.b().mul_index(*i, *j) {
                    let t = ctx.t_mul(&gx.torus, &gy.torus).map_err(|e| Self::err_at(at, e.to_string()))?;
                    out.add_part(k, GElement::from_torus(t));
                }
            }
        }
        Ok(out)
    }

    fn postfix(&mut self) -> Result<Value, ParseError> {
        let mut v = self.primary()?;
        loop {
            let at = self.pos;
            if !(self.eat('⊗') || self.eat('@')) {
                return Ok(v);
            }
            if !self.eat('z') {
                return Err(self.err("expected z after tensor sign"));
            }
            let i = if self.eat('^') { self.integer()? } else { 1 };
            let Value::Loop(x) = v else {
                return Err(Self::err_at(at, format!("cannot tensor a {} with z^{i}", v.kind())));
            };
            let mut out = LoopElement::zero();
            for (j, g) in x.parts() {
                match self.m.b().mul_index(*j, i) {
                    Some(k) => out.add_part(k, g.clone()),
                    None if !self.m.b().is_valid_index(i) => {
                        return Err(Self::err_at(at, format!("z^{i} is not a basis element of B")))
                    }
                    None => {}
                }
            }
            v = Value::Loop(out);
        }
    }

    fn number(&mut self) -> Result<Value, ParseError> {
        let start = self.pos;
        let digits = |p: &mut Self| {
            let s = p.pos;
            while p.chars.get(p.pos).is_some_and(char::is_ascii_digit) {
                p.pos += 1;
            }
            p.chars[s..p.pos].iter().collect::<String>()
        };
        let num: BigInt = digits(self).parse().map_err(|_| Self::err_at(start, "bad number"))?;
        let den: BigInt = if self.chars.get(self.pos) == Some(&'/') {
            self.pos += 1;
            let at = self.pos;
            let d: BigInt = digits(self).parse().map_err(|_| Self::err_at(at, "bad denominator"))?;
            if d == BigInt::from(0) {
                return Err(Self::err_at(at, "zero denominator"));
            }
            d
        } else {
            BigInt::from(1)
        };
        Ok(Value::Scalar(Cyclotomic::from_rational(
            self.m.ctx().field(),
            BigRational::new(num, den),
        )))
    }

    fn primary(&mut self) -> Result<Value, ParseError> {
        let ctx = self.m.ctx().clone();
        let start = {
            self.skip_ws();
            self.pos
        };
        let Some(c) = self.peek() else {
            return Err(self.err("unexpected end of input"));
        };
        if c.is_ascii_digit() {
            return self.number();
        }
        if self.eat('(') {
            let v = self.expr()?;
            self.expect(')')?;
            return Ok(v);
        }
        if self.eat('[') {
            let x = self.expr()?;
            self.expect(',')?;
            let y = self.expr()?;
            self.expect(']')?;
            return match (x, y) {
                (Value::Loop(x), Value::Loop(y)) => self
                    .m
                    .loop_algebra()
                    .bracket(&x, &y)
                    .map(Value::Loop)
                    .map_err(|e| Self::err_at(start, e.to_string())),
                (a, b) => Err(Self::err_at(start, format!("cannot bracket a {} with a {}", a.kind(), b.kind()))),
            };
        }
        if self.keyword("ad[") {
            let a = self.degree(']')?;
            return ctx
                .g_ad(a, ctx.one())
                .map(|g| Value::Loop(LoopElement::basis(g, 0)))
                .map_err(|e| Self::err_at(start, e.to_string()));
        }
        if self.keyword("t[") {
            let a = self.degree(']')?;
            return Ok(Value::Loop(LoopElement::basis(GElement::from_torus(ctx.t_monomial(a)), 0)));
        }
        if self.keyword("D[") {
            self.expect('(')?;
            let u = self.scalar_list(')', ctx.n(), "u")?;
            self.expect(';')?;
            let r = self.degree(']')?;
            return ctx
                .g_d(u, r)
                .map(|g| Value::Loop(LoopElement::basis(g, 0)))
                .map_err(|e| Self::err_at(start, e.to_string()));
        }
        if self.keyword("v[") {
            let s = self.degree(']')?;
            self.expect('(')?;
            let v = self.scalar_list(')', self.m.dim_v(), "vector")?;
            return Ok(Value::Vector(FVector::single(s, v)));
        }
        if self.eat('z') {
            let e = if self.eat('^') { self.integer()? } else { 1 };
            return Ok(Value::Scalar(ctx.root(e)));
        }
        Err(self.err(format!("unexpected {c:?}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::tests::minus_one_module;

    fn ev(s: &str) -> String {
        evaluate(s, &minus_one_module([0, 0])).unwrap().to_string()
    }

    #[test]
    fn documented_outputs() {
        assert_eq!(ev("t[1,0]*t[0,1]"), "t[1,1]");
        assert_eq!(ev("t[0,1]*t[1,0]"), "-1*t[1,1]");
        assert_eq!(ev("[D[(1,0);0,0], ad[0,1]]"), "0");
        assert_eq!(ev("[D[(0,1);0,0], ad[0,1]]"), "1*ad[0,1]");
        assert_eq!(ev("[t[1,0], t[0,1]]"), "2*t[1,1]");
        assert_eq!(ev("t[0,0] . v[1,0](1,2)"), "v[1,0](1,2)");
        assert_eq!(ev("1/2 + z^2"), "-1/2");
        assert_eq!(ev("[t[1,0]⊗z, ad[0,1]@z^2]"), "2*t[1,1]⊗z^3");
    }

    #[test]
    fn errors_carry_positions() {
        let m = minus_one_module([0, 0]);
        let e = evaluate("t[1,0] + v[0,0](1,0)", &m).unwrap_err();
        assert_eq!(e.pos, 7);
        let e = evaluate("ad[2,0]", &m).unwrap_err();
        assert_eq!(e.pos, 0);
        let e = evaluate("t[1,0,3]", &m).unwrap_err();
        assert_eq!(e.pos, 2);
        assert!(evaluate("t[1,0] )", &m).is_err());
    }
}
