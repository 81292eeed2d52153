//! Recursive-descent parser for the polynomial text grammar
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | factor
//! factor := base ('^' uint)?
//! base   := literal | var | '(' expr ')'
//! var    := 't' uint | 'y' uint | 'u' | 't'
//! ```
//!
//! Juxtaposition is rejected. `/` divides by nonzero constants in
//! polynomials and by any nonzero function in rational functions. The bare
//! `t` is the parameter of a rational function.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::{MultiPoly, PolyError, RatFunc, Var, VarSet};
use crate::field::{FieldElement, FieldSpec, UniPoly};

#[derive(Debug)]
enum Expr {
    Num(BigInt),
    Ident(String, usize),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>, usize),
    Neg(Box<Expr>),
    Pow(Box<Expr>, u32),
}

struct Parser<'a> {
    text: &'a [u8],
    pos: usize,
}

fn syntax(position: usize, message: impl Into<String>) -> PolyError {
    PolyError::SyntaxError {
        position,
        message: message.into(),
    }
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.text.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn digits(&mut self) -> &str {
        let start = self.pos;
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.text[start..self.pos]).expect("ascii digits")
    }

    fn expr(&mut self) -> Result<Expr, PolyError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(b'+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat(b'-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, PolyError> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat(b'*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.peek() == Some(b'/') {
                let at = self.pos;
                self.pos += 1;
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?), at);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, PolyError> {
        if self.eat(b'-') {
            Ok(Expr::Neg(Box::new(self.unary()?)))
        } else {
            self.factor()
        }
    }

    fn factor(&mut self) -> Result<Expr, PolyError> {
        let base = self.base()?;
        if self.eat(b'^') {
            self.skip_ws();
            let at = self.pos;
            let d = self.digits();
            if d.is_empty() {
                return Err(syntax(at, "expected a nonnegative exponent"));
            }
            let e: u32 = d.parse().map_err(|_| syntax(at, "exponent too large"))?;
            return Ok(Expr::Pow(Box::new(base), e));
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<Expr, PolyError> {
        let at = self.pos;
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(syntax(self.pos, "expected ')'"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let d = self.digits();
                Ok(Expr::Num(d.parse().expect("digits")))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.text.len() && self.text[self.pos].is_ascii_alphanumeric() {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.text[start..self.pos]).expect("ascii");
                Ok(Expr::Ident(name.to_string(), start))
            }
            Some(_) => Err(syntax(self.pos, "unexpected character")),
            None => Err(syntax(at.max(self.pos), "unexpected end of input")),
        }
    }
}

fn parse(text: &str) -> Result<Expr, PolyError> {
    if !text.is_ascii() {
        let pos = text.char_indices().find(|(_, c)| !c.is_ascii()).map_or(0, |(i, _)| i);
        return Err(syntax(pos, "non-ASCII character"));
    }
    let mut p = Parser {
        text: text.as_bytes(),
        pos: 0,
    };
    let e = p.expr()?;
    if p.peek().is_some() {
        return Err(syntax(p.pos, "unexpected trailing input (implicit multiplication is not allowed)"));
    }
    Ok(e)
}

fn generator(spec: &FieldSpec, pos: usize) -> Result<FieldElement, PolyError> {
    spec.generator_u().ok_or_else(|| {
        PolyError::WrongField(format!("'u' at position {pos} needs an extension field, got {spec}"))
    })
}

fn literal(spec: &FieldSpec, n: &BigInt) -> Result<FieldElement, PolyError> {
    Ok(spec.from_rational(&BigRational::from_integer(n.clone()))?)
}

struct PolyCtx<'a> {
    spec: &'a FieldSpec,
    vars: VarSet,
}

impl PolyCtx<'_> {
    fn go(&self, e: &Expr) -> Result<MultiPoly, PolyError> {
        let (spec, vars) = (self.spec, self.vars);
        Ok(match e {
            Expr::Num(n) => MultiPoly::constant(spec, vars, literal(spec, n)?),
            Expr::Ident(name, pos) => {
                if name == "u" {
                    return Ok(MultiPoly::constant(spec, vars, generator(spec, *pos)?));
                }
                let var = parse_var(name).ok_or_else(|| PolyError::UnknownVariable(name.clone()))?;
                MultiPoly::var(spec, vars, var)?
            }
            Expr::Add(a, b) => self.go(a)?.add(&self.go(b)?),
            Expr::Sub(a, b) => self.go(a)?.sub(&self.go(b)?),
            Expr::Mul(a, b) => self.go(a)?.mul(&self.go(b)?),
            Expr::Div(a, b, pos) => {
                let d = self.go(b)?;
                let c = d
                    .as_constant()
                    .filter(|c| !c.is_zero())
                    .ok_or_else(|| syntax(*pos, "polynomials may only be divided by nonzero constants"))?;
                self.go(a)?.scale(&c.inv()?)
            }
            Expr::Neg(a) => self.go(a)?.neg(),
            Expr::Pow(a, k) => self.go(a)?.pow(*k),
        })
    }
}

fn parse_var(name: &str) -> Option<Var> {
    let (head, idx) = name.split_at(1);
    if idx.is_empty() || !idx.bytes().all(|b| b.is_ascii_digit()) || idx.starts_with('0') {
        return None;
    }
    let i: usize = idx.parse().ok()?;
    match head {
        "t" => Some(Var::T(i)),
        "y" => Some(Var::Y(i)),
        _ => None,
    }
}

struct RatCtx<'a> {
    spec: &'a FieldSpec,
}

impl RatCtx<'_> {
    fn go(&self, e: &Expr) -> Result<RatFunc, PolyError> {
        let spec = self.spec;
        Ok(match e {
            Expr::Num(n) => RatFunc::constant(literal(spec, n)?),
            Expr::Ident(name, pos) => match name.as_str() {
                "u" => RatFunc::constant(generator(spec, *pos)?),
                "t" => RatFunc::from_poly(UniPoly::x(spec)),
                _ => return Err(PolyError::UnknownVariable(name.clone())),
            },
            Expr::Add(a, b) => self.go(a)?.add(&self.go(b)?),
            Expr::Sub(a, b) => self.go(a)?.sub(&self.go(b)?),
            Expr::Mul(a, b) => self.go(a)?.mul(&self.go(b)?),
            Expr::Div(a, b, pos) => {
                let d = self.go(b)?;
                if d.is_zero() {
                    return Err(syntax(*pos, "division by zero"));
                }
                self.go(a)?.div(&d)?
            }
            Expr::Neg(a) => self.go(a)?.neg(),
            Expr::Pow(a, k) => self.go(a)?.pow(*k as i64)?,
        })
    }
}

/// Parses a polynomial in the variables of `vars` over `spec`.
pub fn parse_poly(text: &str, spec: &FieldSpec, vars: VarSet) -> Result<MultiPoly, PolyError> {
    PolyCtx { spec, vars }.go(&parse(text)?)
}

/// Parses a rational function of the parameter `t` over `spec`.
pub fn parse_ratfunc(text: &str, spec: &FieldSpec) -> Result<RatFunc, PolyError> {
    RatCtx { spec }.go(&parse(text)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn syntax_errors_carry_positions() {
        let f5 = FieldSpec::prime(5).unwrap();
        let vars = VarSet::new(2, 1);
        match parse_poly("2 t1", &f5, vars) {
            Err(PolyError::SyntaxError { position, .. }) => assert_eq!(position, 2),
            other => panic!("{other:?}"),
        }
        match parse_poly("1 + (t1", &f5, vars) {
            Err(PolyError::SyntaxError { position, .. }) => assert_eq!(position, 7),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_poly("t1^", &f5, vars), Err(PolyError::SyntaxError { .. })));
        assert!(matches!(parse_poly("t1/t2", &f5, vars), Err(PolyError::SyntaxError { .. })));
        assert!(matches!(parse_poly("u + 1", &f5, vars), Err(PolyError::WrongField(_))));
        assert!(matches!(parse_poly("t0", &f5, vars), Err(PolyError::UnknownVariable(_))));
    }

    #[test]
    fn fraction_literal_in_characteristic_p() {
        let f5 = FieldSpec::prime(5).unwrap();
        let p = parse_poly("1/2", &f5, VarSet::new(1, 0)).unwrap();
        assert_eq!(p.as_constant().unwrap(), f5.from_i64(3));
        assert!(parse_poly("1/5", &f5, VarSet::new(1, 0)).is_err());
    }

    #[test]
    fn extension_coefficients() {
        let f9 = FieldSpec::standard(9).unwrap();
        let vars = VarSet::new(1, 1);
        let p = parse_poly("(u + 1)*t1*y1 - u", &f9, vars).unwrap();
        let shown = p.to_string();
        assert_eq!(parse_poly(&shown, &f9, vars).unwrap(), p);
    }

    #[test]
    fn rational_functions() {
        let f7 = FieldSpec::prime(7).unwrap();
        let f = parse_ratfunc("(3 - t)/(1 - t)", &f7).unwrap();
        assert_eq!(f.to_string(), "(t + 4)/(t + 6)");
        assert_eq!(parse_ratfunc(&f.to_string(), &f7).unwrap(), f);
        assert!(parse_ratfunc("t/(t - t)", &f7).is_err());
        assert!(matches!(parse_ratfunc("t1", &f7), Err(PolyError::UnknownVariable(_))));
    }
}
