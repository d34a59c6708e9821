//! Text forms of maps and series.
//!
//! Maps are written `EXPR over GF(q)` in the variable `x`, with `t` for the
//! field generator, e.g. `(t+1)*x^2+t over GF(9)` or `1/x over GF(5)`.
//! Series are written `EXPR over GF(q) [prec N]` in the variable `t`, with
//! `g` for the field generator, e.g. `t^-1 + 2 + t^3 over GF(5) prec 64`.

use std::collections::BTreeMap;

use crate::field::{field_of_order, FFElem, Field};
use crate::laurent::{LaurentSeries, DEFAULT_PRECISION};
use crate::poly::Poly;
use crate::ratfunc::RatFunc;

/// Largest exponent accepted in a literal.
pub const MAX_EXPONENT: u64 = 1 << 12;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("at column {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

fn err<T>(pos: usize, msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { pos, msg: msg.into() })
}

#[derive(Clone, Debug)]
enum Expr {
    Int(u64),
    Var(char, usize),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>, usize),
    Pow(Box<Expr>, i64, usize),
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Parser<'a> {
        Parser { src: src.as_bytes(), pos: 0 }
    }

    fn skip_ws(&mut self) {
        while self.src.get(self.pos).is_some_and(u8::is_ascii_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn keyword(&mut self, kw: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(kw.as_bytes()) {
            self.pos += kw.len();
            true
        } else {
            false
        }
    }

    fn at_keyword(&mut self) -> bool {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        rest.starts_with(b"over") || rest.starts_with(b"prec")
    }

    fn number(&mut self) -> Result<u64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return err(start, "expected a number");
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .expect("ascii")
            .parse()
            .or_else(|_| err(start, "number too large"))
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
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

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat(b'*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.peek() == Some(b'/') {
                let pos = self.pos;
                self.pos += 1;
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?), pos);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat(b'-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            let pos = self.pos;
            self.pos += 1;
            let neg = self.eat(b'-');
            let e = self.number()?;
            if e > MAX_EXPONENT {
                return err(pos, format!("exponent above {MAX_EXPONENT}"));
            }
            let e = e as i64;
            return Ok(Expr::Pow(Box::new(base), if neg { -e } else { e }, pos));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return err(self.pos, "expected ')'");
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => Ok(Expr::Int(self.number()?)),
            Some(c) if c.is_ascii_alphabetic() && !self.at_keyword() => {
                let pos = self.pos;
                self.pos += 1;
                if self.src.get(self.pos).is_some_and(u8::is_ascii_alphanumeric) {
                    return err(pos, "unknown identifier");
                }
                Ok(Expr::Var(c as char, pos))
            }
            Some(_) => err(self.pos, "unexpected character"),
            None => err(self.pos, "unexpected end of input"),
        }
    }

    /// `over GF(q)` or `over GF(p^n)`.
    fn field_clause(&mut self) -> Result<Field, ParseError> {
        if !self.keyword("over") {
            return err(self.pos, "expected 'over GF(q)'");
        }
        if !self.keyword("GF") || !self.eat(b'(') {
            return err(self.pos, "expected 'GF('");
        }
        let pos = self.pos;
        let mut q = self.number()?;
        if self.eat(b'^') {
            let e = self.number()?;
            q = u32::try_from(e).ok().and_then(|e| q.checked_pow(e)).map_or_else(|| err(pos, "field too large"), Ok)?;
        }
        if !self.eat(b')') {
            return err(self.pos, "expected ')'");
        }
        field_of_order(q).or_else(|e| err(pos, e.to_string()))
    }

    fn finish(&mut self) -> Result<(), ParseError> {
        if self.peek().is_some() {
            return err(self.pos, "trailing input");
        }
        Ok(())
    }
}

/// `num / den` before reduction.
struct Frac {
    num: Poly,
    den: Poly,
}

impl Frac {
    fn poly(p: Poly) -> Frac {
        let one = Poly::one(p.field());
        Frac { num: p, den: one }
    }
}

fn eval_map(e: &Expr, field: &Field) -> Result<Frac, ParseError> {
    Ok(match e {
        Expr::Int(n) => Frac::poly(Poly::constant(field.from_int((*n % field.characteristic()) as i64))),
        Expr::Var('x', _) => Frac::poly(Poly::x(field)),
        Expr::Var('t', pos) => {
            if field.degree() == 1 {
                return err(*pos, "'t' names the generator of an extension field");
            }
            Frac::poly(Poly::constant(field.generator()))
        }
        Expr::Var(_, pos) => return err(*pos, "unknown variable (use x, or t for the field generator)"),
        Expr::Neg(a) => {
            let a = eval_map(a, field)?;
            Frac { num: a.num.neg(), den: a.den }
        }
        Expr::Add(a, b) | Expr::Sub(a, b) => {
            let (a, b) = (eval_map(a, field)?, eval_map(b, field)?);
            let (l, r) = (a.num.mul(&b.den), b.num.mul(&a.den));
            let num = if matches!(e, Expr::Add(..)) { l.add(&r) } else { l.sub(&r) };
            Frac { num, den: a.den.mul(&b.den) }
        }
        Expr::Mul(a, b) => {
            let (a, b) = (eval_map(a, field)?, eval_map(b, field)?);
            Frac { num: a.num.mul(&b.num), den: a.den.mul(&b.den) }
        }
        Expr::Div(a, b, pos) => {
            let (a, b) = (eval_map(a, field)?, eval_map(b, field)?);
            if b.num.is_zero() {
                return err(*pos, "division by zero");
            }
            Frac { num: a.num.mul(&b.den), den: a.den.mul(&b.num) }
        }
        Expr::Pow(a, k, pos) => {
            let a = eval_map(a, field)?;
            let k32 = k.unsigned_abs() as u32;
            if *k < 0 {
                if a.num.is_zero() {
                    return err(*pos, "division by zero");
                }
                Frac { num: a.den.pow(k32), den: a.num.pow(k32) }
            } else {
                Frac { num: a.num.pow(k32), den: a.den.pow(k32) }
            }
        }
    })
}

/// Parses `EXPR over GF(q)`.
pub fn parse_map(s: &str) -> Result<RatFunc, ParseError> {
    let mut p = Parser::new(s);
    let e = p.expr()?;
    let field = p.field_clause()?;
    p.finish()?;
    let f = eval_map(&e, &field)?;
    RatFunc::new(f.num, f.den).or_else(|e| err(0, e.to_string()))
}

pub fn format_map(f: &RatFunc) -> String {
    format!("{f} over {}", f.field())
}

/// Laurent polynomial as exponent -> nonzero coefficient.
type Terms = BTreeMap<i64, FFElem>;

fn add_terms(mut a: Terms, b: Terms, sign: bool) -> Terms {
    for (e, c) in b {
        let c = if sign { c } else { -&c };
        let s = match a.remove(&e) {
            Some(x) => &x + &c,
            None => c,
        };
        if !s.is_zero() {
            a.insert(e, s);
        }
    }
    a
}

fn mul_terms(a: &Terms, b: &Terms) -> Result<Terms, String> {
    let mut out = Terms::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e = ea.checked_add(*eb).ok_or("exponent overflow")?;
            out = add_terms(out, Terms::from([(e, ca * cb)]), true);
        }
    }
    Ok(out)
}

fn constant_of(t: &Terms) -> Option<FFElem> {
    match t.iter().next() {
        Some((0, c)) if t.len() == 1 => Some(c.clone()),
        _ => None,
    }
}

fn eval_series(e: &Expr, field: &Field) -> Result<Terms, ParseError> {
    let single = |c: FFElem, k: i64| if c.is_zero() { Terms::new() } else { Terms::from([(k, c)]) };
    Ok(match e {
        Expr::Int(n) => single(field.from_int((*n % field.characteristic()) as i64), 0),
        Expr::Var('t', _) => single(field.one(), 1),
        Expr::Var('g', pos) => {
            if field.degree() == 1 {
                return err(*pos, "'g' names the generator of an extension field");
            }
            single(field.generator(), 0)
        }
        Expr::Var(_, pos) => return err(*pos, "unknown variable (use t, or g for the field generator)"),
        Expr::Neg(a) => add_terms(Terms::new(), eval_series(a, field)?, false),
        Expr::Add(a, b) => add_terms(eval_series(a, field)?, eval_series(b, field)?, true),
        Expr::Sub(a, b) => add_terms(eval_series(a, field)?, eval_series(b, field)?, false),
        Expr::Mul(a, b) => mul_terms(&eval_series(a, field)?, &eval_series(b, field)?).or_else(|m| err(0, m))?,
        Expr::Div(a, b, pos) => {
            let d = eval_series(b, field)?;
            let inv = constant_of(&d).and_then(|c| c.inverse().ok());
            match inv {
                Some(inv) => mul_terms(&eval_series(a, field)?, &single(inv, 0)).or_else(|m| err(*pos, m))?,
                None => return err(*pos, "series literals may only divide by nonzero constants"),
            }
        }
        Expr::Pow(a, k, pos) => {
            let a = eval_series(a, field)?;
            match (a.len(), a.iter().next()) {
                (1, Some((e, c))) => {
                    let coeff = if *k >= 0 {
                        c.pow(*k as u128)
                    } else {
                        c.inverse().expect("nonzero").pow(k.unsigned_abs() as u128)
                    };
                    let e = e.checked_mul(*k).ok_or(()).or_else(|_| err(*pos, "exponent overflow"))?;
                    single(coeff, e)
                }
                _ if *k >= 0 => {
                    let mut acc = single(field.one(), 0);
                    for _ in 0..*k {
                        acc = mul_terms(&acc, &a).or_else(|m| err(*pos, m))?;
                    }
                    acc
                }
                _ => return err(*pos, "negative powers apply only to single terms"),
            }
        }
    })
}

/// Parses `EXPR over GF(q) [prec N]`; the precision counts coefficients
/// from the valuation on and defaults to 64.
pub fn parse_series(s: &str) -> Result<LaurentSeries, ParseError> {
    let mut p = Parser::new(s);
    let e = p.expr()?;
    let field = p.field_clause()?;
    let mut prec = DEFAULT_PRECISION;
    if p.keyword("prec") {
        let pos = p.pos;
        prec = usize::try_from(p.number()?).or_else(|_| err(pos, "precision too large"))?;
        if prec == 0 || prec > 1 << 16 {
            return err(pos, "precision must be between 1 and 65536");
        }
    }
    p.finish()?;
    let terms = eval_series(&e, &field)?;
    let Some((&v, _)) = terms.iter().next() else {
        return Ok(LaurentSeries::new(&field, 0, Vec::new(), prec).expect("positive precision"));
    };
    let (&last, _) = terms.iter().next_back().expect("nonempty");
    if last - v >= prec as i64 {
        return err(0, format!("term t^{last} lies beyond precision {prec}"));
    }
    let mut coeffs = vec![field.zero(); prec];
    for (e, c) in terms {
        coeffs[(e - v) as usize] = c;
    }
    Ok(LaurentSeries::new(&field, v, coeffs, prec).expect("positive precision"))
}

pub fn format_series(s: &LaurentSeries) -> String {
    format!("{s} over {} prec {}", s.field(), s.precision())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;

    #[test]
    fn parse_maps() {
        let f = parse_map("x^3 over GF(5)").unwrap();
        assert_eq!(f.degree(), 3);
        let f = parse_map("(2*x + 1)/(x+1) over GF(5)").unwrap();
        assert_eq!(f.to_string(), "(2*x+1)/(x+1)");
        let f = parse_map("1/x over GF(7)").unwrap();
        assert_eq!(format_map(&f), "1/x over GF(7)");
        let f = parse_map("(t+1)*x^2+t over GF(3^2)").unwrap();
        assert_eq!(format_map(&f), "(t+1)*x^2+t over GF(9)");
        let f = parse_map("x^-2 - 6 over GF(5)").unwrap();
        assert_eq!(f.to_string(), "(4*x^2+1)/x^2");
    }

    #[test]
    fn parse_errors() {
        assert!(parse_map("x^3").is_err());
        assert!(parse_map("x^3 over GF(6)").is_err());
        assert!(parse_map("t*x over GF(5)").is_err());
        assert!(parse_map("x/0 over GF(5)").is_err());
        assert!(parse_map("y over GF(5)").is_err());
        assert!(parse_map("(x over GF(5)").is_err());
        assert!(parse_map("x over GF(5) junk").is_err());
        assert!(parse_map("xx over GF(5)").is_err());
    }

    #[test]
    fn parse_series_literals() {
        let s = parse_series("t^-1 + 2 + t^3 over GF(5) prec 64").unwrap();
        let f5 = make_field(5, 1).unwrap();
        assert_eq!(s.valuation(), -1);
        assert_eq!(s.precision(), 64);
        assert_eq!(s.coeff(0), Some(f5.from_int(2)));
        assert_eq!(format_series(&s), "t^-1 + 2 + t^3 over GF(5) prec 64");
        assert_eq!(parse_series("(1+t)^2 over GF(3)").unwrap().to_string(), "1 + 2*t + t^2");
        assert_eq!(parse_series("g*t/2 over GF(9) prec 4").unwrap().to_string(), "2*g*t");
        assert!(parse_series("t^10 + 1 over GF(5) prec 4").is_err());
        assert!(parse_series("1/t over GF(5)").is_err());
        assert!(parse_series("g over GF(5)").is_err());
    }
}
