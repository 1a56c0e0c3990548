//! Expression grammar for polynomials:
//!
//! ```text
//! expr   := ["-"] term { ("+" | "-") term }
//! term   := unary { ("*" | "/") unary }
//! unary  := "-" unary | power
//! power  := atom [ "^" integer ]
//! atom   := integer | identifier | "(" expr ")"
//! ```
//!
//! Division is only allowed by a nonzero constant.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{Chart, Poly, Rational};
use crate::error::{Error, Result};

pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Parse a rational literal such as `3`, `-2`, `5/7`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest.trim()),
        None => (false, s),
    };
    let (n, d) = match body.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (body, "1"),
    };
    if n.is_empty() || d.is_empty() {
        return None;
    }
    if !n.chars().all(|c| c.is_ascii_digit()) || !d.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    let n: BigInt = n.parse().ok()?;
    let d: BigInt = d.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    let r = Rational::new(n, d);
    Some(if neg { -r } else { r })
}

pub(super) fn parse_poly(chart: &Arc<Chart>, src: &str) -> Result<Poly> {
    parse_poly_at(chart, src, 1, 1)
}

/// Parse with error positions shifted to `(line, column)` of the first character.
pub(crate) fn parse_poly_at(
    chart: &Arc<Chart>,
    src: &str,
    line: usize,
    column: usize,
) -> Result<Poly> {
    let mut p = Parser {
        chart,
        chars: src.chars().collect(),
        pos: 0,
        line,
        column,
    };
    p.skip_ws();
    if p.at_end() {
        return Err(p.error("empty expression"));
    }
    let e = p.expr()?;
    p.skip_ws();
    if !p.at_end() {
        return Err(p.error(format!("unexpected character '{}'", p.chars[p.pos])));
    }
    Ok(e)
}

struct Parser<'a> {
    chart: &'a Arc<Chart>,
    chars: Vec<char>,
    pos: usize,
    line: usize,
    column: usize,
}

impl Parser<'_> {
    fn error(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            line: self.line,
            column: self.column + self.pos,
            message: message.into(),
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.chars.len()
    }

    fn skip_ws(&mut self) {
        while !self.at_end() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = self.term()?;
        while let Some(c) = self.peek() {
            match c {
                '+' => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                '-' => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.unary()?;
        while let Some(c) = self.peek() {
            match c {
                '*' => {
                    self.pos += 1;
                    acc = &acc * &self.unary()?;
                }
                '/' => {
                    self.pos += 1;
                    let at = self.pos;
                    let d = self.unary()?;
                    if !d.is_constant() || d.is_zero() {
                        self.pos = at;
                        return Err(self.error("division is only allowed by a nonzero constant"));
                    }
                    let inv = Rational::one() / d.constant_term();
                    acc = acc.scale(&inv);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Poly> {
        if self.peek() == Some('-') {
            self.pos += 1;
            return Ok(-self.unary()?);
        }
        if self.peek() == Some('+') {
            self.pos += 1;
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Poly> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            let digits = self.take_while(|c| c.is_ascii_digit());
            if digits.is_empty() {
                return Err(self.error("expected a non-negative integer exponent"));
            }
            let e: u32 = digits.parse().map_err(|_| {
                let mut p = self.error("exponent too large");
                if let Error::Parse { column, .. } = &mut p {
                    *column = self.column + start;
                }
                p
            })?;
            if e > 1024 {
                self.pos = start;
                return Err(self.error("exponent too large"));
            }
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn take_while(&mut self, f: impl Fn(char) -> bool) -> String {
        let start = self.pos;
        while !self.at_end() && f(self.chars[self.pos]) {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    fn atom(&mut self) -> Result<Poly> {
        match self.peek() {
            None => Err(self.error("unexpected end of expression")),
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let digits = self.take_while(|c| c.is_ascii_digit());
                let n: BigInt = digits.parse().expect("digits");
                Ok(Poly::constant(self.chart, Rational::from_integer(n)))
            }
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {
                let start = self.pos;
                let name = self.take_while(|c| c.is_ascii_alphanumeric() || c == '_');
                match self.chart.index_of(&name) {
                    Some(i) => Ok(Poly::var(self.chart, i).expect("index from chart")),
                    None => {
                        self.pos = start;
                        Err(self.error(format!("unknown variable '{name}'")))
                    }
                }
            }
            Some(c) => Err(self.error(format!("unexpected character '{c}'"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    fn chart() -> Arc<Chart> {
        Chart::new(&["t", "q", "p"]).unwrap()
    }

    #[test]
    fn literals() {
        assert_eq!(parse_rational("3/4"), Some(rat(3, 4)));
        assert_eq!(parse_rational("-2"), Some(rat(-2, 1)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x"), None);
    }

    #[test]
    fn precedence() {
        let c = chart();
        let a = Poly::parse(&c, "-q^2 + 2*p*t").unwrap();
        let q = Poly::var(&c, 1).unwrap();
        let p = Poly::var(&c, 2).unwrap();
        let t = Poly::var(&c, 0).unwrap();
        let expect = &(&(&p * &t) * &Poly::int(&c, 2)) - &(&q * &q);
        assert_eq!(a, expect);
    }

    #[test]
    fn unknown_variable_reports_column() {
        let err = Poly::parse(&chart(), "q + zz").unwrap_err();
        assert_eq!(
            err,
            Error::Parse {
                line: 1,
                column: 5,
                message: "unknown variable 'zz'".into()
            }
        );
    }

    #[test]
    fn rejects_division_by_variable() {
        assert!(matches!(
            Poly::parse(&chart(), "q / p"),
            Err(Error::Parse { .. })
        ));
        assert!(Poly::parse(&chart(), "q / 0").is_err());
        assert!(Poly::parse(&chart(), "q +").is_err());
        assert!(Poly::parse(&chart(), "(q").is_err());
        assert!(Poly::parse(&chart(), "").is_err());
        assert!(Poly::parse(&chart(), "q^").is_err());
    }

    #[test]
    fn identifiers() {
        assert!(is_identifier("q_2"));
        assert!(!is_identifier("2q"));
        assert!(!is_identifier(""));
    }
}
