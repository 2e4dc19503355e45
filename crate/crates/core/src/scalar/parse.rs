//! Recursive-descent parser for the expression grammar:
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' integer)?
//! atom   := integer | identifier | '(' expr ')'
//! ```
//!
//! Rational literals are written as integer division, e.g. `1/2`.

use num_bigint::BigInt;

use super::{Rational, ScalarError, ScalarExpr};

pub fn parse_expr<S: AsRef<str>>(text: &str, vars: &[S]) -> Result<ScalarExpr, ScalarError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, vars };
    p.skip_ws();
    if p.pos == p.src.len() {
        return Err(p.error("empty expression"));
    }
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(e)
}

/// Parse `p`, `-p` or `p/q` as an exact rational.
pub fn parse_rational(text: &str) -> Result<Rational, ScalarError> {
    let e = parse_expr::<&str>(text, &[])?;
    e.as_constant().ok_or_else(|| ScalarError::Syntax { pos: 0, msg: format!("not a rational: {text}") })
}

struct Parser<'a, S> {
    src: &'a [u8],
    pos: usize,
    vars: &'a [S],
}

impl<S: AsRef<str>> Parser<'_, S> {
    fn error(&self, msg: &str) -> ScalarError {
        ScalarError::Syntax { pos: self.pos, msg: msg.to_string() }
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

    fn expr(&mut self) -> Result<ScalarExpr, ScalarError> {
        let mut acc = self.term()?;
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if c == b'+' { &acc + &rhs } else { &acc - &rhs };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<ScalarExpr, ScalarError> {
        let mut acc = self.unary()?;
        while let Some(c @ (b'*' | b'/')) = self.peek() {
            self.pos += 1;
            let at = self.pos;
            let rhs = self.unary()?;
            acc = if c == b'*' {
                &acc * &rhs
            } else {
                acc.try_div(&rhs).map_err(|_| ScalarError::Syntax {
                    pos: at,
                    msg: "division by the zero expression".into(),
                })?
            };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<ScalarExpr, ScalarError> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(-self.unary()?);
        }
        if self.peek() == Some(b'+') {
            self.pos += 1;
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<ScalarExpr, ScalarError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let digits = self.digits();
            if digits.is_empty() {
                return Err(self.error("expected a nonnegative integer exponent"));
            }
            let e: u32 = digits.parse().map_err(|_| self.error("exponent too large"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn digits(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn atom(&mut self) -> Result<ScalarExpr, ScalarError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let d = self.digits();
                let n: BigInt = d.parse().map_err(|_| self.error("bad integer"))?;
                Ok(ScalarExpr::constant(Rational::from_integer(n)))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                self.vars
                    .iter()
                    .position(|v| v.as_ref() == name)
                    .map(ScalarExpr::var)
                    .ok_or_else(|| ScalarError::UnknownVariable(name.to_string()))
            }
            Some(_) => Err(self.error("unexpected character")),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const XYZ: [&str; 3] = ["x", "y", "z"];

    #[test]
    fn constant_half() {
        assert_eq!(parse_expr("1/2", &["x", "y"]).unwrap(), ScalarExpr::ratio(1, 2));
    }

    #[test]
    fn coordinate_function() {
        assert_eq!(parse_expr("y", &XYZ).unwrap(), ScalarExpr::var(1));
    }

    #[test]
    fn removable_quotient_cancels() {
        // (x^2-1)/(x-1) = x+1 by long division
        let e = parse_expr("(x^2-1)/(x-1)", &XYZ).unwrap();
        assert_eq!(e, parse_expr("x+1", &XYZ).unwrap());
        assert!(e.is_polynomial());
    }

    #[test]
    fn precedence() {
        let e = parse_expr("-x^2 + 2*y/4", &XYZ).unwrap();
        let expect = &(-&ScalarExpr::var(0).pow(2)) + &(&ScalarExpr::var(1) * &ScalarExpr::ratio(1, 2));
        assert_eq!(e, expect);
    }

    #[test]
    fn errors() {
        assert!(matches!(parse_expr("x + ", &XYZ), Err(ScalarError::Syntax { pos: 4, .. })));
        assert!(matches!(parse_expr("w", &XYZ), Err(ScalarError::UnknownVariable(v)) if v == "w"));
        assert!(matches!(parse_expr("1/(x-x)", &XYZ), Err(ScalarError::Syntax { .. })));
        assert!(matches!(parse_expr("x^-1", &XYZ), Err(ScalarError::Syntax { .. })));
        assert!(matches!(parse_expr("(x", &XYZ), Err(ScalarError::Syntax { .. })));
    }

    #[test]
    fn print_parse_idempotent() {
        let vars: Vec<String> = XYZ.iter().map(|s| s.to_string()).collect();
        for src in ["1/2*(z - y*x)", "(x^2+3*y)/(2*x*z-1)", "-7/3", "0", "x*y^2*z^3 - 1/5"] {
            let e = parse_expr(src, &vars).unwrap();
            let text = e.to_text(&vars);
            let again = parse_expr(&text, &vars).unwrap();
            assert_eq!(e, again, "{src} -> {text}");
            assert_eq!(text, again.to_text(&vars));
        }
    }

    #[test]
    fn rational_literal() {
        assert_eq!(parse_rational("-3/4").unwrap(), Rational::new((-3).into(), 4.into()));
        assert!(parse_rational("x").is_err());
    }
}
