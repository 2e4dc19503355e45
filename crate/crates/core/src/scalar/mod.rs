//! Exact scalar field: multivariate rational functions over the rationals.
//!
//! Every identity check in the crate reduces to "canonical form is zero".

mod expr;
mod parse;
pub mod poly;

use std::collections::BTreeMap;

pub use expr::ScalarExpr;
pub use parse::{parse_expr, parse_rational};
pub use poly::{Monomial, Poly};

pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScalarError {
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("division by the zero expression")]
    DivisionByZero,
    #[error("pole: denominator vanishes at the point")]
    Pole,
    #[error("point does not assign coordinate `{0}`")]
    MissingCoordinate(String),
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// Ordered coordinate names of a chart.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coordinates(Vec<String>);

impl Coordinates {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Self {
        Coordinates(names.into_iter().map(Into::into).collect())
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn index(&self, name: &str) -> Result<usize, ScalarError> {
        self.0.iter().position(|n| n == name).ok_or_else(|| ScalarError::UnknownVariable(name.into()))
    }

    pub fn parse(&self, text: &str) -> Result<ScalarExpr, ScalarError> {
        parse_expr(text, &self.0)
    }

    pub fn print(&self, e: &ScalarExpr) -> String {
        e.to_text(&self.0)
    }

    pub fn differentiate(&self, e: &ScalarExpr, coord: &str) -> Result<ScalarExpr, ScalarError> {
        Ok(e.diff(self.index(coord)?))
    }

    /// Order a name→value map by coordinate index; every coordinate must be assigned.
    pub fn point(&self, values: &BTreeMap<String, Rational>) -> Result<Vec<Rational>, ScalarError> {
        self.0
            .iter()
            .map(|n| values.get(n).cloned().ok_or_else(|| ScalarError::MissingCoordinate(n.clone())))
            .collect()
    }

    pub fn evaluate(&self, e: &ScalarExpr, values: &BTreeMap<String, Rational>) -> Result<Rational, ScalarError> {
        e.eval(&self.point(values)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xyz() -> Coordinates {
        Coordinates::new(["x", "y", "z"])
    }

    fn at(x: i64, y: i64, z: i64) -> BTreeMap<String, Rational> {
        [("x", x), ("y", y), ("z", z)].into_iter().map(|(k, v)| (k.to_string(), rat(v, 1))).collect()
    }

    #[test]
    fn arith_examples() {
        let c = xyz();
        let half = ScalarExpr::ratio(1, 2);
        assert!((&half * &ScalarExpr::int(2)).is_one());
        let a = c.parse("x/y").unwrap();
        let b = c.parse("y/x").unwrap();
        assert!((&a * &b).is_one());
        assert!((&a - &a).is_zero());
        assert_eq!(ScalarExpr::one().try_div(&ScalarExpr::zero()), Err(ScalarError::DivisionByZero));
    }

    #[test]
    fn differentiate_examples() {
        let c = xyz();
        let e = c.parse("1/2*y").unwrap();
        assert_eq!(c.differentiate(&e, "y").unwrap(), ScalarExpr::ratio(1, 2));
        assert!(c.differentiate(&ScalarExpr::int(5), "x").unwrap().is_zero());
        let inv = c.parse("1/x").unwrap();
        assert_eq!(c.differentiate(&inv, "x").unwrap(), c.parse("-1/x^2").unwrap());
        assert!(matches!(c.differentiate(&e, "w"), Err(ScalarError::UnknownVariable(_))));
    }

    #[test]
    fn evaluate_examples() {
        let c = xyz();
        assert_eq!(c.evaluate(&c.parse("y").unwrap(), &at(0, 3, 0)).unwrap(), rat(3, 1));
        // 1/2 (4 - 1*2) = 1
        assert_eq!(c.evaluate(&c.parse("1/2*(z - y*x)").unwrap(), &at(2, 1, 4)).unwrap(), rat(1, 1));
        assert_eq!(c.evaluate(&c.parse("1/x").unwrap(), &at(0, 1, 1)), Err(ScalarError::Pole));
        let mut partial = at(0, 0, 0);
        partial.remove("z");
        assert!(matches!(c.evaluate(&ScalarExpr::one(), &partial), Err(ScalarError::MissingCoordinate(_))));
    }

    #[test]
    fn canonical_denominator_is_monic() {
        let c = xyz();
        let e = c.parse("x/(2*y - 4*x)").unwrap();
        assert_eq!(e.denominator().leading_coeff(), rat(1, 1));
        assert_eq!(e, c.parse("(-x/4)/(x - y/2)").unwrap());
    }
}
