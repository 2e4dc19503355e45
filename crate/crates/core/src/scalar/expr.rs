use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Signed, ToPrimitive, Zero};

use super::poly::{gcd, Poly};
use super::{Rational, ScalarError};

/// Canonical rational function: `num / den` with `gcd(num, den) = 1` and
/// `den` monic in the graded-lexicographic order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ScalarExpr(Arc<Fraction>);

#[derive(Clone, PartialEq, Eq, Hash)]
struct Fraction {
    num: Poly,
    den: Poly,
}

impl Default for ScalarExpr {
    fn default() -> Self {
        ScalarExpr::zero()
    }
}

impl ScalarExpr {
    pub fn zero() -> Self {
        ScalarExpr::from_poly(Poly::zero())
    }

    pub fn one() -> Self {
        ScalarExpr::from_poly(Poly::one())
    }

    pub fn constant(c: Rational) -> Self {
        ScalarExpr::from_poly(Poly::constant(c))
    }

    pub fn int(n: i64) -> Self {
        ScalarExpr::constant(Rational::from_integer(n.into()))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        ScalarExpr::constant(Rational::new(n.into(), d.into()))
    }

    /// The coordinate function of variable `index`.
    pub fn var(index: usize) -> Self {
        ScalarExpr::from_poly(Poly::var(index))
    }

    pub fn from_poly(p: Poly) -> Self {
        ScalarExpr(Arc::new(Fraction { num: p, den: Poly::one() }))
    }

    /// Canonical form of `num / den`.
    pub fn from_fraction(num: Poly, den: Poly) -> Result<Self, ScalarError> {
        if den.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(ScalarExpr::zero());
        }
        if let Some(c) = den.as_constant() {
            return Ok(ScalarExpr::from_poly(num.scale(&c.recip())));
        }
        let g = gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g).expect("gcd divides"), den.div_exact(&g).expect("gcd divides"))
        };
        Ok(ScalarExpr::normalized(num, den))
    }

    /// Scale a coprime pair so the denominator is monic.
    fn normalized(num: Poly, den: Poly) -> Self {
        let lc = den.leading_coeff();
        if lc.is_one() {
            return ScalarExpr(Arc::new(Fraction { num, den }));
        }
        let inv = lc.recip();
        let den = den.scale(&inv);
        if den.is_one() {
            return ScalarExpr::from_poly(num.scale(&inv));
        }
        ScalarExpr(Arc::new(Fraction { num: num.scale(&inv), den }))
    }

    pub fn numerator(&self) -> &Poly {
        &self.0.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.0.den
    }

    pub fn is_zero(&self) -> bool {
        self.0.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.den.is_one() && self.0.num.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.0.den.is_one()
    }

    pub fn as_constant(&self) -> Option<Rational> {
        if self.0.den.is_one() {
            self.0.num.as_constant()
        } else {
            None
        }
    }

    pub fn is_constant(&self) -> bool {
        self.as_constant().is_some()
    }

    pub fn try_div(&self, other: &ScalarExpr) -> Result<ScalarExpr, ScalarError> {
        Ok(self * &other.recip()?)
    }

    pub fn recip(&self) -> Result<ScalarExpr, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(ScalarExpr::normalized(self.0.den.clone(), self.0.num.clone()))
    }

    pub fn pow(&self, e: u32) -> ScalarExpr {
        if self.0.den.is_one() {
            return ScalarExpr::from_poly(self.0.num.pow(e));
        }
        ScalarExpr::normalized(self.0.num.pow(e), self.0.den.pow(e))
    }

    pub fn scale(&self, k: &Rational) -> ScalarExpr {
        if k.is_zero() {
            return ScalarExpr::zero();
        }
        ScalarExpr(Arc::new(Fraction { num: self.0.num.scale(k), den: self.0.den.clone() }))
    }

    /// Partial derivative with respect to variable `index`.
    pub fn diff(&self, index: usize) -> ScalarExpr {
        let Fraction { num, den } = &*self.0;
        if den.is_one() {
            return ScalarExpr::from_poly(num.diff(index));
        }
        let dn = num.diff(index);
        let dd = den.diff(index);
        if dd.is_zero() {
            return ScalarExpr::from_fraction(dn, den.clone()).expect("nonzero denominator");
        }
        let top = dn.mul(den).sub(&num.mul(&dd));
        ScalarExpr::from_fraction(top, den.mul(den)).expect("nonzero denominator")
    }

    /// Exact value at a point given by variable index.
    pub fn eval(&self, point: &[Rational]) -> Result<Rational, ScalarError> {
        let d = self.0.den.eval(point);
        if d.is_zero() {
            return Err(ScalarError::Pole);
        }
        Ok(self.0.num.eval(point) / d)
    }

    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        self.0.num.eval_f64(point) / self.0.den.eval_f64(point)
    }

    /// Fully parenthesized text in the expression grammar.
    pub fn to_text(&self, vars: &[String]) -> String {
        let num = poly_text(&self.0.num, vars);
        if self.0.den.is_one() {
            num
        } else {
            format!("({num}/{})", poly_text(&self.0.den, vars))
        }
    }

    pub fn to_f64(&self) -> Option<f64> {
        self.as_constant().and_then(|c| c.to_f64())
    }
}

fn rational_text(c: &Rational) -> String {
    if c.is_integer() {
        if c.is_negative() {
            format!("({})", c.numer())
        } else {
            c.numer().to_string()
        }
    } else {
        format!("({}/{})", c.numer(), c.denom())
    }
}

fn var_name(vars: &[String], i: usize) -> String {
    vars.get(i).cloned().unwrap_or_else(|| format!("v{i}"))
}

fn poly_text(p: &Poly, vars: &[String]) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let terms: Vec<String> = p
        .terms()
        .rev()
        .map(|(m, c)| {
            let mut factors = Vec::new();
            if !c.is_one() || m.is_one() {
                factors.push(rational_text(c));
            }
            for (i, &e) in m.exponents().iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(var_name(vars, i)),
                    _ => factors.push(format!("{}^{e}", var_name(vars, i))),
                }
            }
            if factors.len() == 1 {
                factors.pop().unwrap()
            } else {
                format!("({})", factors.join("*"))
            }
        })
        .collect();
    if terms.len() == 1 {
        terms.into_iter().next().unwrap()
    } else {
        format!("({})", terms.join(" + "))
    }
}

impl fmt::Debug for ScalarExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text(&[]))
    }
}

impl fmt::Display for ScalarExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text(&[]))
    }
}

impl<'a> Add<&'a ScalarExpr> for &'a ScalarExpr {
    type Output = ScalarExpr;
    fn add(self, rhs: &ScalarExpr) -> ScalarExpr {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let (a, b) = (&*self.0, &*rhs.0);
        if a.den.is_one() && b.den.is_one() {
            return ScalarExpr::from_poly(a.num.add(&b.num));
        }
        if a.den == b.den {
            return ScalarExpr::from_fraction(a.num.add(&b.num), a.den.clone()).expect("nonzero");
        }
        let g = gcd(&a.den, &b.den);
        let bd = b.den.div_exact(&g).expect("gcd divides");
        let ad = a.den.div_exact(&g).expect("gcd divides");
        let num = a.num.mul(&bd).add(&b.num.mul(&ad));
        ScalarExpr::from_fraction(num, a.den.mul(&bd)).expect("nonzero")
    }
}

impl<'a> Sub<&'a ScalarExpr> for &'a ScalarExpr {
    type Output = ScalarExpr;
    fn sub(self, rhs: &ScalarExpr) -> ScalarExpr {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a ScalarExpr> for &'a ScalarExpr {
    type Output = ScalarExpr;
    fn mul(self, rhs: &ScalarExpr) -> ScalarExpr {
        if self.is_zero() || rhs.is_zero() {
            return ScalarExpr::zero();
        }
        if let Some(c) = rhs.as_constant() {
            return self.scale(&c);
        }
        if let Some(c) = self.as_constant() {
            return rhs.scale(&c);
        }
        let (a, b) = (&*self.0, &*rhs.0);
        if a.den.is_one() && b.den.is_one() {
            return ScalarExpr::from_poly(a.num.mul(&b.num));
        }
        let g1 = gcd(&a.num, &b.den);
        let g2 = gcd(&b.num, &a.den);
        let an = a.num.div_exact(&g1).expect("gcd divides");
        let bd = b.den.div_exact(&g1).expect("gcd divides");
        let bn = b.num.div_exact(&g2).expect("gcd divides");
        let ad = a.den.div_exact(&g2).expect("gcd divides");
        ScalarExpr::normalized(an.mul(&bn), ad.mul(&bd))
    }
}

impl<'a> Div<&'a ScalarExpr> for &'a ScalarExpr {
    type Output = ScalarExpr;
    /// Panics on division by the zero expression; use [`ScalarExpr::try_div`]
    /// when the divisor is not known to be nonzero.
    fn div(self, rhs: &ScalarExpr) -> ScalarExpr {
        self.try_div(rhs).expect("division by the zero expression")
    }
}

impl Neg for &ScalarExpr {
    type Output = ScalarExpr;
    fn neg(self) -> ScalarExpr {
        ScalarExpr(Arc::new(Fraction { num: self.0.num.neg(), den: self.0.den.clone() }))
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<ScalarExpr> for ScalarExpr {
            type Output = ScalarExpr;
            fn $m(self, rhs: ScalarExpr) -> ScalarExpr {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a ScalarExpr> for ScalarExpr {
            type Output = ScalarExpr;
            fn $m(self, rhs: &ScalarExpr) -> ScalarExpr {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<ScalarExpr> for &'a ScalarExpr {
            type Output = ScalarExpr;
            fn $m(self, rhs: ScalarExpr) -> ScalarExpr {
                self.$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for ScalarExpr {
    type Output = ScalarExpr;
    fn neg(self) -> ScalarExpr {
        -&self
    }
}

impl std::iter::Sum for ScalarExpr {
    fn sum<I: Iterator<Item = ScalarExpr>>(iter: I) -> Self {
        iter.fold(ScalarExpr::zero(), |a, b| &a + &b)
    }
}

impl From<Rational> for ScalarExpr {
    fn from(c: Rational) -> Self {
        ScalarExpr::constant(c)
    }
}

impl From<i64> for ScalarExpr {
    fn from(n: i64) -> Self {
        ScalarExpr::int(n)
    }
}
