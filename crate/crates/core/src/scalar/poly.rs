//! Sparse multivariate polynomials over the rationals.
//!
//! Terms are kept in a `BTreeMap` keyed by [`Monomial`], whose ordering is
//! graded-lexicographic with variable 0 as the most significant variable.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use super::Rational;

/// Exponent vector with trailing zero exponents trimmed.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(index: usize, exp: u32) -> Self {
        let mut v = vec![0; index + 1];
        v[index] = exp;
        let mut m = Monomial(v);
        m.trim();
        m
    }

    pub fn from_exponents(exps: Vec<u32>) -> Self {
        let mut m = Monomial(exps);
        m.trim();
        m
    }

    fn trim(&mut self) {
        while self.0.last() == Some(&0) {
            self.0.pop();
        }
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn exp(&self, index: usize) -> u32 {
        self.0.get(index).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let n = self.0.len().max(other.0.len());
        Monomial((0..n).map(|i| self.exp(i) + other.exp(i)).collect())
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        if other.0.len() > self.0.len() {
            return None;
        }
        let mut out = Vec::with_capacity(self.0.len());
        for i in 0..self.0.len() {
            let (a, b) = (self.exp(i), other.exp(i));
            if b > a {
                return None;
            }
            out.push(a - b);
        }
        Some(Monomial::from_exponents(out))
    }

    /// Index of the highest variable with a nonzero exponent.
    pub fn max_var(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    fn with_exp(&self, index: usize, exp: u32) -> Monomial {
        let mut v = self.0.clone();
        if v.len() <= index {
            v.resize(index + 1, 0);
        }
        v[index] = exp;
        Monomial::from_exponents(v)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            let n = self.0.len().max(other.0.len());
            for i in 0..n {
                match self.exp(i).cmp(&other.exp(i)) {
                    Ordering::Equal => continue,
                    o => return o,
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Rational>,
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter().map(|(m, c)| (m, c.to_string()))).finish()
    }
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        let mut p = Poly::zero();
        if !c.is_zero() {
            p.terms.insert(Monomial::one(), c);
        }
        p
    }

    pub fn var(index: usize) -> Self {
        Poly::term(Rational::one(), Monomial::var(index, 1))
    }

    pub fn term(c: Rational, m: Monomial) -> Self {
        let mut p = Poly::zero();
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    /// The constant value, if the polynomial has degree 0 (zero included).
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.as_constant().is_some()
    }

    /// Leading term under the graded-lexicographic order.
    pub fn leading(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> Rational {
        self.leading().map(|(_, c)| c.clone()).unwrap_or_else(Rational::zero)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn max_var(&self) -> Option<usize> {
        self.terms.keys().filter_map(Monomial::max_var).max()
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.exp(var)).max().unwrap_or(0)
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let (mut big, small) = if self.terms.len() >= other.terms.len() {
            (self.clone(), other)
        } else {
            (other.clone(), self)
        };
        for (m, c) in &small.terms {
            big.add_term(m.clone(), c.clone());
        }
        big
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }

    pub fn scale(&self, k: &Rational) -> Poly {
        if k.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if let Some(c) = other.as_constant() {
            return self.scale(&c);
        }
        if let Some(c) = self.as_constant() {
            return other.scale(&c);
        }
        let mut out = Poly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// `self -= c * m * d`, in place.
    fn sub_scaled(&mut self, c: &Rational, m: &Monomial, d: &Poly) {
        for (md, cd) in &d.terms {
            self.add_term(md.mul(m), -(c * cd));
        }
    }

    /// Multivariate division by a single divisor under the term order.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let (lm, lc) = {
            let (m, c) = d.leading().expect("nonzero divisor");
            (m.clone(), c.clone())
        };
        let mut p = self.clone();
        let mut q = Poly::zero();
        let mut r = Poly::zero();
        while let Some((m, c)) = p.leading().map(|(m, c)| (m.clone(), c.clone())) {
            match m.div(&lm) {
                Some(qm) => {
                    let qc = &c / &lc;
                    p.sub_scaled(&qc, &qm, d);
                    q.add_term(qm, qc);
                }
                None => {
                    p.terms.remove(&m);
                    r.add_term(m, c);
                }
            }
        }
        (q, r)
    }

    /// Quotient when `d` divides `self` exactly.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        if let Some(c) = d.as_constant() {
            if c.is_zero() {
                return None;
            }
            return Some(self.scale(&c.recip()));
        }
        let (q, r) = self.div_rem(d);
        r.is_zero().then_some(q)
    }

    /// Scale so the leading coefficient is 1 (zero stays zero).
    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => Poly::zero(),
            Some((_, c)) if c.is_one() => self.clone(),
            Some((_, c)) => self.scale(&c.recip()),
        }
    }

    pub fn diff(&self, var: usize) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let e = m.exp(var);
            if e > 0 {
                out.add_term(m.with_exp(var, e - 1), c * Rational::from_integer(e.into()));
            }
        }
        out
    }

    /// Evaluate at a point; missing coordinates are treated as 0.
    pub fn eval(&self, point: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    let x = point.get(i).cloned().unwrap_or_else(Rational::zero);
                    t *= num_traits::pow(x, e as usize);
                }
            }
            acc += t;
        }
        acc
    }

    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        use num_traits::ToPrimitive;
        let mut acc = 0.0;
        for (m, c) in &self.terms {
            let mut t = c.to_f64().unwrap_or(f64::NAN);
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    t *= point.get(i).copied().unwrap_or(0.0).powi(e as i32);
                }
            }
            acc += t;
        }
        acc
    }

    /// Coefficients with respect to `var`, keyed by the exponent of `var`.
    pub fn coeffs_in(&self, var: usize) -> BTreeMap<u32, Poly> {
        let mut out: BTreeMap<u32, Poly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.exp(var);
            out.entry(e).or_default().add_term(m.with_exp(var, 0), c.clone());
        }
        out
    }

    fn lc_in(&self, var: usize) -> Poly {
        let d = self.degree_in(var);
        self.coeffs_in(var).remove(&d).unwrap_or_default()
    }

    /// gcd of the coefficients with respect to `var`, made monic.
    pub fn content_in(&self, var: usize) -> Poly {
        let mut g = Poly::zero();
        for c in self.coeffs_in(var).values() {
            g = gcd(&g, c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    fn primitive_in(&self, var: usize) -> Poly {
        let c = self.content_in(var);
        self.div_exact(&c).expect("content divides polynomial").monic()
    }

    pub fn is_negative_leading(&self) -> bool {
        self.leading().is_some_and(|(_, c)| c.is_negative())
    }
}

/// Pseudo-remainder of `a` by `b` as univariate polynomials in `var`.
fn prem(a: &Poly, b: &Poly, var: usize) -> Poly {
    let db = b.degree_in(var);
    let lcb = b.lc_in(var);
    let mut r = a.clone();
    while !r.is_zero() && r.degree_in(var) >= db {
        let dr = r.degree_in(var);
        let lcr = r.lc_in(var).mul(&Poly::term(Rational::one(), Monomial::var(var, dr - db)));
        r = r.mul(&lcb).sub(&lcr.mul(b));
    }
    r
}

/// Greatest common divisor, normalized to leading coefficient 1.
///
/// Recursive primitive PRS: the highest variable present is the main
/// variable, coefficients live in the ring of the remaining variables.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    if a == b {
        return a.monic();
    }
    let var = a.max_var().max(b.max_var()).expect("non-constant");
    let ca = a.content_in(var);
    let cb = b.content_in(var);
    let c = gcd(&ca, &cb);
    let pa = a.div_exact(&ca).expect("content divides");
    let pb = b.div_exact(&cb).expect("content divides");
    let g = if pa.degree_in(var) == 0 || pb.degree_in(var) == 0 {
        Poly::one()
    } else {
        prs_gcd(pa, pb, var)
    };
    g.mul(&c).monic()
}

fn prs_gcd(a: Poly, b: Poly, var: usize) -> Poly {
    let (mut r0, mut r1) = if a.degree_in(var) >= b.degree_in(var) { (a, b) } else { (b, a) };
    // cheap exits before the remainder sequence
    if r0.div_exact(&r1).is_some() {
        return r1.monic();
    }
    loop {
        let r = prem(&r0, &r1, var);
        if r.is_zero() {
            return r1.primitive_in(var);
        }
        if r.degree_in(var) == 0 {
            return Poly::one();
        }
        r0 = r1;
        r1 = r.primitive_in(var);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn x() -> Poly {
        Poly::var(0)
    }
    fn y() -> Poly {
        Poly::var(1)
    }

    #[test]
    fn grlex_orders_by_degree_then_lex() {
        let xy = Monomial::from_exponents(vec![1, 1]);
        let x2 = Monomial::var(0, 2);
        let y2 = Monomial::var(1, 2);
        let z3 = Monomial::var(2, 3);
        assert!(x2 > xy && xy > y2);
        assert!(z3 > x2);
        assert!(Monomial::var(0, 1) > Monomial::var(1, 1));
    }

    #[test]
    fn exact_division_recovers_factor() {
        let a = x().add(&y());
        let b = x().sub(&Poly::one());
        let p = a.mul(&b);
        assert_eq!(p.div_exact(&b), Some(a.clone()));
        assert_eq!(p.div_exact(&a), Some(b));
        assert!(p.div_exact(&x().add(&Poly::constant(q(2, 1)))).is_none());
    }

    #[test]
    fn gcd_of_products() {
        let f = x().mul(&y()).add(&Poly::one());
        let g = x().sub(&y());
        let h = x().add(&Poly::constant(q(3, 2)));
        let a = f.mul(&g).mul(&g);
        let b = f.mul(&g).mul(&h);
        assert_eq!(gcd(&a, &b), f.mul(&g).monic());
        assert!(gcd(&g, &h).is_one());
    }

    #[test]
    fn gcd_three_variables() {
        let z = Poly::var(2);
        let f = x().mul(&z).sub(&y().pow(2));
        let a = f.mul(&x().add(&z));
        let b = f.mul(&y().sub(&z)).scale(&q(7, 3));
        assert_eq!(gcd(&a, &b), f.monic());
    }

    #[test]
    fn diff_and_eval() {
        let p = x().pow(3).mul(&y()).scale(&q(1, 2));
        assert_eq!(p.diff(0), x().pow(2).mul(&y()).scale(&q(3, 2)));
        assert_eq!(p.eval(&[q(2, 1), q(3, 1)]), q(12, 1));
    }
}
