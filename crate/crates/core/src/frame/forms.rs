use std::collections::BTreeMap;

use num_traits::Zero;

use super::{FrameAlgebra, FrameError, VectorField};
use crate::linalg::Matrix;
use crate::probe::ProbeSet;
use crate::scalar::{Rational, ScalarExpr};

/// Differential p-form in coframe coefficients on strictly increasing index
/// tuples. Zero coefficients are not stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PForm {
    dim: usize,
    degree: usize,
    coeffs: BTreeMap<Vec<usize>, ScalarExpr>,
}

impl PForm {
    pub fn zero(dim: usize, degree: usize) -> Self {
        PForm { dim, degree, coeffs: BTreeMap::new() }
    }

    pub fn scalar(dim: usize, f: ScalarExpr) -> Self {
        let mut w = PForm::zero(dim, 0);
        w.insert(Vec::new(), f);
        w
    }

    pub fn one_form(components: Vec<ScalarExpr>) -> Self {
        let mut w = PForm::zero(components.len(), 1);
        for (a, c) in components.into_iter().enumerate() {
            w.insert(vec![a], c);
        }
        w
    }

    /// Build from coefficients on arbitrary index tuples; unsorted tuples
    /// are sorted with the permutation sign and repeated indices dropped.
    pub fn from_coeffs(
        dim: usize,
        degree: usize,
        coeffs: impl IntoIterator<Item = (Vec<usize>, ScalarExpr)>,
    ) -> Result<Self, FrameError> {
        if degree > dim {
            return Err(FrameError::DegreeOverflow(degree, dim));
        }
        let mut w = PForm::zero(dim, degree);
        for (idx, c) in coeffs {
            if idx.len() != degree || idx.iter().any(|&i| i >= dim) {
                return Err(FrameError::Shape(format!("bad index tuple {idx:?} for a {degree}-form")));
            }
            if let Some((sorted, sign)) = sort_with_sign(&idx) {
                w.accumulate(sorted, if sign { -c } else { c });
            }
        }
        Ok(w)
    }

    fn insert(&mut self, idx: Vec<usize>, c: ScalarExpr) {
        if !c.is_zero() {
            self.coeffs.insert(idx, c);
        }
    }

    fn accumulate(&mut self, idx: Vec<usize>, c: ScalarExpr) {
        if c.is_zero() {
            return;
        }
        let v = match self.coeffs.remove(&idx) {
            Some(old) => &old + &c,
            None => c,
        };
        self.insert(idx, v);
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coefficients(&self) -> impl Iterator<Item = (&Vec<usize>, &ScalarExpr)> {
        self.coeffs.iter()
    }

    /// Coefficient on a strictly increasing tuple.
    pub fn coefficient(&self, idx: &[usize]) -> ScalarExpr {
        self.coeffs.get(idx).cloned().unwrap_or_default()
    }

    /// Coefficient on any tuple, with the permutation sign applied.
    pub fn signed_coefficient(&self, idx: &[usize]) -> ScalarExpr {
        match sort_with_sign(idx) {
            None => ScalarExpr::zero(),
            Some((sorted, sign)) => {
                let c = self.coefficient(&sorted);
                if sign {
                    -c
                } else {
                    c
                }
            }
        }
    }

    pub fn one_form_components(&self) -> Vec<ScalarExpr> {
        assert_eq!(self.degree, 1, "expected a 1-form");
        (0..self.dim).map(|a| self.coefficient(&[a])).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn witness(&self) -> Option<(&Vec<usize>, &ScalarExpr)> {
        self.coeffs.iter().next()
    }

    pub fn add(&self, other: &PForm) -> PForm {
        assert_eq!((self.dim, self.degree), (other.dim, other.degree), "form shape mismatch");
        let mut out = self.clone();
        for (k, v) in &other.coeffs {
            out.accumulate(k.clone(), v.clone());
        }
        out
    }

    pub fn sub(&self, other: &PForm) -> PForm {
        self.add(&other.scale(&ScalarExpr::int(-1)))
    }

    pub fn scale(&self, f: &ScalarExpr) -> PForm {
        let mut out = PForm::zero(self.dim, self.degree);
        for (k, v) in &self.coeffs {
            out.insert(k.clone(), v * f);
        }
        out
    }

    /// `ω(X_1, …, X_p)` with the `1/p!` convention.
    pub fn eval(&self, vectors: &[VectorField]) -> Result<ScalarExpr, FrameError> {
        if vectors.len() != self.degree {
            return Err(FrameError::Shape(format!(
                "{}-form evaluated on {} vectors",
                self.degree,
                vectors.len()
            )));
        }
        if let Some(v) = vectors.iter().find(|v| v.dim() != self.dim) {
            return Err(FrameError::DimensionMismatch(v.dim(), self.dim));
        }
        let p = self.degree;
        let mut total = ScalarExpr::zero();
        for (idx, c) in &self.coeffs {
            let minor = match p {
                0 => ScalarExpr::one(),
                1 => vectors[0].component(idx[0]).clone(),
                2 => {
                    let (x, y) = (&vectors[0], &vectors[1]);
                    &(x.component(idx[0]) * y.component(idx[1])) - &(x.component(idx[1]) * y.component(idx[0]))
                }
                _ => Matrix::from_fn(p, p, |k, l| vectors[l].component(idx[k]).clone()).determinant(),
            };
            if !minor.is_zero() {
                total = &total + &(c * &minor);
            }
        }
        Ok(total.scale(&factorial(p).recip()))
    }

    /// Probe-backed nonvanishing: canonically nonzero, plus the list of probe
    /// indices where every coefficient vanishes.
    pub fn vanishing_probes(&self, probes: &ProbeSet) -> Vec<usize> {
        let exprs: Vec<ScalarExpr> = self.coeffs.values().cloned().collect();
        probes.vanishing_points(&exprs)
    }
}

fn factorial(p: usize) -> Rational {
    (1..=p).fold(Rational::from_integer(1.into()), |acc, k| acc * Rational::from_integer(k.into()))
}

/// Sort an index tuple; `None` if an index repeats, otherwise the sorted
/// tuple and whether the permutation is odd.
fn sort_with_sign(idx: &[usize]) -> Option<(Vec<usize>, bool)> {
    let mut v = idx.to_vec();
    let mut odd = false;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            odd = !odd;
            j -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((v, odd))
}

/// Exterior product with the determinant rule on coefficients.
pub fn wedge(a: &PForm, b: &PForm) -> Result<PForm, FrameError> {
    if a.dim != b.dim {
        return Err(FrameError::DimensionMismatch(a.dim, b.dim));
    }
    let degree = a.degree + b.degree;
    if degree > a.dim {
        return Err(FrameError::DegreeOverflow(degree, a.dim));
    }
    let mut out = PForm::zero(a.dim, degree);
    for (i, ca) in &a.coeffs {
        for (j, cb) in &b.coeffs {
            let joined: Vec<usize> = i.iter().chain(j).copied().collect();
            if let Some((sorted, odd)) = sort_with_sign(&joined) {
                let c = ca * cb;
                out.accumulate(sorted, if odd { -c } else { c });
            }
        }
    }
    Ok(out)
}

/// `ω^k`, where `ω^0` is the constant 1.
pub fn wedge_power(w: &PForm, k: usize) -> Result<PForm, FrameError> {
    let mut acc = PForm::scalar(w.dim, ScalarExpr::one());
    for _ in 0..k {
        acc = wedge(&acc, w)?;
    }
    Ok(acc)
}

fn wedge_or_zero(a: &PForm, b: &PForm) -> PForm {
    wedge(a, b).unwrap_or_else(|_| PForm::zero(a.dim, a.dim))
}

/// Exterior derivative via the frame formula
/// `(dω)_K = Σ_j (−1)^j e_kj(ω_K\kj) + Σ_{j<l} (−1)^{j+l} ω([e_kj, e_kl], …)`
/// on coefficients; with `1/p!` evaluation this gives
/// `dα(X,Y) = ½(Xα(Y) − Yα(X) − α([X,Y]))`.
pub fn exterior_derivative<F: FrameAlgebra + ?Sized>(frame: &F, w: &PForm) -> Result<PForm, FrameError> {
    let n = frame.dim();
    if w.dim != n {
        return Err(FrameError::DimensionMismatch(w.dim, n));
    }
    let p = w.degree;
    if p >= n {
        return Err(FrameError::DegreeOverflow(p + 1, n));
    }
    let mut out = PForm::zero(n, p + 1);
    for k in increasing_tuples(n, p + 1) {
        let mut total = ScalarExpr::zero();
        for j in 0..=p {
            let rest: Vec<usize> = k.iter().enumerate().filter(|&(i, _)| i != j).map(|(_, &x)| x).collect();
            let c = w.coefficient(&rest);
            if c.is_zero() {
                continue;
            }
            let t = frame.derive(k[j], &c);
            total = if j % 2 == 0 { &total + &t } else { &total - &t };
        }
        for j in 0..=p {
            for l in j + 1..=p {
                let rest: Vec<usize> =
                    k.iter().enumerate().filter(|&(i, _)| i != j && i != l).map(|(_, &x)| x).collect();
                let mut t = ScalarExpr::zero();
                for c in 0..n {
                    let s = frame.structure(c, k[j], k[l]);
                    if s.is_zero() {
                        continue;
                    }
                    let mut idx = vec![c];
                    idx.extend(&rest);
                    let coeff = w.signed_coefficient(&idx);
                    if !coeff.is_zero() {
                        t = &t + &(s * &coeff);
                    }
                }
                total = if (j + l) % 2 == 0 { &total + &t } else { &total - &t };
            }
        }
        out.insert(k, total);
    }
    Ok(out)
}

/// Interior product, normalized so `(i_X ω)(Y, …) = ω(X, Y, …)`.
pub fn interior(w: &PForm, x: &VectorField) -> Result<PForm, FrameError> {
    if w.degree == 0 {
        return Err(FrameError::Shape("interior product of a 0-form".into()));
    }
    let n = w.dim;
    let p = w.degree;
    let mut out = PForm::zero(n, p - 1);
    let inv_p = ScalarExpr::constant(Rational::new(1.into(), p.into()));
    for j in increasing_tuples(n, p - 1) {
        let mut total = ScalarExpr::zero();
        for a in 0..n {
            if x.component(a).is_zero() {
                continue;
            }
            let mut idx = vec![a];
            idx.extend(&j);
            let c = w.signed_coefficient(&idx);
            if !c.is_zero() {
                total = &total + &(x.component(a) * &c);
            }
        }
        out.insert(j, &total * &inv_p);
    }
    Ok(out)
}

pub(crate) fn increasing_tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        rec(0, n, k, &mut Vec::with_capacity(k), &mut out);
    }
    out
}

/// "Not identically zero" with the probe qualifier: a canonically nonzero
/// form whose coefficients all vanish at a probe makes the class non-constant.
fn nonvanishing(w: &PForm, probes: &ProbeSet, what: &str) -> Result<bool, FrameError> {
    if w.is_zero() {
        return Ok(false);
    }
    let bad = w.vanishing_probes(probes);
    if !bad.is_empty() {
        return Err(FrameError::ClassNotConstant(format!("{what} vanishes at probe points {bad:?}")));
    }
    Ok(true)
}

/// Élie Cartan class of a 1-form: `2p+1` when `α∧(dα)^p ≢ 0` and
/// `(dα)^{p+1} ≡ 0`; `2p+2` when `(dα)^{p+1} ≢ 0` and `α∧(dα)^{p+1} ≡ 0`.
pub fn cartan_class<F: FrameAlgebra + ?Sized>(
    frame: &F,
    alpha: &PForm,
    probes: &ProbeSet,
) -> Result<usize, FrameError> {
    if alpha.degree != 1 {
        return Err(FrameError::Shape("Cartan class needs a 1-form".into()));
    }
    if !nonvanishing(alpha, probes, "α")? {
        return Ok(0);
    }
    let da = exterior_derivative(frame, alpha)?;
    let mut power = PForm::scalar(alpha.dim, ScalarExpr::one());
    for p in 0.. {
        let next = wedge_or_zero(&da, &power);
        if !nonvanishing(&next, probes, &format!("(dα)^{}", p + 1))? {
            return Ok(2 * p + 1);
        }
        let a_next = wedge_or_zero(alpha, &next);
        if !nonvanishing(&a_next, probes, &format!("α∧(dα)^{}", p + 1))? {
            return Ok(2 * p + 2);
        }
        power = next;
    }
    unreachable!()
}

impl PForm {
    /// Frame-independent zero test helper for tests and reports.
    pub fn max_abs_at(&self, point: &[Rational]) -> Option<Rational> {
        let mut best = Rational::zero();
        for c in self.coeffs.values() {
            let v = c.eval(point).ok()?;
            let a = if v < Rational::zero() { -v } else { v };
            if a > best {
                best = a;
            }
        }
        Some(best)
    }
}
