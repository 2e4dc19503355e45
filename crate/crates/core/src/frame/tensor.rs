use std::ops::{Add, Neg, Sub};

use super::{FrameAlgebra, FrameError, PForm};
use crate::linalg::Matrix;
use crate::scalar::{Rational, ScalarError, ScalarExpr};

/// Vector field in frame components.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VectorField(Vec<ScalarExpr>);

impl VectorField {
    pub fn new(components: Vec<ScalarExpr>) -> Self {
        VectorField(components)
    }

    pub fn zero(n: usize) -> Self {
        VectorField(vec![ScalarExpr::zero(); n])
    }

    pub fn basis(n: usize, a: usize) -> Self {
        let mut v = VectorField::zero(n);
        v.0[a] = ScalarExpr::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn components(&self) -> &[ScalarExpr] {
        &self.0
    }

    pub fn into_components(self) -> Vec<ScalarExpr> {
        self.0
    }

    pub fn component(&self, a: usize) -> &ScalarExpr {
        &self.0[a]
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(ScalarExpr::is_zero)
    }

    pub fn scale(&self, f: &ScalarExpr) -> VectorField {
        VectorField(self.0.iter().map(|c| c * f).collect())
    }

    /// First nonzero component, as a witness for a failed zero check.
    pub fn witness(&self) -> Option<(usize, &ScalarExpr)> {
        self.0.iter().enumerate().find(|(_, c)| !c.is_zero())
    }

    pub fn eval(&self, point: &[Rational]) -> Result<Vec<Rational>, ScalarError> {
        self.0.iter().map(|c| c.eval(point)).collect()
    }

    pub fn eval_f64(&self, point: &[f64]) -> Vec<f64> {
        self.0.iter().map(|c| c.eval_f64(point)).collect()
    }

    /// True when some component is nonzero at the point (poles count as nonzero).
    pub fn nonzero_at(&self, point: &[Rational]) -> bool {
        self.0.iter().any(|c| c.eval(point).map_or(true, |v| !num_traits::Zero::is_zero(&v)))
    }
}

impl Add for &VectorField {
    type Output = VectorField;
    fn add(self, rhs: &VectorField) -> VectorField {
        assert_eq!(self.dim(), rhs.dim(), "vector dimension mismatch");
        VectorField(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &VectorField {
    type Output = VectorField;
    fn sub(self, rhs: &VectorField) -> VectorField {
        assert_eq!(self.dim(), rhs.dim(), "vector dimension mismatch");
        VectorField(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Add for VectorField {
    type Output = VectorField;
    fn add(self, rhs: VectorField) -> VectorField {
        &self + &rhs
    }
}

impl Sub for VectorField {
    type Output = VectorField;
    fn sub(self, rhs: VectorField) -> VectorField {
        &self - &rhs
    }
}

impl Neg for &VectorField {
    type Output = VectorField;
    fn neg(self) -> VectorField {
        VectorField(self.0.iter().map(|c| -c).collect())
    }
}

/// Lie bracket in frame components:
/// `[X,Y]^c = X(Y^c) − Y(X^c) + X^a Y^b C^c_ab`.
pub fn bracket<F: FrameAlgebra + ?Sized>(
    frame: &F,
    x: &VectorField,
    y: &VectorField,
) -> Result<VectorField, FrameError> {
    let n = frame.dim();
    if x.dim() != n || y.dim() != n {
        return Err(FrameError::DimensionMismatch(x.dim().max(y.dim()), n));
    }
    let mut out = Vec::with_capacity(n);
    for c in 0..n {
        let mut v = &frame.apply(x, y.component(c)) - &frame.apply(y, x.component(c));
        for a in 0..n {
            if x.component(a).is_zero() {
                continue;
            }
            for b in 0..n {
                let s = frame.structure(c, a, b);
                if s.is_zero() || y.component(b).is_zero() {
                    continue;
                }
                v = &v + &(&(x.component(a) * y.component(b)) * s);
            }
        }
        out.push(v);
    }
    Ok(VectorField(out))
}

/// (1,1)-tensor field; column b holds the frame components of φ(e_b).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EndoField(Matrix);

impl EndoField {
    pub fn new(m: Matrix) -> Self {
        assert!(m.is_square(), "endomorphism matrix must be square");
        EndoField(m)
    }

    pub fn identity(n: usize) -> Self {
        EndoField(Matrix::identity(n))
    }

    pub fn zero(n: usize) -> Self {
        EndoField(Matrix::zeros(n, n))
    }

    /// `α ⊗ Z`, i.e. `X ↦ α(X) Z`.
    pub fn tensor(alpha: &PForm, z: &VectorField) -> Self {
        let a = alpha.one_form_components();
        let n = z.dim();
        EndoField(Matrix::from_fn(n, n, |i, j| z.component(i) * &a[j]))
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    pub fn apply(&self, x: &VectorField) -> VectorField {
        VectorField::new(self.0.mul_vec(x.components()))
    }

    pub fn compose(&self, other: &EndoField) -> EndoField {
        EndoField(self.0.mul(&other.0))
    }

    pub fn add(&self, other: &EndoField) -> EndoField {
        EndoField(self.0.add(&other.0))
    }

    pub fn sub(&self, other: &EndoField) -> EndoField {
        EndoField(self.0.sub(&other.0))
    }

    pub fn scale(&self, f: &ScalarExpr) -> EndoField {
        EndoField(self.0.scale(f))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// `α ∘ φ` as a 1-form.
    pub fn pullback(&self, alpha: &PForm) -> PForm {
        let a = alpha.one_form_components();
        let n = self.dim();
        PForm::one_form(
            (0..n)
                .map(|b| (0..n).filter(|&k| !a[k].is_zero()).map(|k| &a[k] * self.0.get(k, b)).sum())
                .collect(),
        )
    }

    /// Symbolic rank.
    pub fn rank(&self) -> usize {
        self.0.rank()
    }

    pub fn rank_at(&self, point: &[Rational]) -> Result<usize, ScalarError> {
        self.0.rank_at(point)
    }

    /// Nijenhuis torsion `[φ,φ](X,Y) = φ²[X,Y] − φ[φX,Y] − φ[X,φY] + [φX,φY]`.
    pub fn nijenhuis<F: FrameAlgebra + ?Sized>(
        &self,
        frame: &F,
        x: &VectorField,
        y: &VectorField,
    ) -> Result<VectorField, FrameError> {
        let px = self.apply(x);
        let py = self.apply(y);
        let t1 = self.apply(&self.apply(&bracket(frame, x, y)?));
        let t2 = self.apply(&bracket(frame, &px, y)?);
        let t3 = self.apply(&bracket(frame, x, &py)?);
        let t4 = bracket(frame, &px, &py)?;
        Ok(&(&(&t1 - &t2) - &t3) + &t4)
    }
}

/// `(L_Z φ)(X) = [Z, φX] − φ[Z, X]`.
pub fn lie_derivative_endo<F: FrameAlgebra + ?Sized>(
    frame: &F,
    z: &VectorField,
    phi: &EndoField,
) -> Result<EndoField, FrameError> {
    let n = frame.dim();
    let mut cols = Vec::with_capacity(n);
    for b in 0..n {
        let e = VectorField::basis(n, b);
        let v = &bracket(frame, z, &phi.apply(&e))? - &phi.apply(&bracket(frame, z, &e)?);
        cols.push(v.into_components());
    }
    Ok(EndoField(Matrix::from_columns(&cols, n)))
}
