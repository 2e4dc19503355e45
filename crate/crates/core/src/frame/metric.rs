use num_traits::Zero;

use super::{bracket, EndoField, FrameAlgebra, FrameError, PForm, VectorField};
use crate::linalg::Matrix;
use crate::scalar::{Rational, ScalarExpr};

/// Riemannian metric by its Gram matrix `G_ab = g(e_a, e_b)` in the frame.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetricField {
    gram: Matrix,
    inverse: Matrix,
}

impl MetricField {
    /// Symmetric, not identically degenerate, and positive definite at the
    /// base point (all leading minors positive there).
    pub fn new(gram: Matrix, base_point: &[Rational]) -> Result<Self, FrameError> {
        if !gram.is_square() {
            return Err(FrameError::Shape("metric must be square".into()));
        }
        if !gram.is_symmetric() {
            let n = gram.rows();
            let (i, j) = (0..n)
                .flat_map(|i| (0..n).map(move |j| (i, j)))
                .find(|&(i, j)| gram.get(i, j) != gram.get(j, i))
                .expect("asymmetric entry");
            return Err(FrameError::InvalidMetric(format!("not symmetric at ({i},{j})")));
        }
        let inverse = gram
            .inverse()
            .ok_or_else(|| FrameError::InvalidMetric("determinant vanishes identically".into()))?;
        let at = gram.eval(base_point).map_err(|e| FrameError::InvalidMetric(format!("at base point: {e}")))?;
        for k in 1..=at.rows() {
            let minor = Matrix::from_fn(k, k, |i, j| at.get(i, j).clone()).determinant();
            let v = minor.as_constant().unwrap_or_default();
            if v <= Rational::zero() {
                return Err(FrameError::InvalidMetric(format!(
                    "not positive definite at the base point: leading minor {k} is {v}"
                )));
            }
        }
        Ok(MetricField { gram, inverse })
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    pub fn inverse(&self) -> &Matrix {
        &self.inverse
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn inner(&self, x: &VectorField, y: &VectorField) -> ScalarExpr {
        let gy = self.gram.mul_vec(y.components());
        x.components().iter().zip(&gy).filter(|(a, _)| !a.is_zero()).map(|(a, b)| a * b).sum()
    }

    pub fn norm_sq(&self, x: &VectorField) -> ScalarExpr {
        self.inner(x, x)
    }

    /// `g(X, ·)`.
    pub fn flat(&self, x: &VectorField) -> PForm {
        PForm::one_form(self.gram.mul_vec(x.components()))
    }

    /// Metric dual of a 1-form.
    pub fn sharp(&self, alpha: &PForm) -> VectorField {
        VectorField::new(self.inverse.mul_vec(&alpha.one_form_components()))
    }

    /// `g(X, φY)` as a Gram-like matrix, i.e. `G φ`.
    pub fn lower_endo(&self, phi: &EndoField) -> Matrix {
        self.gram.mul(phi.matrix())
    }
}

/// Levi-Civita connection coefficients `∇_{e_a} e_b = Σ_d Γ^d_ab e_d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Connection {
    dim: usize,
    gamma: Vec<ScalarExpr>,
}

impl Connection {
    /// Koszul formula in the frame.
    pub fn levi_civita<F: FrameAlgebra + ?Sized>(frame: &F, g: &MetricField) -> Result<Self, FrameError> {
        let n = frame.dim();
        if g.dim() != n {
            return Err(FrameError::DimensionMismatch(g.dim(), n));
        }
        let gm = g.gram();
        // struct_low[(a,b,c)] = g([e_a, e_b], e_c)
        let mut low = vec![ScalarExpr::zero(); n * n * n];
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    low[(a * n + b) * n + c] = (0..n)
                        .filter(|&e| !frame.structure(e, a, b).is_zero())
                        .map(|e| frame.structure(e, a, b) * gm.get(e, c))
                        .sum();
                }
            }
        }
        let derived: Vec<ScalarExpr> = (0..n)
            .flat_map(|a| (0..n * n).map(move |bc| (a, bc / n, bc % n)))
            .map(|(a, b, c)| frame.derive(a, gm.get(b, c)))
            .collect();
        let dg = |a: usize, b: usize, c: usize| &derived[(a * n + b) * n + c];
        let half = ScalarExpr::ratio(1, 2);
        let mut gamma = vec![ScalarExpr::zero(); n * n * n];
        for a in 0..n {
            for b in 0..n {
                let lowered: Vec<ScalarExpr> = (0..n)
                    .map(|c| {
                        let v = &(&(dg(a, b, c) + dg(b, a, c)) - dg(c, a, b))
                            + &(&(&low[(a * n + b) * n + c] - &low[(a * n + c) * n + b]) - &low[(b * n + c) * n + a]);
                        &v * &half
                    })
                    .collect();
                let raised = g.inverse().mul_vec(&lowered);
                for (d, v) in raised.into_iter().enumerate() {
                    gamma[(d * n + a) * n + b] = v;
                }
            }
        }
        Ok(Connection { dim: n, gamma })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `Γ^d_ab`.
    pub fn christoffel(&self, d: usize, a: usize, b: usize) -> &ScalarExpr {
        &self.gamma[(d * self.dim + a) * self.dim + b]
    }

    /// `∇_X Y = X^a (e_a Y^d + Y^b Γ^d_ab) e_d`.
    pub fn nabla<F: FrameAlgebra + ?Sized>(
        &self,
        frame: &F,
        x: &VectorField,
        y: &VectorField,
    ) -> Result<VectorField, FrameError> {
        let n = self.dim;
        if x.dim() != n || y.dim() != n {
            return Err(FrameError::DimensionMismatch(x.dim().max(y.dim()), n));
        }
        let mut out = Vec::with_capacity(n);
        for d in 0..n {
            let mut v = frame.apply(x, y.component(d));
            for a in 0..n {
                let xa = x.component(a);
                if xa.is_zero() {
                    continue;
                }
                let s: ScalarExpr = (0..n)
                    .filter(|&b| !y.component(b).is_zero() && !self.christoffel(d, a, b).is_zero())
                    .map(|b| y.component(b) * self.christoffel(d, a, b))
                    .sum();
                if !s.is_zero() {
                    v = &v + &(xa * &s);
                }
            }
            out.push(v);
        }
        Ok(VectorField::new(out))
    }

    /// `(∇_X φ)Y = ∇_X(φY) − φ(∇_X Y)` as an endomorphism field.
    pub fn nabla_endo<F: FrameAlgebra + ?Sized>(
        &self,
        frame: &F,
        x: &VectorField,
        phi: &EndoField,
    ) -> Result<EndoField, FrameError> {
        let n = self.dim;
        let mut cols = Vec::with_capacity(n);
        for b in 0..n {
            let e = VectorField::basis(n, b);
            let v = &self.nabla(frame, x, &phi.apply(&e))? - &phi.apply(&self.nabla(frame, x, &e)?);
            cols.push(v.into_components());
        }
        Ok(EndoField::new(Matrix::from_columns(&cols, n)))
    }

    /// `R(X,Y)Z = ∇_X∇_Y Z − ∇_Y∇_X Z − ∇_[X,Y] Z`.
    pub fn curvature<F: FrameAlgebra + ?Sized>(
        &self,
        frame: &F,
        x: &VectorField,
        y: &VectorField,
        z: &VectorField,
    ) -> Result<VectorField, FrameError> {
        let xyz = self.nabla(frame, x, &self.nabla(frame, y, z)?)?;
        let yxz = self.nabla(frame, y, &self.nabla(frame, x, z)?)?;
        let bxy = bracket(frame, x, y)?;
        Ok(&(&xyz - &yxz) - &self.nabla(frame, &bxy, z)?)
    }

    /// `∇_X Y − ∇_Y X − [X,Y]`.
    pub fn torsion<F: FrameAlgebra + ?Sized>(
        &self,
        frame: &F,
        x: &VectorField,
        y: &VectorField,
    ) -> Result<VectorField, FrameError> {
        Ok(&(&self.nabla(frame, x, y)? - &self.nabla(frame, y, x)?) - &bracket(frame, x, y)?)
    }

    /// Killing test `g(∇_{e_a} X, e_b) + g(∇_{e_b} X, e_a) ≡ 0`; returns the
    /// first failing pair with its value.
    pub fn killing_defect<F: FrameAlgebra + ?Sized>(
        &self,
        frame: &F,
        g: &MetricField,
        x: &VectorField,
    ) -> Result<Option<((usize, usize), ScalarExpr)>, FrameError> {
        let n = self.dim;
        let cols: Vec<VectorField> =
            (0..n).map(|a| self.nabla(frame, &VectorField::basis(n, a), x)).collect::<Result<_, _>>()?;
        for a in 0..n {
            for b in a..n {
                let v = &g.inner(&cols[a], &VectorField::basis(n, b)) + &g.inner(&cols[b], &VectorField::basis(n, a));
                if !v.is_zero() {
                    return Ok(Some(((a, b), v)));
                }
            }
        }
        Ok(None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::FramePresentation;
    use crate::scalar::{rat, Coordinates};

    fn heisenberg() -> FramePresentation {
        let c = Coordinates::new(["x", "y", "z"]);
        let rows = ["1", "0", "0", "0", "1", "0", "0", "-x", "1"].map(|s| c.parse(s).unwrap());
        let frame = Matrix::from_rows(rows.chunks(3).map(<[_]>::to_vec).collect());
        FramePresentation::new(c, frame, vec![rat(0, 1); 3]).unwrap()
    }

    fn basis(n: usize) -> Vec<VectorField> {
        (0..n).map(|a| VectorField::basis(n, a)).collect()
    }

    #[test]
    fn rejects_asymmetric_and_indefinite() {
        let m = Matrix::from_rows(vec![vec![1.into(), 2.into()], vec![0.into(), 1.into()]]);
        assert!(matches!(MetricField::new(m, &[rat(0, 1), rat(0, 1)]), Err(FrameError::InvalidMetric(_))));
        let m = Matrix::from_rows(vec![vec![1.into(), 0.into()], vec![0.into(), (-1).into()]]);
        assert!(matches!(MetricField::new(m, &[rat(0, 1), rat(0, 1)]), Err(FrameError::InvalidMetric(_))));
    }

    #[test]
    fn heisenberg_connection_is_torsion_free_and_metric() {
        let f = heisenberg();
        let g = MetricField::new(Matrix::identity(3), f.base_point()).unwrap();
        let nabla = Connection::levi_civita(&f, &g).unwrap();
        let e = basis(3);
        for x in &e {
            for y in &e {
                assert!(nabla.torsion(&f, x, y).unwrap().is_zero());
                for z in &e {
                    // X g(Y,Z) = g(∇_X Y, Z) + g(Y, ∇_X Z) with constant G
                    let v = &g.inner(&nabla.nabla(&f, x, y).unwrap(), z) + &g.inner(y, &nabla.nabla(&f, x, z).unwrap());
                    assert!(v.is_zero());
                }
            }
        }
        // ∇_{e1} e2 = ½[e1,e2] = −½ e3
        assert_eq!(nabla.christoffel(2, 0, 1), &ScalarExpr::ratio(-1, 2));
        // the Reeb field is Killing
        assert!(nabla.killing_defect(&f, &g, &e[2]).unwrap().is_none());
        assert!(nabla.killing_defect(&f, &g, &e[0].scale(&f.coordinates().parse("y").unwrap())).unwrap().is_some());
    }

    #[test]
    fn first_bianchi() {
        let f = heisenberg();
        let g = MetricField::new(Matrix::identity(3), f.base_point()).unwrap();
        let nabla = Connection::levi_civita(&f, &g).unwrap();
        let e = basis(3);
        for x in &e {
            for y in &e {
                for z in &e {
                    let s = &(&nabla.curvature(&f, x, y, z).unwrap() + &nabla.curvature(&f, y, z, x).unwrap())
                        + &nabla.curvature(&f, z, x, y).unwrap();
                    assert!(s.is_zero());
                }
            }
        }
    }
}
