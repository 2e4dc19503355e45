//! Calculus over a frame presentation: brackets, forms, exterior derivative,
//! Levi-Civita connection, curvature and Lie derivatives.
//!
//! # Conventions
//!
//! * A p-form is stored by its coefficients on strictly increasing index
//!   tuples of the coframe, multiplied with the determinant rule
//!   (`e^1 ∧ e^2` has coefficient 1 on `(1,2)`).
//! * Evaluation carries a `1/p!`: `(α∧β)(X,Y) = ½(α(X)β(Y) − α(Y)β(X))`.
//!   Consequently `dα(X,Y) = ½(Xα(Y) − Yα(X) − α([X,Y]))`.
//! * Curvature is `R(X,Y) = [∇_X, ∇_Y] − ∇_[X,Y]`.

mod forms;
mod metric;
mod tensor;

use std::collections::BTreeMap;

pub use forms::{cartan_class, exterior_derivative, interior, wedge, wedge_power, PForm};
pub use metric::{Connection, MetricField};
pub use tensor::{bracket, lie_derivative_endo, EndoField, VectorField};

use crate::linalg::Matrix;
use crate::scalar::{Coordinates, Rational, ScalarError, ScalarExpr};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FrameError {
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error("{0}")]
    Shape(String),
    #[error("frame is singular: {0}")]
    SingularFrame(String),
    #[error("Jacobi identity fails for (e{0}, e{1}, e{2}): inconsistent frame input")]
    Jacobi(usize, usize, usize),
    #[error("form degree {0} exceeds dimension {1}")]
    DegreeOverflow(usize, usize),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("metric invalid: {0}")]
    InvalidMetric(String),
    #[error("Cartan class is not constant on the chart: {0}")]
    ClassNotConstant(String),
}

/// A set of independent derivations with structure functions
/// `[e_a, e_b] = Σ_c C^c_ab e_c`.
///
/// Implemented by coordinate frame presentations and by the induced frames
/// of involutive subframes, so forms and connections work on both.
pub trait FrameAlgebra {
    fn dim(&self) -> usize;
    /// `e_a(f)`.
    fn derive(&self, a: usize, f: &ScalarExpr) -> ScalarExpr;
    /// `C^c_ab`.
    fn structure(&self, c: usize, a: usize, b: usize) -> &ScalarExpr;

    /// `X(f)` for a vector field given in frame components.
    fn apply(&self, x: &VectorField, f: &ScalarExpr) -> ScalarExpr {
        if f.is_constant() {
            return ScalarExpr::zero();
        }
        x.components()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(a, c)| c * &self.derive(a, f))
            .sum()
    }
}

/// A chart with an explicit frame of vector fields.
#[derive(Debug, Clone)]
pub struct FramePresentation {
    coordinates: Coordinates,
    /// Column a holds the coordinate components of e_a.
    frame: Matrix,
    coframe: Matrix,
    base_point: Vec<Rational>,
    structure: Vec<ScalarExpr>,
}

impl FramePresentation {
    /// Build from parsed frame entries; certifies invertibility at the base
    /// point and the Jacobi identity of the derived brackets.
    pub fn new(coordinates: Coordinates, frame: Matrix, base_point: Vec<Rational>) -> Result<Self, FrameError> {
        let n = coordinates.len();
        if !frame.is_square() || frame.rows() != n {
            return Err(FrameError::Shape(format!(
                "frame must be {n}x{n}, got {}x{}",
                frame.rows(),
                frame.cols()
            )));
        }
        if base_point.len() != n {
            return Err(FrameError::Shape(format!("base point has {} entries, expected {n}", base_point.len())));
        }
        let det = frame.determinant();
        if det.is_zero() {
            return Err(FrameError::SingularFrame("determinant vanishes identically".into()));
        }
        match det.eval(&base_point) {
            Ok(v) if !num_traits::Zero::is_zero(&v) => {}
            _ => return Err(FrameError::SingularFrame("determinant vanishes at the base point".into())),
        }
        let coframe = frame.inverse().expect("nonzero determinant");
        let mut fp = FramePresentation {
            coordinates,
            frame,
            coframe,
            base_point,
            structure: vec![ScalarExpr::zero(); n * n * n],
        };
        fp.compute_structure();
        fp.check_jacobi()?;
        Ok(fp)
    }

    /// Parse a frame matrix given as expression text.
    pub fn parse(
        coordinates: Coordinates,
        frame: &[Vec<String>],
        base_point: &BTreeMap<String, Rational>,
    ) -> Result<Self, FrameError> {
        let rows = frame
            .iter()
            .map(|row| row.iter().map(|t| coordinates.parse(t)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        let n = coordinates.len();
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(FrameError::Shape(format!("frame must be {n}x{n}")));
        }
        let bp = coordinates.point(base_point)?;
        FramePresentation::new(coordinates, Matrix::from_rows(rows), bp)
    }

    /// The coordinate frame ∂/∂x^i at the origin.
    pub fn coordinate_frame(coordinates: Coordinates) -> Self {
        let n = coordinates.len();
        FramePresentation::new(coordinates, Matrix::identity(n), vec![Rational::from_integer(0.into()); n])
            .expect("identity frame")
    }

    fn compute_structure(&mut self) {
        let n = self.dim();
        for a in 0..n {
            for b in a + 1..n {
                // coordinate components of [e_a, e_b]
                let coord: Vec<ScalarExpr> = (0..n)
                    .map(|i| {
                        let ea = self.coordinate_derivative(a, self.frame.get(i, b));
                        let eb = self.coordinate_derivative(b, self.frame.get(i, a));
                        &ea - &eb
                    })
                    .collect();
                let frame_comps = self.coframe.mul_vec(&coord);
                for (c, v) in frame_comps.into_iter().enumerate() {
                    self.structure[(c * n + b) * n + a] = -&v;
                    self.structure[(c * n + a) * n + b] = v;
                }
            }
        }
    }

    fn coordinate_derivative(&self, a: usize, f: &ScalarExpr) -> ScalarExpr {
        if f.is_constant() {
            return ScalarExpr::zero();
        }
        (0..self.dim())
            .filter(|&i| !self.frame.get(i, a).is_zero())
            .map(|i| self.frame.get(i, a) * &f.diff(i))
            .sum()
    }

    fn check_jacobi(&self) -> Result<(), FrameError> {
        let n = self.dim();
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    for f in 0..n {
                        let mut total = ScalarExpr::zero();
                        for (x, y, z) in [(a, b, c), (b, c, a), (c, a, b)] {
                            for d in 0..n {
                                total = &total + &(self.structure(d, x, y) * self.structure(f, d, z));
                            }
                            total = &total - &self.derive(z, self.structure(f, x, y));
                        }
                        if !total.is_zero() {
                            return Err(FrameError::Jacobi(a, b, c));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn coordinates(&self) -> &Coordinates {
        &self.coordinates
    }

    pub fn frame_matrix(&self) -> &Matrix {
        &self.frame
    }

    pub fn coframe_matrix(&self) -> &Matrix {
        &self.coframe
    }

    pub fn base_point(&self) -> &[Rational] {
        &self.base_point
    }

    /// Frame components of a vector field given in coordinate components.
    pub fn from_coordinate_vector(&self, v: &[ScalarExpr]) -> VectorField {
        VectorField::new(self.coframe.mul_vec(v))
    }

    pub fn to_coordinate_vector(&self, v: &VectorField) -> Vec<ScalarExpr> {
        self.frame.mul_vec(v.components())
    }

    /// Frame components of the 1-form Σ c_i dx^i.
    pub fn from_coordinate_covector(&self, c: &[ScalarExpr]) -> PForm {
        let comps = self.frame.transpose().mul_vec(c);
        PForm::one_form(comps)
    }

    pub fn to_coordinate_covector(&self, alpha: &PForm) -> Vec<ScalarExpr> {
        self.coframe.transpose().mul_vec(&alpha.one_form_components())
    }

    /// The frame field e_a.
    pub fn basis(&self, a: usize) -> VectorField {
        VectorField::basis(self.dim(), a)
    }

    /// Frame with every field multiplied through a constant change of basis.
    pub fn with_frame_change(&self, change: &Matrix) -> Result<FramePresentation, FrameError> {
        FramePresentation::new(self.coordinates.clone(), self.frame.mul(change), self.base_point.clone())
    }
}

impl FrameAlgebra for FramePresentation {
    fn dim(&self) -> usize {
        self.coordinates.len()
    }

    fn derive(&self, a: usize, f: &ScalarExpr) -> ScalarExpr {
        self.coordinate_derivative(a, f)
    }

    fn structure(&self, c: usize, a: usize, b: usize) -> &ScalarExpr {
        let n = self.dim();
        &self.structure[(c * n + a) * n + b]
    }
}
