//! Involutive subframes as local submanifolds: invariance profiles,
//! tangential splitting, second fundamental form, mean curvature, induced
//! structures and the minimality theorems.

mod profile;
mod restrict;
mod shape;
mod theorems;

use std::sync::Arc;

pub use profile::{classify, InvarianceProfile, Parity, ReebPosition};
pub use restrict::{restrict_structure, InducedReport};
pub use shape::{angle_constancy, mean_curvature, second_fundamental_form, shape_data, tangential_split, ShapeData};
pub use theorems::{mean_curvature_formula_residual, verify_theorems, MEAN_CURVATURE_TOLERANCE};

use crate::contact::ContactError;
use crate::frame::{bracket, FrameAlgebra, FrameError, FramePresentation, MetricField, VectorField};
use crate::linalg::{express_in_span, Matrix};
use crate::scalar::ScalarExpr;

#[derive(Debug, Clone, thiserror::Error)]
pub enum SubmanifoldError {
    #[error(transparent)]
    Frame(#[from] FrameError),
    #[error(transparent)]
    Contact(#[from] ContactError),
    #[error("spanning fields are dependent at the base point (rank {rank} < {count})")]
    DependentSpan { rank: usize, count: usize },
    #[error("not involutive: [f{a}, f{b}] leaves the span")]
    NonInvolutive { a: usize, b: usize },
    #[error("field is not tangent to the subframe")]
    NotTangent,
    #[error("precondition violated: {0}")]
    Precondition(String),
}

/// An involutive distribution spanned by explicit fields of the ambient frame.
#[derive(Debug, Clone)]
pub struct Subframe {
    ambient: Arc<FramePresentation>,
    span: Vec<VectorField>,
    /// `[f_a, f_b] = Σ_c c^c_ab f_c`, index `(c*r + a)*r + b`.
    structure: Vec<ScalarExpr>,
}

impl Subframe {
    /// Certify independence at the base point and involutivity by exact
    /// membership of every bracket.
    pub fn new(ambient: Arc<FramePresentation>, span: Vec<VectorField>) -> Result<Self, SubmanifoldError> {
        let n = ambient.dim();
        let r = span.len();
        if let Some(v) = span.iter().find(|v| v.dim() != n) {
            return Err(FrameError::DimensionMismatch(v.dim(), n).into());
        }
        let cols: Vec<Vec<ScalarExpr>> = span.iter().map(|v| v.components().to_vec()).collect();
        let m = Matrix::from_columns(&cols, n);
        let rank = m.rank_at(ambient.base_point()).unwrap_or(0);
        if r == 0 || rank < r {
            return Err(SubmanifoldError::DependentSpan { rank, count: r });
        }
        let mut structure = vec![ScalarExpr::zero(); r * r * r];
        for a in 0..r {
            for b in a + 1..r {
                let br = bracket(ambient.as_ref(), &span[a], &span[b])?;
                let coeffs = express_in_span(&cols, br.components()).ok_or(SubmanifoldError::NonInvolutive { a: a + 1, b: b + 1 })?;
                for (c, v) in coeffs.into_iter().enumerate() {
                    structure[(c * r + b) * r + a] = -&v;
                    structure[(c * r + a) * r + b] = v;
                }
            }
        }
        Ok(Subframe { ambient, span, structure })
    }

    pub fn ambient(&self) -> &Arc<FramePresentation> {
        &self.ambient
    }

    pub fn span(&self) -> &[VectorField] {
        &self.span
    }

    pub fn rank(&self) -> usize {
        self.span.len()
    }

    fn columns(&self) -> Vec<Vec<ScalarExpr>> {
        self.span.iter().map(|v| v.components().to_vec()).collect()
    }

    /// Coefficients of `v` in the spanning fields, if tangent.
    pub fn coefficients(&self, v: &VectorField) -> Option<Vec<ScalarExpr>> {
        express_in_span(&self.columns(), v.components())
    }

    pub fn contains(&self, v: &VectorField) -> bool {
        self.coefficients(v).is_some()
    }

    /// Ambient field with the given span coefficients.
    pub fn combine(&self, coeffs: &[ScalarExpr]) -> VectorField {
        let n = self.ambient.dim();
        let mut out = VectorField::zero(n);
        for (c, f) in coeffs.iter().zip(&self.span) {
            if !c.is_zero() {
                out = &out + &f.scale(c);
            }
        }
        out
    }

    /// Induced Gram matrix `G̃_ab = g(f_a, f_b)`.
    pub fn gram(&self, g: &MetricField) -> Matrix {
        let r = self.rank();
        Matrix::from_fn(r, r, |a, b| g.inner(&self.span[a], &self.span[b]))
    }

    /// Induced metric on the subframe, validated like any metric.
    pub fn induced_metric(&self, g: &MetricField) -> Result<MetricField, FrameError> {
        MetricField::new(self.gram(g), self.ambient.base_point())
    }
}

impl FrameAlgebra for Subframe {
    fn dim(&self) -> usize {
        self.span.len()
    }

    fn derive(&self, a: usize, f: &ScalarExpr) -> ScalarExpr {
        self.ambient.apply(&self.span[a], f)
    }

    fn structure(&self, c: usize, a: usize, b: usize) -> &ScalarExpr {
        let r = self.span.len();
        &self.structure[(c * r + a) * r + b]
    }
}

/// Subframe bound to a metric contact pair, with the Gram inverse computed once.
pub(crate) struct Embedded<'a> {
    pub sub: &'a Subframe,
    pub mcp: &'a crate::contact::MetricContactPair,
    pub gram_inv: Matrix,
}

impl<'a> Embedded<'a> {
    pub fn new(sub: &'a Subframe, mcp: &'a crate::contact::MetricContactPair) -> Result<Self, SubmanifoldError> {
        if !Arc::ptr_eq(sub.ambient(), mcp.frame()) && sub.ambient().frame_matrix() != mcp.frame().frame_matrix() {
            return Err(SubmanifoldError::Precondition("subframe and structure live on different frames".into()));
        }
        let gram_inv = sub
            .gram(mcp.metric())
            .inverse()
            .ok_or_else(|| SubmanifoldError::Precondition("induced Gram matrix is singular".into()))?;
        Ok(Embedded { sub, mcp, gram_inv })
    }

    /// `vᵀ = Σ_ab G̃^{ab} g(v, f_a) f_b`.
    pub fn tangential(&self, v: &VectorField) -> VectorField {
        let g = self.mcp.metric();
        let dots: Vec<ScalarExpr> = self.sub.span.iter().map(|f| g.inner(v, f)).collect();
        let coeffs = self.gram_inv.mul_vec(&dots);
        self.sub.combine(&coeffs)
    }

    pub fn normal(&self, v: &VectorField) -> VectorField {
        v - &self.tangential(v)
    }
}

#[cfg(test)]
pub(crate) fn corpus_subframe(name: &str, params: Option<(usize, usize)>, sub: &str) -> (Subframe, crate::contact::MetricContactPair) {
    let s = crate::corpus::corpus_build(name, params).unwrap();
    let probes = crate::probe::ProbeSet::new(s.frame.base_point().to_vec(), 1, 8);
    let mcp = crate::corpus::build_metric_pair(&s, &probes).unwrap();
    (Subframe::new(s.frame.clone(), s.submanifold(sub).unwrap().to_vec()).unwrap(), mcp)
}

#[cfg(test)]
pub(crate) fn test_probes(sub: &Subframe) -> crate::probe::ProbeSet {
    crate::probe::ProbeSet::new(sub.ambient().base_point().to_vec(), 1, 8)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Coordinates;

    #[test]
    fn dependent_span_at_base_point() {
        let c = Coordinates::new(["x", "y"]);
        let f = Arc::new(FramePresentation::coordinate_frame(c.clone()));
        let span = vec![
            VectorField::new(vec![ScalarExpr::one(), ScalarExpr::zero()]),
            VectorField::new(vec![ScalarExpr::zero(), c.parse("x").unwrap()]),
        ];
        assert!(matches!(Subframe::new(f, span), Err(SubmanifoldError::DependentSpan { .. })));
    }

    #[test]
    fn non_involutive_span() {
        let c = Coordinates::new(["x", "y", "z"]);
        let f = Arc::new(FramePresentation::coordinate_frame(c.clone()));
        // ∂x and ∂y + x∂z bracket to ∂z
        let span = vec![
            VectorField::new(vec![ScalarExpr::one(), ScalarExpr::zero(), ScalarExpr::zero()]),
            VectorField::new(vec![ScalarExpr::zero(), ScalarExpr::one(), c.parse("x").unwrap()]),
        ];
        assert!(matches!(Subframe::new(f, span), Err(SubmanifoldError::NonInvolutive { a: 1, b: 2 })));
    }
}
