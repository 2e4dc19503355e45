use super::{Embedded, InvarianceProfile, ReebPosition, Subframe, SubmanifoldError};
use crate::contact::MetricContactPair;
use crate::frame::{FrameAlgebra, VectorField};
use crate::scalar::ScalarExpr;

/// Second fundamental form table and mean curvature of a subframe.
#[derive(Debug, Clone)]
pub struct ShapeData {
    /// `b[a][c] = B(f_a, f_c)`.
    pub b: Vec<Vec<VectorField>>,
    pub mean_curvature: VectorField,
    pub minimal: bool,
}

/// `(vᵀ, v^⊥)`.
pub fn tangential_split(
    sub: &Subframe,
    mcp: &MetricContactPair,
    v: &VectorField,
) -> Result<(VectorField, VectorField), SubmanifoldError> {
    let e = Embedded::new(sub, mcp)?;
    let t = e.tangential(v);
    let n = v - &t;
    Ok((t, n))
}

impl Embedded<'_> {
    /// `B(X,Y) = (∇_X Y)^⊥` for tangent `X`, `Y`.
    pub fn second_fundamental_form(&self, x: &VectorField, y: &VectorField) -> Result<VectorField, SubmanifoldError> {
        if !self.sub.contains(x) || !self.sub.contains(y) {
            return Err(SubmanifoldError::NotTangent);
        }
        Ok(self.b_unchecked(x, y))
    }

    pub(crate) fn b_unchecked(&self, x: &VectorField, y: &VectorField) -> VectorField {
        let conn = self.mcp.connection();
        let v = conn.nabla(self.mcp.frame().as_ref(), x, y).expect("dimensions agree");
        self.normal(&v)
    }

    pub fn shape(&self) -> ShapeData {
        let r = self.sub.rank();
        let span = self.sub.span();
        let mut b = vec![vec![VectorField::zero(self.mcp.dim()); r]; r];
        for a in 0..r {
            for c in 0..r {
                b[a][c] = self.b_unchecked(&span[a], &span[c]);
            }
        }
        let mut trace = VectorField::zero(self.mcp.dim());
        for a in 0..r {
            for c in 0..r {
                let w = self.gram_inv.get(a, c);
                if !w.is_zero() {
                    trace = &trace + &b[a][c].scale(w);
                }
            }
        }
        let mean = trace.scale(&ScalarExpr::ratio(1, r as i64));
        let minimal = mean.is_zero();
        ShapeData { b, mean_curvature: mean, minimal }
    }
}

pub fn second_fundamental_form(
    sub: &Subframe,
    mcp: &MetricContactPair,
    x: &VectorField,
    y: &VectorField,
) -> Result<VectorField, SubmanifoldError> {
    Embedded::new(sub, mcp)?.second_fundamental_form(x, y)
}

/// `H = (1/r) Σ_ab G̃^{ab} B(f_a, f_b)`.
pub fn mean_curvature(sub: &Subframe, mcp: &MetricContactPair) -> Result<VectorField, SubmanifoldError> {
    Ok(Embedded::new(sub, mcp)?.shape().mean_curvature)
}

pub fn shape_data(sub: &Subframe, mcp: &MetricContactPair) -> Result<ShapeData, SubmanifoldError> {
    Ok(Embedded::new(sub, mcp)?.shape())
}

/// `Z₁ᵀ(‖Z₁ᵀ‖²) ≡ 0`, the squared form of constancy of the angle between
/// `Z₁ᵀ` and `Z₁` along the integral curves of `Z₁ᵀ`.
pub fn angle_constancy(
    sub: &Subframe,
    mcp: &MetricContactPair,
    profile: &InvarianceProfile,
) -> Result<bool, SubmanifoldError> {
    if !profile.phi_invariant || profile.position != ReebPosition::NowhereTangentNowhereOrthogonal {
        return Err(SubmanifoldError::Precondition(format!(
            "angle constancy needs a φ-invariant, nowhere tangent, nowhere orthogonal subframe (profile: φ-invariant {}, {})",
            profile.phi_invariant,
            profile.position.as_str()
        )));
    }
    let e = Embedded::new(sub, mcp)?;
    Ok(angle_derivative(&e).is_zero())
}

pub(crate) fn angle_derivative(e: &Embedded<'_>) -> ScalarExpr {
    let z1t = e.tangential(e.mcp.pair().reeb(0));
    let norm = e.mcp.metric().norm_sq(&z1t);
    e.mcp.frame().apply(&z1t, &norm)
}
