use crate::frame::{EndoField, FramePresentation, MetricField, PForm, VectorField};
use crate::linalg::Matrix;
use crate::report::Check;
use crate::scalar::ScalarExpr;

use super::two_form_matrix;

/// Tangent splitting `TM = H₁ ⊕ H₂ ⊕ ℝZ₁ ⊕ ℝZ₂` of a contact pair, where
/// `H_i = ker dα_i ∩ ker α₁ ∩ ker α₂`, `TF₁ = H₁ ⊕ ℝZ₂`, `TF₂ = H₂ ⊕ ℝZ₁`
/// and `TG_i = H_i ⊕ ℝZ₁ ⊕ ℝZ₂`.
///
/// Indices are 0-based: `h(0)` is `H₁`.
#[derive(Debug, Clone)]
pub struct ReebSplitting {
    horizontal: [Vec<VectorField>; 2],
    reeb: [VectorField; 2],
    base_point: Vec<crate::scalar::Rational>,
}

impl ReebSplitting {
    pub fn new(frame: &FramePresentation, alpha: [&PForm; 2], dalpha: [&PForm; 2], reeb: &[VectorField; 2]) -> Self {
        let n = frame.coordinates().len();
        let horizontal = dalpha.map(|d| {
            let m = two_form_matrix(d);
            let mut rows: Vec<Vec<ScalarExpr>> = (0..n).map(|b| m.column(b)).collect();
            rows.push(alpha[0].one_form_components());
            rows.push(alpha[1].one_form_components());
            Matrix::from_rows(rows).nullspace().into_iter().map(VectorField::new).collect()
        });
        ReebSplitting { horizontal, reeb: reeb.clone(), base_point: frame.base_point().to_vec() }
    }

    pub(crate) fn certify(&self, h: usize, k: usize) -> Check {
        let (d1, d2) = (self.horizontal[0].len(), self.horizontal[1].len());
        if d1 != 2 * k || d2 != 2 * h {
            return Check::fail("pair.splitting", format!("dim H1 = {d1} (expected {}), dim H2 = {d2} (expected {})", 2 * k, 2 * h));
        }
        let all: Vec<Vec<ScalarExpr>> = self.basis_all().into_iter().map(VectorField::into_components).collect();
        let n = all.len();
        let rank = Matrix::from_columns(&all, n).rank_at(&self.base_point);
        match rank {
            Ok(r) if r == n => Check::pass("pair.splitting", format!("H1 ⊕ H2 ⊕ V spans at the base point (dims {d1}+{d2}+2)")),
            Ok(r) => Check::fail("pair.splitting", format!("H1 ⊕ H2 ⊕ V has rank {r} < {n} at the base point")),
            Err(e) => Check::fail("pair.splitting", format!("splitting basis undefined at the base point: {e}")),
        }
    }

    fn basis_all(&self) -> Vec<VectorField> {
        let mut v = self.horizontal[0].clone();
        v.extend(self.horizontal[1].iter().cloned());
        v.extend(self.reeb.iter().cloned());
        v
    }

    /// Basis of `H_{i+1}`.
    pub fn h(&self, i: usize) -> &[VectorField] {
        &self.horizontal[i]
    }

    /// Basis of `H₁ ⊕ H₂`.
    pub fn horizontal(&self) -> Vec<VectorField> {
        self.horizontal.iter().flatten().cloned().collect()
    }

    /// Basis of `TF_{i+1} = H_{i+1} ⊕ ℝZ_j`, `j ≠ i`.
    pub fn tf(&self, i: usize) -> Vec<VectorField> {
        let mut v = self.horizontal[i].clone();
        v.push(self.reeb[1 - i].clone());
        v
    }

    /// Basis of `TG_{i+1} = H_{i+1} ⊕ V`.
    pub fn tg(&self, i: usize) -> Vec<VectorField> {
        let mut v = self.horizontal[i].clone();
        v.extend(self.reeb.iter().cloned());
        v
    }

    pub fn projections(&self, g: &MetricField) -> Projections {
        Projections::new(self, g)
    }
}

/// The orthogonal projections used by the characterization formulas.
///
/// `factor(i)` sends X to `X_{i+1}`, its projection on `TF_j` with `j ≠ i`,
/// so `factor(0)` keeps the `α₁` factor `H₂ ⊕ ℝZ₁`. `pi(i)` is `π_{i+1}`,
/// the projection on `H_j` with `j ≠ i`.
#[derive(Debug, Clone)]
pub struct Projections {
    factor: [EndoField; 2],
    pi: [EndoField; 2],
}

impl Projections {
    fn new(s: &ReebSplitting, g: &MetricField) -> Self {
        let factor = [orthogonal_projection(&s.tf(1), g), orthogonal_projection(&s.tf(0), g)];
        let pi = [orthogonal_projection(s.h(1), g), orthogonal_projection(s.h(0), g)];
        Projections { factor, pi }
    }

    pub fn factor(&self, i: usize) -> &EndoField {
        &self.factor[i]
    }

    pub fn pi(&self, i: usize) -> &EndoField {
        &self.pi[i]
    }
}

/// `P = B (BᵀGB)⁻¹ BᵀG` for the span of `basis`.
pub fn orthogonal_projection(basis: &[VectorField], g: &MetricField) -> EndoField {
    let n = g.dim();
    if basis.is_empty() {
        return EndoField::zero(n);
    }
    let cols: Vec<Vec<ScalarExpr>> = basis.iter().map(|v| v.components().to_vec()).collect();
    let b = Matrix::from_columns(&cols, n);
    let bt_g = b.transpose().mul(g.gram());
    let gram = bt_g.mul(&b);
    let inv = gram.inverse().expect("basis is independent");
    EndoField::new(b.mul(&inv).mul(&bt_g))
}
