use std::sync::Arc;

use super::{two_form_matrix, ContactError, ReebSplitting};
use crate::frame::{bracket, cartan_class, exterior_derivative, wedge, wedge_power, FramePresentation, PForm, VectorField};
use crate::linalg::{Matrix, Solution};
use crate::probe::ProbeSet;
use crate::report::{frame_label, residual_check, Check};
use crate::scalar::ScalarExpr;

/// A certified contact pair of type (h, k) with its Reeb fields and splitting.
#[derive(Debug, Clone)]
pub struct ContactPair {
    frame: Arc<FramePresentation>,
    alpha: [PForm; 2],
    dalpha: [PForm; 2],
    h: usize,
    k: usize,
    reeb: [VectorField; 2],
    classes: [usize; 2],
    splitting: ReebSplitting,
    checks: Vec<Check>,
}

impl ContactPair {
    pub fn frame(&self) -> &Arc<FramePresentation> {
        &self.frame
    }

    pub fn dim(&self) -> usize {
        self.alpha[0].dim()
    }

    /// `α_{i+1}` for `i ∈ {0, 1}`.
    pub fn alpha(&self, i: usize) -> &PForm {
        &self.alpha[i]
    }

    pub fn dalpha(&self, i: usize) -> &PForm {
        &self.dalpha[i]
    }

    pub fn reeb(&self, i: usize) -> &VectorField {
        &self.reeb[i]
    }

    pub fn reeb_sum(&self) -> VectorField {
        &self.reeb[0] + &self.reeb[1]
    }

    pub fn pair_type(&self) -> (usize, usize) {
        (self.h, self.k)
    }

    pub fn cartan_classes(&self) -> [usize; 2] {
        self.classes
    }

    pub fn splitting(&self) -> &ReebSplitting {
        &self.splitting
    }

    /// Every condition certified while validating.
    pub fn checks(&self) -> &[Check] {
        &self.checks
    }

    pub fn alpha_components(&self, i: usize) -> Vec<ScalarExpr> {
        self.alpha[i].one_form_components()
    }
}

/// Reeb fields from `α_i(Z_j) = δ_ij`, `i_{Z_j} dα_i = 0`.
pub fn solve_reeb(alpha: [&PForm; 2], dalpha: [&PForm; 2]) -> Result<[VectorField; 2], ContactError> {
    let n = alpha[0].dim();
    let mut rows = Vec::with_capacity(2 * n + 2);
    for a in alpha {
        rows.push(a.one_form_components());
    }
    for d in dalpha {
        let m = two_form_matrix(d);
        rows.extend((0..n).map(|b| m.column(b)));
    }
    let system = Matrix::from_rows(rows);
    let mut out = Vec::with_capacity(2);
    for j in 0..2 {
        let mut rhs = vec![ScalarExpr::zero(); 2 * n + 2];
        rhs[j] = ScalarExpr::one();
        match system.solve(&rhs) {
            Solution::Unique(z) => out.push(VectorField::new(z)),
            Solution::Inconsistent => {
                return Err(ContactError::Invalid(vec![Check::fail(
                    "pair.reeb",
                    format!("Reeb system for Z{} is inconsistent", j + 1),
                )]))
            }
            Solution::Family { nullspace, .. } => {
                return Err(ContactError::Invalid(vec![Check::fail(
                    "pair.reeb",
                    format!("Reeb system for Z{} has a {}-dimensional solution family", j + 1, nullspace.len()),
                )]))
            }
        }
    }
    let z2 = out.pop().expect("two fields");
    let z1 = out.pop().expect("two fields");
    Ok([z1, z2])
}

fn power_or_zero(w: &PForm, p: usize) -> PForm {
    wedge_power(w, p).unwrap_or_else(|_| PForm::zero(w.dim(), w.dim()))
}

/// Certify the contact pair conditions for `(α₁, α₂)` given in frame
/// components; every violated condition is reported with a witness.
pub fn validate_contact_pair(
    frame: Arc<FramePresentation>,
    alpha1: PForm,
    alpha2: PForm,
    h: usize,
    k: usize,
    probes: &ProbeSet,
) -> Result<ContactPair, ContactError> {
    use crate::frame::FrameAlgebra;
    let n = frame.dim();
    let coords = frame.coordinates().clone();
    if alpha1.degree() != 1 || alpha2.degree() != 1 || alpha1.dim() != n || alpha2.dim() != n {
        return Err(ContactError::Invalid(vec![Check::fail("pair.dimension", "α₁, α₂ must be 1-forms on the frame")]));
    }
    if n != 2 * h + 2 * k + 2 {
        let need = 2 * h + 2 * k + 2;
        return Err(ContactError::Invalid(vec![
            Check::fail("pair.dimension", format!("type ({h},{k}) needs dimension {need}, frame has {n}")),
            Check::fail("pair.volume", format!("α₁∧(dα₁)^h∧α₂∧(dα₂)^k has degree {need} ≠ {n}")),
        ]));
    }
    let mut checks = vec![Check::pass("pair.dimension", format!("dimension {n} = 2h+2k+2"))];
    let d1 = exterior_derivative(frame.as_ref(), &alpha1)?;
    let d2 = exterior_derivative(frame.as_ref(), &alpha2)?;

    let left = wedge(&alpha1, &power_or_zero(&d1, h))?;
    let right = wedge(&alpha2, &power_or_zero(&d2, k))?;
    let volume = wedge(&left, &right)?;
    checks.push(if volume.is_zero() {
        Check::fail("pair.volume", "α₁∧(dα₁)^h∧α₂∧(dα₂)^k ≡ 0")
    } else {
        let c = volume.coefficient(&(0..n).collect::<Vec<_>>());
        let bad = volume.vanishing_probes(probes);
        if bad.is_empty() {
            Check::pass("pair.volume", format!("top coefficient {}", coords.print(&c)))
        } else {
            Check::warn("pair.volume", format!("top coefficient {} vanishes at probes {bad:?}", coords.print(&c)))
        }
    });
    for (i, (d, p)) in [(&d1, h), (&d2, k)].into_iter().enumerate() {
        let top = power_or_zero(d, p + 1);
        let id = format!("pair.degeneracy{}", i + 1);
        checks.push(match top.witness() {
            None => Check::pass(id, format!("(dα{})^{} ≡ 0", i + 1, p + 1)),
            Some((idx, c)) => Check::fail(id, format!("(dα{})^{} has coefficient {} on {idx:?}", i + 1, p + 1, coords.print(c))),
        });
    }

    let mut classes = [0usize; 2];
    for (i, (a, expected)) in [(&alpha1, 2 * h + 1), (&alpha2, 2 * k + 1)].into_iter().enumerate() {
        let id = format!("pair.class{}", i + 1);
        match cartan_class(frame.as_ref(), a, probes) {
            Ok(c) => {
                classes[i] = c;
                checks.push(Check::from_bool(id, c == expected, format!("class {c}, expected {expected}")));
            }
            Err(e) => checks.push(Check::fail(id, e.to_string())),
        }
    }

    let failures: Vec<Check> = checks.iter().filter(|c| c.failed()).cloned().collect();
    if !failures.is_empty() {
        return Err(ContactError::Invalid(failures));
    }

    let reeb = solve_reeb([&alpha1, &alpha2], [&d1, &d2])?;
    let n_label = |j: usize| format!("Z{}", j + 1);
    checks.push(residual_check(
        "pair.reeb",
        &coords,
        "α_i(Z_j) − δ_ij, i_{Z_j}dα_i",
        (0..2).flat_map(|i| (0..2).map(move |j| (i, j))).flat_map(|(i, j)| {
            let a = [&alpha1, &alpha2][i];
            let d = [&d1, &d2][i];
            let z = &reeb[j];
            let delta = if i == j { ScalarExpr::one() } else { ScalarExpr::zero() };
            let dot: ScalarExpr = a.one_form_components().iter().zip(z.components()).map(|(x, y)| x * y).sum();
            let m = two_form_matrix(d);
            let contraction = m.transpose().mul_vec(z.components());
            std::iter::once((format!("α{}({})", i + 1, n_label(j)), &dot - &delta)).chain(
                contraction
                    .into_iter()
                    .enumerate()
                    .map(move |(b, v)| (format!("dα{}({}, {})", i + 1, n_label(j), frame_label(b)), v)),
            )
        }),
    ));
    checks.push(residual_check(
        "pair.reeb_commute",
        &coords,
        "[Z1, Z2]",
        bracket(frame.as_ref(), &reeb[0], &reeb[1])?
            .into_components()
            .into_iter()
            .enumerate()
            .map(|(c, v)| (frame_label(c), v)),
    ));

    let splitting = ReebSplitting::new(&frame, [&alpha1, &alpha2], [&d1, &d2], &reeb);
    checks.push(splitting.certify(h, k));
    let failures: Vec<Check> = checks.iter().filter(|c| c.failed()).cloned().collect();
    if !failures.is_empty() {
        return Err(ContactError::Invalid(failures));
    }
    Ok(ContactPair { frame, alpha: [alpha1, alpha2], dalpha: [d1, d2], h, k, reeb, classes, splitting, checks })
}
