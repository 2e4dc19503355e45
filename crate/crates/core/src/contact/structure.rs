use super::{ContactError, ContactPair};
use crate::frame::EndoField;
use crate::linalg::{express_in_span, Matrix};
use crate::probe::ProbeSet;
use crate::report::{frame_label, residual_check, Check};

/// A contact pair with `φ`, and the derived `J`, `T`, `ρ`.
#[derive(Debug, Clone)]
pub struct ContactPairStructure {
    pair: ContactPair,
    phi: EndoField,
    j: EndoField,
    t: EndoField,
    rho: EndoField,
    decomposable: Check,
    checks: Vec<Check>,
}

impl ContactPairStructure {
    pub fn pair(&self) -> &ContactPair {
        &self.pair
    }

    pub fn phi(&self) -> &EndoField {
        &self.phi
    }

    /// `J = φ − α₂⊗Z₁ + α₁⊗Z₂`.
    pub fn j(&self) -> &EndoField {
        &self.j
    }

    /// `T = φ + α₂⊗Z₁ − α₁⊗Z₂`.
    pub fn t(&self) -> &EndoField {
        &self.t
    }

    /// `ρ = α₂⊗Z₁ − α₁⊗Z₂`.
    pub fn rho(&self) -> &EndoField {
        &self.rho
    }

    pub fn decomposable(&self) -> &Check {
        &self.decomposable
    }

    pub fn is_decomposable(&self) -> bool {
        self.decomposable.passed()
    }

    pub fn checks(&self) -> &[Check] {
        &self.checks
    }
}

/// Certify the structure axioms for `φ` and build `J`, `T`, `ρ`.
pub fn validate_structure(pair: &ContactPair, phi: EndoField, probes: &ProbeSet) -> Result<ContactPairStructure, ContactError> {
    let n = pair.dim();
    let coords = pair.frame().coordinates().clone();
    if phi.dim() != n {
        return Err(crate::frame::FrameError::DimensionMismatch(phi.dim(), n).into());
    }
    let (a1, a2) = (pair.alpha(0), pair.alpha(1));
    let (z1, z2) = (pair.reeb(0), pair.reeb(1));
    let t1 = EndoField::tensor(a1, z1);
    let t2 = EndoField::tensor(a2, z2);
    let mut checks = Vec::new();

    let expected = EndoField::identity(n).scale(&crate::scalar::ScalarExpr::int(-1)).add(&t1).add(&t2);
    let sq = phi.compose(&phi).sub(&expected);
    checks.push(residual_check(
        "structure.phi_squared",
        &coords,
        "φ² + Id − α₁⊗Z₁ − α₂⊗Z₂",
        matrix_entries(sq.matrix()),
    ));
    checks.push(residual_check(
        "structure.phi_reeb",
        &coords,
        "φZ_i",
        [z1, z2].into_iter().enumerate().flat_map(|(i, z)| {
            phi.apply(z).into_components().into_iter().enumerate().map(move |(c, v)| (format!("φZ{} at {}", i + 1, frame_label(c)), v))
        }),
    ));
    checks.push(residual_check(
        "structure.alpha_phi",
        &coords,
        "α_i∘φ",
        [a1, a2].into_iter().enumerate().flat_map(|(i, a)| {
            phi.pullback(a)
                .one_form_components()
                .into_iter()
                .enumerate()
                .map(move |(b, v)| (format!("α{}(φ{})", i + 1, frame_label(b)), v))
        }),
    ));
    checks.push(rank_check(&phi, n, probes));

    let failures: Vec<Check> = checks.iter().filter(|c| c.failed()).cloned().collect();
    if !failures.is_empty() {
        return Err(ContactError::Invalid(failures));
    }

    let rho = EndoField::tensor(a2, z1).sub(&EndoField::tensor(a1, z2));
    let j = phi.sub(&rho);
    let t = phi.add(&rho);
    let decomposable = decomposable_check(pair, &phi);
    checks.push(decomposable.clone());
    Ok(ContactPairStructure { pair: pair.clone(), phi, j, t, rho, decomposable, checks })
}

pub(crate) fn matrix_entries(m: &Matrix) -> impl Iterator<Item = (String, crate::scalar::ScalarExpr)> + '_ {
    (0..m.rows()).flat_map(move |i| (0..m.cols()).map(move |j| (format!("({},{})", frame_label(i), frame_label(j)), m.get(i, j).clone())))
}

/// Symbolic rank and rank at every probe; a mismatch at a probe is flagged.
fn rank_check(phi: &EndoField, n: usize, probes: &ProbeSet) -> Check {
    let want = n - 2;
    let symbolic = phi.rank();
    if symbolic != want {
        return Check::fail("structure.rank", format!("symbolic rank {symbolic}, expected {want}"));
    }
    let drops: Vec<usize> = probes
        .points()
        .iter()
        .enumerate()
        .filter(|(_, p)| !matches!(phi.rank_at(p), Ok(r) if r == want))
        .map(|(i, _)| i)
        .collect();
    if drops.is_empty() {
        Check::pass("structure.rank", format!("rank {want} symbolically and at {} probes", probes.points().len()))
    } else {
        Check::warn("structure.rank", format!("rank is not constant: differs from {want} at probes {drops:?}"))
    }
}

/// `φ(TF_i) ⊆ TF_i` by exact membership.
fn decomposable_check(pair: &ContactPair, phi: &EndoField) -> Check {
    let s = pair.splitting();
    for i in 0..2 {
        let basis = s.tf(i);
        let cols: Vec<Vec<_>> = basis.iter().map(|v| v.components().to_vec()).collect();
        for (b, v) in basis.iter().enumerate() {
            let image = phi.apply(v);
            if express_in_span(&cols, image.components()).is_none() {
                return Check::fail("structure.decomposable", format!("φ maps TF{} basis vector {} out of TF{}", i + 1, b + 1, i + 1));
            }
        }
    }
    Check::pass("structure.decomposable", "φ(TF_i) ⊆ TF_i for i = 1, 2")
}
