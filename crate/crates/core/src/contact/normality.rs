use super::{two_form_matrix, ContactError, ContactPairStructure};
use crate::frame::{EndoField, VectorField};
use crate::report::{frame_label, residual_check, Check};
use crate::scalar::ScalarExpr;

/// Vanishing of `N¹`, `N_J`, `N_T` on all frame pairs.
#[derive(Debug, Clone)]
pub struct NormalityReport {
    pub n1: Check,
    pub nj: Check,
    pub nt: Check,
    /// `N¹ ≡ 0` exactly when `N_J ≡ 0` and `N_T ≡ 0`.
    pub equivalence: Check,
}

impl NormalityReport {
    pub fn is_normal(&self) -> bool {
        self.n1.passed()
    }

    pub fn checks(&self) -> Vec<Check> {
        vec![self.n1.clone(), self.nj.clone(), self.nt.clone(), self.equivalence.clone()]
    }
}

/// `N¹(X,Y) = [φ,φ](X,Y) + 2dα₁(X,Y)Z₁ + 2dα₂(X,Y)Z₂`, together with the
/// Nijenhuis tensors of `J` and `T`.
pub fn normality(s: &ContactPairStructure) -> Result<NormalityReport, ContactError> {
    let pair = s.pair();
    let frame = pair.frame().as_ref();
    let coords = frame.coordinates();
    let n = pair.dim();
    let d = [two_form_matrix(pair.dalpha(0)), two_form_matrix(pair.dalpha(1))];
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    let two = ScalarExpr::int(2);

    let mut n1_vals = Vec::new();
    for &(a, b) in &pairs {
        let (x, y) = (VectorField::basis(n, a), VectorField::basis(n, b));
        let mut v = s.phi().nijenhuis(frame, &x, &y)?;
        for i in 0..2 {
            let c = &two * d[i].get(a, b);
            if !c.is_zero() {
                v = &v + &pair.reeb(i).scale(&c);
            }
        }
        n1_vals.push(((a, b), v));
    }
    let n1 = residual_check("normality.N1", coords, "N¹", flatten("N¹", n1_vals));
    let nj = nijenhuis_check("normality.NJ", "N_J", s.j(), s, &pairs)?;
    let nt = nijenhuis_check("normality.NT", "N_T", s.t(), s, &pairs)?;
    let equivalence = Check::from_bool(
        "normality.equivalence",
        n1.passed() == (nj.passed() && nt.passed()),
        format!("N¹ ≡ 0: {}, N_J ≡ 0: {}, N_T ≡ 0: {}", n1.passed(), nj.passed(), nt.passed()),
    );
    Ok(NormalityReport { n1, nj, nt, equivalence })
}

fn nijenhuis_check(
    id: &str,
    what: &str,
    e: &EndoField,
    s: &ContactPairStructure,
    pairs: &[(usize, usize)],
) -> Result<Check, ContactError> {
    let frame = s.pair().frame().as_ref();
    let n = s.pair().dim();
    let mut vals = Vec::with_capacity(pairs.len());
    for &(a, b) in pairs {
        vals.push(((a, b), e.nijenhuis(frame, &VectorField::basis(n, a), &VectorField::basis(n, b))?));
    }
    Ok(residual_check(id, frame.coordinates(), what, flatten(what, vals)))
}

fn flatten(what: &str, vals: Vec<((usize, usize), VectorField)>) -> impl Iterator<Item = (String, ScalarExpr)> + '_ {
    vals.into_iter().flat_map(move |((a, b), v)| {
        v.into_components()
            .into_iter()
            .enumerate()
            .map(move |(c, x)| (format!("{what}({}, {}) at {}", frame_label(a), frame_label(b), frame_label(c)), x))
    })
}
