use super::{InvarianceProfile, ReebPosition, Subframe, SubmanifoldError};
use crate::contact::{two_form_matrix, MetricContactPair};
use crate::frame::{cartan_class, exterior_derivative, wedge, wedge_power, Connection, EndoField, PForm, VectorField};
use crate::linalg::Matrix;
use crate::probe::ProbeSet;
use crate::report::{residual_check, Check};
use crate::scalar::ScalarExpr;

/// Structure induced on a subframe by a metric contact pair.
///
/// Check ids are local (`induced_contact_pair`, `induced_contact_metric`,
/// `sasakian`); callers prefix them.
#[derive(Debug, Clone)]
pub struct InducedReport {
    /// `α̃_i(f_a) = α_i(f_a)`.
    pub alpha: [PForm; 2],
    /// Cartan classes, or the reason none is defined on the chart.
    pub classes: [Result<usize, String>; 2],
    /// `G̃`.
    pub metric: Matrix,
    /// `φ̃` in span coefficients, when the span is φ-invariant.
    pub phi: Option<EndoField>,
    pub contact_pair: bool,
    pub checks: Vec<Check>,
}

impl InducedReport {
    pub fn class_text(&self) -> String {
        class_text(&self.classes)
    }
}

fn class_text(classes: &[Result<usize, String>; 2]) -> String {
    let t = |c: &Result<usize, String>| match c {
        Ok(v) => v.to_string(),
        Err(e) => format!("undefined ({e})"),
    };
    format!("classes ({}, {})", t(&classes[0]), t(&classes[1]))
}

fn induced_phi(sub: &Subframe, mcp: &MetricContactPair) -> Option<EndoField> {
    let r = sub.rank();
    let cols: Option<Vec<Vec<ScalarExpr>>> = sub.span().iter().map(|f| sub.coefficients(&mcp.phi().apply(f))).collect();
    cols.map(|c| EndoField::new(Matrix::from_columns(&c, r)))
}

/// `α̃₁∧(dα̃₁)^h ∧ α̃₂∧(dα̃₂)^k` for the classes found, if it is a top form.
fn pair_volume(sub: &Subframe, alpha: &[PForm; 2], classes: [usize; 2]) -> Option<PForm> {
    let mut vol = PForm::scalar(sub.rank(), ScalarExpr::one());
    for i in 0..2 {
        let d = exterior_derivative(sub, &alpha[i]).ok()?;
        let part = wedge(&alpha[i], &wedge_power(&d, (classes[i] - 1) / 2).ok()?).ok()?;
        vol = wedge(&vol, &part).ok()?;
    }
    Some(vol)
}

/// Restrict `α_i`, `g`, `φ` to the span and certify what the position allows.
///
/// `ambient_normal` gates the Sasakian identity.
pub fn restrict_structure(
    sub: &Subframe,
    mcp: &MetricContactPair,
    profile: &InvarianceProfile,
    ambient_normal: bool,
    probes: &ProbeSet,
) -> Result<InducedReport, SubmanifoldError> {
    let r = sub.rank();
    let alpha: [PForm; 2] = [0, 1].map(|i| PForm::one_form(sub.span().iter().map(|f| mcp.alpha_at(i, f)).collect()));
    let classes = [0, 1].map(|i| cartan_class(sub, &alpha[i], probes).map_err(|e| e.to_string()));
    let metric = sub.gram(mcp.metric());
    let phi = if profile.phi_invariant { induced_phi(sub, mcp) } else { None };
    let mut checks = Vec::new();

    let contact_pair = match (&classes[0], &classes[1]) {
        (Ok(c1), Ok(c2)) if c1 % 2 == 1 && c2 % 2 == 1 && c1 + c2 == r => {
            pair_volume(sub, &alpha, [*c1, *c2]).is_some_and(|v| !v.is_zero())
        }
        _ => false,
    };
    let class_text = class_text(&classes);
    if profile.position == ReebPosition::TangentBoth {
        checks.push(Check::from_bool(
            "induced_contact_pair",
            contact_pair,
            if contact_pair {
                format!("induced forms have {class_text} on dimension {r}: a contact pair")
            } else {
                format!("induced forms have {class_text} on dimension {r}: not a contact pair")
            },
        ));
    } else {
        checks.push(Check::skipped(
            "induced_contact_pair",
            format!("only posed for subframes tangent to both Reeb fields; {class_text}"),
        ));
    }

    let semi = profile.position.semi_invariant_index();
    match (semi, &phi) {
        (Some(i), Some(phi_t)) => {
            let (metric_check, sasakian) = contact_metric_checks(sub, mcp, i, &alpha[i], &classes[i], phi_t, &metric, ambient_normal)?;
            checks.push(metric_check);
            checks.push(sasakian);
        }
        _ => {
            let why = format!("needs a φ-invariant subframe tangent to one Reeb field and orthogonal to the other ({})", profile.summary());
            checks.push(Check::skipped("induced_contact_metric", why.clone()));
            checks.push(Check::skipped("sasakian", why));
        }
    }
    Ok(InducedReport { alpha, classes, metric, phi, contact_pair, checks })
}

#[allow(clippy::too_many_arguments)]
fn contact_metric_checks(
    sub: &Subframe,
    mcp: &MetricContactPair,
    i: usize,
    alpha: &PForm,
    class: &Result<usize, String>,
    phi: &EndoField,
    gram: &Matrix,
    ambient_normal: bool,
) -> Result<(Check, Check), SubmanifoldError> {
    let r = sub.rank();
    let coords = mcp.frame().coordinates();
    let zi = mcp.pair().reeb(i);
    let xi = VectorField::new(sub.coefficients(zi).ok_or(SubmanifoldError::NotTangent)?);
    let a = alpha.one_form_components();
    let da = exterior_derivative(sub, alpha)?;
    let dm = two_form_matrix(&da);

    let class_ok = matches!(class, Ok(c) if *c == r);
    let mut residuals: Vec<(String, ScalarExpr)> = Vec::new();
    let axi: ScalarExpr = a.iter().zip(xi.components()).map(|(p, q)| p * q).sum();
    residuals.push(("α̃(ξ) − 1".into(), &axi - &ScalarExpr::one()));
    for (b, v) in dm.transpose().mul_vec(xi.components()).into_iter().enumerate() {
        residuals.push((format!("dα̃(ξ, f{})", b + 1), v));
    }
    let outer = Matrix::from_fn(r, r, |p, q| xi.component(p) * &a[q]);
    let sq = phi.matrix().mul(phi.matrix()).add(&Matrix::identity(r)).sub(&outer);
    for p in 0..r {
        for q in 0..r {
            residuals.push((format!("(φ̃² + I − α̃⊗ξ)[{},{}]", p + 1, q + 1), sq.get(p, q).clone()));
        }
    }
    let assoc = gram.mul(phi.matrix()).sub(&dm);
    for p in 0..r {
        for q in 0..r {
            residuals.push((format!("g̃(f{}, φ̃f{}) − dα̃", p + 1, q + 1), assoc.get(p, q).clone()));
        }
    }
    for (b, v) in gram.mul_vec(xi.components()).into_iter().enumerate() {
        residuals.push((format!("g̃(ξ, f{}) − α̃", b + 1), &v - &a[b]));
    }
    let mut metric_check = residual_check("induced_contact_metric", coords, "induced contact metric identities", residuals);
    if !class_ok {
        metric_check = Check::fail(
            "induced_contact_metric",
            format!("induced α̃{} has class {:?}, not the dimension {r}", i + 1, class),
        );
    }

    let sasakian = if !ambient_normal {
        Check::skipped("sasakian", "ambient structure is not normal")
    } else if !metric_check.passed() {
        Check::skipped("sasakian", "induced contact metric structure not certified")
    } else {
        let g_t = sub.induced_metric(mcp.metric())?;
        let conn = Connection::levi_civita(sub, &g_t)?;
        let mut res = Vec::new();
        for p in 0..r {
            let ep = VectorField::basis(r, p);
            let dphi = conn.nabla_endo(sub, &ep, phi)?;
            for q in 0..r {
                let eq = VectorField::basis(r, q);
                let lhs = dphi.apply(&eq);
                let rhs = &xi.scale(gram.get(p, q)) - &ep.scale(&a[q]);
                for (c, v) in (&lhs - &rhs).into_components().into_iter().enumerate() {
                    res.push((format!("(∇̃_f{} φ̃)f{} at f{}", p + 1, q + 1, c + 1), v));
                }
            }
        }
        residual_check("sasakian", coords, "(∇̃_X φ̃)Y − g̃(X,Y)ξ + α̃(Y)X", res)
    };
    Ok((metric_check, sasakian))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::submanifold::{classify, corpus_subframe, test_probes};

    fn report(sub: &str) -> InducedReport {
        let (s, m) = corpus_subframe("heis6", None, sub);
        let probes = test_probes(&s);
        let p = classify(&s, &m, &probes).unwrap();
        restrict_structure(&s, &m, &p, true, &probes).unwrap()
    }

    #[test]
    fn n4_induces_class_three_forms() {
        let r = report("heis6-n4");
        assert_eq!(r.classes, [Ok(3), Ok(3)]);
        assert!(!r.contact_pair);
        let c = r.checks.iter().find(|c| c.id == "induced_contact_pair").unwrap();
        assert!(c.failed());
    }

    #[test]
    fn factor_induces_a_sasakian_structure() {
        let r = report("heis6-factor");
        assert!(r.phi.is_some());
        for id in ["induced_contact_metric", "sasakian"] {
            let c = r.checks.iter().find(|c| c.id == id).unwrap();
            assert!(c.passed(), "{id}: {}", c.witness);
        }
    }
}
