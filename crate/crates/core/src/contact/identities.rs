use super::{two_form_matrix, ContactError, MetricContactPair};
use crate::frame::{lie_derivative_endo, FrameAlgebra, EndoField, VectorField};
use crate::linalg::Matrix;
use crate::report::{frame_label, residual_check, Check};
use crate::scalar::ScalarExpr;

fn vector_residuals(label: String, v: VectorField) -> impl Iterator<Item = (String, ScalarExpr)> {
    v.into_components().into_iter().enumerate().map(move |(c, x)| (format!("{label} at {}", frame_label(c)), x))
}

/// `(∇_{e_a} φ)` for every frame field.
fn nabla_phi(m: &MetricContactPair, phi: &EndoField) -> Result<Vec<EndoField>, ContactError> {
    let frame = m.frame().as_ref();
    let conn = m.connection();
    (0..m.dim()).map(|a| Ok(conn.nabla_endo(frame, &m.basis(a), phi)?)).collect()
}

/// Connection-level identities of a metric contact pair: the covariant
/// derivative of `φ`, `∇Z = −φ`, the projection formula characterizing
/// normality, the `h`-tensor identities, `h ≡ 0` and the Killing property.
pub fn check_connection_identities(m: &MetricContactPair) -> Result<Vec<Check>, ContactError> {
    let frame = m.frame().as_ref();
    let coords = frame.coordinates();
    let n = m.dim();
    let g = m.metric();
    let conn = m.connection();
    let pair = m.pair();
    let phi = m.phi();
    let z = pair.reeb_sum();
    let basis: Vec<VectorField> = (0..n).map(|a| m.basis(a)).collect();
    let mut checks = Vec::new();

    checks.push(residual_check(
        "connection.torsion_free",
        coords,
        "∇_X Y − ∇_Y X − [X,Y]",
        (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).flat_map(|(a, b)| {
            let t = conn.torsion(frame, &basis[a], &basis[b]).expect("dimensions agree");
            vector_residuals(format!("T({}, {})", frame_label(a), frame_label(b)), t)
        }),
    ));
    checks.push(residual_check(
        "connection.metric_compatible",
        coords,
        "X g(Y,W) − g(∇_X Y, W) − g(Y, ∇_X W)",
        (0..n).flat_map(|a| (0..n).flat_map(move |b| (b..n).map(move |c| (a, b, c)))).map(|(a, b, c)| {
            let lhs = frame.apply(&basis[a], g.gram().get(b, c));
            let r1 = g.inner(&conn.nabla(frame, &basis[a], &basis[b]).expect("dims"), &basis[c]);
            let r2 = g.inner(&basis[b], &conn.nabla(frame, &basis[a], &basis[c]).expect("dims"));
            (format!("({}, {}, {})", frame_label(a), frame_label(b), frame_label(c)), &(&lhs - &r1) - &r2)
        }),
    ));

    let dphi = nabla_phi(m, phi)?;
    let alpha = [pair.alpha_components(0), pair.alpha_components(1)];
    // p[i][b][a] = dα_i(φe_b, e_a)
    let p: Vec<Matrix> = (0..2).map(|i| phi.matrix().transpose().mul(&two_form_matrix(pair.dalpha(i)))).collect();
    let lowered: Vec<Matrix> = dphi.iter().map(|d| g.gram().mul(d.matrix())).collect();
    checks.push(residual_check(
        "connection.phi_derivative",
        coords,
        "g((∇_Xφ)Y, W) − Σ_i [dα_i(φY,X)α_i(W) − dα_i(φW,X)α_i(Y)]",
        (0..n).flat_map(|a| (0..n).flat_map(move |b| (0..n).map(move |w| (a, b, w)))).map(|(a, b, w)| {
            let lhs = lowered[a].get(w, b).clone();
            let mut rhs = ScalarExpr::zero();
            for i in 0..2 {
                rhs = &rhs + &(&(p[i].get(b, a) * &alpha[i][w]) - &(p[i].get(w, a) * &alpha[i][b]));
            }
            (format!("(X,Y,W) = ({}, {}, {})", frame_label(a), frame_label(b), frame_label(w)), &lhs - &rhs)
        }),
    ));

    let nabla_z: Vec<VectorField> = basis.iter().map(|x| conn.nabla(frame, x, &z)).collect::<Result<_, _>>()?;
    checks.push(residual_check(
        "connection.reeb_derivative",
        coords,
        "∇_X Z + φX",
        (0..n).flat_map(|a| vector_residuals(format!("X = {}", frame_label(a)), &nabla_z[a] + &phi.apply(&basis[a]))),
    ));

    let proj = m.projections();
    checks.push(residual_check(
        "connection.characterization",
        coords,
        "(∇_Xφ)Y − Σ_i [g(X_i,Y_i)Z_i − α_i(Y_i)X_i]",
        (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).flat_map(|(a, b)| {
            let mut v = dphi[a].apply(&basis[b]);
            for i in 0..2 {
                let xi = proj.factor(i).apply(&basis[a]);
                let yi = proj.factor(i).apply(&basis[b]);
                v = &v - &pair.reeb(i).scale(&g.inner(&xi, &yi));
                v = &v + &xi.scale(&m.alpha_at(i, &yi));
            }
            vector_residuals(format!("(X,Y) = ({}, {})", frame_label(a), frame_label(b)), v)
        }),
    ));

    let h = lie_derivative_endo(frame, &z, phi)?.scale(&ScalarExpr::ratio(1, 2));
    let phi2 = phi.compose(phi);
    let h2 = h.compose(&h);
    let half = ScalarExpr::ratio(1, 2);
    checks.push(residual_check(
        "connection.reeb_curvature_h",
        coords,
        "½(R_{ZX}Z − φR_{ZφX}Z) − φ²X − h²X",
        (0..n).flat_map(|a| {
            let x = &basis[a];
            let r1 = conn.curvature(frame, &z, x, &z).expect("dims");
            let r2 = conn.curvature(frame, &z, &phi.apply(x), &z).expect("dims");
            let lhs = (&r1 - &phi.apply(&r2)).scale(&half);
            let v = &(&lhs - &phi2.apply(x)) - &h2.apply(x);
            vector_residuals(format!("X = {}", frame_label(a)), v)
        }),
    ));
    let phih = phi.compose(&h);
    checks.push(residual_check(
        "connection.reeb_derivative_h",
        coords,
        "∇_X Z + φX + φhX",
        (0..n).flat_map(|a| {
            let v = &(&nabla_z[a] + &phi.apply(&basis[a])) + &phih.apply(&basis[a]);
            vector_residuals(format!("X = {}", frame_label(a)), v)
        }),
    ));
    checks.push(residual_check(
        "connection.h_vanishes",
        coords,
        "h = ½ L_Z φ",
        super::structure::matrix_entries(h.matrix()),
    ));
    checks.push(match conn.killing_defect(frame, g, &z)? {
        None => Check::pass("connection.killing", "g(∇_X Z, Y) + g(X, ∇_Y Z) ≡ 0 on frame pairs"),
        Some(((a, b), v)) => Check::fail(
            "connection.killing",
            format!("g(∇_{} Z, {}) + g({}, ∇_{} Z) = {}", frame_label(a), frame_label(b), frame_label(a), frame_label(b), coords.print(&v)),
        ),
    });
    Ok(checks)
}

/// `R_{XY}Z = Σ_i [α_i(Y_i)X_i − α_i(X_i)Y_i]` on all frame pairs, with
/// `R_{ZY}Z = −Y` on horizontal `Y` and the first Bianchi identity.
pub fn check_curvature_identity(m: &MetricContactPair) -> Result<Vec<Check>, ContactError> {
    let frame = m.frame().as_ref();
    let coords = frame.coordinates();
    let n = m.dim();
    let conn = m.connection();
    let pair = m.pair();
    let z = pair.reeb_sum();
    let basis: Vec<VectorField> = (0..n).map(|a| m.basis(a)).collect();
    let proj = m.projections();
    let mut checks = Vec::new();
    checks.push(residual_check(
        "curvature.characterization",
        coords,
        "R_{XY}Z − Σ_i [α_i(Y_i)X_i − α_i(X_i)Y_i]",
        (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).flat_map(|(a, b)| {
            let mut v = conn.curvature(frame, &basis[a], &basis[b], &z).expect("dims");
            for i in 0..2 {
                let xi = proj.factor(i).apply(&basis[a]);
                let yi = proj.factor(i).apply(&basis[b]);
                v = &v - &xi.scale(&m.alpha_at(i, &yi));
                v = &v + &yi.scale(&m.alpha_at(i, &xi));
            }
            vector_residuals(format!("(X,Y) = ({}, {})", frame_label(a), frame_label(b)), v)
        }),
    ));
    let horizontal = pair.splitting().horizontal();
    checks.push(residual_check(
        "curvature.reeb_horizontal",
        coords,
        "R_{ZY}Z + Y",
        horizontal.iter().enumerate().flat_map(|(j, y)| {
            let v = &conn.curvature(frame, &z, y, &z).expect("dims") + y;
            vector_residuals(format!("Y = horizontal[{}]", j + 1), v)
        }),
    ));
    checks.push(residual_check(
        "curvature.bianchi",
        coords,
        "R_{XY}W + R_{YW}X + R_{WX}Y",
        (0..n)
            .flat_map(|a| (a + 1..n).flat_map(move |b| (b + 1..n).map(move |c| (a, b, c))))
            .flat_map(|(a, b, c)| {
                let (x, y, w) = (&basis[a], &basis[b], &basis[c]);
                let v = &(&conn.curvature(frame, x, y, w).expect("dims") + &conn.curvature(frame, y, w, x).expect("dims"))
                    + &conn.curvature(frame, w, x, y).expect("dims");
                vector_residuals(format!("({}, {}, {})", frame_label(a), frame_label(b), frame_label(c)), v)
            }),
    ));
    Ok(checks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contact::corpus_pair;

    #[test]
    fn normal_corpus_pairs_satisfy_every_identity() {
        for (name, params) in [("heis6", None), ("darboux", Some((1, 1)))] {
            let m = corpus_pair(name, params);
            let checks = [check_connection_identities(&m).unwrap(), check_curvature_identity(&m).unwrap()].concat();
            assert!(checks.len() >= 11);
            for c in checks {
                assert!(c.passed(), "{name} {}: {}", c.id, c.witness);
            }
        }
    }

    #[test]
    fn reeb_sum_is_killing_with_derivative_minus_phi() {
        let m = corpus_pair("darboux", Some((1, 0)));
        let frame = m.frame().as_ref();
        let z = m.pair().reeb_sum();
        for a in 0..m.dim() {
            let x = m.basis(a);
            let d = m.connection().nabla(frame, &x, &z).unwrap();
            let sum: Vec<ScalarExpr> = d.components().iter().zip(m.phi().apply(&x).components()).map(|(p, q)| p + q).collect();
            assert!(sum.iter().all(ScalarExpr::is_zero), "e{a}");
        }
    }
}
