use super::{two_form_matrix, ContactError, MetricContactPair};
use crate::frame::{exterior_derivative, wedge, VectorField};
use crate::report::{frame_label, residual_check, Check};
use crate::scalar::ScalarExpr;

use super::structure::matrix_entries;

/// Hermitian data of `(J, g)`: the fundamental form `Φ = dα₁ + dα₂ − 2α₁∧α₂`,
/// `α₂∘J = α₁`, `J`-invariance of `dα_i`, `π_i J = J π_i`, the classical
/// identity `4g((∇_XJ)Y,W) = 6dΦ(X,JY,JW) − 6dΦ(X,Y,W)`, the closed form of
/// `F(X,Y) = (∇_XJ)Y`, and `dΦ ≢ 0`.
pub fn hermitian_data(m: &MetricContactPair) -> Result<Vec<Check>, ContactError> {
    let frame = m.frame().as_ref();
    let coords = frame.coordinates();
    let n = m.dim();
    let pair = m.pair();
    let g = m.metric();
    let j = m.structure().j();
    let jm = j.matrix();
    let mut checks = Vec::new();

    let a1j = j.pullback(pair.alpha(1));
    checks.push(residual_check(
        "hermitian.alpha_j",
        coords,
        "α₂∘J − α₁",
        a1j.one_form_components()
            .into_iter()
            .zip(pair.alpha_components(0))
            .enumerate()
            .map(|(b, (l, r))| (format!("at {}", frame_label(b)), &l - &r)),
    ));
    let d = [two_form_matrix(pair.dalpha(0)), two_form_matrix(pair.dalpha(1))];
    checks.push(residual_check(
        "hermitian.dalpha_j_invariant",
        coords,
        "dα_i(JX,JY) − dα_i(X,Y)",
        (0..2).flat_map(|i| {
            let diff = jm.transpose().mul(&d[i]).mul(jm).sub(&d[i]);
            matrix_entries(&diff).map(|(l, v)| (format!("dα{} {l}", i + 1), v)).collect::<Vec<_>>()
        }),
    ));
    let proj = m.projections();
    checks.push(residual_check(
        "hermitian.projection_commute",
        coords,
        "π_i J − J π_i",
        (0..2).flat_map(|i| {
            let diff = proj.pi(i).compose(j).sub(&j.compose(proj.pi(i)));
            matrix_entries(diff.matrix()).map(|(l, v)| (format!("π{} {l}", i + 1), v)).collect::<Vec<_>>()
        }),
    ));

    let a12 = wedge(pair.alpha(0), pair.alpha(1))?;
    let fundamental = pair.dalpha(0).add(pair.dalpha(1)).sub(&a12.scale(&ScalarExpr::int(2)));
    let dphi_form = exterior_derivative(frame, &fundamental)?;
    // t[(x,y,w)] = dΦ(e_x, e_y, e_w)
    let sixth = ScalarExpr::ratio(1, 6);
    let idx = |x: usize, y: usize, w: usize| (x * n + y) * n + w;
    let mut t = vec![ScalarExpr::zero(); n * n * n];
    for x in 0..n {
        for y in 0..n {
            for w in 0..n {
                t[idx(x, y, w)] = &dphi_form.signed_coefficient(&[x, y, w]) * &sixth;
            }
        }
    }
    // tj[(x,y,w)] = dΦ(e_x, J e_y, J e_w)
    let mut tj = vec![ScalarExpr::zero(); n * n * n];
    for x in 0..n {
        for y in 0..n {
            for w in 0..n {
                let mut s = ScalarExpr::zero();
                for p in 0..n {
                    let jy = jm.get(p, y);
                    if jy.is_zero() {
                        continue;
                    }
                    for q in 0..n {
                        let jw = jm.get(q, w);
                        if jw.is_zero() || t[idx(x, p, q)].is_zero() {
                            continue;
                        }
                        s = &s + &(&(jy * jw) * &t[idx(x, p, q)]);
                    }
                }
                tj[idx(x, y, w)] = s;
            }
        }
    }
    let conn = m.connection();
    let basis: Vec<VectorField> = (0..n).map(|a| m.basis(a)).collect();
    let nabla_j: Vec<_> = basis.iter().map(|x| conn.nabla_endo(frame, x, j)).collect::<Result<_, _>>()?;
    let lowered: Vec<_> = nabla_j.iter().map(|e| g.gram().mul(e.matrix())).collect();
    let (four, six) = (ScalarExpr::int(4), ScalarExpr::int(6));
    checks.push(residual_check(
        "hermitian.classical_identity",
        coords,
        "4g((∇_XJ)Y,W) − 6dΦ(X,JY,JW) + 6dΦ(X,Y,W)",
        (0..n).flat_map(|x| (0..n).flat_map(move |y| (0..n).map(move |w| (x, y, w)))).map(|(x, y, w)| {
            let lhs = &four * lowered[x].get(w, y);
            let rhs = &six * &(&tj[idx(x, y, w)] - &t[idx(x, y, w)]);
            (format!("(X,Y,W) = ({}, {}, {})", frame_label(x), frame_label(y), frame_label(w)), &lhs - &rhs)
        }),
    ));

    let z = [pair.reeb(0), pair.reeb(1)];
    checks.push(residual_check(
        "hermitian.f_closed_form",
        coords,
        "(∇_XJ)Y − F(X,Y)",
        (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).flat_map(|(x, y)| {
            let (ex, ey) = (&basis[x], &basis[y]);
            let jy = j.apply(ey);
            let jx = j.apply(ex);
            let dxy = [d[0].get(x, y).clone(), d[1].get(x, y).clone()];
            let dxjy: Vec<ScalarExpr> = (0..2)
                .map(|i| d[i].mul_vec(jy.components())[x].clone())
                .collect();
            let (a1y, a2y) = (m.alpha_at(0, ey), m.alpha_at(1, ey));
            let mut f = z[0].scale(&(&(-&dxy[1]) - &dxjy[0]));
            f = &f + &z[1].scale(&(&dxy[0] - &dxjy[1]));
            f = &f + &proj.pi(0).apply(&jx).scale(&a2y);
            f = &f - &proj.pi(1).apply(&jx).scale(&a1y);
            f = &f - &proj.pi(0).apply(ex).scale(&a1y);
            f = &f - &proj.pi(1).apply(ex).scale(&a2y);
            let v = &nabla_j[x].apply(ey) - &f;
            v.into_components()
                .into_iter()
                .enumerate()
                .map(move |(c, e)| (format!("(X,Y) = ({}, {}) at {}", frame_label(x), frame_label(y), frame_label(c)), e))
        }),
    ));
    checks.push(match dphi_form.witness() {
        Some((k, c)) => Check::pass(
            "hermitian.non_kahler",
            format!("dΦ ≢ 0: coefficient {} on {:?}", coords.print(c), k.iter().map(|&a| frame_label(a)).collect::<Vec<_>>()),
        ),
        None => Check::warn("hermitian.non_kahler", "dΦ ≡ 0: the Hermitian structure is Kähler"),
    });
    Ok(checks)
}
