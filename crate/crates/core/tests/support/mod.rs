//! Invariant bodies shared by the proptest suites and the acceptance runner.
//! Each returns `Err` with a description of the first violation.

#![allow(dead_code)]

use std::sync::OnceLock;

use contact_pair_lab::contact::{solve_reeb, MetricContactPair};
use contact_pair_lab::corpus::{build_metric_pair, corpus_build, heis6_file, Scenario};
use contact_pair_lab::frame::{bracket, exterior_derivative, EndoField, FrameAlgebra, PForm, VectorField};
use contact_pair_lab::probe::ProbeSet;
use contact_pair_lab::scalar::{Coordinates, Rational, ScalarExpr};
use contact_pair_lab::submanifold::{classify, mean_curvature, second_fundamental_form, ReebPosition, Subframe};

pub type Terms = Vec<(i64, usize, u32)>;

/// `Σ c · x_v^p`.
pub fn build(terms: &[(i64, usize, u32)]) -> ScalarExpr {
    terms.iter().map(|&(c, v, p)| &ScalarExpr::int(c) * &ScalarExpr::var(v).pow(p)).sum()
}

/// `num / (1 + den²)`, defined everywhere.
pub fn rational_fn(num: &[(i64, usize, u32)], den: &[(i64, usize, u32)]) -> ScalarExpr {
    &build(num) / &(&ScalarExpr::one() + &build(den).pow(2))
}

/// Terms restricted to the first `n` coordinates.
pub fn build_in(terms: &[(i64, usize, u32)], n: usize) -> ScalarExpr {
    build(&terms.iter().map(|&(c, v, p)| (c, v % n, p)).collect::<Vec<_>>())
}

pub fn vector_in(terms: &[Terms], n: usize) -> VectorField {
    VectorField::new((0..n).map(|a| build_in(&terms[a % terms.len()], n)).collect())
}

fn ensure(ok: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

// ---- scalar field ----

pub fn congruence(a: &ScalarExpr, b: &ScalarExpr, op: usize) -> Result<(), String> {
    let c = Coordinates::new(["x", "y", "z"]);
    let (ta, tb) = (c.print(a), c.print(b));
    let direct = match op % 4 {
        0 => a + b,
        1 => a - b,
        2 => a * b,
        _ => match a.try_div(b) {
            Ok(v) => v,
            Err(_) => return Ok(()),
        },
    };
    let sym = ["+", "-", "*", "/"][op % 4];
    let reparsed = c.parse(&format!("({ta}) {sym} ({tb})")).map_err(|e| e.to_string())?;
    ensure(reparsed == direct, || format!("({ta}) {sym} ({tb}) is not canonical"))?;
    ensure(c.parse(&ta).map_err(|e| e.to_string())? == *a, || format!("{ta} does not reparse"))
}

pub fn field_axioms(a: &ScalarExpr, b: &ScalarExpr, c: &ScalarExpr) -> Result<(), String> {
    ensure(&(a + b) + c == a + &(b + c), || "associativity of +".into())?;
    ensure(&(a * b) * c == a * &(b * c), || "associativity of *".into())?;
    ensure(a * &(b + c) == &(a * b) + &(a * c), || "distributivity".into())?;
    ensure(a + b == b + a && a * b == b * a, || "commutativity".into())?;
    ensure((a - a).is_zero(), || "a − a".into())?;
    ensure(a.is_zero() || (a / a).is_one(), || "a / a".into())
}

pub fn evaluation_homomorphism(a: &ScalarExpr, b: &ScalarExpr, p: &[Rational]) -> Result<(), String> {
    let (va, vb) = (a.eval(p).map_err(|e| e.to_string())?, b.eval(p).map_err(|e| e.to_string())?);
    let at = |e: ScalarExpr| e.eval(p).map_err(|e| e.to_string());
    ensure(at(a + b)? == &va + &vb, || "evaluation of +".into())?;
    ensure(at(a - b)? == &va - &vb, || "evaluation of −".into())?;
    ensure(at(a * b)? == &va * &vb, || "evaluation of *".into())?;
    if let (Ok(q), false) = (a.try_div(b), num_traits::Zero::is_zero(&vb)) {
        ensure(at(q)? == &va / &vb, || "evaluation of /".into())?;
    }
    Ok(())
}

pub fn leibniz_schwarz(a: &ScalarExpr, b: &ScalarExpr, i: usize, j: usize) -> Result<(), String> {
    ensure((a * b).diff(i) == &(&a.diff(i) * b) + &(a * &b.diff(i)), || format!("Leibniz in x{i}"))?;
    ensure(a.diff(i).diff(j) == a.diff(j).diff(i), || format!("Schwarz in x{i}, x{j}"))
}

// ---- corpus fixtures ----

/// heis6 with the {X1, X2} block of φ replaced by `[[-z1, z1^2+1], [-1, z1]]`
/// and of g by `½[[1, -z1], [-z1, 1+z1^2]]`: associated but not normal.
pub fn sheared() -> Scenario {
    let mut f = heis6_file(&["heis6-factor"]);
    let s = |t: &str| t.to_string();
    f.phi[0][0] = s("-z1");
    f.phi[0][1] = s("z1^2 + 1");
    f.phi[1][0] = s("-1");
    f.phi[1][1] = s("z1");
    f.metric[0][0] = s("1/2");
    f.metric[0][1] = s("-z1/2");
    f.metric[1][0] = s("-z1/2");
    f.metric[1][1] = s("(1 + z1^2)/2");
    Scenario::from_file(f, "heis6-sheared").unwrap()
}

pub struct Fixture {
    pub scenario: Scenario,
    pub mcp: MetricContactPair,
}

impl Fixture {
    pub fn new(name: &str, params: Option<(usize, usize)>) -> Self {
        let scenario = corpus_build(name, params).unwrap();
        let probes = ProbeSet::new(scenario.frame.base_point().to_vec(), 1, 4);
        let mcp = build_metric_pair(&scenario, &probes).unwrap();
        Fixture { scenario, mcp }
    }

    pub fn dim(&self) -> usize {
        self.mcp.dim()
    }

    pub fn subframe(&self, name: &str) -> Subframe {
        Subframe::new(self.scenario.frame.clone(), self.scenario.submanifold(name).unwrap().to_vec()).unwrap()
    }

    pub fn subframes(&self) -> Vec<(String, Subframe)> {
        self.scenario.submanifolds.iter().map(|(n, s)| (n.clone(), Subframe::new(self.scenario.frame.clone(), s.clone()).unwrap())).collect()
    }
}

/// heis6, darboux(1,1), darboux(1,0), darboux-J-noninvariant.
pub fn fixtures() -> &'static [Fixture] {
    static F: OnceLock<Vec<Fixture>> = OnceLock::new();
    F.get_or_init(|| {
        vec![
            Fixture::new("heis6", None),
            Fixture::new("darboux", Some((1, 1))),
            Fixture::new("darboux", Some((1, 0))),
            Fixture::new("darboux-J-noninvariant", None),
        ]
    })
}

/// Subframes with their fixture, across the corpus fixtures.
pub fn subframe_cases() -> Vec<(&'static Fixture, Subframe)> {
    fixtures().iter().flat_map(|fx| fx.subframes().into_iter().map(move |(_, s)| (fx, s))).collect()
}

fn eval1(a: &PForm, x: &VectorField) -> Result<ScalarExpr, String> {
    a.eval(std::slice::from_ref(x)).map_err(|e| e.to_string())
}

// ---- frame calculus ----

pub fn d_squared(fx: &Fixture, f: &ScalarExpr, a: &VectorField) -> Result<(), String> {
    let frame = fx.scenario.frame.as_ref();
    let n = frame.dim();
    for w in [PForm::scalar(n, f.clone()), PForm::one_form(a.components().to_vec())] {
        let dw = exterior_derivative(frame, &w).map_err(|e| e.to_string())?;
        let ddw = exterior_derivative(frame, &dw).map_err(|e| e.to_string())?;
        ensure(ddw.is_zero(), || format!("d² ≠ 0 on a {}-form", w.degree()))?;
    }
    Ok(())
}

pub fn half_convention(fx: &Fixture, a: &VectorField, x: &VectorField, y: &VectorField) -> Result<(), String> {
    let frame = fx.scenario.frame.as_ref();
    let alpha = PForm::one_form(a.components().to_vec());
    let d = exterior_derivative(frame, &alpha).map_err(|e| e.to_string())?;
    let lhs = d.eval(&[x.clone(), y.clone()]).map_err(|e| e.to_string())?;
    let xy = bracket(frame, x, y).map_err(|e| e.to_string())?;
    let rhs = &(&frame.apply(x, &eval1(&alpha, y)?) - &frame.apply(y, &eval1(&alpha, x)?)) - &eval1(&alpha, &xy)?;
    ensure(lhs == &rhs * &ScalarExpr::ratio(1, 2), || "dα(X,Y) ≠ ½(Xα(Y) − Yα(X) − α([X,Y]))".into())
}

pub fn association(fx: &Fixture, x: &VectorField, y: &VectorField) -> Result<(), String> {
    let m = &fx.mcp;
    let sum = m.pair().dalpha(0).add(m.pair().dalpha(1));
    let rhs = sum.eval(&[x.clone(), y.clone()]).map_err(|e| e.to_string())?;
    ensure(m.metric().inner(x, &m.phi().apply(y)) == rhs, || "g(X,φY) ≠ (dα₁+dα₂)(X,Y)".into())
}

pub fn torsion_free(fx: &Fixture, x: &VectorField, y: &VectorField) -> Result<(), String> {
    let t = fx.mcp.connection().torsion(fx.mcp.frame().as_ref(), x, y).map_err(|e| e.to_string())?;
    ensure(t.is_zero(), || "torsion ≠ 0".into())
}

pub fn curvature_tensorial(fx: &Fixture, f: &ScalarExpr, x: &VectorField, y: &VectorField, w: &VectorField) -> Result<(), String> {
    let m = &fx.mcp;
    let frame = m.frame().as_ref();
    let conn = m.connection();
    let r = |a: &VectorField, b: &VectorField, c: &VectorField| conn.curvature(frame, a, b, c).map_err(|e| e.to_string());
    let base = r(x, y, w)?.scale(f);
    ensure(r(&x.scale(f), y, w)? == base, || "R_{fX,Y}W ≠ f R_{X,Y}W".into())?;
    ensure(r(x, y, &w.scale(f))? == base, || "R_{X,Y}(fW) ≠ f R_{X,Y}W".into())
}

pub fn bianchi(fx: &Fixture, x: &VectorField, y: &VectorField, w: &VectorField) -> Result<(), String> {
    let m = &fx.mcp;
    let frame = m.frame().as_ref();
    let conn = m.connection();
    let r = |a: &VectorField, b: &VectorField, c: &VectorField| conn.curvature(frame, a, b, c).map_err(|e| e.to_string());
    let s = &(&r(x, y, w)? + &r(y, w, x)?) + &r(w, x, y)?;
    ensure(s.is_zero(), || "R_{XY}W + R_{YW}X + R_{WX}Y ≠ 0".into())
}

// ---- contact pair structures ----

pub fn reeb_uniqueness(fx: &Fixture) -> Result<(), String> {
    let p = fx.mcp.pair();
    let z = solve_reeb([p.alpha(0), p.alpha(1)], [p.dalpha(0), p.dalpha(1)]).map_err(|e| e.to_string())?;
    ensure(&z[0] == p.reeb(0) && &z[1] == p.reeb(1), || "Reeb solution differs".into())?;
    ensure(solve_reeb([p.alpha(0), p.alpha(0)], [p.dalpha(0), p.dalpha(0)]).is_err(), || "degenerate system solved".into())
}

pub fn complex_structures(fx: &Fixture) -> Result<(), String> {
    let s = fx.mcp.structure();
    let id = EndoField::identity(fx.dim());
    let half = ScalarExpr::ratio(1, 2);
    ensure(s.j().compose(s.j()).add(&id).is_zero(), || "J² ≠ −Id".into())?;
    ensure(s.t().compose(s.t()).add(&id).is_zero(), || "T² ≠ −Id".into())?;
    ensure(s.rho().sub(&s.t().sub(s.j()).scale(&half)).is_zero(), || "ρ ≠ ½(T − J)".into())?;
    ensure(s.phi().sub(&s.j().add(s.t()).scale(&half)).is_zero(), || "φ ≠ ½(J + T)".into())
}

pub fn reeb_metric(fx: &Fixture) -> Result<(), String> {
    let m = &fx.mcp;
    let p = m.pair();
    for i in 0..2 {
        for j in 0..2 {
            let want = if i == j { ScalarExpr::one() } else { ScalarExpr::zero() };
            ensure(m.metric().inner(p.reeb(i), p.reeb(j)) == want, || format!("g(Z{}, Z{}) ≠ δ", i + 1, j + 1))?;
        }
    }
    let sum = p.dalpha(0).add(p.dalpha(1));
    let i = contact_pair_lab::frame::interior(&sum, p.reeb(0)).map_err(|e| e.to_string())?;
    ensure(i.is_zero(), || "i_{Z₁}(dα₁ + dα₂) ≠ 0".into())
}

// ---- subframes ----

pub fn b_properties(fx: &Fixture, sub: &Subframe, u: &ScalarExpr, a: usize, b: usize) -> Result<(), String> {
    let m = &fx.mcp;
    let r = sub.rank();
    let (x, y) = (&sub.span()[a % r], &sub.span()[b % r]);
    let sff = |p: &VectorField, q: &VectorField| second_fundamental_form(sub, m, p, q).map_err(|e| e.to_string());
    let bxy = sff(x, y)?;
    ensure(bxy == sff(y, x)?, || "B(X,Y) ≠ B(Y,X)".into())?;
    for f in sub.span() {
        ensure(m.metric().inner(&bxy, f).is_zero(), || "g(B(X,Y), f) ≠ 0".into())?;
    }
    ensure(sff(&x.scale(u), y)? == bxy.scale(u), || "B(uX,Y) ≠ uB(X,Y)".into())
}

/// `coeffs` fill a unit lower-triangular recombination; `scale` multiplies the
/// first field by `1 + scale²`.
pub fn h_recombination(fx: &Fixture, sub: &Subframe, coeffs: &[ScalarExpr], scale: &ScalarExpr) -> Result<(), String> {
    let r = sub.rank();
    let mut span: Vec<VectorField> = sub.span().to_vec();
    let mut it = coeffs.iter().cycle();
    for i in 1..r {
        for j in 0..i {
            span[i] = &span[i] + &sub.span()[j].scale(it.next().unwrap());
        }
    }
    span[0] = span[0].scale(&(&ScalarExpr::one() + &scale.pow(2)));
    let other = Subframe::new(sub.ambient().clone(), span).map_err(|e| e.to_string())?;
    let h = |s: &Subframe| mean_curvature(s, &fx.mcp).map_err(|e| e.to_string());
    ensure(h(&other)? == h(sub)?, || "H changes under recombination".into())
}

/// φ-invariance kills the vertical parts, positions force parity, and
/// tangent-both subframes have matching φ/J/T flags.
pub fn profile_constraints() -> Result<(), String> {
    let mut phi_seen = 0;
    let mut both_seen = 0;
    for (fx, sub) in subframe_cases() {
        let probes = ProbeSet::new(fx.scenario.frame.base_point().to_vec(), 1, 4);
        let p = classify(&sub, &fx.mcp, &probes).map_err(|e| e.to_string())?;
        if p.phi_invariant {
            phi_seen += 1;
            for i in 0..2 {
                ensure(fx.mcp.phi().apply(&p.reeb_tangential[i]).is_zero(), || "φZᵀ ≠ 0".into())?;
                ensure(fx.mcp.phi().apply(&p.reeb_normal[i]).is_zero(), || "φZ^⊥ ≠ 0".into())?;
            }
            if p.position != ReebPosition::Mixed && p.position != ReebPosition::NowhereTangentNowhereOrthogonal {
                ensure(p.parity_consistent() == Some(true), || format!("parity of dim {}", p.dim))?;
            }
        }
        if p.position == ReebPosition::TangentBoth {
            both_seen += 1;
            ensure(p.phi_invariant == p.j_invariant && p.j_invariant == p.t_invariant, || "φ/J/T flags disagree".into())?;
        }
    }
    ensure(phi_seen >= 6 && both_seen >= 2, || format!("too few cases: {phi_seen} φ-invariant, {both_seen} tangent-both"))
}

/// Leaves of the characteristic foliations are minimal.
pub fn characteristic_leaves_minimal() -> Result<(), String> {
    for (h, k) in [(1, 0), (0, 1), (1, 1), (2, 1)] {
        let fx = Fixture::new("darboux", Some((h, k)));
        for (name, sub) in fx.subframes() {
            let hv = mean_curvature(&sub, &fx.mcp).map_err(|e| e.to_string())?;
            ensure(hv.is_zero(), || format!("darboux({h},{k}) {name} not minimal"))?;
        }
    }
    Ok(())
}
