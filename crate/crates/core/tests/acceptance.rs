//! Acceptance runner: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

mod support;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::{Command, ExitCode};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use contact_pair_lab::corpus::{build_metric_pair, corpus_build, numeric_oracle, run_checks, CheckReport, RunOptions, Scenario, Selection};
use contact_pair_lab::probe::{ProbeSet, DEFAULT_SEED};
use contact_pair_lab::report::Verdict;
use contact_pair_lab::scalar::{rat, ScalarExpr};
use contact_pair_lab::submanifold::{
    angle_constancy, classify, mean_curvature_formula_residual, restrict_structure, shape_data, InvarianceProfile, ReebPosition, Subframe,
};
use support::*;

type Outcome = Result<(), String>;

fn check(ok: bool, what: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

fn report(s: &Scenario) -> CheckReport {
    run_checks(s, &Selection::all(), RunOptions::default())
}

fn expect(r: &CheckReport, id: &str, want: Verdict) -> Outcome {
    let e = r.get(id).ok_or_else(|| format!("{}: {id} missing", r.scenario))?;
    check(e.verdict == want, || format!("{}: {id} is {}: {}", r.scenario, e.verdict.as_str(), e.witness))
}

/// The coefficient after the last ` = ` in a witness.
fn nonzero_witness(r: &CheckReport, id: &str) -> Outcome {
    let w = &r.get(id).ok_or_else(|| format!("{id} missing"))?.witness;
    let coeff = w.rsplit(" = ").next().unwrap_or("").trim();
    check(w.contains(" = ") && coeff != "0" && !coeff.is_empty(), || format!("{id}: no nonzero witness in `{w}`"))
}

struct Sub {
    scenario: Scenario,
    sub: Subframe,
    mcp: contact_pair_lab::contact::MetricContactPair,
    probes: ProbeSet,
    profile: InvarianceProfile,
}

fn sub(scenario: &str, name: &str) -> Result<Sub, String> {
    let scenario = corpus_build(scenario, None).map_err(|e| e.to_string())?;
    let probes = ProbeSet::new(scenario.frame.base_point().to_vec(), DEFAULT_SEED, 16);
    let mcp = build_metric_pair(&scenario, &probes)?;
    let span = scenario.submanifold(name).ok_or_else(|| format!("no subframe {name}"))?.to_vec();
    let sub = Subframe::new(scenario.frame.clone(), span).map_err(|e| e.to_string())?;
    let profile = classify(&sub, &mcp, &probes).map_err(|e| e.to_string())?;
    Ok(Sub { scenario, sub, mcp, probes, profile })
}

fn minimal(s: &Sub) -> Result<bool, String> {
    Ok(shape_data(&s.sub, &s.mcp).map_err(|e| e.to_string())?.minimal)
}

fn c1() -> Outcome {
    for (h, k) in [(1, 0), (0, 1), (1, 1), (2, 1)] {
        let s = corpus_build("darboux", Some((h, k))).map_err(|e| e.to_string())?;
        let r = report(&s);
        for e in r.checks.iter().filter(|e| e.id.starts_with("pair.")) {
            check(e.verdict == Verdict::Pass, || format!("{}: {} is {}: {}", r.scenario, e.id, e.verdict.as_str(), e.witness))?;
        }
        for id in ["metric.associated", "structure.decomposable", "normality.N1", "normality.NJ", "normality.NT"] {
            expect(&r, id, Verdict::Pass)?;
        }
        let probes = ProbeSet::new(s.frame.base_point().to_vec(), DEFAULT_SEED, 8);
        let classes = build_metric_pair(&s, &probes)?.pair().cartan_classes();
        check(classes == [2 * h + 1, 2 * k + 1], || format!("{}: classes {classes:?}", r.scenario))?;
    }
    Ok(())
}

fn c2() -> Outcome {
    let s = corpus_build("heis6", None).map_err(|e| e.to_string())?;
    let r = report(&s);
    check(r.passed(), || "heis6 does not pass overall".into())?;
    for id in [
        "connection.phi_derivative",
        "connection.reeb_derivative",
        "connection.characterization",
        "connection.reeb_curvature_h",
        "connection.reeb_derivative_h",
        "connection.h_vanishes",
        "connection.killing",
        "curvature.characterization",
        "curvature.reeb_horizontal",
        "curvature.bianchi",
    ] {
        expect(&r, id, Verdict::Pass)?;
    }
    let res = numeric_oracle(&s, "nabla_z", 16, DEFAULT_SEED).map_err(|e| e.to_string())?;
    check(res < 1e-6, || format!("oracle ∇Z residual {res:e}"))
}

fn c3() -> Outcome {
    let r = report(&sheared());
    expect(&r, "metric.associated", Verdict::Pass)?;
    for id in ["normality.N1", "connection.characterization", "curvature.characterization"] {
        expect(&r, id, Verdict::Fail)?;
        nonzero_witness(&r, id)?;
    }
    Ok(())
}

fn c4() -> Outcome {
    let s = sub("heis6", "heis6-factor")?;
    let p = &s.profile;
    check(p.position == ReebPosition::TangentZ1OrthogonalZ2, || format!("position {}", p.position.as_str()))?;
    check(p.phi_invariant && p.dim % 2 == 1, || p.summary())?;
    check(minimal(&s)?, || "H ≢ 0".into())?;
    expect(&report(&s.scenario), "submanifold.heis6-factor.sasakian", Verdict::Pass)
}

fn c5() -> Outcome {
    let s = sub("heis6", "heis6-leaf3")?;
    let p = &s.profile;
    check(p.position == ReebPosition::NowhereTangentNowhereOrthogonal, || format!("position {}", p.position.as_str()))?;
    check(p.tangential_norm_sq[0] == ScalarExpr::ratio(1, 2), || "‖Z₁ᵀ‖² ≠ ½".into())?;
    check(angle_constancy(&s.sub, &s.mcp, p).map_err(|e| e.to_string())?, || "angle not constant".into())?;
    check(minimal(&s)?, || "H ≢ 0".into())
}

fn c6() -> Outcome {
    let s = sub("heis6", "heis6-n4")?;
    let p = &s.profile;
    check(p.position == ReebPosition::TangentBoth, || format!("position {}", p.position.as_str()))?;
    check(p.phi_invariant && p.j_invariant && p.t_invariant && p.dim % 2 == 0, || p.summary())?;
    check(minimal(&s)?, || "H ≢ 0".into())?;
    let ind = restrict_structure(&s.sub, &s.mcp, p, true, &s.probes).map_err(|e| e.to_string())?;
    check(ind.classes == [Ok(3), Ok(3)], || ind.class_text())?;
    check(!ind.contact_pair, || "induced forms form a contact pair".into())
}

fn c7() -> Outcome {
    let s = sub("darboux-J-noninvariant", "example-j")?;
    let p = &s.profile;
    check(p.j_invariant && !p.phi_invariant, || p.summary())?;
    let x = s.scenario.coordinates().names().iter().position(|n| n == "x1").ok_or("no coordinate x1")?;
    let mut seen = 0;
    for pt in s.probes.random_points().iter().filter(|pt| pt[x] != rat(0, 1)) {
        seen += 1;
        let normal = |i: usize| -> Result<bool, String> {
            for c in p.reeb_normal[i].components() {
                if c.eval(pt).map_err(|e| e.to_string())? != rat(0, 1) {
                    return Ok(true);
                }
            }
            Ok(false)
        };
        check(normal(0)? || normal(1)?, || format!("Reeb distribution tangent at {pt:?}"))?;
    }
    check(seen >= 8, || format!("only {seen} probes with x1 ≠ 0"))?;
    check(!minimal(&s)?, || "H ≡ 0".into())?;
    let res = numeric_oracle(&s.scenario, "mean_curvature:example-j", 16, DEFAULT_SEED).map_err(|e| e.to_string())?;
    check(res > 1e-3, || format!("oracle |H| = {res:e}"))
}

fn c8() -> Outcome {
    for (scenario, name) in [("heis6", "heis6-n4"), ("darboux-J-noninvariant", "example-j")] {
        let s = sub(scenario, name)?;
        expect(&report(&s.scenario), &format!("submanifold.{name}.hermitian_second_fundamental_form"), Verdict::Pass)?;
        let (res, used) = mean_curvature_formula_residual(&s.sub, &s.mcp, &s.probes).map_err(|e| e.to_string())?;
        check(res < 1e-9 && used >= 8, || format!("{name}: residual {res:e} over {used} probes"))?;
    }
    Ok(())
}

fn terms(rng: &mut ChaCha8Rng, max: usize) -> Terms {
    (0..rng.gen_range(1..=max)).map(|_| (rng.gen_range(-3..=3), rng.gen_range(0..6), rng.gen_range(0..=2))).collect()
}

fn in3(t: Terms) -> Terms {
    t.into_iter().map(|(c, v, p)| (c, v % 3, p)).collect()
}

fn c9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    for _ in 0..24 {
        let q = |rng: &mut ChaCha8Rng| rational_fn(&in3(terms(rng, 2)), &in3(terms(rng, 1)));
        let (a, b, c) = (q(&mut rng), q(&mut rng), q(&mut rng));
        let p: Vec<_> = (0..3).map(|_| rat(rng.gen_range(-8..=8), rng.gen_range(1..=16))).collect();
        congruence(&a, &b, rng.gen_range(0..4))?;
        field_axioms(&a, &b, &c)?;
        evaluation_homomorphism(&a, &b, &p)?;
        leibniz_schwarz(&a, &b, rng.gen_range(0..3), rng.gen_range(0..3))?;
    }
    for fx in &fixtures()[..3] {
        let n = fx.dim();
        for _ in 0..4 {
            let v = |rng: &mut ChaCha8Rng| vector_in(&(0..n).map(|_| terms(rng, 2)).collect::<Vec<_>>(), n);
            let (a, x, y) = (v(&mut rng), v(&mut rng), v(&mut rng));
            let f = build_in(&terms(&mut rng, 2), n);
            d_squared(fx, &f, &a)?;
            half_convention(fx, &a, &x, &y)?;
            association(fx, &x, &y)?;
            torsion_free(fx, &x, &y)?;
            let e = |rng: &mut ChaCha8Rng| fx.mcp.basis(rng.gen_range(0..n));
            let (bx, by, bw) = (e(&mut rng), e(&mut rng), e(&mut rng));
            curvature_tensorial(fx, &f, &bx, &by, &bw)?;
            bianchi(fx, &(&bx.scale(&f) + &by), &by, &bw)?;
        }
        reeb_uniqueness(fx)?;
        complex_structures(fx)?;
        reeb_metric(fx)?;
    }
    for (fx, s) in subframe_cases() {
        let n = fx.dim();
        let u = build_in(&terms(&mut rng, 2), n);
        b_properties(fx, &s, &u, rng.gen_range(0..4), rng.gen_range(0..4))?;
        let coeffs: Vec<ScalarExpr> = (0..3).map(|_| build_in(&terms(&mut rng, 2), n)).collect();
        h_recombination(fx, &s, &coeffs, &build_in(&terms(&mut rng, 2), n))?;
    }
    profile_constraints()?;
    characteristic_leaves_minimal()
}

/// Parsed JSON with every `ms` field removed.
fn without_timing(text: &str) -> Result<serde_json::Value, String> {
    fn strip(v: &mut serde_json::Value) {
        match v {
            serde_json::Value::Object(m) => {
                m.remove("ms");
                m.values_mut().for_each(strip);
            }
            serde_json::Value::Array(a) => a.iter_mut().for_each(strip),
            _ => {}
        }
    }
    let mut v: serde_json::Value = serde_json::from_str(text).map_err(|e| e.to_string())?;
    strip(&mut v);
    Ok(v)
}

fn c10() -> Outcome {
    let s = corpus_build("heis6", None).map_err(|e| e.to_string())?;
    let (a, b) = (report(&s).to_json(), report(&s).to_json());
    check(without_timing(&a)? == without_timing(&b)?, || "in-process reports differ".into())?;
    let run = || -> Result<serde_json::Value, String> {
        let out = Command::new(env!("CARGO_BIN_EXE_contact-pair-lab"))
            .args(["corpus", "run", "--format", "json", "--seed", "7"])
            .env_remove("CONTACT_PAIR_LAB_SEED")
            .output()
            .map_err(|e| e.to_string())?;
        check(out.status.success(), || format!("corpus run exited with {}", out.status))?;
        without_timing(&String::from_utf8_lossy(&out.stdout))
    };
    let first = run()?;
    check(first.as_array().map_or(0, Vec::len) == 8, || "full corpus is not 8 reports".into())?;
    check(first == run()?, || "CLI reports differ between runs".into())
}

const CRITERIA: [(&str, fn() -> Outcome); 10] = [
    ("darboux pairs: contact pair, classes 2h+1 and 2k+1, associated, decomposable, normal", c1),
    ("heis6: connection and curvature identities, h ≡ 0, Z Killing", c2),
    ("sheared heis6: N1 and both characterizations fail with nonzero witnesses", c3),
    ("heis6-factor: tangent to Z1, orthogonal to Z2, φ-invariant, odd, minimal, Sasakian", c4),
    ("heis6-leaf3: nowhere tangent nowhere orthogonal, |Z1ᵀ|² = 1/2, constant angle, minimal", c5),
    ("heis6-n4: tangent to both, φ/J/T-invariant, even, minimal, classes (3,3), not a contact pair", c6),
    ("example-j: J- but not φ-invariant, Reeb distribution not tangent off x1 = 0, not minimal", c7),
    ("Hermitian second fundamental form identity and mean curvature formula", c8),
    ("scalar, frame, contact pair and subframe invariants on seeded inputs", c9),
    ("reports are deterministic in process and through the CLI", c10),
];

fn main() -> ExitCode {
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (what, f)) in CRITERIA.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_else(|| "panic".into()))
        });
        match outcome {
            Ok(()) => println!("PASS {}: {what}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {}: {what}: {why}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
