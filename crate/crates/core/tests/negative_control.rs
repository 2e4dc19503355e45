//! A non-normal perturbation of heis6: on the {X1, X2} block the structure
//! tensor becomes `[[-z1, z1^2+1], [-1, z1]]` and the metric
//! `½[[1, -z1], [-z1, 1+z1^2]]`, so the metric stays associated while the
//! structure stops being normal.

mod support;

use contact_pair_lab::corpus::{run_checks, RunOptions, Selection};
use contact_pair_lab::report::Verdict;
use support::sheared;

fn verdict(report: &contact_pair_lab::corpus::CheckReport, id: &str) -> (Verdict, String) {
    let e = report.get(id).unwrap_or_else(|| panic!("missing {id}"));
    (e.verdict, e.witness.clone())
}

#[test]
fn sheared_structure_is_still_an_associated_metric_pair() {
    let r = run_checks(&sheared(), &Selection::all(), RunOptions::default());
    for id in ["structure.phi_squared", "structure.decomposable", "metric.compatible", "metric.associated"] {
        assert_eq!(verdict(&r, id).0, Verdict::Pass, "{id}");
    }
}

#[test]
fn sheared_structure_fails_every_normal_characterization() {
    let r = run_checks(&sheared(), &Selection::all(), RunOptions::default());
    for id in ["normality.N1", "normality.NJ", "normality.NT", "connection.characterization", "curvature.characterization"] {
        let (v, w) = verdict(&r, id);
        assert_eq!(v, Verdict::Fail, "{id}: {w}");
        let coeff = w.rsplit(" = ").next().unwrap().trim();
        assert!(w.contains(" = ") && coeff != "0", "{id} has no witness coefficient: {w}");
    }
    assert_eq!(verdict(&r, "normality.equivalence").0, Verdict::Pass);
    assert!(!r.passed());
}
