use std::collections::BTreeSet;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::scenario::Scenario;
use crate::contact::{
    check_connection_identities, check_curvature_identity, hermitian_data, normality, validate_contact_pair, validate_metric,
    validate_structure, ContactError, MetricContactPair, NormalityReport,
};
use crate::probe::ProbeSet;
use crate::report::{Check, Verdict};
use crate::submanifold::{verify_theorems, Subframe};

/// Check groups in dependency order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Group {
    Pair,
    Structure,
    Metric,
    Normality,
    Connection,
    Curvature,
    Hermitian,
    Submanifolds,
}

impl Group {
    pub const ALL: [Group; 8] = [
        Group::Pair,
        Group::Structure,
        Group::Metric,
        Group::Normality,
        Group::Connection,
        Group::Curvature,
        Group::Hermitian,
        Group::Submanifolds,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Group::Pair => "pair",
            Group::Structure => "structure",
            Group::Metric => "metric",
            Group::Normality => "normality",
            Group::Connection => "connection",
            Group::Curvature => "curvature",
            Group::Hermitian => "hermitian",
            Group::Submanifolds => "submanifolds",
        }
    }
}

/// Selected check groups.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Selection(BTreeSet<Group>);

impl Selection {
    pub fn all() -> Self {
        Selection(Group::ALL.into_iter().collect())
    }

    pub fn only(groups: impl IntoIterator<Item = Group>) -> Self {
        Selection(groups.into_iter().collect())
    }

    pub fn contains(&self, g: Group) -> bool {
        self.0.contains(&g)
    }

    pub fn is_all(&self) -> bool {
        self.0.len() == Group::ALL.len()
    }
}

impl FromStr for Selection {
    type Err = String;

    /// Comma-separated group names, or `all`.
    fn from_str(s: &str) -> Result<Self, String> {
        let mut out = BTreeSet::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            if part == "all" {
                return Ok(Selection::all());
            }
            let g = Group::ALL
                .into_iter()
                .find(|g| g.as_str() == part)
                .ok_or_else(|| format!("unknown check group `{part}` (expected pair, structure, metric, normality, connection, curvature, hermitian, submanifolds or all)"))?;
            out.insert(g);
        }
        if out.is_empty() {
            return Err("empty check selection".into());
        }
        Ok(Selection(out))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Overall {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportEntry {
    pub id: String,
    pub verdict: Verdict,
    pub witness: String,
    pub ms: f64,
}

/// Ordered check results of one scenario run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub scenario: String,
    pub checks: Vec<ReportEntry>,
    pub overall: Overall,
    pub seed: u64,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.overall == Overall::Pass
    }

    pub fn get(&self, id: &str) -> Option<&ReportEntry> {
        self.checks.iter().find(|c| c.id == id)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("scenario {} (seed {})\n", self.scenario, self.seed);
        let width = self.checks.iter().map(|c| c.id.len()).max().unwrap_or(0);
        for c in &self.checks {
            out.push_str(&format!("  {:<7} {:<width$}  {}\n", c.verdict.as_str().to_uppercase(), c.id, c.witness));
        }
        let count = |v: Verdict| self.checks.iter().filter(|c| c.verdict == v).count();
        out.push_str(&format!(
            "overall {}: {} pass, {} fail, {} warn, {} skipped\n",
            if self.passed() { "PASS" } else { "FAIL" },
            count(Verdict::Pass),
            count(Verdict::Fail),
            count(Verdict::Warn),
            count(Verdict::Skipped)
        ));
        out
    }
}

/// Options of a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunOptions {
    pub seed: u64,
    pub probes: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { seed: crate::probe::DEFAULT_SEED, probes: crate::probe::DEFAULT_PROBES }
    }
}

struct Collector<'a> {
    selection: &'a Selection,
    entries: Vec<ReportEntry>,
}

impl Collector<'_> {
    fn push(&mut self, group: Group, checks: Vec<Check>, ms: f64) {
        if !self.selection.contains(group) {
            return;
        }
        self.entries.extend(checks.into_iter().map(|c| ReportEntry { id: c.id, verdict: c.verdict, witness: c.witness, ms }));
    }

    fn skip(&mut self, groups: &[Group], why: &str) {
        for &g in groups {
            if self.selection.contains(g) {
                self.entries.push(ReportEntry { id: format!("{}.skipped", g.as_str()), verdict: Verdict::Skipped, witness: why.into(), ms: 0.0 });
            }
        }
    }
}

fn error_checks(e: ContactError, id: &str) -> Vec<Check> {
    match e {
        ContactError::Invalid(checks) => checks,
        other => vec![Check::fail(id, other.to_string())],
    }
}

fn ms_since(t: Instant) -> f64 {
    (t.elapsed().as_secs_f64() * 1e3 * 1e3).round() / 1e3
}

/// Run the selected groups in dependency order; prerequisites of a selected
/// group are computed even when not selected, and a failed prerequisite
/// turns its dependents into `skipped` entries.
pub fn run_checks(scenario: &Scenario, selection: &Selection, options: RunOptions) -> CheckReport {
    let probes = ProbeSet::new(scenario.frame.base_point().to_vec(), options.seed, options.probes);
    let mut out = Collector { selection, entries: Vec::new() };
    let downstream = [
        Group::Structure,
        Group::Metric,
        Group::Normality,
        Group::Connection,
        Group::Curvature,
        Group::Hermitian,
        Group::Submanifolds,
    ];

    let t = Instant::now();
    let (h, k) = scenario.pair_type;
    let pair = validate_contact_pair(scenario.frame.clone(), scenario.alpha_form(0), scenario.alpha_form(1), h, k, &probes);
    let pair = match pair {
        Ok(p) => {
            out.push(Group::Pair, p.checks().to_vec(), ms_since(t));
            p
        }
        Err(e) => {
            out.push(Group::Pair, error_checks(e, "pair.invalid"), ms_since(t));
            out.skip(&downstream, "contact pair not certified");
            return finish(scenario, out.entries, selection, options);
        }
    };

    let t = Instant::now();
    let structure = match validate_structure(&pair, scenario.phi_field(), &probes) {
        Ok(s) => {
            out.push(Group::Structure, s.checks().to_vec(), ms_since(t));
            s
        }
        Err(e) => {
            out.push(Group::Structure, error_checks(e, "structure.invalid"), ms_since(t));
            out.skip(&downstream[1..], "contact pair structure not certified");
            return finish(scenario, out.entries, selection, options);
        }
    };

    let t = Instant::now();
    let mcp = match scenario.metric_field().map_err(ContactError::from).and_then(|g| validate_metric(&structure, g)) {
        Ok(m) => m,
        Err(e) => {
            out.push(Group::Metric, error_checks(e, "metric.invalid"), ms_since(t));
            out.skip(&downstream[2..], "metric not certified");
            return finish(scenario, out.entries, selection, options);
        }
    };
    out.push(Group::Metric, mcp.checks().to_vec(), ms_since(t));
    if !(mcp.is_compatible() && mcp.is_associated()) {
        out.skip(&downstream[2..], "metric is not associated to the structure");
        return finish(scenario, out.entries, selection, options);
    }

    let need_normality = selection.contains(Group::Normality) || selection.contains(Group::Submanifolds);
    let parallel = std::thread::scope(|scope| {
        let m = &mcp;
        let normal = need_normality.then(|| {
            scope.spawn(move || {
                let t = Instant::now();
                (normality(m.structure()), ms_since(t))
            })
        });
        let timed = |f: fn(&MetricContactPair) -> Result<Vec<Check>, ContactError>, id: &'static str, on: bool| {
            on.then(|| {
                scope.spawn(move || {
                    let t = Instant::now();
                    let r = f(m).unwrap_or_else(|e| error_checks(e, id));
                    (r, ms_since(t))
                })
            })
        };
        let conn = timed(check_connection_identities, "connection.invalid", selection.contains(Group::Connection));
        let curv = timed(check_curvature_identity, "curvature.invalid", selection.contains(Group::Curvature));
        let herm = timed(hermitian_data, "hermitian.invalid", selection.contains(Group::Hermitian));
        let join = |h: Option<std::thread::ScopedJoinHandle<'_, (Vec<Check>, f64)>>| h.map(|h| h.join().expect("check thread"));
        (normal.map(|h| h.join().expect("normality thread")), join(conn), join(curv), join(herm))
    });
    let (normal, conn, curv, herm) = parallel;

    let mut normal_report: Option<NormalityReport> = None;
    if let Some((r, ms)) = normal {
        match r {
            Ok(report) => {
                out.push(Group::Normality, report.checks(), ms);
                normal_report = Some(report);
            }
            Err(e) => out.push(Group::Normality, error_checks(e, "normality.invalid"), ms),
        }
    }
    for (group, r) in [(Group::Connection, conn), (Group::Curvature, curv), (Group::Hermitian, herm)] {
        if let Some((checks, ms)) = r {
            out.push(group, checks, ms);
        }
    }

    if selection.contains(Group::Submanifolds) {
        match &normal_report {
            None => out.skip(&[Group::Submanifolds], "normality could not be evaluated"),
            Some(nr) => {
                let results: Vec<(Vec<Check>, f64)> = std::thread::scope(|scope| {
                    let handles: Vec<_> = scenario
                        .submanifolds
                        .iter()
                        .map(|(name, span)| {
                            let (m, p) = (&mcp, &probes);
                            scope.spawn(move || {
                                let t = Instant::now();
                                let checks = Subframe::new(scenario.frame.clone(), span.clone())
                                    .and_then(|sub| verify_theorems(name, &sub, m, nr, p))
                                    .unwrap_or_else(|e| vec![Check::fail(format!("submanifold.{name}.subframe"), e.to_string())]);
                                (checks, ms_since(t))
                            })
                        })
                        .collect();
                    handles.into_iter().map(|h| h.join().expect("submanifold thread")).collect()
                });
                for (checks, ms) in results {
                    out.push(Group::Submanifolds, checks, ms);
                }
            }
        }
    }
    finish(scenario, out.entries, selection, options)
}

/// Pair, structure and metric of a scenario, with the first failure as text.
pub fn build_metric_pair(scenario: &Scenario, probes: &ProbeSet) -> Result<MetricContactPair, String> {
    let (h, k) = scenario.pair_type;
    let pair = validate_contact_pair(scenario.frame.clone(), scenario.alpha_form(0), scenario.alpha_form(1), h, k, probes).map_err(|e| e.to_string())?;
    let structure = validate_structure(&pair, scenario.phi_field(), probes).map_err(|e| e.to_string())?;
    let g = scenario.metric_field().map_err(|e| e.to_string())?;
    validate_metric(&structure, g).map_err(|e| e.to_string())
}

/// Apply expectations and compute the overall verdict.
fn finish(scenario: &Scenario, mut entries: Vec<ReportEntry>, selection: &Selection, options: RunOptions) -> CheckReport {
    for e in entries.iter_mut() {
        if let Some(&want) = scenario.expectations.get(&e.id) {
            if e.verdict == want {
                e.witness = format!("(expected {}) {}", want.as_str(), e.witness);
                e.verdict = Verdict::Pass;
            } else {
                e.witness = format!("expected {}, observed {}: {}", want.as_str(), e.verdict.as_str(), e.witness);
                e.verdict = Verdict::Fail;
            }
        }
    }
    if selection.is_all() {
        let seen: BTreeSet<&str> = entries.iter().map(|e| e.id.as_str()).collect();
        let missing: Vec<String> = scenario.expectations.keys().filter(|k| !seen.contains(k.as_str())).cloned().collect();
        for id in missing {
            entries.push(ReportEntry { id: id.clone(), verdict: Verdict::Fail, witness: "expected check was not produced".into(), ms: 0.0 });
        }
    }
    let overall = if entries.iter().any(|e| e.verdict == Verdict::Fail) { Overall::Fail } else { Overall::Pass };
    CheckReport { scenario: scenario.name.clone(), checks: entries, overall, seed: options.seed }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::corpus_build;

    fn strip_ms(r: &CheckReport) -> CheckReport {
        let mut r = r.clone();
        r.checks.iter_mut().for_each(|c| c.ms = 0.0);
        r
    }

    #[test]
    fn selection_parsing() {
        assert!("all".parse::<Selection>().unwrap().is_all());
        let s: Selection = "normality, pair".parse().unwrap();
        assert!(s.contains(Group::Normality) && s.contains(Group::Pair) && !s.contains(Group::Metric));
        assert!("normal".parse::<Selection>().is_err());
        assert!("".parse::<Selection>().is_err());
    }

    #[test]
    fn only_selected_groups_are_reported() {
        let s = corpus_build("darboux", None).unwrap();
        let r = run_checks(&s, &"normality".parse().unwrap(), RunOptions::default());
        assert!(r.checks.iter().all(|c| c.id.starts_with("normality.")));
        assert_eq!(r.get("normality.N1").unwrap().verdict, Verdict::Pass);
        assert!(r.passed());
    }

    #[test]
    fn runs_are_deterministic() {
        let s = corpus_build("heis6", None).unwrap();
        let a = run_checks(&s, &Selection::all(), RunOptions::default());
        let b = run_checks(&s, &Selection::all(), RunOptions::default());
        assert_eq!(strip_ms(&a).to_json(), strip_ms(&b).to_json());
    }

    #[test]
    fn broken_pair_skips_dependents() {
        let mut f = corpus_build("heis6", None).unwrap().file().clone();
        f.alpha2 = f.alpha1.clone();
        let s = Scenario::from_file(f, "broken").unwrap();
        let r = run_checks(&s, &Selection::all(), RunOptions::default());
        assert!(!r.passed());
        assert_eq!(r.get("normality.skipped").unwrap().verdict, Verdict::Skipped);
        assert_eq!(r.get("submanifolds.skipped").unwrap().verdict, Verdict::Skipped);
    }

    #[test]
    fn expectations_turn_matches_into_passes() {
        let mut f = corpus_build("heis6", None).unwrap().file().clone();
        f.expectations.insert("pair.volume".into(), crate::corpus::Expected::Fail);
        f.expectations.insert("pair.nonexistent".into(), crate::corpus::Expected::Pass);
        let s = Scenario::from_file(f, "x").unwrap();
        let r = run_checks(&s, &Selection::all(), RunOptions::default());
        let v = r.get("pair.volume").unwrap();
        assert_eq!(v.verdict, Verdict::Fail);
        assert!(v.witness.starts_with("expected fail, observed pass"), "{}", v.witness);
        assert_eq!(r.get("pair.nonexistent").unwrap().verdict, Verdict::Fail);
        let n4 = r.get("submanifold.heis6-n4.induced_contact_pair").unwrap();
        assert_eq!(n4.verdict, Verdict::Pass);
        assert!(n4.witness.starts_with("(expected fail)"));
    }

    #[test]
    fn report_json_uses_the_fixed_keys() {
        let s = corpus_build("darboux", Some((1, 0))).unwrap();
        let r = run_checks(&s, &"pair".parse().unwrap(), RunOptions { seed: 7, probes: 2 });
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
        assert_eq!(keys, ["checks", "overall", "scenario", "seed"]);
        let c: Vec<&str> = v["checks"][0].as_object().unwrap().keys().map(String::as_str).collect();
        assert_eq!(c, ["id", "ms", "verdict", "witness"]);
        assert_eq!(v["overall"], "pass");
        assert_eq!(v["seed"], 7);
    }
}
