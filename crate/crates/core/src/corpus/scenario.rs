use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::frame::{EndoField, FrameError, FramePresentation, MetricField, PForm, VectorField};
use crate::linalg::Matrix;
use crate::report::Verdict;
use crate::scalar::{parse_rational, Coordinates, ScalarError, ScalarExpr};

/// Expected verdict of a check; `skipped` is not a valid expectation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Expected {
    Pass,
    Fail,
    Warn,
}

impl Expected {
    pub fn verdict(self) -> Verdict {
        match self {
            Expected::Pass => Verdict::Pass,
            Expected::Fail => Verdict::Fail,
            Expected::Warn => Verdict::Warn,
        }
    }
}

/// On-disk scenario: every expression is text in the scalar grammar.
///
/// `frame[a]` lists the coordinate components of `e_a`; `alpha1`/`alpha2`
/// are coordinate components; `phi[i][j]` is the `e_i` component of
/// `φ(e_j)`; `metric[a][b] = g(e_a, e_b)`; each submanifold is a list of
/// spanning fields in frame components.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub coordinates: Vec<String>,
    pub frame: Vec<Vec<String>>,
    pub base_point: BTreeMap<String, String>,
    pub alpha1: Vec<String>,
    pub alpha2: Vec<String>,
    #[serde(rename = "type")]
    pub pair_type: [usize; 2],
    pub phi: Vec<Vec<String>>,
    pub metric: Vec<Vec<String>>,
    #[serde(default)]
    pub submanifolds: BTreeMap<String, Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub expectations: BTreeMap<String, Expected>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ScenarioError {
    #[error("{0}")]
    Io(String),
    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },
    #[error("expression error at {path}: {message}")]
    Expression { path: String, message: String },
    #[error("invalid scenario at {path}: {message}")]
    Invalid { path: String, message: String },
    #[error("unknown scenario `{0}` (known: darboux, heis6, heis6-leaf3, heis6-n4, darboux-J-noninvariant)")]
    UnknownScenario(String),
    #[error("parameters out of range: {0}")]
    Params(String),
}

fn invalid(path: impl Into<String>, message: impl Into<String>) -> ScenarioError {
    ScenarioError::Invalid { path: path.into(), message: message.into() }
}

fn expr_error(path: String, e: ScalarError) -> ScenarioError {
    let message = match e {
        ScalarError::Syntax { pos, msg } => format!("{msg} (character {pos})"),
        other => other.to_string(),
    };
    ScenarioError::Expression { path, message }
}

/// A compiled scenario: the exact objects behind a [`ScenarioFile`].
#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: String,
    pub frame: Arc<FramePresentation>,
    /// Coordinate components of `α₁`, `α₂`.
    pub alpha: [Vec<ScalarExpr>; 2],
    pub pair_type: (usize, usize),
    pub phi: Matrix,
    pub metric: Matrix,
    /// Spanning fields in frame components, ordered by name.
    pub submanifolds: Vec<(String, Vec<VectorField>)>,
    pub expectations: BTreeMap<String, Verdict>,
    source: ScenarioFile,
}

impl Scenario {
    pub fn from_file(file: ScenarioFile, default_name: &str) -> Result<Self, ScenarioError> {
        let coords = Coordinates::new(file.coordinates.iter().cloned());
        let n = coords.len();
        if n == 0 {
            return Err(invalid("coordinates", "at least one coordinate is required"));
        }
        for (i, c) in file.coordinates.iter().enumerate() {
            let ok = c.chars().next().is_some_and(|ch| ch.is_ascii_alphabetic() || ch == '_')
                && c.chars().all(|ch| ch.is_ascii_alphanumeric() || ch == '_');
            if !ok {
                return Err(invalid(format!("coordinates[{i}]"), format!("`{c}` is not an identifier")));
            }
            if file.coordinates[..i].contains(c) {
                return Err(invalid(format!("coordinates[{i}]"), format!("duplicate coordinate `{c}`")));
            }
        }
        let parse = |path: String, text: &str| coords.parse(text).map_err(|e| expr_error(path, e));
        let square = |key: &str, m: &[Vec<String>]| -> Result<Matrix, ScenarioError> {
            if m.len() != n || m.iter().any(|r| r.len() != n) {
                return Err(invalid(key, format!("must be a {n}x{n} matrix")));
            }
            let rows = m
                .iter()
                .enumerate()
                .map(|(i, r)| r.iter().enumerate().map(|(j, t)| parse(format!("{key}[{i}][{j}]"), t)).collect())
                .collect::<Result<Vec<Vec<_>>, _>>()?;
            Ok(Matrix::from_rows(rows))
        };

        // frame[a] is a field, so the frame matrix is the transpose
        let frame_matrix = square("frame", &file.frame)?.transpose();
        let mut point = Vec::with_capacity(n);
        for name in &file.coordinates {
            let text = file.base_point.get(name).ok_or_else(|| invalid("base_point", format!("missing coordinate `{name}`")))?;
            point.push(parse_rational(text).map_err(|e| expr_error(format!("base_point.{name}"), e))?);
        }
        if let Some(extra) = file.base_point.keys().find(|k| !file.coordinates.contains(k)) {
            return Err(invalid(format!("base_point.{extra}"), "not a coordinate"));
        }
        let frame = FramePresentation::new(coords.clone(), frame_matrix, point).map_err(|e| frame_error("frame", e))?;

        let mut alpha: [Vec<ScalarExpr>; 2] = [Vec::new(), Vec::new()];
        for (i, (key, comps)) in [("alpha1", &file.alpha1), ("alpha2", &file.alpha2)].into_iter().enumerate() {
            if comps.len() != n {
                return Err(invalid(key, format!("must have {n} coordinate components")));
            }
            alpha[i] = comps.iter().enumerate().map(|(j, t)| parse(format!("{key}[{j}]"), t)).collect::<Result<_, _>>()?;
        }
        let phi = square("phi", &file.phi)?;
        let metric = square("metric", &file.metric)?;
        if !metric.is_symmetric() {
            return Err(invalid("metric", "must be symmetric"));
        }

        let mut submanifolds = Vec::new();
        for (name, fields) in &file.submanifolds {
            if fields.is_empty() {
                return Err(invalid(format!("submanifolds.{name}"), "needs at least one spanning field"));
            }
            let mut span = Vec::new();
            for (a, f) in fields.iter().enumerate() {
                if f.len() != n {
                    return Err(invalid(format!("submanifolds.{name}[{a}]"), format!("must have {n} frame components")));
                }
                let comps = f.iter().enumerate().map(|(c, t)| parse(format!("submanifolds.{name}[{a}][{c}]"), t)).collect::<Result<_, _>>()?;
                span.push(VectorField::new(comps));
            }
            submanifolds.push((name.clone(), span));
        }
        let expectations = file.expectations.iter().map(|(k, v)| (k.clone(), v.verdict())).collect();
        Ok(Scenario {
            name: file.name.clone().unwrap_or_else(|| default_name.to_string()),
            frame: Arc::new(frame),
            alpha,
            pair_type: (file.pair_type[0], file.pair_type[1]),
            phi,
            metric,
            submanifolds,
            expectations,
            source: file,
        })
    }

    pub fn file(&self) -> &ScenarioFile {
        &self.source
    }

    pub fn coordinates(&self) -> &Coordinates {
        self.frame.coordinates()
    }

    pub fn alpha_form(&self, i: usize) -> PForm {
        self.frame.from_coordinate_covector(&self.alpha[i])
    }

    pub fn phi_field(&self) -> EndoField {
        EndoField::new(self.phi.clone())
    }

    pub fn metric_field(&self) -> Result<MetricField, FrameError> {
        MetricField::new(self.metric.clone(), self.frame.base_point())
    }

    pub fn submanifold(&self, name: &str) -> Option<&[VectorField]> {
        self.submanifolds.iter().find(|(n, _)| n == name).map(|(_, s)| s.as_slice())
    }

    /// Equality of every compiled object in canonical form.
    pub fn canonical_eq(&self, other: &Scenario) -> bool {
        self.coordinates() == other.coordinates()
            && self.frame.frame_matrix() == other.frame.frame_matrix()
            && self.frame.base_point() == other.frame.base_point()
            && self.alpha == other.alpha
            && self.pair_type == other.pair_type
            && self.phi == other.phi
            && self.metric == other.metric
            && self.submanifolds == other.submanifolds
            && self.expectations == other.expectations
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.source).expect("scenario serializes")
    }
}

fn frame_error(path: &str, e: FrameError) -> ScenarioError {
    match e {
        FrameError::Scalar(s) => expr_error(path.into(), s),
        other => invalid(path, other.to_string()),
    }
}

pub fn parse_scenario(text: &str, default_name: &str) -> Result<Scenario, ScenarioError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let file: ScenarioFile = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        ScenarioError::Schema { path: if path.is_empty() { ".".into() } else { path }, message: e.into_inner().to_string() }
    })?;
    Scenario::from_file(file, default_name)
}

pub fn load_scenario(path: &Path) -> Result<Scenario, ScenarioError> {
    let text = std::fs::read_to_string(path).map_err(|e| ScenarioError::Io(format!("{}: {e}", path.display())))?;
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("scenario");
    parse_scenario(&text, stem)
}

pub fn save_scenario(s: &Scenario, path: &Path) -> Result<(), ScenarioError> {
    let mut file = s.source.clone();
    file.name = Some(s.name.clone());
    let text = serde_json::to_string_pretty(&file).expect("scenario serializes");
    std::fs::write(path, text + "\n").map_err(|e| ScenarioError::Io(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::corpus_build;

    #[test]
    fn save_then_load_is_canonically_equal() {
        let dir = tempfile::tempdir().unwrap();
        for (name, params) in [("darboux", Some((1, 1))), ("heis6", None), ("darboux-J-noninvariant", None)] {
            let s = corpus_build(name, params).unwrap();
            let path = dir.path().join("s.json");
            save_scenario(&s, &path).unwrap();
            let back = load_scenario(&path).unwrap();
            assert!(s.canonical_eq(&back), "{name}");
            assert_eq!(back.name, s.name);
        }
    }

    #[test]
    fn hand_written_heis6_matches_the_builder() {
        let text = include_str!("../../tests/data/heis6.json");
        let hand = parse_scenario(text, "hand").unwrap();
        assert!(hand.canonical_eq(&corpus_build("heis6", None).unwrap()));
        assert!(!hand.canonical_eq(&corpus_build("heis6-n4", None).unwrap()));
    }

    #[test]
    fn non_square_frame_is_named() {
        let mut v: serde_json::Value = serde_json::from_str(&corpus_build("heis6", None).unwrap().to_json()).unwrap();
        v["frame"].as_array_mut().unwrap().pop();
        let err = parse_scenario(&v.to_string(), "x").unwrap_err();
        assert!(matches!(&err, ScenarioError::Invalid { path, .. } if path == "frame"), "{err}");
    }

    #[test]
    fn schema_errors_carry_a_path() {
        let err = parse_scenario(r#"{"coordinates": ["x"], "frame": 3}"#, "x").unwrap_err();
        assert!(matches!(&err, ScenarioError::Schema { path, .. } if path == "frame"), "{err}");
        let err = parse_scenario(r#"{"coordinates": ["x"], "bogus": 1}"#, "x").unwrap_err();
        assert!(matches!(err, ScenarioError::Schema { .. }));
    }

    #[test]
    fn expression_errors_carry_a_location() {
        let mut f = corpus_build("heis6", None).unwrap().file().clone();
        f.metric[2][2] = "1 +* x1".into();
        let err = Scenario::from_file(f, "x").unwrap_err();
        match err {
            ScenarioError::Expression { path, message } => {
                assert_eq!(path, "metric[2][2]");
                assert!(message.contains("character"), "{message}");
            }
            other => panic!("{other}"),
        }
    }

    #[test]
    fn unknown_identifiers_and_asymmetric_metrics_are_rejected() {
        let base = corpus_build("heis6", None).unwrap().file().clone();
        let mut f = base.clone();
        f.alpha1[0] = "w".into();
        assert!(matches!(Scenario::from_file(f, "x"), Err(ScenarioError::Expression { .. })));
        let mut f = base.clone();
        f.metric[0][1] = "x1".into();
        assert!(matches!(Scenario::from_file(f, "x"), Err(ScenarioError::Invalid { path, .. }) if path == "metric"));
        let mut f = base;
        f.base_point.remove("z2");
        assert!(matches!(Scenario::from_file(f, "x"), Err(ScenarioError::Invalid { path, .. }) if path == "base_point"));
    }

    #[test]
    fn expectation_vocabulary_is_closed() {
        let mut v: serde_json::Value = serde_json::from_str(&corpus_build("heis6", None).unwrap().to_json()).unwrap();
        v["expectations"] = serde_json::json!({"pair.volume": "skipped"});
        assert!(matches!(parse_scenario(&v.to_string(), "x"), Err(ScenarioError::Schema { .. })));
    }
}
