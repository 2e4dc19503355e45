use std::collections::BTreeMap;

use super::scenario::{Expected, Scenario, ScenarioError, ScenarioFile};

/// Built-in scenario names with one-line descriptions.
pub const CORPUS: [(&str, &str); 5] = [
    ("darboux", "product of standard Sasakian structures on R^(2h+1) x R^(2k+1), parameters (h,k)"),
    ("heis6", "H3 x H3 with the product normal metric contact pair, three invariant subframes and a horizontal one"),
    ("heis6-leaf3", "H3 x H3 with the leaf spanned by X3+Y3, X1+Y1, X2+Y2"),
    ("heis6-n4", "H3 x H3 with the leaf spanned by X3, Y3, X1+Y1, X2+Y2"),
    ("darboux-J-noninvariant", "darboux(1,0) with the J-invariant, non-φ-invariant leaf spanned by Y1, JY1"),
];

/// Default parameters of `darboux`.
pub const DARBOUX_DEFAULT: (usize, usize) = (1, 1);

fn text(v: &str) -> String {
    v.to_string()
}

fn zeros(n: usize) -> Vec<String> {
    vec![text("0"); n]
}

fn unit(n: usize, a: usize) -> Vec<String> {
    let mut v = zeros(n);
    v[a] = text("1");
    v
}

fn diag(entries: &[&str]) -> Vec<Vec<String>> {
    let n = entries.len();
    (0..n)
        .map(|i| {
            let mut row = zeros(n);
            row[i] = text(entries[i]);
            row
        })
        .collect()
}

fn sum(a: &[String], b: &[String]) -> Vec<String> {
    a.iter()
        .zip(b)
        .map(|(x, y)| match (x.as_str(), y.as_str()) {
            ("0", _) => y.clone(),
            (_, "0") => x.clone(),
            _ => format!("{x} + {y}"),
        })
        .collect()
}

pub fn corpus_names() -> Vec<&'static str> {
    CORPUS.iter().map(|(n, _)| *n).collect()
}

/// Build a corpus scenario; `params` applies to `darboux` only.
pub fn corpus_build(name: &str, params: Option<(usize, usize)>) -> Result<Scenario, ScenarioError> {
    if params.is_some() && name != "darboux" {
        return Err(ScenarioError::Params(format!("`{name}` takes no parameters")));
    }
    let file = match name {
        "darboux" => {
            let (h, k) = params.unwrap_or(DARBOUX_DEFAULT);
            darboux_file(h, k)?
        }
        "heis6" => heis6_file(&["heis6-factor", "heis6-horizontal", "heis6-leaf3", "heis6-n4"]),
        "heis6-leaf3" => heis6_file(&["heis6-leaf3"]),
        "heis6-n4" => heis6_file(&["heis6-n4"]),
        "darboux-J-noninvariant" => example_j_file(),
        other => return Err(ScenarioError::UnknownScenario(other.into())),
    };
    let label = match (name, params) {
        ("darboux", Some((h, k))) => format!("darboux({h},{k})"),
        _ => name.to_string(),
    };
    Scenario::from_file(ScenarioFile { name: Some(label.clone()), ..file }, &label)
}

/// `α₁ = ½(dz − Σ y_i dx_i)`, `α₂ = ½(dz′ − Σ y′_j dx′_j)` on
/// `R^(2h+1) × R^(2k+1)` with the frame
/// `∂y_i, ∂x_i + y_i∂z, 2∂z, ∂y′_j, ∂x′_j + y′_j∂z′, 2∂z′`.
pub fn darboux_file(h: usize, k: usize) -> Result<ScenarioFile, ScenarioError> {
    if h + k < 1 || h > 2 || k > 2 {
        return Err(ScenarioError::Params(format!("darboux needs h + k >= 1 and h, k <= 2; got ({h},{k})")));
    }
    let n = 2 * h + 2 * k + 2;
    let mut coordinates = Vec::with_capacity(n);
    coordinates.extend((1..=h).map(|i| format!("x{i}")));
    coordinates.extend((1..=h).map(|i| format!("y{i}")));
    coordinates.push(text("z"));
    coordinates.extend((1..=k).map(|j| format!("xp{j}")));
    coordinates.extend((1..=k).map(|j| format!("yp{j}")));
    coordinates.push(text("zp"));

    // block layout: (x index, y index, z index, frame offset)
    let blocks = [(0, h, 2 * h, 0, h, "y"), (2 * h + 1, 2 * h + 1 + k, 2 * h + 2 * k + 1, 2 * h + 1, k, "yp")];
    let mut frame = vec![zeros(n); n];
    let mut alpha = [zeros(n), zeros(n)];
    let mut phi = vec![zeros(n); n];
    let mut gram = vec![text("1/4"); n];
    for (b, &(x0, y0, zi, off, m, yname)) in blocks.iter().enumerate() {
        for i in 0..m {
            frame[off + i] = unit(n, y0 + i);
            let mut horizontal = unit(n, x0 + i);
            horizontal[zi] = format!("{yname}{}", i + 1);
            frame[off + m + i] = horizontal;
            alpha[b][x0 + i] = format!("-{yname}{}/2", i + 1);
            phi[off + m + i][off + i] = text("1");
            phi[off + i][off + m + i] = text("-1");
        }
        let mut reeb = zeros(n);
        reeb[zi] = text("2");
        frame[off + 2 * m] = reeb;
        alpha[b][zi] = text("1/2");
        gram[off + 2 * m] = text("1");
    }
    let gram_refs: Vec<&str> = gram.iter().map(String::as_str).collect();

    let z1 = 2 * h;
    let z2 = n - 1;
    let h2: Vec<usize> = (0..2 * h).collect();
    let h1: Vec<usize> = (2 * h + 1..2 * h + 1 + 2 * k).collect();
    let fields = |idx: Vec<usize>| idx.into_iter().map(|a| unit(n, a)).collect::<Vec<_>>();
    let candidates = [
        ("tf1", [h1.clone(), vec![z2]].concat()),
        ("tf2", [h2.clone(), vec![z1]].concat()),
        ("tg1", [h1, vec![z1, z2]].concat()),
        ("tg2", [h2, vec![z1, z2]].concat()),
    ];
    let submanifolds = candidates
        .into_iter()
        .filter(|(_, idx)| idx.len() >= 2)
        .map(|(name, idx)| (name.to_string(), fields(idx)))
        .collect();

    Ok(ScenarioFile {
        name: None,
        base_point: coordinates.iter().map(|c| (c.clone(), text("0"))).collect(),
        coordinates,
        frame,
        alpha1: alpha[0].clone(),
        alpha2: alpha[1].clone(),
        pair_type: [h, k],
        phi,
        metric: diag(&gram_refs),
        submanifolds,
        expectations: BTreeMap::new(),
    })
}

/// `H3 × H3` with `X1 = ∂x1, X2 = ∂y1 − x1∂z1, X3 = ∂z1` and likewise `Y`,
/// `α₃ = dz1 + x1 dy1`, `φX2 = X1`, `φY2 = Y1`.
pub fn heis6_file(subframes: &[&str]) -> ScenarioFile {
    let n = 6;
    let coordinates: Vec<String> = ["x1", "y1", "z1", "x2", "y2", "z2"].iter().map(|s| text(s)).collect();
    let mut frame = vec![zeros(n); n];
    let mut alpha = [zeros(n), zeros(n)];
    let mut phi = vec![zeros(n); n];
    for b in 0..2 {
        let o = 3 * b;
        let x = format!("x{}", b + 1);
        frame[o] = unit(n, o);
        let mut x2 = unit(n, o + 1);
        x2[o + 2] = format!("-{x}");
        frame[o + 1] = x2;
        frame[o + 2] = unit(n, o + 2);
        alpha[b][o + 1] = x.clone();
        alpha[b][o + 2] = text("1");
        phi[o][o + 1] = text("1");
        phi[o + 1][o] = text("-1");
    }
    let e = |a: usize| unit(n, a);
    let mut submanifolds = BTreeMap::new();
    let mut expectations = BTreeMap::new();
    for &name in subframes {
        let span = match name {
            "heis6-factor" => vec![e(0), e(1), e(2)],
            "heis6-horizontal" => vec![e(0), e(3)],
            "heis6-leaf3" => vec![sum(&e(2), &e(5)), sum(&e(0), &e(3)), sum(&e(1), &e(4))],
            "heis6-n4" => {
                expectations.insert(format!("submanifold.{name}.induced_contact_pair"), Expected::Fail);
                vec![e(2), e(5), sum(&e(0), &e(3)), sum(&e(1), &e(4))]
            }
            other => panic!("unknown heis6 subframe {other}"),
        };
        submanifolds.insert(name.to_string(), span);
    }
    ScenarioFile {
        name: None,
        base_point: coordinates.iter().map(|c| (c.clone(), text("0"))).collect(),
        coordinates,
        frame,
        alpha1: alpha[0].clone(),
        alpha2: alpha[1].clone(),
        pair_type: [1, 1],
        phi,
        metric: diag(&["1/2", "1/2", "1", "1/2", "1/2", "1"]),
        submanifolds,
        expectations,
    }
}

/// darboux(1,0) with the leaf spanned by `Y1 = X1 + ½x1Z1` and
/// `JY1 = X2 + ½x1Z2`.
pub fn example_j_file() -> ScenarioFile {
    let mut file = darboux_file(1, 0).expect("valid parameters");
    file.submanifolds = BTreeMap::from([(
        text("example-j"),
        vec![
            vec![text("1"), text("0"), text("x1/2"), text("0")],
            vec![text("0"), text("1"), text("0"), text("x1/2")],
        ],
    )]);
    file.expectations = BTreeMap::from([(text("submanifold.example-j.minimal"), Expected::Fail)]);
    file
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ScalarExpr;

    #[test]
    fn darboux_has_the_expected_shape() {
        for (h, k) in [(1, 0), (0, 1), (1, 1), (2, 1), (2, 2)] {
            let s = corpus_build("darboux", Some((h, k))).unwrap();
            assert_eq!(s.coordinates().len(), 2 * h + 2 * k + 2);
            assert_eq!(s.name, format!("darboux({h},{k})"));
        }
        assert_eq!(corpus_build("darboux", None).unwrap().pair_type, DARBOUX_DEFAULT);
    }

    #[test]
    fn darboux_first_reeb_field_is_twice_dz() {
        let s = corpus_build("darboux", Some((1, 1))).unwrap();
        let z1 = s.frame.to_coordinate_vector(&s.frame.basis(2));
        let want: Vec<ScalarExpr> = [0, 0, 2, 0, 0, 0].iter().map(|&c| ScalarExpr::ratio(c, 1)).collect();
        assert_eq!(z1, want);
    }

    #[test]
    fn parameters_are_range_checked() {
        for p in [(0, 0), (3, 0), (1, 3)] {
            assert!(matches!(corpus_build("darboux", Some(p)), Err(ScenarioError::Params(_))));
        }
        assert!(matches!(corpus_build("heis6", Some((1, 1))), Err(ScenarioError::Params(_))));
        assert!(matches!(corpus_build("heis7", None), Err(ScenarioError::UnknownScenario(_))));
    }

    #[test]
    fn every_listed_name_builds() {
        for name in corpus_names() {
            let s = corpus_build(name, None).unwrap();
            assert!(!s.submanifolds.is_empty(), "{name}");
        }
    }
}
