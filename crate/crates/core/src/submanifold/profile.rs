use num_traits::Zero;

use super::{Embedded, Subframe, SubmanifoldError};
use crate::contact::MetricContactPair;
use crate::frame::{EndoField, VectorField};
use crate::probe::ProbeSet;
use crate::scalar::ScalarExpr;

/// Position of a subframe relative to the Reeb fields.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReebPosition {
    TangentBoth,
    TangentZ1OrthogonalZ2,
    TangentZ2OrthogonalZ1,
    NowhereTangentNowhereOrthogonal,
    Mixed,
}

impl ReebPosition {
    pub fn as_str(self) -> &'static str {
        match self {
            ReebPosition::TangentBoth => "tangent-both",
            ReebPosition::TangentZ1OrthogonalZ2 => "tangent-Z1-orthogonal-Z2",
            ReebPosition::TangentZ2OrthogonalZ1 => "tangent-Z2-orthogonal-Z1",
            ReebPosition::NowhereTangentNowhereOrthogonal => "nowhere-tangent-nowhere-orthogonal",
            ReebPosition::Mixed => "mixed/unknown",
        }
    }

    /// 0-based index of the tangent Reeb field in the semi-invariant cases.
    pub fn semi_invariant_index(self) -> Option<usize> {
        match self {
            ReebPosition::TangentZ1OrthogonalZ2 => Some(0),
            ReebPosition::TangentZ2OrthogonalZ1 => Some(1),
            _ => None,
        }
    }
}

impl std::fmt::Display for ReebPosition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Outcome of a "nowhere zero" qualifier.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Nonvanishing {
    /// Nonzero constant.
    Constant,
    /// Nonzero at the base point and every finite probe.
    Probed,
    /// Zero at the given probe index (0 is the base point).
    VanishesAt(usize),
    IdenticallyZero,
}

impl Nonvanishing {
    pub fn holds(&self) -> bool {
        matches!(self, Nonvanishing::Constant | Nonvanishing::Probed)
    }
}

pub(crate) fn nonvanishing(e: &ScalarExpr, probes: &ProbeSet) -> Nonvanishing {
    if e.is_zero() {
        return Nonvanishing::IdenticallyZero;
    }
    if e.is_constant() {
        return Nonvanishing::Constant;
    }
    for (i, p) in probes.points().iter().enumerate() {
        if matches!(e.eval(p), Ok(v) if v.is_zero()) {
            return Nonvanishing::VanishesAt(i);
        }
    }
    Nonvanishing::Probed
}

/// Invariance flags, Reeb position and parity of a subframe.
#[derive(Debug, Clone)]
pub struct InvarianceProfile {
    pub dim: usize,
    pub phi_invariant: bool,
    pub j_invariant: bool,
    pub t_invariant: bool,
    pub rho_invariant: bool,
    pub position: ReebPosition,
    /// `Z_i` lies in the span.
    pub reeb_tangent: [bool; 2],
    /// `Z_iᵀ ≡ 0`.
    pub reeb_orthogonal: [bool; 2],
    /// No point where both `Z_1` and `Z_2` are tangent.
    pub reeb_distribution_nowhere_tangent: bool,
    /// Parity predicted for a φ-invariant subframe in its position, if any.
    pub expected_parity: Option<Parity>,
    pub warnings: Vec<String>,
    pub reeb_tangential: [VectorField; 2],
    pub reeb_normal: [VectorField; 2],
    /// `‖Z_iᵀ‖²`.
    pub tangential_norm_sq: [ScalarExpr; 2],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Odd,
    Even,
}

impl InvarianceProfile {
    /// `None` when no parity statement applies.
    pub fn parity_consistent(&self) -> Option<bool> {
        self.expected_parity.map(|p| match p {
            Parity::Odd => self.dim % 2 == 1,
            Parity::Even => self.dim % 2 == 0,
        })
    }

    pub fn summary(&self) -> String {
        let flags: Vec<&str> = [
            (self.phi_invariant, "φ"),
            (self.j_invariant, "J"),
            (self.t_invariant, "T"),
            (self.rho_invariant, "ρ"),
        ]
        .iter()
        .filter(|(b, _)| *b)
        .map(|(_, s)| *s)
        .collect();
        format!(
            "dim {}, invariant under {{{}}}, {}",
            self.dim,
            flags.join(", "),
            self.position.as_str()
        )
    }
}

fn invariant(sub: &Subframe, e: &EndoField) -> bool {
    sub.span().iter().all(|f| sub.contains(&e.apply(f)))
}

/// Exact invariance flags and Reeb position; pointwise qualifiers use `probes`.
pub fn classify(sub: &Subframe, mcp: &MetricContactPair, probes: &ProbeSet) -> Result<InvarianceProfile, SubmanifoldError> {
    let e = Embedded::new(sub, mcp)?;
    let s = mcp.structure();
    let g = mcp.metric();
    let coords = mcp.frame().coordinates();
    let pair = mcp.pair();
    let mut warnings = Vec::new();

    let tangential = [e.tangential(pair.reeb(0)), e.tangential(pair.reeb(1))];
    let normal = [pair.reeb(0) - &tangential[0], pair.reeb(1) - &tangential[1]];
    let tnorm = [g.norm_sq(&tangential[0]), g.norm_sq(&tangential[1])];
    let nnorm = [g.norm_sq(&normal[0]), g.norm_sq(&normal[1])];
    let reeb_tangent = [normal[0].is_zero(), normal[1].is_zero()];
    let reeb_orthogonal = [tangential[0].is_zero(), tangential[1].is_zero()];

    let mut qualifier = |label: String, expr: &ScalarExpr| -> bool {
        let q = nonvanishing(expr, probes);
        match &q {
            Nonvanishing::Probed => warnings.push(format!("{label} = {} is nonconstant; nonvanishing checked on probes only", coords.print(expr))),
            Nonvanishing::VanishesAt(i) => {
                let at = if *i == 0 { "the base point".to_string() } else { format!("probe {i}") };
                warnings.push(format!("{label} = {} vanishes at {at}", coords.print(expr)));
            }
            _ => {}
        }
        q.holds()
    };
    let nowhere_orth = [qualifier("‖Z1ᵀ‖²".into(), &tnorm[0]), qualifier("‖Z2ᵀ‖²".into(), &tnorm[1])];
    let nowhere_tan = [qualifier("‖Z1^⊥‖²".into(), &nnorm[0]), qualifier("‖Z2^⊥‖²".into(), &nnorm[1])];
    let distribution_normal = &nnorm[0] + &nnorm[1];
    let reeb_distribution_nowhere_tangent = nonvanishing(&distribution_normal, probes).holds();

    let position = if reeb_tangent[0] && reeb_tangent[1] {
        ReebPosition::TangentBoth
    } else if reeb_tangent[0] && reeb_orthogonal[1] {
        ReebPosition::TangentZ1OrthogonalZ2
    } else if reeb_tangent[1] && reeb_orthogonal[0] {
        ReebPosition::TangentZ2OrthogonalZ1
    } else if nowhere_orth.iter().chain(&nowhere_tan).all(|b| *b) {
        ReebPosition::NowhereTangentNowhereOrthogonal
    } else {
        ReebPosition::Mixed
    };

    let phi_invariant = invariant(sub, s.phi());
    let expected_parity = match position {
        _ if !phi_invariant => None,
        ReebPosition::TangentBoth => Some(Parity::Even),
        ReebPosition::Mixed => None,
        _ => Some(Parity::Odd),
    };

    Ok(InvarianceProfile {
        dim: sub.rank(),
        phi_invariant,
        j_invariant: invariant(sub, s.j()),
        t_invariant: invariant(sub, s.t()),
        rho_invariant: invariant(sub, s.rho()),
        position,
        reeb_tangent,
        reeb_orthogonal,
        reeb_distribution_nowhere_tangent,
        expected_parity,
        warnings,
        reeb_tangential: tangential,
        reeb_normal: normal,
        tangential_norm_sq: tnorm,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::submanifold::{corpus_subframe, test_probes};

    fn profile(name: &str, params: Option<(usize, usize)>, sub: &str) -> InvarianceProfile {
        let (s, m) = corpus_subframe(name, params, sub);
        classify(&s, &m, &test_probes(&s)).unwrap()
    }

    #[test]
    fn heis6_factor_is_semi_invariant() {
        let p = profile("heis6", None, "heis6-factor");
        assert_eq!(p.position, ReebPosition::TangentZ1OrthogonalZ2);
        assert!(p.phi_invariant && p.dim == 3);
        assert_eq!(p.parity_consistent(), Some(true));
        assert_eq!(p.position.semi_invariant_index(), Some(0));
    }

    #[test]
    fn heis6_leaf3_is_transverse() {
        let p = profile("heis6", None, "heis6-leaf3");
        assert_eq!(p.position, ReebPosition::NowhereTangentNowhereOrthogonal);
        assert!(p.phi_invariant);
        assert!(p.warnings.is_empty());
        assert_eq!(p.tangential_norm_sq[0], ScalarExpr::ratio(1, 2));
    }

    #[test]
    fn heis6_n4_is_tangent_to_both() {
        let p = profile("heis6", None, "heis6-n4");
        assert_eq!(p.position, ReebPosition::TangentBoth);
        assert!(p.phi_invariant && p.j_invariant && p.t_invariant && p.dim == 4);
    }

    #[test]
    fn example_j_is_j_but_not_phi_invariant() {
        let p = profile("darboux-J-noninvariant", None, "example-j");
        assert!(p.j_invariant && !p.phi_invariant && !p.t_invariant);
        assert_eq!(p.reeb_tangent, [false, false]);
        // nonvanishing away from x1 = 0 only
        assert!(!p.warnings.is_empty());
    }

    #[test]
    fn darboux_characteristic_leaves() {
        let p = profile("darboux", Some((1, 1)), "tf1");
        assert_eq!(p.position, ReebPosition::TangentZ2OrthogonalZ1);
        let p = profile("darboux", Some((1, 1)), "tg1");
        assert_eq!(p.position, ReebPosition::TangentBoth);
    }

    #[test]
    fn nonvanishing_kinds() {
        let (s, _) = corpus_subframe("heis6", None, "heis6-factor");
        let probes = test_probes(&s);
        let c = s.ambient().coordinates();
        assert_eq!(nonvanishing(&ScalarExpr::int(3), &probes), Nonvanishing::Constant);
        assert_eq!(nonvanishing(&ScalarExpr::zero(), &probes), Nonvanishing::IdenticallyZero);
        assert_eq!(nonvanishing(&c.parse("1 + x1^2").unwrap(), &probes), Nonvanishing::Probed);
        assert_eq!(nonvanishing(&c.parse("x1").unwrap(), &probes), Nonvanishing::VanishesAt(0));
    }
}
