//! Contact pairs, contact pair structures, associated metrics, normality and
//! the connection/curvature characterizations of normal metric contact pairs.

mod hermitian;
mod identities;
mod metric;
mod normality;
mod pair;
mod splitting;
mod structure;

pub use hermitian::hermitian_data;
pub use identities::{check_connection_identities, check_curvature_identity};
pub use metric::{validate_metric, MetricContactPair};
pub use normality::{normality, NormalityReport};
pub use pair::{solve_reeb, validate_contact_pair, ContactPair};
pub use splitting::{Projections, ReebSplitting};
pub use structure::{validate_structure, ContactPairStructure};

use crate::frame::{FrameError, PForm};
use crate::linalg::Matrix;
use crate::report::Check;

#[derive(Debug, Clone, thiserror::Error)]
pub enum ContactError {
    #[error(transparent)]
    Frame(#[from] FrameError),
    #[error("invalid input: {}", summarize(.0))]
    Invalid(Vec<Check>),
}

fn summarize(checks: &[Check]) -> String {
    checks.iter().map(|c| format!("{} ({})", c.id, c.witness)).collect::<Vec<_>>().join("; ")
}

/// `D[x][y] = ω(e_x, e_y)` for a 2-form, with the `1/p!` evaluation.
pub(crate) fn two_form_matrix(w: &PForm) -> Matrix {
    let n = w.dim();
    let half = crate::scalar::ScalarExpr::ratio(1, 2);
    Matrix::from_fn(n, n, |x, y| &w.signed_coefficient(&[x, y]) * &half)
}

#[cfg(test)]
pub(crate) fn corpus_pair(name: &str, params: Option<(usize, usize)>) -> MetricContactPair {
    let s = crate::corpus::corpus_build(name, params).unwrap();
    let probes = crate::probe::ProbeSet::new(s.frame.base_point().to_vec(), 1, 8);
    crate::corpus::build_metric_pair(&s, &probes).unwrap()
}
