//! Check outcomes shared by every verifier.

use serde::{Deserialize, Serialize};

use crate::scalar::{Coordinates, ScalarExpr};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Warn,
    Skipped,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Warn => "warn",
            Verdict::Skipped => "skipped",
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One certified (or refuted) statement with its witness text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub id: String,
    pub verdict: Verdict,
    pub witness: String,
}

impl Check {
    pub fn new(id: impl Into<String>, verdict: Verdict, witness: impl Into<String>) -> Self {
        Check { id: id.into(), verdict, witness: witness.into() }
    }

    pub fn pass(id: impl Into<String>, witness: impl Into<String>) -> Self {
        Check::new(id, Verdict::Pass, witness)
    }

    pub fn fail(id: impl Into<String>, witness: impl Into<String>) -> Self {
        Check::new(id, Verdict::Fail, witness)
    }

    pub fn warn(id: impl Into<String>, witness: impl Into<String>) -> Self {
        Check::new(id, Verdict::Warn, witness)
    }

    pub fn skipped(id: impl Into<String>, witness: impl Into<String>) -> Self {
        Check::new(id, Verdict::Skipped, witness)
    }

    pub fn from_bool(id: impl Into<String>, ok: bool, witness: impl Into<String>) -> Self {
        Check::new(id, if ok { Verdict::Pass } else { Verdict::Fail }, witness)
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn failed(&self) -> bool {
        self.verdict == Verdict::Fail
    }
}

/// Pass iff every residual is identically zero; the first nonzero residual
/// becomes the witness. Residuals are consumed lazily.
pub fn residual_check<I>(id: &str, coords: &Coordinates, what: &str, residuals: I) -> Check
where
    I: IntoIterator<Item = (String, ScalarExpr)>,
{
    let mut count = 0usize;
    for (label, r) in residuals {
        count += 1;
        if !r.is_zero() {
            return Check::fail(id, format!("{what}: {label} = {}", coords.print(&r)));
        }
    }
    Check::pass(id, format!("{what} ≡ 0 on {count} components"))
}

/// 1-based frame label used in witnesses.
pub fn frame_label(a: usize) -> String {
    format!("e{}", a + 1)
}
