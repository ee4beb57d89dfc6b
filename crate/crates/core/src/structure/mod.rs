//! Structural procedures on matrix spaces: adapted vectors, hurdles,
//! transitive rank, alternators, the characteristic-polynomial choice solver,
//! and instance checkers for the covering, vanishing, splitting and
//! confinement statements.

pub mod adapted;
pub mod alternator;
pub mod choice;
pub mod confinement;
pub mod covering;
pub mod hurdle;
pub mod rank_one;
pub mod splitting;
pub mod transitivity;

use serde::Serialize;

use crate::gf::Fq;
use crate::json::{codes, MatrixJson};
use crate::matrix::Matrix;

pub use adapted::{adapted_scan, Adaptedness, AdaptedScanReport};
pub use alternator::{find_alternator, AlternatorSearch};
pub use choice::{choice_solve, ChoiceOutcome};
pub use covering::{covering_check, vanishing_check, CoverOutcome, HomPoly};
pub use hurdle::{detect_hurdle, HurdleCertificate, HurdleSearch};
pub use splitting::{splitting_check, SplittingMode};
pub use transitivity::{find_intransitivity_veil, is_intransitive, transitive_rank, VeilSearch};

/// Version tag of every enumeration order used by the searches here.
pub const ORDER_VERSION: u32 = 1;

/// Outcome of checking one instance of a structural statement. Instances
/// that do not meet the hypotheses are reported apart from real failures.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum LemmaVerdict {
    Holds,
    HypothesisViolation {
        reason: String,
    },
    Fails {
        reason: String,
        #[serde(skip_serializing_if = "Option::is_none")]
        matrix: Option<MatrixJson>,
        #[serde(skip_serializing_if = "Option::is_none")]
        point: Option<Vec<u32>>,
    },
    Budget {
        required: Option<u64>,
        budget: u64,
    },
}

impl LemmaVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, LemmaVerdict::Holds)
    }

    pub fn is_failure(&self) -> bool {
        matches!(self, LemmaVerdict::Fails { .. })
    }

    pub fn violation(reason: impl Into<String>) -> Self {
        LemmaVerdict::HypothesisViolation { reason: reason.into() }
    }

    pub(crate) fn fails_at_point(reason: impl Into<String>, x: &[Fq]) -> Self {
        LemmaVerdict::Fails { reason: reason.into(), matrix: None, point: Some(codes(x)) }
    }

    pub(crate) fn fails_at_matrix(reason: impl Into<String>, m: &Matrix) -> Self {
        LemmaVerdict::Fails { reason: reason.into(), matrix: Some(MatrixJson::from(m)), point: None }
    }
}
