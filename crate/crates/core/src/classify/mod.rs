//! Binary classifiers: a linear soft-margin SVM and a chi-square
//! nearest-prototype baseline.

mod chi_square;
mod model_file;
mod svm;

pub use chi_square::{chi_square_distance, ChiSquarePrototypes};
pub use model_file::{load_model, read_model_file, save_model, write_model_file, MODEL_MAGIC};
pub use svm::{primal_objective, svm_train, LinearSvmModel, TrainConfig};

use std::fmt;
use std::str::FromStr;

use crate::error::Error;

/// Binary class label. `Positive` is "male" (+1), `Negative` is "female" (−1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Positive,
    Negative,
}

impl Label {
    pub fn sign(self) -> f64 {
        match self {
            Label::Positive => 1.0,
            Label::Negative => -1.0,
        }
    }

    /// `Positive` for scores `>= 0`.
    pub fn from_score(score: f64) -> Label {
        if score >= 0.0 {
            Label::Positive
        } else {
            Label::Negative
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Label::Positive => "male",
            Label::Negative => "female",
        }
    }

    pub fn other(self) -> Label {
        match self {
            Label::Positive => Label::Negative,
            Label::Negative => Label::Positive,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Label {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.trim().to_ascii_lowercase().as_str() {
            "male" | "+1" | "1" | "positive" => Ok(Label::Positive),
            "female" | "-1" | "negative" => Ok(Label::Negative),
            other => Err(Error::invalid(format!(
                "unknown label {other:?} (expected male or female)"
            ))),
        }
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
