use crate::classify::Label;
use crate::error::{Error, Result};

/// Overall and per-class accuracy. A class absent from `actual` has a
/// `NaN` rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Accuracy {
    pub overall: f64,
    pub male: f64,
    pub female: f64,
}

pub fn accuracies(predicted: &[Label], actual: &[Label]) -> Result<Accuracy> {
    if predicted.len() != actual.len() {
        return Err(Error::DimensionMismatch {
            expected: actual.len(),
            actual: predicted.len(),
        });
    }
    if actual.is_empty() {
        return Err(Error::invalid("accuracy of an empty labelling"));
    }
    let rate = |class: Option<Label>| {
        let (mut hit, mut total) = (0usize, 0usize);
        for (p, a) in predicted.iter().zip(actual) {
            if class.is_none_or(|c| c == *a) {
                total += 1;
                hit += usize::from(p == a);
            }
        }
        if total == 0 {
            f64::NAN
        } else {
            hit as f64 / total as f64
        }
    };
    Ok(Accuracy {
        overall: rate(None),
        male: rate(Some(Label::Positive)),
        female: rate(Some(Label::Negative)),
    })
}
