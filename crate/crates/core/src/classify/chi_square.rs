use super::Label;
use crate::error::{Error, Result};

/// `Σ (a−b)²/(a+b)`, with coordinates where `a + b = 0` contributing 0.
pub fn chi_square_distance(h1: &[f64], h2: &[f64]) -> Result<f64> {
    if h1.len() != h2.len() {
        return Err(Error::DimensionMismatch {
            expected: h1.len(),
            actual: h2.len(),
        });
    }
    if h1.iter().chain(h2).any(|&v| v.is_nan() || v < 0.0) {
        return Err(Error::invalid(
            "chi-square distance needs non-negative entries",
        ));
    }
    Ok(h1
        .iter()
        .zip(h2)
        .map(|(&a, &b)| {
            let s = a + b;
            if s == 0.0 {
                0.0
            } else {
                (a - b) * (a - b) / s
            }
        })
        .sum())
}

/// Class-mean histograms; a sample takes the label of the nearer prototype.
#[derive(Debug, Clone, PartialEq)]
pub struct ChiSquarePrototypes {
    pub positive: Vec<f64>,
    pub negative: Vec<f64>,
}

impl ChiSquarePrototypes {
    pub fn new(positive: Vec<f64>, negative: Vec<f64>) -> Result<Self> {
        if positive.len() != negative.len() {
            return Err(Error::DimensionMismatch {
                expected: positive.len(),
                actual: negative.len(),
            });
        }
        Ok(Self { positive, negative })
    }

    /// Averages the rows of each class.
    pub fn fit(features: &[Vec<f64>], labels: &[Label]) -> Result<Self> {
        if features.len() != labels.len() {
            return Err(Error::invalid(format!(
                "{} feature rows but {} labels",
                features.len(),
                labels.len()
            )));
        }
        let dim = features.first().map_or(0, Vec::len);
        let mean = |class: Label| -> Result<Vec<f64>> {
            let mut sum = vec![0.0; dim];
            let mut count = 0usize;
            for (row, _) in features.iter().zip(labels).filter(|(_, &l)| l == class) {
                if row.len() != dim {
                    return Err(Error::DimensionMismatch {
                        expected: dim,
                        actual: row.len(),
                    });
                }
                sum.iter_mut().zip(row).for_each(|(s, v)| *s += v);
                count += 1;
            }
            if count == 0 {
                return Err(Error::invalid(format!(
                    "no training samples labelled {class}"
                )));
            }
            Ok(sum.into_iter().map(|s| s / count as f64).collect())
        };
        Self::new(mean(Label::Positive)?, mean(Label::Negative)?)
    }

    pub fn dim(&self) -> usize {
        self.positive.len()
    }

    /// Ties go to `Positive`.
    pub fn classify(&self, x: &[f64]) -> Result<Label> {
        let dp = chi_square_distance(&self.positive, x)?;
        let dn = chi_square_distance(&self.negative, x)?;
        Ok(if dp <= dn {
            Label::Positive
        } else {
            Label::Negative
        })
    }
}
