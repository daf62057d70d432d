use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{dot, Label};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainConfig {
    /// Soft-margin penalty on the summed hinge loss.
    pub c: f64,
    /// Maximum passes over the training set.
    pub epochs: usize,
    /// Stop once the relative change of the primal objective between two
    /// epochs falls below this.
    pub tolerance: f64,
    /// Seeds the per-epoch visiting order.
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            c: 1.0,
            epochs: 1000,
            tolerance: 1e-6,
            seed: 0,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.c.is_finite() && self.c > 0.0) {
            return Err(Error::invalid(format!(
                "c must be positive, got {}",
                self.c
            )));
        }
        if self.epochs == 0 {
            return Err(Error::invalid("epochs must be positive"));
        }
        if !(self.tolerance.is_finite() && self.tolerance > 0.0) {
            return Err(Error::invalid(format!(
                "tolerance must be positive, got {}",
                self.tolerance
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearSvmModel {
    pub weights: Vec<f64>,
    pub bias: f64,
    pub config: TrainConfig,
    pub epochs_run: usize,
    /// Primal objective at `w = 0, b = 0`, i.e. `c·n`.
    pub initial_objective: f64,
    pub final_objective: f64,
}

impl LinearSvmModel {
    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    /// Decision value `w·x + b`.
    pub fn score(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: x.len(),
            });
        }
        Ok(dot(&self.weights, x) + self.bias)
    }

    /// Label and score; a score of exactly zero is `Positive`.
    pub fn predict(&self, x: &[f64]) -> Result<(Label, f64)> {
        let s = self.score(x)?;
        Ok((Label::from_score(s), s))
    }
}

/// `½(‖w‖² + b²) + c·Σ max(0, 1 − yᵢ(w·xᵢ + b))`.
///
/// The bias is treated as the weight of a constant unit feature, so it is
/// regularized along with `w`.
pub fn primal_objective(
    weights: &[f64],
    bias: f64,
    features: &[Vec<f64>],
    labels: &[Label],
    c: f64,
) -> f64 {
    let reg = 0.5 * (dot(weights, weights) + bias * bias);
    let hinge: f64 = features
        .iter()
        .zip(labels)
        .map(|(x, y)| (1.0 - y.sign() * (dot(weights, x) + bias)).max(0.0))
        .sum();
    reg + c * hinge
}

/// Trains a linear soft-margin SVM by dual coordinate descent on the
/// hinge-loss dual (box constraint `0 ≤ αᵢ ≤ c`), visiting samples in a
/// freshly shuffled order every epoch. The returned weights are the
/// end-of-epoch iterate with the lowest primal objective (never worse than
/// `w = 0`). The run is bit-for-bit reproducible for identical inputs and
/// seed.
pub fn svm_train(
    features: &[Vec<f64>],
    labels: &[Label],
    config: &TrainConfig,
) -> Result<LinearSvmModel> {
    config.validate()?;
    if features.len() != labels.len() {
        return Err(Error::invalid(format!(
            "{} feature rows but {} labels",
            features.len(),
            labels.len()
        )));
    }
    if features.len() < 2 {
        return Err(Error::invalid("training needs at least two samples"));
    }
    if !(labels.contains(&Label::Positive) && labels.contains(&Label::Negative)) {
        return Err(Error::invalid("training data must contain both classes"));
    }
    let dim = features[0].len();
    if let Some(bad) = features.iter().find(|row| row.len() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            actual: bad.len(),
        });
    }
    if features.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::invalid("features must be finite"));
    }

    let c = config.c;
    let n = features.len();
    // diagonal of the kernel matrix, including the constant bias feature
    let q_diag: Vec<f64> = features.iter().map(|x| dot(x, x) + 1.0).collect();
    let ys: Vec<f64> = labels.iter().map(|l| l.sign()).collect();
    let mut alpha = vec![0.0; n];
    let mut w = vec![0.0; dim];
    let mut b = 0.0;
    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);

    let initial_objective = primal_objective(&w, b, features, labels, c);
    let mut objective = initial_objective;
    // dual iterates do not decrease the primal monotonically; keep the best
    let mut best = (w.clone(), b, initial_objective);
    let mut epochs_run = 0;

    for _ in 0..config.epochs {
        order.shuffle(&mut rng);
        epochs_run += 1;
        let mut max_violation = 0.0f64;
        for &i in &order {
            let x = &features[i];
            let y = ys[i];
            let g = y * (dot(&w, x) + b) - 1.0;
            let projected = if alpha[i] <= 0.0 {
                g.min(0.0)
            } else if alpha[i] >= c {
                g.max(0.0)
            } else {
                g
            };
            max_violation = max_violation.max(projected.abs());
            if projected != 0.0 {
                let old = alpha[i];
                alpha[i] = (old - g / q_diag[i]).clamp(0.0, c);
                let step = (alpha[i] - old) * y;
                if step != 0.0 {
                    w.iter_mut().zip(x).for_each(|(wj, xj)| *wj += step * xj);
                    b += step;
                }
            }
        }
        let next = primal_objective(&w, b, features, labels, c);
        let change = (objective - next).abs();
        objective = next;
        if objective < best.2 {
            best = (w.clone(), b, objective);
        }
        if max_violation == 0.0 || change <= config.tolerance * objective.abs().max(1.0) {
            break;
        }
    }

    let (weights, bias, final_objective) = best;
    Ok(LinearSvmModel {
        weights,
        bias,
        config: *config,
        epochs_run,
        initial_objective,
        final_objective,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hard(seed: u64) -> TrainConfig {
        TrainConfig {
            c: 1e4,
            seed,
            ..TrainConfig::default()
        }
    }

    #[test]
    fn two_point_hard_margin() {
        let x = vec![vec![1.0], vec![-1.0]];
        let y = [Label::Positive, Label::Negative];
        let model = svm_train(&x, &y, &hard(3)).unwrap();
        let (lp, sp) = model.predict(&[1.0]).unwrap();
        let (ln, sn) = model.predict(&[-1.0]).unwrap();
        assert_eq!((lp, ln), (Label::Positive, Label::Negative));
        assert!((sp - 1.0).abs() <= 0.05, "{sp}");
        assert!((sn + 1.0).abs() <= 0.05, "{sn}");
    }

    #[test]
    fn rejects_bad_input() {
        let x = vec![vec![1.0], vec![2.0]];
        let cfg = TrainConfig::default();
        assert!(svm_train(&x, &[Label::Positive; 2], &cfg).is_err());
        assert!(svm_train(&x[..1], &[Label::Positive], &cfg).is_err());
        let ragged = vec![vec![1.0], vec![2.0, 3.0]];
        assert!(matches!(
            svm_train(&ragged, &[Label::Positive, Label::Negative], &cfg),
            Err(Error::DimensionMismatch { .. })
        ));
        let bad_c = TrainConfig { c: 0.0, ..cfg };
        assert!(svm_train(&x, &[Label::Positive, Label::Negative], &bad_c).is_err());
    }

    #[test]
    fn predict_rules() {
        let zero = LinearSvmModel {
            weights: vec![0.0; 3],
            bias: 0.0,
            config: TrainConfig::default(),
            epochs_run: 0,
            initial_objective: 0.0,
            final_objective: 0.0,
        };
        assert_eq!(
            zero.predict(&[4.0, -2.0, 9.0]).unwrap(),
            (Label::Positive, 0.0)
        );
        assert!(zero.predict(&[1.0]).is_err());

        let unit = LinearSvmModel {
            weights: vec![1.0],
            ..zero
        };
        assert_eq!(unit.predict(&[-1.0]).unwrap(), (Label::Negative, -1.0));
        assert_eq!(
            unit.score(&[6.0]).unwrap(),
            2.0 * unit.score(&[3.0]).unwrap()
        );
    }

    #[test]
    fn objective_decreases_and_is_reproducible() {
        let x: Vec<Vec<f64>> = (0..40)
            .map(|i| vec![(i as f64 * 0.37).sin(), (i as f64 * 0.11).cos()])
            .collect();
        let y: Vec<Label> = (0..40)
            .map(|i| {
                if i % 3 == 0 {
                    Label::Negative
                } else {
                    Label::Positive
                }
            })
            .collect();
        let cfg = TrainConfig {
            seed: 9,
            ..TrainConfig::default()
        };
        let a = svm_train(&x, &y, &cfg).unwrap();
        let b = svm_train(&x, &y, &cfg).unwrap();
        assert!(a.final_objective <= a.initial_objective);
        assert_eq!(a.weights, b.weights);
        assert_eq!(a.bias.to_bits(), b.bias.to_bits());
        assert_eq!(
            a.final_objective,
            primal_objective(&a.weights, a.bias, &x, &y, cfg.c)
        );
    }
}
