use rayon::prelude::*;

use super::io::DatasetManifest;
use super::metrics::accuracies;
use super::report::{ExperimentReport, ReportRow};
use super::split::{stratified_kfold, SplitSpec};
use crate::classify::{svm_train, ChiSquarePrototypes, Label, LinearSvmModel, TrainConfig};
use crate::error::{Error, Result};
use crate::features::{feature_vector, DescriptorKind};
use crate::image::{
    add_gaussian_noise, read_pgm_file, GrayImage, NoiseSpec, SyntheticImage, NOISE_RNG_ALGORITHM,
};

/// Decoded images with their labels, in manifest order.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub images: Vec<GrayImage>,
    pub labels: Vec<Label>,
}

impl Dataset {
    /// Decodes every manifest entry. Failures name the offending file.
    pub fn load(manifest: &DatasetManifest) -> Result<Self> {
        let images = manifest
            .entries
            .par_iter()
            .map(|e| read_pgm_file(&e.path))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            images,
            labels: manifest.labels(),
        })
    }

    pub fn from_synthetic(corpus: Vec<SyntheticImage>) -> Self {
        let (labels, images) = corpus.into_iter().map(|s| (s.label, s.image)).unzip();
        Self { images, labels }
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassifierKind {
    Svm,
    /// Nearest class-mean prototype under the chi-square distance.
    ChiSquare,
}

impl ClassifierKind {
    pub fn name(self) -> &'static str {
        match self {
            ClassifierKind::Svm => "svm",
            ClassifierKind::ChiSquare => "chi2",
        }
    }
}

impl std::str::FromStr for ClassifierKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "svm" => Ok(ClassifierKind::Svm),
            "chi2" | "chi-square" | "chisquare" => Ok(ClassifierKind::ChiSquare),
            other => Err(Error::invalid(format!(
                "unknown classifier {other:?} (expected svm or chi2)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExperimentOptions {
    pub split: SplitSpec,
    pub train: TrainConfig,
    pub classifier: ClassifierKind,
}

impl Default for ExperimentOptions {
    fn default() -> Self {
        Self {
            split: SplitSpec::default(),
            train: TrainConfig::default(),
            classifier: ClassifierKind::Svm,
        }
    }
}

enum Trained {
    Svm(LinearSvmModel),
    ChiSquare(ChiSquarePrototypes),
}

impl Trained {
    fn fit(kind: ClassifierKind, x: &[Vec<f64>], y: &[Label], cfg: &TrainConfig) -> Result<Self> {
        Ok(match kind {
            ClassifierKind::Svm => Trained::Svm(svm_train(x, y, cfg)?),
            ClassifierKind::ChiSquare => Trained::ChiSquare(ChiSquarePrototypes::fit(x, y)?),
        })
    }

    fn predict(&self, x: &[f64]) -> Result<Label> {
        match self {
            Trained::Svm(m) => Ok(m.predict(x)?.0),
            Trained::ChiSquare(p) => p.classify(x),
        }
    }
}

/// Feature vectors for every image, in input order.
pub fn extract_features(
    images: &[GrayImage],
    kind: DescriptorKind,
    n: usize,
) -> Result<Vec<Vec<f64>>> {
    images
        .par_iter()
        .map(|img| feature_vector(img, kind, n).map(|f| f.values))
        .collect()
}

/// Trains on every fold's complement and predicts the fold, once per
/// evaluation set. `eval_sets[j][i]` is the representation of sample `i`
/// scored in set `j`; training always uses `train_features`. Returns one
/// pooled prediction vector per evaluation set, in sample order.
fn cross_validate_sets(
    train_features: &[Vec<f64>],
    eval_sets: &[&[Vec<f64>]],
    labels: &[Label],
    folds: &[Vec<usize>],
    options: &ExperimentOptions,
) -> Result<Vec<Vec<Label>>> {
    let mut predictions = vec![vec![Label::Positive; labels.len()]; eval_sets.len()];
    let mut in_fold = vec![false; labels.len()];
    for fold in folds {
        fold.iter().for_each(|&i| in_fold[i] = true);
        let (x, y): (Vec<Vec<f64>>, Vec<Label>) = (0..labels.len())
            .filter(|&i| !in_fold[i])
            .map(|i| (train_features[i].clone(), labels[i]))
            .unzip();
        let model = Trained::fit(options.classifier, &x, &y, &options.train)?;
        for (set, out) in eval_sets.iter().zip(predictions.iter_mut()) {
            for &i in fold {
                out[i] = model.predict(&set[i])?;
            }
        }
        fold.iter().for_each(|&i| in_fold[i] = false);
    }
    Ok(predictions)
}

/// Out-of-fold predictions for every sample.
pub fn cross_validate(
    features: &[Vec<f64>],
    labels: &[Label],
    folds: &[Vec<usize>],
    options: &ExperimentOptions,
) -> Result<Vec<Label>> {
    let mut sets = cross_validate_sets(features, &[features], labels, folds, options)?;
    Ok(sets.remove(0))
}

fn config_id(kind: DescriptorKind, options: &ExperimentOptions, n: usize) -> String {
    format!("{}-{}-n{}", kind.name(), options.classifier.name(), n)
}

fn seed_field(options: &ExperimentOptions, noise: Option<&NoiseSpec>) -> String {
    let mut s = format!("split={}", options.split.seed);
    if options.classifier == ClassifierKind::Svm {
        s.push_str(&format!(";train={}", options.train.seed));
    }
    if let Some(noise) = noise {
        s.push_str(&format!(";noise={}", noise.seed));
    }
    s
}

fn base_metadata(options: &ExperimentOptions, dataset: &Dataset) -> Vec<(String, String)> {
    let mut meta = vec![
        ("gdpkit".into(), env!("CARGO_PKG_VERSION").into()),
        ("samples".into(), dataset.len().to_string()),
        (
            "split".into(),
            format!(
                "{}k-fold k={} seed={}",
                if options.split.stratified {
                    "stratified "
                } else {
                    ""
                },
                options.split.k,
                options.split.seed
            ),
        ),
    ];
    match options.classifier {
        ClassifierKind::Svm => meta.push((
            "classifier".into(),
            format!(
                "linear svm (dual coordinate descent) c={} epochs={} tolerance={} seed={}",
                options.train.c, options.train.epochs, options.train.tolerance, options.train.seed
            ),
        )),
        ClassifierKind::ChiSquare => meta.push((
            "classifier".into(),
            "chi-square nearest class-mean prototype".into(),
        )),
    }
    meta
}

fn row(
    config: String,
    kind: DescriptorKind,
    n: usize,
    predicted: &[Label],
    actual: &[Label],
    noise: bool,
    seed: String,
) -> Result<ReportRow> {
    let acc = accuracies(predicted, actual)?;
    Ok(ReportRow {
        config,
        kind,
        n,
        feature_len: kind.feature_len(n),
        acc_overall: acc.overall,
        acc_male: acc.male,
        acc_female: acc.female,
        noise,
        seed,
    })
}

/// Cross-validated accuracy for every `(kind, n)` pair.
pub fn block_size_experiment(
    dataset: &Dataset,
    kinds: &[DescriptorKind],
    n_list: &[usize],
    options: &ExperimentOptions,
) -> Result<ExperimentReport> {
    let mut report = ExperimentReport {
        title: "Classification accuracy by block grid".into(),
        rows: Vec::new(),
        metadata: base_metadata(options, dataset),
    };
    if kinds.is_empty() || n_list.is_empty() {
        return Ok(report);
    }
    let folds = stratified_kfold(&dataset.labels, &options.split)?;
    for &kind in kinds {
        for &n in n_list {
            let features = extract_features(&dataset.images, kind, n)?;
            let predicted = cross_validate(&features, &dataset.labels, &folds, options)?;
            report.rows.push(row(
                config_id(kind, options, n),
                kind,
                n,
                &predicted,
                &dataset.labels,
                false,
                seed_field(options, None),
            )?);
        }
    }
    Ok(report)
}

/// Trains on clean images and scores each held-out fold twice: as is and
/// with Gaussian noise added. Image `i` is perturbed with seed
/// `noise.seed + i`. Emits a clean row and a `-noisy` row per kind.
pub fn noise_experiment(
    dataset: &Dataset,
    kinds: &[DescriptorKind],
    n: usize,
    noise: &NoiseSpec,
    options: &ExperimentOptions,
) -> Result<ExperimentReport> {
    noise.validate()?;
    let mut report = ExperimentReport {
        title: "Classification accuracy with and without Gaussian noise".into(),
        rows: Vec::new(),
        metadata: base_metadata(options, dataset),
    };
    report.metadata.push((
        "noise".into(),
        format!(
            "gaussian mean={} variance={} seed={} (per image seed+index) rng={}",
            noise.mean, noise.variance, noise.seed, NOISE_RNG_ALGORITHM
        ),
    ));
    report.metadata.push((
        "protocol".into(),
        "train clean, test clean and noisy".into(),
    ));
    if kinds.is_empty() {
        return Ok(report);
    }
    let folds = stratified_kfold(&dataset.labels, &options.split)?;
    let noisy_images = dataset
        .images
        .par_iter()
        .enumerate()
        .map(|(i, img)| {
            add_gaussian_noise(img, &noise.with_seed(noise.seed.wrapping_add(i as u64)))
        })
        .collect::<Result<Vec<_>>>()?;
    for &kind in kinds {
        let clean = extract_features(&dataset.images, kind, n)?;
        let noisy = extract_features(&noisy_images, kind, n)?;
        let predictions =
            cross_validate_sets(&clean, &[&clean, &noisy], &dataset.labels, &folds, options)?;
        let id = config_id(kind, options, n);
        report.rows.push(row(
            id.clone(),
            kind,
            n,
            &predictions[0],
            &dataset.labels,
            false,
            seed_field(options, None),
        )?);
        report.rows.push(row(
            format!("{id}-noisy"),
            kind,
            n,
            &predictions[1],
            &dataset.labels,
            true,
            seed_field(options, Some(noise)),
        )?);
    }
    Ok(report)
}

pub fn run_block_size_experiment(
    manifest: &DatasetManifest,
    kinds: &[DescriptorKind],
    n_list: &[usize],
    options: &ExperimentOptions,
) -> Result<ExperimentReport> {
    block_size_experiment(&Dataset::load(manifest)?, kinds, n_list, options)
}

pub fn run_noise_experiment(
    manifest: &DatasetManifest,
    kinds: &[DescriptorKind],
    n: usize,
    noise: &NoiseSpec,
    options: &ExperimentOptions,
) -> Result<ExperimentReport> {
    noise_experiment(&Dataset::load(manifest)?, kinds, n, noise, options)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::image::{make_synthetic_textures, SyntheticSpec};

    fn corpus(per_class: usize, jitter: f64, seed: u64) -> Dataset {
        Dataset::from_synthetic(
            make_synthetic_textures(&SyntheticSpec {
                images_per_class: per_class,
                image_size: 32,
                grating_period: 8,
                jitter_amplitude: jitter,
                seed,
            })
            .unwrap(),
        )
    }

    #[test]
    fn table_one_lengths() {
        let data = corpus(5, 0.05, 1);
        let report = block_size_experiment(
            &data,
            &[DescriptorKind::Gdp],
            &[7, 9, 11, 13],
            &Default::default(),
        )
        .unwrap();
        let lens: Vec<usize> = report.rows.iter().map(|r| r.feature_len).collect();
        assert_eq!(lens, vec![392, 648, 968, 1352]);
        assert!(report
            .rows
            .iter()
            .all(|r| (0.0..=1.0).contains(&r.acc_overall)));
    }

    #[test]
    fn empty_block_list() {
        let data = corpus(5, 0.0, 1);
        let report =
            block_size_experiment(&data, &[DescriptorKind::Gdp], &[], &Default::default()).unwrap();
        assert!(report.rows.is_empty());
    }

    #[test]
    fn clean_gratings_are_perfectly_separated() {
        let data = corpus(10, 0.0, 4);
        let report =
            block_size_experiment(&data, &[DescriptorKind::Gdp], &[4], &Default::default())
                .unwrap();
        assert_eq!(report.rows[0].acc_overall, 1.0);
    }

    #[test]
    fn zero_variance_noise_changes_nothing() {
        let data = corpus(6, 0.1, 2);
        let noise = NoiseSpec::new(0.0, 0.0, 3).unwrap();
        let report =
            noise_experiment(&data, &DescriptorKind::ALL, 2, &noise, &Default::default()).unwrap();
        assert_eq!(report.rows.len(), 6);
        for pair in report.rows.chunks(2) {
            assert!(!pair[0].noise && pair[1].noise);
            assert_eq!(pair[0].acc_overall, pair[1].acc_overall);
            assert_eq!(pair[1].config, format!("{}-noisy", pair[0].config));
        }
    }

    #[test]
    fn chi_square_classifier_runs() {
        let data = corpus(10, 0.05, 5);
        let options = ExperimentOptions {
            classifier: ClassifierKind::ChiSquare,
            ..Default::default()
        };
        let report = block_size_experiment(&data, &[DescriptorKind::Lbp], &[2], &options).unwrap();
        assert_eq!(report.rows[0].config, "lbp-chi2-n2");
        assert!(report.rows[0].seed == "split=1");
    }

    #[test]
    fn missing_image_is_named() {
        let manifest = DatasetManifest::new(vec![crate::eval::ManifestEntry {
            path: "/nonexistent/face-001.pgm".into(),
            label: Label::Positive,
        }])
        .unwrap();
        let err = Dataset::load(&manifest).unwrap_err();
        assert!(err.to_string().contains("face-001.pgm"), "{err}");
    }
}
