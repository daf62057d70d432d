//! Dataset manifests, stratified cross-validation, accuracy metrics and
//! the block-size and noise-robustness experiment runners.

mod experiment;
mod io;
mod metrics;
mod report;
mod split;

pub use experiment::{
    block_size_experiment, cross_validate, extract_features, noise_experiment,
    run_block_size_experiment, run_noise_experiment, ClassifierKind, Dataset, ExperimentOptions,
};
pub use io::{
    read_feature_csv, read_manifest, write_feature_csv, write_manifest, DatasetManifest,
    FeatureTable, ManifestEntry,
};
pub use metrics::{accuracies, Accuracy};
pub use report::{ExperimentReport, ReportRow};
pub use split::{stratified_kfold, SplitSpec};
