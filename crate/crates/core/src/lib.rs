//! Gradient Direction Pattern (GDP) texture descriptors built on Kirsch
//! compass edge responses, with LBP baselines, block-histogram feature
//! vectors, a binary linear SVM, a chi-square prototype classifier and an
//! evaluation harness for block-size sweeps and noise-robustness runs.

pub mod classify;
pub mod descriptors;
pub mod error;
pub mod eval;
pub mod features;
pub mod image;

pub use classify::{
    chi_square_distance, svm_train, ChiSquarePrototypes, Label, LinearSvmModel, TrainConfig,
};
pub use descriptors::{GdpCode, KirschResponses, LbpCode, Neighborhood};
pub use error::{Error, Result};
pub use features::{feature_vector, BlockGrid, DescriptorKind, FeatureVector};
pub use image::{GrayImage, NoiseSpec, SyntheticSpec};
