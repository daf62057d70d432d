use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use super::GrayImage;
use crate::error::{Error, Result};

/// Identifier of the generator behind [`add_gaussian_noise`], recorded in
/// experiment reports so noisy runs can be replayed.
pub const NOISE_RNG_ALGORITHM: &str = "chacha8-seed_from_u64+rand_distr-normal";

/// Additive white Gaussian noise on the normalized `[0, 1]` intensity scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec {
    pub mean: f64,
    pub variance: f64,
    pub seed: u64,
}

impl NoiseSpec {
    pub fn new(mean: f64, variance: f64, seed: u64) -> Result<Self> {
        let spec = Self {
            mean,
            variance,
            seed,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.mean.is_finite() {
            return Err(Error::invalid("noise mean must be finite"));
        }
        if !(self.variance.is_finite() && self.variance >= 0.0) {
            return Err(Error::invalid(format!(
                "noise variance must be a non-negative number, got {}",
                self.variance
            )));
        }
        Ok(())
    }

    /// Same distribution, different seed.
    pub fn with_seed(self, seed: u64) -> Self {
        Self { seed, ..self }
    }
}

/// Adds `Normal(mean, variance)` noise to every pixel in normalized units and
/// re-quantizes: `clamp(round((p/255 + n)·255), 0, 255)`, rounding half away
/// from zero. The output is a pure function of `(img, spec)`.
pub fn add_gaussian_noise(img: &GrayImage, spec: &NoiseSpec) -> Result<GrayImage> {
    spec.validate()?;
    let normal = Normal::new(spec.mean, spec.variance.sqrt())
        .map_err(|e| Error::invalid(format!("noise distribution: {e}")))?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let pixels = img
        .pixels()
        .iter()
        .map(|&p| {
            let n: f64 = normal.sample(&mut rng);
            ((f64::from(p) / 255.0 + n) * 255.0)
                .round()
                .clamp(0.0, 255.0) as u8
        })
        .collect();
    GrayImage::new(img.width(), img.height(), pixels)
}
