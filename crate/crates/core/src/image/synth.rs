use std::f64::consts::PI;

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::GrayImage;
use crate::classify::Label;
use crate::error::{Error, Result};

/// Parameters of the two-class sinusoidal grating corpus.
///
/// Class A ([`Label::Positive`]) gratings vary along `y` (horizontal
/// stripes); class B ([`Label::Negative`]) vary along `x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SyntheticSpec {
    pub images_per_class: usize,
    pub image_size: usize,
    pub grating_period: usize,
    /// Half-width of the uniform per-pixel jitter, normalized units.
    pub jitter_amplitude: f64,
    pub seed: u64,
}

impl SyntheticSpec {
    pub fn validate(&self) -> Result<()> {
        if self.images_per_class == 0 {
            return Err(Error::invalid("images_per_class must be positive"));
        }
        if self.image_size == 0 {
            return Err(Error::invalid("image_size must be positive"));
        }
        if self.grating_period < 2 || self.grating_period > self.image_size / 2 {
            return Err(Error::invalid(format!(
                "grating_period must lie in [2, {}], got {}",
                self.image_size / 2,
                self.grating_period
            )));
        }
        if !(0.0..=0.5).contains(&self.jitter_amplitude) {
            return Err(Error::invalid(format!(
                "jitter_amplitude must lie in [0, 0.5], got {}",
                self.jitter_amplitude
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticImage {
    pub label: Label,
    /// Phase offset in pixels, drawn uniformly from `[0, period)`.
    pub phase: f64,
    pub image: GrayImage,
}

/// Generates `images_per_class` class-A images followed by as many class-B
/// images. Each pixel is
/// `round(255·clamp(0.5 + 0.25·sin(2π(t + phase)/period) + u, 0, 1))` where
/// `t` is `y` for class A and `x` for class B and `u ~ U[-jitter, jitter]`.
pub fn make_synthetic_textures(spec: &SyntheticSpec) -> Result<Vec<SyntheticImage>> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let period = spec.grating_period as f64;
    let jitter = spec.jitter_amplitude;
    let mut out = Vec::with_capacity(2 * spec.images_per_class);
    for label in [Label::Positive, Label::Negative] {
        for _ in 0..spec.images_per_class {
            let phase = rng.random_range(0.0..period);
            let image = GrayImage::from_fn(spec.image_size, spec.image_size, |x, y| {
                let t = if label == Label::Positive { y } else { x } as f64;
                let u = if jitter > 0.0 {
                    rng.random_range(-jitter..=jitter)
                } else {
                    0.0
                };
                let v = 0.5 + 0.25 * (2.0 * PI * (t + phase) / period).sin() + u;
                (255.0 * v.clamp(0.0, 1.0)).round() as u8
            })?;
            out.push(SyntheticImage {
                label,
                phase,
                image,
            });
        }
    }
    Ok(out)
}
