use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::{LinearSvmModel, TrainConfig};
use crate::error::{Error, ModelFormatError, Result};

pub const MODEL_MAGIC: &str = "GDPKIT-SVM v1";

// 17 significant digits round-trip every f64 exactly
fn real(v: f64) -> String {
    format!("{v:.16e}")
}

/// Text model file:
///
/// ```text
/// GDPKIT-SVM v1
/// dim=<d>
/// bias=<real>
/// <d space-separated weights>
/// meta.<key>=<value>
/// ```
pub fn save_model(model: &LinearSvmModel) -> Vec<u8> {
    let mut out = String::new();
    let _ = writeln!(out, "{MODEL_MAGIC}");
    let _ = writeln!(out, "dim={}", model.dim());
    let _ = writeln!(out, "bias={}", real(model.bias));
    let weights: Vec<String> = model.weights.iter().map(|&w| real(w)).collect();
    let _ = writeln!(out, "{}", weights.join(" "));
    let cfg = &model.config;
    let _ = writeln!(out, "meta.c={}", real(cfg.c));
    let _ = writeln!(out, "meta.epochs={}", cfg.epochs);
    let _ = writeln!(out, "meta.tolerance={}", real(cfg.tolerance));
    let _ = writeln!(out, "meta.seed={}", cfg.seed);
    let _ = writeln!(out, "meta.epochs_run={}", model.epochs_run);
    let _ = writeln!(
        out,
        "meta.initial_objective={}",
        real(model.initial_objective)
    );
    let _ = writeln!(out, "meta.final_objective={}", real(model.final_objective));
    out.into_bytes()
}

fn field<'a>(line: Option<&'a str>, key: &str) -> std::result::Result<&'a str, ModelFormatError> {
    line.and_then(|l| l.strip_prefix(key))
        .and_then(|l| l.strip_prefix('='))
        .ok_or_else(|| ModelFormatError::Malformed(format!("expected `{key}=` line")))
}

fn parse<T: std::str::FromStr>(s: &str, what: &str) -> std::result::Result<T, ModelFormatError> {
    s.trim()
        .parse()
        .map_err(|_| ModelFormatError::Malformed(format!("{what}: {s:?}")))
}

pub fn load_model(bytes: &[u8]) -> std::result::Result<LinearSvmModel, ModelFormatError> {
    let text = std::str::from_utf8(bytes)
        .map_err(|_| ModelFormatError::Malformed("model file is not UTF-8".into()))?;
    let mut lines = text.lines();
    let magic = lines.next().unwrap_or("").trim_end();
    if magic != MODEL_MAGIC {
        return Err(match magic.strip_prefix("GDPKIT-SVM ") {
            Some(version) => ModelFormatError::Version(version.to_string()),
            None => ModelFormatError::BadMagic(magic.to_string()),
        });
    }
    let dim: usize = parse(field(lines.next(), "dim")?, "dim")?;
    let bias: f64 = parse(field(lines.next(), "bias")?, "bias")?;
    let weights_line = lines.next().ok_or(ModelFormatError::Payload {
        declared: dim,
        found: 0,
    })?;
    let weights = weights_line
        .split_ascii_whitespace()
        .map(|w| parse::<f64>(w, "weight"))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    if weights.len() != dim {
        return Err(ModelFormatError::Payload {
            declared: dim,
            found: weights.len(),
        });
    }

    let mut model = LinearSvmModel {
        weights,
        bias,
        config: TrainConfig::default(),
        epochs_run: 0,
        initial_objective: f64::NAN,
        final_objective: f64::NAN,
    };
    for line in lines.filter(|l| !l.trim().is_empty()) {
        let (key, value) = line
            .strip_prefix("meta.")
            .and_then(|l| l.split_once('='))
            .ok_or_else(|| ModelFormatError::Malformed(format!("unexpected line {line:?}")))?;
        match key {
            "c" => model.config.c = parse(value, key)?,
            "epochs" => model.config.epochs = parse(value, key)?,
            "tolerance" => model.config.tolerance = parse(value, key)?,
            "seed" => model.config.seed = parse(value, key)?,
            "epochs_run" => model.epochs_run = parse(value, key)?,
            "initial_objective" => model.initial_objective = parse(value, key)?,
            "final_objective" => model.final_objective = parse(value, key)?,
            // unknown metadata is carried by newer writers; skip it
            _ => {}
        }
    }
    Ok(model)
}

pub fn write_model_file(path: impl AsRef<Path>, model: &LinearSvmModel) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, save_model(model)).map_err(|e| Error::io(path, e))
}

pub fn read_model_file(path: impl AsRef<Path>) -> Result<LinearSvmModel> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    Ok(load_model(&bytes)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model() -> LinearSvmModel {
        LinearSvmModel {
            weights: vec![0.1, -2.5e-17, 1.0 / 3.0, 12345.678],
            bias: -0.7,
            config: TrainConfig {
                c: 10.0,
                epochs: 50,
                tolerance: 1e-7,
                seed: u64::MAX,
            },
            epochs_run: 12,
            initial_objective: 40.0,
            final_objective: 0.123456789,
        }
    }

    #[test]
    fn round_trip_is_exact() {
        let m = model();
        let bytes = save_model(&m);
        assert!(bytes.starts_with(b"GDPKIT-SVM v1\ndim=4\nbias="));
        assert_eq!(load_model(&bytes).unwrap(), m);
    }

    #[test]
    fn corrupt_magic() {
        let mut bytes = save_model(&model());
        bytes[0] = b'X';
        assert!(matches!(
            load_model(&bytes),
            Err(ModelFormatError::BadMagic(_))
        ));
        let v2 = String::from_utf8(save_model(&model()))
            .unwrap()
            .replacen("v1", "v2", 1);
        assert_eq!(
            load_model(v2.as_bytes()),
            Err(ModelFormatError::Version("v2".into()))
        );
    }

    #[test]
    fn truncated_weights() {
        let text = String::from_utf8(save_model(&model())).unwrap();
        let short = text.replacen("dim=4", "dim=5", 1);
        assert_eq!(
            load_model(short.as_bytes()),
            Err(ModelFormatError::Payload {
                declared: 5,
                found: 4
            })
        );
        let cut: String = text.lines().take(3).collect::<Vec<_>>().join("\n");
        assert!(matches!(
            load_model(cut.as_bytes()),
            Err(ModelFormatError::Payload { .. })
        ));
    }

    #[test]
    fn malformed_fields() {
        assert!(matches!(
            load_model(b"GDPKIT-SVM v1\ndim=x\n"),
            Err(ModelFormatError::Malformed(_))
        ));
        assert!(matches!(
            load_model(b"GDPKIT-SVM v1\ndim=1\nbias=0\n1.0\nmeta.seed=-4\n"),
            Err(ModelFormatError::Malformed(_))
        ));
    }
}
