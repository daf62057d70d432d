use std::collections::HashSet;
use std::fs;
use std::path::{Path, PathBuf};

use crate::classify::Label;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestEntry {
    pub path: PathBuf,
    pub label: Label,
}

/// Labelled image list, read from a `path,label` CSV.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DatasetManifest {
    pub entries: Vec<ManifestEntry>,
}

impl DatasetManifest {
    pub fn new(entries: Vec<ManifestEntry>) -> Result<Self> {
        let mut seen = HashSet::new();
        for e in &entries {
            if e.path.as_os_str().is_empty() {
                return Err(Error::invalid("manifest contains an empty path"));
            }
            if !seen.insert(&e.path) {
                return Err(Error::invalid(format!(
                    "manifest lists {} more than once",
                    e.path.display()
                )));
            }
        }
        Ok(Self { entries })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn labels(&self) -> Vec<Label> {
        self.entries.iter().map(|e| e.label).collect()
    }

    pub fn class_count(&self, label: Label) -> usize {
        self.entries.iter().filter(|e| e.label == label).count()
    }
}

fn csv_error(path: &Path, e: impl std::fmt::Display) -> Error {
    Error::Csv {
        path: path.to_path_buf(),
        message: e.to_string(),
    }
}

/// Reads a manifest CSV. Relative image paths are resolved against the
/// manifest's own directory.
pub fn read_manifest(path: impl AsRef<Path>) -> Result<DatasetManifest> {
    let path = path.as_ref();
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let base = path.parent().unwrap_or(Path::new(""));
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(file);
    let headers = reader.headers().map_err(|e| csv_error(path, e))?.clone();
    if headers.iter().collect::<Vec<_>>() != ["path", "label"] {
        return Err(csv_error(path, "manifest header must be `path,label`"));
    }
    let mut entries = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| csv_error(path, e))?;
        let label = record[1]
            .parse::<Label>()
            .map_err(|e| csv_error(path, format!("row {}: {e}", line + 1)))?;
        let image = PathBuf::from(&record[0]);
        let image = if image.is_relative() && !record[0].is_empty() {
            base.join(image)
        } else {
            image
        };
        entries.push(ManifestEntry { path: image, label });
    }
    DatasetManifest::new(entries)
}

/// Writes a manifest CSV with paths exactly as stored in the entries.
pub fn write_manifest(path: impl AsRef<Path>, manifest: &DatasetManifest) -> Result<()> {
    let path = path.as_ref();
    let mut writer = csv::Writer::from_path(path).map_err(|e| csv_error(path, e))?;
    writer
        .write_record(["path", "label"])
        .map_err(|e| csv_error(path, e))?;
    for e in &manifest.entries {
        let p = e.path.to_string_lossy();
        writer
            .write_record([p.as_ref(), e.label.name()])
            .map_err(|e| csv_error(path, e))?;
    }
    writer.flush().map_err(|e| Error::io(path, e))
}

/// Labelled feature rows, as exchanged through the feature CSV
/// (`label,f1,...,fd`).
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureTable {
    pub labels: Vec<Label>,
    pub rows: Vec<Vec<f64>>,
}

impl FeatureTable {
    pub fn dim(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }
}

pub fn write_feature_csv(path: impl AsRef<Path>, table: &FeatureTable) -> Result<()> {
    let path = path.as_ref();
    let dim = table.dim();
    let mut writer = csv::Writer::from_path(path).map_err(|e| csv_error(path, e))?;
    let header = std::iter::once("label".to_string()).chain((1..=dim).map(|i| format!("f{i}")));
    writer
        .write_record(header)
        .map_err(|e| csv_error(path, e))?;
    for (label, row) in table.labels.iter().zip(&table.rows) {
        if row.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: row.len(),
            });
        }
        let fields = std::iter::once(label.name().to_string())
            .chain(row.iter().map(|v| format!("{v:.16e}")));
        writer
            .write_record(fields)
            .map_err(|e| csv_error(path, e))?;
    }
    writer.flush().map_err(|e| Error::io(path, e))
}

pub fn read_feature_csv(path: impl AsRef<Path>) -> Result<FeatureTable> {
    let path = path.as_ref();
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(file);
    let headers = reader.headers().map_err(|e| csv_error(path, e))?.clone();
    if headers.get(0) != Some("label") {
        return Err(csv_error(path, "feature header must start with `label`"));
    }
    let dim = headers.len() - 1;
    let mut table = FeatureTable {
        labels: Vec::new(),
        rows: Vec::new(),
    };
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| csv_error(path, e))?;
        let row_err = |msg: String| csv_error(path, format!("row {}: {msg}", line + 1));
        table.labels.push(
            record[0]
                .parse::<Label>()
                .map_err(|e| row_err(e.to_string()))?,
        );
        let row = record
            .iter()
            .skip(1)
            .map(|v| {
                v.parse::<f64>()
                    .map_err(|_| row_err(format!("bad value {v:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        if row.len() != dim {
            return Err(row_err(format!("{} values, header has {dim}", row.len())));
        }
        table.rows.push(row);
    }
    Ok(table)
}
