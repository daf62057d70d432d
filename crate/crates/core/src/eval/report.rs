use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::features::DescriptorKind;

#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    /// Unique key of the configuration, e.g. `gdp-svm-n9-noisy`.
    pub config: String,
    pub kind: DescriptorKind,
    pub n: usize,
    pub feature_len: usize,
    pub acc_overall: f64,
    pub acc_male: f64,
    pub acc_female: f64,
    pub noise: bool,
    /// Every seed that influenced the row, `name=value` pairs joined by `;`.
    pub seed: String,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ExperimentReport {
    pub title: String,
    pub rows: Vec<ReportRow>,
    /// Run settings and environment, in insertion order.
    pub metadata: Vec<(String, String)>,
}

const CSV_HEADER: [&str; 9] = [
    "config",
    "kind",
    "n",
    "feature_len",
    "acc_overall",
    "acc_male",
    "acc_female",
    "noise",
    "seed",
];

fn percent(v: f64) -> String {
    if v.is_nan() {
        "-".into()
    } else {
        format!("{:.2}%", 100.0 * v)
    }
}

impl ExperimentReport {
    pub fn row(&self, config: &str) -> Option<&ReportRow> {
        self.rows.iter().find(|r| r.config == config)
    }

    pub fn to_csv(&self) -> String {
        let mut writer = csv::Writer::from_writer(Vec::new());
        let _ = writer.write_record(CSV_HEADER);
        for r in &self.rows {
            let _ = writer.write_record([
                r.config.clone(),
                r.kind.name().to_string(),
                r.n.to_string(),
                r.feature_len.to_string(),
                r.acc_overall.to_string(),
                r.acc_male.to_string(),
                r.acc_female.to_string(),
                r.noise.to_string(),
                r.seed.clone(),
            ]);
        }
        String::from_utf8(writer.into_inner().unwrap_or_default()).unwrap_or_default()
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_csv()).map_err(|e| Error::io(path, e))
    }

    /// Plain-text table with accuracies as percentages to two decimals.
    /// Reports holding clean/noisy pairs get an extra paired summary.
    pub fn render(&self) -> String {
        let mut out = String::new();
        if !self.title.is_empty() {
            let _ = writeln!(out, "{}\n", self.title);
        }
        let header = [
            "Config", "Kind", "Blocks", "Length", "Overall", "Male", "Female", "Noise",
        ];
        let body: Vec<[String; 8]> = self
            .rows
            .iter()
            .map(|r| {
                [
                    r.config.clone(),
                    kind_label(r.kind).to_string(),
                    format!("{0}x{0}", r.n),
                    r.feature_len.to_string(),
                    percent(r.acc_overall),
                    percent(r.acc_male),
                    percent(r.acc_female),
                    if r.noise { "yes" } else { "no" }.to_string(),
                ]
            })
            .collect();
        write_table(&mut out, &header.map(String::from), &body);

        let paired: Vec<[String; 4]> = self
            .rows
            .iter()
            .filter(|r| !r.noise)
            .filter_map(|clean| {
                let noisy = self.row(&format!("{}-noisy", clean.config))?;
                Some([
                    kind_label(clean.kind).to_string(),
                    percent(clean.acc_overall),
                    percent(noisy.acc_overall),
                    format!("{:+.2}", 100.0 * (noisy.acc_overall - clean.acc_overall)),
                ])
            })
            .collect();
        if !paired.is_empty() {
            out.push('\n');
            let header = ["Method", "No noise", "With noise", "Change (pts)"].map(String::from);
            write_table(&mut out, &header, &paired);
        }

        if !self.metadata.is_empty() {
            out.push('\n');
            for (k, v) in &self.metadata {
                let _ = writeln!(out, "{k}: {v}");
            }
        }
        out
    }
}

fn kind_label(kind: DescriptorKind) -> &'static str {
    match kind {
        DescriptorKind::Gdp => "GDP",
        DescriptorKind::Lbp => "LBP",
        DescriptorKind::LbpUniform => "LBP_U",
    }
}

fn write_table<const N: usize>(out: &mut String, header: &[String; N], body: &[[String; N]]) {
    let mut widths = header.each_ref().map(|h| h.len());
    for row in body {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let mut line = |cells: &[String; N]| {
        let padded: Vec<String> = cells
            .iter()
            .zip(widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect();
        let _ = writeln!(out, "{}", padded.join("  ").trim_end());
    };
    line(header);
    line(&widths.map(|w| "-".repeat(w)));
    body.iter().for_each(line);
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(config: &str, noise: bool, acc: f64) -> ReportRow {
        ReportRow {
            config: config.into(),
            kind: DescriptorKind::Gdp,
            n: 9,
            feature_len: 648,
            acc_overall: acc,
            acc_male: 0.9594,
            acc_female: 0.9598,
            noise,
            seed: "split=1".into(),
        }
    }

    #[test]
    fn csv_layout() {
        let report = ExperimentReport {
            rows: vec![row("gdp-svm-n9", false, 0.9596)],
            ..Default::default()
        };
        assert_eq!(
            report.to_csv(),
            "config,kind,n,feature_len,acc_overall,acc_male,acc_female,noise,seed\n\
             gdp-svm-n9,gdp,9,648,0.9596,0.9594,0.9598,false,split=1\n"
        );
    }

    #[test]
    fn rendered_percentages_and_pairs() {
        let report = ExperimentReport {
            title: "noise".into(),
            rows: vec![
                row("gdp-svm-n9", false, 0.9596),
                row("gdp-svm-n9-noisy", true, 0.9515),
            ],
            metadata: vec![("split".into(), "k=5".into())],
        };
        let text = report.render();
        assert!(text.contains("95.96%"));
        assert!(text.contains("95.15%"));
        assert!(text.contains("-0.81"));
        assert!(text.contains("split: k=5"));
    }
}
