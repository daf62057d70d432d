use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn gdpkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gdpkit"))
        .args(args)
        .output()
        .expect("spawn gdpkit")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn synth(dir: &Path, per_class: usize, size: usize) {
    let out = gdpkit(&[
        "synth",
        "--per-class",
        &per_class.to_string(),
        "--size",
        &size.to_string(),
        "--seed",
        "7",
        "--out",
        p(dir),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
}

fn header_columns(csv: &Path) -> usize {
    let text = fs::read_to_string(csv).unwrap();
    text.lines().next().unwrap().split(',').count()
}

#[test]
fn synth_writes_corpus_and_is_deterministic() {
    let tmp = TempDir::new().unwrap();
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    synth(&a, 100, 64);
    synth(&b, 100, 64);
    let pgms = fs::read_dir(&a)
        .unwrap()
        .filter(|e| {
            e.as_ref()
                .unwrap()
                .path()
                .extension()
                .is_some_and(|x| x == "pgm")
        })
        .count();
    assert_eq!(pgms, 200);
    let manifest = fs::read_to_string(a.join("manifest.csv")).unwrap();
    assert_eq!(manifest.lines().count(), 201);
    assert_eq!(
        manifest,
        fs::read_to_string(b.join("manifest.csv")).unwrap()
    );
    for name in ["male-0000.pgm", "female-0099.pgm"] {
        assert_eq!(
            fs::read(a.join(name)).unwrap(),
            fs::read(b.join(name)).unwrap()
        );
    }
}

#[test]
fn synth_validation_and_unwritable_output() {
    let tmp = TempDir::new().unwrap();
    let out = gdpkit(&["synth", "--per-class", "0", "--out", p(tmp.path())]);
    assert_eq!(code(&out), 2);

    let blocker = tmp.path().join("file");
    fs::write(&blocker, "x").unwrap();
    let out = gdpkit(&[
        "synth",
        "--per-class",
        "1",
        "--out",
        p(&blocker.join("sub")),
    ]);
    assert_eq!(code(&out), 2, "{}", stderr(&out));
}

#[test]
fn extract_column_counts_and_errors() {
    let tmp = TempDir::new().unwrap();
    let data = tmp.path().join("data");
    synth(&data, 3, 90);
    let manifest = data.join("manifest.csv");

    let gdp = tmp.path().join("gdp.csv");
    let out = gdpkit(&[
        "extract",
        "--manifest",
        p(&manifest),
        "--kind",
        "gdp",
        "--blocks",
        "9",
        "--out",
        p(&gdp),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert_eq!(header_columns(&gdp), 1 + 648);
    assert_eq!(fs::read_to_string(&gdp).unwrap().lines().count(), 7);

    let lbp = tmp.path().join("lbp.csv");
    let out = gdpkit(&[
        "extract",
        "--manifest",
        p(&manifest),
        "--kind",
        "lbp",
        "--blocks",
        "1",
        "--out",
        p(&lbp),
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(header_columns(&lbp), 1 + 256);

    let out = gdpkit(&[
        "extract",
        "--manifest",
        p(&tmp.path().join("nope.csv")),
        "--out",
        p(&lbp),
    ]);
    assert_eq!(code(&out), 2);

    let broken = tmp.path().join("broken.csv");
    fs::write(
        &broken,
        "path,label\ndata/male-0000.pgm,male\nmissing-face.pgm,female\n",
    )
    .unwrap();
    let out = gdpkit(&["extract", "--manifest", p(&broken), "--out", p(&lbp)]);
    assert_eq!(code(&out), 1);
    assert!(
        stderr(&out).contains("missing-face.pgm"),
        "{}",
        stderr(&out)
    );

    let out = gdpkit(&[
        "extract",
        "--manifest",
        p(&manifest),
        "--kind",
        "ldp",
        "--out",
        p(&lbp),
    ]);
    assert_eq!(code(&out), 2);
}

#[test]
fn train_and_predict() {
    let tmp = TempDir::new().unwrap();
    let data = tmp.path().join("data");
    synth(&data, 30, 64);
    let features = tmp.path().join("f.csv");
    let out = gdpkit(&[
        "extract",
        "--manifest",
        p(&data.join("manifest.csv")),
        "--blocks",
        "4",
        "--out",
        p(&features),
    ]);
    assert_eq!(code(&out), 0);

    let model = tmp.path().join("model.txt");
    let out = gdpkit(&[
        "train",
        "--features",
        p(&features),
        "--seed",
        "3",
        "--out",
        p(&model),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let stdout = String::from_utf8_lossy(&out.stdout);
    let cv_line = stdout.lines().find(|l| l.contains("cv accuracy")).unwrap();
    let pct: f64 = cv_line
        .split_whitespace()
        .nth(3)
        .unwrap()
        .trim_end_matches('%')
        .parse()
        .unwrap();
    assert!(pct >= 90.0, "{cv_line}");
    assert!(fs::read_to_string(&model)
        .unwrap()
        .starts_with("GDPKIT-SVM v1\ndim=128\n"));

    let preds = tmp.path().join("p.csv");
    let out = gdpkit(&[
        "predict",
        "--model",
        p(&model),
        "--features",
        p(&features),
        "--out",
        p(&preds),
    ]);
    assert_eq!(code(&out), 0);
    let text = fs::read_to_string(&preds).unwrap();
    assert!(text.starts_with("index,predicted,score,label\n"));
    assert_eq!(text.lines().count(), 61);

    // features with a different block grid no longer match the model
    let other = tmp.path().join("g.csv");
    gdpkit(&[
        "extract",
        "--manifest",
        p(&data.join("manifest.csv")),
        "--blocks",
        "2",
        "--out",
        p(&other),
    ]);
    let out = gdpkit(&["predict", "--model", p(&model), "--features", p(&other)]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("dimension mismatch"));
}

#[test]
fn eval_reports_table_one_lengths() {
    let tmp = TempDir::new().unwrap();
    let data = tmp.path().join("data");
    synth(&data, 10, 48);
    let reports = tmp.path().join("reports");
    let out = gdpkit(&[
        "eval",
        "--manifest",
        p(&data.join("manifest.csv")),
        "--blocks",
        "7,9,11,13",
        "--out",
        p(&reports),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let csv = fs::read_to_string(reports.join("report.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "config,kind,n,feature_len,acc_overall,acc_male,acc_female,noise,seed"
    );
    let lens: Vec<&str> = lines.map(|l| l.split(',').nth(3).unwrap()).collect();
    assert_eq!(lens, ["392", "648", "968", "1352"]);
    assert!(fs::read_to_string(reports.join("report.txt"))
        .unwrap()
        .contains('%'));
}

#[test]
fn config_file_supplies_defaults_and_rejects_unknown_keys() {
    let tmp = TempDir::new().unwrap();
    let data = tmp.path().join("data");
    synth(&data, 6, 32);
    let cfg = tmp.path().join("run.conf");
    fs::write(
        &cfg,
        format!(
            "# noise bench settings\nmanifest = {}\nkinds = gdp,lbpu\nblocks = 2\nk = 3\nnoise-variance = 0\n",
            p(&data.join("manifest.csv"))
        ),
    )
    .unwrap();
    let out = gdpkit(&["--config", p(&cfg), "noise-bench"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("lbpu-svm-n2-noisy"));
    assert!(stdout.contains("k=3"));
    assert!(!stdout.contains("lbp-svm"));

    // a flag overrides the file
    let out = gdpkit(&["noise-bench", "--config", p(&cfg), "--kinds", "lbp"]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stdout).contains("lbp-svm-n2-noisy"));

    fs::write(&cfg, "learning-rate = 0.1\n").unwrap();
    let out = gdpkit(&["--config", p(&cfg), "eval"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("unknown key"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&gdpkit(&[])), 2);
    assert_eq!(code(&gdpkit(&["eval"])), 2);
    assert_eq!(
        code(&gdpkit(&[
            "train",
            "--features",
            "x.csv",
            "--out",
            "m",
            "--c",
            "-1"
        ])),
        2
    );
    assert_eq!(
        code(&gdpkit(&[
            "noise-bench",
            "--manifest",
            "m.csv",
            "--noise-variance",
            "-0.5"
        ])),
        2
    );
}
