use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use gdpkit::classify::{read_model_file, svm_train, write_model_file, TrainConfig};
use gdpkit::eval::{
    accuracies, block_size_experiment, cross_validate, noise_experiment, read_feature_csv,
    read_manifest, stratified_kfold, write_feature_csv, write_manifest, ClassifierKind, Dataset,
    DatasetManifest, ExperimentOptions, ExperimentReport, FeatureTable, ManifestEntry, SplitSpec,
};
use gdpkit::features::DescriptorKind;
use gdpkit::image::{make_synthetic_textures, write_pgm_file, NoiseSpec, SyntheticSpec};

use crate::config::{List, Settings};
use crate::{
    CliError, EvalArgs, ExtractArgs, NoiseBenchArgs, PredictArgs, SplitArgs, SvmArgs, SynthArgs,
    TrainArgs,
};

fn usage(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

fn train_config(s: &Settings, a: SvmArgs) -> Result<TrainConfig, CliError> {
    let d = TrainConfig::default();
    let cfg = TrainConfig {
        c: s.or(a.c, "c", d.c)?,
        epochs: s.or(a.epochs, "epochs", d.epochs)?,
        tolerance: s.or(a.tolerance, "tolerance", d.tolerance)?,
        seed: s.or(a.seed, "seed", d.seed)?,
    };
    cfg.validate().map_err(usage)?;
    Ok(cfg)
}

fn split_spec(s: &Settings, a: SplitArgs) -> Result<SplitSpec, CliError> {
    let d = SplitSpec::default();
    let spec = SplitSpec {
        k: s.or(a.k, "k", d.k)?,
        seed: s.or(a.split_seed, "split-seed", d.seed)?,
        stratified: true,
    };
    if spec.k < 2 {
        return Err(usage(format!("--k must be at least 2, got {}", spec.k)));
    }
    Ok(spec)
}

fn kinds(
    s: &Settings,
    flag: Option<String>,
    default: &str,
) -> Result<Vec<DescriptorKind>, CliError> {
    let raw: String = s.or(flag, "kinds", default.to_string())?;
    let List(kinds) = raw.parse::<List<DescriptorKind>>().map_err(usage)?;
    if kinds.is_empty() {
        return Err(usage("--kinds must name at least one descriptor"));
    }
    Ok(kinds)
}

fn classifier(s: &Settings, flag: Option<String>) -> Result<ClassifierKind, CliError> {
    s.or(flag, "classifier", "svm".to_string())?
        .parse()
        .map_err(usage)
}

fn check_blocks(n: usize) -> Result<usize, CliError> {
    if n == 0 {
        return Err(usage("--blocks must be at least 1"));
    }
    Ok(n)
}

fn load_manifest(path: &Path) -> Result<DatasetManifest, CliError> {
    let manifest = read_manifest(path).map_err(usage)?;
    if manifest.is_empty() {
        return Err(usage(format!("{} lists no images", path.display())));
    }
    Ok(manifest)
}

fn write_reports(out: Option<PathBuf>, report: &ExperimentReport) -> Result<(), CliError> {
    print!("{}", report.render());
    if let Some(dir) = out {
        fs::create_dir_all(&dir)
            .map_err(|e| usage(format!("cannot create {}: {e}", dir.display())))?;
        report.write_csv(dir.join("report.csv"))?;
        let txt = dir.join("report.txt");
        fs::write(&txt, report.render())
            .map_err(|e| CliError::Runtime(format!("{}: {e}", txt.display())))?;
        println!(
            "\nwrote {} and {}",
            dir.join("report.csv").display(),
            txt.display()
        );
    }
    Ok(())
}

pub fn synth(s: &Settings, a: SynthArgs) -> Result<(), CliError> {
    let spec = SyntheticSpec {
        images_per_class: s.required(a.per_class, "per-class")?,
        image_size: s.or(a.size, "size", 64)?,
        grating_period: s.or(a.period, "period", 8)?,
        jitter_amplitude: s.or(a.jitter, "jitter", 0.1)?,
        seed: s.or(a.seed, "seed", 0)?,
    };
    spec.validate().map_err(usage)?;
    let out: PathBuf = s.required(a.out, "out")?;
    fs::create_dir_all(&out).map_err(|e| usage(format!("cannot create {}: {e}", out.display())))?;

    let corpus = make_synthetic_textures(&spec)?;
    let mut entries = Vec::with_capacity(corpus.len());
    for (i, item) in corpus.iter().enumerate() {
        let name = format!("{}-{:04}.pgm", item.label, i % spec.images_per_class);
        write_pgm_file(out.join(&name), &item.image).map_err(usage)?;
        entries.push(ManifestEntry {
            path: name.into(),
            label: item.label,
        });
    }
    let manifest = out.join("manifest.csv");
    write_manifest(&manifest, &DatasetManifest::new(entries)?).map_err(usage)?;
    println!("wrote {} images and {}", corpus.len(), manifest.display());
    Ok(())
}

pub fn extract(s: &Settings, a: ExtractArgs) -> Result<(), CliError> {
    let manifest_path: PathBuf = s.required(a.manifest, "manifest")?;
    let kind: DescriptorKind = s
        .or(a.kind, "kind", "gdp".to_string())?
        .parse()
        .map_err(usage)?;
    let n = check_blocks(s.or(a.blocks, "blocks", 9)?)?;
    let out: PathBuf = s.required(a.out, "out")?;
    let manifest = load_manifest(&manifest_path)?;

    let data = Dataset::load(&manifest)?;
    let rows = gdpkit::eval::extract_features(&data.images, kind, n)?;
    write_feature_csv(
        &out,
        &FeatureTable {
            labels: data.labels,
            rows,
        },
    )?;
    println!(
        "wrote {} rows x {} features ({kind}, {n}x{n} blocks) to {}",
        manifest.len(),
        kind.feature_len(n),
        out.display()
    );
    Ok(())
}

pub fn train(s: &Settings, a: TrainArgs) -> Result<(), CliError> {
    let features: PathBuf = s.required(a.features, "features")?;
    let out: PathBuf = s.required(a.out, "out")?;
    let cfg = train_config(s, a.svm)?;
    let split = split_spec(s, a.split)?;
    let table = read_feature_csv(&features).map_err(usage)?;

    let model = svm_train(&table.rows, &table.labels, &cfg)?;
    let predicted = table
        .rows
        .iter()
        .map(|x| model.predict(x).map(|p| p.0))
        .collect::<Result<Vec<_>, _>>()?;
    let acc = accuracies(&predicted, &table.labels)?;
    write_model_file(&out, &model)?;
    println!(
        "trained on {} samples, dim {}, {} epochs, objective {:.6} -> {:.6}",
        table.rows.len(),
        model.dim(),
        model.epochs_run,
        model.initial_objective,
        model.final_objective
    );
    println!("training accuracy {:.2}%", 100.0 * acc.overall);

    let folds = stratified_kfold(&table.labels, &split)?;
    let options = ExperimentOptions {
        split,
        train: cfg,
        classifier: ClassifierKind::Svm,
    };
    let cv = cross_validate(&table.rows, &table.labels, &folds, &options)?;
    let cv_acc = accuracies(&cv, &table.labels)?;
    println!(
        "{}-fold cv accuracy {:.2}% (male {:.2}%, female {:.2}%)",
        split.k,
        100.0 * cv_acc.overall,
        100.0 * cv_acc.male,
        100.0 * cv_acc.female
    );
    println!("wrote {}", out.display());
    Ok(())
}

pub fn predict(s: &Settings, a: PredictArgs) -> Result<(), CliError> {
    let model_path: PathBuf = s.required(a.model, "model")?;
    let features: PathBuf = s.required(a.features, "features")?;
    let model = read_model_file(&model_path)?;
    let table = read_feature_csv(&features).map_err(usage)?;

    let mut lines = vec!["index,predicted,score,label".to_string()];
    let mut predicted = Vec::with_capacity(table.rows.len());
    for (i, (x, actual)) in table.rows.iter().zip(&table.labels).enumerate() {
        let (label, score) = model.predict(x)?;
        predicted.push(label);
        lines.push(format!("{i},{label},{score:.16e},{actual}"));
    }
    let body = lines.join("\n") + "\n";
    match s.pick::<PathBuf>(a.out, "out")? {
        Some(out) => {
            fs::write(&out, body)
                .map_err(|e| CliError::Runtime(format!("{}: {e}", out.display())))?;
            if !table.labels.is_empty() {
                let acc = accuracies(&predicted, &table.labels)?;
                println!("accuracy against file labels {:.2}%", 100.0 * acc.overall);
            }
            println!("wrote {}", out.display());
        }
        None => {
            std::io::stdout()
                .write_all(body.as_bytes())
                .map_err(|e| CliError::Runtime(e.to_string()))?;
        }
    }
    Ok(())
}

pub fn eval(s: &Settings, a: EvalArgs) -> Result<(), CliError> {
    let manifest_path: PathBuf = s.required(a.manifest, "manifest")?;
    let kinds = kinds(s, a.kinds, "gdp")?;
    let List(blocks) = s
        .or(a.blocks, "blocks", "9".to_string())?
        .parse::<List<usize>>()
        .map_err(usage)?;
    for &n in &blocks {
        check_blocks(n)?;
    }
    let options = ExperimentOptions {
        split: split_spec(s, a.split)?,
        train: train_config(s, a.svm)?,
        classifier: classifier(s, a.classifier)?,
    };
    let out = s.pick(a.out, "out")?;
    let manifest = load_manifest(&manifest_path)?;
    let data = Dataset::load(&manifest)?;
    let report = block_size_experiment(&data, &kinds, &blocks, &options)?;
    write_reports(out, &report)
}

pub fn noise_bench(s: &Settings, a: NoiseBenchArgs) -> Result<(), CliError> {
    let manifest_path: PathBuf = s.required(a.manifest, "manifest")?;
    let kinds = kinds(s, a.kinds, "gdp,lbp,lbpu")?;
    let n = check_blocks(s.or(a.blocks, "blocks", 9)?)?;
    let noise = NoiseSpec::new(
        s.or(a.noise_mean, "noise-mean", 0.0)?,
        s.or(a.noise_variance, "noise-variance", 0.001)?,
        s.or(a.noise_seed, "noise-seed", 0)?,
    )
    .map_err(usage)?;
    let options = ExperimentOptions {
        split: split_spec(s, a.split)?,
        train: train_config(s, a.svm)?,
        classifier: classifier(s, a.classifier)?,
    };
    let out = s.pick(a.out, "out")?;
    let manifest = load_manifest(&manifest_path)?;
    let data = Dataset::load(&manifest)?;
    let report = noise_experiment(&data, &kinds, n, &noise, &options)?;
    write_reports(out, &report)
}
