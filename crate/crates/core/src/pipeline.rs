//! Filesystem-level commands behind the CLI: generate, train, analyze,
//! report. Each run writes its fully-resolved config next to its outputs.

use std::fs;
use std::path::{Path, PathBuf};

use crate::analysis::{analyze_embeddings, characterize_raw, AnalysisReport, Provenance};
use crate::config::RunConfig;
use crate::dataset::{generate_dataset, load_splits, write_splits, DatasetManifest};
use crate::error::{Error, Result};
use crate::model::{autoencoder_specs, ModelParams};
use crate::rng::Rng;
use crate::training::{
    steady_state_stats, train_enhanced, train_standard, SteadyStats, TrainingLog,
};

pub const CHECKPOINT_FILE: &str = "checkpoint.pvec";
pub const LOG_FILE: &str = "log.csv";
pub const REPORT_FILE: &str = "report.json";
pub const EMBEDDINGS_FILE: &str = "embeddings.csv";
pub const RESOLVED_CONFIG_FILE: &str = "config.resolved.txt";
pub const STEADY_STATS_FILE: &str = "steady_stats.txt";

/// Generate the dataset files (train/test/validation CSVs plus manifest)
/// into `out_dir`.
pub fn run_generate(cfg: &RunConfig, out_dir: &Path) -> Result<DatasetManifest> {
    fs::create_dir_all(out_dir)?;
    let mut rng = Rng::new(cfg.data.seed);
    let splits = generate_dataset(&cfg.data, &mut rng)?;
    let manifest = write_splits(&splits, out_dir)?;
    cfg.write_resolved(&out_dir.join(RESOLVED_CONFIG_FILE))?;
    Ok(manifest)
}

/// Outcome summary of one training run.
#[derive(Debug, Clone)]
pub struct TrainOutcome {
    pub checkpoint: PathBuf,
    pub log: PathBuf,
    pub final_train_mse: f64,
    pub final_train_triplet: f64,
    pub enhanced: bool,
}

/// Train on a generated dataset directory: `--alpha` present in the config
/// selects the enhanced model, absent selects the standard one.
pub fn run_train(cfg: &RunConfig, data_dir: &Path, out_dir: &Path) -> Result<TrainOutcome> {
    fs::create_dir_all(out_dir)?;
    let splits = load_splits(data_dir)?;
    // the autoencoder input width is fixed by the data
    let mut cfg = cfg.clone();
    cfg.model.input_dim = splits.dimension();

    let enhanced = cfg.train.alpha.is_some();
    let (params, log) = if enhanced {
        train_enhanced(&splits, &cfg.model, &cfg.train)?
    } else {
        train_standard(&splits, &cfg.model, &cfg.train)?
    };

    let checkpoint = out_dir.join(CHECKPOINT_FILE);
    let log_path = out_dir.join(LOG_FILE);
    params.save(&checkpoint)?;
    log.write_csv(&log_path)?;
    cfg.write_resolved(&out_dir.join(RESOLVED_CONFIG_FILE))?;

    let last = log
        .records_for(crate::training::Split::Train)
        .last()
        .ok_or_else(|| Error::InvalidState("training produced no records".into()))?;
    Ok(TrainOutcome {
        checkpoint,
        log: log_path,
        final_train_mse: last.mse,
        final_train_triplet: last.triplet,
        enhanced,
    })
}

/// What to analyze: raw scaled validation vectors, or a trained checkpoint's
/// embeddings of them.
#[derive(Debug, Clone)]
pub enum AnalyzeSource {
    Raw,
    Checkpoint(PathBuf),
}

/// Run the clustering analysis and write `report.json` plus the embedding
/// export CSV into `out_dir`.
pub fn run_analyze(
    cfg: &RunConfig,
    source: &AnalyzeSource,
    data_dir: &Path,
    out_dir: &Path,
) -> Result<AnalysisReport> {
    fs::create_dir_all(out_dir)?;
    let splits = load_splits(data_dir)?;
    let (analysis, embeddings, checkpoint_name) = match source {
        AnalyzeSource::Raw => {
            let (analysis, es) = characterize_raw(&splits)?;
            (analysis, es, "raw".to_string())
        }
        AnalyzeSource::Checkpoint(path) => {
            let params = ModelParams::load(path)?;
            let expected = {
                let mut model_cfg = cfg.model.clone();
                model_cfg.input_dim = splits.dimension();
                autoencoder_specs(&model_cfg)
            };
            if params.specs() != expected {
                return Err(Error::ShapeMismatch(format!(
                    "checkpoint layout {:?} does not match dataset/model config {:?}",
                    params.specs(),
                    expected
                )));
            }
            let (analysis, es) = analyze_embeddings(&params, &splits)?;
            let name = path
                .file_name()
                .map(|n| n.to_string_lossy().into_owned())
                .unwrap_or_else(|| path.display().to_string());
            (analysis, es, name)
        }
    };
    embeddings.write_csv(&out_dir.join(EMBEDDINGS_FILE))?;
    let report = analysis.into_report(Provenance {
        checkpoint: checkpoint_name,
        dataset_seed: splits.seed,
        config_hash: cfg.config_hash(),
    });
    report.write_json(&out_dir.join(REPORT_FILE))?;
    cfg.write_resolved(&out_dir.join(RESOLVED_CONFIG_FILE))?;
    Ok(report)
}

/// One labelled row of the steady-state report.
#[derive(Debug, Clone)]
pub struct RunStats {
    pub label: String,
    pub stats: SteadyStats,
}

/// Steady-state statistics for each log over the window, with ratios
/// against the first log as the baseline.
pub fn run_report(log_paths: &[PathBuf], window: (usize, usize)) -> Result<(String, Vec<RunStats>)> {
    if log_paths.is_empty() {
        return Err(Error::InvalidArgument("no log files given".into()));
    }
    let mut rows = Vec::with_capacity(log_paths.len());
    for path in log_paths {
        let log = TrainingLog::read_csv(path)?;
        let stats = steady_state_stats(&log, window)?;
        let label = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.display().to_string());
        rows.push(RunStats { label, stats });
    }

    let mut table = String::new();
    table.push_str(&format!(
        "steady-state statistics over steps [{}, {}] ({} samples per run)\n\n",
        window.0, window.1, rows[0].stats.samples
    ));
    table.push_str(&format!(
        "{:<24} {:>12} {:>12} {:>12} {:>12} {:>12} {:>12} {:>12} {:>12}\n",
        "run",
        "mse",
        "mse sd",
        "triplet",
        "triplet sd",
        "total",
        "total sd",
        "accuracy",
        "accuracy sd"
    ));
    for row in &rows {
        let s = &row.stats;
        table.push_str(&format!(
            "{:<24} {:>12.6} {:>12.6} {:>12.6} {:>12.6} {:>12.6} {:>12.6} {:>12.6} {:>12.6}\n",
            row.label,
            s.mse.mean,
            s.mse.stdev,
            s.triplet.mean,
            s.triplet.stdev,
            s.total.mean,
            s.total.stdev,
            s.numeric_accuracy.mean,
            s.numeric_accuracy.stdev
        ));
    }
    if rows.len() > 1 {
        let base = &rows[0];
        table.push_str(&format!("\nratios vs baseline '{}':\n", base.label));
        table.push_str(&format!(
            "{:<24} {:>12} {:>12} {:>14}\n",
            "run", "mse ratio", "acc ratio", "triplet/mse"
        ));
        for row in &rows[1..] {
            table.push_str(&format!(
                "{:<24} {:>12.3} {:>12.3} {:>14.3}\n",
                row.label,
                row.stats.mse.mean / base.stats.mse.mean,
                row.stats.numeric_accuracy.mean / base.stats.numeric_accuracy.mean,
                row.stats.triplet.mean / row.stats.mse.mean
            ));
        }
    }
    Ok((table, rows))
}

/// `run_report` plus persistence of the table into `out_dir`.
pub fn run_report_to_dir(
    cfg: &RunConfig,
    log_paths: &[PathBuf],
    window: (usize, usize),
    out_dir: &Path,
) -> Result<(String, Vec<RunStats>)> {
    fs::create_dir_all(out_dir)?;
    let (table, rows) = run_report(log_paths, window)?;
    fs::write(out_dir.join(STEADY_STATS_FILE), &table)?;
    cfg.write_resolved(&out_dir.join(RESOLVED_CONFIG_FILE))?;
    Ok((table, rows))
}
