//! `permvec` command line: generate data, train the autoencoders, analyze
//! embedding clustering, and summarize training logs.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use permvec::pipeline::{
    run_analyze, run_generate, run_report_to_dir, run_train, AnalyzeSource,
};
use permvec::RunConfig;

#[derive(Parser)]
#[command(
    name = "permvec",
    about = "Permutation-invariant embeddings via triplet-loss-enhanced autoencoders",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Flags shared by every subcommand; flags override config-file values,
/// which override the preset.
#[derive(Args, Clone)]
struct CommonFlags {
    /// Named preset: 'desk' (default) or 'paper'
    #[arg(long, default_value = "desk")]
    preset: String,

    /// Key-value config file applied on top of the preset
    #[arg(long)]
    config: Option<PathBuf>,

    /// Seed for dataset generation and training
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Generate the synthetic permutation point-set dataset
    Generate {
        #[command(flatten)]
        common: CommonFlags,

        /// Output directory for train/test/validation CSVs and the manifest
        #[arg(long)]
        out: PathBuf,

        /// Total number of permutation point sets
        #[arg(long)]
        sets: Option<usize>,

        /// Point sets reserved for post-training analysis
        #[arg(long)]
        validation_sets: Option<usize>,
    },

    /// Train the standard (no --alpha) or triplet-enhanced (--alpha) model
    Train {
        #[command(flatten)]
        common: CommonFlags,

        /// Directory produced by `permvec generate`
        #[arg(long)]
        data: PathBuf,

        /// Output directory for the checkpoint, log, and resolved config
        #[arg(long)]
        out: PathBuf,

        /// Triplet loss margin; selects the enhanced model
        #[arg(long, value_parser = parse_positive_alpha)]
        alpha: Option<f64>,

        #[arg(long)]
        batch_size: Option<usize>,

        #[arg(long)]
        steps: Option<usize>,

        #[arg(long)]
        learning_rate: Option<f64>,

        /// Test-split evaluation cadence in steps (0 disables)
        #[arg(long)]
        eval_every: Option<usize>,
    },

    /// Analyze embedding clustering of the validation split
    Analyze {
        #[command(flatten)]
        common: CommonFlags,

        /// Directory produced by `permvec generate`
        #[arg(long)]
        data: PathBuf,

        /// Output directory for report.json and embeddings.csv
        #[arg(long)]
        out: PathBuf,

        /// Trained checkpoint to encode with
        #[arg(long, conflicts_with = "raw", required_unless_present = "raw")]
        checkpoint: Option<PathBuf>,

        /// Characterize the raw scaled vectors instead of model embeddings
        #[arg(long)]
        raw: bool,
    },

    /// Steady-state statistics table from one or more training logs
    Report {
        #[command(flatten)]
        common: CommonFlags,

        /// Output directory for the stats table
        #[arg(long)]
        out: PathBuf,

        /// Inclusive steady-state step window, e.g. --window 600 1000
        #[arg(long, num_args = 2, value_names = ["LO", "HI"])]
        window: Option<Vec<usize>>,

        /// Training log CSVs; the first is the ratio baseline
        #[arg(required = true)]
        logs: Vec<PathBuf>,
    },
}

fn parse_positive_alpha(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("'{s}' is not a number"))?;
    if !v.is_finite() || v <= 0.0 {
        return Err(format!("alpha must be positive, got {v}"));
    }
    Ok(v)
}

fn build_config(common: &CommonFlags) -> permvec::Result<RunConfig> {
    let mut cfg = RunConfig::preset(&common.preset)?;
    if let Some(path) = &common.config {
        cfg.apply_file(path)?;
    }
    if let Some(seed) = common.seed {
        cfg.set_seed(seed);
    }
    Ok(cfg)
}

fn run(cli: Cli) -> permvec::Result<()> {
    match cli.command {
        Command::Generate {
            common,
            out,
            sets,
            validation_sets,
        } => {
            let mut cfg = build_config(&common)?;
            if let Some(sets) = sets {
                cfg.data.sets = sets;
            }
            if let Some(v) = validation_sets {
                cfg.data.validation_sets = v;
            }
            let manifest = run_generate(&cfg, &out)?;
            println!(
                "generated {} point sets (validation/train/test = {}/{}/{}) into {}",
                manifest.validation_sets + manifest.train_sets + manifest.test_sets,
                manifest.validation_sets,
                manifest.train_sets,
                manifest.test_sets,
                out.display()
            );
        }
        Command::Train {
            common,
            data,
            out,
            alpha,
            batch_size,
            steps,
            learning_rate,
            eval_every,
        } => {
            let mut cfg = build_config(&common)?;
            if alpha.is_some() {
                cfg.train.alpha = alpha;
            }
            if let Some(b) = batch_size {
                cfg.train.batch_size = b;
            }
            if let Some(s) = steps {
                cfg.train.steps = s;
            }
            if let Some(lr) = learning_rate {
                cfg.train.learning_rate = lr;
            }
            if let Some(e) = eval_every {
                cfg.train.eval_every = e;
            }
            let outcome = run_train(&cfg, &data, &out)?;
            let kind = if outcome.enhanced {
                "enhanced"
            } else {
                "standard"
            };
            println!(
                "trained {kind} model: final train mse {:.6}, triplet {:.6}",
                outcome.final_train_mse, outcome.final_train_triplet
            );
            println!("checkpoint: {}", outcome.checkpoint.display());
            println!("log: {}", outcome.log.display());
        }
        Command::Analyze {
            common,
            data,
            out,
            checkpoint,
            raw,
        } => {
            let cfg = build_config(&common)?;
            let source = if raw {
                AnalyzeSource::Raw
            } else {
                AnalyzeSource::Checkpoint(checkpoint.expect("clap enforces checkpoint|raw"))
            };
            let report = run_analyze(&cfg, &source, &data, &out)?;
            println!("R95 = {:.6}", report.r95);
            println!("epsilon = {:.6}", report.epsilon);
            println!(
                "verdict: {}",
                match report.verdict {
                    permvec::analysis::Verdict::Discernible => "discernible",
                    permvec::analysis::Verdict::NotDiscernible => "not discernible",
                }
            );
        }
        Command::Report {
            common,
            out,
            window,
            logs,
        } => {
            let cfg = build_config(&common)?;
            let window = match window {
                Some(w) => (w[0], w[1]),
                None => cfg.train.steady_window,
            };
            let (table, _) = run_report_to_dir(&cfg, &logs, window, &out)?;
            print!("{table}");
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
