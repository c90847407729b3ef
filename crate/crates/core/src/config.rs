//! Run configuration: presets, key-value config files, flag merging, and
//! the resolved-config persistence that makes every run reproducible.

use std::fs;
use std::path::Path;

use crate::dataset::DataConfig;
use crate::error::{Error, Result};
use crate::model::ModelConfig;
use crate::training::TrainingConfig;

/// Union of dataset, model, training, and analysis knobs for one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub data: DataConfig,
    pub model: ModelConfig,
    pub train: TrainingConfig,
}

impl RunConfig {
    /// Desk-scale preset: minutes on a laptop CPU.
    pub fn desk() -> Self {
        RunConfig {
            data: DataConfig {
                sets: 4_000,
                validation_sets: 1_000,
                subvector_len: 4,
                subvector_count: 6,
                value_max: 24,
                seed: 42,
            },
            model: ModelConfig::default(),
            train: TrainingConfig {
                batch_size: 1_024,
                steps: 2_000,
                learning_rate: 0.001,
                alpha: None,
                w_mse: 1.0,
                w_triplet: 1.0,
                seed: 42,
                eval_every: 10,
                steady_window: (600, 1_000),
            },
        }
    }

    /// Full-scale preset matching the published experiment dimensions.
    pub fn paper() -> Self {
        let mut cfg = Self::desk();
        cfg.data.sets = 40_000;
        cfg.train.batch_size = 5_000;
        cfg.train.steps = 1_200;
        cfg
    }

    pub fn preset(name: &str) -> Result<Self> {
        match name {
            "desk" => Ok(Self::desk()),
            "paper" => Ok(Self::paper()),
            other => Err(Error::InvalidArgument(format!(
                "unknown preset '{other}' (expected 'desk' or 'paper')"
            ))),
        }
    }

    /// Apply one `key = value` override.
    pub fn apply_kv(&mut self, key: &str, value: &str) -> Result<()> {
        let bad = |what: &str| {
            Error::InvalidArgument(format!("config key '{key}': invalid {what} '{value}'"))
        };
        let parse_usize = |v: &str| v.parse::<usize>().map_err(|_| bad("count"));
        let parse_u64 = |v: &str| v.parse::<u64>().map_err(|_| bad("integer"));
        let parse_f64 = |v: &str| v.parse::<f64>().map_err(|_| bad("number"));
        match key {
            "sets" => self.data.sets = parse_usize(value)?,
            "validation_sets" => self.data.validation_sets = parse_usize(value)?,
            "subvector_len" => self.data.subvector_len = parse_usize(value)?,
            "subvector_count" => self.data.subvector_count = parse_usize(value)?,
            "value_max" => {
                self.data.value_max = value.parse::<u32>().map_err(|_| bad("integer"))?
            }
            "data_seed" => self.data.seed = parse_u64(value)?,
            "input_dim" => self.model.input_dim = parse_usize(value)?,
            "hidden_dim" => self.model.hidden_dim = parse_usize(value)?,
            "embedding_dim" => self.model.embedding_dim = parse_usize(value)?,
            "batch_size" => self.train.batch_size = parse_usize(value)?,
            "steps" => self.train.steps = parse_usize(value)?,
            "learning_rate" => self.train.learning_rate = parse_f64(value)?,
            "alpha" => {
                self.train.alpha = if value == "none" {
                    None
                } else {
                    Some(parse_f64(value)?)
                }
            }
            "w_mse" => self.train.w_mse = parse_f64(value)?,
            "w_triplet" => self.train.w_triplet = parse_f64(value)?,
            "train_seed" => self.train.seed = parse_u64(value)?,
            "eval_every" => self.train.eval_every = parse_usize(value)?,
            "steady_low" => self.train.steady_window.0 = parse_usize(value)?,
            "steady_high" => self.train.steady_window.1 = parse_usize(value)?,
            other => {
                return Err(Error::InvalidArgument(format!(
                    "unknown config key '{other}'"
                )))
            }
        }
        Ok(())
    }

    /// Apply a key-value config file (`key = value` lines, `#` comments).
    pub fn apply_file(&mut self, path: &Path) -> Result<()> {
        let text = fs::read_to_string(path)?;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::format(
                    format!("{}:{}", path.display(), lineno + 1),
                    "expected 'key = value'",
                )
            })?;
            self.apply_kv(key.trim(), value.trim())?;
        }
        Ok(())
    }

    /// Both seeds at once; the per-command CLI flag sets this.
    pub fn set_seed(&mut self, seed: u64) {
        self.data.seed = seed;
        self.train.seed = seed;
    }

    /// The full resolved configuration as sorted `key = value` lines.
    /// Contains no filesystem paths, so it hashes identically wherever the
    /// run's outputs land.
    pub fn to_resolved_text(&self) -> String {
        let alpha = match self.train.alpha {
            Some(a) => a.to_string(),
            None => "none".to_string(),
        };
        let mut entries = vec![
            ("alpha", alpha),
            ("batch_size", self.train.batch_size.to_string()),
            ("data_seed", self.data.seed.to_string()),
            ("embedding_dim", self.model.embedding_dim.to_string()),
            ("eval_every", self.train.eval_every.to_string()),
            ("hidden_dim", self.model.hidden_dim.to_string()),
            ("input_dim", self.model.input_dim.to_string()),
            ("learning_rate", self.train.learning_rate.to_string()),
            ("sets", self.data.sets.to_string()),
            ("steady_high", self.train.steady_window.1.to_string()),
            ("steady_low", self.train.steady_window.0.to_string()),
            ("steps", self.train.steps.to_string()),
            ("subvector_count", self.data.subvector_count.to_string()),
            ("subvector_len", self.data.subvector_len.to_string()),
            ("train_seed", self.train.seed.to_string()),
            ("validation_sets", self.data.validation_sets.to_string()),
            ("value_max", self.data.value_max.to_string()),
            ("w_mse", self.train.w_mse.to_string()),
            ("w_triplet", self.train.w_triplet.to_string()),
        ];
        entries.sort_by(|a, b| a.0.cmp(b.0));
        let mut out = String::new();
        for (k, v) in entries {
            out.push_str(k);
            out.push_str(" = ");
            out.push_str(&v);
            out.push('\n');
        }
        out
    }

    /// FNV-1a 64 hash of the resolved config text, as 16 hex digits.
    pub fn config_hash(&self) -> String {
        format!("{:016x}", fnv1a64(self.to_resolved_text().as_bytes()))
    }

    pub fn write_resolved(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_resolved_text())?;
        Ok(())
    }
}

impl Default for RunConfig {
    fn default() -> Self {
        Self::desk()
    }
}

fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}
