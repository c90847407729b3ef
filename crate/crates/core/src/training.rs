//! Training orchestration: batching, triplet sampling, Adam updates,
//! metric logging, and steady-state statistics.

use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use std::time::Instant;

use crate::dataset::{DatasetSplits, PermutationPointSet};
use crate::error::{Error, Result};
use crate::losses::{mse_with_grad, numeric_accuracy, triplet_with_grads, TripletMargin};
use crate::model::{autoencoder_specs, Gradients, ModelConfig, ModelParams};
use crate::rng::Rng;

/// Knobs for one training run. `alpha` absent selects the standard model,
/// present selects the triplet-enhanced one.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainingConfig {
    pub batch_size: usize,
    pub steps: usize,
    pub learning_rate: f64,
    pub alpha: Option<f64>,
    pub w_mse: f64,
    pub w_triplet: f64,
    pub seed: u64,
    /// Test-split evaluation cadence in steps; 0 disables it.
    pub eval_every: usize,
    /// Inclusive step interval for steady-state statistics.
    pub steady_window: (usize, usize),
}

impl TrainingConfig {
    pub fn validate(&self) -> Result<()> {
        if self.batch_size == 0 {
            return Err(Error::InvalidArgument("batch_size must be >= 1".into()));
        }
        if self.steps == 0 {
            return Err(Error::InvalidArgument("steps must be >= 1".into()));
        }
        if !(self.learning_rate.is_finite() && self.learning_rate > 0.0) {
            return Err(Error::InvalidArgument(
                "learning_rate must be positive".into(),
            ));
        }
        if let Some(alpha) = self.alpha {
            TripletMargin::new(alpha)?;
        }
        Ok(())
    }
}

/// Indices of an anchor, positive, and negative training vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Triplet {
    pub anchor: usize,
    pub positive: usize,
    pub negative: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Split {
    Train,
    Test,
}

impl Split {
    pub fn as_str(self) -> &'static str {
        match self {
            Split::Train => "train",
            Split::Test => "test",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "train" => Ok(Split::Train),
            "test" => Ok(Split::Test),
            other => Err(Error::format("split", format!("unknown split '{other}'"))),
        }
    }
}

/// One logged evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct StepRecord {
    pub step: usize,
    pub split: Split,
    pub mse: f64,
    pub triplet: f64,
    pub total: f64,
    pub numeric_accuracy: f64,
    /// Measured wall time; the one nondeterministic column.
    pub seconds: f64,
}

/// Per-step records for one run, train and test interleaved by step.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TrainingLog {
    pub records: Vec<StepRecord>,
}

pub const LOG_HEADER: &str = "step,split,mse,triplet,total,numeric_accuracy,seconds";

impl TrainingLog {
    pub fn records_for(&self, split: Split) -> impl Iterator<Item = &StepRecord> {
        self.records.iter().filter(move |r| r.split == split)
    }

    /// Bit-equality of every deterministic column; `seconds` carries wall
    /// time and is the one column two identical runs may differ in.
    pub fn same_metrics(&self, other: &TrainingLog) -> bool {
        self.records.len() == other.records.len()
            && self.records.iter().zip(&other.records).all(|(a, b)| {
                a.step == b.step
                    && a.split == b.split
                    && a.mse.to_bits() == b.mse.to_bits()
                    && a.triplet.to_bits() == b.triplet.to_bits()
                    && a.total.to_bits() == b.total.to_bits()
                    && a.numeric_accuracy.to_bits() == b.numeric_accuracy.to_bits()
            })
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let file = fs::File::create(path)?;
        let mut w = BufWriter::new(file);
        writeln!(w, "{LOG_HEADER}")?;
        for r in &self.records {
            writeln!(
                w,
                "{},{},{},{},{},{},{}",
                r.step,
                r.split.as_str(),
                r.mse,
                r.triplet,
                r.total,
                r.numeric_accuracy,
                r.seconds
            )?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_csv(path: &Path) -> Result<Self> {
        let name = path.display().to_string();
        let file = fs::File::open(path)?;
        let mut lines = BufReader::new(file).lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::format(&name, "empty log file"))??;
        if header != LOG_HEADER {
            return Err(Error::format(&name, format!("bad header '{header}'")));
        }
        let mut records = Vec::new();
        for (lineno, line) in lines.enumerate() {
            let line = line?;
            if line.is_empty() {
                continue;
            }
            let context = format!("{name}:{}", lineno + 2);
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 7 {
                return Err(Error::format(
                    &context,
                    format!("expected 7 fields, found {}", fields.len()),
                ));
            }
            let parse_f = |s: &str| -> Result<f64> {
                s.parse()
                    .map_err(|_| Error::format(&context, format!("non-numeric field '{s}'")))
            };
            records.push(StepRecord {
                step: fields[0]
                    .parse()
                    .map_err(|_| Error::format(&context, "non-numeric step"))?,
                split: Split::parse(fields[1])?,
                mse: parse_f(fields[2])?,
                triplet: parse_f(fields[3])?,
                total: parse_f(fields[4])?,
                numeric_accuracy: parse_f(fields[5])?,
                seconds: parse_f(fields[6])?,
            });
        }
        Ok(TrainingLog { records })
    }
}

/// Flattened, scaled view of one split: vectors in set-major order with
/// set membership bookkeeping.
#[derive(Debug, Clone)]
pub struct SplitVectors {
    vectors: Vec<Vec<f64>>,
    set_of: Vec<usize>,
    sets: Vec<Vec<usize>>,
    set_ids: Vec<u64>,
}

impl SplitVectors {
    pub fn from_point_sets(sets: &[PermutationPointSet], scaling: f64) -> Result<Self> {
        let mut vectors = Vec::new();
        let mut set_of = Vec::new();
        let mut index_sets = Vec::with_capacity(sets.len());
        let mut set_ids = Vec::with_capacity(sets.len());
        for (si, ps) in sets.iter().enumerate() {
            let mut members = Vec::with_capacity(ps.members.len());
            for m in &ps.members {
                members.push(vectors.len());
                set_of.push(si);
                vectors.push(m.scale(scaling)?.values().to_vec());
            }
            index_sets.push(members);
            set_ids.push(ps.set_id);
        }
        Ok(SplitVectors {
            vectors,
            set_of,
            sets: index_sets,
            set_ids,
        })
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn set_count(&self) -> usize {
        self.sets.len()
    }

    pub fn vector(&self, i: usize) -> &[f64] {
        &self.vectors[i]
    }

    pub fn set_of(&self, i: usize) -> usize {
        self.set_of[i]
    }

    pub fn set_members(&self, s: usize) -> &[usize] {
        &self.sets[s]
    }

    pub fn set_id(&self, s: usize) -> u64 {
        self.set_ids[s]
    }

    pub fn dimension(&self) -> usize {
        self.vectors.first().map_or(0, Vec::len)
    }
}

/// One pass of triplets: every vector appears exactly once as anchor (in
/// shuffled order), the positive is uniform over the anchor's other set
/// members, and the negative is a uniform member of a uniformly chosen
/// different set. No distance filtering.
pub fn sample_triplets(sv: &SplitVectors, rng: &mut Rng) -> Result<Vec<Triplet>> {
    if sv.set_count() < 2 {
        return Err(Error::InvalidArgument(
            "triplet sampling needs at least two point sets".into(),
        ));
    }
    let mut anchors: Vec<usize> = (0..sv.len()).collect();
    rng.shuffle(&mut anchors);
    let mut out = Vec::with_capacity(anchors.len());
    for &anchor in &anchors {
        let sa = sv.set_of(anchor);
        let members = sv.set_members(sa);
        let pos_of_anchor = anchor - members[0];
        debug_assert_eq!(members[pos_of_anchor], anchor);
        let mut k = rng.next_below(members.len() - 1);
        if k >= pos_of_anchor {
            k += 1;
        }
        let positive = members[k];

        let mut other = rng.next_below(sv.set_count() - 1);
        if other >= sa {
            other += 1;
        }
        let other_members = sv.set_members(other);
        let negative = other_members[rng.next_below(other_members.len())];

        out.push(Triplet {
            anchor,
            positive,
            negative,
        });
    }
    Ok(out)
}

/// Stream of sample indices: shuffled passes without replacement, with a
/// fresh shuffled pass concatenated whenever fewer than a full batch remains.
struct IndexStream {
    queue: Vec<usize>,
    cursor: usize,
    population: usize,
}

impl IndexStream {
    fn new(population: usize) -> Self {
        IndexStream {
            queue: Vec::new(),
            cursor: 0,
            population,
        }
    }

    fn next_batch(&mut self, n: usize, rng: &mut Rng) -> Vec<usize> {
        while self.queue.len() - self.cursor < n {
            self.queue.drain(..self.cursor);
            self.cursor = 0;
            let mut pass: Vec<usize> = (0..self.population).collect();
            rng.shuffle(&mut pass);
            self.queue.extend(pass);
        }
        let batch = self.queue[self.cursor..self.cursor + n].to_vec();
        self.cursor += n;
        batch
    }
}

/// Same exhaustion rule for triplet schedules: keep the tail of the current
/// pass and concatenate a freshly sampled pass.
struct TripletStream {
    queue: Vec<Triplet>,
    cursor: usize,
}

impl TripletStream {
    fn new() -> Self {
        TripletStream {
            queue: Vec::new(),
            cursor: 0,
        }
    }

    fn next_batch(&mut self, n: usize, sv: &SplitVectors, rng: &mut Rng) -> Result<Vec<Triplet>> {
        while self.queue.len() - self.cursor < n {
            self.queue.drain(..self.cursor);
            self.cursor = 0;
            self.queue.extend(sample_triplets(sv, rng)?);
        }
        let batch = self.queue[self.cursor..self.cursor + n].to_vec();
        self.cursor += n;
        Ok(batch)
    }
}

struct AccuracyAccum {
    sum: f64,
    count: usize,
}

impl AccuracyAccum {
    fn new() -> Self {
        AccuracyAccum { sum: 0.0, count: 0 }
    }

    fn add(&mut self, y_pred: &[f64], y_true: &[f64]) {
        // all-zero references make the metric undefined; skip those samples
        if let Ok(a) = numeric_accuracy(y_pred, y_true) {
            self.sum += a;
            self.count += 1;
        }
    }

    fn mean(&self) -> f64 {
        if self.count == 0 {
            f64::NAN
        } else {
            self.sum / self.count as f64
        }
    }
}

fn check_model_matches_data(model_cfg: &ModelConfig, sv: &SplitVectors) -> Result<()> {
    if model_cfg.input_dim != sv.dimension() {
        return Err(Error::ShapeMismatch(format!(
            "model input dim {} does not match dataset dimension {}",
            model_cfg.input_dim,
            sv.dimension()
        )));
    }
    Ok(())
}

/// Train the standard autoencoder: per step, a shuffled batch of scaled
/// train vectors minimizing the reconstruction loss only.
pub fn train_standard(
    splits: &DatasetSplits,
    model_cfg: &ModelConfig,
    cfg: &TrainingConfig,
) -> Result<(ModelParams, TrainingLog)> {
    cfg.validate()?;
    if cfg.alpha.is_some() {
        return Err(Error::InvalidArgument(
            "standard training requires alpha to be absent".into(),
        ));
    }
    let sv = SplitVectors::from_point_sets(&splits.train, splits.scaling)?;
    let test_sv = SplitVectors::from_point_sets(&splits.test, splits.scaling)?;
    if sv.is_empty() {
        return Err(Error::InvalidArgument("train split is empty".into()));
    }
    check_model_matches_data(model_cfg, &sv)?;

    let mut root = Rng::new(cfg.seed);
    let mut init_rng = root.split();
    let mut schedule_rng = root.split();
    let _reserved_eval_rng = root.split();

    let specs = autoencoder_specs(model_cfg);
    let mut params = ModelParams::init(&mut init_rng, &specs, 2)?;
    let mut grads = Gradients::zeros_like(&params);
    let zero_embed = vec![0.0; params.embedding_dim()];
    let mut stream = IndexStream::new(sv.len());
    let mut log = TrainingLog::default();

    for step in 1..=cfg.steps {
        let t0 = Instant::now();
        let batch = stream.next_batch(cfg.batch_size, &mut schedule_rng);
        grads.zero();
        let mut mse_sum = 0.0;
        let mut acc = AccuracyAccum::new();
        let recon_scale = cfg.w_mse / batch.len() as f64;
        for &i in &batch {
            let x = sv.vector(i);
            let trace = params.forward(x)?;
            let (m, mut g) = mse_with_grad(trace.reconstruction(), x)?;
            mse_sum += m;
            acc.add(trace.reconstruction(), x);
            for gi in &mut g {
                *gi *= recon_scale;
            }
            params.backward_into(&trace, &g, &zero_embed, &mut grads)?;
        }
        params.adam_step(&grads, cfg.learning_rate)?;
        let mse = mse_sum / batch.len() as f64;
        log.records.push(StepRecord {
            step,
            split: Split::Train,
            mse,
            triplet: 0.0,
            total: cfg.w_mse * mse,
            numeric_accuracy: acc.mean(),
            seconds: t0.elapsed().as_secs_f64(),
        });

        if cfg.eval_every > 0 && step % cfg.eval_every == 0 && !test_sv.is_empty() {
            let t1 = Instant::now();
            let (mse, acc) = evaluate_reconstruction(&params, &test_sv)?;
            log.records.push(StepRecord {
                step,
                split: Split::Test,
                mse,
                triplet: 0.0,
                total: cfg.w_mse * mse,
                numeric_accuracy: acc,
                seconds: t1.elapsed().as_secs_f64(),
            });
        }
    }
    Ok((params, log))
}

/// Train the triplet-enhanced autoencoder: per step, a batch of triplets
/// from the anchor-once schedule; total loss is the three-branch mean MSE
/// plus the triplet term, with shared weights across branches.
pub fn train_enhanced(
    splits: &DatasetSplits,
    model_cfg: &ModelConfig,
    cfg: &TrainingConfig,
) -> Result<(ModelParams, TrainingLog)> {
    cfg.validate()?;
    let alpha = cfg.alpha.ok_or_else(|| {
        Error::InvalidArgument("enhanced training requires alpha to be present".into())
    })?;
    let margin = TripletMargin::new(alpha)?;
    let sv = SplitVectors::from_point_sets(&splits.train, splits.scaling)?;
    let test_sv = SplitVectors::from_point_sets(&splits.test, splits.scaling)?;
    if sv.is_empty() {
        return Err(Error::InvalidArgument("train split is empty".into()));
    }
    check_model_matches_data(model_cfg, &sv)?;

    let mut root = Rng::new(cfg.seed);
    let mut init_rng = root.split();
    let mut schedule_rng = root.split();
    let mut eval_rng = root.split();

    let specs = autoencoder_specs(model_cfg);
    let mut params = ModelParams::init(&mut init_rng, &specs, 2)?;
    let mut grads = Gradients::zeros_like(&params);
    let mut stream = TripletStream::new();
    let mut log = TrainingLog::default();

    // one fixed test triplet schedule keeps the eval series comparable
    // across steps
    let test_triplets = if test_sv.set_count() >= 2 {
        sample_triplets(&test_sv, &mut eval_rng)?
    } else {
        Vec::new()
    };

    for step in 1..=cfg.steps {
        let t0 = Instant::now();
        let batch = stream.next_batch(cfg.batch_size, &sv, &mut schedule_rng)?;
        grads.zero();
        let mut mse_sum = 0.0;
        let mut triplet_sum = 0.0;
        let mut acc = AccuracyAccum::new();
        let recon_scale = cfg.w_mse / (3.0 * batch.len() as f64);
        let embed_scale = cfg.w_triplet / batch.len() as f64;
        for t in &batch {
            let xs = [
                sv.vector(t.anchor),
                sv.vector(t.positive),
                sv.vector(t.negative),
            ];
            let traces = [
                params.forward(xs[0])?,
                params.forward(xs[1])?,
                params.forward(xs[2])?,
            ];
            let (tl, g_a, g_p, g_n) = triplet_with_grads(
                traces[0].embedding(),
                traces[1].embedding(),
                traces[2].embedding(),
                margin,
            )?;
            triplet_sum += tl;
            for (branch, (trace, x)) in traces.iter().zip(xs).enumerate() {
                let (m, mut g) = mse_with_grad(trace.reconstruction(), x)?;
                mse_sum += m;
                acc.add(trace.reconstruction(), x);
                for gi in &mut g {
                    *gi *= recon_scale;
                }
                let embed_grad: Vec<f64> = match branch {
                    0 => g_a.iter().map(|v| v * embed_scale).collect(),
                    1 => g_p.iter().map(|v| v * embed_scale).collect(),
                    _ => g_n.iter().map(|v| v * embed_scale).collect(),
                };
                params.backward_into(trace, &g, &embed_grad, &mut grads)?;
            }
        }
        params.adam_step(&grads, cfg.learning_rate)?;
        let mse = mse_sum / (3.0 * batch.len() as f64);
        let triplet = triplet_sum / batch.len() as f64;
        log.records.push(StepRecord {
            step,
            split: Split::Train,
            mse,
            triplet,
            total: cfg.w_mse * mse + cfg.w_triplet * triplet,
            numeric_accuracy: acc.mean(),
            seconds: t0.elapsed().as_secs_f64(),
        });

        if cfg.eval_every > 0 && step % cfg.eval_every == 0 && !test_sv.is_empty() {
            let t1 = Instant::now();
            let (mse, acc) = evaluate_reconstruction(&params, &test_sv)?;
            let triplet = evaluate_triplets(&params, &test_sv, &test_triplets, margin)?;
            log.records.push(StepRecord {
                step,
                split: Split::Test,
                mse,
                triplet,
                total: cfg.w_mse * mse + cfg.w_triplet * triplet,
                numeric_accuracy: acc,
                seconds: t1.elapsed().as_secs_f64(),
            });
        }
    }
    Ok((params, log))
}

fn evaluate_reconstruction(params: &ModelParams, sv: &SplitVectors) -> Result<(f64, f64)> {
    let mut mse_sum = 0.0;
    let mut acc = AccuracyAccum::new();
    for i in 0..sv.len() {
        let x = sv.vector(i);
        let trace = params.forward(x)?;
        let (m, _) = mse_with_grad(trace.reconstruction(), x)?;
        mse_sum += m;
        acc.add(trace.reconstruction(), x);
    }
    Ok((mse_sum / sv.len() as f64, acc.mean()))
}

fn evaluate_triplets(
    params: &ModelParams,
    sv: &SplitVectors,
    triplets: &[Triplet],
    margin: TripletMargin,
) -> Result<f64> {
    if triplets.is_empty() {
        return Ok(0.0);
    }
    let mut sum = 0.0;
    for t in triplets {
        let e_a = params.encode(sv.vector(t.anchor))?;
        let e_p = params.encode(sv.vector(t.positive))?;
        let e_n = params.encode(sv.vector(t.negative))?;
        let (tl, ..) = triplet_with_grads(&e_a, &e_p, &e_n, margin)?;
        sum += tl;
    }
    Ok(sum / triplets.len() as f64)
}

/// Mean and population standard deviation of one metric series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricStats {
    pub mean: f64,
    pub stdev: f64,
}

/// Steady-state statistics of the train-split series over a step window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteadyStats {
    pub mse: MetricStats,
    pub triplet: MetricStats,
    pub total: MetricStats,
    pub numeric_accuracy: MetricStats,
    pub samples: usize,
}

/// Arithmetic mean and population standard deviation.
pub fn mean_stdev(values: &[f64]) -> Result<MetricStats> {
    if values.is_empty() {
        return Err(Error::InvalidArgument(
            "cannot compute statistics of an empty series".into(),
        ));
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    Ok(MetricStats {
        mean,
        stdev: var.sqrt(),
    })
}

/// Statistics of each metric over the inclusive window `[lo, hi]`, taken
/// from the train-split records.
pub fn steady_state_stats(log: &TrainingLog, window: (usize, usize)) -> Result<SteadyStats> {
    let (lo, hi) = window;
    if lo > hi {
        return Err(Error::InvalidArgument(format!(
            "steady window [{lo}, {hi}] is empty"
        )));
    }
    let records: Vec<&StepRecord> = log
        .records_for(Split::Train)
        .filter(|r| r.step >= lo && r.step <= hi)
        .collect();
    if records.is_empty() {
        return Err(Error::InvalidArgument(format!(
            "no train records inside window [{lo}, {hi}]"
        )));
    }
    let collect = |f: fn(&StepRecord) -> f64| -> Vec<f64> {
        records.iter().map(|r| f(r)).collect()
    };
    Ok(SteadyStats {
        mse: mean_stdev(&collect(|r| r.mse))?,
        triplet: mean_stdev(&collect(|r| r.triplet))?,
        total: mean_stdev(&collect(|r| r.total))?,
        numeric_accuracy: mean_stdev(&collect(|r| r.numeric_accuracy))?,
        samples: records.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{generate_dataset, DataConfig};

    fn small_splits(sets: usize, validation: usize, seed: u64) -> DatasetSplits {
        let cfg = DataConfig {
            sets,
            validation_sets: validation,
            subvector_len: 4,
            subvector_count: 6,
            value_max: 24,
            seed,
        };
        generate_dataset(&cfg, &mut Rng::new(seed)).unwrap()
    }

    fn quick_cfg(alpha: Option<f64>, steps: usize) -> TrainingConfig {
        TrainingConfig {
            batch_size: 64,
            steps,
            learning_rate: 0.001,
            alpha,
            w_mse: 1.0,
            w_triplet: 1.0,
            seed: 11,
            eval_every: 10,
            steady_window: (1, steps),
        }
    }

    fn small_model() -> ModelConfig {
        ModelConfig::default()
    }

    #[test]
    fn sample_triplets_covers_every_anchor_once() {
        let splits = small_splits(8, 2, 3);
        let sv = SplitVectors::from_point_sets(&splits.train, splits.scaling).unwrap();
        let triplets = sample_triplets(&sv, &mut Rng::new(5)).unwrap();
        assert_eq!(triplets.len(), sv.len());
        let mut anchors: Vec<usize> = triplets.iter().map(|t| t.anchor).collect();
        anchors.sort_unstable();
        assert_eq!(anchors, (0..sv.len()).collect::<Vec<_>>());
        for t in &triplets {
            assert_ne!(t.anchor, t.positive);
            assert_eq!(sv.set_of(t.anchor), sv.set_of(t.positive));
            assert_ne!(sv.set_of(t.anchor), sv.set_of(t.negative));
        }
    }

    #[test]
    fn sample_triplets_two_sets_negative_from_opposite() {
        let splits = small_splits(4, 1, 9);
        // build a 2-set split view
        let two = &splits.train[..2];
        let sv = SplitVectors::from_point_sets(two, splits.scaling).unwrap();
        assert_eq!(sv.set_count(), 2);
        let triplets = sample_triplets(&sv, &mut Rng::new(1)).unwrap();
        for t in &triplets {
            assert_eq!(sv.set_of(t.negative), 1 - sv.set_of(t.anchor));
        }
    }

    #[test]
    fn sample_triplets_rejects_single_set() {
        let splits = small_splits(4, 1, 9);
        let one = &splits.train[..1];
        let sv = SplitVectors::from_point_sets(one, splits.scaling).unwrap();
        assert!(sample_triplets(&sv, &mut Rng::new(1)).is_err());
    }

    #[test]
    fn adam_zero_gradient_leaves_params_unchanged() {
        let specs = autoencoder_specs(&small_model());
        let mut params = ModelParams::init(&mut Rng::new(2), &specs, 2).unwrap();
        let before = params.flatten();
        let grads = Gradients::zeros_like(&params);
        params.adam_step(&grads, 0.001).unwrap();
        assert_eq!(params.flatten(), before);
        assert_eq!(params.adam_step_count(), 1);
    }

    #[test]
    fn adam_first_step_magnitude_is_learning_rate() {
        // bias-corrected first step: update = lr * g/(|g| + eps) ~ lr * sign(g)
        let specs = vec![crate::model::LayerSpec {
            in_dim: 1,
            out_dim: 1,
            activation: crate::math::Activation::Tanh,
        }];
        let mut params = ModelParams::init(&mut Rng::new(3), &specs, 1).unwrap();
        let w0 = params.flatten()[0];
        let mut grads = Gradients::zeros_like(&params);
        grads.set_from_flat(&[0.37, 0.0]).unwrap();
        params.adam_step(&grads, 0.01).unwrap();
        let w1 = params.flatten()[0];
        assert!(((w0 - w1) - 0.01).abs() < 1e-8);
    }

    #[test]
    fn adam_quadratic_descent_is_monotone() {
        // f(w) = w^2 from w = 1 at lr = 0.01: the reference trajectory shows
        // |w| decreasing monotonically through all of the first 50 steps
        // (larger rates overshoot zero around step 12)
        let specs = vec![crate::model::LayerSpec {
            in_dim: 1,
            out_dim: 1,
            activation: crate::math::Activation::Tanh,
        }];
        let mut params = ModelParams::init(&mut Rng::new(3), &specs, 1).unwrap();
        params.set_from_flat(&[1.0, 0.0]).unwrap();
        let mut grads = Gradients::zeros_like(&params);
        let mut prev = 1.0f64;
        for _ in 0..50 {
            let w = params.flatten()[0];
            grads.set_from_flat(&[2.0 * w, 0.0]).unwrap();
            params.adam_step(&grads, 0.01).unwrap();
            let w_next = params.flatten()[0];
            assert!(w_next.abs() < prev.abs());
            prev = w_next;
        }
    }

    #[test]
    fn train_standard_converges_and_is_deterministic() {
        let splits = small_splits(30, 4, 7);
        let cfg = quick_cfg(None, 60);
        let (params_a, log_a) = train_standard(&splits, &small_model(), &cfg).unwrap();
        let (params_b, log_b) = train_standard(&splits, &small_model(), &cfg).unwrap();
        assert_eq!(params_a, params_b);
        assert!(log_a.same_metrics(&log_b));

        let first = log_a.records_for(Split::Train).next().unwrap().mse;
        let last = log_a.records_for(Split::Train).last().unwrap().mse;
        assert!(last < first, "mse should decrease ({first} -> {last})");
        // test-split evaluations present at the configured cadence
        assert_eq!(log_a.records_for(Split::Test).count(), 6);
    }

    #[test]
    fn train_standard_rejects_alpha_and_zero_steps() {
        let splits = small_splits(8, 2, 7);
        let mut cfg = quick_cfg(Some(1.0), 10);
        assert!(train_standard(&splits, &small_model(), &cfg).is_err());
        cfg.alpha = None;
        cfg.steps = 0;
        assert!(train_standard(&splits, &small_model(), &cfg).is_err());
    }

    #[test]
    fn train_enhanced_logs_consistent_totals() {
        let splits = small_splits(12, 2, 13);
        let cfg = quick_cfg(Some(1.0), 30);
        let (_, log) = train_enhanced(&splits, &small_model(), &cfg).unwrap();
        for r in log.records_for(Split::Train) {
            assert!((r.total - (r.mse + r.triplet)).abs() < 1e-12);
        }
        let first = log.records_for(Split::Train).next().unwrap().triplet;
        let last = log.records_for(Split::Train).last().unwrap().triplet;
        assert!(last < first, "triplet loss should decrease ({first} -> {last})");
    }

    #[test]
    fn train_enhanced_requires_alpha() {
        let splits = small_splits(8, 2, 7);
        let cfg = quick_cfg(None, 5);
        assert!(train_enhanced(&splits, &small_model(), &cfg).is_err());
    }

    #[test]
    fn effective_samples_per_pass_is_three_times_train_size() {
        let splits = small_splits(10, 2, 3);
        let sv = SplitVectors::from_point_sets(&splits.train, splits.scaling).unwrap();
        let pass = sample_triplets(&sv, &mut Rng::new(0)).unwrap();
        // each triplet presents three vectors to the shared-weight model
        assert_eq!(3 * pass.len(), 3 * sv.len());
    }

    #[test]
    fn steady_stats_hand_values() {
        let mut log = TrainingLog::default();
        for (i, v) in [1.0, 2.0, 3.0].iter().enumerate() {
            log.records.push(StepRecord {
                step: i + 1,
                split: Split::Train,
                mse: *v,
                triplet: 5.0,
                total: *v + 5.0,
                numeric_accuracy: 0.5,
                seconds: 0.0,
            });
        }
        let stats = steady_state_stats(&log, (1, 3)).unwrap();
        assert!((stats.mse.mean - 2.0).abs() < 1e-15);
        assert!((stats.mse.stdev - 0.816496580927726).abs() < 1e-12);
        assert_eq!(stats.triplet.mean, 5.0);
        assert_eq!(stats.triplet.stdev, 0.0);
        assert_eq!(stats.samples, 3);

        assert!(steady_state_stats(&log, (10, 20)).is_err());
        assert!(steady_state_stats(&log, (3, 1)).is_err());
    }

    #[test]
    fn log_csv_roundtrip() {
        let splits = small_splits(8, 2, 19);
        let cfg = quick_cfg(None, 12);
        let (_, log) = train_standard(&splits, &small_model(), &cfg).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("log.csv");
        log.write_csv(&path).unwrap();
        let loaded = TrainingLog::read_csv(&path).unwrap();
        assert_eq!(loaded, log);

        // malformed log is a format error
        fs::write(&path, "nonsense\n1,2,3\n").unwrap();
        assert!(matches!(
            TrainingLog::read_csv(&path),
            Err(Error::Format { .. })
        ));
    }
}
