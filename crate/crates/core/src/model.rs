//! The encoder/decoder MLP: exact forward and analytic backward passes,
//! Adam moment state, and binary checkpoint persistence.
//!
//! The triplet-enhanced model is not a separate parameter set: the same
//! [`ModelParams`] is evaluated on the anchor, positive, and negative
//! inputs and the three branches' gradients are summed into shared weights.

use std::fs;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::math::{matvec, matvec_transposed, Activation, Matrix};
use crate::rng::Rng;

pub const ADAM_BETA1: f64 = 0.9;
pub const ADAM_BETA2: f64 = 0.999;
pub const ADAM_EPSILON: f64 = 1e-8;

/// Shape and activation of one dense layer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LayerSpec {
    pub in_dim: usize,
    pub out_dim: usize,
    pub activation: Activation,
}

/// Model width knobs; the encoder is [input -> hidden -> embedding] and the
/// decoder mirrors it.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelConfig {
    pub input_dim: usize,
    pub hidden_dim: usize,
    pub embedding_dim: usize,
}

impl Default for ModelConfig {
    fn default() -> Self {
        ModelConfig {
            input_dim: 24,
            hidden_dim: 16,
            embedding_dim: 8,
        }
    }
}

/// Layer specs for the mirror autoencoder: tanh throughout except the final
/// decoder layer, which is sigmoid so outputs live in [0, 1] like the
/// scaled inputs.
pub fn autoencoder_specs(cfg: &ModelConfig) -> Vec<LayerSpec> {
    vec![
        LayerSpec {
            in_dim: cfg.input_dim,
            out_dim: cfg.hidden_dim,
            activation: Activation::Tanh,
        },
        LayerSpec {
            in_dim: cfg.hidden_dim,
            out_dim: cfg.embedding_dim,
            activation: Activation::Tanh,
        },
        LayerSpec {
            in_dim: cfg.embedding_dim,
            out_dim: cfg.hidden_dim,
            activation: Activation::Tanh,
        },
        LayerSpec {
            in_dim: cfg.hidden_dim,
            out_dim: cfg.input_dim,
            activation: Activation::Sigmoid,
        },
    ]
}

#[derive(Debug, Clone, PartialEq)]
pub struct Layer {
    pub weights: Matrix,
    pub biases: Vec<f64>,
    pub activation: Activation,
}

impl Layer {
    pub fn new(weights: Matrix, biases: Vec<f64>, activation: Activation) -> Result<Self> {
        if biases.len() != weights.rows() {
            return Err(Error::InvalidArgument(format!(
                "bias length {} does not match weight rows {}",
                biases.len(),
                weights.rows()
            )));
        }
        Ok(Layer {
            weights,
            biases,
            activation,
        })
    }

    fn spec(&self) -> LayerSpec {
        LayerSpec {
            in_dim: self.weights.cols(),
            out_dim: self.weights.rows(),
            activation: self.activation,
        }
    }
}

/// Per-layer Adam first/second moments.
#[derive(Debug, Clone, PartialEq)]
struct AdamMoments {
    m_weights: Matrix,
    v_weights: Matrix,
    m_biases: Vec<f64>,
    v_biases: Vec<f64>,
}

impl AdamMoments {
    fn zeros(spec: &LayerSpec) -> Self {
        AdamMoments {
            m_weights: Matrix::zeros(spec.out_dim, spec.in_dim),
            v_weights: Matrix::zeros(spec.out_dim, spec.in_dim),
            m_biases: vec![0.0; spec.out_dim],
            v_biases: vec![0.0; spec.out_dim],
        }
    }
}

/// All layer weights and biases for encoder and decoder, plus Adam state.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams {
    layers: Vec<Layer>,
    encoder_layers: usize,
    adam: Vec<AdamMoments>,
    adam_step: u64,
}

/// Per-layer pre-activations and activations recorded by one forward pass.
#[derive(Debug, Clone)]
pub struct ForwardTrace {
    input: Vec<f64>,
    pre: Vec<Vec<f64>>,
    act: Vec<Vec<f64>>,
    encoder_layers: usize,
}

impl ForwardTrace {
    /// Encoder output for this input.
    pub fn embedding(&self) -> &[f64] {
        &self.act[self.encoder_layers - 1]
    }

    /// Final layer output.
    pub fn reconstruction(&self) -> &[f64] {
        self.act.last().expect("trace has layers")
    }

    pub fn input(&self) -> &[f64] {
        &self.input
    }

    /// Pre-activation z of one layer.
    pub fn pre_activation(&self, layer: usize) -> &[f64] {
        &self.pre[layer]
    }

    /// Activation output of one layer.
    pub fn activation(&self, layer: usize) -> &[f64] {
        &self.act[layer]
    }
}

/// Parameter gradients with the same shape as the model's layers.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradients {
    weights: Vec<Matrix>,
    biases: Vec<Vec<f64>>,
}

impl Gradients {
    pub fn zeros_like(params: &ModelParams) -> Self {
        Gradients {
            weights: params
                .layers
                .iter()
                .map(|l| Matrix::zeros(l.weights.rows(), l.weights.cols()))
                .collect(),
            biases: params
                .layers
                .iter()
                .map(|l| vec![0.0; l.biases.len()])
                .collect(),
        }
    }

    pub fn zero(&mut self) {
        for w in &mut self.weights {
            w.fill(0.0);
        }
        for b in &mut self.biases {
            b.fill(0.0);
        }
    }

    pub fn weight(&self, layer: usize) -> &Matrix {
        &self.weights[layer]
    }

    pub fn bias(&self, layer: usize) -> &[f64] {
        &self.biases[layer]
    }

    /// Flat view in checkpoint order: per layer, weights row-major then biases.
    pub fn flatten(&self) -> Vec<f64> {
        let mut out = Vec::new();
        for (w, b) in self.weights.iter().zip(&self.biases) {
            out.extend_from_slice(w.data());
            out.extend_from_slice(b);
        }
        out
    }

    /// Overwrite from a flat view with the same layout as [`Gradients::flatten`].
    pub fn set_from_flat(&mut self, flat: &[f64]) -> Result<()> {
        let total: usize = self
            .weights
            .iter()
            .zip(&self.biases)
            .map(|(w, b)| w.data().len() + b.len())
            .sum();
        if flat.len() != total {
            return Err(Error::ShapeMismatch(format!(
                "flat gradient length {} does not match model ({total})",
                flat.len()
            )));
        }
        let mut offset = 0;
        for (w, b) in self.weights.iter_mut().zip(&mut self.biases) {
            let wn = w.data().len();
            w.data_mut().copy_from_slice(&flat[offset..offset + wn]);
            offset += wn;
            let bn = b.len();
            b.copy_from_slice(&flat[offset..offset + bn]);
            offset += bn;
        }
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.flatten().iter().all(|&g| g == 0.0)
    }
}

impl ModelParams {
    /// Glorot-uniform weights, zero biases, zeroed Adam state.
    ///
    /// Weights are drawn row-major per layer from
    /// uniform(-sqrt(6/(fan_in+fan_out)), +sqrt(6/(fan_in+fan_out))).
    pub fn init(rng: &mut Rng, specs: &[LayerSpec], encoder_layers: usize) -> Result<Self> {
        validate_specs(specs, encoder_layers)?;
        let mut layers = Vec::with_capacity(specs.len());
        for spec in specs {
            let limit = (6.0 / (spec.in_dim + spec.out_dim) as f64).sqrt();
            let data: Vec<f64> = (0..spec.in_dim * spec.out_dim)
                .map(|_| rng.next_range(-limit, limit))
                .collect();
            layers.push(Layer {
                weights: Matrix::from_vec(spec.out_dim, spec.in_dim, data)?,
                biases: vec![0.0; spec.out_dim],
                activation: spec.activation,
            });
        }
        let adam = specs.iter().map(AdamMoments::zeros).collect();
        Ok(ModelParams {
            layers,
            encoder_layers,
            adam,
            adam_step: 0,
        })
    }

    /// Build from explicit layers (hand-set weights, loaded checkpoints).
    pub fn from_layers(layers: Vec<Layer>, encoder_layers: usize) -> Result<Self> {
        let specs: Vec<LayerSpec> = layers.iter().map(Layer::spec).collect();
        validate_specs(&specs, encoder_layers)?;
        let adam = specs.iter().map(AdamMoments::zeros).collect();
        Ok(ModelParams {
            layers,
            encoder_layers,
            adam,
            adam_step: 0,
        })
    }

    pub fn specs(&self) -> Vec<LayerSpec> {
        self.layers.iter().map(Layer::spec).collect()
    }

    pub fn encoder_layers(&self) -> usize {
        self.encoder_layers
    }

    pub fn layer(&self, i: usize) -> &Layer {
        &self.layers[i]
    }

    pub fn input_dim(&self) -> usize {
        self.layers[0].weights.cols()
    }

    pub fn embedding_dim(&self) -> usize {
        self.layers[self.encoder_layers - 1].weights.rows()
    }

    pub fn output_dim(&self) -> usize {
        self.layers.last().expect("non-empty").weights.rows()
    }

    pub fn adam_step_count(&self) -> u64 {
        self.adam_step
    }

    /// Flat parameter view in checkpoint order: per layer, weights row-major
    /// then biases.
    pub fn flatten(&self) -> Vec<f64> {
        let mut out = Vec::new();
        for l in &self.layers {
            out.extend_from_slice(l.weights.data());
            out.extend_from_slice(&l.biases);
        }
        out
    }

    pub fn param_count(&self) -> usize {
        self.layers
            .iter()
            .map(|l| l.weights.data().len() + l.biases.len())
            .sum()
    }

    /// Overwrite parameters from a flat view; Adam state is untouched.
    pub fn set_from_flat(&mut self, flat: &[f64]) -> Result<()> {
        if flat.len() != self.param_count() {
            return Err(Error::ShapeMismatch(format!(
                "flat parameter length {} does not match model ({})",
                flat.len(),
                self.param_count()
            )));
        }
        let mut offset = 0;
        for l in &mut self.layers {
            let wn = l.weights.data().len();
            l.weights.data_mut().copy_from_slice(&flat[offset..offset + wn]);
            offset += wn;
            let bn = l.biases.len();
            l.biases.copy_from_slice(&flat[offset..offset + bn]);
            offset += bn;
        }
        Ok(())
    }

    /// Run only the encoder layers; output is the embedding.
    pub fn encode(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.input_dim() {
            return Err(Error::InvalidArgument(format!(
                "encode: input length {} does not match model input dim {}",
                x.len(),
                self.input_dim()
            )));
        }
        let mut a = x.to_vec();
        for layer in &self.layers[..self.encoder_layers] {
            a = layer_forward(layer, &a)?.1;
        }
        Ok(a)
    }

    /// Run all layers, recording pre-activations and activations.
    pub fn forward(&self, x: &[f64]) -> Result<ForwardTrace> {
        if x.len() != self.input_dim() {
            return Err(Error::InvalidArgument(format!(
                "forward: input length {} does not match model input dim {}",
                x.len(),
                self.input_dim()
            )));
        }
        let mut pre = Vec::with_capacity(self.layers.len());
        let mut act = Vec::with_capacity(self.layers.len());
        let mut a = x.to_vec();
        for layer in &self.layers {
            let (z, out) = layer_forward(layer, &a)?;
            pre.push(z);
            a = out.clone();
            act.push(out);
        }
        Ok(ForwardTrace {
            input: x.to_vec(),
            pre,
            act,
            encoder_layers: self.encoder_layers,
        })
    }

    /// Backpropagate one sample's loss gradients into `grads` (accumulating).
    ///
    /// `d_reconstruction` is the loss gradient at the final output and
    /// `d_embedding` the extra gradient injected at the encoder output
    /// (zero for reconstruction-only training).
    pub fn backward_into(
        &self,
        trace: &ForwardTrace,
        d_reconstruction: &[f64],
        d_embedding: &[f64],
        grads: &mut Gradients,
    ) -> Result<()> {
        if trace.act.len() != self.layers.len() || trace.encoder_layers != self.encoder_layers {
            return Err(Error::InvalidState(
                "trace does not match model layout".into(),
            ));
        }
        for (layer, a) in self.layers.iter().zip(&trace.act) {
            if a.len() != layer.weights.rows() {
                return Err(Error::InvalidState(
                    "trace activations do not match layer dims".into(),
                ));
            }
        }
        if d_reconstruction.len() != self.output_dim() {
            return Err(Error::InvalidArgument(format!(
                "output gradient length {} does not match output dim {}",
                d_reconstruction.len(),
                self.output_dim()
            )));
        }
        if d_embedding.len() != self.embedding_dim() {
            return Err(Error::InvalidArgument(format!(
                "embedding gradient length {} does not match embedding dim {}",
                d_embedding.len(),
                self.embedding_dim()
            )));
        }
        if grads.weights.len() != self.layers.len() {
            return Err(Error::InvalidState(
                "gradient buffer does not match model layout".into(),
            ));
        }

        let mut grad_a = d_reconstruction.to_vec();
        for l in (0..self.layers.len()).rev() {
            if l == self.encoder_layers - 1 {
                for (g, e) in grad_a.iter_mut().zip(d_embedding) {
                    *g += e;
                }
            }
            let layer = &self.layers[l];
            let out = &trace.act[l];
            // delta = dL/dz = dL/da * act'(z), with act' taken from the output
            let delta: Vec<f64> = grad_a
                .iter()
                .zip(out)
                .map(|(g, &a)| g * layer.activation.derivative_from_output(a))
                .collect();

            let input: &[f64] = if l == 0 {
                &trace.input
            } else {
                &trace.act[l - 1]
            };
            let gw = &mut grads.weights[l];
            for (r, &d) in delta.iter().enumerate() {
                let row_start = r * gw.cols();
                let row = &mut gw.data_mut()[row_start..row_start + input.len()];
                for (slot, &x) in row.iter_mut().zip(input) {
                    *slot += d * x;
                }
            }
            for (slot, &d) in grads.biases[l].iter_mut().zip(&delta) {
                *slot += d;
            }
            if l > 0 {
                grad_a = matvec_transposed(&layer.weights, &delta)?;
            }
        }
        Ok(())
    }

    /// One Adam update with bias correction (Kingma-Ba form):
    /// m_hat = m/(1-b1^t), v_hat = v/(1-b2^t), p -= lr * m_hat/(sqrt(v_hat)+eps).
    pub fn adam_step(&mut self, grads: &Gradients, learning_rate: f64) -> Result<()> {
        if grads.weights.len() != self.layers.len() {
            return Err(Error::InvalidState(
                "gradient layer count does not match model".into(),
            ));
        }
        for (l, gw) in self.layers.iter().zip(&grads.weights) {
            if gw.rows() != l.weights.rows() || gw.cols() != l.weights.cols() {
                return Err(Error::InvalidState(
                    "gradient shape does not match model weights".into(),
                ));
            }
        }
        self.adam_step += 1;
        let t = self.adam_step as i32;
        let bc1 = 1.0 - ADAM_BETA1.powi(t);
        let bc2 = 1.0 - ADAM_BETA2.powi(t);
        for (i, layer) in self.layers.iter_mut().enumerate() {
            let moments = &mut self.adam[i];
            adam_update_slice(
                layer.weights.data_mut(),
                grads.weights[i].data(),
                moments.m_weights.data_mut(),
                moments.v_weights.data_mut(),
                learning_rate,
                bc1,
                bc2,
            );
            adam_update_slice(
                &mut layer.biases,
                &grads.biases[i],
                &mut moments.m_biases,
                &mut moments.v_biases,
                learning_rate,
                bc1,
                bc2,
            );
        }
        Ok(())
    }

    // --- checkpoint persistence --------------------------------------------
    //
    // Binary layout (all integers and floats little-endian):
    //   magic "PVEC1" (5 bytes)
    //   u32 layer_count
    //   per layer: u32 in_dim, u32 out_dim, u8 activation tag (0 tanh,
    //              1 sigmoid), f64 weights row-major (out*in), f64 biases (out)
    //   u64 adam step counter
    //   per layer: f64 m_weights, v_weights (out*in each),
    //              f64 m_biases, v_biases (out each)
    //
    // The encoder depth is layer_count/2; only mirror autoencoders are saved.

    pub fn save(&self, path: &Path) -> Result<()> {
        if self.layers.len() % 2 != 0 || self.encoder_layers != self.layers.len() / 2 {
            return Err(Error::InvalidState(
                "only mirror autoencoders (encoder = first half of layers) can be saved".into(),
            ));
        }
        let file = fs::File::create(path)?;
        let mut w = BufWriter::new(file);
        w.write_all(b"PVEC1")?;
        w.write_all(&(self.layers.len() as u32).to_le_bytes())?;
        for l in &self.layers {
            w.write_all(&(l.weights.cols() as u32).to_le_bytes())?;
            w.write_all(&(l.weights.rows() as u32).to_le_bytes())?;
            w.write_all(&[l.activation.tag()])?;
            write_f64s(&mut w, l.weights.data())?;
            write_f64s(&mut w, &l.biases)?;
        }
        w.write_all(&self.adam_step.to_le_bytes())?;
        for m in &self.adam {
            write_f64s(&mut w, m.m_weights.data())?;
            write_f64s(&mut w, m.v_weights.data())?;
            write_f64s(&mut w, &m.m_biases)?;
            write_f64s(&mut w, &m.v_biases)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let file = fs::File::open(path)?;
        let mut r = std::io::BufReader::new(file);

        let mut magic = [0u8; 5];
        read_exact_field(&mut r, &mut magic, "magic")?;
        if &magic != b"PVEC1" {
            return Err(Error::format("magic", "not a PVEC1 checkpoint"));
        }
        let layer_count = read_u32(&mut r, "layer count")? as usize;
        if layer_count == 0 || layer_count > 1024 {
            return Err(Error::format(
                "layer count",
                format!("implausible value {layer_count}"),
            ));
        }
        let mut layers = Vec::with_capacity(layer_count);
        for i in 0..layer_count {
            let in_dim = read_u32(&mut r, &format!("layer {i} in_dim"))? as usize;
            let out_dim = read_u32(&mut r, &format!("layer {i} out_dim"))? as usize;
            if in_dim == 0 || out_dim == 0 || in_dim > 1 << 20 || out_dim > 1 << 20 {
                return Err(Error::format(
                    format!("layer {i} dims"),
                    format!("implausible dims {in_dim}x{out_dim}"),
                ));
            }
            let mut tag = [0u8; 1];
            read_exact_field(&mut r, &mut tag, &format!("layer {i} activation"))?;
            let activation = Activation::from_tag(tag[0])?;
            let weights = read_f64s(&mut r, out_dim * in_dim, &format!("layer {i} weights"))?;
            let biases = read_f64s(&mut r, out_dim, &format!("layer {i} biases"))?;
            let weights = Matrix::from_vec(out_dim, in_dim, weights)
                .map_err(|e| Error::format(format!("layer {i} weights"), e.to_string()))?;
            layers.push(Layer {
                weights,
                biases,
                activation,
            });
        }
        let adam_step = read_u64(&mut r, "adam step")?;
        let mut adam = Vec::with_capacity(layer_count);
        for (i, l) in layers.iter().enumerate() {
            let (rows, cols) = (l.weights.rows(), l.weights.cols());
            let m_w = read_f64s(&mut r, rows * cols, &format!("layer {i} adam m_weights"))?;
            let v_w = read_f64s(&mut r, rows * cols, &format!("layer {i} adam v_weights"))?;
            let m_b = read_f64s(&mut r, rows, &format!("layer {i} adam m_biases"))?;
            let v_b = read_f64s(&mut r, rows, &format!("layer {i} adam v_biases"))?;
            adam.push(AdamMoments {
                m_weights: Matrix::from_vec(rows, cols, m_w)
                    .map_err(|e| Error::format(format!("layer {i} adam m_weights"), e.to_string()))?,
                v_weights: Matrix::from_vec(rows, cols, v_w)
                    .map_err(|e| Error::format(format!("layer {i} adam v_weights"), e.to_string()))?,
                m_biases: m_b,
                v_biases: v_b,
            });
        }
        let mut trailing = [0u8; 1];
        if r.read(&mut trailing)? != 0 {
            return Err(Error::format("end of file", "trailing bytes after state"));
        }
        if layer_count % 2 != 0 {
            return Err(Error::format(
                "layer count",
                format!("expected a mirror autoencoder (even layer count), found {layer_count}"),
            ));
        }
        let encoder_layers = layer_count / 2;
        let specs: Vec<LayerSpec> = layers.iter().map(Layer::spec).collect();
        validate_specs(&specs, encoder_layers)
            .map_err(|e| Error::format("layer dims", e.to_string()))?;
        Ok(ModelParams {
            layers,
            encoder_layers,
            adam,
            adam_step,
        })
    }

    /// Load and reject the checkpoint if its layout differs from `expected`.
    pub fn load_expecting(path: &Path, expected: &[LayerSpec]) -> Result<Self> {
        let params = Self::load(path)?;
        if params.specs() != expected {
            return Err(Error::ShapeMismatch(format!(
                "checkpoint layout {:?} does not match expected {:?}",
                params.specs(),
                expected
            )));
        }
        Ok(params)
    }
}

fn layer_forward(layer: &Layer, input: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut z = matvec(&layer.weights, input)?;
    for (zi, b) in z.iter_mut().zip(&layer.biases) {
        *zi += b;
    }
    let a = z.iter().map(|&v| layer.activation.value(v)).collect();
    Ok((z, a))
}

fn validate_specs(specs: &[LayerSpec], encoder_layers: usize) -> Result<()> {
    if specs.is_empty() {
        return Err(Error::InvalidArgument("model needs at least one layer".into()));
    }
    if encoder_layers == 0 || encoder_layers > specs.len() {
        return Err(Error::InvalidArgument(format!(
            "encoder_layers {} out of range for {} layers",
            encoder_layers,
            specs.len()
        )));
    }
    for s in specs {
        if s.in_dim == 0 || s.out_dim == 0 {
            return Err(Error::InvalidArgument("layer dims must be positive".into()));
        }
    }
    for pair in specs.windows(2) {
        if pair[0].out_dim != pair[1].in_dim {
            return Err(Error::InvalidArgument(format!(
                "layer chain breaks: {} -> {}",
                pair[0].out_dim, pair[1].in_dim
            )));
        }
    }
    // a full autoencoder must mirror the encoder dims in the decoder
    if encoder_layers < specs.len() {
        let n = specs.len();
        if n != 2 * encoder_layers {
            return Err(Error::InvalidArgument(
                "decoder must have the same number of layers as the encoder".into(),
            ));
        }
        for i in 0..encoder_layers {
            let enc = &specs[encoder_layers - 1 - i];
            let dec = &specs[encoder_layers + i];
            if enc.in_dim != dec.out_dim || enc.out_dim != dec.in_dim {
                return Err(Error::InvalidArgument(format!(
                    "decoder layer {} ({}x{}) does not mirror encoder layer {} ({}x{})",
                    encoder_layers + i,
                    dec.in_dim,
                    dec.out_dim,
                    encoder_layers - 1 - i,
                    enc.in_dim,
                    enc.out_dim
                )));
            }
        }
    }
    Ok(())
}

fn adam_update_slice(
    params: &mut [f64],
    grads: &[f64],
    m: &mut [f64],
    v: &mut [f64],
    lr: f64,
    bias_correction1: f64,
    bias_correction2: f64,
) {
    for i in 0..params.len() {
        let g = grads[i];
        m[i] = ADAM_BETA1 * m[i] + (1.0 - ADAM_BETA1) * g;
        v[i] = ADAM_BETA2 * v[i] + (1.0 - ADAM_BETA2) * g * g;
        let m_hat = m[i] / bias_correction1;
        let v_hat = v[i] / bias_correction2;
        params[i] -= lr * m_hat / (v_hat.sqrt() + ADAM_EPSILON);
    }
}

fn write_f64s<W: Write>(w: &mut W, values: &[f64]) -> Result<()> {
    for v in values {
        w.write_all(&v.to_le_bytes())?;
    }
    Ok(())
}

fn read_exact_field<R: Read>(r: &mut R, buf: &mut [u8], field: &str) -> Result<()> {
    r.read_exact(buf)
        .map_err(|_| Error::format(field, "file truncated"))
}

fn read_u32<R: Read>(r: &mut R, field: &str) -> Result<u32> {
    let mut buf = [0u8; 4];
    read_exact_field(r, &mut buf, field)?;
    Ok(u32::from_le_bytes(buf))
}

fn read_u64<R: Read>(r: &mut R, field: &str) -> Result<u64> {
    let mut buf = [0u8; 8];
    read_exact_field(r, &mut buf, field)?;
    Ok(u64::from_le_bytes(buf))
}

fn read_f64s<R: Read>(r: &mut R, count: usize, field: &str) -> Result<Vec<f64>> {
    let mut bytes = vec![0u8; count * 8];
    read_exact_field(r, &mut bytes, field)?;
    let values: Vec<f64> = bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("8-byte chunk")))
        .collect();
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::format(field, "non-finite value"));
    }
    Ok(values)
}
