//! MSE reconstruction loss, triplet loss, the numeric accuracy metric,
//! and their gradients. All functions are pure.

use crate::error::{Error, Result};
use crate::math::squared_euclidean;

/// Triplet loss margin: the target minimum gap between anchor-negative and
/// anchor-positive squared distances.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TripletMargin(f64);

impl TripletMargin {
    pub fn new(alpha: f64) -> Result<Self> {
        if !alpha.is_finite() || alpha <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "triplet margin must be positive, got {alpha}"
            )));
        }
        Ok(TripletMargin(alpha))
    }

    pub fn alpha(self) -> f64 {
        self.0
    }
}

/// Per-step loss bookkeeping.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossValue {
    pub mse: f64,
    pub triplet: f64,
    pub total: f64,
    pub numeric_accuracy: f64,
}

/// Mean squared error over elements.
pub fn mse_loss(y_pred: &[f64], y_true: &[f64]) -> Result<f64> {
    check_lengths(y_pred, y_true)?;
    let n = y_pred.len() as f64;
    Ok(y_pred
        .iter()
        .zip(y_true)
        .map(|(p, t)| (p - t) * (p - t))
        .sum::<f64>()
        / n)
}

/// MSE and its gradient 2(y_pred - y_true)/len in one pass.
pub fn mse_with_grad(y_pred: &[f64], y_true: &[f64]) -> Result<(f64, Vec<f64>)> {
    check_lengths(y_pred, y_true)?;
    let n = y_pred.len() as f64;
    let mut loss = 0.0;
    let mut grad = Vec::with_capacity(y_pred.len());
    for (p, t) in y_pred.iter().zip(y_true) {
        let d = p - t;
        loss += d * d;
        grad.push(2.0 * d / n);
    }
    Ok((loss / n, grad))
}

/// max(||f_a - f_p||^2 - ||f_a - f_n||^2 + alpha, 0)
pub fn triplet_loss(f_a: &[f64], f_p: &[f64], f_n: &[f64], margin: TripletMargin) -> Result<f64> {
    let d_ap = squared_euclidean(f_a, f_p)?;
    let d_an = squared_euclidean(f_a, f_n)?;
    Ok((d_ap - d_an + margin.alpha()).max(0.0))
}

/// Triplet loss with gradients w.r.t. all three embeddings.
///
/// In the active region (argument of max strictly positive):
///   d/df_a = 2[(f_a - f_p) - (f_a - f_n)] = 2(f_n - f_p)
///   d/df_p = -2(f_a - f_p)
///   d/df_n = +2(f_a - f_n)
/// At and past the clamp boundary all gradients are zero.
pub fn triplet_with_grads(
    f_a: &[f64],
    f_p: &[f64],
    f_n: &[f64],
    margin: TripletMargin,
) -> Result<(f64, Vec<f64>, Vec<f64>, Vec<f64>)> {
    let d_ap = squared_euclidean(f_a, f_p)?;
    let d_an = squared_euclidean(f_a, f_n)?;
    let arg = d_ap - d_an + margin.alpha();
    let k = f_a.len();
    if arg > 0.0 {
        let mut g_a = Vec::with_capacity(k);
        let mut g_p = Vec::with_capacity(k);
        let mut g_n = Vec::with_capacity(k);
        for i in 0..k {
            g_a.push(2.0 * (f_n[i] - f_p[i]));
            g_p.push(-2.0 * (f_a[i] - f_p[i]));
            g_n.push(2.0 * (f_a[i] - f_n[i]));
        }
        Ok((arg, g_a, g_p, g_n))
    } else {
        Ok((0.0, vec![0.0; k], vec![0.0; k], vec![0.0; k]))
    }
}

/// max(1 - sum((y_pred - y_true)^2) / sum(y_true^2), 0); 1 at perfect
/// reconstruction, clamped to [0, 1].
pub fn numeric_accuracy(y_pred: &[f64], y_true: &[f64]) -> Result<f64> {
    check_lengths(y_pred, y_true)?;
    let denom: f64 = y_true.iter().map(|t| t * t).sum();
    if denom == 0.0 {
        return Err(Error::UndefinedRatio(
            "numeric accuracy undefined for an all-zero reference vector".into(),
        ));
    }
    let num: f64 = y_pred
        .iter()
        .zip(y_true)
        .map(|(p, t)| (p - t) * (p - t))
        .sum();
    Ok((1.0 - num / denom).max(0.0))
}

fn check_lengths(a: &[f64], b: &[f64]) -> Result<()> {
    if a.len() != b.len() || a.is_empty() {
        return Err(Error::InvalidArgument(format!(
            "vector lengths {} and {} must match and be non-empty",
            a.len(),
            b.len()
        )));
    }
    Ok(())
}
