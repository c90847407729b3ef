//! Minimal dense linear algebra and the two activations used by the models.
//!
//! All arithmetic is 64-bit floating point. Everything here is a pure
//! function over immutable inputs.

use crate::error::{Error, Result};

/// Row-major dense matrix of f64.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    /// Build from row-major data; rejects length mismatch and non-finite values.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::InvalidArgument(format!(
                "matrix data length {} does not equal {}x{}",
                data.len(),
                rows,
                cols
            )));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(
                "matrix data contains non-finite values".into(),
            ));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::InvalidArgument("ragged matrix rows".into()));
        }
        Matrix::from_vec(r, c, rows.concat())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: f64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    pub fn fill(&mut self, v: f64) {
        self.data.fill(v);
    }
}

/// result[i] = sum_j m[i][j] * v[j]
pub fn matvec(m: &Matrix, v: &[f64]) -> Result<Vec<f64>> {
    if v.len() != m.cols {
        return Err(Error::InvalidArgument(format!(
            "matvec: vector length {} does not equal matrix cols {}",
            v.len(),
            m.cols
        )));
    }
    let mut out = Vec::with_capacity(m.rows);
    for r in 0..m.rows {
        let row = m.row(r);
        let mut acc = 0.0;
        for (a, b) in row.iter().zip(v) {
            acc += a * b;
        }
        out.push(acc);
    }
    Ok(out)
}

/// result[j] = sum_i m[i][j] * v[i] (multiply by the transpose)
pub fn matvec_transposed(m: &Matrix, v: &[f64]) -> Result<Vec<f64>> {
    if v.len() != m.rows {
        return Err(Error::InvalidArgument(format!(
            "matvec_transposed: vector length {} does not equal matrix rows {}",
            v.len(),
            m.rows
        )));
    }
    let mut out = vec![0.0; m.cols];
    for (r, &vr) in v.iter().enumerate() {
        let row = m.row(r);
        for (o, a) in out.iter_mut().zip(row) {
            *o += a * vr;
        }
    }
    Ok(out)
}

/// Layer activation functions with their derivatives.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Activation {
    Tanh,
    Sigmoid,
}

impl Activation {
    pub fn value(self, x: f64) -> f64 {
        match self {
            Activation::Tanh => x.tanh(),
            // Split the two branches so exp never sees a large positive
            // argument; stable for |x| well past 500.
            Activation::Sigmoid => {
                if x >= 0.0 {
                    1.0 / (1.0 + (-x).exp())
                } else {
                    let e = x.exp();
                    e / (1.0 + e)
                }
            }
        }
    }

    /// Derivative as a function of the pre-activation x.
    pub fn derivative(self, x: f64) -> f64 {
        self.derivative_from_output(self.value(x))
    }

    /// Derivative expressed through the activation output a:
    /// tanh' = 1 - a^2, sigmoid' = a(1 - a).
    pub fn derivative_from_output(self, a: f64) -> f64 {
        match self {
            Activation::Tanh => 1.0 - a * a,
            Activation::Sigmoid => a * (1.0 - a),
        }
    }

    /// Stable tag used by the checkpoint format.
    pub fn tag(self) -> u8 {
        match self {
            Activation::Tanh => 0,
            Activation::Sigmoid => 1,
        }
    }

    pub fn from_tag(tag: u8) -> Result<Self> {
        match tag {
            0 => Ok(Activation::Tanh),
            1 => Ok(Activation::Sigmoid),
            other => Err(Error::format(
                "activation tag",
                format!("unknown value {other}"),
            )),
        }
    }
}

pub fn squared_euclidean(u: &[f64], v: &[f64]) -> Result<f64> {
    if u.len() != v.len() {
        return Err(Error::InvalidArgument(format!(
            "squared_euclidean: lengths differ ({} vs {})",
            u.len(),
            v.len()
        )));
    }
    Ok(u.iter()
        .zip(v)
        .map(|(a, b)| {
            let d = a - b;
            d * d
        })
        .sum())
}

pub fn euclidean(u: &[f64], v: &[f64]) -> Result<f64> {
    squared_euclidean(u, v).map(f64::sqrt)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Rng;
    use proptest::prelude::*;

    #[test]
    fn matvec_identity() {
        let m = Matrix::from_rows(&[vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert_eq!(matvec(&m, &[3.0, 4.0]).unwrap(), vec![3.0, 4.0]);
    }

    #[test]
    fn matvec_zero_matrix_annihilates() {
        let m = Matrix::zeros(3, 2);
        assert_eq!(matvec(&m, &[5.0, -7.0]).unwrap(), vec![0.0, 0.0, 0.0]);
    }

    #[test]
    fn matvec_hand_evaluated() {
        let m = Matrix::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        assert_eq!(matvec(&m, &[1.0, 1.0]).unwrap(), vec![3.0, 7.0]);
    }

    #[test]
    fn matvec_dimension_mismatch_errors() {
        let m = Matrix::zeros(2, 3);
        assert!(matvec(&m, &[1.0, 2.0]).is_err());
        assert!(matvec_transposed(&m, &[1.0, 2.0, 3.0]).is_err());
    }

    #[test]
    fn matvec_transposed_agrees_with_explicit_transpose() {
        let m = Matrix::from_rows(&[vec![1.0, 2.0, 3.0], vec![4.0, 5.0, 6.0]]).unwrap();
        assert_eq!(
            matvec_transposed(&m, &[1.0, 1.0]).unwrap(),
            vec![5.0, 7.0, 9.0]
        );
    }

    #[test]
    fn matrix_rejects_bad_data() {
        assert!(Matrix::from_vec(2, 2, vec![1.0; 3]).is_err());
        assert!(Matrix::from_vec(1, 2, vec![1.0, f64::NAN]).is_err());
        assert!(Matrix::from_rows(&[vec![1.0], vec![1.0, 2.0]]).is_err());
    }

    #[test]
    fn tanh_reference_points() {
        assert_eq!(Activation::Tanh.value(0.0), 0.0);
        assert!((Activation::Tanh.value(20.0) - 1.0).abs() < 1e-9);
        assert!((Activation::Tanh.value(1.0) - 0.7615941559557649).abs() < 1e-12);
        let a = Activation::Tanh.value(0.3);
        assert!(a > -1.0 && a < 1.0);
    }

    #[test]
    fn sigmoid_reference_points() {
        assert_eq!(Activation::Sigmoid.value(0.0), 0.5);
        assert!((Activation::Sigmoid.value(2.0) - 0.8807970779778823).abs() < 1e-12);
        for x in [0.25, 3.0, 77.0] {
            // reflection identity to machine precision
            let diff = Activation::Sigmoid.value(-x) - (1.0 - Activation::Sigmoid.value(x));
            assert!(diff.abs() < 1e-15, "reflection off at {x}: {diff}");
        }
        // numerically stable at |x| = 500: no overflow, no NaN (the value
        // itself saturates to the interval endpoints in f64)
        let hi = Activation::Sigmoid.value(500.0);
        let lo = Activation::Sigmoid.value(-500.0);
        assert!(hi.is_finite() && lo.is_finite());
        assert!((0.0..=1.0).contains(&hi) && (0.0..=1.0).contains(&lo));
        assert!(lo > 0.0);
    }

    // Analytic derivative vs central finite difference at 100 seeded random
    // points in [-5, 5], relative error < 1e-6.
    #[test]
    fn activation_derivatives_match_finite_differences() {
        let h = 1e-5;
        let mut rng = Rng::new(2024);
        for act in [Activation::Tanh, Activation::Sigmoid] {
            for _ in 0..100 {
                let x = rng.next_range(-5.0, 5.0);
                let analytic = act.derivative(x);
                let fd = (act.value(x + h) - act.value(x - h)) / (2.0 * h);
                let rel = (analytic - fd).abs() / analytic.abs().max(fd.abs()).max(1e-12);
                assert!(
                    rel < 1e-6,
                    "{act:?} at {x}: analytic {analytic} vs fd {fd} (rel {rel})"
                );
            }
        }
    }

    #[test]
    fn squared_euclidean_examples() {
        assert_eq!(squared_euclidean(&[1.0, 2.0], &[1.0, 2.0]).unwrap(), 0.0);
        assert_eq!(squared_euclidean(&[0.0, 0.0], &[3.0, 4.0]).unwrap(), 25.0);
        assert_eq!(
            squared_euclidean(&[1.0, 1.0, 1.0], &[2.0, 2.0, 2.0]).unwrap(),
            3.0
        );
        assert!(squared_euclidean(&[1.0], &[1.0, 2.0]).is_err());
        assert_eq!(euclidean(&[0.0, 0.0], &[3.0, 4.0]).unwrap(), 5.0);
    }

    proptest! {
        // matvec(m, alpha*u + beta*v) == alpha*matvec(m,u) + beta*matvec(m,v)
        #[test]
        fn matvec_is_linear(
            seed in 0u64..1000,
            alpha in -3.0f64..3.0,
            beta in -3.0f64..3.0,
        ) {
            let mut rng = Rng::new(seed);
            let (r, c) = (1 + rng.next_below(6), 1 + rng.next_below(6));
            let m = Matrix::from_vec(
                r,
                c,
                (0..r * c).map(|_| rng.next_range(-2.0, 2.0)).collect(),
            ).unwrap();
            let u: Vec<f64> = (0..c).map(|_| rng.next_range(-2.0, 2.0)).collect();
            let v: Vec<f64> = (0..c).map(|_| rng.next_range(-2.0, 2.0)).collect();
            let combo: Vec<f64> = u.iter().zip(&v).map(|(a, b)| alpha * a + beta * b).collect();
            let lhs = matvec(&m, &combo).unwrap();
            let mu = matvec(&m, &u).unwrap();
            let mv = matvec(&m, &v).unwrap();
            for i in 0..r {
                let rhs = alpha * mu[i] + beta * mv[i];
                let scale = lhs[i].abs().max(rhs.abs()).max(1.0);
                prop_assert!((lhs[i] - rhs).abs() / scale < 1e-10);
            }
        }

        #[test]
        fn squared_euclidean_nonnegative_and_zero_iff_equal(
            u in proptest::collection::vec(-10.0f64..10.0, 1..8),
        ) {
            let d = squared_euclidean(&u, &u).unwrap();
            prop_assert_eq!(d, 0.0);
            let mut v = u.clone();
            v[0] += 1.0;
            prop_assert!(squared_euclidean(&u, &v).unwrap() > 0.0);
        }
    }
}
