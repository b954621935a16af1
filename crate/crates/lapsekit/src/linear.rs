//! Logistic regression by maximum likelihood: Newton / iteratively
//! reweighted least squares with step halving, a ridge-jitter fallback for
//! singular normal equations, and divergence detection for separable data.

use ndarray::ArrayView2;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogitModel {
    pub intercept: f64,
    pub coefficients: Vec<f64>,
    pub converged: bool,
    pub n_iterations: usize,
}

fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

fn softplus(x: f64) -> f64 {
    if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

/// Coefficient norm beyond which a non-vanishing gradient is read as
/// separation (the MLE diverges on separable data).
const SEPARATION_NORM: f64 = 1e3;

/// Margin at which a fitted logit counts as saturated. When every training
/// point sits this far on its own side, the likelihood has no finite
/// maximizer and the iteration is chasing infinity.
const SEPARATION_MARGIN: f64 = 15.0;

fn logits(features: ArrayView2<'_, f64>, intercept: f64, coefficients: &[f64]) -> Vec<f64> {
    (0..features.nrows())
        .map(|r| {
            intercept
                + coefficients
                    .iter()
                    .enumerate()
                    .map(|(c, b)| b * features[[r, c]])
                    .sum::<f64>()
        })
        .collect()
}

/// Bernoulli log-likelihood of the labels under the model, evaluated
/// overflow-safely as `sum(y f - ln(1 + e^f))`.
pub fn log_likelihood(
    features: ArrayView2<'_, f64>,
    labels: &[u8],
    intercept: f64,
    coefficients: &[f64],
) -> f64 {
    logits(features, intercept, coefficients)
        .iter()
        .zip(labels)
        .map(|(f, &y)| f64::from(y) * f - softplus(*f))
        .sum()
}

/// Gradient of the log-likelihood in `[intercept, coefficients...]` order:
/// `X^T (y - p)` with the intercept as an all-ones column.
pub fn gradient(
    features: ArrayView2<'_, f64>,
    labels: &[u8],
    intercept: f64,
    coefficients: &[f64],
) -> Vec<f64> {
    let d = coefficients.len();
    let mut g = vec![0.0; d + 1];
    for (r, f) in logits(features, intercept, coefficients).iter().enumerate() {
        let resid = f64::from(labels[r]) - sigmoid(*f);
        g[0] += resid;
        for c in 0..d {
            g[c + 1] += resid * features[[r, c]];
        }
    }
    g
}

/// In-place Cholesky solve of a symmetric positive-definite system.
/// Returns false when a pivot fails, leaving the caller to add jitter.
fn cholesky_solve(a: &mut [f64], b: &mut [f64], d: usize) -> bool {
    for j in 0..d {
        let mut pivot = a[j * d + j];
        for k in 0..j {
            pivot -= a[j * d + k] * a[j * d + k];
        }
        if pivot <= 0.0 || !pivot.is_finite() {
            return false;
        }
        let pivot = pivot.sqrt();
        a[j * d + j] = pivot;
        for i in j + 1..d {
            let mut v = a[i * d + j];
            for k in 0..j {
                v -= a[i * d + k] * a[j * d + k];
            }
            a[i * d + j] = v / pivot;
        }
    }
    // forward then backward substitution
    for i in 0..d {
        let mut v = b[i];
        for k in 0..i {
            v -= a[i * d + k] * b[k];
        }
        b[i] = v / a[i * d + i];
    }
    for i in (0..d).rev() {
        let mut v = b[i];
        for k in i + 1..d {
            v -= a[k * d + i] * b[k];
        }
        b[i] = v / a[i * d + i];
    }
    true
}

/// Maximum-likelihood fit. Returns with `converged = false` when the
/// gradient has not vanished by `max_iter` or the data are separable.
pub fn fit(
    features: ArrayView2<'_, f64>,
    labels: &[u8],
    max_iter: usize,
    grad_tol: f64,
) -> Result<LogitModel> {
    let n = features.nrows();
    if n == 0 {
        return Err(Error::EmptyInput("linear::fit requires rows"));
    }
    if labels.len() != n {
        return Err(Error::LengthMismatch(format!(
            "features {n} rows vs {} labels",
            labels.len()
        )));
    }
    let pos = labels.iter().filter(|&&y| y != 0).count();
    if pos == 0 || pos == n {
        return Err(Error::SingleClass);
    }

    let d = features.ncols() + 1; // intercept first
    let mut beta = vec![0.0; d];
    let mut ll = log_likelihood(features, labels, beta[0], &beta[1..]);
    let mut converged = false;
    let mut iterations = 0;

    for iter in 0..max_iter {
        iterations = iter + 1;
        let g = gradient(features, labels, beta[0], &beta[1..]);
        let g_max = g.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if g_max <= grad_tol {
            converged = true;
            iterations = iter;
            break;
        }

        // weighted normal equations H = X^T W X, W = diag(p (1 - p))
        let mut h = vec![0.0; d * d];
        let f = logits(features, beta[0], &beta[1..]);
        for (r, fr) in f.iter().enumerate() {
            let p = sigmoid(*fr);
            let w = (p * (1.0 - p)).max(1e-12);
            // row design vector is [1, x_r1, ..., x_rk]
            for i in 0..d {
                let xi = if i == 0 { 1.0 } else { features[[r, i - 1]] };
                for j in 0..=i {
                    let xj = if j == 0 { 1.0 } else { features[[r, j - 1]] };
                    h[i * d + j] += w * xi * xj;
                }
            }
        }
        for i in 0..d {
            for j in i + 1..d {
                h[i * d + j] = h[j * d + i];
            }
        }

        let mut step = g.clone();
        let mut solved = cholesky_solve(&mut h.clone(), &mut step, d);
        if !solved {
            log::warn!("singular normal equations; retrying with ridge jitter");
            let mut jitter = 1e-8;
            while !solved && jitter <= 1e-2 {
                let mut hj = h.clone();
                for i in 0..d {
                    hj[i * d + i] += jitter;
                }
                step = g.clone();
                solved = cholesky_solve(&mut hj, &mut step, d);
                jitter *= 100.0;
            }
            if !solved {
                return Err(Error::Inconsistency(
                    "normal equations unsolvable even with ridge jitter".to_string(),
                ));
            }
        }

        // step halving keeps the likelihood non-decreasing
        let mut lambda = 1.0;
        loop {
            let trial: Vec<f64> = beta.iter().zip(&step).map(|(b, s)| b + lambda * s).collect();
            let trial_ll = log_likelihood(features, labels, trial[0], &trial[1..]);
            if trial_ll >= ll - 1e-12 || lambda < 1e-10 {
                debug_assert!(trial_ll >= ll - 1e-6, "likelihood dropped: {ll} -> {trial_ll}");
                beta = trial;
                ll = trial_ll;
                break;
            }
            lambda *= 0.5;
        }

        let fitted = logits(features, beta[0], &beta[1..]);
        let all_saturated = fitted.iter().zip(labels).all(|(f, &y)| {
            if y != 0 {
                *f > SEPARATION_MARGIN
            } else {
                *f < -SEPARATION_MARGIN
            }
        });
        let norm = beta.iter().fold(0.0f64, |m, b| m.max(b.abs()));
        if all_saturated || norm > SEPARATION_NORM {
            log::warn!("coefficient norm {norm:.1} with gradient {g_max:.2e}: data look separable");
            break;
        }
    }

    Ok(LogitModel {
        intercept: beta[0],
        coefficients: beta[1..].to_vec(),
        converged,
        n_iterations: iterations,
    })
}

impl LogitModel {
    fn check_width(&self, features: ArrayView2<'_, f64>) -> Result<()> {
        if features.ncols() != self.coefficients.len() {
            return Err(Error::WidthMismatch {
                expected: self.coefficients.len(),
                got: features.ncols(),
            });
        }
        Ok(())
    }

    pub fn predict_prob(&self, features: ArrayView2<'_, f64>) -> Result<Vec<f64>> {
        self.check_width(features)?;
        Ok(logits(features, self.intercept, &self.coefficients)
            .into_iter()
            .map(sigmoid)
            .collect())
    }

    /// Class 1 exactly when the probability exceeds one half strictly.
    pub fn predict_class(&self, features: ArrayView2<'_, f64>) -> Result<Vec<u8>> {
        Ok(self
            .predict_prob(features)?
            .into_iter()
            .map(|p| u8::from(p > 0.5))
            .collect())
    }
}
