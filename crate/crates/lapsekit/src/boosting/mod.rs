//! Gradient tree boosting with shrinkage, stochastic row/column
//! subsampling, and a minimum-gain regularizer.
//!
//! Classification uses the logistic loss on raw scores with one-step
//! Newton leaf values; the profit-regression mode uses squared error with
//! mean-residual leaves. Each round fits a regression tree to the current
//! pseudo-residuals and adds its shrunken leaf values to the running
//! scores, so the unrolled model and the staged updates agree exactly.

use ndarray::ArrayView2;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par;

mod tree;

pub use tree::{RegNode, RegTree};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Loss {
    Logistic,
    SquaredError,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoostParams {
    /// Number of boosting rounds M.
    pub nrounds: usize,
    /// Shrinkage applied to every leaf value.
    pub eta: f64,
    /// Minimum split gain; realizes the per-leaf complexity penalty.
    pub gamma_reg: f64,
    pub max_depth: usize,
    /// Minimum observations in each child node.
    pub min_child_weight: usize,
    /// Row-subsample ratio per round.
    pub subsample: f64,
    /// Column-subsample ratio per tree.
    pub colsample_bytree: f64,
    pub loss: Loss,
    pub seed: u64,
}

impl Default for BoostParams {
    fn default() -> Self {
        BoostParams {
            nrounds: 100,
            eta: 0.1,
            gamma_reg: 0.0,
            max_depth: 6,
            min_child_weight: 1,
            subsample: 1.0,
            colsample_bytree: 1.0,
            loss: Loss::Logistic,
            seed: 0,
        }
    }
}

impl BoostParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.eta > 0.0 && self.eta <= 1.0) {
            return Err(Error::config("eta must lie in (0, 1]"));
        }
        if !(self.subsample > 0.0 && self.subsample <= 1.0) {
            return Err(Error::config("subsample must lie in (0, 1]"));
        }
        if !(self.colsample_bytree > 0.0 && self.colsample_bytree <= 1.0) {
            return Err(Error::config("colsample_bytree must lie in (0, 1]"));
        }
        if self.gamma_reg < 0.0 {
            return Err(Error::config("gamma_reg must be non-negative"));
        }
        if self.max_depth == 0 {
            return Err(Error::config("max_depth must be positive"));
        }
        if self.min_child_weight == 0 {
            return Err(Error::config("min_child_weight must be positive"));
        }
        Ok(())
    }
}

/// Fitted boosted ensemble. Leaf values carry the shrinkage factor, so a
/// score is `f0` plus the plain sum of tree outputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoostedModel {
    pub f0: f64,
    pub loss: Loss,
    pub trees: Vec<RegTree>,
    /// Training loss after each round (summed logistic loss, or MSE).
    pub training_curve: Vec<f64>,
    pub n_features: usize,
}

fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

/// Overflow-safe `ln(1 + e^x)`.
fn softplus(x: f64) -> f64 {
    if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

const PROB_CLAMP: f64 = 1e-12;

/// Loss-minimizing constant score for the whole sample: the base-rate
/// log-odds under logistic loss, the target mean under squared error.
/// A degenerate logistic base rate is clamped to `[1/N, 1 - 1/N]`.
pub fn initial_score(targets: &[f64], loss: Loss) -> Result<f64> {
    if targets.is_empty() {
        return Err(Error::EmptyInput("initial_score of empty targets"));
    }
    let n = targets.len() as f64;
    let mean = targets.iter().sum::<f64>() / n;
    match loss {
        Loss::SquaredError => Ok(mean),
        Loss::Logistic => {
            let mut p = mean;
            if p <= 0.0 || p >= 1.0 {
                log::warn!("degenerate base rate {p}; clamping to [1/N, 1 - 1/N]");
                p = p.clamp(1.0 / n, 1.0 - 1.0 / n);
            }
            Ok((p / (1.0 - p)).ln())
        }
    }
}

/// Negative loss gradients at the current scores: `y - sigma(F)` for the
/// logistic loss, `2 (z - F) / N` for mean squared error.
pub fn pseudo_residuals(targets: &[f64], scores: &[f64], loss: Loss) -> Result<Vec<f64>> {
    if targets.len() != scores.len() {
        return Err(Error::LengthMismatch(format!(
            "targets {} vs scores {}",
            targets.len(),
            scores.len()
        )));
    }
    let n = targets.len() as f64;
    Ok(match loss {
        Loss::Logistic => targets
            .iter()
            .zip(scores)
            .map(|(y, f)| y - sigmoid(*f))
            .collect(),
        Loss::SquaredError => targets
            .iter()
            .zip(scores)
            .map(|(z, f)| 2.0 * (z - f) / n)
            .collect(),
    })
}

/// Summed logistic loss of raw scores.
pub fn logistic_loss(labels: &[f64], scores: &[f64]) -> f64 {
    labels
        .iter()
        .zip(scores)
        .map(|(y, &f)| y * softplus(-f) + (1.0 - y) * softplus(f))
        .sum()
}

/// Misclassification rate of probability forecasts, rounding strictly
/// above one half to class 1.
pub fn error_metric(labels: &[u8], probs: &[f64]) -> f64 {
    if labels.is_empty() {
        return 0.0;
    }
    let wrong = labels
        .iter()
        .zip(probs)
        .filter(|(&y, &p)| u8::from(p > 0.5) != y)
        .count();
    wrong as f64 / labels.len() as f64
}

/// In-progress boosting state; one `fit_round` call per tree.
pub struct BoostFit<'a> {
    features: ArrayView2<'a, f64>,
    targets: &'a [f64],
    params: BoostParams,
    rng: ChaCha8Rng,
    pub f0: f64,
    scores: Vec<f64>,
    trees: Vec<RegTree>,
    training_curve: Vec<f64>,
}

impl<'a> BoostFit<'a> {
    pub fn new(
        features: ArrayView2<'a, f64>,
        targets: &'a [f64],
        params: &BoostParams,
    ) -> Result<Self> {
        params.validate()?;
        let n = features.nrows();
        if n == 0 {
            return Err(Error::EmptyInput("boosting::fit requires rows"));
        }
        if targets.len() != n {
            return Err(Error::LengthMismatch(format!(
                "features {n} rows vs {} targets",
                targets.len()
            )));
        }
        if params.loss == Loss::Logistic && targets.iter().any(|y| *y != 0.0 && *y != 1.0) {
            return Err(Error::config("logistic loss requires 0/1 targets"));
        }
        let f0 = initial_score(targets, params.loss)?;
        Ok(BoostFit {
            features,
            targets,
            params: params.clone(),
            rng: ChaCha8Rng::seed_from_u64(params.seed),
            f0,
            scores: vec![f0; n],
            trees: Vec::new(),
            training_curve: Vec::new(),
        })
    }

    pub fn scores(&self) -> &[f64] {
        &self.scores
    }

    pub fn training_curve(&self) -> &[f64] {
        &self.training_curve
    }

    fn sample_without_replacement(&mut self, n: usize, ratio: f64) -> Vec<usize> {
        if ratio >= 1.0 {
            return (0..n).collect();
        }
        let k = ((ratio * n as f64).ceil() as usize).clamp(1, n);
        let mut all: Vec<usize> = (0..n).collect();
        all.partial_shuffle(&mut self.rng, k);
        let mut picked: Vec<usize> = all[..k].to_vec();
        picked.sort_unstable();
        picked
    }

    /// One boosting round: subsample rows and columns, fit a tree to the
    /// current pseudo-residuals, install shrunken leaf values, update every
    /// score, and append the training loss.
    pub fn fit_round(&mut self) -> Result<()> {
        let n = self.features.nrows();
        let rows = self.sample_without_replacement(n, self.params.subsample);
        let cols = self.sample_without_replacement(self.features.ncols(), self.params.colsample_bytree);
        if rows.is_empty() {
            return Err(Error::config("empty row subsample"));
        }

        // tree targets: raw residuals. For squared error the 2/N factor of
        // the exact gradient is constant across rows and would only rescale
        // the split gains, so the tree sees z - F directly.
        let residuals: Vec<f64> = match self.params.loss {
            Loss::Logistic => self
                .targets
                .iter()
                .zip(&self.scores)
                .map(|(y, f)| y - sigmoid(*f))
                .collect(),
            Loss::SquaredError => self
                .targets
                .iter()
                .zip(&self.scores)
                .map(|(z, f)| z - f)
                .collect(),
        };

        let growth = tree::TreeGrowth {
            max_depth: self.params.max_depth,
            min_child_weight: self.params.min_child_weight,
            min_gain: self.params.gamma_reg,
        };

        let mut fitted = match self.params.loss {
            Loss::SquaredError => {
                let leaf = |members: &[usize]| {
                    members.iter().map(|&r| residuals[r]).sum::<f64>() / members.len() as f64
                };
                tree::grow(self.features, &residuals, &rows, &cols, &growth, leaf)
            }
            Loss::Logistic => {
                // one-step Newton: sum of residuals over sum of sigma(1-sigma)
                let scores = &self.scores;
                let leaf = |members: &[usize]| {
                    let mut num = 0.0;
                    let mut den = 0.0;
                    for &r in members {
                        let p = sigmoid(scores[r]).clamp(PROB_CLAMP, 1.0 - PROB_CLAMP);
                        num += residuals[r];
                        den += p * (1.0 - p);
                    }
                    if den > 0.0 {
                        num / den
                    } else {
                        0.0
                    }
                };
                tree::grow(self.features, &residuals, &rows, &cols, &growth, leaf)
            }
        };
        tree::scale_leaves(&mut fitted, self.params.eta);

        let deltas = par::map_indexed(n, |r| fitted.predict_row(self.features, r));
        for (score, delta) in self.scores.iter_mut().zip(deltas) {
            *score += delta;
        }
        self.trees.push(fitted);
        self.training_curve.push(self.current_loss());
        Ok(())
    }

    fn current_loss(&self) -> f64 {
        match self.params.loss {
            Loss::Logistic => logistic_loss(self.targets, &self.scores),
            Loss::SquaredError => {
                let n = self.targets.len() as f64;
                self.targets
                    .iter()
                    .zip(&self.scores)
                    .map(|(z, f)| (z - f) * (z - f))
                    .sum::<f64>()
                    / n
            }
        }
    }

    pub fn into_model(self) -> BoostedModel {
        BoostedModel {
            f0: self.f0,
            loss: self.params.loss,
            trees: self.trees,
            training_curve: self.training_curve,
            n_features: self.features.ncols(),
        }
    }
}

/// Fit a boosted ensemble: `nrounds` staged trees.
pub fn fit(features: ArrayView2<'_, f64>, targets: &[f64], params: &BoostParams) -> Result<BoostedModel> {
    let mut state = BoostFit::new(features, targets, params)?;
    for _ in 0..params.nrounds {
        state.fit_round()?;
    }
    Ok(state.into_model())
}

impl BoostedModel {
    fn check_width(&self, features: ArrayView2<'_, f64>) -> Result<()> {
        if features.ncols() != self.n_features {
            return Err(Error::WidthMismatch {
                expected: self.n_features,
                got: features.ncols(),
            });
        }
        Ok(())
    }

    /// Raw scores: `f0` plus the sum of the (already shrunken) tree leaf
    /// values along each row's path.
    pub fn predict_score(&self, features: ArrayView2<'_, f64>) -> Result<Vec<f64>> {
        self.check_width(features)?;
        Ok(par::map_indexed(features.nrows(), |row| {
            self.f0
                + self
                    .trees
                    .iter()
                    .map(|t| t.predict_row(features, row))
                    .sum::<f64>()
        }))
    }

    /// Class labels: under the logistic loss, 1 when `sigma(score)` exceeds
    /// one half strictly; under squared error, 1 when the estimated gain is
    /// strictly positive.
    pub fn predict_class(&self, features: ArrayView2<'_, f64>) -> Result<Vec<u8>> {
        let scores = self.predict_score(features)?;
        Ok(match self.loss {
            Loss::Logistic => scores.iter().map(|s| u8::from(sigmoid(*s) > 0.5)).collect(),
            Loss::SquaredError => scores.iter().map(|s| u8::from(*s > 0.0)).collect(),
        })
    }

    /// Lapse probabilities (logistic mode only).
    pub fn predict_prob(&self, features: ArrayView2<'_, f64>) -> Result<Vec<f64>> {
        if self.loss != Loss::Logistic {
            return Err(Error::config("probabilities require the logistic loss"));
        }
        Ok(self
            .predict_score(features)?
            .into_iter()
            .map(sigmoid)
            .collect())
    }
}
