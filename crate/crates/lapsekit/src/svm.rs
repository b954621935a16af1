//! Soft-margin SVM with an RBF kernel, trained by sequential minimal
//! optimization on the dual problem.
//!
//! The solver is Platt-style SMO: alternating full and non-bound sweeps,
//! a second-choice heuristic picking the partner with the largest error
//! gap, seeded random fallbacks, and a full error cache updated from the
//! two working kernel rows of each successful step.

use ndarray::ArrayView2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SvmParams {
    /// Soft-margin penalty C.
    pub cost: f64,
    /// RBF kernel width gamma.
    pub kernel_gamma: f64,
    /// KKT violation tolerance.
    pub tolerance: f64,
    /// Consecutive violator-free full sweeps required to declare
    /// convergence.
    pub max_passes: usize,
    pub seed: u64,
    /// Kernel SMO is quadratic-plus in the sample size; training on more
    /// than 50,000 rows is refused unless this is set.
    #[serde(default)]
    pub allow_large: bool,
}

impl Default for SvmParams {
    fn default() -> Self {
        SvmParams {
            cost: 1.0,
            kernel_gamma: 0.5,
            tolerance: 1e-3,
            max_passes: 10,
            seed: 0,
            allow_large: false,
        }
    }
}

const DESK_SCALE_LIMIT: usize = 50_000;
/// Hard cap on total sweeps; hitting it returns the best iterate with
/// `converged = false`.
const MAX_SWEEPS: usize = 500;
/// Minimum meaningful alpha change in one step.
const STEP_EPS: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SvmModel {
    /// Rows with alpha > 0.
    pub support_vectors: Vec<Vec<f64>>,
    /// alpha_i * y_i per stored row, labels in {-1, +1}.
    pub alphas_times_labels: Vec<f64>,
    pub bias: f64,
    pub kernel_gamma: f64,
    pub converged: bool,
}

/// RBF kernel `exp(-gamma * ||a - b||^2)`.
pub fn rbf_kernel(a: &[f64], b: &[f64], kernel_gamma: f64) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::WidthMismatch {
            expected: a.len(),
            got: b.len(),
        });
    }
    let sq: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
    Ok((-kernel_gamma * sq).exp())
}

fn kernel_row(features: ArrayView2<'_, f64>, i: usize, gamma: f64) -> Vec<f64> {
    let xi: Vec<f64> = features.row(i).to_vec();
    par::map_indexed(features.nrows(), |j| {
        let mut sq = 0.0;
        for (a, b) in xi.iter().zip(features.row(j)) {
            sq += (a - b) * (a - b);
        }
        (-gamma * sq).exp()
    })
}

struct Smo<'a> {
    features: ArrayView2<'a, f64>,
    y: Vec<f64>,
    c: f64,
    gamma: f64,
    tol: f64,
    alpha: Vec<f64>,
    b: f64,
    /// E_i = f(x_i) - y_i for every training row.
    errors: Vec<f64>,
    rng: ChaCha8Rng,
}

impl<'a> Smo<'a> {
    fn non_bound(&self, i: usize) -> bool {
        self.alpha[i] > 0.0 && self.alpha[i] < self.c
    }

    fn take_step(&mut self, i1: usize, i2: usize) -> bool {
        if i1 == i2 {
            return false;
        }
        let (a1, a2) = (self.alpha[i1], self.alpha[i2]);
        let (y1, y2) = (self.y[i1], self.y[i2]);
        let (e1, e2) = (self.errors[i1], self.errors[i2]);
        let s = y1 * y2;

        let (lo, hi) = if s < 0.0 {
            ((a2 - a1).max(0.0), (self.c + a2 - a1).min(self.c))
        } else {
            ((a2 + a1 - self.c).max(0.0), (a2 + a1).min(self.c))
        };
        if lo >= hi {
            return false;
        }

        let row1 = kernel_row(self.features, i1, self.gamma);
        let row2 = kernel_row(self.features, i2, self.gamma);
        let (k11, k12, k22) = (row1[i1], row1[i2], row2[i2]);
        let eta = k11 + k22 - 2.0 * k12;

        let mut a2_new = if eta > 0.0 {
            (a2 + y2 * (e1 - e2) / eta).clamp(lo, hi)
        } else {
            // objective at the box ends (minimization form)
            let f1 = y1 * (e1 + self.b) - a1 * k11 - s * a2 * k12;
            let f2 = y2 * (e2 + self.b) - s * a1 * k12 - a2 * k22;
            let l1 = a1 + s * (a2 - lo);
            let h1 = a1 + s * (a2 - hi);
            let lobj = l1 * f1 + lo * f2 + 0.5 * l1 * l1 * k11 + 0.5 * lo * lo * k22
                + s * lo * l1 * k12;
            let hobj = h1 * f1 + hi * f2 + 0.5 * h1 * h1 * k11 + 0.5 * hi * hi * k22
                + s * hi * h1 * k12;
            if lobj < hobj - 1e-12 {
                lo
            } else if lobj > hobj + 1e-12 {
                hi
            } else {
                a2
            }
        };
        if (a2_new - a2).abs() < STEP_EPS * (a2_new + a2 + STEP_EPS) {
            return false;
        }
        // snap to the box to keep the equality constraint exact
        if a2_new < 1e-12 {
            a2_new = 0.0;
        } else if a2_new > self.c - 1e-12 {
            a2_new = self.c;
        }
        let a1_new = a1 + s * (a2 - a2_new);
        let a1_new = if a1_new < 1e-12 {
            0.0
        } else if a1_new > self.c - 1e-12 {
            self.c
        } else {
            a1_new
        };

        let d1 = y1 * (a1_new - a1);
        let d2 = y2 * (a2_new - a2);
        let b1 = self.b - e1 - d1 * k11 - d2 * k12;
        let b2 = self.b - e2 - d1 * k12 - d2 * k22;
        let b_new = if a1_new > 0.0 && a1_new < self.c {
            b1
        } else if a2_new > 0.0 && a2_new < self.c {
            b2
        } else {
            0.5 * (b1 + b2)
        };
        let db = b_new - self.b;

        for k in 0..self.y.len() {
            self.errors[k] += d1 * row1[k] + d2 * row2[k] + db;
        }
        self.alpha[i1] = a1_new;
        self.alpha[i2] = a2_new;
        self.b = b_new;
        true
    }

    fn examine(&mut self, i2: usize) -> bool {
        let y2 = self.y[i2];
        let a2 = self.alpha[i2];
        let e2 = self.errors[i2];
        let r2 = e2 * y2;
        let violates = (r2 < -self.tol && a2 < self.c) || (r2 > self.tol && a2 > 0.0);
        if !violates {
            return false;
        }
        let n = self.y.len();

        // second-choice heuristic: largest |E1 - E2| over non-bound rows
        let mut best: Option<(usize, f64)> = None;
        for i1 in 0..n {
            if self.non_bound(i1) {
                let gap = (self.errors[i1] - e2).abs();
                if best.is_none_or(|(_, g)| gap > g) {
                    best = Some((i1, gap));
                }
            }
        }
        if let Some((i1, _)) = best {
            if self.take_step(i1, i2) {
                return true;
            }
        }
        // fall back to all non-bound rows from a random start
        let start = self.rng.random_range(0..n);
        for k in 0..n {
            let i1 = (start + k) % n;
            if self.non_bound(i1) && self.take_step(i1, i2) {
                return true;
            }
        }
        // then the whole set from a random start
        let start = self.rng.random_range(0..n);
        for k in 0..n {
            let i1 = (start + k) % n;
            if self.take_step(i1, i2) {
                return true;
            }
        }
        false
    }
}

/// Train on 0/1 labels (mapped internally to -1/+1).
pub fn fit(features: ArrayView2<'_, f64>, labels: &[u8], params: &SvmParams) -> Result<SvmModel> {
    let n = features.nrows();
    if n < 2 {
        return Err(Error::EmptyInput("svm::fit requires at least two rows"));
    }
    if labels.len() != n {
        return Err(Error::LengthMismatch(format!(
            "features {n} rows vs {} labels",
            labels.len()
        )));
    }
    if n > DESK_SCALE_LIMIT && !params.allow_large {
        return Err(Error::config(format!(
            "training rows {n} exceed the desk-scale limit {DESK_SCALE_LIMIT}; set allow_large to override"
        )));
    }
    let pos = labels.iter().filter(|&&y| y != 0).count();
    if pos == 0 || pos == n {
        return Err(Error::SingleClass);
    }
    if params.cost <= 0.0 || params.kernel_gamma <= 0.0 {
        return Err(Error::config("cost and kernel_gamma must be positive"));
    }

    let y: Vec<f64> = labels.iter().map(|&l| if l != 0 { 1.0 } else { -1.0 }).collect();
    let errors: Vec<f64> = y.iter().map(|yi| -yi).collect(); // f = 0 initially
    let mut smo = Smo {
        features,
        y,
        c: params.cost,
        gamma: params.kernel_gamma,
        tol: params.tolerance,
        alpha: vec![0.0; n],
        b: 0.0,
        errors,
        rng: ChaCha8Rng::seed_from_u64(params.seed),
    };

    let mut examine_all = true;
    let mut stall = 0usize;
    let mut sweeps = 0usize;
    let mut converged = false;
    while sweeps < MAX_SWEEPS {
        sweeps += 1;
        let mut changed = 0usize;
        if examine_all {
            for i in 0..n {
                changed += usize::from(smo.examine(i));
            }
        } else {
            for i in 0..n {
                if smo.non_bound(i) {
                    changed += usize::from(smo.examine(i));
                }
            }
        }
        if examine_all {
            if changed == 0 {
                stall += 1;
                if stall >= params.max_passes {
                    converged = true;
                    break;
                }
            } else {
                stall = 0;
                examine_all = false;
            }
        } else if changed == 0 {
            examine_all = true;
        }
    }
    if !converged {
        log::warn!("SMO hit the sweep cap ({MAX_SWEEPS}) before satisfying KKT; returning best iterate");
    }

    // bias from non-bound support vectors when any exist
    let non_bound: Vec<usize> = (0..n).filter(|&i| smo.non_bound(i)).collect();
    let bias = if non_bound.is_empty() {
        smo.b
    } else {
        let mut sum = 0.0;
        for &i in &non_bound {
            let row = kernel_row(features, i, params.kernel_gamma);
            let f_no_bias: f64 = (0..n).map(|j| smo.alpha[j] * smo.y[j] * row[j]).sum();
            sum += smo.y[i] - f_no_bias;
        }
        sum / non_bound.len() as f64
    };

    let mut support_vectors = Vec::new();
    let mut alphas_times_labels = Vec::new();
    for i in 0..n {
        if smo.alpha[i] > 0.0 {
            support_vectors.push(features.row(i).to_vec());
            alphas_times_labels.push(smo.alpha[i] * smo.y[i]);
        }
    }

    let model = SvmModel {
        support_vectors,
        alphas_times_labels,
        bias,
        kernel_gamma: params.kernel_gamma,
        converged,
    };
    debug_assert!(model.alphas_times_labels.iter().sum::<f64>().abs() <= 1e-8);
    Ok(model)
}

impl SvmModel {
    pub fn n_support(&self) -> usize {
        self.support_vectors.len()
    }

    fn check_width(&self, features: ArrayView2<'_, f64>) -> Result<()> {
        let expected = self.support_vectors.first().map_or(0, Vec::len);
        if features.ncols() != expected {
            return Err(Error::WidthMismatch {
                expected,
                got: features.ncols(),
            });
        }
        Ok(())
    }

    /// Kernel-expansion decision values `f(x) = sum a_i y_i K(x_i, x) + b`.
    pub fn decision_values(&self, features: ArrayView2<'_, f64>) -> Result<Vec<f64>> {
        self.check_width(features)?;
        Ok(par::map_indexed(features.nrows(), |r| {
            let x: Vec<f64> = features.row(r).to_vec();
            let mut f = self.bias;
            for (sv, ay) in self.support_vectors.iter().zip(&self.alphas_times_labels) {
                let mut sq = 0.0;
                for (a, b) in sv.iter().zip(&x) {
                    sq += (a - b) * (a - b);
                }
                f += ay * (-self.kernel_gamma * sq).exp();
            }
            f
        }))
    }

    /// 1 on the strictly positive side of the boundary, 0 otherwise.
    pub fn predict(&self, features: ArrayView2<'_, f64>) -> Result<Vec<u8>> {
        Ok(self
            .decision_values(features)?
            .into_iter()
            .map(|f| u8::from(f > 0.0))
            .collect())
    }

    /// Dual objective of the stored solution (zero alphas drop out):
    /// `sum a_i - 1/2 sum_ij a_i a_j y_i y_j K_ij`.
    pub fn dual_objective(&self) -> f64 {
        let m = self.support_vectors.len();
        let mut obj: f64 = self.alphas_times_labels.iter().map(|ay| ay.abs()).sum();
        for i in 0..m {
            for j in 0..m {
                let k = rbf_kernel(
                    &self.support_vectors[i],
                    &self.support_vectors[j],
                    self.kernel_gamma,
                )
                .expect("stored rows share a width");
                obj -= 0.5 * self.alphas_times_labels[i] * self.alphas_times_labels[j] * k;
            }
        }
        obj
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::{array, Array2};

    // ---- QP oracle: projected gradient ascent on the dual ----------------

    /// Projection onto `{0 <= a <= C} ∩ {y·a = 0}` by bisection on the
    /// equality multiplier.
    fn project(alpha0: &[f64], y: &[f64], c: f64) -> Vec<f64> {
        let h = |lambda: f64| -> f64 {
            alpha0
                .iter()
                .zip(y)
                .map(|(a, yi)| yi * (a - lambda * yi).clamp(0.0, c))
                .sum()
        };
        let (mut lo, mut hi) = (-1e6, 1e6);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if h(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let lambda = 0.5 * (lo + hi);
        alpha0
            .iter()
            .zip(y)
            .map(|(a, yi)| (a - lambda * yi).clamp(0.0, c))
            .collect()
    }

    fn dual_value(k: &Array2<f64>, y: &[f64], alpha: &[f64]) -> f64 {
        let n = y.len();
        let mut obj: f64 = alpha.iter().sum();
        for i in 0..n {
            for j in 0..n {
                obj -= 0.5 * alpha[i] * alpha[j] * y[i] * y[j] * k[[i, j]];
            }
        }
        obj
    }

    /// Dense projected-gradient solve of the dual, run to tight
    /// convergence. Independent oracle for small instances.
    fn qp_oracle(features: &Array2<f64>, labels: &[u8], c: f64, gamma: f64) -> (Vec<f64>, f64) {
        let n = features.nrows();
        let y: Vec<f64> = labels.iter().map(|&l| if l != 0 { 1.0 } else { -1.0 }).collect();
        let mut k = Array2::zeros((n, n));
        for i in 0..n {
            for j in 0..n {
                k[[i, j]] = rbf_kernel(
                    features.row(i).as_slice().unwrap(),
                    features.row(j).as_slice().unwrap(),
                    gamma,
                )
                .unwrap();
            }
        }
        let lipschitz: f64 = (0..n)
            .map(|i| (0..n).map(|j| k[[i, j]].abs()).sum::<f64>())
            .fold(1.0f64, f64::max);
        let step = 1.0 / lipschitz;
        let mut alpha = vec![0.0; n];
        for _ in 0..60_000 {
            let mut grad = vec![1.0; n];
            for i in 0..n {
                let mut dot = 0.0;
                for j in 0..n {
                    dot += alpha[j] * y[j] * k[[i, j]];
                }
                grad[i] -= y[i] * dot;
            }
            let trial: Vec<f64> =
                alpha.iter().zip(&grad).map(|(a, g)| a + step * g).collect();
            alpha = project(&trial, &y, c);
        }
        let obj = dual_value(&k, &y, &alpha);
        (alpha, obj)
    }

    fn blobs(n_per: usize, seed: u64) -> (Array2<f64>, Vec<u8>) {
        use rand::{Rng, SeedableRng};
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut feats = Vec::new();
        let mut labels = Vec::new();
        for i in 0..2 * n_per {
            let class = i % 2;
            let center = if class == 0 { -2.0 } else { 2.0 };
            feats.push(center + rng.random_range(-1.0..1.0));
            feats.push(center + rng.random_range(-1.0..1.0));
            labels.push(class as u8);
        }
        (
            Array2::from_shape_vec((2 * n_per, 2), feats).unwrap(),
            labels,
        )
    }

    #[test]
    fn rbf_kernel_examples() {
        assert_eq!(rbf_kernel(&[1.0, 2.0], &[1.0, 2.0], 0.7).unwrap(), 1.0);
        let v = rbf_kernel(&[0.0], &[1.0], 1.0).unwrap();
        assert!((v - (-1.0f64).exp()).abs() < 1e-12);
        let tiny = rbf_kernel(&[0.0], &[1.0], 800.0).unwrap();
        assert!(tiny < 1e-300);
        assert!(rbf_kernel(&[0.0], &[1.0, 2.0], 1.0).is_err());
    }

    #[test]
    fn two_point_problem_solved_analytically() {
        // alpha1 = alpha2 = 1 / (1 - K12), b = 0, f(0) = 0
        let features = array![[-1.0], [1.0]];
        let labels = [0u8, 1];
        let gamma = 0.5;
        let params = SvmParams {
            cost: 100.0,
            kernel_gamma: gamma,
            tolerance: 1e-6,
            ..SvmParams::default()
        };
        let model = fit(features.view(), &labels, &params).unwrap();
        assert!(model.converged);
        assert_eq!(model.n_support(), 2);
        let expected_alpha = 1.0 / (1.0 - (-4.0 * gamma as f64).exp());
        for (ay, want_y) in model.alphas_times_labels.iter().zip([-1.0, 1.0]) {
            assert!(
                (ay - want_y * expected_alpha).abs() < 1e-6,
                "alpha*y {ay} vs {}",
                want_y * expected_alpha
            );
        }
        assert!(model.bias.abs() < 1e-9);
        let f0 = model.decision_values(array![[0.0]].view()).unwrap()[0];
        assert!(f0.abs() < 1e-9);
        for x in [-0.9, -0.3, 0.2, 0.8] {
            let f = model.decision_values(array![[x]].view()).unwrap()[0];
            assert_eq!(f > 0.0, x > 0.0, "sign at {x}");
        }
    }

    #[test]
    fn separable_blobs_perfect_training_accuracy_and_qp_match() {
        let (features, labels) = blobs(15, 4);
        let params = SvmParams {
            cost: 10.0,
            kernel_gamma: 0.5,
            tolerance: 1e-4,
            ..SvmParams::default()
        };
        let model = fit(features.view(), &labels, &params).unwrap();
        assert_eq!(model.predict(features.view()).unwrap(), labels);

        let (_, qp_obj) = qp_oracle(&features, &labels, params.cost, params.kernel_gamma);
        let smo_obj = model.dual_objective();
        assert!(
            (smo_obj - qp_obj).abs() <= 1e-4 * qp_obj.abs().max(1.0),
            "smo objective {smo_obj} vs qp oracle {qp_obj}"
        );
    }

    #[test]
    fn conflicting_duplicates_hit_the_bound() {
        let features = array![[0.0], [0.0], [3.0], [-3.0]];
        let labels = [1u8, 0, 1, 0];
        let params = SvmParams {
            cost: 2.0,
            kernel_gamma: 1.0,
            ..SvmParams::default()
        };
        let model = fit(features.view(), &labels, &params).unwrap();
        // the two conflicting points cannot both be satisfied; their alphas
        // saturate at C
        let at_bound = model
            .alphas_times_labels
            .iter()
            .filter(|ay| (ay.abs() - params.cost).abs() < 1e-9)
            .count();
        assert!(at_bound >= 2, "expected bound alphas, got {model:?}");
        let sum: f64 = model.alphas_times_labels.iter().sum();
        assert!(sum.abs() <= 1e-8);
    }

    #[test]
    fn dual_feasibility_and_kkt_on_random_instances() {
        use rand::{Rng, SeedableRng};
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for case in 0..5 {
            let n = 24;
            let features = Array2::from_shape_fn((n, 2), |_| rng.random_range(-2.0..2.0f64));
            let labels: Vec<u8> = (0..n)
                .map(|r| u8::from(features[[r, 0]] + 0.5 * features[[r, 1]] > 0.0))
                .collect();
            if labels.iter().all(|&y| y == labels[0]) {
                continue;
            }
            let params = SvmParams {
                cost: 5.0,
                kernel_gamma: 0.8,
                tolerance: 1e-3,
                seed: case,
                ..SvmParams::default()
            };
            let model = fit(features.view(), &labels, &params).unwrap();
            assert!(model.converged);
            // 0 <= alpha <= C and the equality constraint
            for ay in &model.alphas_times_labels {
                assert!(ay.abs() <= params.cost + 1e-9);
            }
            assert!(model.alphas_times_labels.iter().sum::<f64>().abs() <= 1e-8);
            // KKT at non-bound support vectors: y f(x) within tolerance of 1
            let sv_feats = Array2::from_shape_vec(
                (model.n_support(), 2),
                model.support_vectors.iter().flatten().copied().collect(),
            )
            .unwrap();
            let f = model.decision_values(sv_feats.view()).unwrap();
            for (i, ay) in model.alphas_times_labels.iter().enumerate() {
                let alpha = ay.abs();
                if alpha > 1e-9 && alpha < params.cost - 1e-9 {
                    let y = ay.signum();
                    assert!(
                        (y * f[i] - 1.0).abs() <= params.tolerance * 1.1 + 1e-6,
                        "kkt violation at sv {i}: y f = {}",
                        y * f[i]
                    );
                }
            }
        }
    }

    #[test]
    fn predictions_invariant_under_row_permutation() {
        let (features, labels) = blobs(12, 9);
        let params = SvmParams {
            cost: 3.0,
            kernel_gamma: 0.6,
            tolerance: 1e-6,
            ..SvmParams::default()
        };
        let a = fit(features.view(), &labels, &params).unwrap();

        let n = features.nrows();
        let perm: Vec<usize> = (0..n).map(|i| (i * 7 + 3) % n).collect();
        let mut pf = Array2::zeros((n, 2));
        let mut pl = vec![0u8; n];
        for (new, &old) in perm.iter().enumerate() {
            pf.row_mut(new).assign(&features.row(old));
            pl[new] = labels[old];
        }
        let b = fit(pf.view(), &pl, &params).unwrap();

        let grid = Array2::from_shape_fn((9, 2), |(r, c)| {
            let v = [-3.0, -1.5, 1.5][r % 3];
            if c == 0 {
                v
            } else {
                [-3.0, 0.5, 3.0][r / 3]
            }
        });
        let fa = a.decision_values(grid.view()).unwrap();
        let fb = b.decision_values(grid.view()).unwrap();
        for (x, y) in fa.iter().zip(&fb) {
            assert!((x - y).abs() < 1e-3, "{x} vs {y}");
        }
        assert_eq!(
            a.predict(grid.view()).unwrap(),
            b.predict(grid.view()).unwrap()
        );
    }

    #[test]
    fn single_class_and_scale_guard() {
        let features = Array2::zeros((4, 1));
        assert!(matches!(
            fit(features.view(), &[1, 1, 1, 1], &SvmParams::default()),
            Err(Error::SingleClass)
        ));

        let big = Array2::zeros((DESK_SCALE_LIMIT + 1, 1));
        let labels: Vec<u8> = (0..DESK_SCALE_LIMIT + 1).map(|i| (i % 2) as u8).collect();
        assert!(matches!(
            fit(big.view(), &labels, &SvmParams::default()),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn boundary_predicts_stay() {
        let model = SvmModel {
            support_vectors: vec![vec![0.0]],
            alphas_times_labels: vec![1.0],
            bias: -1.0, // f(0) = 1*K(0,0) - 1 = 0 exactly
            kernel_gamma: 1.0,
            converged: true,
        };
        assert_eq!(model.predict(array![[0.0]].view()).unwrap(), vec![0]);
        assert_eq!(model.predict(array![[0.4]].view()).unwrap(), vec![0]);
        let positive = SvmModel {
            bias: 0.5,
            ..model.clone()
        };
        assert_eq!(positive.predict(array![[0.0]].view()).unwrap(), vec![1]);
    }
}
