//! CART binary classifier: Gini-impurity splitting, saturated growth, and
//! cost-complexity pruning with cross-validated size selection.

use ndarray::ArrayView2;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CartParams {
    /// Smallest number of observations allowed in a leaf during growth.
    pub min_node_size: usize,
    /// Folds used to pick the pruned subtree size.
    pub cv_folds: usize,
    pub seed: u64,
}

impl Default for CartParams {
    fn default() -> Self {
        CartParams {
            min_node_size: 5,
            cv_folds: 10,
            seed: 0,
        }
    }
}

/// Decision-tree node. Equal feature values route left.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "node", rename_all = "snake_case")]
pub enum TreeNode {
    Internal {
        feature_index: usize,
        threshold: f64,
        left: Box<TreeNode>,
        right: Box<TreeNode>,
    },
    Leaf {
        predicted_class: u8,
        /// Share of positive (lapse) labels among the training rows that
        /// reached this leaf.
        class_proportion: f64,
        n_obs: usize,
    },
}

impl TreeNode {
    pub fn n_leaves(&self) -> usize {
        match self {
            TreeNode::Leaf { .. } => 1,
            TreeNode::Internal { left, right, .. } => left.n_leaves() + right.n_leaves(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CartModel {
    pub root: TreeNode,
    pub n_leaves: usize,
    pub n_features: usize,
    /// `(subtree size, CV misclassification error)` per pruning candidate,
    /// largest tree first.
    pub pruning_trace: Vec<(usize, f64)>,
}

/// Gini impurity of a node: `N_l * p_l * (1 - p_l)`.
pub fn gini_impurity(labels: &[u8]) -> Result<f64> {
    if labels.is_empty() {
        return Err(Error::EmptyInput("gini_impurity of an empty node"));
    }
    let n = labels.len() as f64;
    let pos = labels.iter().filter(|&&y| y != 0).count() as f64;
    Ok(pos * (n - pos) / n)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Split {
    pub feature_index: usize,
    pub threshold: f64,
    pub gain: f64,
}

fn count_impurity(pos: usize, n: usize) -> f64 {
    if n == 0 {
        0.0
    } else {
        let pos = pos as f64;
        let n = n as f64;
        pos * (n - pos) / n
    }
}

/// Exhaustive best split of the rows in `rows`: every feature, every
/// midpoint between consecutive distinct sorted values, subject to each
/// child holding at least `min_node_size` rows. Returns the impurity-gain
/// maximizer with ties broken toward the lowest feature index, then the
/// lowest threshold. `None` when the node is pure or no feasible candidate
/// exists.
pub fn best_split(
    features: ArrayView2<'_, f64>,
    labels: &[u8],
    rows: &[usize],
    min_node_size: usize,
) -> Option<Split> {
    let n = rows.len();
    if n < 2 * min_node_size.max(1) {
        return None;
    }
    let total_pos = rows.iter().filter(|&&r| labels[r] != 0).count();
    if total_pos == 0 || total_pos == n {
        return None; // pure
    }
    let parent = count_impurity(total_pos, n);

    let mut best: Option<Split> = None;
    let mut sorted: Vec<(f64, u8)> = Vec::with_capacity(n);
    for feature in 0..features.ncols() {
        sorted.clear();
        sorted.extend(rows.iter().map(|&r| (features[[r, feature]], labels[r])));
        sorted.sort_by(|a, b| a.0.total_cmp(&b.0));

        let mut left_pos = 0usize;
        for i in 0..n - 1 {
            left_pos += usize::from(sorted[i].1 != 0);
            let left_n = i + 1;
            let right_n = n - left_n;
            if left_n < min_node_size || right_n < min_node_size {
                continue;
            }
            if sorted[i].0 == sorted[i + 1].0 {
                continue; // not a boundary between distinct values
            }
            let gain = parent
                - count_impurity(left_pos, left_n)
                - count_impurity(total_pos - left_pos, right_n);
            let threshold = 0.5 * (sorted[i].0 + sorted[i + 1].0);
            let better = match &best {
                None => true,
                Some(b) => gain > b.gain,
            };
            if better {
                best = Some(Split {
                    feature_index: feature,
                    threshold,
                    gain,
                });
            }
        }
    }
    best
}

// ---- growth arena -----------------------------------------------------------

#[derive(Debug, Clone)]
struct ArenaNode {
    feature: usize,
    threshold: f64,
    left: usize,
    right: usize,
    n_obs: usize,
    n_pos: usize,
}

const NO_CHILD: usize = usize::MAX;

impl ArenaNode {
    fn leaf(n_obs: usize, n_pos: usize) -> Self {
        ArenaNode {
            feature: 0,
            threshold: 0.0,
            left: NO_CHILD,
            right: NO_CHILD,
            n_obs,
            n_pos,
        }
    }

    fn is_leaf(&self) -> bool {
        self.left == NO_CHILD
    }

    /// Majority class; ties predict stay.
    fn majority(&self) -> u8 {
        u8::from(2 * self.n_pos > self.n_obs)
    }

    /// Misclassified training rows if this node were a leaf.
    fn leaf_errors(&self) -> usize {
        self.n_pos.min(self.n_obs - self.n_pos)
    }
}

/// Grow the saturated tree over `rows`, splitting while a node is impure
/// and a feasible candidate exists.
fn grow(
    features: ArrayView2<'_, f64>,
    labels: &[u8],
    rows: &mut [usize],
    min_node_size: usize,
) -> Vec<ArenaNode> {
    let mut arena = Vec::new();
    let n_pos = rows.iter().filter(|&&r| labels[r] != 0).count();
    arena.push(ArenaNode::leaf(rows.len(), n_pos));
    // (node id, start, len) ranges into the shared row-index buffer
    let mut stack = vec![(0usize, 0usize, rows.len())];

    while let Some((node, start, len)) = stack.pop() {
        let slice = &rows[start..start + len];
        let Some(split) = best_split(features, labels, slice, min_node_size) else {
            continue;
        };
        // partition the range: left = values <= threshold
        let mut left_rows = Vec::with_capacity(len);
        let mut right_rows = Vec::with_capacity(len);
        for &r in slice {
            if features[[r, split.feature_index]] <= split.threshold {
                left_rows.push(r);
            } else {
                right_rows.push(r);
            }
        }
        let left_pos = left_rows.iter().filter(|&&r| labels[r] != 0).count();
        let right_pos = arena[node].n_pos - left_pos;
        let (ln, rn) = (left_rows.len(), right_rows.len());
        rows[start..start + ln].copy_from_slice(&left_rows);
        rows[start + ln..start + len].copy_from_slice(&right_rows);

        let left_id = arena.len();
        arena.push(ArenaNode::leaf(ln, left_pos));
        let right_id = arena.len();
        arena.push(ArenaNode::leaf(rn, right_pos));
        arena[node].feature = split.feature_index;
        arena[node].threshold = split.threshold;
        arena[node].left = left_id;
        arena[node].right = right_id;
        stack.push((left_id, start, ln));
        stack.push((right_id, start + ln, rn));
    }
    arena
}

// ---- cost-complexity pruning -------------------------------------------------

/// Per-node leaf and training-error counts under a collapse mask.
fn subtree_stats(arena: &[ArenaNode], collapsed: &[bool]) -> (Vec<usize>, Vec<usize>) {
    let mut leaves = vec![0usize; arena.len()];
    let mut errors = vec![0usize; arena.len()];
    // children always carry larger arena indices than their parent
    for id in (0..arena.len()).rev() {
        let node = &arena[id];
        if node.is_leaf() || collapsed[id] {
            leaves[id] = 1;
            errors[id] = node.leaf_errors();
        } else {
            leaves[id] = leaves[node.left] + leaves[node.right];
            errors[id] = errors[node.left] + errors[node.right];
        }
    }
    (leaves, errors)
}

/// Weakest-link cost-complexity sequence: `(alpha, collapse mask)` from the
/// full tree down to the root-only tree. Alphas are in error-rate units.
fn pruning_sequence(arena: &[ArenaNode], n_total: usize) -> Vec<(f64, Vec<bool>)> {
    let mut collapsed = vec![false; arena.len()];
    let mut sequence = vec![(0.0, collapsed.clone())];
    loop {
        let (leaves, errors) = subtree_stats(arena, &collapsed);
        if leaves[0] <= 1 {
            break;
        }
        let g_of = |id: usize, leaves: &[usize], errors: &[usize]| {
            (arena[id].leaf_errors() as f64 - errors[id] as f64)
                / (n_total as f64 * (leaves[id] - 1) as f64)
        };
        let mut min_g = f64::INFINITY;
        for (id, node) in arena.iter().enumerate() {
            if node.is_leaf() || collapsed[id] || leaves[id] <= 1 {
                continue;
            }
            min_g = min_g.min(g_of(id, &leaves, &errors));
        }
        if !min_g.is_finite() {
            break;
        }
        let tol = 1e-12 * min_g.abs().max(1.0);
        for (id, node) in arena.iter().enumerate() {
            if node.is_leaf() || collapsed[id] || leaves[id] <= 1 {
                continue;
            }
            if g_of(id, &leaves, &errors) <= min_g + tol {
                collapsed[id] = true;
            }
        }
        sequence.push((min_g.max(0.0), collapsed.clone()));
    }
    sequence
}

/// Collapse mask of the optimally pruned subtree at penalty `alpha`.
fn collapse_at(arena: &[ArenaNode], n_total: usize, alpha: f64) -> Vec<bool> {
    let mut collapsed = vec![false; arena.len()];
    loop {
        let (leaves, errors) = subtree_stats(arena, &collapsed);
        let mut min_g = f64::INFINITY;
        let mut min_id = None;
        for (id, node) in arena.iter().enumerate() {
            if node.is_leaf() || collapsed[id] || leaves[id] <= 1 {
                continue;
            }
            let g = (node.leaf_errors() as f64 - errors[id] as f64)
                / (n_total as f64 * (leaves[id] - 1) as f64);
            if g < min_g {
                min_g = g;
                min_id = Some(id);
            }
        }
        match min_id {
            Some(id) if min_g <= alpha * (1.0 + 1e-12) + 1e-15 => collapsed[id] = true,
            _ => break,
        }
    }
    collapsed
}

fn route(arena: &[ArenaNode], collapsed: &[bool], features: ArrayView2<'_, f64>, row: usize) -> u8 {
    let mut id = 0;
    loop {
        let node = &arena[id];
        if node.is_leaf() || collapsed[id] {
            return node.majority();
        }
        id = if features[[row, node.feature]] <= node.threshold {
            node.left
        } else {
            node.right
        };
    }
}

fn materialize(arena: &[ArenaNode], collapsed: &[bool], id: usize) -> TreeNode {
    let node = &arena[id];
    if node.is_leaf() || collapsed[id] {
        TreeNode::Leaf {
            predicted_class: node.majority(),
            class_proportion: node.n_pos as f64 / node.n_obs as f64,
            n_obs: node.n_obs,
        }
    } else {
        TreeNode::Internal {
            feature_index: node.feature,
            threshold: node.threshold,
            left: Box::new(materialize(arena, collapsed, node.left)),
            right: Box::new(materialize(arena, collapsed, node.right)),
        }
    }
}

/// Shuffled fold assignment with values `0..folds`, sizes within one of
/// equal.
fn fold_assignment(n: usize, folds: usize, seed: u64) -> Vec<usize> {
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    order.shuffle(&mut rng);
    let mut assignment = vec![0usize; n];
    for (pos, &row) in order.iter().enumerate() {
        assignment[row] = pos % folds;
    }
    assignment
}

/// Grow the saturated tree, compute the cost-complexity sequence, and keep
/// the subtree whose `cv_folds`-fold cross-validated misclassification
/// error is smallest, breaking ties toward the smaller tree.
pub fn fit(features: ArrayView2<'_, f64>, labels: &[u8], params: &CartParams) -> Result<CartModel> {
    let n = features.nrows();
    if n == 0 || labels.is_empty() {
        return Err(Error::EmptyInput("cart::fit requires rows"));
    }
    if labels.len() != n {
        return Err(Error::LengthMismatch(format!(
            "features {n} rows vs {} labels",
            labels.len()
        )));
    }
    if params.cv_folds < 2 {
        return Err(Error::config("cv_folds must be at least 2"));
    }
    if n < params.cv_folds {
        return Err(Error::config(format!(
            "need at least cv_folds = {} rows, got {n}",
            params.cv_folds
        )));
    }
    let min_node_size = params.min_node_size.max(1);

    let mut rows: Vec<usize> = (0..n).collect();
    let arena = grow(features, labels, &mut rows, min_node_size);

    // single class or unsplittable root: a one-leaf model
    if arena.len() == 1 {
        let root = materialize(&arena, &[false], 0);
        return Ok(CartModel {
            n_leaves: 1,
            n_features: features.ncols(),
            root,
            pruning_trace: vec![(1, 0.0)],
        });
    }

    let sequence = pruning_sequence(&arena, n);

    // representative alpha per candidate: geometric mean of consecutive
    // sequence alphas; the root-only candidate takes infinity
    let alphas: Vec<f64> = (0..sequence.len())
        .map(|k| {
            if k + 1 < sequence.len() {
                (sequence[k].0 * sequence[k + 1].0).sqrt()
            } else {
                f64::INFINITY
            }
        })
        .collect();

    // cross-validated error per candidate alpha
    let assignment = fold_assignment(n, params.cv_folds, params.seed);
    let fold_errors: Vec<Vec<usize>> = par::map_indexed(params.cv_folds, |fold| {
        let mut train: Vec<usize> = (0..n).filter(|r| assignment[*r] != fold).collect();
        let test: Vec<usize> = (0..n).filter(|r| assignment[*r] == fold).collect();
        let n_train = train.len();
        let fold_arena = grow(features, labels, &mut train, min_node_size);
        alphas
            .iter()
            .map(|&alpha| {
                let collapsed = if alpha.is_infinite() {
                    vec![true; fold_arena.len()]
                } else {
                    collapse_at(&fold_arena, n_train, alpha)
                };
                test.iter()
                    .filter(|&&r| route(&fold_arena, &collapsed, features, r) != labels[r])
                    .count()
            })
            .collect()
    });

    let cv_error: Vec<f64> = (0..alphas.len())
        .map(|k| fold_errors.iter().map(|f| f[k]).sum::<usize>() as f64 / n as f64)
        .collect();

    // smallest tree attaining the minimum (candidates shrink with k)
    let mut best_k = 0;
    for k in 0..alphas.len() {
        if cv_error[k] <= cv_error[best_k] {
            best_k = k;
        }
    }

    let trace: Vec<(usize, f64)> = sequence
        .iter()
        .zip(&cv_error)
        .map(|((_, collapsed), err)| {
            let (leaves, _) = subtree_stats(&arena, collapsed);
            (leaves[0], *err)
        })
        .collect();

    let collapsed = &sequence[best_k].1;
    let root = materialize(&arena, collapsed, 0);
    let n_leaves = root.n_leaves();
    Ok(CartModel {
        root,
        n_leaves,
        n_features: features.ncols(),
        pruning_trace: trace,
    })
}

impl CartModel {
    /// Route every row through the tree. Values equal to a threshold go
    /// left.
    pub fn predict(&self, features: ArrayView2<'_, f64>) -> Result<Vec<u8>> {
        if features.ncols() != self.n_features {
            return Err(Error::WidthMismatch {
                expected: self.n_features,
                got: features.ncols(),
            });
        }
        Ok((0..features.nrows())
            .map(|row| {
                let mut node = &self.root;
                loop {
                    match node {
                        TreeNode::Leaf { predicted_class, .. } => return *predicted_class,
                        TreeNode::Internal {
                            feature_index,
                            threshold,
                            left,
                            right,
                        } => {
                            node = if features[[row, *feature_index]] <= *threshold {
                                left
                            } else {
                                right
                            };
                        }
                    }
                }
            })
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::{array, Array2};

    /// Brute-force oracle: enumerate every feature and midpoint, return the
    /// best gain the slow way.
    fn best_split_oracle(
        features: &Array2<f64>,
        labels: &[u8],
        rows: &[usize],
        min_node_size: usize,
    ) -> Option<Split> {
        let gini = |subset: &[usize]| {
            let n = subset.len() as f64;
            let pos = subset.iter().filter(|&&r| labels[r] != 0).count() as f64;
            pos * (n - pos) / n
        };
        let parent = gini(rows);
        let mut best: Option<Split> = None;
        for f in 0..features.ncols() {
            let mut values: Vec<f64> = rows.iter().map(|&r| features[[r, f]]).collect();
            values.sort_by(f64::total_cmp);
            values.dedup();
            for w in values.windows(2) {
                let thr = 0.5 * (w[0] + w[1]);
                let left: Vec<usize> = rows
                    .iter()
                    .copied()
                    .filter(|&r| features[[r, f]] <= thr)
                    .collect();
                let right: Vec<usize> = rows
                    .iter()
                    .copied()
                    .filter(|&r| features[[r, f]] > thr)
                    .collect();
                if left.len() < min_node_size || right.len() < min_node_size {
                    continue;
                }
                let gain = parent - gini(&left) - gini(&right);
                if best.as_ref().is_none_or(|b| gain > b.gain) {
                    best = Some(Split {
                        feature_index: f,
                        threshold: thr,
                        gain,
                    });
                }
            }
        }
        best
    }

    fn two_clusters() -> (Array2<f64>, Vec<u8>) {
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for _ in 0..5 {
            rows.push([0.0]);
            labels.push(0u8);
            rows.push([1.0]);
            labels.push(1u8);
        }
        let features =
            Array2::from_shape_vec((10, 1), rows.iter().flatten().copied().collect()).unwrap();
        (features, labels)
    }

    #[test]
    fn gini_examples() {
        assert_eq!(gini_impurity(&[1, 1, 1, 1, 1, 0, 0, 0, 0, 0]).unwrap(), 2.5);
        assert_eq!(gini_impurity(&[0, 0, 0]).unwrap(), 0.0);
        assert_eq!(gini_impurity(&[1; 7]).unwrap(), 0.0);
        // 8 labels, 2 ones: 8 * 0.25 * 0.75
        let v = gini_impurity(&[1, 1, 0, 0, 0, 0, 0, 0]).unwrap();
        assert!((v - 1.5).abs() < 1e-12);
        assert!(gini_impurity(&[]).is_err());
    }

    #[test]
    fn best_split_two_clusters() {
        let (features, labels) = two_clusters();
        let rows: Vec<usize> = (0..10).collect();
        let split = best_split(features.view(), &labels, &rows, 1).unwrap();
        assert_eq!(split.feature_index, 0);
        assert!((split.threshold - 0.5).abs() < 1e-12);
        assert!((split.gain - 2.5).abs() < 1e-12);

        let oracle = best_split_oracle(&features, &labels, &rows, 1).unwrap();
        assert_eq!(split, oracle);
    }

    #[test]
    fn best_split_matches_oracle_on_random_data() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let n = rng.random_range(4..40usize);
            let d = rng.random_range(1..4usize);
            let features =
                Array2::from_shape_fn((n, d), |_| (rng.random_range(0..6) as f64) * 0.5);
            let labels: Vec<u8> = (0..n).map(|_| rng.random_range(0..2) as u8).collect();
            let rows: Vec<usize> = (0..n).collect();
            let ours = best_split(features.view(), &labels, &rows, 1);
            let oracle = best_split_oracle(&features, &labels, &rows, 1);
            match (ours, oracle) {
                (Some(a), Some(b)) => {
                    assert!((a.gain - b.gain).abs() < 1e-9, "gain {} vs {}", a.gain, b.gain)
                }
                (None, None) => {}
                (a, b) => {
                    let pure = labels.iter().all(|&y| y == labels[0]);
                    assert!(pure, "{a:?} vs {b:?}");
                }
            }
        }
    }

    #[test]
    fn best_split_constant_features_none() {
        let features = Array2::from_elem((8, 2), 3.0);
        let labels = [0u8, 1, 0, 1, 0, 1, 0, 1];
        let rows: Vec<usize> = (0..8).collect();
        assert!(best_split(features.view(), &labels, &rows, 1).is_none());
    }

    #[test]
    fn best_split_pure_node_none() {
        let features = Array2::from_shape_fn((6, 1), |(r, _)| r as f64);
        let labels = [1u8; 6];
        let rows: Vec<usize> = (0..6).collect();
        assert!(best_split(features.view(), &labels, &rows, 1).is_none());
    }

    #[test]
    fn fit_two_clusters_gives_two_leaves_and_zero_error() {
        let (features, labels) = two_clusters();
        let model = fit(
            features.view(),
            &labels,
            &CartParams {
                min_node_size: 1,
                cv_folds: 10,
                seed: 1,
            },
        )
        .unwrap();
        assert_eq!(model.n_leaves, 2);
        assert_eq!(model.predict(features.view()).unwrap(), labels);
    }

    #[test]
    fn fit_single_class_gives_single_leaf() {
        let features = Array2::from_shape_fn((12, 2), |(r, c)| (r * 2 + c) as f64);
        let labels = vec![0u8; 12];
        let model = fit(features.view(), &labels, &CartParams::default()).unwrap();
        assert_eq!(model.n_leaves, 1);
        assert_eq!(model.predict(features.view()).unwrap(), labels);
    }

    #[test]
    fn fit_xor_reaches_full_training_accuracy() {
        // replicated XOR: the tree must grow through zero-gain root splits
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for _ in 0..5 {
            for (a, b) in [(0.0, 0.0), (0.0, 1.0), (1.0, 0.0), (1.0, 1.0)] {
                rows.push([a, b]);
                labels.push(u8::from(a != b));
            }
        }
        let features =
            Array2::from_shape_vec((20, 2), rows.iter().flatten().copied().collect()).unwrap();

        // oracle: a depth-2 tree separates XOR exactly
        let depth2_perfect = (0..20).all(|r| {
            let a = features[[r, 0]] > 0.5;
            let b = features[[r, 1]] > 0.5;
            u8::from(a != b) == labels[r]
        });
        assert!(depth2_perfect);

        let model = fit(
            features.view(),
            &labels,
            &CartParams {
                min_node_size: 1,
                cv_folds: 10,
                seed: 7,
            },
        )
        .unwrap();
        assert!(model.n_leaves >= 3, "got {} leaves", model.n_leaves);
        assert_eq!(model.predict(features.view()).unwrap(), labels);
    }

    #[test]
    fn predict_routing_and_tie_rule() {
        let model = CartModel {
            root: TreeNode::Internal {
                feature_index: 0,
                threshold: 1.0,
                left: Box::new(TreeNode::Leaf {
                    predicted_class: 0,
                    class_proportion: 0.0,
                    n_obs: 5,
                }),
                right: Box::new(TreeNode::Leaf {
                    predicted_class: 1,
                    class_proportion: 1.0,
                    n_obs: 5,
                }),
            },
            n_leaves: 2,
            n_features: 1,
            pruning_trace: vec![],
        };
        let features = array![[0.5], [1.5], [1.0]];
        // left of threshold, right of threshold, exactly on it (routes left)
        assert_eq!(model.predict(features.view()).unwrap(), vec![0, 1, 0]);
        let wide = array![[0.5, 1.0]];
        assert!(model.predict(wide.view()).is_err());
    }

    #[test]
    fn training_error_non_increasing_in_subtree_size() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        let n = 120;
        let features = Array2::from_shape_fn((n, 3), |_| rng.random::<f64>());
        let labels: Vec<u8> = (0..n)
            .map(|r| {
                let noisy = rng.random::<f64>() < 0.15;
                let signal = features[[r, 0]] + 0.5 * features[[r, 1]] > 0.8;
                u8::from(signal != noisy)
            })
            .collect();
        let mut rows: Vec<usize> = (0..n).collect();
        let arena = grow(features.view(), &labels, &mut rows, 1);
        let sequence = pruning_sequence(&arena, n);
        // walking from the full tree down, training error cannot drop
        let mut prev = 0usize;
        for (k, (_, collapsed)) in sequence.iter().enumerate() {
            let (_, errors) = subtree_stats(&arena, collapsed);
            assert!(errors[0] >= prev, "error decreased along the sequence at {k}");
            prev = errors[0];
        }
        // saturated tree on conflict-free data is exact
        let (_, errors) = subtree_stats(&arena, &sequence[0].1);
        assert_eq!(errors[0], 0);
    }

    #[test]
    fn saturated_tree_exact_without_conflicts() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        let n = 60;
        // distinct feature vectors: no conflicting duplicates
        let features = Array2::from_shape_fn((n, 2), |(r, c)| r as f64 * 2.0 + c as f64 / 3.0);
        let labels: Vec<u8> = (0..n).map(|_| rng.random_range(0..2) as u8).collect();
        let mut rows: Vec<usize> = (0..n).collect();
        let arena = grow(features.view(), &labels, &mut rows, 1);
        let collapsed = vec![false; arena.len()];
        let wrong = (0..n)
            .filter(|&r| route(&arena, &collapsed, features.view(), r) != labels[r])
            .count();
        assert_eq!(wrong, 0);
    }

    #[test]
    fn fit_requires_enough_rows_for_folds() {
        let features = Array2::from_shape_fn((4, 1), |(r, _)| r as f64);
        let labels = [0u8, 1, 0, 1];
        assert!(fit(features.view(), &labels, &CartParams::default()).is_err());
    }
}
