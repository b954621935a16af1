//! Regression trees for the boosting rounds: squared-error split search
//! over a row/column subsample, with depth, child-size and minimum-gain
//! constraints. Leaf values are supplied by the caller per loss.

use ndarray::ArrayView2;
use serde::{Deserialize, Serialize};

use crate::par;

const NO_CHILD: usize = usize::MAX;

/// Flat node record; `left == usize::MAX` marks a leaf.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegNode {
    pub feature: usize,
    pub threshold: f64,
    pub left: usize,
    pub right: usize,
    /// Leaf value (meaningful on leaves only), shrinkage already applied.
    pub value: f64,
}

impl RegNode {
    fn leaf() -> Self {
        RegNode {
            feature: 0,
            threshold: 0.0,
            left: NO_CHILD,
            right: NO_CHILD,
            value: 0.0,
        }
    }

    pub fn is_leaf(&self) -> bool {
        self.left == NO_CHILD
    }
}

/// One fitted regression tree stored as an arena with the root at index 0.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct RegTree {
    pub nodes: Vec<RegNode>,
}

impl RegTree {
    pub fn predict_row(&self, features: ArrayView2<'_, f64>, row: usize) -> f64 {
        let mut id = 0;
        loop {
            let node = &self.nodes[id];
            if node.is_leaf() {
                return node.value;
            }
            id = if features[[row, node.feature]] <= node.threshold {
                node.left
            } else {
                node.right
            };
        }
    }

    pub fn n_leaves(&self) -> usize {
        self.nodes.iter().filter(|n| n.is_leaf()).count()
    }
}

pub struct TreeGrowth {
    pub max_depth: usize,
    pub min_child_weight: usize,
    /// Minimum squared-error reduction a split must exceed.
    pub min_gain: f64,
}

#[derive(Clone, Copy)]
struct Candidate {
    feature: usize,
    threshold: f64,
    gain: f64,
}

/// Best squared-error-reduction split of `rows` over the columns in
/// `cols`. Gains compare as `left² / n_l + right² / n_r - total² / n`
/// (the sum-of-squares term cancels). Ties go to the lowest feature index,
/// then the lowest threshold, regardless of the parallel schedule.
fn best_split(
    features: ArrayView2<'_, f64>,
    targets: &[f64],
    rows: &[usize],
    cols: &[usize],
    growth: &TreeGrowth,
) -> Option<Candidate> {
    let n = rows.len();
    if n < 2 * growth.min_child_weight {
        return None;
    }
    let total: f64 = rows.iter().map(|&r| targets[r]).sum();
    let parent_score = total * total / n as f64;

    let scan_feature = |c: usize| -> Option<Candidate> {
        let feature = cols[c];
        let mut sorted: Vec<(f64, f64)> = rows
            .iter()
            .map(|&r| (features[[r, feature]], targets[r]))
            .collect();
        sorted.sort_by(|a, b| a.0.total_cmp(&b.0));

        let mut best: Option<Candidate> = None;
        let mut left_sum = 0.0;
        for i in 0..n - 1 {
            left_sum += sorted[i].1;
            let left_n = i + 1;
            let right_n = n - left_n;
            if left_n < growth.min_child_weight || right_n < growth.min_child_weight {
                continue;
            }
            if sorted[i].0 == sorted[i + 1].0 {
                continue;
            }
            let right_sum = total - left_sum;
            let gain = left_sum * left_sum / left_n as f64
                + right_sum * right_sum / right_n as f64
                - parent_score;
            if gain > growth.min_gain && best.as_ref().is_none_or(|b| gain > b.gain) {
                best = Some(Candidate {
                    feature,
                    threshold: 0.5 * (sorted[i].0 + sorted[i + 1].0),
                    gain,
                });
            }
        }
        best
    };

    // parallel over features only when the node is big enough to pay for it
    let candidates: Vec<Option<Candidate>> = if n >= 1024 {
        par::map_indexed(cols.len(), scan_feature)
    } else {
        (0..cols.len()).map(scan_feature).collect()
    };

    // cols are ascending, so scanning in order realizes the feature-index
    // tie-break
    let mut best: Option<Candidate> = None;
    for cand in candidates.into_iter().flatten() {
        if best.as_ref().is_none_or(|b| cand.gain > b.gain) {
            best = Some(cand);
        }
    }
    best
}

/// Grow a tree on the given rows and columns. `leaf_value` maps the rows
/// reaching a leaf to the leaf's fitted value.
pub fn grow<F>(
    features: ArrayView2<'_, f64>,
    targets: &[f64],
    rows: &[usize],
    cols: &[usize],
    growth: &TreeGrowth,
    leaf_value: F,
) -> RegTree
where
    F: Fn(&[usize]) -> f64,
{
    let mut nodes = vec![RegNode::leaf()];
    let mut index: Vec<usize> = rows.to_vec();
    // (node id, start, len, depth)
    let mut stack = vec![(0usize, 0usize, index.len(), 0usize)];

    while let Some((node, start, len, depth)) = stack.pop() {
        let slice = &index[start..start + len];
        let split = if depth < growth.max_depth {
            best_split(features, targets, slice, cols, growth)
        } else {
            None
        };
        let Some(split) = split else {
            nodes[node].value = leaf_value(slice);
            continue;
        };

        let mut left_rows = Vec::with_capacity(len);
        let mut right_rows = Vec::with_capacity(len);
        for &r in slice {
            if features[[r, split.feature]] <= split.threshold {
                left_rows.push(r);
            } else {
                right_rows.push(r);
            }
        }
        let (ln, rn) = (left_rows.len(), right_rows.len());
        index[start..start + ln].copy_from_slice(&left_rows);
        index[start + ln..start + len].copy_from_slice(&right_rows);

        let left_id = nodes.len();
        nodes.push(RegNode::leaf());
        let right_id = nodes.len();
        nodes.push(RegNode::leaf());
        let parent = &mut nodes[node];
        parent.feature = split.feature;
        parent.threshold = split.threshold;
        parent.left = left_id;
        parent.right = right_id;
        stack.push((left_id, start, ln, depth + 1));
        stack.push((right_id, start + ln, rn, depth + 1));
    }
    RegTree { nodes }
}

/// Scale every leaf value, realizing the shrinkage factor.
pub fn scale_leaves(tree: &mut RegTree, factor: f64) {
    for node in &mut tree.nodes {
        if node.is_leaf() {
            node.value *= factor;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::Array2;

    fn mean_leaf(targets: &[f64]) -> impl Fn(&[usize]) -> f64 + '_ {
        move |rows| rows.iter().map(|&r| targets[r]).sum::<f64>() / rows.len() as f64
    }

    #[test]
    fn stump_splits_on_signal() {
        let features = Array2::from_shape_fn((10, 2), |(r, c)| {
            if c == 0 {
                f64::from(r >= 5)
            } else {
                0.25
            }
        });
        let targets: Vec<f64> = (0..10).map(|r| if r >= 5 { 1.0 } else { -1.0 }).collect();
        let rows: Vec<usize> = (0..10).collect();
        let cols = vec![0, 1];
        let growth = TreeGrowth {
            max_depth: 1,
            min_child_weight: 1,
            min_gain: 0.0,
        };
        let tree = grow(
            features.view(),
            &targets,
            &rows,
            &cols,
            &growth,
            mean_leaf(&targets),
        );
        assert_eq!(tree.n_leaves(), 2);
        assert_eq!(tree.nodes[0].feature, 0);
        assert!((tree.predict_row(features.view(), 0) + 1.0).abs() < 1e-12);
        assert!((tree.predict_row(features.view(), 9) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn infinite_min_gain_gives_single_leaf() {
        let features = Array2::from_shape_fn((8, 1), |(r, _)| r as f64);
        let targets: Vec<f64> = (0..8).map(|r| r as f64).collect();
        let rows: Vec<usize> = (0..8).collect();
        let growth = TreeGrowth {
            max_depth: 6,
            min_child_weight: 1,
            min_gain: f64::INFINITY,
        };
        let tree = grow(
            features.view(),
            &targets,
            &rows,
            &[0],
            &growth,
            mean_leaf(&targets),
        );
        assert_eq!(tree.n_leaves(), 1);
        assert!((tree.nodes[0].value - 3.5).abs() < 1e-12);
    }

    #[test]
    fn min_child_weight_blocks_unbalanced_splits() {
        // one outlier target; separating it alone is forbidden at weight 3
        let features = Array2::from_shape_fn((6, 1), |(r, _)| r as f64);
        let targets = vec![0.0, 0.0, 0.0, 0.0, 0.0, 100.0];
        let rows: Vec<usize> = (0..6).collect();
        let growth = TreeGrowth {
            max_depth: 1,
            min_child_weight: 3,
            min_gain: 0.0,
        };
        let tree = grow(
            features.view(),
            &targets,
            &rows,
            &[0],
            &growth,
            mean_leaf(&targets),
        );
        if let Some(root) = tree.nodes.first() {
            if !root.is_leaf() {
                assert!((root.threshold - 2.5).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn max_depth_zero_is_constant() {
        let features = Array2::from_shape_fn((4, 1), |(r, _)| r as f64);
        let targets = vec![1.0, 2.0, 3.0, 4.0];
        let rows: Vec<usize> = (0..4).collect();
        let growth = TreeGrowth {
            max_depth: 0,
            min_child_weight: 1,
            min_gain: 0.0,
        };
        let tree = grow(
            features.view(),
            &targets,
            &rows,
            &[0],
            &growth,
            mean_leaf(&targets),
        );
        assert_eq!(tree.n_leaves(), 1);
    }
}
