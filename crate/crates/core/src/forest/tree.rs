use crate::dataset::FeatureMatrix;
use crate::rng::Rng;
use serde::{Deserialize, Serialize};

/// Gini impurity of a binary label multiset.
pub fn gini(labels: &[u8]) -> f64 {
    if labels.is_empty() {
        return 0.0;
    }
    let pos = labels.iter().filter(|&&l| l == 1).count();
    gini_counts(pos, labels.len())
}

fn gini_counts(pos: usize, n: usize) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let p = pos as f64 / n as f64;
    1.0 - p * p - (1.0 - p) * (1.0 - p)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Split {
    pub feature: usize,
    pub threshold: f64,
    /// Impurity decrease `G(parent) - (n_l G(l) + n_r G(r)) / n`.
    pub gain: f64,
}

/// Best Gini split of `rows` over `features`. Thresholds are midpoints of
/// consecutive distinct values; both children must keep `min_leaf` rows.
/// Ties go to the lowest feature index, then the lowest threshold.
pub fn best_split(x: &FeatureMatrix, y: &[u8], rows: &[usize], features: &[usize], min_leaf: usize) -> Option<Split> {
    let n = rows.len();
    let min_leaf = min_leaf.max(1);
    if n < 2 * min_leaf {
        return None;
    }
    let total_pos = rows.iter().filter(|&&r| y[r] == 1).count();
    let parent = gini_counts(total_pos, n);
    let mut feats = features.to_vec();
    feats.sort_unstable();
    feats.dedup();
    let mut best: Option<Split> = None;
    let mut col: Vec<(f64, u8)> = Vec::with_capacity(n);
    for &f in &feats {
        col.clear();
        col.extend(rows.iter().map(|&r| (x.get(r, f), y[r])));
        col.sort_unstable_by(|a, b| a.0.total_cmp(&b.0));
        let mut left_pos = 0;
        for i in 0..n - 1 {
            left_pos += usize::from(col[i].1 == 1);
            let left = i + 1;
            if col[i].0 == col[i + 1].0 || left < min_leaf || n - left < min_leaf {
                continue;
            }
            let right = n - left;
            let child = (left as f64 * gini_counts(left_pos, left)
                + right as f64 * gini_counts(total_pos - left_pos, right))
                / n as f64;
            let gain = parent - child;
            if gain > 1e-12 && best.is_none_or(|b| gain > b.gain) {
                best = Some(Split {
                    feature: f,
                    threshold: 0.5 * (col[i].0 + col[i + 1].0),
                    gain,
                });
            }
        }
    }
    best
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum TreeNode {
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
    Leaf {
        fraction: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TreeParams {
    /// `None` grows until purity or `min_samples_leaf`.
    pub max_depth: Option<usize>,
    pub min_samples_leaf: usize,
    /// Features considered per split.
    pub features_per_split: usize,
}

/// Array-encoded tree; node 0 is the root, `x <= threshold` goes left.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionTree {
    pub nodes: Vec<TreeNode>,
}

impl DecisionTree {
    /// Grows a tree on `rows` (may repeat, as in a bootstrap sample).
    pub fn fit(x: &FeatureMatrix, y: &[u8], rows: &[usize], params: &TreeParams, rng: &mut Rng) -> Self {
        let mut nodes = vec![TreeNode::Leaf { fraction: 0.0 }];
        let mut stack = vec![(0usize, rows.to_vec(), 0usize)];
        let k = params.features_per_split.clamp(1, x.cols.max(1));
        while let Some((slot, idx, depth)) = stack.pop() {
            let pos = idx.iter().filter(|&&r| y[r] == 1).count();
            let fraction = if idx.is_empty() { 0.0 } else { pos as f64 / idx.len() as f64 };
            let pure = pos == 0 || pos == idx.len();
            let capped = params.max_depth.is_some_and(|d| depth >= d);
            if pure || capped || x.cols == 0 {
                nodes[slot] = TreeNode::Leaf { fraction };
                continue;
            }
            let feats = rand::seq::index::sample(rng, x.cols, k).into_vec();
            let Some(split) = best_split(x, y, &idx, &feats, params.min_samples_leaf) else {
                nodes[slot] = TreeNode::Leaf { fraction };
                continue;
            };
            let (l, r): (Vec<usize>, Vec<usize>) = idx.iter().partition(|&&i| x.get(i, split.feature) <= split.threshold);
            let left = nodes.len();
            nodes.push(TreeNode::Leaf { fraction: 0.0 });
            let right = nodes.len();
            nodes.push(TreeNode::Leaf { fraction: 0.0 });
            nodes[slot] = TreeNode::Split {
                feature: split.feature,
                threshold: split.threshold,
                left,
                right,
            };
            // right first so the left subtree is expanded first
            stack.push((right, r, depth + 1));
            stack.push((left, l, depth + 1));
        }
        Self { nodes }
    }

    /// Positive fraction of the leaf reached by `x`.
    pub fn leaf_fraction(&self, x: &[f64]) -> f64 {
        let mut i = 0;
        loop {
            match &self.nodes[i] {
                TreeNode::Leaf { fraction } => return *fraction,
                TreeNode::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => i = if x[*feature] <= *threshold { *left } else { *right },
            }
        }
    }

    pub fn depth(&self) -> usize {
        fn walk(nodes: &[TreeNode], i: usize) -> usize {
            match &nodes[i] {
                TreeNode::Leaf { .. } => 0,
                TreeNode::Split { left, right, .. } => 1 + walk(nodes, *left).max(walk(nodes, *right)),
            }
        }
        walk(&self.nodes, 0)
    }

    pub fn max_feature(&self) -> Option<usize> {
        self.nodes
            .iter()
            .filter_map(|n| match n {
                TreeNode::Split { feature, .. } => Some(*feature),
                TreeNode::Leaf { .. } => None,
            })
            .max()
    }
}
