use super::tree::{DecisionTree, TreeParams};
use crate::dataset::FeatureMatrix;
use crate::error::{Error, Result};
use crate::rng;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MaxFeatures {
    /// `ceil(sqrt(n_features))`
    Sqrt,
    All,
    Fixed(usize),
}

impl MaxFeatures {
    pub fn resolve(self, n_features: usize) -> usize {
        match self {
            MaxFeatures::Sqrt => (n_features as f64).sqrt().ceil() as usize,
            MaxFeatures::All => n_features,
            MaxFeatures::Fixed(k) => k.min(n_features),
        }
        .max(1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ForestParams {
    pub n_trees: usize,
    pub max_depth: Option<usize>,
    pub min_samples_leaf: usize,
    pub max_features: MaxFeatures,
}

impl Default for ForestParams {
    fn default() -> Self {
        Self {
            n_trees: 100,
            max_depth: Some(16),
            min_samples_leaf: 2,
            max_features: MaxFeatures::Sqrt,
        }
    }
}

const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Forest {
    pub format_version: u32,
    pub trees: Vec<DecisionTree>,
    pub n_features: usize,
    pub params: ForestParams,
    pub seed: u64,
    /// Accuracy of out-of-bag votes at threshold 0.5, over rows that were
    /// out of bag for at least one tree.
    pub oob_accuracy: Option<f64>,
}

/// Trains `params.n_trees` trees in parallel, each on a bootstrap sample
/// drawn from its own seed derived from `seed`.
pub fn train_forest(x: &FeatureMatrix, y: &[u8], params: &ForestParams, seed: u64) -> Result<Forest> {
    if x.rows != y.len() {
        return Err(Error::Dimension {
            expected: x.rows,
            got: y.len(),
        });
    }
    if x.rows < 2 {
        return Err(Error::invalid("need at least 2 training rows"));
    }
    let pos = y.iter().filter(|&&l| l == 1).count();
    if pos == 0 || pos == y.len() {
        return Err(Error::SingleClass);
    }
    if let Some(l) = y.iter().find(|&&l| l > 1) {
        return Err(Error::invalid(format!("labels must be 0 or 1, found {l}")));
    }
    for i in 0..x.rows {
        for (j, v) in x.row(i).iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFinite { row: i, col: j });
            }
        }
    }
    let tree_params = TreeParams {
        max_depth: params.max_depth,
        min_samples_leaf: params.min_samples_leaf,
        features_per_split: params.max_features.resolve(x.cols),
    };
    let n = x.rows;
    let grown: Vec<(DecisionTree, Vec<bool>)> = (0..params.n_trees)
        .into_par_iter()
        .map(|t| {
            let mut r = rng::child(seed, t as u64);
            let rows: Vec<usize> = (0..n).map(|_| r.gen_range(0..n)).collect();
            let mut in_bag = vec![false; n];
            for &i in &rows {
                in_bag[i] = true;
            }
            (DecisionTree::fit(x, y, &rows, &tree_params, &mut r), in_bag)
        })
        .collect();

    let mut votes = vec![(0.0f64, 0usize); n];
    for (tree, in_bag) in &grown {
        for i in (0..n).filter(|&i| !in_bag[i]) {
            votes[i].0 += tree.leaf_fraction(x.row(i));
            votes[i].1 += 1;
        }
    }
    let scored: Vec<(f64, u8)> = votes
        .iter()
        .zip(y)
        .filter(|(v, _)| v.1 > 0)
        .map(|(v, &l)| (v.0 / v.1 as f64, l))
        .collect();
    let oob_accuracy = (!scored.is_empty()).then(|| {
        scored.iter().filter(|(p, l)| u8::from(*p > 0.5) == *l).count() as f64 / scored.len() as f64
    });

    Ok(Forest {
        format_version: FORMAT_VERSION,
        trees: grown.into_iter().map(|(t, _)| t).collect(),
        n_features: x.cols,
        params: *params,
        seed,
        oob_accuracy,
    })
}

impl Forest {
    /// Mean positive-leaf fraction over trees, summed in tree order.
    pub fn predict_proba(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.n_features {
            return Err(Error::Dimension {
                expected: self.n_features,
                got: x.len(),
            });
        }
        if self.trees.is_empty() {
            return Err(Error::invalid("forest has no trees"));
        }
        let s: f64 = self.trees.iter().map(|t| t.leaf_fraction(x)).sum();
        Ok(s / self.trees.len() as f64)
    }

    pub fn predict_matrix(&self, x: &FeatureMatrix) -> Result<Vec<f64>> {
        (0..x.rows).into_par_iter().map(|i| self.predict_proba(x.row(i))).collect()
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let f = std::io::BufWriter::new(std::fs::File::create(path)?);
        serde_json::to_writer(f, self)?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let f = std::io::BufReader::new(std::fs::File::open(path)?);
        let forest: Forest = serde_json::from_reader(f)?;
        if forest.format_version != FORMAT_VERSION {
            return Err(Error::Serde(format!("unsupported forest format {}", forest.format_version)));
        }
        if forest.trees.iter().any(|t| t.max_feature().is_some_and(|f| f >= forest.n_features)) {
            return Err(Error::Invariant("tree references a feature beyond n_features".into()));
        }
        Ok(forest)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forest::tree::TreeNode;

    fn stump(fraction_left: f64, fraction_right: f64) -> DecisionTree {
        DecisionTree {
            nodes: vec![
                TreeNode::Split {
                    feature: 0,
                    threshold: 0.0,
                    left: 1,
                    right: 2,
                },
                TreeNode::Leaf { fraction: fraction_left },
                TreeNode::Leaf { fraction: fraction_right },
            ],
        }
    }

    fn forest_of(trees: Vec<DecisionTree>) -> Forest {
        Forest {
            format_version: FORMAT_VERSION,
            trees,
            n_features: 1,
            params: ForestParams::default(),
            seed: 0,
            oob_accuracy: None,
        }
    }

    #[test]
    fn mean_of_leaves() {
        let f = forest_of(vec![stump(0.0, 1.0), stump(1.0, 1.0)]);
        assert_eq!(f.predict_proba(&[-1.0]).unwrap(), 0.5);
        assert_eq!(f.predict_proba(&[1.0]).unwrap(), 1.0);
        let single = forest_of(vec![stump(0.25, 0.75)]);
        assert_eq!(single.predict_proba(&[1.0]).unwrap(), 0.75);
    }

    #[test]
    fn dimension_mismatch() {
        let f = forest_of(vec![stump(0.0, 1.0)]);
        assert!(matches!(f.predict_proba(&[1.0, 2.0]), Err(Error::Dimension { expected: 1, got: 2 })));
    }

    #[test]
    fn rejects_bad_training_input() {
        let x = FeatureMatrix { rows: 3, cols: 1, data: vec![1.0, 2.0, 3.0] };
        assert!(matches!(train_forest(&x, &[1, 1, 1], &ForestParams::default(), 0), Err(Error::SingleClass)));
        let bad = FeatureMatrix { rows: 3, cols: 1, data: vec![1.0, f64::NAN, 3.0] };
        assert!(matches!(
            train_forest(&bad, &[0, 1, 1], &ForestParams::default(), 0),
            Err(Error::NonFinite { row: 1, col: 0 })
        ));
    }

    #[test]
    fn one_dimensional_threshold() {
        let vals: Vec<f64> = (0..200).map(|i| (i as f64 - 99.5) / 10.0).collect();
        let y: Vec<u8> = vals.iter().map(|&v| u8::from(v > 0.0)).collect();
        let x = FeatureMatrix { rows: 200, cols: 1, data: vals.clone() };
        let params = ForestParams { n_trees: 10, ..Default::default() };
        let f = train_forest(&x, &y, &params, 3).unwrap();
        // holdout grid offset from the training points, away from the boundary gap
        for i in 0..100 {
            let v = -9.93 + 0.2 * i as f64;
            if v.abs() < 0.2 {
                continue;
            }
            assert_eq!(f.predict_proba(&[v]).unwrap() > 0.5, v > 0.0, "x = {v}");
        }
    }

    #[test]
    fn save_and_load() {
        let x = FeatureMatrix { rows: 4, cols: 1, data: vec![1.0, 2.0, 3.0, 4.0] };
        let f = train_forest(&x, &[0, 0, 1, 1], &ForestParams { n_trees: 3, ..Default::default() }, 1).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("f.json");
        f.save(&p).unwrap();
        assert_eq!(Forest::load(&p).unwrap(), f);
    }
}
