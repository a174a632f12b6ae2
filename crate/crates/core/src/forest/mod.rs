//! Random-forest binary classifier: bootstrap-resampled CART trees grown on
//! Gini impurity with a random feature subset per split, averaged as
//! positive-class probabilities.

mod forest;
mod tree;

pub use forest::{train_forest, Forest, ForestParams, MaxFeatures};
pub use tree::{best_split, gini, DecisionTree, Split, TreeNode, TreeParams};
