//! Node and pair features for the link predictors.

mod category;
mod node;
mod pair;

pub use category::{category_similarity, pad_path, similarity_mask, similarity_weight, MAX_DEPTH};
pub use node::{group_onehot, MaskedRows, NodeFeature, NodeFeatureTable, NodeRow, NodeRows, NODE_DIM};
pub use pair::{PairLayout, Variant};

/// Default padded category depth.
pub const DEFAULT_D_CAT: usize = 8;
