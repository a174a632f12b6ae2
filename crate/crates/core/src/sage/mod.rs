//! One-hop GraphSAGE link predictor.
//!
//! Each endpoint is embedded as `relu(W_self x + W_neigh mean(x_N) + b)` over a
//! sampled neighbor set, and a logistic head scores
//! `[h_u, h_v, category similarity]`. Gradients are derived by hand.

mod model;
mod train;

pub use model::{
    aggregate_neighbors, embed_from, embed_node, forward_pair, head_logit, score_pair, sigmoid, EmbedCache,
    PairForward, SageHyper, SageModel, SageParams,
};
pub use train::{
    bce_with_logit, check_gradients, loss_and_grad, max_relative_error, mean_loss, numeric_gradient,
    predict_samples, sample_loss, similarity_vector, train_sage, GradCheck,
};
