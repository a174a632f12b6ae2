//! Co-purchase network analysis and link prediction for newly listed products.
//!
//! The crate covers the whole pipeline, from the SNAP `amazon-meta` dump to
//! ranked recommendations for isolated products:
//!
//! - [`meta`]: streaming parser for the metadata text format.
//! - [`graph`]: the undirected co-purchase graph and its structural statistics.
//! - [`community`]: Louvain, modularity, and attribute/similarity modularity.
//! - [`features`]: node and pair features, including category-path similarity.
//! - [`dataset`]: labeled pairs built from 1-degree nodes.
//! - [`forest`]: a random-forest baseline.
//! - [`sage`]: a one-hop GraphSAGE link predictor with hand-written gradients.
//! - [`eval`]: classification metrics, the BFS top-k protocol, and ablations.
//! - [`pipeline`]: staged, manifest-tracked orchestration used by the CLI.
//!
//! Runnable walkthroughs for each capability live in the crate's `examples/`.

pub mod community;
pub mod dataset;
pub mod error;
pub mod eval;
pub mod features;
pub mod forest;
pub mod graph;
pub mod meta;
pub mod pipeline;
pub mod rng;
pub mod sage;
pub mod synthetic;

pub use error::{Error, Result};
pub use graph::{CoPurchaseGraph, NodeId};
pub use meta::{CategoryPath, Group, ProductRecord};
