//! Community structure: Louvain detection and the modularity family used to
//! compare detected communities with attribute- and similarity-based
//! groupings.

mod louvain;
mod modularity;
mod similarity;

pub use louvain::{louvain, LevelTrace, Louvain, LouvainResult};
pub use modularity::{modularity, modularity_by_attribute, Partition};
pub use similarity::{modularity_by_similarity, NullModel, SimilarityModularity};

/// Neumaier-compensated sum; order-fixed so results are bit-reproducible.
pub(crate) fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut c = 0.0f64;
    for x in values {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            c += (sum - t) + x;
        } else {
            c += (x - t) + sum;
        }
        sum = t;
    }
    sum + c
}
