//! Classification metrics, the top-k ranking protocol, and feature ablation.

mod ablation;
mod metrics;
pub mod protocol;
mod scorer;

pub use ablation::{run_ablation, write_ablation_csv, AblationConfig, AblationRow};
pub use metrics::{precision_recall_f1, roc_auc, Classification};
pub use protocol::{evaluate_protocol, rank_of, rank_queries, ranking, run_subgraph, EvalReport, ProtocolConfig, SubgraphRun, DEFAULT_KS};
pub use scorer::{FnScorer, ForestScorer, PairScorer, QueryContext, RandomScorer, SageScorer};

use crate::error::Result;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub roc_auc: f64,
    pub no_predicted_positives: bool,
}

/// Threshold-0.5 classification metrics plus ROC-AUC.
pub fn classify(labels: &[u8], scores: &[f64]) -> Result<ClassificationReport> {
    let c = precision_recall_f1(labels, scores, 0.5)?;
    Ok(ClassificationReport {
        precision: c.precision,
        recall: c.recall,
        f1: c.f1,
        roc_auc: roc_auc(labels, scores)?,
        no_predicted_positives: c.no_predicted_positives,
    })
}
