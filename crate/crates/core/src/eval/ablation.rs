use super::{classify, ClassificationReport};
use crate::dataset::{labels, make_training_set, materialize, split, DatasetConfig};
use crate::error::Result;
use crate::features::{NodeFeatureTable, PairLayout, Variant};
use crate::forest::{train_forest, ForestParams};
use crate::graph::CoPurchaseGraph;
use serde::{Deserialize, Serialize};
use std::io::Write;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AblationConfig {
    pub dataset: DatasetConfig,
    pub train_fraction: f64,
    pub forest: ForestParams,
    pub d_cat: usize,
    pub seed: u64,
}

impl Default for AblationConfig {
    fn default() -> Self {
        Self {
            dataset: DatasetConfig::default(),
            train_fraction: 0.8,
            forest: ForestParams::default(),
            d_cat: crate::features::DEFAULT_D_CAT,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AblationRow {
    pub variant: Variant,
    #[serde(flatten)]
    pub metrics: ClassificationReport,
}

/// Trains one forest per variant on a shared train/test split and scores the
/// held-out pairs.
pub fn run_ablation(g: &CoPurchaseGraph, cfg: &AblationConfig, variants: &[Variant]) -> Result<Vec<AblationRow>> {
    if variants.is_empty() {
        return Ok(Vec::new());
    }
    let samples = make_training_set(g, &cfg.dataset)?;
    let (train, test) = split(&samples, cfg.train_fraction, cfg.seed)?;
    let table = NodeFeatureTable::compute(g, g.node_attrs());
    let (y_train, y_test) = (labels(&train), labels(&test));
    variants
        .iter()
        .map(|&variant| {
            let layout = PairLayout::new(variant, cfg.d_cat);
            let x_train = materialize(g, &table, &layout, &train);
            let x_test = materialize(g, &table, &layout, &test);
            let forest = train_forest(&x_train, &y_train, &cfg.forest, cfg.seed)?;
            let scores = forest.predict_matrix(&x_test)?;
            log::info!("ablation {variant}: trained {} trees", forest.trees.len());
            Ok(AblationRow {
                variant,
                metrics: classify(&y_test, &scores)?,
            })
        })
        .collect()
}

pub fn write_ablation_csv<W: Write>(rows: &[AblationRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["variant", "precision", "recall", "f1", "roc_auc"])?;
    for r in rows {
        let m = &r.metrics;
        w.write_record([
            r.variant.to_string(),
            format!("{:.4}", m.precision),
            format!("{:.4}", m.recall),
            format!("{:.4}", m.f1),
            format!("{:.4}", m.roc_auc),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_variant_list() {
        let g = CoPurchaseGraph::from_edges(2, [(0, 1)]);
        assert!(run_ablation(&g, &AblationConfig::default(), &[]).unwrap().is_empty());
    }
}
