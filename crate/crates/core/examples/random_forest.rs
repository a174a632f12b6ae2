//! Random-forest link prediction on pairs built around 1-degree nodes.

use copurchase::dataset::{labels, make_training_set, materialize, split, DatasetConfig};
use copurchase::eval::classify;
use copurchase::features::{NodeFeatureTable, PairLayout, Variant};
use copurchase::forest::{train_forest, ForestParams};
use copurchase::synthetic::{planted_graph, PlantedConfig};

fn main() -> copurchase::Result<()> {
    let g = planted_graph(&PlantedConfig {
        communities: 10,
        community_size: 60,
        pendants: 40,
        ..Default::default()
    });
    let samples = make_training_set(&g, &DatasetConfig { n_pos: 300, n_neg: 300, seed: 1, ..Default::default() })?;
    let (train, test) = split(&samples, 0.8, 1)?;

    let layout = PairLayout::new(Variant::Full, 8);
    let table = NodeFeatureTable::compute(&g, g.node_attrs());
    let x_train = materialize(&g, &table, &layout, &train);
    let x_test = materialize(&g, &table, &layout, &test);

    let forest = train_forest(&x_train, &labels(&train), &ForestParams::default(), 7)?;
    let report = classify(&labels(&test), &forest.predict_matrix(&x_test)?)?;
    println!("columns: {}", layout.column_names().join(","));
    println!("OOB accuracy: {:.3}", forest.oob_accuracy.unwrap_or(f64::NAN));
    println!(
        "test precision {:.3} recall {:.3} F1 {:.3} ROC-AUC {:.3}",
        report.precision, report.recall, report.f1, report.roc_auc
    );
    Ok(())
}
