//! One-hop GraphSAGE: gradient check, training, and inductive scoring of a
//! product with no links.

use copurchase::dataset::{labels, make_training_set, split, DatasetConfig};
use copurchase::eval::classify;
use copurchase::features::NodeFeatureTable;
use copurchase::graph::Adjacency;
use copurchase::rng;
use copurchase::sage::{check_gradients, predict_samples, score_pair, similarity_vector, train_sage, SageHyper, SageParams};
use copurchase::synthetic::{planted_graph, PlantedConfig};

fn main() -> copurchase::Result<()> {
    let g = planted_graph(&PlantedConfig {
        communities: 8,
        community_size: 50,
        pendants: 40,
        ..Default::default()
    });
    let samples = make_training_set(&g, &DatasetConfig { n_pos: 250, n_neg: 250, seed: 2, ..Default::default() })?;
    let (train, test) = split(&samples, 0.8, 2)?;

    let probe = SageHyper { sample_size: 1000, ..Default::default() };
    let table = NodeFeatureTable::compute(&g, g.node_attrs());
    let params = SageParams::init(probe.hidden, probe.d_cat, &mut rng::seeded(0));
    let check = check_gradients(&g, &table, &train[..8], &params, &probe, 1e-5);
    println!("gradient check: max relative error {:.2e}", check.max_relative_error);

    let hyper = SageHyper { epochs: 30, batch_size: 32, seed: 3, ..Default::default() };
    let model = train_sage(&g, &train, &hyper)?;
    for (e, l) in model.loss_trace.iter().enumerate().step_by(5) {
        println!("epoch {:>2}: loss {l:.4}", e + 1);
    }
    let report = classify(&labels(&test), &predict_samples(&g, &test, &model, 0))?;
    println!("test F1 {:.3} ROC-AUC {:.3}", report.f1, report.roc_auc);

    let isolated = (0..g.node_count()).find(|&v| g.degree(v) == 0).expect("fixture has isolated products");
    let mut best: Vec<(f64, usize)> = (0..g.node_count())
        .filter(|&v| v != isolated)
        .map(|v| {
            let sim = similarity_vector(&g, isolated, v, model.params.d_cat);
            let p = score_pair(&g, &table, isolated, v, &sim, &model.params, &model.hyper, &mut rng::seeded(v as u64));
            (p, v)
        })
        .collect();
    best.sort_by(|a, b| b.0.total_cmp(&a.0));
    println!("top suggestions for isolated product {}:", g.attrs(isolated).asin);
    for (p, v) in best.iter().take(5) {
        println!("  {} p = {p:.3}", g.attrs(*v).asin);
    }
    Ok(())
}
