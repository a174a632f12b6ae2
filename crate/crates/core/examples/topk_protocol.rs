//! Top-k ranking protocol on BFS subgraphs for the random, forest and
//! GraphSAGE scorers.

use copurchase::dataset::{labels, make_training_set, materialize, DatasetConfig};
use copurchase::eval::{evaluate_protocol, EvalReport, ForestScorer, ProtocolConfig, RandomScorer, SageScorer};
use copurchase::features::{NodeFeatureTable, PairLayout, Variant};
use copurchase::forest::{train_forest, ForestParams};
use copurchase::graph::largest_cc;
use copurchase::sage::{train_sage, SageHyper};
use copurchase::synthetic::{planted_graph, PlantedConfig};

fn show(r: &EvalReport) {
    let curve: Vec<String> = r.topk_curve.iter().map(|p| format!("{}:{:.3}", p.k, p.accuracy)).collect();
    println!("{:>6}  queries {:>4}  top5 {:.4}  mrr {:.4}  [{}]", r.model, r.queries, r.top5, r.mrr, curve.join(" "));
}

fn main() -> copurchase::Result<()> {
    let g = planted_graph(&PlantedConfig {
        communities: 10,
        community_size: 60,
        pendants: 40,
        ..Default::default()
    });
    let samples = make_training_set(&g, &DatasetConfig { n_pos: 300, n_neg: 300, seed: 4, ..Default::default() })?;
    let layout = PairLayout::new(Variant::Full, 8);
    let table = NodeFeatureTable::compute(&g, g.node_attrs());
    let forest = train_forest(&materialize(&g, &table, &layout, &samples), &labels(&samples), &ForestParams::default(), 4)?;
    let sage = train_sage(&g, &samples, &SageHyper { epochs: 20, batch_size: 32, seed: 4, ..Default::default() })?;

    let lcc = largest_cc(&g)?;
    let cfg = ProtocolConfig { n: 300, ks: vec![1, 5, 10, 20, 50, 100], seeds: (0..5).collect() };
    show(&evaluate_protocol(&lcc, &RandomScorer::new(0), &cfg)?);
    show(&evaluate_protocol(&lcc, &ForestScorer { forest: &forest, layout }, &cfg)?);
    show(&evaluate_protocol(&lcc, &SageScorer { model: &sage }, &cfg)?);
    println!("random baseline expectation for k = 5: {:.4}", 5.0 / (cfg.n as f64 - 1.0));
    Ok(())
}
