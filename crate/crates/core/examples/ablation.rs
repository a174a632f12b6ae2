//! Feature ablation: one forest per dropped feature block, evaluated on a
//! shared held-out split.

use copurchase::dataset::DatasetConfig;
use copurchase::eval::{run_ablation, write_ablation_csv, AblationConfig};
use copurchase::features::Variant;
use copurchase::forest::ForestParams;
use copurchase::synthetic::{planted_graph, PlantedConfig};

fn main() -> copurchase::Result<()> {
    let g = planted_graph(&PlantedConfig {
        communities: 10,
        community_size: 60,
        pendants: 40,
        ..Default::default()
    });
    let cfg = AblationConfig {
        dataset: DatasetConfig { n_pos: 300, n_neg: 300, seed: 5, ..Default::default() },
        forest: ForestParams { n_trees: 50, ..Default::default() },
        seed: 5,
        ..Default::default()
    };
    let rows = run_ablation(&g, &cfg, &Variant::ALL)?;
    write_ablation_csv(&rows, std::io::stdout())
}
