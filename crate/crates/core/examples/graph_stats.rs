//! Structural statistics of a co-purchase graph: components, LCC, degree
//! distribution fit, group assortativity and clustering.

use copurchase::graph::{
    all_clustering, attribute_assortativity, connected_components, fit_power_law_ccdf, largest_cc, Adjacency,
    DegreeDistribution,
};
use copurchase::synthetic::{planted_graph, PlantedConfig};

fn main() -> copurchase::Result<()> {
    let g = planted_graph(&PlantedConfig {
        communities: 10,
        community_size: 60,
        pendants: 30,
        ..Default::default()
    });
    let comps = connected_components(&g);
    let lcc = largest_cc(&g)?;
    println!("nodes {} edges {}", g.node_count(), g.edge_count());
    println!(
        "components {} (non-singleton {}), LCC {} nodes / {} edges",
        comps.count(),
        comps.non_singleton(),
        lcc.node_count(),
        lcc.edge_count()
    );

    let dist = DegreeDistribution::of(&g);
    let fit = fit_power_law_ccdf(&dist, 1)?;
    println!("CCDF fit: alpha {:.3} (R^2 {:.3}), Hill {:.3}", fit.alpha, fit.r_squared, fit.hill_alpha);

    let r = attribute_assortativity(&lcc, |v| lcc.attrs(v).group.clone())?;
    println!("group assortativity on LCC: {r:.3}");

    let cc = all_clustering(&lcc);
    println!("mean clustering on LCC: {:.3}", cc.iter().sum::<f64>() / cc.len() as f64);
    Ok(())
}
