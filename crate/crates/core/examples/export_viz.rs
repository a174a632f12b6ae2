//! Exports the neighborhood of the highest-degree products as GEXF (for
//! Gephi and similar tools) and as node/edge CSV files.

use copurchase::graph::io::{write_gexf, write_viz_csv};
use copurchase::graph::{top_degree_neighborhood, Adjacency};
use copurchase::synthetic::{planted_graph, PlantedConfig};
use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;

fn main() -> copurchase::Result<()> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| ".".into()));
    let g = planted_graph(&PlantedConfig::default());
    let sub = top_degree_neighborhood(&g, 50);
    write_gexf(&sub, BufWriter::new(File::create(dir.join("top50.gexf"))?))?;
    write_viz_csv(
        &sub,
        BufWriter::new(File::create(dir.join("top50_nodes.csv"))?),
        BufWriter::new(File::create(dir.join("top50_edges.csv"))?),
    )?;
    println!("top-50 neighborhood: {} nodes, {} edges -> {}", sub.node_count(), sub.edge_count(), dir.display());
    Ok(())
}
