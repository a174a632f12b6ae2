use super::{Adjacency, NodeId};
use rayon::prelude::*;

/// Local clustering coefficient `2 t / (d (d - 1))`, 0 when `d < 2`.
pub fn clustering_coefficient<A: Adjacency>(g: &A, v: NodeId) -> f64 {
    let d = g.degree(v);
    if d < 2 {
        return 0.0;
    }
    // each triangle through v is seen from both of its other corners
    let mut links = 0usize;
    for a in g.neighbors(v) {
        links += sorted_intersection(g.neighbors(a), g.neighbors(v));
    }
    links as f64 / (d * (d - 1)) as f64
}

pub fn all_clustering<A: Adjacency>(g: &A) -> Vec<f64> {
    (0..g.node_count())
        .into_par_iter()
        .map(|v| clustering_coefficient(g, v))
        .collect()
}

fn sorted_intersection(mut a: impl Iterator<Item = NodeId>, mut b: impl Iterator<Item = NodeId>) -> usize {
    let (mut x, mut y) = (a.next(), b.next());
    let mut n = 0;
    while let (Some(p), Some(q)) = (x, y) {
        match p.cmp(&q) {
            std::cmp::Ordering::Less => x = a.next(),
            std::cmp::Ordering::Greater => y = b.next(),
            std::cmp::Ordering::Equal => {
                n += 1;
                x = a.next();
                y = b.next();
            }
        }
    }
    n
}
