use super::{Adjacency, CoPurchaseGraph, NodeId};
use crate::error::{Error, Result};
use crate::rng;
use rand::Rng;
use std::collections::VecDeque;

/// Breadth-first collection of up to `n` nodes from `start`, visiting
/// neighbors in ascending index order. Errors if the start's component is
/// smaller than `n`.
pub fn bfs_from<A: Adjacency>(g: &A, start: NodeId, n: usize) -> Result<Vec<NodeId>> {
    let mut seen = vec![false; g.node_count()];
    let mut order = Vec::with_capacity(n);
    let mut queue = VecDeque::new();
    seen[start] = true;
    queue.push_back(start);
    while let Some(u) = queue.pop_front() {
        order.push(u);
        if order.len() == n {
            return Ok(order);
        }
        for w in g.neighbors(u) {
            if !seen[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    Err(Error::SampleTooLarge {
        requested: n,
        available: order.len(),
    })
}

/// BFS sample of `n` nodes from a seeded uniformly random start node.
pub fn bfs_sample<A: Adjacency>(g: &A, n: usize, seed: u64) -> Result<Vec<NodeId>> {
    if g.node_count() == 0 || n == 0 {
        return Err(Error::SampleTooLarge {
            requested: n,
            available: 0,
        });
    }
    let start = rng::seeded(seed).gen_range(0..g.node_count());
    bfs_from(g, start, n)
}

/// Induced subgraph on the `k` highest-degree nodes and all of their
/// neighbors. Degree ties at the cutoff go to the smaller node index.
pub fn top_degree_neighborhood(g: &CoPurchaseGraph, k: usize) -> CoPurchaseGraph {
    let mut order: Vec<NodeId> = (0..g.node_count()).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
    let mut keep = Vec::new();
    for &v in order.iter().take(k) {
        keep.push(v);
        keep.extend(g.neighbors(v));
    }
    g.induced_subgraph(&keep)
}
