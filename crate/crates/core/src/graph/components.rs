use super::{Adjacency, CoPurchaseGraph, NodeId};
use crate::error::{Error, Result};
use std::collections::VecDeque;

/// Component labels in discovery order: component `c` is the one whose
/// smallest member index is the `c`-th smallest among all components.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Components {
    pub labels: Vec<usize>,
    pub sizes: Vec<usize>,
}

impl Components {
    pub fn count(&self) -> usize {
        self.sizes.len()
    }

    pub fn non_singleton(&self) -> usize {
        self.sizes.iter().filter(|&&s| s >= 2).count()
    }

    pub fn sizes_descending(&self) -> Vec<usize> {
        let mut s = self.sizes.clone();
        s.sort_unstable_by(|a, b| b.cmp(a));
        s
    }

    /// Largest component id; ties go to the component with the smaller
    /// minimum member.
    pub fn largest(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        for (c, &s) in self.sizes.iter().enumerate() {
            if best.is_none_or(|b| s > self.sizes[b]) {
                best = Some(c);
            }
        }
        best
    }

    pub fn members(&self, c: usize) -> Vec<NodeId> {
        (0..self.labels.len()).filter(|&v| self.labels[v] == c).collect()
    }
}

pub fn connected_components<A: Adjacency>(g: &A) -> Components {
    let n = g.node_count();
    let mut labels = vec![usize::MAX; n];
    let mut sizes = Vec::new();
    let mut queue = VecDeque::new();
    for s in 0..n {
        if labels[s] != usize::MAX {
            continue;
        }
        let c = sizes.len();
        labels[s] = c;
        queue.push_back(s);
        let mut size = 0;
        while let Some(u) = queue.pop_front() {
            size += 1;
            for w in g.neighbors(u) {
                if labels[w] == usize::MAX {
                    labels[w] = c;
                    queue.push_back(w);
                }
            }
        }
        sizes.push(size);
    }
    Components { labels, sizes }
}

/// Induced subgraph on the largest connected component.
pub fn largest_cc(g: &CoPurchaseGraph) -> Result<CoPurchaseGraph> {
    if g.edge_count() == 0 {
        return Err(Error::EmptyGraph);
    }
    let comps = connected_components(g);
    let c = comps.largest().expect("non-empty graph");
    Ok(g.induced_subgraph(&comps.members(c)))
}
