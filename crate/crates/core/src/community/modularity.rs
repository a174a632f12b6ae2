use super::compensated_sum;
use crate::error::{Error, Result};
use crate::graph::{Adjacency, NodeId};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::hash::Hash;

/// Node-to-community assignment with dense ids `0..count`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    assignment: Vec<usize>,
    count: usize,
}

impl Partition {
    /// Densifies arbitrary labels; ids follow first appearance in node order.
    pub fn from_labels<K: Hash + Eq>(labels: impl IntoIterator<Item = K>) -> Self {
        let mut ids: HashMap<K, usize> = HashMap::new();
        let assignment: Vec<usize> = labels
            .into_iter()
            .map(|k| {
                let next = ids.len();
                *ids.entry(k).or_insert(next)
            })
            .collect();
        Self {
            count: ids.len(),
            assignment,
        }
    }

    pub fn singletons(n: usize) -> Self {
        Self {
            assignment: (0..n).collect(),
            count: n,
        }
    }

    pub fn single(n: usize) -> Self {
        Self {
            assignment: vec![0; n],
            count: usize::from(n > 0),
        }
    }

    pub fn community(&self, v: NodeId) -> usize {
        self.assignment[v]
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut s = vec![0; self.count];
        for &c in &self.assignment {
            s[c] += 1;
        }
        s
    }
}

/// `Q = sum_c [ l_c / m - (d_c / 2m)^2 ]` with `l_c` the intra-community edge
/// count and `d_c` the community's total degree.
pub fn modularity<A: Adjacency>(g: &A, p: &Partition) -> Result<f64> {
    let m = g.edge_count();
    if m == 0 {
        return Err(Error::EmptyGraph);
    }
    if p.len() != g.node_count() {
        return Err(Error::Dimension {
            expected: g.node_count(),
            got: p.len(),
        });
    }
    let mut intra = vec![0usize; p.count()];
    let mut total = vec![0usize; p.count()];
    for u in 0..g.node_count() {
        let cu = p.community(u);
        total[cu] += g.degree(u);
        for v in g.neighbors(u) {
            if v > u && p.community(v) == cu {
                intra[cu] += 1;
            }
        }
    }
    let m = m as f64;
    Ok(compensated_sum((0..p.count()).map(|c| {
        let d = total[c] as f64 / (2.0 * m);
        intra[c] as f64 / m - d * d
    })))
}

/// Modularity of the partition induced by a node attribute.
pub fn modularity_by_attribute<A, K, F>(g: &A, attr: F) -> Result<f64>
where
    A: Adjacency,
    K: Hash + Eq,
    F: Fn(NodeId) -> K,
{
    let p = Partition::from_labels((0..g.node_count()).map(attr));
    modularity(g, &p)
}
