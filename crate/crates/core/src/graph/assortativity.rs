use super::{Adjacency, NodeId};
use crate::error::{Error, Result};
use std::collections::BTreeMap;
use std::hash::Hash;

/// Normalized edge mixing matrix over the labels present on edge endpoints.
/// Each undirected edge contributes to both `(a, b)` and `(b, a)`, so the
/// matrix is symmetric and sums to 1.
pub fn mixing_matrix<A, K, F>(g: &A, attr: F) -> (Vec<K>, Vec<Vec<f64>>)
where
    A: Adjacency,
    K: Ord + Clone + Hash,
    F: Fn(NodeId) -> K,
{
    let mut classes: BTreeMap<K, usize> = BTreeMap::new();
    let labels: Vec<K> = (0..g.node_count()).map(&attr).collect();
    for u in 0..g.node_count() {
        if g.degree(u) > 0 {
            let next = classes.len();
            classes.entry(labels[u].clone()).or_insert(next);
        }
    }
    // renumber in label order so the matrix layout is deterministic
    let keys: Vec<K> = classes.keys().cloned().collect();
    for (i, k) in keys.iter().enumerate() {
        classes.insert(k.clone(), i);
    }
    let c = keys.len();
    let mut counts = vec![vec![0u64; c]; c];
    for u in 0..g.node_count() {
        let a = match classes.get(&labels[u]) {
            Some(&a) => a,
            None => continue,
        };
        for v in g.neighbors(u) {
            counts[a][classes[&labels[v]]] += 1;
        }
    }
    let total = 2.0 * g.edge_count() as f64;
    let e = counts
        .into_iter()
        .map(|row| row.into_iter().map(|x| x as f64 / total).collect())
        .collect();
    (keys, e)
}

/// Newman's categorical assortativity `r = (tr e - sum a_i b_i) / (1 - sum a_i b_i)`.
/// Returns 1 when the denominator vanishes (every edge within one class).
pub fn attribute_assortativity<A, K, F>(g: &A, attr: F) -> Result<f64>
where
    A: Adjacency,
    K: Ord + Clone + Hash,
    F: Fn(NodeId) -> K,
{
    if g.edge_count() == 0 {
        return Err(Error::EmptyGraph);
    }
    let (_, e) = mixing_matrix(g, attr);
    let c = e.len();
    let trace: f64 = (0..c).map(|i| e[i][i]).sum();
    let a: Vec<f64> = e.iter().map(|row| row.iter().sum()).collect();
    let b: Vec<f64> = (0..c).map(|j| e.iter().map(|row| row[j]).sum()).collect();
    let ab: f64 = a.iter().zip(&b).map(|(x, y)| x * y).sum();
    let denom = 1.0 - ab;
    if denom.abs() < 1e-15 {
        return Ok(1.0);
    }
    Ok((trace - ab) / denom)
}
