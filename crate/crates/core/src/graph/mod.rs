//! The undirected co-purchase graph and its structural statistics.
//!
//! Adjacency is stored CSR-style with every neighbor list sorted, so edge
//! lookups are a binary search and neighbor intersections are merges.

mod assortativity;
mod clustering;
mod components;
mod degree;
pub mod io;
mod sample;

pub use assortativity::{attribute_assortativity, mixing_matrix};
pub use clustering::{all_clustering, clustering_coefficient};
pub use components::{connected_components, largest_cc, Components};
pub use degree::{fit_power_law_ccdf, hill_estimate, DegreeDistribution, PowerLawFit};
pub use sample::{bfs_from, bfs_sample, top_degree_neighborhood};

use crate::meta::{Group, ProductRecord};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::collections::HashMap;

pub type NodeId = usize;

/// Per-node attributes carried from the metadata.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeAttrs {
    pub asin: String,
    pub group: Group,
    /// Category paths as id sequences, root first.
    pub categories: Vec<Vec<u32>>,
}

impl NodeAttrs {
    pub fn from_record(r: &ProductRecord) -> Self {
        Self {
            asin: r.asin.clone(),
            group: r.group.clone().unwrap_or_else(|| Group::Other(String::new())),
            categories: r.category_paths.iter().map(|p| p.ids()).collect(),
        }
    }

    fn placeholder(i: usize) -> Self {
        Self {
            asin: format!("N{i}"),
            group: Group::Book,
            categories: Vec::new(),
        }
    }
}

/// Read-only adjacency access shared by the graph and its masked views.
pub trait Adjacency: Sync {
    fn node_count(&self) -> usize;
    fn edge_count(&self) -> usize;
    fn neighbors(&self, v: NodeId) -> Neighbors<'_>;
    fn degree(&self, v: NodeId) -> usize;
    fn has_edge(&self, u: NodeId, v: NodeId) -> bool;
}

/// Ascending neighbor iterator, optionally skipping one hidden neighbor.
#[derive(Clone)]
pub struct Neighbors<'a> {
    iter: std::slice::Iter<'a, NodeId>,
    skip: Option<NodeId>,
}

impl Iterator for Neighbors<'_> {
    type Item = NodeId;

    fn next(&mut self) -> Option<NodeId> {
        loop {
            let v = *self.iter.next()?;
            if Some(v) != self.skip {
                return Some(v);
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuildReport {
    pub nodes: usize,
    pub edges: usize,
    pub isolated: usize,
    /// Similar-list entries whose ASIN is not among the retained records.
    pub dropped_references: usize,
    pub duplicate_asins: usize,
    pub self_references: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoPurchaseGraph {
    nodes: Vec<NodeAttrs>,
    offsets: Vec<usize>,
    targets: Vec<NodeId>,
    /// For induced subgraphs: node index in the parent graph.
    origin: Option<Vec<NodeId>>,
    #[serde(skip)]
    asin_index: HashMap<String, NodeId>,
}

impl PartialEq for CoPurchaseGraph {
    fn eq(&self, other: &Self) -> bool {
        self.nodes == other.nodes
            && self.offsets == other.offsets
            && self.targets == other.targets
            && self.origin == other.origin
    }
}

impl CoPurchaseGraph {
    /// Builds the graph from already filtered records. Edges come from the
    /// similar lists, collapsed to undirected and deduplicated; references to
    /// ASINs outside the record set are dropped and tallied.
    pub fn build<'a, I>(records: I) -> (Self, BuildReport)
    where
        I: IntoIterator<Item = &'a ProductRecord>,
    {
        let mut report = BuildReport::default();
        let mut attrs = Vec::new();
        let mut similar: Vec<&'a [String]> = Vec::new();
        let mut index: HashMap<String, NodeId> = HashMap::new();
        for r in records {
            if index.contains_key(&r.asin) {
                log::warn!("duplicate ASIN {} (record {}), keeping first occurrence", r.asin, r.id);
                report.duplicate_asins += 1;
                continue;
            }
            index.insert(r.asin.clone(), attrs.len());
            attrs.push(NodeAttrs::from_record(r));
            similar.push(&r.similar_asins);
        }
        let mut edges = Vec::new();
        for (u, list) in similar.iter().enumerate() {
            for a in list.iter() {
                match index.get(a) {
                    Some(&v) if v == u => report.self_references += 1,
                    Some(&v) => edges.push((u.min(v), u.max(v))),
                    None => report.dropped_references += 1,
                }
            }
        }
        let g = Self::with_attrs(attrs, edges);
        report.nodes = g.node_count();
        report.edges = g.edge_count();
        report.isolated = (0..g.node_count()).filter(|&v| g.degree(v) == 0).count();
        (g, report)
    }

    /// Builds from explicit attributes and an edge list. Self-loops are
    /// dropped and parallel/reciprocal edges collapse to one.
    pub fn with_attrs(nodes: Vec<NodeAttrs>, edges: impl IntoIterator<Item = (NodeId, NodeId)>) -> Self {
        let n = nodes.len();
        let mut pairs: Vec<(NodeId, NodeId)> = edges
            .into_iter()
            .filter(|(u, v)| u != v)
            .map(|(u, v)| (u.min(v), u.max(v)))
            .collect();
        pairs.sort_unstable();
        pairs.dedup();
        let mut deg = vec![0usize; n];
        for &(u, v) in &pairs {
            assert!(u < n && v < n, "edge ({u},{v}) out of range for {n} nodes");
            deg[u] += 1;
            deg[v] += 1;
        }
        let mut offsets = vec![0usize; n + 1];
        for i in 0..n {
            offsets[i + 1] = offsets[i] + deg[i];
        }
        let mut fill = offsets.clone();
        let mut targets = vec![0; offsets[n]];
        for &(u, v) in &pairs {
            targets[fill[u]] = v;
            fill[u] += 1;
            targets[fill[v]] = u;
            fill[v] += 1;
        }
        for i in 0..n {
            targets[offsets[i]..offsets[i + 1]].sort_unstable();
        }
        let mut g = Self {
            nodes,
            offsets,
            targets,
            origin: None,
            asin_index: HashMap::new(),
        };
        g.reindex();
        g
    }

    /// Graph over `n` placeholder nodes (`N0`, `N1`, ...), handy for fixtures.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (NodeId, NodeId)>) -> Self {
        Self::with_attrs((0..n).map(NodeAttrs::placeholder).collect(), edges)
    }

    /// Rebuilds the ASIN lookup; needed after deserialization.
    pub fn reindex(&mut self) {
        self.asin_index = self
            .nodes
            .iter()
            .enumerate()
            .map(|(i, a)| (a.asin.clone(), i))
            .collect();
    }

    pub fn attrs(&self, v: NodeId) -> &NodeAttrs {
        &self.nodes[v]
    }

    pub fn attrs_mut(&mut self, v: NodeId) -> &mut NodeAttrs {
        &mut self.nodes[v]
    }

    pub fn node_attrs(&self) -> &[NodeAttrs] {
        &self.nodes
    }

    pub fn lookup(&self, asin: &str) -> Option<NodeId> {
        self.asin_index.get(asin).copied()
    }

    pub fn neighbor_slice(&self, v: NodeId) -> &[NodeId] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    /// Parent-graph index of `v` when this graph is an induced subgraph.
    pub fn origin(&self, v: NodeId) -> Option<NodeId> {
        self.origin.as_ref().map(|o| o[v])
    }

    pub fn origin_table(&self) -> Option<&[NodeId]> {
        self.origin.as_deref()
    }

    /// Every edge once, as `(u, v)` with `u < v`, in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        (0..self.node_count()).flat_map(move |u| {
            self.neighbor_slice(u)
                .iter()
                .filter(move |&&v| v > u)
                .map(move |&v| (u, v))
        })
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.node_count()).map(|v| self.degree(v)).collect()
    }

    /// Subgraph induced by `nodes` (deduplicated, ascending order), with the
    /// remap table kept in [`origin`](Self::origin).
    pub fn induced_subgraph(&self, nodes: &[NodeId]) -> Self {
        let mut keep: Vec<NodeId> = nodes.to_vec();
        keep.sort_unstable();
        keep.dedup();
        let mut local = vec![usize::MAX; self.node_count()];
        for (i, &v) in keep.iter().enumerate() {
            local[v] = i;
        }
        let mut edges = Vec::new();
        for (i, &v) in keep.iter().enumerate() {
            for &w in self.neighbor_slice(v) {
                let j = local[w];
                if j != usize::MAX && i < j {
                    edges.push((i, j));
                }
            }
        }
        let attrs = keep.iter().map(|&v| self.nodes[v].clone()).collect();
        let mut g = Self::with_attrs(attrs, edges);
        g.origin = Some(keep);
        g
    }

    /// View with the undirected edge `(u, v)` hidden. The graph itself is
    /// never mutated.
    pub fn masked(&self, u: NodeId, v: NodeId) -> MaskedGraph<'_> {
        let hidden = self.has_edge(u, v).then_some((u, v));
        MaskedGraph { base: self, hidden }
    }

    pub fn unmasked(&self) -> MaskedGraph<'_> {
        MaskedGraph {
            base: self,
            hidden: None,
        }
    }

    /// Content hash over structure and attributes.
    pub fn checksum(&self) -> String {
        let mut h = Sha256::new();
        h.update((self.node_count() as u64).to_le_bytes());
        for &o in &self.offsets {
            h.update((o as u64).to_le_bytes());
        }
        for &t in &self.targets {
            h.update((t as u64).to_le_bytes());
        }
        for a in &self.nodes {
            h.update(a.asin.as_bytes());
            h.update([0]);
            h.update(a.group.as_str().as_bytes());
            h.update([0]);
            for p in &a.categories {
                for id in p {
                    h.update(id.to_le_bytes());
                }
                h.update([0xff]);
            }
        }
        hex::encode(h.finalize())
    }

    /// Symmetry, no self-loops, sorted unique neighbor lists.
    pub fn check_invariants(&self) -> Result<(), String> {
        for u in 0..self.node_count() {
            let adj = self.neighbor_slice(u);
            if adj.windows(2).any(|w| w[0] >= w[1]) {
                return Err(format!("neighbors of {u} not strictly ascending"));
            }
            for &v in adj {
                if v == u {
                    return Err(format!("self-loop at {u}"));
                }
                if !self.has_edge(v, u) {
                    return Err(format!("edge {u}->{v} lacks its reverse"));
                }
            }
        }
        if !self.targets.len().is_multiple_of(2) {
            return Err("degree sum is odd".into());
        }
        Ok(())
    }
}

impl Adjacency for CoPurchaseGraph {
    fn node_count(&self) -> usize {
        self.nodes.len()
    }

    fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    fn neighbors(&self, v: NodeId) -> Neighbors<'_> {
        Neighbors {
            iter: self.neighbor_slice(v).iter(),
            skip: None,
        }
    }

    fn degree(&self, v: NodeId) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.neighbor_slice(u).binary_search(&v).is_ok()
    }
}

/// A graph with at most one edge hidden.
#[derive(Clone, Copy)]
pub struct MaskedGraph<'a> {
    base: &'a CoPurchaseGraph,
    hidden: Option<(NodeId, NodeId)>,
}

impl<'a> MaskedGraph<'a> {
    pub fn base(&self) -> &'a CoPurchaseGraph {
        self.base
    }

    pub fn hidden(&self) -> Option<(NodeId, NodeId)> {
        self.hidden
    }

    fn hidden_partner(&self, v: NodeId) -> Option<NodeId> {
        match self.hidden {
            Some((a, b)) if a == v => Some(b),
            Some((a, b)) if b == v => Some(a),
            _ => None,
        }
    }
}

impl Adjacency for MaskedGraph<'_> {
    fn node_count(&self) -> usize {
        self.base.node_count()
    }

    fn edge_count(&self) -> usize {
        self.base.edge_count() - usize::from(self.hidden.is_some())
    }

    fn neighbors(&self, v: NodeId) -> Neighbors<'_> {
        Neighbors {
            iter: self.base.neighbor_slice(v).iter(),
            skip: self.hidden_partner(v),
        }
    }

    fn degree(&self, v: NodeId) -> usize {
        self.base.degree(v) - usize::from(self.hidden_partner(v).is_some())
    }

    fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.hidden_partner(u) != Some(v) && self.base.has_edge(u, v)
    }
}
