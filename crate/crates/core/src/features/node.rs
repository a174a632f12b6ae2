use crate::graph::{clustering_coefficient, Adjacency, NodeAttrs, NodeId};
use crate::meta::Group;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Width of a node feature row: group one-hot (4), log degree, clustering.
pub const NODE_DIM: usize = 6;

pub type NodeRow = [f64; NODE_DIM];

/// One-hot in Book, DVD, Music, Video order; other groups map to zeros.
pub fn group_onehot(group: &Group) -> [f64; 4] {
    let mut v = [0.0; 4];
    if let Some(i) = group.index() {
        v[i] = 1.0;
    }
    v
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NodeFeature {
    pub group_onehot: [f64; 4],
    /// `ln(1 + degree)`
    pub log_degree: f64,
    pub clustering: f64,
}

impl NodeFeature {
    pub fn compute<A: Adjacency>(g: &A, attrs: &NodeAttrs, v: NodeId) -> Self {
        Self {
            group_onehot: group_onehot(&attrs.group),
            log_degree: (g.degree(v) as f64).ln_1p(),
            clustering: clustering_coefficient(g, v),
        }
    }

    pub fn to_row(&self) -> NodeRow {
        let g = self.group_onehot;
        [g[0], g[1], g[2], g[3], self.log_degree, self.clustering]
    }
}

/// Source of node feature rows.
pub trait NodeRows: Sync {
    fn row(&self, v: NodeId) -> NodeRow;
}

/// Precomputed feature rows for every node of a graph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeFeatureTable {
    rows: Vec<NodeRow>,
}

impl NodeFeatureTable {
    pub fn compute<A: Adjacency>(g: &A, attrs: &[NodeAttrs]) -> Self {
        let rows = (0..g.node_count())
            .into_par_iter()
            .map(|v| NodeFeature::compute(g, &attrs[v], v).to_row())
            .collect();
        Self { rows }
    }

    pub fn from_rows(rows: Vec<NodeRow>) -> Self {
        Self { rows }
    }

    pub fn rows(&self) -> &[NodeRow] {
        &self.rows
    }

    pub fn rows_mut(&mut self) -> &mut [NodeRow] {
        &mut self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Rows as seen with the edge `(u, t)` hidden. Hiding an edge changes the
    /// degree of its endpoints and the clustering of the endpoints and their
    /// common neighbors; those rows are recomputed on `view`, which must be
    /// the masked graph.
    pub fn masked<'a, A: Adjacency>(&'a self, view: &A, attrs: &[NodeAttrs], u: NodeId, t: NodeId) -> MaskedRows<'a> {
        let mut affected = vec![u, t];
        affected.extend(view.neighbors(u).filter(|&w| view.has_edge(w, t)));
        let overrides = affected
            .into_iter()
            .map(|v| (v, NodeFeature::compute(view, &attrs[v], v).to_row()))
            .collect();
        MaskedRows { base: self, overrides }
    }
}

impl NodeRows for NodeFeatureTable {
    fn row(&self, v: NodeId) -> NodeRow {
        self.rows[v]
    }
}

pub struct MaskedRows<'a> {
    base: &'a NodeFeatureTable,
    overrides: Vec<(NodeId, NodeRow)>,
}

impl NodeRows for MaskedRows<'_> {
    fn row(&self, v: NodeId) -> NodeRow {
        for (n, r) in &self.overrides {
            if *n == v {
                return *r;
            }
        }
        self.base.rows[v]
    }
}
