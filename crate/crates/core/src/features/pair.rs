//! Pair feature assembly.
//!
//! Default layout for a candidate link `(u, v)`:
//!
//! ```text
//! [ G(u) x4 | G(v) x4 | Sim_c(u, v) x d_cat | D(v) | CC(v) ]
//! ```
//!
//! Ablation variants drop one block. Source-node structure (`D(u)`, `CC(u)`)
//! can be appended but is off by default.

use super::category::similarity_mask;
use super::node::NodeRows;
use crate::error::{Error, Result};
use crate::graph::{NodeAttrs, NodeId};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    Full,
    NoGroup,
    NoCategory,
    NoDegree,
    NoCluster,
}

impl Variant {
    pub const ALL: [Variant; 5] = [
        Variant::Full,
        Variant::NoGroup,
        Variant::NoCategory,
        Variant::NoDegree,
        Variant::NoCluster,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Variant::Full => "full",
            Variant::NoGroup => "no_group",
            Variant::NoCategory => "no_category",
            Variant::NoDegree => "no_degree",
            Variant::NoCluster => "no_cluster",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Variant::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| Error::UnknownVariant(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairLayout {
    pub variant: Variant,
    pub d_cat: usize,
    pub include_source_structure: bool,
    /// Keep the dropped block's columns and fill them with zeros instead of
    /// omitting them.
    pub zero_fill: bool,
}

impl Default for PairLayout {
    fn default() -> Self {
        Self::new(Variant::Full, super::DEFAULT_D_CAT)
    }
}

impl PairLayout {
    pub fn new(variant: Variant, d_cat: usize) -> Self {
        assert!(d_cat <= super::MAX_DEPTH);
        Self {
            variant,
            d_cat,
            include_source_structure: false,
            zero_fill: false,
        }
    }

    fn keeps(&self, block: Variant) -> bool {
        self.zero_fill || self.variant != block
    }

    fn live(&self, block: Variant) -> bool {
        self.variant != block
    }

    pub fn column_names(&self) -> Vec<String> {
        let groups = ["book", "dvd", "music", "video"];
        let mut cols = Vec::new();
        if self.keeps(Variant::NoGroup) {
            cols.extend(groups.iter().map(|g| format!("src_{g}")));
            cols.extend(groups.iter().map(|g| format!("dst_{g}")));
        }
        if self.keeps(Variant::NoCategory) {
            cols.extend((0..self.d_cat).map(|i| format!("sim_{i}")));
        }
        if self.keeps(Variant::NoDegree) {
            cols.push("dst_log_degree".into());
        }
        if self.keeps(Variant::NoCluster) {
            cols.push("dst_clustering".into());
        }
        if self.include_source_structure {
            if self.keeps(Variant::NoDegree) {
                cols.push("src_log_degree".into());
            }
            if self.keeps(Variant::NoCluster) {
                cols.push("src_clustering".into());
            }
        }
        cols
    }

    pub fn len(&self) -> usize {
        self.column_names().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Writes the features of `(u, v)` into `out` (cleared first).
    pub fn assemble_into<R: NodeRows + ?Sized>(&self, rows: &R, attrs: &[NodeAttrs], u: NodeId, v: NodeId, out: &mut Vec<f64>) {
        out.clear();
        let ru = rows.row(u);
        let rv = rows.row(v);
        let put = |out: &mut Vec<f64>, block: Variant, x: f64| {
            if self.live(block) {
                out.push(x);
            } else if self.zero_fill {
                out.push(0.0);
            }
        };
        for &x in &ru[..4] {
            put(out, Variant::NoGroup, x);
        }
        for &x in &rv[..4] {
            put(out, Variant::NoGroup, x);
        }
        if self.keeps(Variant::NoCategory) {
            let mask = if self.live(Variant::NoCategory) {
                similarity_mask(&attrs[u].categories, &attrs[v].categories, self.d_cat)
            } else {
                0
            };
            out.extend((0..self.d_cat).map(|i| ((mask >> i) & 1) as f64));
        }
        put(out, Variant::NoDegree, rv[4]);
        put(out, Variant::NoCluster, rv[5]);
        if self.include_source_structure {
            put(out, Variant::NoDegree, ru[4]);
            put(out, Variant::NoCluster, ru[5]);
        }
    }

    pub fn assemble<R: NodeRows + ?Sized>(&self, rows: &R, attrs: &[NodeAttrs], u: NodeId, v: NodeId) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.len());
        self.assemble_into(rows, attrs, u, v, &mut out);
        out
    }
}
