//! Labeled link-prediction pairs built around 1-degree nodes.
//!
//! A 1-degree node's single neighbor is its ground-truth link. Positives pair
//! sampled 1-degree nodes with that neighbor; negatives pair sampled 1-degree
//! nodes with a random node they are not linked to.

use crate::error::{Error, Result};
use crate::features::{NodeFeatureTable, NodeRows, PairLayout};
use crate::graph::{Adjacency, CoPurchaseGraph, NodeId};
use crate::rng;
use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::io::Write;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PairSample {
    pub source: NodeId,
    pub target: NodeId,
    pub label: u8,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NegativeMode {
    /// Any node not adjacent to the source.
    #[default]
    NonAdjacent,
    /// Only nodes of degree 0 (requires a graph that still has them).
    Isolated,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DatasetConfig {
    pub n_pos: usize,
    pub n_neg: usize,
    pub negatives: NegativeMode,
    pub seed: u64,
}

impl Default for DatasetConfig {
    fn default() -> Self {
        Self {
            n_pos: 10_000,
            n_neg: 10_000,
            negatives: NegativeMode::NonAdjacent,
            seed: 0,
        }
    }
}

/// Nodes of degree exactly 1, ascending.
pub fn one_degree_nodes<A: Adjacency>(g: &A) -> Vec<NodeId> {
    (0..g.node_count()).filter(|&v| g.degree(v) == 1).collect()
}

pub fn make_training_set(g: &CoPurchaseGraph, cfg: &DatasetConfig) -> Result<Vec<PairSample>> {
    let pool = one_degree_nodes(g);
    if pool.len() < cfg.n_pos || (cfg.n_neg > 0 && pool.is_empty()) {
        return Err(Error::NotEnoughOneDegree {
            requested: cfg.n_pos.max(usize::from(cfg.n_neg > 0)),
            available: pool.len(),
        });
    }
    let mut r = rng::seeded(cfg.seed);
    let mut out = Vec::with_capacity(cfg.n_pos + cfg.n_neg);

    for i in rand::seq::index::sample(&mut r, pool.len(), cfg.n_pos).into_iter() {
        let s = pool[i];
        let t = g.neighbor_slice(s)[0];
        out.push(PairSample {
            source: s,
            target: t,
            label: 1,
        });
    }

    let isolated: Vec<NodeId> = match cfg.negatives {
        NegativeMode::Isolated => (0..g.node_count()).filter(|&v| g.degree(v) == 0).collect(),
        NegativeMode::NonAdjacent => Vec::new(),
    };
    if cfg.negatives == NegativeMode::Isolated && cfg.n_neg > 0 && isolated.is_empty() {
        return Err(Error::invalid("isolated negatives requested but the graph has no degree-0 nodes"));
    }
    let n = g.node_count();
    for _ in 0..cfg.n_neg {
        let s = pool[r.gen_range(0..pool.len())];
        let t = match cfg.negatives {
            NegativeMode::Isolated => isolated[r.gen_range(0..isolated.len())],
            NegativeMode::NonAdjacent => {
                if n - 1 - g.degree(s) == 0 {
                    return Err(Error::invalid(format!("node {s} is adjacent to every other node")));
                }
                loop {
                    let t = r.gen_range(0..n);
                    if t != s && !g.has_edge(s, t) {
                        break t;
                    }
                }
            }
        };
        out.push(PairSample {
            source: s,
            target: t,
            label: 0,
        });
    }
    out.shuffle(&mut r);
    Ok(out)
}

/// Stratified seeded split: each label class is shuffled and cut at
/// `round(train_fraction * class_size)`.
pub fn split(samples: &[PairSample], train_fraction: f64, seed: u64) -> Result<(Vec<PairSample>, Vec<PairSample>)> {
    if samples.is_empty() {
        return Err(Error::invalid("cannot split an empty sample set"));
    }
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(Error::invalid(format!("train fraction {train_fraction} outside (0, 1)")));
    }
    let mut r = rng::seeded(seed);
    let (mut train, mut test) = (Vec::new(), Vec::new());
    for label in [0u8, 1] {
        let mut class: Vec<PairSample> = samples.iter().copied().filter(|s| s.label == label).collect();
        class.shuffle(&mut r);
        let cut = (train_fraction * class.len() as f64).round() as usize;
        test.extend_from_slice(&class[cut..]);
        class.truncate(cut);
        train.extend(class);
    }
    train.shuffle(&mut r);
    test.shuffle(&mut r);
    Ok((train, test))
}

/// Row-major feature matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

impl FeatureMatrix {
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in &rows {
            if r.len() != cols {
                return Err(Error::Dimension {
                    expected: cols,
                    got: r.len(),
                });
            }
            data.extend_from_slice(r);
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }
}

/// Assembles pair features. For positive pairs the labeled edge is hidden
/// first, so the source looks like a newly listed (isolated) product and the
/// target's structure excludes the link being predicted.
pub fn materialize(g: &CoPurchaseGraph, table: &NodeFeatureTable, layout: &PairLayout, samples: &[PairSample]) -> FeatureMatrix {
    let attrs = g.node_attrs();
    let rows: Vec<Vec<f64>> = samples
        .par_iter()
        .map(|s| {
            if s.label == 1 {
                let view = g.masked(s.source, s.target);
                let masked = table.masked(&view, attrs, s.source, s.target);
                layout.assemble(&masked, attrs, s.source, s.target)
            } else {
                layout.assemble(table as &dyn NodeRows, attrs, s.source, s.target)
            }
        })
        .collect();
    FeatureMatrix {
        rows: rows.len(),
        cols: layout.len(),
        data: rows.into_iter().flatten().collect(),
    }
}

pub fn labels(samples: &[PairSample]) -> Vec<u8> {
    samples.iter().map(|s| s.label).collect()
}

/// `source_asin,target_asin,label` rows.
pub fn write_pairs_csv<W: Write>(g: &CoPurchaseGraph, samples: &[PairSample], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["source_asin", "target_asin", "label"])?;
    for s in samples {
        w.write_record([&g.attrs(s.source).asin, &g.attrs(s.target).asin, &s.label.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_pairs_csv<R: std::io::Read>(g: &CoPurchaseGraph, input: R) -> Result<Vec<PairSample>> {
    let mut out = Vec::new();
    for rec in csv::Reader::from_reader(input).records() {
        let rec = rec?;
        let find = |a: &str| g.lookup(a).ok_or_else(|| Error::invalid(format!("unknown ASIN {a}")));
        let label: u8 = rec[2].parse().map_err(|_| Error::invalid(format!("bad label `{}`", &rec[2])))?;
        if label > 1 {
            return Err(Error::invalid(format!("label must be 0 or 1, got {label}")));
        }
        out.push(PairSample {
            source: find(&rec[0])?,
            target: find(&rec[1])?,
            label,
        });
    }
    Ok(out)
}

/// Feature table as CSV: a `#` comment line describing the layout, a header
/// row of column names, then `label` followed by the features.
pub fn write_features_csv<W: Write>(layout: &PairLayout, x: &FeatureMatrix, y: &[u8], mut out: W) -> Result<()> {
    writeln!(
        out,
        "# variant={} d_cat={} source_structure={} zero_fill={} rows={} cols={}",
        layout.variant, layout.d_cat, layout.include_source_structure, layout.zero_fill, x.rows, x.cols
    )?;
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["label".to_string()];
    header.extend(layout.column_names());
    w.write_record(&header)?;
    for i in 0..x.rows {
        let mut rec = vec![y[i].to_string()];
        rec.extend(x.row(i).iter().map(|v| format!("{v}")));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn star(leaves: usize) -> CoPurchaseGraph {
        CoPurchaseGraph::from_edges(leaves + 1, (1..=leaves).map(|l| (0, l)))
    }

    #[test]
    fn star_leaves() {
        assert_eq!(one_degree_nodes(&star(5)), vec![1, 2, 3, 4, 5]);
    }

    #[test]
    fn cycle_has_none() {
        let g = CoPurchaseGraph::from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)]);
        assert!(one_degree_nodes(&g).is_empty());
    }

    #[test]
    fn path_positives() {
        let g = CoPurchaseGraph::from_edges(3, [(0, 1), (1, 2)]);
        let cfg = DatasetConfig {
            n_pos: 2,
            n_neg: 0,
            ..Default::default()
        };
        let mut s = make_training_set(&g, &cfg).unwrap();
        s.sort_by_key(|p| p.source);
        assert_eq!(
            s,
            vec![
                PairSample { source: 0, target: 1, label: 1 },
                PairSample { source: 2, target: 1, label: 1 }
            ]
        );
    }

    #[test]
    fn near_complete_graph_negative_terminates() {
        // K5 minus edge (0,1), plus a pendant node 5 hanging off 0
        let mut edges = Vec::new();
        for a in 0..5 {
            for b in a + 1..5 {
                if (a, b) != (0, 1) {
                    edges.push((a, b));
                }
            }
        }
        edges.push((0, 5));
        let g = CoPurchaseGraph::from_edges(6, edges);
        let cfg = DatasetConfig {
            n_pos: 0,
            n_neg: 1,
            ..Default::default()
        };
        let s = make_training_set(&g, &cfg).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].source, 5);
        assert!(!g.has_edge(5, s[0].target) && s[0].target != 5);
    }

    #[test]
    fn insufficient_pool() {
        let err = make_training_set(&star(3), &DatasetConfig { n_pos: 4, n_neg: 0, ..Default::default() });
        assert!(matches!(err, Err(Error::NotEnoughOneDegree { requested: 4, available: 3 })));
    }

    #[test]
    fn labels_agree_with_graph_and_seed() {
        let g = star(50);
        let cfg = DatasetConfig {
            n_pos: 30,
            n_neg: 30,
            seed: 4,
            ..Default::default()
        };
        let a = make_training_set(&g, &cfg).unwrap();
        assert_eq!(a, make_training_set(&g, &cfg).unwrap());
        for s in &a {
            assert_eq!(g.degree(s.source), 1);
            assert_eq!(g.has_edge(s.source, s.target), s.label == 1);
            assert_ne!(s.source, s.target);
        }
    }

    #[test]
    fn isolated_negatives() {
        let g = CoPurchaseGraph::from_edges(5, [(0, 1), (1, 2)]);
        let cfg = DatasetConfig {
            n_pos: 1,
            n_neg: 5,
            negatives: NegativeMode::Isolated,
            seed: 1,
        };
        for s in make_training_set(&g, &cfg).unwrap().iter().filter(|s| s.label == 0) {
            assert!(s.target == 3 || s.target == 4);
        }
        let no_iso = CoPurchaseGraph::from_edges(3, [(0, 1), (1, 2)]);
        assert!(make_training_set(&no_iso, &cfg).is_err());
    }

    #[test]
    fn split_two_samples() {
        let s = vec![
            PairSample { source: 0, target: 1, label: 1 },
            PairSample { source: 2, target: 3, label: 0 },
            PairSample { source: 4, target: 1, label: 1 },
            PairSample { source: 5, target: 3, label: 0 },
        ];
        let (tr, te) = split(&s, 0.5, 0).unwrap();
        assert_eq!(tr.len(), 2);
        assert_eq!(te.len(), 2);
        assert_ne!(tr[0].label, tr[1].label);
        assert_ne!(te[0].label, te[1].label);
        assert!(split(&[], 0.5, 0).is_err());
        assert!(split(&s, 1.0, 0).is_err());
    }

    #[test]
    fn positive_features_use_masked_edge() {
        let g = CoPurchaseGraph::from_edges(4, [(0, 1), (1, 2), (1, 3)]);
        let table = NodeFeatureTable::compute(&g, g.node_attrs());
        let mut layout = PairLayout::new(crate::features::Variant::NoCategory, 4);
        layout.include_source_structure = true;
        let samples = [PairSample { source: 0, target: 1, label: 1 }, PairSample { source: 0, target: 2, label: 0 }];
        let x = materialize(&g, &table, &layout, &samples);
        // dst_log_degree, dst_clustering, src_log_degree, src_clustering
        let close = |a: &[f64], b: &[f64]| a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-15);
        assert!(close(&x.row(0)[8..], &[3f64.ln(), 0.0, 0.0, 0.0]));
        assert!(close(&x.row(1)[8..], &[2f64.ln(), 0.0, 2f64.ln(), 0.0]));
    }
}
