//! Synthetic catalogs and graphs for examples, tests and benchmarks.
//!
//! The planted catalog mimics the structure the models rely on: dense
//! communities that share a product group and a category subtree, pendant
//! products hanging off a single community member (and sharing its category
//! path), and a pool of products with no co-purchase links.

use crate::graph::{CoPurchaseGraph, NodeAttrs};
use crate::meta::{CategoryPath, Group, ProductRecord, ReviewSummary};
use crate::rng;
use rand::Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlantedConfig {
    pub communities: usize,
    pub community_size: usize,
    /// Link probability inside a community.
    pub p_in: f64,
    /// Link probability between core members of different communities.
    pub p_out: f64,
    /// Degree-1 products per community.
    pub pendants: usize,
    /// Products with no links at all.
    pub isolated: usize,
    pub seed: u64,
}

impl Default for PlantedConfig {
    fn default() -> Self {
        Self {
            communities: 6,
            community_size: 40,
            p_in: 0.15,
            p_out: 0.002,
            pendants: 12,
            isolated: 20,
            seed: 0,
        }
    }
}

const GROUPS: [&str; 4] = ["Book", "DVD", "Music", "Video"];

pub fn asin_of(i: usize) -> String {
    format!("S{i:09}")
}

fn path(levels: &[u32]) -> CategoryPath {
    CategoryPath {
        levels: levels.iter().map(|&id| (format!("Cat{id}"), id)).collect(),
    }
}

/// Records whose similar lists realize the planted structure. Node `i` of
/// the built graph is record `i`.
pub fn planted_records(cfg: &PlantedConfig) -> Vec<ProductRecord> {
    let mut r = rng::seeded(cfg.seed);
    let core = cfg.communities * cfg.community_size;
    let total = core + cfg.communities * cfg.pendants + cfg.isolated;
    let mut records: Vec<ProductRecord> = (0..total)
        .map(|i| ProductRecord {
            id: i as u64,
            asin: asin_of(i),
            title: Some(format!("Product {i}")),
            salesrank: Some(r.gen_range(1..1_000_000)),
            review_summary: Some(ReviewSummary {
                total: 0,
                downloaded: 0,
                avg_rating: 0.0,
            }),
            ..Default::default()
        })
        .collect();

    let community = |i: usize| i / cfg.community_size;
    for (i, rec) in records.iter_mut().enumerate().take(core) {
        let c = community(i);
        let group = if r.gen_bool(0.9) { GROUPS[c % 4] } else { GROUPS[r.gen_range(0..4)] };
        rec.group = Some(Group::parse(group));
        let c = c as u32;
        rec.category_paths = vec![path(&[1, 10 + c, 100 + c * 10 + (i % 5) as u32, 10_000 + i as u32])];
        if r.gen_bool(0.3) {
            rec.category_paths.push(path(&[2, 20 + c % 3, 200 + (i % 7) as u32]));
        }
    }
    for i in 0..core {
        for j in i + 1..core {
            let p = if community(i) == community(j) { cfg.p_in } else { cfg.p_out };
            if r.gen_bool(p) {
                let a = asin_of(j);
                records[i].similar_asins.push(a);
            }
        }
    }
    for c in 0..cfg.communities {
        for k in 0..cfg.pendants {
            let i = core + c * cfg.pendants + k;
            let anchor = c * cfg.community_size + r.gen_range(0..cfg.community_size);
            records[i].group = records[anchor].group.clone();
            records[i].category_paths = records[anchor].category_paths[..1].to_vec();
            records[i].similar_asins = vec![asin_of(anchor)];
        }
    }
    for rec in records.iter_mut().skip(core + cfg.communities * cfg.pendants) {
        let c = r.gen_range(0..cfg.communities) as u32;
        rec.group = Some(Group::parse(GROUPS[c as usize % 4]));
        rec.category_paths = vec![path(&[1, 10 + c, 100 + c * 10 + r.gen_range(0..5)])];
    }
    records
}

pub fn planted_graph(cfg: &PlantedConfig) -> CoPurchaseGraph {
    CoPurchaseGraph::build(&planted_records(cfg)).0
}

/// Erdos-Renyi `G(n, p)` with random groups and shallow category paths.
pub fn random_graph(n: usize, p: f64, seed: u64) -> CoPurchaseGraph {
    let mut r = rng::seeded(seed);
    let attrs: Vec<NodeAttrs> = (0..n)
        .map(|i| NodeAttrs {
            asin: asin_of(i),
            group: Group::parse(GROUPS[r.gen_range(0..4)]),
            categories: vec![vec![1, r.gen_range(10..13), r.gen_range(100..104)]],
        })
        .collect();
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if r.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    CoPurchaseGraph::with_attrs(attrs, edges)
}

/// Integer draws with `P(K >= k) = (k^-(a-1) - k_max^-(a-1)) / (k_min^-(a-1) - k_max^-(a-1))`
/// at integer `k`: continuous power-law samples on `[k_min, k_max]` by
/// inverse CDF, floored.
pub fn power_law_degrees(alpha: f64, k_min: usize, k_max: usize, n: usize, seed: u64) -> Vec<usize> {
    assert!(alpha > 1.0 && k_min >= 1 && k_max > k_min);
    let mut r = rng::seeded(seed);
    let e = 1.0 - alpha;
    let lo = (k_min as f64).powf(e);
    let hi = (k_max as f64).powf(e);
    (0..n)
        .map(|_| {
            let u: f64 = r.gen();
            let x = (lo + u * (hi - lo)).powf(1.0 / e);
            (x.floor() as usize).clamp(k_min, k_max)
        })
        .collect()
}
