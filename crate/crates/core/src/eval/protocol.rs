//! Top-k ranking protocol.
//!
//! A BFS subgraph of `n` nodes is sampled from the LCC. Every node of degree 1
//! in that subgraph becomes a query: its single edge is hidden, the query is
//! scored against every other subgraph node, and the rank of the hidden
//! neighbor is recorded. Ties rank the lower node index first.

use super::scorer::{PairScorer, QueryContext};
use crate::dataset::one_degree_nodes;
use crate::error::{Error, Result};
use crate::features::NodeFeatureTable;
use crate::graph::bfs_sample;
use crate::graph::{Adjacency, CoPurchaseGraph, NodeId};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::io::Write;

pub const DEFAULT_KS: [usize; 10] = [1, 5, 10, 20, 50, 100, 200, 300, 400, 500];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProtocolConfig {
    pub n: usize,
    pub ks: Vec<usize>,
    /// One BFS subgraph per seed; results are averaged.
    pub seeds: Vec<u64>,
}

impl Default for ProtocolConfig {
    fn default() -> Self {
        Self {
            n: 1000,
            ks: DEFAULT_KS.to_vec(),
            seeds: (0..5).collect(),
        }
    }
}

/// Ranks from a single subgraph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubgraphRun {
    pub seed: u64,
    pub nodes: usize,
    pub checksum: String,
    pub queries: Vec<NodeId>,
    /// 1-based rank of each query's hidden neighbor among `nodes - 1` candidates.
    pub ranks: Vec<usize>,
}

impl SubgraphRun {
    pub fn topk(&self, k: usize) -> f64 {
        self.ranks.iter().filter(|&&r| r <= k).count() as f64 / self.ranks.len() as f64
    }

    pub fn mrr(&self) -> f64 {
        self.ranks.iter().map(|&r| 1.0 / r as f64).sum::<f64>() / self.ranks.len() as f64
    }
}

/// 1-based rank of `target` when candidates are sorted by descending score,
/// ties broken by ascending node index.
pub fn rank_of(candidates: &[NodeId], scores: &[f64], target: NodeId) -> usize {
    let pos = candidates.iter().position(|&c| c == target).expect("target among candidates");
    let st = scores[pos];
    1 + candidates
        .iter()
        .zip(scores)
        .filter(|&(&c, &s)| s > st || (s == st && c < target))
        .count()
}

/// Full ranking of candidates under the same ordering as [`rank_of`].
pub fn ranking(candidates: &[NodeId], scores: &[f64]) -> Vec<NodeId> {
    let mut idx: Vec<usize> = (0..candidates.len()).collect();
    idx.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(candidates[a].cmp(&candidates[b])));
    idx.into_iter().map(|i| candidates[i]).collect()
}

/// Runs every degree-1 query of an already sampled subgraph.
pub fn rank_queries<S: PairScorer + ?Sized>(sub: &CoPurchaseGraph, scorer: &S, seed: u64) -> Result<SubgraphRun> {
    let queries = one_degree_nodes(sub);
    if queries.is_empty() {
        return Err(Error::NoQueries);
    }
    let checksum = sub.checksum();
    let table = NodeFeatureTable::compute(sub, sub.node_attrs());
    let ranks: Vec<usize> = queries
        .par_iter()
        .enumerate()
        .map(|(qi, &u)| {
            let t = sub.neighbor_slice(u)[0];
            let view = sub.masked(u, t);
            let rows = table.masked(&view, sub.node_attrs(), u, t);
            let ctx = QueryContext {
                graph: sub,
                view: &view,
                rows: &rows,
                query: u,
                query_index: qi as u64,
                seed,
            };
            let candidates: Vec<NodeId> = (0..sub.node_count()).filter(|&v| v != u).collect();
            let scores = scorer.score_candidates(&ctx, &candidates)?;
            if scores.len() != candidates.len() {
                return Err(Error::Dimension {
                    expected: candidates.len(),
                    got: scores.len(),
                });
            }
            Ok(rank_of(&candidates, &scores, t))
        })
        .collect::<Result<_>>()?;
    if sub.checksum() != checksum {
        return Err(Error::Invariant("subgraph changed during evaluation".into()));
    }
    Ok(SubgraphRun {
        seed,
        nodes: sub.node_count(),
        checksum,
        queries,
        ranks,
    })
}

/// Samples one BFS subgraph of `n` nodes and ranks its queries.
pub fn run_subgraph<S: PairScorer + ?Sized>(g_lcc: &CoPurchaseGraph, scorer: &S, n: usize, seed: u64) -> Result<SubgraphRun> {
    let nodes = bfs_sample(g_lcc, n, seed)?;
    let sub = g_lcc.induced_subgraph(&nodes);
    rank_queries(&sub, scorer, seed).map_err(|e| match e {
        Error::NoQueries => Error::invalid(format!(
            "BFS sample (n = {n}, seed = {seed}) has no degree-1 nodes; try a larger n or another seed"
        )),
        e => e,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopkPoint {
    pub k: usize,
    pub accuracy: f64,
    /// Sample standard deviation across subgraph seeds.
    pub std_dev: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub model: String,
    pub variant: Option<String>,
    pub n: usize,
    pub seeds: Vec<u64>,
    pub topk_curve: Vec<TopkPoint>,
    pub top5: f64,
    pub mrr: f64,
    pub queries: usize,
    pub per_seed: Vec<SeedSummary>,
    pub classification: Option<super::ClassificationReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeedSummary {
    pub seed: u64,
    pub queries: usize,
    pub topk: Vec<f64>,
    pub mrr: f64,
}

impl EvalReport {
    pub fn accuracy_at(&self, k: usize) -> Option<f64> {
        self.topk_curve.iter().find(|p| p.k == k).map(|p| p.accuracy)
    }

    pub fn is_monotone(&self) -> bool {
        self.topk_curve.windows(2).all(|w| w[0].k > w[1].k || w[0].accuracy <= w[1].accuracy)
    }

    pub fn write_curve_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["k", "accuracy", "std_dev"])?;
        for p in &self.topk_curve {
            w.write_record([p.k.to_string(), format!("{}", p.accuracy), format!("{}", p.std_dev)])?;
        }
        w.flush()?;
        Ok(())
    }
}

fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = if xs.len() > 1 {
        xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    (mean, var.sqrt())
}

/// Runs the protocol once per seed and averages the per-seed top-k curves.
pub fn evaluate_protocol<S: PairScorer + ?Sized>(g_lcc: &CoPurchaseGraph, scorer: &S, cfg: &ProtocolConfig) -> Result<EvalReport> {
    if cfg.seeds.is_empty() {
        return Err(Error::invalid("at least one subgraph seed is required"));
    }
    let mut ks = cfg.ks.clone();
    ks.sort_unstable();
    ks.dedup();
    let runs: Vec<SubgraphRun> = cfg
        .seeds
        .iter()
        .map(|&s| run_subgraph(g_lcc, scorer, cfg.n, s))
        .collect::<Result<_>>()?;
    let per_seed: Vec<SeedSummary> = runs
        .iter()
        .map(|r| SeedSummary {
            seed: r.seed,
            queries: r.ranks.len(),
            topk: ks.iter().map(|&k| r.topk(k)).collect(),
            mrr: r.mrr(),
        })
        .collect();
    let topk_curve: Vec<TopkPoint> = ks
        .iter()
        .enumerate()
        .map(|(i, &k)| {
            let xs: Vec<f64> = per_seed.iter().map(|s| s.topk[i]).collect();
            let (accuracy, std_dev) = mean_std(&xs);
            TopkPoint { k, accuracy, std_dev }
        })
        .collect();
    let top5 = mean_std(&runs.iter().map(|r| r.topk(5)).collect::<Vec<_>>()).0;
    let mrr = mean_std(&per_seed.iter().map(|s| s.mrr).collect::<Vec<_>>()).0;
    let report = EvalReport {
        model: scorer.name().to_string(),
        variant: None,
        n: cfg.n,
        seeds: cfg.seeds.clone(),
        topk_curve,
        top5,
        mrr,
        queries: per_seed.iter().map(|s| s.queries).sum(),
        per_seed,
        classification: None,
    };
    if !report.is_monotone() {
        return Err(Error::Invariant("top-k curve is not monotone".into()));
    }
    Ok(report)
}
