//! Modularity with the community indicator replaced by a pairwise weight in
//! `[0, 1]` (the mean of a binary similarity vector):
//!
//! `Q = (1/2m) sum_ij [A_ij - k_i k_j / 2m] w(i, j)`
//!
//! The adjacency term is summed exactly over edges. The null-model term
//! `sum_ij k_i k_j w(i, j) / (2m)^2` is the expectation of `w` over pairs drawn
//! independently proportional to degree, so it is either summed over all
//! pairs (small graphs) or estimated by sampling such pairs.

use super::compensated_sum;
use crate::error::{Error, Result};
use crate::graph::{Adjacency, NodeId};
use crate::rng;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum NullModel {
    /// Sum over all ordered node pairs, `O(n^2)` weight evaluations.
    Exact,
    /// Degree-proportional pair sampling.
    Sampled { pairs: usize, seed: u64 },
    /// Exact when `n <= exact_limit`, sampled otherwise.
    Auto { exact_limit: usize, pairs: usize, seed: u64 },
}

impl Default for NullModel {
    fn default() -> Self {
        NullModel::Auto {
            exact_limit: 2000,
            pairs: 1_000_000,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimilarityModularity {
    pub modularity: f64,
    /// `(1/2m) sum_ij A_ij w(i, j)`.
    pub edge_term: f64,
    /// `sum_ij k_i k_j w(i, j) / (2m)^2`.
    pub null_term: f64,
    /// Standard error of `null_term` (0 in exact mode).
    pub std_error: f64,
    pub exact: bool,
    pub pairs_sampled: usize,
    /// Diagnostic: the substituted sum restricted to adjacent pairs,
    /// `(1/2m) sum_{A_ij = 1} [1 - k_i k_j / 2m] w(i, j)`.
    pub edge_only: f64,
}

pub fn modularity_by_similarity<A, W>(g: &A, weight: W, null: NullModel) -> Result<SimilarityModularity>
where
    A: Adjacency,
    W: Fn(NodeId, NodeId) -> f64 + Sync,
{
    let m = g.edge_count();
    if m == 0 {
        return Err(Error::EmptyGraph);
    }
    let n = g.node_count();
    let two_m = 2.0 * m as f64;

    let per_node: Vec<(f64, f64)> = (0..n)
        .into_par_iter()
        .map(|u| {
            let ku = g.degree(u) as f64;
            let ws: Vec<(f64, f64)> = g
                .neighbors(u)
                .map(|v| {
                    let w = weight(u, v);
                    (w, (1.0 - ku * g.degree(v) as f64 / two_m) * w)
                })
                .collect();
            (
                compensated_sum(ws.iter().map(|p| p.0)),
                compensated_sum(ws.iter().map(|p| p.1)),
            )
        })
        .collect();
    let edge_term = compensated_sum(per_node.iter().map(|p| p.0)) / two_m;
    let edge_only = compensated_sum(per_node.iter().map(|p| p.1)) / two_m;

    let exact = match null {
        NullModel::Exact => true,
        NullModel::Sampled { .. } => false,
        NullModel::Auto { exact_limit, .. } => n <= exact_limit,
    };
    let (null_term, std_error, pairs_sampled) = if exact {
        (exact_null(g, &weight, two_m), 0.0, 0)
    } else {
        let (pairs, seed) = match null {
            NullModel::Sampled { pairs, seed } | NullModel::Auto { pairs, seed, .. } => (pairs, seed),
            NullModel::Exact => unreachable!(),
        };
        if pairs < 2 {
            return Err(Error::invalid("sampled null model needs at least 2 pairs"));
        }
        let (mean, se) = sampled_null(g, &weight, pairs, seed);
        (mean, se, pairs)
    };

    Ok(SimilarityModularity {
        modularity: edge_term - null_term,
        edge_term,
        null_term,
        std_error,
        exact,
        pairs_sampled,
        edge_only,
    })
}

fn exact_null<A, W>(g: &A, weight: &W, two_m: f64) -> f64
where
    A: Adjacency,
    W: Fn(NodeId, NodeId) -> f64 + Sync,
{
    let n = g.node_count();
    let rows: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|i| {
            let ki = g.degree(i) as f64;
            if ki == 0.0 {
                return 0.0;
            }
            compensated_sum((0..n).filter(|&j| g.degree(j) > 0).map(|j| ki * g.degree(j) as f64 * weight(i, j)))
        })
        .collect();
    compensated_sum(rows) / (two_m * two_m)
}

const CHUNK: usize = 1 << 14;

fn sampled_null<A, W>(g: &A, weight: &W, pairs: usize, seed: u64) -> (f64, f64)
where
    A: Adjacency,
    W: Fn(NodeId, NodeId) -> f64 + Sync,
{
    // cumulative degree: an endpoint slot drawn uniformly from [0, 2m)
    // selects node v with probability k_v / 2m
    let mut cum = Vec::with_capacity(g.node_count());
    let mut acc = 0usize;
    for v in 0..g.node_count() {
        acc += g.degree(v);
        cum.push(acc);
    }
    let total = acc;
    let pick = |slot: usize| cum.partition_point(|&c| c <= slot);

    let chunks = pairs.div_ceil(CHUNK);
    let partial: Vec<(f64, f64)> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut r = rng::child(seed, c as u64);
            let len = CHUNK.min(pairs - c * CHUNK);
            let ws: Vec<f64> = (0..len)
                .map(|_| {
                    let i = pick(r.gen_range(0..total));
                    let j = pick(r.gen_range(0..total));
                    weight(i, j)
                })
                .collect();
            (compensated_sum(ws.iter().copied()), compensated_sum(ws.iter().map(|w| w * w)))
        })
        .collect();
    let s = compensated_sum(partial.iter().map(|p| p.0));
    let s2 = compensated_sum(partial.iter().map(|p| p.1));
    let n = pairs as f64;
    let mean = s / n;
    let var = ((s2 - n * mean * mean) / (n - 1.0)).max(0.0);
    (mean, (var / n).sqrt())
}
