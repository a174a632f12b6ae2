use crate::error::Result;
use crate::features::{MaskedRows, PairLayout};
use crate::forest::Forest;
use crate::graph::{CoPurchaseGraph, MaskedGraph, NodeId};
use crate::rng;
use crate::sage::{score_pair, similarity_vector, SageModel};
use rand::Rng;

/// Everything a scorer may look at for one query: the subgraph, the same
/// subgraph with the query's edge hidden, and node features computed on the
/// hidden view.
pub struct QueryContext<'a> {
    pub graph: &'a CoPurchaseGraph,
    pub view: &'a MaskedGraph<'a>,
    pub rows: &'a MaskedRows<'a>,
    pub query: NodeId,
    pub query_index: u64,
    /// Seed of the subgraph being evaluated.
    pub seed: u64,
}

pub trait PairScorer: Sync {
    fn name(&self) -> &str;

    /// Probability of a link from `ctx.query` to each candidate.
    fn score_candidates(&self, ctx: &QueryContext<'_>, candidates: &[NodeId]) -> Result<Vec<f64>>;
}

/// Uniform scores on `[0, 1)`, reproducible per (scorer seed, subgraph seed, query).
#[derive(Debug, Clone, Copy)]
pub struct RandomScorer {
    pub seed: u64,
}

impl RandomScorer {
    pub fn new(seed: u64) -> Self {
        Self { seed }
    }
}

impl PairScorer for RandomScorer {
    fn name(&self) -> &str {
        "random"
    }

    fn score_candidates(&self, ctx: &QueryContext<'_>, candidates: &[NodeId]) -> Result<Vec<f64>> {
        let mut r = rng::child(rng::derive(self.seed, ctx.seed), ctx.query_index);
        Ok(candidates.iter().map(|_| r.gen::<f64>()).collect())
    }
}

pub struct ForestScorer<'a> {
    pub forest: &'a Forest,
    pub layout: PairLayout,
}

impl PairScorer for ForestScorer<'_> {
    fn name(&self) -> &str {
        "rf"
    }

    fn score_candidates(&self, ctx: &QueryContext<'_>, candidates: &[NodeId]) -> Result<Vec<f64>> {
        let mut x = Vec::with_capacity(self.layout.len());
        candidates
            .iter()
            .map(|&v| {
                self.layout.assemble_into(ctx.rows, ctx.graph.node_attrs(), ctx.query, v, &mut x);
                self.forest.predict_proba(&x)
            })
            .collect()
    }
}

pub struct SageScorer<'a> {
    pub model: &'a SageModel,
}

impl PairScorer for SageScorer<'_> {
    fn name(&self) -> &str {
        "sage"
    }

    fn score_candidates(&self, ctx: &QueryContext<'_>, candidates: &[NodeId]) -> Result<Vec<f64>> {
        let m = self.model;
        let mut r = rng::child(rng::derive(m.hyper.seed, ctx.seed), ctx.query_index);
        Ok(candidates
            .iter()
            .map(|&v| {
                let sim = similarity_vector(ctx.graph, ctx.query, v, m.params.d_cat);
                score_pair(ctx.view, ctx.rows, ctx.query, v, &sim, &m.params, &m.hyper, &mut r)
            })
            .collect())
    }
}

/// Adapter for scoring with a closure `(ctx, candidate) -> score`.
pub struct FnScorer<F> {
    name: String,
    f: F,
}

impl<F> FnScorer<F>
where
    F: Fn(&QueryContext<'_>, NodeId) -> f64 + Sync,
{
    pub fn new(name: impl Into<String>, f: F) -> Self {
        Self { name: name.into(), f }
    }
}

impl<F> PairScorer for FnScorer<F>
where
    F: Fn(&QueryContext<'_>, NodeId) -> f64 + Sync,
{
    fn name(&self) -> &str {
        &self.name
    }

    fn score_candidates(&self, ctx: &QueryContext<'_>, candidates: &[NodeId]) -> Result<Vec<f64>> {
        Ok(candidates.iter().map(|&v| (self.f)(ctx, v)).collect())
    }
}
