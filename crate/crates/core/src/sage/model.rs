use crate::error::{Error, Result};
use crate::features::{NodeRows, NODE_DIM};
use crate::graph::{Adjacency, NodeId};
use crate::rng::Rng;
use rand::Rng as _;
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SageHyper {
    pub hidden: usize,
    /// Neighbors sampled per embedding.
    pub sample_size: usize,
    pub learning_rate: f64,
    pub momentum: f64,
    pub batch_size: usize,
    pub epochs: usize,
    pub seed: u64,
    pub d_cat: usize,
    /// Let a neighborless source borrow the target's sampled neighborhood.
    pub proxy_aggregation: bool,
}

impl Default for SageHyper {
    fn default() -> Self {
        Self {
            hidden: 16,
            sample_size: 10,
            learning_rate: 0.05,
            momentum: 0.9,
            batch_size: 128,
            epochs: 20,
            seed: 0,
            d_cat: crate::features::DEFAULT_D_CAT,
            proxy_aggregation: false,
        }
    }
}

impl SageHyper {
    pub fn validate(&self) -> Result<()> {
        if self.sample_size == 0 {
            return Err(Error::invalid("neighbor sample size must be at least 1"));
        }
        if !self.learning_rate.is_finite() || self.learning_rate <= 0.0 {
            return Err(Error::invalid("learning rate must be positive"));
        }
        if self.hidden == 0 || self.batch_size == 0 {
            return Err(Error::invalid("hidden width and batch size must be positive"));
        }
        if self.d_cat > crate::features::MAX_DEPTH {
            return Err(Error::invalid("d_cat too large"));
        }
        Ok(())
    }
}

/// Model parameters, stored flat as
/// `[W_self (h x f) | W_neigh (h x f) | b_emb (h) | w_head (2h + d_cat) | b_head]`
/// with row-major matrices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SageParams {
    pub hidden: usize,
    pub features: usize,
    pub d_cat: usize,
    pub data: Vec<f64>,
}

impl SageParams {
    pub fn zeros(hidden: usize, d_cat: usize) -> Self {
        let features = NODE_DIM;
        let len = 2 * hidden * features + hidden + 2 * hidden + d_cat + 1;
        Self {
            hidden,
            features,
            d_cat,
            data: vec![0.0; len],
        }
    }

    /// Uniform in `+-1/sqrt(fan_in)` for weights, zero biases.
    pub fn init(hidden: usize, d_cat: usize, rng: &mut Rng) -> Self {
        let mut p = Self::zeros(hidden, d_cat);
        let emb_bound = 1.0 / (p.features as f64).sqrt();
        let head_bound = 1.0 / ((2 * hidden + d_cat) as f64).sqrt();
        for w in p.w_self_mut().iter_mut() {
            *w = rng.gen_range(-emb_bound..emb_bound);
        }
        for w in p.w_neigh_mut().iter_mut() {
            *w = rng.gen_range(-emb_bound..emb_bound);
        }
        for w in p.w_head_mut().iter_mut() {
            *w = rng.gen_range(-head_bound..head_bound);
        }
        p
    }

    fn hf(&self) -> usize {
        self.hidden * self.features
    }

    fn ranges(&self) -> [std::ops::Range<usize>; 5] {
        let hf = self.hf();
        let h = self.hidden;
        let a = 0..hf;
        let b = hf..2 * hf;
        let c = 2 * hf..2 * hf + h;
        let d = c.end..c.end + 2 * h + self.d_cat;
        let e = d.end..d.end + 1;
        [a, b, c, d, e]
    }

    pub fn w_self(&self) -> &[f64] {
        &self.data[self.ranges()[0].clone()]
    }
    pub fn w_neigh(&self) -> &[f64] {
        &self.data[self.ranges()[1].clone()]
    }
    pub fn b_emb(&self) -> &[f64] {
        &self.data[self.ranges()[2].clone()]
    }
    pub fn w_head(&self) -> &[f64] {
        &self.data[self.ranges()[3].clone()]
    }
    pub fn b_head(&self) -> f64 {
        self.data[self.ranges()[4].start]
    }

    pub fn w_self_mut(&mut self) -> &mut [f64] {
        let r = self.ranges()[0].clone();
        &mut self.data[r]
    }
    pub fn w_neigh_mut(&mut self) -> &mut [f64] {
        let r = self.ranges()[1].clone();
        &mut self.data[r]
    }
    pub fn b_emb_mut(&mut self) -> &mut [f64] {
        let r = self.ranges()[2].clone();
        &mut self.data[r]
    }
    pub fn w_head_mut(&mut self) -> &mut [f64] {
        let r = self.ranges()[3].clone();
        &mut self.data[r]
    }
    pub fn set_b_head(&mut self, v: f64) {
        let i = self.ranges()[4].start;
        self.data[i] = v;
    }

    /// Index range of `W_neigh` in the flat layout.
    pub fn w_neigh_range(&self) -> std::ops::Range<usize> {
        self.ranges()[1].clone()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }
}

/// Mean feature row over a neighbor sample. Without replacement when the
/// degree exceeds `sample_size`, otherwise every neighbor; indices are
/// visited in ascending order.
pub fn aggregate_neighbors<A: Adjacency, R: NodeRows + ?Sized>(
    g: &A,
    rows: &R,
    v: NodeId,
    sample_size: usize,
    rng: &mut Rng,
) -> [f64; NODE_DIM] {
    let mut acc = [0.0; NODE_DIM];
    let deg = g.degree(v);
    if deg == 0 {
        return acc;
    }
    let mut add = |n: NodeId| {
        let r = rows.row(n);
        for k in 0..NODE_DIM {
            acc[k] += r[k];
        }
    };
    let used = if deg > sample_size {
        let mut picks = rand::seq::index::sample(rng, deg, sample_size).into_vec();
        picks.sort_unstable();
        let neigh: Vec<NodeId> = g.neighbors(v).collect();
        for i in picks {
            add(neigh[i]);
        }
        sample_size
    } else {
        g.neighbors(v).for_each(&mut add);
        deg
    };
    for a in acc.iter_mut() {
        *a /= used as f64;
    }
    acc
}

/// Intermediate values of one endpoint's embedding.
#[derive(Debug, Clone)]
pub struct EmbedCache {
    pub x: [f64; NODE_DIM],
    pub agg: [f64; NODE_DIM],
    pub pre: Vec<f64>,
    pub h: Vec<f64>,
}

/// `relu(W_self x + W_neigh agg + b_emb)`.
pub fn embed_from(params: &SageParams, x: [f64; NODE_DIM], agg: [f64; NODE_DIM]) -> EmbedCache {
    let f = params.features;
    let (ws, wn, b) = (params.w_self(), params.w_neigh(), params.b_emb());
    let pre: Vec<f64> = (0..params.hidden)
        .map(|i| {
            let mut s = b[i];
            for k in 0..f {
                s += ws[i * f + k] * x[k] + wn[i * f + k] * agg[k];
            }
            s
        })
        .collect();
    let h = pre.iter().map(|&p| p.max(0.0)).collect();
    EmbedCache { x, agg, pre, h }
}

pub fn embed_node<A: Adjacency, R: NodeRows + ?Sized>(
    g: &A,
    rows: &R,
    v: NodeId,
    params: &SageParams,
    sample_size: usize,
    rng: &mut Rng,
) -> Vec<f64> {
    let agg = aggregate_neighbors(g, rows, v, sample_size, rng);
    embed_from(params, rows.row(v), agg).h
}

pub fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// Head logit `w_head . [h_u, h_v, sim] + b_head`.
pub fn head_logit(params: &SageParams, hu: &[f64], hv: &[f64], sim: &[f64]) -> f64 {
    let w = params.w_head();
    let h = params.hidden;
    let mut z = params.b_head();
    for i in 0..h {
        z += w[i] * hu[i] + w[h + i] * hv[i];
    }
    for (k, s) in sim.iter().enumerate() {
        z += w[2 * h + k] * s;
    }
    z
}

/// Forward pass for one ordered pair, keeping the caches for backprop.
pub struct PairForward {
    pub u: EmbedCache,
    pub v: EmbedCache,
    pub logit: f64,
    pub prob: f64,
}

#[allow(clippy::too_many_arguments)]
pub fn forward_pair<A: Adjacency, R: NodeRows + ?Sized>(
    g: &A,
    rows: &R,
    u: NodeId,
    v: NodeId,
    sim: &[f64],
    params: &SageParams,
    hyper: &SageHyper,
    rng: &mut Rng,
) -> PairForward {
    let agg_v = aggregate_neighbors(g, rows, v, hyper.sample_size, rng);
    let agg_u = if hyper.proxy_aggregation && g.degree(u) == 0 {
        agg_v
    } else {
        aggregate_neighbors(g, rows, u, hyper.sample_size, rng)
    };
    let eu = embed_from(params, rows.row(u), agg_u);
    let ev = embed_from(params, rows.row(v), agg_v);
    let logit = head_logit(params, &eu.h, &ev.h, sim);
    PairForward {
        u: eu,
        v: ev,
        logit,
        prob: sigmoid(logit),
    }
}

/// Probability of a link from `u` to `v` (ordered: the head is not symmetric).
#[allow(clippy::too_many_arguments)]
pub fn score_pair<A: Adjacency, R: NodeRows + ?Sized>(
    g: &A,
    rows: &R,
    u: NodeId,
    v: NodeId,
    sim: &[f64],
    params: &SageParams,
    hyper: &SageHyper,
    rng: &mut Rng,
) -> f64 {
    forward_pair(g, rows, u, v, sim, params, hyper, rng).prob
}

/// Trained model: parameters plus the settings needed to reuse them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SageModel {
    pub format_version: u32,
    pub hyper: SageHyper,
    pub params: SageParams,
    pub loss_trace: Vec<f64>,
}

impl SageModel {
    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let f = std::io::BufWriter::new(std::fs::File::create(path)?);
        serde_json::to_writer(f, self)?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let f = std::io::BufReader::new(std::fs::File::open(path)?);
        let m: SageModel = serde_json::from_reader(f)?;
        let expect = SageParams::zeros(m.params.hidden, m.params.d_cat).data.len();
        if m.params.data.len() != expect || m.params.features != NODE_DIM {
            return Err(Error::Dimension {
                expected: expect,
                got: m.params.data.len(),
            });
        }
        if !m.params.is_finite() {
            return Err(Error::Invariant("non-finite parameters in saved model".into()));
        }
        Ok(m)
    }

    pub fn write_loss_csv<W: std::io::Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["epoch", "loss"])?;
        for (e, l) in self.loss_trace.iter().enumerate() {
            w.write_record([(e + 1).to_string(), format!("{l}")])?;
        }
        w.flush()?;
        Ok(())
    }
}
