use super::model::{forward_pair, SageHyper, SageModel, SageParams};
use crate::dataset::PairSample;
use crate::error::{Error, Result};
use crate::features::{similarity_mask, NodeFeatureTable, NodeRows};
use crate::graph::{Adjacency, CoPurchaseGraph};
use crate::rng::{self, Rng};
use rand::seq::SliceRandom;
use rayon::prelude::*;

/// Binary category-similarity vector of a pair as floats.
pub fn similarity_vector(g: &CoPurchaseGraph, u: usize, v: usize, d_cat: usize) -> Vec<f64> {
    let mask = similarity_mask(&g.attrs(u).categories, &g.attrs(v).categories, d_cat);
    (0..d_cat).map(|i| ((mask >> i) & 1) as f64).collect()
}

/// Numerically stable binary cross-entropy from a logit.
pub fn bce_with_logit(z: f64, y: f64) -> f64 {
    z.max(0.0) - z * y + (-z.abs()).exp().ln_1p()
}

#[allow(clippy::too_many_arguments)]
fn pass<A: Adjacency, R: NodeRows + ?Sized>(
    view: &A,
    rows: &R,
    s: &PairSample,
    sim: &[f64],
    params: &SageParams,
    hyper: &SageHyper,
    rng: &mut Rng,
    grad: Option<&mut [f64]>,
) -> f64 {
    let fw = forward_pair(view, rows, s.source, s.target, sim, params, hyper, rng);
    let y = f64::from(s.label);
    let loss = bce_with_logit(fw.logit, y);
    let Some(grad) = grad else { return loss };

    let h = params.hidden;
    let f = params.features;
    let hf = h * f;
    let b_emb = 2 * hf;
    let head = b_emb + h;
    let b_head = head + 2 * h + params.d_cat;
    let w = params.w_head();
    let dz = fw.prob - y;

    for i in 0..h {
        grad[head + i] += dz * fw.u.h[i];
        grad[head + h + i] += dz * fw.v.h[i];
    }
    for (k, sk) in sim.iter().enumerate() {
        grad[head + 2 * h + k] += dz * sk;
    }
    grad[b_head] += dz;

    for (cache, offset) in [(&fw.u, 0), (&fw.v, h)] {
        for i in 0..h {
            if cache.pre[i] <= 0.0 {
                continue;
            }
            let d = dz * w[offset + i];
            for k in 0..f {
                grad[i * f + k] += d * cache.x[k];
                grad[hf + i * f + k] += d * cache.agg[k];
            }
            grad[b_emb + i] += d;
        }
    }
    loss
}

/// Loss (and optionally its gradient) of a single sample. Positive pairs are
/// scored with their own edge hidden, so neither the neighbor sample nor the
/// endpoint features can see the link being predicted.
pub fn sample_loss(
    g: &CoPurchaseGraph,
    table: &NodeFeatureTable,
    s: &PairSample,
    params: &SageParams,
    hyper: &SageHyper,
    rng: &mut Rng,
    grad: Option<&mut [f64]>,
) -> f64 {
    let sim = similarity_vector(g, s.source, s.target, params.d_cat);
    if s.label == 1 {
        let view = g.masked(s.source, s.target);
        let rows = table.masked(&view, g.node_attrs(), s.source, s.target);
        pass(&view, &rows, s, &sim, params, hyper, rng, grad)
    } else {
        pass(g, table, s, &sim, params, hyper, rng, grad)
    }
}

/// Mean loss and mean gradient over `samples`. Sample `i` draws its
/// neighbor subsets from stream `i` of `stream_seed`.
pub fn loss_and_grad(
    g: &CoPurchaseGraph,
    table: &NodeFeatureTable,
    samples: &[PairSample],
    params: &SageParams,
    hyper: &SageHyper,
    stream_seed: u64,
) -> (f64, Vec<f64>) {
    let n = samples.len().max(1) as f64;
    let parts: Vec<(f64, Vec<f64>)> = samples
        .par_iter()
        .enumerate()
        .map(|(i, s)| {
            let mut r = rng::child(stream_seed, i as u64);
            let mut grad = vec![0.0; params.data.len()];
            let l = sample_loss(g, table, s, params, hyper, &mut r, Some(&mut grad));
            (l, grad)
        })
        .collect();
    let mut grad = vec![0.0; params.data.len()];
    let mut loss = 0.0;
    for (l, gr) in &parts {
        loss += l;
        for (a, b) in grad.iter_mut().zip(gr) {
            *a += b;
        }
    }
    grad.iter_mut().for_each(|v| *v /= n);
    (loss / n, grad)
}

pub fn mean_loss(
    g: &CoPurchaseGraph,
    table: &NodeFeatureTable,
    samples: &[PairSample],
    params: &SageParams,
    hyper: &SageHyper,
    stream_seed: u64,
) -> f64 {
    let total: f64 = samples
        .par_iter()
        .enumerate()
        .map(|(i, s)| {
            let mut r = rng::child(stream_seed, i as u64);
            sample_loss(g, table, s, params, hyper, &mut r, None)
        })
        .collect::<Vec<_>>()
        .iter()
        .sum();
    total / samples.len().max(1) as f64
}

/// Minibatch SGD with momentum on the cross-entropy loss. Returns the model
/// with its per-epoch mean training loss.
pub fn train_sage(g: &CoPurchaseGraph, samples: &[PairSample], hyper: &SageHyper) -> Result<SageModel> {
    hyper.validate()?;
    if samples.is_empty() {
        return Err(Error::invalid("no training samples"));
    }
    if samples.iter().all(|s| s.label == samples[0].label) {
        return Err(Error::SingleClass);
    }
    let table = NodeFeatureTable::compute(g, g.node_attrs());
    let mut r = rng::child(hyper.seed, u64::MAX);
    let mut params = SageParams::init(hyper.hidden, hyper.d_cat, &mut r);
    let mut velocity = vec![0.0; params.data.len()];
    let mut order: Vec<PairSample> = samples.to_vec();
    let mut trace = Vec::with_capacity(hyper.epochs);

    for epoch in 0..hyper.epochs {
        order.shuffle(&mut r);
        let mut epoch_loss = 0.0;
        for (b, batch) in order.chunks(hyper.batch_size).enumerate() {
            let stream = rng::derive(rng::derive(hyper.seed, epoch as u64), b as u64);
            let (loss, grad) = loss_and_grad(g, &table, batch, &params, hyper, stream);
            if !loss.is_finite() || grad.iter().any(|v| !v.is_finite()) {
                return Err(Error::Diverged { epoch, batch: b });
            }
            for ((p, v), gr) in params.data.iter_mut().zip(velocity.iter_mut()).zip(&grad) {
                *v = hyper.momentum * *v - hyper.learning_rate * gr;
                *p += *v;
            }
            if !params.is_finite() {
                return Err(Error::Diverged { epoch, batch: b });
            }
            epoch_loss += loss * batch.len() as f64;
        }
        let mean = epoch_loss / order.len() as f64;
        log::info!("sage epoch {} loss {mean:.5}", epoch + 1);
        trace.push(mean);
    }
    Ok(SageModel {
        format_version: 1,
        hyper: *hyper,
        params,
        loss_trace: trace,
    })
}

/// Link probabilities for labeled pairs, with positive edges hidden as in
/// training. Neighbor draws use stream `i` of `seed` for sample `i`.
pub fn predict_samples(g: &CoPurchaseGraph, samples: &[PairSample], model: &SageModel, seed: u64) -> Vec<f64> {
    let table = NodeFeatureTable::compute(g, g.node_attrs());
    let (params, hyper) = (&model.params, &model.hyper);
    samples
        .par_iter()
        .enumerate()
        .map(|(i, s)| {
            let mut r = rng::child(seed, i as u64);
            let sim = similarity_vector(g, s.source, s.target, params.d_cat);
            let fw = if s.label == 1 {
                let view = g.masked(s.source, s.target);
                let rows = table.masked(&view, g.node_attrs(), s.source, s.target);
                forward_pair(&view, &rows, s.source, s.target, &sim, params, hyper, &mut r)
            } else {
                forward_pair(g, &table, s.source, s.target, &sim, params, hyper, &mut r)
            };
            fw.prob
        })
        .collect()
}

/// Outcome of comparing analytic and central-difference gradients.
#[derive(Debug, Clone)]
pub struct GradCheck {
    pub analytic: Vec<f64>,
    pub numeric: Vec<f64>,
    pub max_relative_error: f64,
}

/// `max_i |a_i - b_i| / max(|a_i|, |b_i|, floor)`.
pub fn max_relative_error(a: &[f64], b: &[f64], floor: f64) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs() / x.abs().max(y.abs()).max(floor))
        .fold(0.0, f64::max)
}

pub fn numeric_gradient(
    g: &CoPurchaseGraph,
    table: &NodeFeatureTable,
    samples: &[PairSample],
    params: &SageParams,
    hyper: &SageHyper,
    stream_seed: u64,
    step: f64,
) -> Vec<f64> {
    let mut p = params.clone();
    (0..params.data.len())
        .map(|i| {
            let orig = p.data[i];
            p.data[i] = orig + step;
            let up = mean_loss(g, table, samples, &p, hyper, stream_seed);
            p.data[i] = orig - step;
            let down = mean_loss(g, table, samples, &p, hyper, stream_seed);
            p.data[i] = orig;
            (up - down) / (2.0 * step)
        })
        .collect()
}

/// Compares the backprop gradient to central differences with step `step`.
/// Both use identical neighbor draws, so with `sample_size` at least the
/// maximum degree the comparison is exact up to finite-difference error.
pub fn check_gradients(
    g: &CoPurchaseGraph,
    table: &NodeFeatureTable,
    samples: &[PairSample],
    params: &SageParams,
    hyper: &SageHyper,
    step: f64,
) -> GradCheck {
    let (_, analytic) = loss_and_grad(g, table, samples, params, hyper, hyper.seed);
    let numeric = numeric_gradient(g, table, samples, params, hyper, hyper.seed, step);
    let max_relative_error = max_relative_error(&analytic, &numeric, 1e-5);
    GradCheck {
        analytic,
        numeric,
        max_relative_error,
    }
}
