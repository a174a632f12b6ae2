//! Two-phase Louvain modularity optimization (resolution 1).
//!
//! Phase one moves single nodes to the neighboring community with the
//! largest modularity gain, visiting nodes in a seeded random order; phase
//! two collapses communities into weighted meta-nodes. Levels repeat until a
//! local-moving phase makes no move.

use super::modularity::{modularity, Partition};
use crate::error::{Error, Result};
use crate::graph::Adjacency;
use crate::rng;
use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

/// Smallest modularity gain accepted for a move.
const MIN_GAIN: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Louvain {
    pub seed: u64,
    pub max_levels: usize,
    pub max_sweeps: usize,
}

impl Default for Louvain {
    fn default() -> Self {
        Self {
            seed: 0,
            max_levels: 32,
            max_sweeps: 1000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelTrace {
    pub nodes: usize,
    pub moves: usize,
    /// Smallest modularity gain among this level's accepted moves.
    pub min_move_gain: f64,
    /// Modularity of the flattened partition after this level.
    pub modularity: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LouvainResult {
    pub partition: Partition,
    pub modularity: f64,
    pub levels: Vec<LevelTrace>,
}

pub fn louvain<A: Adjacency>(g: &A, seed: u64) -> Result<LouvainResult> {
    Louvain {
        seed,
        ..Default::default()
    }
    .run(g)
}

/// Weighted graph for one Louvain level. Self-loop weight `w` adds `2w` to
/// a node's strength.
struct Level {
    offsets: Vec<usize>,
    targets: Vec<usize>,
    weights: Vec<f64>,
    self_loops: Vec<f64>,
    strength: Vec<f64>,
}

impl Level {
    fn from_graph<A: Adjacency>(g: &A) -> Self {
        let n = g.node_count();
        let mut offsets = Vec::with_capacity(n + 1);
        let mut targets = Vec::new();
        offsets.push(0);
        for v in 0..n {
            targets.extend(g.neighbors(v));
            offsets.push(targets.len());
        }
        let weights = vec![1.0; targets.len()];
        let strength = (0..n).map(|v| (offsets[v + 1] - offsets[v]) as f64).collect();
        Self {
            offsets,
            targets,
            weights,
            self_loops: vec![0.0; n],
            strength,
        }
    }

    fn len(&self) -> usize {
        self.strength.len()
    }

    /// Collapses communities (dense ids `0..c`) into meta-nodes.
    fn aggregate(&self, community: &[usize], c: usize) -> Self {
        let mut self_loops = vec![0.0; c];
        let mut pairs: Vec<(usize, usize, f64)> = Vec::new();
        for u in 0..self.len() {
            let cu = community[u];
            self_loops[cu] += self.self_loops[u];
            for k in self.offsets[u]..self.offsets[u + 1] {
                let v = self.targets[k];
                let cv = community[v];
                if cu == cv {
                    // each undirected edge is visited from both ends
                    self_loops[cu] += self.weights[k] / 2.0;
                } else {
                    pairs.push((cu, cv, self.weights[k]));
                }
            }
        }
        pairs.sort_by_key(|a| (a.0, a.1));
        let mut offsets = vec![0usize; c + 1];
        let mut targets = Vec::new();
        let mut weights = Vec::new();
        let mut i = 0;
        for cu in 0..c {
            while i < pairs.len() && pairs[i].0 == cu {
                let cv = pairs[i].1;
                let mut w = 0.0;
                while i < pairs.len() && pairs[i].0 == cu && pairs[i].1 == cv {
                    w += pairs[i].2;
                    i += 1;
                }
                targets.push(cv);
                weights.push(w);
            }
            offsets[cu + 1] = targets.len();
        }
        let strength = (0..c)
            .map(|v| 2.0 * self_loops[v] + weights[offsets[v]..offsets[v + 1]].iter().sum::<f64>())
            .collect();
        Self {
            offsets,
            targets,
            weights,
            self_loops,
            strength,
        }
    }
}

struct MoveStats {
    moves: usize,
    min_gain: f64,
}

impl Louvain {
    pub fn run<A: Adjacency>(&self, g: &A) -> Result<LouvainResult> {
        if g.edge_count() == 0 {
            return Err(Error::EmptyGraph);
        }
        let two_m = 2.0 * g.edge_count() as f64;
        let mut level = Level::from_graph(g);
        // community of each original node, in terms of the current level's nodes
        let mut membership: Vec<usize> = (0..g.node_count()).collect();
        let mut rng = rng::seeded(self.seed);
        let mut traces = Vec::new();
        let mut best_q = modularity(g, &Partition::singletons(g.node_count()))?;

        for _ in 0..self.max_levels {
            let mut order: Vec<usize> = (0..level.len()).collect();
            order.shuffle(&mut rng);
            let (community, stats) = self.local_moving(&level, &order, two_m);
            if stats.moves == 0 {
                break;
            }
            let (dense, c) = densify(&community);
            for m in membership.iter_mut() {
                *m = dense[*m];
            }
            let q = modularity(g, &Partition::from_labels(membership.iter().copied()))?;
            traces.push(LevelTrace {
                nodes: level.len(),
                moves: stats.moves,
                min_move_gain: stats.min_gain,
                modularity: q,
            });
            if q < best_q - 1e-9 {
                return Err(Error::Invariant(format!("Louvain modularity decreased from {best_q} to {q}")));
            }
            best_q = q;
            if c == level.len() {
                break;
            }
            level = level.aggregate(&dense, c);
        }

        let partition = Partition::from_labels(membership.iter().copied());
        let q = modularity(g, &partition)?;
        Ok(LouvainResult {
            partition,
            modularity: q,
            levels: traces,
        })
    }

    fn local_moving(&self, level: &Level, order: &[usize], two_m: f64) -> (Vec<usize>, MoveStats) {
        let n = level.len();
        let m = two_m / 2.0;
        let mut community: Vec<usize> = (0..n).collect();
        let mut total: Vec<f64> = level.strength.clone();
        let mut link = vec![0.0f64; n];
        let mut touched: Vec<usize> = Vec::new();
        let mut stats = MoveStats {
            moves: 0,
            min_gain: f64::INFINITY,
        };

        for _ in 0..self.max_sweeps {
            let mut moved = false;
            for &u in order {
                let cu = community[u];
                let k = level.strength[u];
                for idx in level.offsets[u]..level.offsets[u + 1] {
                    let c = community[level.targets[idx]];
                    if link[c] == 0.0 {
                        touched.push(c);
                    }
                    link[c] += level.weights[idx];
                }
                total[cu] -= k;
                // gain of joining c, relative to u standing alone
                let gain = |c: usize, w: f64| w / m - total[c] * k / (2.0 * m * m);
                let stay = gain(cu, link[cu]);
                let mut best = cu;
                let mut best_gain = stay;
                for &c in &touched {
                    let gc = gain(c, link[c]);
                    if gc > best_gain {
                        best = c;
                        best_gain = gc;
                    }
                }
                if best != cu && best_gain - stay > MIN_GAIN {
                    community[u] = best;
                    total[best] += k;
                    stats.moves += 1;
                    stats.min_gain = stats.min_gain.min(best_gain - stay);
                    moved = true;
                } else {
                    total[cu] += k;
                }
                for &c in &touched {
                    link[c] = 0.0;
                }
                link[cu] = 0.0;
                touched.clear();
            }
            if !moved {
                break;
            }
        }
        (community, stats)
    }
}

fn densify(labels: &[usize]) -> (Vec<usize>, usize) {
    let mut map = vec![usize::MAX; labels.len()];
    let mut next = 0;
    let dense = labels
        .iter()
        .map(|&l| {
            if map[l] == usize::MAX {
                map[l] = next;
                next += 1;
            }
            map[l]
        })
        .collect();
    (dense, next)
}
