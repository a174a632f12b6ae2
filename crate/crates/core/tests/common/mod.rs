//! Fixture generators and brute-force oracles shared by the integration tests.

#![allow(dead_code)]

use copurchase::graph::{Adjacency, NodeId};
use copurchase::meta::{write_record, CategoryPath, Group, ProductRecord, ReviewSummary};
use rand::seq::SliceRandom;
use rand::Rng;
use std::collections::BTreeMap;
use std::io::Read;

const WORDS: [&str; 8] = ["Deep", "Blue", "river", "of", "Time", "&", "night's", "2nd"];
const CATS: [&str; 6] = ["Books", "Subjects", "Literature & Fiction", "Pop, Rock", "General", "DVD (Region 1)"];

pub fn random_asin<R: Rng>(r: &mut R) -> String {
    const ALNUM: &[u8] = b"0123456789ABCDEFGHIJKLMNOPQRSTUVWXYZ";
    (0..10).map(|_| ALNUM[r.gen_range(0..ALNUM.len())] as char).collect()
}

fn random_title<R: Rng>(r: &mut R) -> String {
    let n = r.gen_range(1..6);
    (0..n).map(|_| *WORDS.choose(r).unwrap()).collect::<Vec<_>>().join(" ")
}

fn random_path<R: Rng>(r: &mut R) -> CategoryPath {
    let depth = r.gen_range(1..10);
    CategoryPath {
        levels: (0..depth)
            .map(|_| (CATS.choose(r).unwrap().to_string(), r.gen_range(1..400_000)))
            .collect(),
    }
}

/// A record with every field drawn at random; discontinued records carry
/// only their id and ASIN.
pub fn random_record<R: Rng>(r: &mut R, id: u64) -> ProductRecord {
    let asin = random_asin(r);
    if r.gen_bool(0.1) {
        return ProductRecord {
            id,
            asin,
            discontinued: true,
            ..Default::default()
        };
    }
    let groups = ["Book", "DVD", "Music", "Video", "Toy", "Software"];
    let mut similar: Vec<String> = (0..r.gen_range(0..6)).map(|_| random_asin(r)).collect();
    similar.sort();
    similar.dedup();
    similar.shuffle(r);
    ProductRecord {
        id,
        asin,
        title: Some(random_title(r)),
        group: Some(Group::parse(groups.choose(r).unwrap())),
        salesrank: if r.gen_bool(0.8) { Some(r.gen_range(0..4_000_000)) } else { None },
        similar_asins: similar,
        category_paths: (0..r.gen_range(0..4)).map(|_| random_path(r)).collect(),
        review_summary: if r.gen_bool(0.7) {
            let total = r.gen_range(0..500);
            Some(ReviewSummary {
                total,
                downloaded: r.gen_range(0..=total),
                avg_rating: r.gen_range(0..=10) as f64 / 2.0,
            })
        } else {
            None
        },
        discontinued: false,
    }
}

/// Dump text generated on demand, one record at a time, so arbitrarily long
/// inputs can be parsed without ever existing in memory.
pub struct LazyDump<R> {
    rng: R,
    next: u64,
    total: u64,
    buf: Vec<u8>,
    pos: usize,
}

impl<R: Rng> LazyDump<R> {
    pub fn new(rng: R, total: u64) -> Self {
        let header = format!("# Full information about Amazon Share the Love products\nTotal items: {total}\n\n");
        Self {
            rng,
            next: 0,
            total,
            buf: header.into_bytes(),
            pos: 0,
        }
    }
}

impl<R: Rng> Read for LazyDump<R> {
    fn read(&mut self, out: &mut [u8]) -> std::io::Result<usize> {
        if self.pos == self.buf.len() {
            if self.next == self.total {
                return Ok(0);
            }
            self.buf.clear();
            self.pos = 0;
            let rec = random_record(&mut self.rng, self.next);
            write_record(&mut self.buf, &rec)?;
            self.next += 1;
        }
        let n = out.len().min(self.buf.len() - self.pos);
        out[..n].copy_from_slice(&self.buf[self.pos..self.pos + n]);
        self.pos += n;
        Ok(n)
    }
}

/// `Q = (1/2m) sum_ij [A_ij - k_i k_j / 2m] delta(c_i, c_j)` over all ordered pairs.
pub fn pairwise_modularity<A: Adjacency>(g: &A, labels: &[usize]) -> f64 {
    let n = g.node_count();
    let two_m = 2.0 * g.edge_count() as f64;
    let mut q = 0.0;
    for i in 0..n {
        for j in 0..n {
            if labels[i] == labels[j] {
                let a = if g.has_edge(i, j) { 1.0 } else { 0.0 };
                q += a - (g.degree(i) * g.degree(j)) as f64 / two_m;
            }
        }
    }
    q / two_m
}

/// Categorical assortativity from an explicitly tabulated mixing matrix.
pub fn assortativity_oracle<A: Adjacency>(g: &A, labels: &[u32]) -> f64 {
    let mut e: BTreeMap<(u32, u32), f64> = BTreeMap::new();
    let mut total = 0.0;
    for u in 0..g.node_count() {
        for v in 0..g.node_count() {
            if g.has_edge(u, v) {
                *e.entry((labels[u], labels[v])).or_default() += 1.0;
                total += 1.0;
            }
        }
    }
    let mut a: BTreeMap<u32, f64> = BTreeMap::new();
    let mut b: BTreeMap<u32, f64> = BTreeMap::new();
    let mut trace = 0.0;
    for (&(x, y), &c) in &e {
        *a.entry(x).or_default() += c / total;
        *b.entry(y).or_default() += c / total;
        if x == y {
            trace += c / total;
        }
    }
    let ab: f64 = a.iter().map(|(k, va)| va * b.get(k).copied().unwrap_or(0.0)).sum();
    (trace - ab) / (1.0 - ab)
}

/// Mann-Whitney AUC by counting every positive/negative pair.
pub fn auc_oracle(labels: &[u8], scores: &[f64]) -> f64 {
    let mut wins = 0.0;
    let mut pairs = 0.0;
    for i in 0..labels.len() {
        for j in 0..labels.len() {
            if labels[i] == 1 && labels[j] == 0 {
                pairs += 1.0;
                if scores[i] > scores[j] {
                    wins += 1.0;
                } else if scores[i] == scores[j] {
                    wins += 0.5;
                }
            }
        }
    }
    wins / pairs
}

/// Positionwise match vector of two padded paths; padding never matches.
pub fn match_vector(a: &[u32], b: &[u32], d_cat: usize) -> Vec<u8> {
    (0..d_cat)
        .map(|i| match (a.get(i), b.get(i)) {
            (Some(x), Some(y)) if x == y => 1,
            _ => 0,
        })
        .collect()
}

pub fn deepest_one(v: &[u8]) -> Option<usize> {
    v.iter().rposition(|&x| x == 1)
}

/// Exhaustive best pair: deepest matching position first, then the match
/// vector compared root-first.
pub fn similarity_oracle(pu: &[Vec<u32>], pv: &[Vec<u32>], d_cat: usize) -> Vec<u8> {
    let mut best: Option<(usize, Vec<u8>)> = None;
    for a in pu {
        for b in pv {
            let m = match_vector(a, b, d_cat);
            let Some(d) = deepest_one(&m) else { continue };
            let better = match &best {
                None => true,
                Some((bd, bm)) => d > *bd || (d == *bd && m > *bm),
            };
            if better {
                best = Some((d, m));
            }
        }
    }
    best.map_or_else(|| vec![0; d_cat], |(_, m)| m)
}

/// Nodes within one hop of `u` or `v` (including both).
pub fn one_hop_ball<A: Adjacency>(g: &A, u: NodeId, v: NodeId) -> Vec<bool> {
    let mut near = vec![false; g.node_count()];
    for s in [u, v] {
        near[s] = true;
        for w in g.neighbors(s) {
            near[w] = true;
        }
    }
    near
}
