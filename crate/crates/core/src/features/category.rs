//! Category-path similarity between two products.
//!
//! Each path is padded (or truncated) to a fixed depth; two padded paths
//! match at position `i` when both hold the same category id there. Over all
//! path pairs of the two products, the pair whose deepest matching position
//! is largest wins and its match vector is the similarity. Pairs tied on
//! depth are ranked by their match vector read root-first, which makes the
//! result independent of path order and therefore symmetric.

use crate::graph::{CoPurchaseGraph, NodeId};

/// Largest supported padded depth (match vectors are packed into a `u64`).
pub const MAX_DEPTH: usize = 64;

/// Truncates or pads `path` to `d_cat` entries; `None` marks padding.
pub fn pad_path(path: &[u32], d_cat: usize) -> Vec<Option<u32>> {
    (0..d_cat).map(|i| path.get(i).copied()).collect()
}

fn match_mask(a: &[u32], b: &[u32], d_cat: usize) -> u64 {
    let mut mask = 0u64;
    for i in 0..d_cat.min(a.len()).min(b.len()) {
        if a[i] == b[i] {
            mask |= 1 << i;
        }
    }
    mask
}

/// Best-pair match vector packed as a bitmask (bit `i` = depth `i`).
pub fn similarity_mask<P: AsRef<[u32]>>(paths_u: &[P], paths_v: &[P], d_cat: usize) -> u64 {
    assert!(d_cat <= MAX_DEPTH, "d_cat {d_cat} exceeds {MAX_DEPTH}");
    let mut best: Option<(u32, u64)> = None;
    for a in paths_u {
        for b in paths_v {
            let mask = match_mask(a.as_ref(), b.as_ref(), d_cat);
            if mask == 0 {
                continue;
            }
            let deepest = 63 - mask.leading_zeros();
            let key = (deepest, mask.reverse_bits());
            if best.is_none_or(|(d, r)| key > (d, r)) {
                best = Some(key);
            }
        }
    }
    best.map_or(0, |(_, r)| r.reverse_bits())
}

/// Binary similarity vector of length `d_cat`; all zero when no path pair
/// shares a category at any position.
pub fn category_similarity<P: AsRef<[u32]>>(paths_u: &[P], paths_v: &[P], d_cat: usize) -> Vec<u8> {
    let mask = similarity_mask(paths_u, paths_v, d_cat);
    (0..d_cat).map(|i| ((mask >> i) & 1) as u8).collect()
}

/// Pair weight in `[0, 1]`: the fraction of ones in the similarity vector.
pub fn similarity_weight(g: &CoPurchaseGraph, d_cat: usize) -> impl Fn(NodeId, NodeId) -> f64 + Sync + '_ {
    move |u, v| {
        let mask = similarity_mask(&g.attrs(u).categories, &g.attrs(v).categories, d_cat);
        mask.count_ones() as f64 / d_cat as f64
    }
}
