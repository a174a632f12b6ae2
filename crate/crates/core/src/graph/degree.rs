//! Degree distribution and power-law exponent estimation.
//!
//! The primary estimator is an ordinary least-squares line through
//! `(ln k, ln P(K >= k))`; for a power law `p(k) ~ k^-alpha` that line has
//! slope `-(alpha - 1)`. A discrete Hill (maximum-likelihood) estimate is
//! reported alongside for cross-checking.

use super::Adjacency;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegreeDistribution {
    pub histogram: BTreeMap<usize, usize>,
    /// `(degree, P(K >= degree))` for every degree present, ascending.
    pub ccdf: Vec<(usize, f64)>,
}

impl DegreeDistribution {
    pub fn from_degrees(degrees: impl IntoIterator<Item = usize>) -> Self {
        let mut histogram = BTreeMap::new();
        let mut n = 0usize;
        for d in degrees {
            *histogram.entry(d).or_insert(0) += 1;
            n += 1;
        }
        let mut ccdf = Vec::with_capacity(histogram.len());
        let mut remaining = n;
        for (&d, &c) in &histogram {
            ccdf.push((d, remaining as f64 / n as f64));
            remaining -= c;
        }
        Self { histogram, ccdf }
    }

    pub fn of<A: Adjacency>(g: &A) -> Self {
        Self::from_degrees((0..g.node_count()).map(|v| g.degree(v)))
    }

    pub fn node_count(&self) -> usize {
        self.histogram.values().sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerLawFit {
    pub alpha: f64,
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub k_min: usize,
    pub points: usize,
    pub hill_alpha: f64,
}

/// CCDF log-log regression over degrees `>= k_min` (degree 0 is always
/// excluded).
pub fn fit_power_law_ccdf(dist: &DegreeDistribution, k_min: usize) -> Result<PowerLawFit> {
    let k_min = k_min.max(1);
    let pts: Vec<(f64, f64)> = dist
        .ccdf
        .iter()
        .filter(|(k, _)| *k >= k_min)
        .map(|&(k, p)| ((k as f64).ln(), p.ln()))
        .collect();
    if pts.len() < 5 {
        return Err(Error::TooFewDegrees(pts.len()));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = pts.iter().map(|p| (p.1 - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r_squared = if syy > 0.0 { (sxy * sxy) / (sxx * syy) } else { 1.0 };
    Ok(PowerLawFit {
        alpha: 1.0 - slope,
        slope,
        intercept,
        r_squared,
        k_min,
        points: pts.len(),
        hill_alpha: hill_estimate(dist, k_min),
    })
}

/// Discrete Hill estimator `1 + n / sum ln(k / (k_min - 1/2))`.
pub fn hill_estimate(dist: &DegreeDistribution, k_min: usize) -> f64 {
    let k_min = k_min.max(1);
    let base = k_min as f64 - 0.5;
    let (mut n, mut s) = (0.0, 0.0);
    for (&k, &c) in dist.histogram.range(k_min..) {
        n += c as f64;
        s += c as f64 * (k as f64 / base).ln();
    }
    1.0 + n / s
}
