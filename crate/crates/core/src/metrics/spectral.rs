//! Dense check that principal submatrices of the weighted adjacency matrix
//! never have a larger spectral norm than the full matrix.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::rng::seeded;

const DENSE_LIMIT: usize = 2048;
const POWER_ITERATIONS: usize = 500;
const POWER_TOL: f64 = 1e-12;
const NORM_SLACK: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralReport {
    pub full_norm: f64,
    pub max_sub_norm: f64,
    /// Largest observed `||A_sub|| / ||A||` (0 when the full norm is 0).
    pub max_ratio: f64,
    pub trials: usize,
    pub violations: usize,
    pub passed: bool,
}

fn dense_adjacency(g: &WeightedGraph, nodes: &[usize]) -> Vec<f64> {
    let m = nodes.len();
    let mut local = vec![usize::MAX; g.node_count()];
    for (i, &v) in nodes.iter().enumerate() {
        local[v] = i;
    }
    let mut a = vec![0.0; m * m];
    for (i, &v) in nodes.iter().enumerate() {
        for (u, w) in g.neighbors(v) {
            if local[u] != usize::MAX {
                a[i * m + local[u]] = w;
            }
        }
    }
    a
}

/// Power-iteration estimate of the spectral norm of a symmetric `m x m` matrix.
pub fn spectral_norm(a: &[f64], m: usize) -> f64 {
    assert_eq!(a.len(), m * m);
    if m == 0 {
        return 0.0;
    }
    let mut x = vec![1.0 / (m as f64).sqrt(); m];
    let mut y = vec![0.0; m];
    let mut estimate = 0.0;
    for _ in 0..POWER_ITERATIONS {
        for (i, yi) in y.iter_mut().enumerate() {
            *yi = a[i * m..(i + 1) * m].iter().zip(&x).map(|(aij, xj)| aij * xj).sum();
        }
        let norm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm == 0.0 {
            return 0.0;
        }
        for (xi, yi) in x.iter_mut().zip(&y) {
            *xi = yi / norm;
        }
        let done = (norm - estimate).abs() <= POWER_TOL * norm;
        estimate = norm;
        if done {
            break;
        }
    }
    estimate
}

/// Compares `||A||` against `trials` random principal submatrices, each on a
/// random subset of at least two nodes.
pub fn spectral_submatrix_check(g: &WeightedGraph, trials: usize, seed: u64) -> Result<SpectralReport> {
    let n = g.node_count();
    if n > DENSE_LIMIT {
        return Err(Error::TooLarge { node_count: n, limit: DENSE_LIMIT });
    }
    if n < 2 {
        return Err(Error::InvalidParameter("need at least 2 nodes".into()));
    }
    let all: Vec<usize> = (0..n).collect();
    let full_norm = spectral_norm(&dense_adjacency(g, &all), n);
    let mut rng = seeded(seed);
    let mut max_sub_norm: f64 = 0.0;
    let mut violations = 0;
    for _ in 0..trials {
        let size = rng.gen_range(2..=n);
        let mut nodes = all.clone();
        nodes.shuffle(&mut rng);
        nodes.truncate(size);
        nodes.sort_unstable();
        let sub = spectral_norm(&dense_adjacency(g, &nodes), size);
        if sub > full_norm + NORM_SLACK {
            violations += 1;
        }
        max_sub_norm = max_sub_norm.max(sub);
    }
    Ok(SpectralReport {
        full_norm,
        max_sub_norm,
        max_ratio: if full_norm > 0.0 { max_sub_norm / full_norm } else { 0.0 },
        trials,
        violations,
        passed: violations == 0,
    })
}
