use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::par;

#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct PagerankParams {
    /// Probability of following an edge rather than teleporting.
    pub alpha: f64,
    /// Stop once the L1 change between iterates drops below this.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for PagerankParams {
    fn default() -> Self {
        Self { alpha: 0.85, tol: 1e-10, max_iter: 200 }
    }
}

impl PagerankParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::InvalidParameter("alpha must lie in (0, 1)".into()));
        }
        if self.tol.is_nan() || self.tol <= 0.0 || self.max_iter == 0 {
            return Err(Error::InvalidParameter("tol must be > 0 and max_iter >= 1".into()));
        }
        Ok(())
    }
}

/// PageRank by power iteration over unweighted degrees.
///
/// `PR(i) = (1 - alpha) / n + alpha * sum_{j in N(i)} PR(j) / deg(j)`, with the
/// mass of isolated nodes spread uniformly. Edge weights are ignored.
pub fn pagerank(g: &WeightedGraph, p: &PagerankParams) -> Result<Vec<f64>> {
    p.validate()?;
    let n = g.node_count();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    let teleport = (1.0 - p.alpha) / n as f64;
    let mut rank = vec![1.0 / n as f64; n];
    let mut share = vec![0.0; n];
    for _ in 0..p.max_iter {
        par::for_each_mut(&mut share, |j, s| {
            let d = g.degree(j);
            *s = if d == 0 { 0.0 } else { rank[j] / d as f64 };
        });
        let dangling: f64 = (0..n).filter(|&j| g.degree(j) == 0).map(|j| rank[j]).sum();
        let base = teleport + p.alpha * dangling / n as f64;
        let next = par::map_range(n, |i| {
            base + p.alpha * g.row(i).0.iter().map(|&j| share[j]).sum::<f64>()
        });
        let residual: f64 = next.iter().zip(&rank).map(|(a, b)| (a - b).abs()).sum();
        rank = next;
        if residual < p.tol {
            break;
        }
    }
    Ok(rank)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ring_is_uniform() {
        let g = WeightedGraph::from_edges(7, (0..7).map(|i| (i, (i + 1) % 7, 1.0 + i as f64))).unwrap();
        let r = pagerank(&g, &PagerankParams::default()).unwrap();
        assert!(r.iter().all(|&x| (x - 1.0 / 7.0).abs() < 1e-12));
    }

    #[test]
    fn isolated_mass_is_redistributed() {
        let g = WeightedGraph::from_edges(4, [(0, 1, 1.0)]).unwrap();
        let r = pagerank(&g, &PagerankParams::default()).unwrap();
        assert!((r.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(r[0] > r[2]);
        assert!((r[2] - r[3]).abs() < 1e-15);
    }

    #[test]
    fn parameter_checks() {
        let g = WeightedGraph::edgeless(2);
        assert!(pagerank(&g, &PagerankParams { alpha: 1.0, ..Default::default() }).is_err());
        assert!(pagerank(&g, &PagerankParams { tol: 0.0, ..Default::default() }).is_err());
        assert!(matches!(pagerank(&WeightedGraph::edgeless(0), &PagerankParams::default()), Err(Error::EmptyGraph)));
    }
}
