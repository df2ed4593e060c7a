//! Balanced K-way partitioning of a (small) coarse graph by recursive
//! multilevel bisection, balancing on node values.
//!
//! A range of `k` parts is split `ceil(k/2) : floor(k/2)` with value targets in
//! the same proportion. Each level gets imbalance `(1 + epsilon)^(1/depth) - 1`
//! so the compounded bound over `depth = ceil(log2 k)` levels is `1 + epsilon`.
//! Self-loop weights of the coarse graph play no role.

mod bisect;
mod matching;

pub use bisect::{bisection_cut, fm_refine};
pub use matching::{heavy_edge_matching, heavy_edge_matching_with_order};

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::coarsen::CoarseGraph;
use crate::error::{Error, Result};
use crate::graph::{induced_local, WeightedGraph};
use crate::partition::PartitionMap;
use crate::rng::seeded;

#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct BisectConfig {
    /// Allowed relative overload of a part's node value.
    pub epsilon: f64,
    pub seed: u64,
    pub max_coarsen_levels: usize,
    pub refine_passes: usize,
}

impl Default for BisectConfig {
    fn default() -> Self {
        Self { epsilon: 0.1, seed: 42, max_coarsen_levels: 20, refine_passes: 4 }
    }
}

impl BisectConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon.is_finite() && self.epsilon >= 0.0) {
            return Err(Error::InvalidParameter("epsilon must be >= 0".into()));
        }
        if self.max_coarsen_levels == 0 || self.refine_passes == 0 {
            return Err(Error::InvalidParameter(
                "max_coarsen_levels and refine_passes must be >= 1".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct KwayResult {
    pub parts: PartitionMap,
    /// Summed weight of edges between different parts.
    pub cut_weight: f64,
    /// Summed node value per part.
    pub part_values: Vec<u64>,
    /// Largest part value over `ceil(total / k)`.
    pub max_ratio: f64,
    /// Whether every part respects `(1 + epsilon) * ceil(total / k)`.
    pub balanced: bool,
}

/// Summed weight of edges whose endpoints fall in different parts.
pub fn cut_weight(g: &WeightedGraph, parts: &PartitionMap) -> f64 {
    g.edges()
        .filter(|&(a, b, _)| parts.part_of(a) != parts.part_of(b))
        .map(|(_, _, w)| w)
        .sum()
}

/// Partitions `cg` into exactly `k` non-empty parts.
pub fn kway_partition(cg: &CoarseGraph, k: usize, cfg: &BisectConfig) -> Result<KwayResult> {
    partition_graph(&cg.graph, k, cfg)
}

pub(crate) fn partition_graph(g: &WeightedGraph, k: usize, cfg: &BisectConfig) -> Result<KwayResult> {
    cfg.validate()?;
    let n = g.node_count();
    if k < 1 {
        return Err(Error::InvalidParameter("k must be >= 1".into()));
    }
    if k > n {
        return Err(Error::Infeasible { requested: k, available: n });
    }
    let depth = (usize::BITS - (k - 1).leading_zeros()).max(1);
    let level_eps = (1.0 + cfg.epsilon).powf(1.0 / depth as f64) - 1.0;

    let mut assignment = vec![0usize; n];
    let nodes: Vec<usize> = (0..n).collect();
    let mut rng = seeded(cfg.seed);
    split(g, &nodes, k, 0, level_eps, cfg, &mut rng, &mut assignment);

    let parts = PartitionMap::new(assignment, k)?;
    let mut part_values = vec![0u64; k];
    for v in 0..n {
        part_values[parts.part_of(v)] += g.node_value(v);
    }
    let ideal = g.total_node_value().div_ceil(k as u64).max(1) as f64;
    let max_ratio = part_values.iter().copied().max().unwrap_or(0) as f64 / ideal;
    Ok(KwayResult {
        cut_weight: cut_weight(g, &parts),
        balanced: max_ratio <= 1.0 + cfg.epsilon + 1e-12,
        max_ratio,
        part_values,
        parts,
    })
}

/// Assigns parts `offset..offset + k` to `nodes` (indices into `sub`'s parent
/// are carried by `nodes`; `sub` is the induced subgraph over them).
#[allow(clippy::too_many_arguments)]
fn split(
    sub: &WeightedGraph,
    nodes: &[usize],
    k: usize,
    offset: usize,
    eps: f64,
    cfg: &BisectConfig,
    rng: &mut ChaCha8Rng,
    out: &mut [usize],
) {
    if k == 1 {
        for &v in nodes {
            out[v] = offset;
        }
        return;
    }
    let k0 = k.div_ceil(2);
    let k1 = k / 2;
    let mut child = crate::rng::seeded(rng.gen());
    let side = bisect::multilevel_bisect(
        sub,
        k0 as f64 / k as f64,
        eps,
        [k0, k1],
        cfg.max_coarsen_levels,
        cfg.refine_passes,
        &mut child,
    );
    for (s, kk, off) in [(0u8, k0, offset), (1u8, k1, offset + k0)] {
        let local: Vec<usize> = (0..sub.node_count()).filter(|&v| side[v] == s).collect();
        let global: Vec<usize> = local.iter().map(|&v| nodes[v]).collect();
        let child_graph = induced_local(sub, &local);
        split(&child_graph, &global, kk, off, eps, cfg, rng, out);
    }
}
