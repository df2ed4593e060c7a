//! Partition quality: edge-cut ratio (EC), edge balance (BAL) and node-count
//! standard deviation (STD).
//!
//! EC and BAL count edges, not weights. A cut edge belongs to no part, so a
//! part's load is the number of edges with both endpoints inside it.

mod spectral;

pub use spectral::{spectral_norm, spectral_submatrix_check, SpectralReport};

use std::collections::BTreeMap;
use std::time::Duration;

use log::warn;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::partition::PartitionMap;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartitionReport {
    pub edge_cut_ratio: f64,
    /// Absent when the graph has no edges.
    pub bal: Option<f64>,
    /// Absent for fewer than two parts.
    pub std: Option<f64>,
    pub per_part_nodes: Vec<usize>,
    pub per_part_intra_edges: Vec<usize>,
    pub wall_times_ms: BTreeMap<String, f64>,
}

fn check(g: &WeightedGraph, parts: &PartitionMap) -> Result<()> {
    if parts.node_count() != g.node_count() {
        return Err(Error::DimensionMismatch { expected: g.node_count(), found: parts.node_count() });
    }
    Ok(())
}

/// Edges inside each part, `k` entries.
pub fn intra_edges(g: &WeightedGraph, parts: &PartitionMap, k: usize) -> Vec<usize> {
    let mut load = vec![0usize; k];
    for (a, b, _) in g.edges() {
        let p = parts.part_of(a);
        if p == parts.part_of(b) {
            load[p] += 1;
        }
    }
    load
}

/// Fraction of undirected edges whose endpoints lie in different parts.
///
/// Defined as 0 for an edgeless graph.
pub fn edge_cut(g: &WeightedGraph, parts: &PartitionMap) -> Result<f64> {
    check(g, parts)?;
    let total = g.edge_count();
    if total == 0 {
        warn!("edge cut of an edgeless graph is reported as 0");
        return Ok(0.0);
    }
    let cut = g.edges().filter(|&(a, b, _)| parts.part_of(a) != parts.part_of(b)).count();
    Ok(cut as f64 / total as f64)
}

/// `MaxLoad / (|E| / k)` where MaxLoad is the largest intra-part edge count.
pub fn balance(g: &WeightedGraph, parts: &PartitionMap, k: usize) -> Result<f64> {
    check(g, parts)?;
    if g.edge_count() == 0 {
        return Err(Error::NoEdges);
    }
    if k < parts.part_count() || k == 0 {
        return Err(Error::InvalidParameter(format!(
            "k = {k} does not cover {} parts",
            parts.part_count()
        )));
    }
    let max_load = intra_edges(g, parts, k).into_iter().max().unwrap_or(0);
    Ok(max_load as f64 / (g.edge_count() as f64 / k as f64))
}

/// `sqrt(sum (|V_i| - mu)^2 / (k - 1))` with `mu = |V| / k`.
pub fn std_dev(parts: &PartitionMap, k: usize) -> Result<f64> {
    if k < 2 {
        return Err(Error::InvalidParameter("STD needs k >= 2".into()));
    }
    if k < parts.part_count() {
        return Err(Error::InvalidParameter(format!(
            "k = {k} does not cover {} parts",
            parts.part_count()
        )));
    }
    let mut sizes = parts.part_sizes();
    sizes.resize(k, 0);
    let mu = parts.node_count() as f64 / k as f64;
    let ss: f64 = sizes.iter().map(|&s| (s as f64 - mu).powi(2)).sum();
    Ok((ss / (k - 1) as f64).sqrt())
}

/// Collects all metrics for `parts` (with `k = parts.part_count()`).
pub fn report(
    g: &WeightedGraph,
    parts: &PartitionMap,
    wall_times: &[(&str, Duration)],
) -> Result<PartitionReport> {
    check(g, parts)?;
    let k = parts.part_count();
    Ok(PartitionReport {
        edge_cut_ratio: edge_cut(g, parts)?,
        bal: if g.edge_count() > 0 { Some(balance(g, parts, k)?) } else { None },
        std: if k >= 2 { Some(std_dev(parts, k)?) } else { None },
        per_part_nodes: parts.part_sizes(),
        per_part_intra_edges: intra_edges(g, parts, k),
        wall_times_ms: wall_times
            .iter()
            .map(|(name, d)| (name.to_string(), d.as_secs_f64() * 1e3))
            .collect(),
    })
}
