use super::pagerank::{pagerank, PagerankParams};
use crate::error::{Error, Result};
use crate::graph::{induced_subgraph, IdMap, WeightedGraph};

/// What structure refinement removes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RefineMode {
    /// Lowest-PageRank nodes with their incident edges.
    Nodes,
    /// Lowest-weight edges.
    Edges,
}

impl std::str::FromStr for RefineMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "nodes" => Ok(Self::Nodes),
            "edges" => Ok(Self::Edges),
            other => Err(Error::InvalidParameter(format!("unknown refine mode {other:?}"))),
        }
    }
}

/// `ceil(fraction * n)`, tolerant of products like `0.1 * 50` landing a hair above an integer.
pub(crate) fn ceil_count(fraction: f64, n: usize) -> usize {
    let x = fraction * n as f64;
    let r = x.round();
    if (x - r).abs() <= 1e-9 * x.abs().max(1.0) {
        r as usize
    } else {
        x.ceil() as usize
    }
}

/// Removal order for nodes mode: ascending score, larger index first on ties.
pub fn removal_order(scores: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]).then(b.cmp(&a)));
    order
}

/// Drops the least influential `ceil(fraction * |V|)` nodes or the lightest
/// `ceil(fraction * |E|)` edges.
///
/// The returned map carries, for every surviving node, its index in `g`.
pub fn refine_structure(
    g: &WeightedGraph,
    fraction: f64,
    mode: RefineMode,
    p: &PagerankParams,
) -> Result<(WeightedGraph, IdMap)> {
    if !(0.0..1.0).contains(&fraction) {
        return Err(Error::InvalidParameter("fraction must lie in [0, 1)".into()));
    }
    match mode {
        RefineMode::Nodes => {
            let n = g.node_count();
            let remove = ceil_count(fraction, n);
            if remove == 0 {
                return Ok((g.clone(), IdMap::identity(n)));
            }
            let scores = pagerank(g, p)?;
            let mut dropped = vec![false; n];
            for &v in &removal_order(&scores)[..remove] {
                dropped[v] = true;
            }
            let keep: Vec<usize> = (0..n).filter(|&v| !dropped[v]).collect();
            induced_subgraph(g, &keep)
        }
        RefineMode::Edges => {
            let mut edges: Vec<(usize, usize, f64)> = g.edges().collect();
            let remove = ceil_count(fraction, edges.len());
            let mut order: Vec<usize> = (0..edges.len()).collect();
            order.sort_by(|&a, &b| {
                let (ea, eb) = (edges[a], edges[b]);
                ea.2.total_cmp(&eb.2).then((ea.0, ea.1).cmp(&(eb.0, eb.1)))
            });
            let mut dropped = vec![false; edges.len()];
            for &e in &order[..remove] {
                dropped[e] = true;
            }
            let mut i = 0;
            edges.retain(|_| {
                i += 1;
                !dropped[i - 1]
            });
            let out = WeightedGraph::from_sorted_unique(g.node_count(), &edges, g.node_values().to_vec());
            Ok((out, IdMap::identity(g.node_count())))
        }
    }
}
