//! Contraction of a partition into a coarse graph.
//!
//! Every part becomes one coarse node. Edges between parts are summed into a
//! single coarse edge; edges inside a part accumulate into that node's
//! self-loop weight, so total edge mass is conserved.

use std::io::Write;

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::par;
use crate::partition::PartitionMap;

/// How coarse node values are derived.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoarsenMode {
    /// Value = number of source nodes in the part.
    Edge,
    /// Value = sum of the source nodes' values.
    Node,
}

impl std::str::FromStr for CoarsenMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "edge" => Ok(Self::Edge),
            "node" => Ok(Self::Node),
            other => Err(Error::InvalidParameter(format!("unknown coarsening mode {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CoarseGraph {
    pub graph: WeightedGraph,
    /// Intra-part edge mass per coarse node.
    pub self_loop_weight: Vec<f64>,
    /// Source-node to coarse-node map that produced this graph.
    pub provenance: PartitionMap,
}

impl CoarseGraph {
    /// Treats a plain graph as its own coarsening (identity provenance, no self-loops).
    pub fn from_graph(graph: WeightedGraph) -> Self {
        let n = graph.node_count();
        Self {
            self_loop_weight: vec![0.0; n],
            provenance: PartitionMap::from_assignment((0..n).collect()),
            graph,
        }
    }

    pub fn node_count(&self) -> usize {
        self.graph.node_count()
    }

    /// Inter-part plus intra-part edge mass.
    pub fn total_mass(&self) -> f64 {
        self.graph.total_edge_weight() + self.self_loop_weight.iter().sum::<f64>()
    }

    /// Writes `coarse_id<TAB>value<TAB>self_loop_weight` per coarse node.
    pub fn write_node_values<W: Write>(&self, mut out: W) -> Result<()> {
        for (k, (&v, &s)) in self
            .graph
            .node_values()
            .iter()
            .zip(&self.self_loop_weight)
            .enumerate()
        {
            writeln!(out, "{k}\t{v}\t{s}")?;
        }
        Ok(())
    }
}

/// Contracts `parts` over `g`. Every part must be non-empty.
pub fn coarsen(parts: &PartitionMap, mode: CoarsenMode, g: &WeightedGraph) -> Result<CoarseGraph> {
    match mode {
        CoarsenMode::Edge => coarsen_with_values(parts, g, None),
        CoarsenMode::Node => coarsen_with_values(parts, g, Some(g.node_values())),
    }
}

/// Contracts `parts`; coarse values sum `values` per part, or count members when `None`.
pub(crate) fn coarsen_with_values(
    parts: &PartitionMap,
    g: &WeightedGraph,
    values: Option<&[u64]>,
) -> Result<CoarseGraph> {
    if parts.node_count() != g.node_count() {
        return Err(Error::DimensionMismatch { expected: g.node_count(), found: parts.node_count() });
    }
    let m = parts.part_count();
    if m == 0 {
        return Err(Error::InvalidParameter("partition has no parts".into()));
    }
    let members = parts.members();
    if let Some(empty) = members.iter().position(Vec::is_empty) {
        return Err(Error::InvalidParameter(format!("part {empty} is empty")));
    }
    let node_values: Vec<u64> = members
        .iter()
        .map(|mem| match values {
            None => mem.len() as u64,
            Some(v) => mem.iter().map(|&i| v[i]).sum(),
        })
        .collect();

    let assign = parts.assignment();
    // Part `p` owns the edges towards higher parts; a dense accumulator per worker.
    let per_part = par::map_range_with(
        m,
        || (vec![0.0f64; m], Vec::<usize>::new()),
        |(acc, touched), p| {
            let mut self_loop = 0.0;
            for &i in &members[p] {
                for (j, w) in g.neighbors(i) {
                    let q = assign[j];
                    if q == p {
                        if i < j {
                            self_loop += w;
                        }
                    } else if q > p {
                        if acc[q] == 0.0 {
                            touched.push(q);
                        }
                        acc[q] += w;
                    }
                }
            }
            touched.sort_unstable();
            let row: Vec<(usize, usize, f64)> = touched
                .drain(..)
                .map(|q| (p, q, std::mem::take(&mut acc[q])))
                .collect();
            (self_loop, row)
        },
    );
    let mut self_loop_weight = Vec::with_capacity(m);
    let mut edges = Vec::new();
    for (s, row) in per_part {
        self_loop_weight.push(s);
        edges.extend(row);
    }
    Ok(CoarseGraph {
        graph: WeightedGraph::from_sorted_unique(m, &edges, node_values),
        self_loop_weight,
        provenance: parts.clone(),
    })
}
