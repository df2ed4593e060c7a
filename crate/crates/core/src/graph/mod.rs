//! Undirected weighted graphs in compressed neighbor-list form.

mod generate;
mod idmap;
mod io;
mod subgraph;

pub use generate::{generate, Generated, GeneratorSpec, Model};
pub use idmap::IdMap;
pub use io::{
    load_edge_list, read_node_set, read_partition, write_edge_list, write_node_set,
    write_partition, LoadStats,
};
pub use subgraph::induced_subgraph;
pub(crate) use subgraph::induced_local;

use crate::error::{Error, Result};

/// Undirected graph stored as symmetric arcs.
///
/// Each row's arcs are sorted by target index. Every undirected edge `{i, j}`
/// appears once in row `i` and once in row `j` with the same weight. Self-loops
/// are never stored.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedGraph {
    offsets: Vec<usize>,
    targets: Vec<usize>,
    weights: Vec<f64>,
    node_values: Vec<u64>,
}

impl WeightedGraph {
    /// Graph with `n` nodes, unit node values and no edges.
    pub fn edgeless(n: usize) -> Self {
        Self {
            offsets: vec![0; n + 1],
            targets: Vec::new(),
            weights: Vec::new(),
            node_values: vec![1; n],
        }
    }

    /// Builds a graph from undirected edge records.
    ///
    /// Endpoint order is irrelevant, parallel records are merged by summing
    /// their weights and self-loops are discarded.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        let mut canon = Vec::new();
        for (a, b, w) in edges {
            for idx in [a, b] {
                if idx >= n {
                    return Err(Error::NodeOutOfRange { index: idx, node_count: n });
                }
            }
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "edge ({a}, {b}) has non-positive or non-finite weight {w}"
                )));
            }
            if a != b {
                canon.push((a.min(b), a.max(b), w));
            }
        }
        Ok(Self::from_canonical(n, canon, vec![1; n]))
    }

    /// Builds from records with `lo < hi`, merging duplicate pairs.
    ///
    /// Merging sums weights in input order, so equal inputs give bit-identical graphs.
    pub(crate) fn from_canonical(
        n: usize,
        mut edges: Vec<(usize, usize, f64)>,
        node_values: Vec<u64>,
    ) -> Self {
        debug_assert_eq!(node_values.len(), n);
        #[cfg(feature = "parallel")]
        {
            use rayon::slice::ParallelSliceMut;
            edges.par_sort_by_key(|&(a, b, _)| (a, b));
        }
        #[cfg(not(feature = "parallel"))]
        edges.sort_by_key(|&(a, b, _)| (a, b));

        let mut merged: Vec<(usize, usize, f64)> = Vec::with_capacity(edges.len());
        for (a, b, w) in edges {
            match merged.last_mut() {
                Some(last) if last.0 == a && last.1 == b => last.2 += w,
                _ => merged.push((a, b, w)),
            }
        }
        Self::from_sorted_unique(n, &merged, node_values)
    }

    /// Builds from strictly increasing `(lo, hi)` records with `lo < hi`.
    pub(crate) fn from_sorted_unique(
        n: usize,
        edges: &[(usize, usize, f64)],
        node_values: Vec<u64>,
    ) -> Self {
        let mut degree = vec![0usize; n];
        for &(a, b, _) in edges {
            degree[a] += 1;
            degree[b] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        let mut acc = 0;
        for d in &degree {
            acc += d;
            offsets.push(acc);
        }
        let mut cursor: Vec<usize> = offsets[..n].to_vec();
        let mut targets = vec![0usize; acc];
        let mut weights = vec![0f64; acc];
        // Lexicographic input order leaves every row sorted by target.
        for &(a, b, w) in edges {
            targets[cursor[a]] = b;
            weights[cursor[a]] = w;
            cursor[a] += 1;
            targets[cursor[b]] = a;
            weights[cursor[b]] = w;
            cursor[b] += 1;
        }
        Self { offsets, targets, weights, node_values }
    }

    /// Concatenates per-node rows that are already sorted and mutually symmetric.
    pub(crate) fn from_rows(rows: Vec<(Vec<usize>, Vec<f64>)>, node_values: Vec<u64>) -> Self {
        let mut offsets = Vec::with_capacity(rows.len() + 1);
        offsets.push(0);
        let total: usize = rows.iter().map(|r| r.0.len()).sum();
        let mut targets = Vec::with_capacity(total);
        let mut weights = Vec::with_capacity(total);
        for (t, w) in rows {
            targets.extend_from_slice(&t);
            weights.extend_from_slice(&w);
            offsets.push(targets.len());
        }
        Self { offsets, targets, weights, node_values }
    }

    /// Assembles a graph from raw CSR arrays, checking every invariant.
    pub fn from_csr(
        offsets: Vec<usize>,
        targets: Vec<usize>,
        weights: Vec<f64>,
        node_values: Vec<u64>,
    ) -> Result<Self> {
        let g = Self { offsets, targets, weights, node_values };
        g.validate().map_err(Error::InvalidParameter)?;
        Ok(g)
    }

    /// Replaces the node values; each must be at least 1.
    pub fn with_node_values(mut self, values: Vec<u64>) -> Result<Self> {
        if values.len() != self.node_count() {
            return Err(Error::DimensionMismatch {
                expected: self.node_count(),
                found: values.len(),
            });
        }
        if values.contains(&0) {
            return Err(Error::InvalidParameter("node values must be >= 1".into()));
        }
        self.node_values = values;
        Ok(self)
    }

    pub fn node_count(&self) -> usize {
        self.node_values.len()
    }

    /// Number of stored arcs (twice the undirected edge count).
    pub fn arc_count(&self) -> usize {
        self.targets.len()
    }

    /// Number of undirected edges.
    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    pub fn targets(&self) -> &[usize] {
        &self.targets
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn node_values(&self) -> &[u64] {
        &self.node_values
    }

    pub fn node_value(&self, node: usize) -> u64 {
        self.node_values[node]
    }

    pub fn total_node_value(&self) -> u64 {
        self.node_values.iter().sum()
    }

    pub fn degree(&self, node: usize) -> usize {
        self.offsets[node + 1] - self.offsets[node]
    }

    /// Targets and weights of the arcs leaving `node`.
    #[inline]
    pub fn row(&self, node: usize) -> (&[usize], &[f64]) {
        let (s, e) = (self.offsets[node], self.offsets[node + 1]);
        (&self.targets[s..e], &self.weights[s..e])
    }

    pub fn neighbors(&self, node: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let (t, w) = self.row(node);
        t.iter().copied().zip(w.iter().copied())
    }

    /// Sum of the weights of the arcs leaving `node`.
    pub fn weighted_degree(&self, node: usize) -> f64 {
        self.row(node).1.iter().sum()
    }

    /// Weight of edge `{a, b}` if present.
    pub fn edge_weight(&self, a: usize, b: usize) -> Option<f64> {
        let (t, w) = self.row(a);
        t.binary_search(&b).ok().map(|pos| w[pos])
    }

    /// Every undirected edge once, as `(lo, hi, weight)` in row order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.node_count()).flat_map(move |i| {
            self.neighbors(i)
                .filter(move |&(j, _)| j > i)
                .map(move |(j, w)| (i, j, w))
        })
    }

    /// Sum of undirected edge weights.
    pub fn total_edge_weight(&self) -> f64 {
        self.edges().map(|(_, _, w)| w).sum()
    }

    /// Checks structural invariants, returning a description of the first violation.
    pub fn validate(&self) -> Result<(), String> {
        let n = self.node_values.len();
        if self.offsets.len() != n + 1 {
            return Err(format!("offsets length {} != node_count + 1", self.offsets.len()));
        }
        if self.offsets[0] != 0 {
            return Err("first offset is not 0".into());
        }
        if self.offsets.windows(2).any(|w| w[0] > w[1]) {
            return Err("offsets are not non-decreasing".into());
        }
        if self.offsets[n] != self.targets.len() || self.targets.len() != self.weights.len() {
            return Err("last offset does not match arc count".into());
        }
        if let Some(i) = self.node_values.iter().position(|&v| v == 0) {
            return Err(format!("node {i} has value 0"));
        }
        for i in 0..n {
            let (t, w) = self.row(i);
            if t.windows(2).any(|p| p[0] >= p[1]) {
                return Err(format!("row {i} is not strictly sorted"));
            }
            for (&j, &wij) in t.iter().zip(w) {
                if j >= n {
                    return Err(format!("arc {i}->{j} leaves the node range"));
                }
                if j == i {
                    return Err(format!("self-loop stored at node {i}"));
                }
                if !(wij.is_finite() && wij > 0.0) {
                    return Err(format!("arc {i}->{j} has weight {wij}"));
                }
                match self.edge_weight(j, i) {
                    Some(back) if back.to_bits() == wij.to_bits() => {}
                    Some(back) => {
                        return Err(format!("asymmetric weight {i}->{j}: {wij} vs {back}"))
                    }
                    None => return Err(format!("missing reverse arc {j}->{i}")),
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn from_edges_merges_and_symmetrizes() {
        let g = WeightedGraph::from_edges(3, [(0, 1, 0.3), (1, 0, 0.4), (2, 2, 1.0), (1, 2, 1.0)])
            .unwrap();
        g.validate().unwrap();
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.edge_weight(0, 1), Some(0.3 + 0.4));
        assert_eq!(g.edge_weight(2, 1), Some(1.0));
        assert_eq!(g.edge_weight(0, 2), None);
    }

    #[test]
    fn from_edges_rejects_bad_weight_and_range() {
        assert!(WeightedGraph::from_edges(2, [(0, 1, 0.0)]).is_err());
        assert!(WeightedGraph::from_edges(2, [(0, 1, f64::NAN)]).is_err());
        assert!(WeightedGraph::from_edges(2, [(0, 5, 1.0)]).is_err());
    }

    #[test]
    fn from_csr_catches_asymmetry() {
        let bad = WeightedGraph::from_csr(vec![0, 1, 1], vec![1], vec![1.0], vec![1, 1]);
        assert!(bad.is_err());
        let ok = WeightedGraph::from_csr(vec![0, 1, 2], vec![1, 0], vec![2.0, 2.0], vec![1, 1]);
        assert!(ok.is_ok());
    }

    #[test]
    fn node_values_must_be_positive() {
        let g = WeightedGraph::edgeless(2);
        assert!(g.clone().with_node_values(vec![1, 0]).is_err());
        assert!(g.clone().with_node_values(vec![1]).is_err());
        assert_eq!(g.with_node_values(vec![3, 4]).unwrap().total_node_value(), 7);
    }
}
