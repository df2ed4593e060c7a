use super::{IdMap, WeightedGraph};
use crate::error::{Error, Result};

/// Extracts the subgraph induced by `nodes`.
///
/// Subgraph index `i` corresponds to the `i`-th distinct entry of `nodes`;
/// the returned map carries parent indices as its external ids.
pub fn induced_subgraph(g: &WeightedGraph, nodes: &[usize]) -> Result<(WeightedGraph, IdMap)> {
    let n = g.node_count();
    if let Some(&bad) = nodes.iter().find(|&&v| v >= n) {
        return Err(Error::NodeOutOfRange { index: bad, node_count: n });
    }
    let mut seen = vec![false; n];
    let distinct: Vec<usize> = nodes
        .iter()
        .copied()
        .filter(|&v| !std::mem::replace(&mut seen[v], true))
        .collect();
    let sub = induced_local(g, &distinct);
    let ids = IdMap::from_external(distinct.iter().map(|&v| v as u64).collect())?;
    Ok((sub, ids))
}

/// Induced subgraph over distinct, in-range `nodes`.
pub(crate) fn induced_local(g: &WeightedGraph, nodes: &[usize]) -> WeightedGraph {
    let mut local = vec![usize::MAX; g.node_count()];
    for (i, &v) in nodes.iter().enumerate() {
        local[v] = i;
    }
    let mut edges = Vec::new();
    for (i, &v) in nodes.iter().enumerate() {
        for (u, w) in g.neighbors(v) {
            let j = local[u];
            if j != usize::MAX && i < j {
                edges.push((i, j, w));
            }
        }
    }
    edges.sort_unstable_by_key(|&(a, b, _)| (a, b));
    let values = nodes.iter().map(|&v| g.node_value(v)).collect();
    WeightedGraph::from_sorted_unique(nodes.len(), &edges, values)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> WeightedGraph {
        WeightedGraph::from_edges(3, [(0, 1, 1.0), (1, 2, 2.0), (0, 2, 3.0)]).unwrap()
    }

    #[test]
    fn pair_of_triangle() {
        let (sub, ids) = induced_subgraph(&triangle(), &[0, 1]).unwrap();
        assert_eq!(sub.node_count(), 2);
        assert_eq!(sub.edge_count(), 1);
        assert_eq!(ids.externals(), &[0, 1]);
    }

    #[test]
    fn all_nodes_is_identity() {
        let g = triangle();
        let (sub, _) = induced_subgraph(&g, &[0, 1, 2]).unwrap();
        assert_eq!(sub, g);
    }

    #[test]
    fn single_node() {
        let (sub, _) = induced_subgraph(&triangle(), &[2]).unwrap();
        assert_eq!((sub.node_count(), sub.edge_count()), (1, 0));
    }

    #[test]
    fn reordered_subset_keeps_weights() {
        let (sub, ids) = induced_subgraph(&triangle(), &[2, 0]).unwrap();
        sub.validate().unwrap();
        assert_eq!(sub.edge_weight(0, 1), Some(3.0));
        assert_eq!(ids.externals(), &[2, 0]);
    }

    #[test]
    fn out_of_range() {
        assert!(matches!(
            induced_subgraph(&triangle(), &[0, 3]),
            Err(Error::NodeOutOfRange { index: 3, .. })
        ));
    }
}
