use rand::seq::SliceRandom;

use crate::graph::WeightedGraph;
use crate::rng::seeded;

/// Heavy-edge matching with nodes visited in a seeded random order.
///
/// Each still-unmatched node pairs with the unmatched neighbor behind its
/// heaviest edge (smallest index on equal weight). Pairs are `(lo, hi)`,
/// sorted.
pub fn heavy_edge_matching(g: &WeightedGraph, seed: u64) -> Vec<(usize, usize)> {
    let mate = match_in_order(g, &visit_order(g.node_count(), seed), None);
    pairs_of(&mate)
}

/// Matching produced by an explicit visiting order.
pub fn heavy_edge_matching_with_order(g: &WeightedGraph, order: &[usize]) -> Vec<(usize, usize)> {
    pairs_of(&match_in_order(g, order, None))
}

pub(crate) fn visit_order(n: usize, seed: u64) -> Vec<usize> {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut seeded(seed));
    order
}

/// `mate[v]` is `v`'s partner, or `v` itself when unmatched.
///
/// With `value_cap`, pairs whose combined node value would exceed it are skipped.
pub(crate) fn match_in_order(
    g: &WeightedGraph,
    order: &[usize],
    value_cap: Option<u64>,
) -> Vec<usize> {
    let n = g.node_count();
    let mut mate = vec![usize::MAX; n];
    for &v in order {
        if mate[v] != usize::MAX {
            continue;
        }
        let mut best: Option<(usize, f64)> = None;
        for (u, w) in g.neighbors(v) {
            if mate[u] != usize::MAX {
                continue;
            }
            if let Some(cap) = value_cap {
                if g.node_value(u) + g.node_value(v) > cap {
                    continue;
                }
            }
            if best.is_none_or(|(_, bw)| w > bw) {
                best = Some((u, w));
            }
        }
        match best {
            Some((u, _)) => {
                mate[v] = u;
                mate[u] = v;
            }
            None => mate[v] = v,
        }
    }
    mate
}

fn pairs_of(mate: &[usize]) -> Vec<(usize, usize)> {
    mate.iter()
        .enumerate()
        .filter(|&(v, &u)| v < u)
        .map(|(v, &u)| (v, u))
        .collect()
}
