#![allow(dead_code)]

use std::collections::BTreeMap;

use lpmetis::{PartitionMap, WeightedGraph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random simple graph on `n` nodes as a canonical `(lo, hi) -> weight` map.
pub fn random_edges(rng: &mut ChaCha8Rng, n: usize, density: f64, weighted: bool) -> BTreeMap<(usize, usize), f64> {
    let mut edges = BTreeMap::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(density) {
                let w = if weighted { rng.gen_range(0.05..2.0) } else { 1.0 };
                edges.insert((a, b), w);
            }
        }
    }
    edges
}

pub fn build(n: usize, edges: &BTreeMap<(usize, usize), f64>) -> WeightedGraph {
    WeightedGraph::from_edges(n, edges.iter().map(|(&(a, b), &w)| (a, b, w))).unwrap()
}

/// Random instance: `(n, edge map, graph)` with 2..=max_n nodes.
pub fn instance(seed: u64, max_n: usize, weighted: bool) -> (usize, BTreeMap<(usize, usize), f64>, WeightedGraph) {
    let mut r = rng(seed);
    let n = r.gen_range(2..=max_n);
    let density = r.gen_range(0.05..0.6);
    let edges = random_edges(&mut r, n, density, weighted);
    let g = build(n, &edges);
    (n, edges, g)
}

/// Random assignment into `k` parts with every part used.
pub fn random_partition(rng: &mut ChaCha8Rng, n: usize, k: usize) -> PartitionMap {
    assert!(k <= n);
    let mut a: Vec<usize> = (0..n).map(|i| if i < k { i } else { rng.gen_range(0..k) }).collect();
    for i in (1..n).rev() {
        a.swap(i, rng.gen_range(0..=i));
    }
    PartitionMap::new(a, k).unwrap()
}
