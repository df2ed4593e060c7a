mod common;

use std::collections::{BTreeMap, BTreeSet};

use lpmetis::label_prop::{edge_retention, multilevel_lp, plain_lpa, vote_update, LabelState, LpParams};
use lpmetis::rng::edge_uniform;
use lpmetis::WeightedGraph;
use rand::seq::SliceRandom;
use rand::Rng;

fn arcs_kept(g: &WeightedGraph) -> BTreeSet<(usize, usize)> {
    g.edges().map(|(a, b, _)| (a, b)).collect()
}

#[test]
fn retention_without_random_keep_matches_endpoint_enumeration() {
    for seed in 0..50u64 {
        let (n, edges, g) = common::instance(seed, 40, true);
        let p_ratio = common::rng(seed).gen_range(0.05..0.9);
        let params = LpParams { p_ratio, p_bound: 0.0, ..LpParams::default() };
        let mut strength = vec![0.0; n];
        for (&(a, b), &w) in &edges {
            strength[a] += w;
            strength[b] += w;
        }
        let expected: BTreeSet<(usize, usize)> = edges
            .iter()
            .filter(|(&(a, b), &w)| w / strength[a] >= p_ratio || w / strength[b] >= p_ratio)
            .map(|(&e, _)| e)
            .collect();
        let pruned = edge_retention(&g, &params, 0);
        pruned.validate().unwrap();
        assert_eq!(arcs_kept(&pruned), expected, "seed {seed}");
    }
}

#[test]
fn random_keep_uses_the_documented_draw() {
    for seed in 0..20u64 {
        let (n, edges, g) = common::instance(seed, 30, true);
        let params = LpParams { p_ratio: 1.0, p_bound: 0.3, seed, ..LpParams::default() };
        let mut strength = vec![0.0; n];
        for (&(a, b), &w) in &edges {
            strength[a] += w;
            strength[b] += w;
        }
        for it in 0..3 {
            let expected: BTreeSet<(usize, usize)> = edges
                .iter()
                .filter(|(&(a, b), &w)| {
                    w / strength[a] >= 1.0 || w / strength[b] >= 1.0 || edge_uniform(seed, it, a, b) < 0.3
                })
                .map(|(&e, _)| e)
                .collect();
            assert_eq!(arcs_kept(&edge_retention(&g, &params, it as usize)), expected);
        }
    }
}

/// Node-at-a-time vote over an arbitrary visiting order, reading only the snapshot.
fn reference_vote(g: &WeightedGraph, labels: &[usize], order: &[usize]) -> Vec<usize> {
    let mut out = vec![usize::MAX; labels.len()];
    for &i in order {
        let mut score: BTreeMap<usize, f64> = BTreeMap::new();
        for (m, w) in g.neighbors(i) {
            *score.entry(labels[m]).or_default() += w / g.node_value(m) as f64;
        }
        out[i] = if score.is_empty() {
            labels[i]
        } else {
            let best = score.values().cloned().fold(f64::NEG_INFINITY, f64::max);
            if score.get(&labels[i]) == Some(&best) {
                labels[i]
            } else {
                *score.iter().find(|(_, &s)| s == best).unwrap().0
            }
        };
    }
    out
}

#[test]
fn vote_matches_reference_in_any_visiting_order() {
    for seed in 0..50u64 {
        let (n, _, g) = common::instance(seed, 50, seed % 2 == 0);
        let mut r = common::rng(seed);
        // Small integer weights force exact ties through the tie rule.
        let g = if seed % 2 == 1 {
            let values: Vec<u64> = (0..n).map(|_| r.gen_range(1..4)).collect();
            g.with_node_values(values).unwrap()
        } else {
            g
        };
        let labels: Vec<usize> = (0..n).map(|_| r.gen_range(0..n.min(6))).collect();
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut r);
        let got = vote_update(&g, &LabelState::from_labels(labels.clone())).labels;
        assert_eq!(got, reference_vote(&g, &labels, &order), "seed {seed}");
    }
}

#[test]
fn plain_lpa_on_complete_bipartite_oscillates() {
    let edges = (0..8).flat_map(|i| (8..16).map(move |j| (i, j, 1.0)));
    let g = WeightedGraph::from_edges(16, edges).unwrap();
    let init: Vec<usize> = (0..16).map(|i| if i < 8 { 0 } else { 1 }).collect();
    let rounds = plain_lpa(&g, LabelState::from_labels(init.clone()), 12);
    let flipped: Vec<usize> = init.iter().map(|&l| 1 - l).collect();
    for (t, labels) in rounds.iter().enumerate() {
        let expect = if t % 2 == 0 { &flipped } else { &init };
        assert_eq!(labels, expect, "round {t}");
    }
}

#[test]
fn disjoint_triangles_stay_separate() {
    let g = WeightedGraph::from_edges(
        6,
        [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0), (3, 4, 1.0), (4, 5, 1.0), (3, 5, 1.0)],
    )
    .unwrap();
    let p = multilevel_lp(&g, &LpParams { p_bound: 0.0, ..LpParams::default() }).unwrap();
    assert_eq!(p.part_count(), 2);
    assert_eq!(p.part_of(0), p.part_of(2));
    assert_ne!(p.part_of(0), p.part_of(3));
}

#[test]
fn communities_never_span_components() {
    for seed in 0..30u64 {
        let (n, edges, g) = common::instance(seed, 60, true);
        let mut comp: Vec<usize> = (0..n).collect();
        fn find(c: &mut [usize], x: usize) -> usize {
            if c[x] != x {
                let r = find(c, c[x]);
                c[x] = r;
            }
            c[x]
        }
        for &(a, b) in edges.keys() {
            let (ra, rb) = (find(&mut comp, a), find(&mut comp, b));
            comp[ra] = rb;
        }
        let p = multilevel_lp(&g, &LpParams { seed, ..LpParams::default() }).unwrap();
        assert!(p.part_count() <= n);
        for v in 0..n {
            for u in 0..n {
                if p.part_of(u) == p.part_of(v) {
                    assert_eq!(find(&mut comp, u), find(&mut comp, v), "seed {seed}");
                }
            }
        }
    }
}
