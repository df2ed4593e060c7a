mod common;

use lpmetis::augment::{pagerank, refine_structure, PagerankParams, RefineMode};
use lpmetis::WeightedGraph;

/// Dense power iteration with an explicit transition matrix.
fn dense_pagerank(n: usize, edges: &[(usize, usize)], alpha: f64) -> Vec<f64> {
    let mut adj = vec![vec![0.0; n]; n];
    for &(a, b) in edges {
        adj[a][b] = 1.0;
        adj[b][a] = 1.0;
    }
    let deg: Vec<f64> = adj.iter().map(|row| row.iter().sum()).collect();
    let mut m = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            let walk = if deg[j] > 0.0 { adj[i][j] / deg[j] } else { 1.0 / n as f64 };
            m[i][j] = alpha * walk + (1.0 - alpha) / n as f64;
        }
    }
    let mut x = vec![1.0 / n as f64; n];
    for _ in 0..10_000 {
        let y: Vec<f64> = (0..n).map(|i| (0..n).map(|j| m[i][j] * x[j]).sum()).collect();
        let diff: f64 = y.iter().zip(&x).map(|(a, b)| (a - b).abs()).sum();
        x = y;
        if diff < 1e-15 {
            break;
        }
    }
    x
}

#[test]
fn path_matches_dense_oracle() {
    for n in [2usize, 3, 5, 8, 13] {
        let edges: Vec<(usize, usize)> = (0..n - 1).map(|i| (i, i + 1)).collect();
        let g = WeightedGraph::from_edges(n, edges.iter().map(|&(a, b)| (a, b, 1.0))).unwrap();
        let got = pagerank(&g, &PagerankParams::default()).unwrap();
        let want = dense_pagerank(n, &edges, 0.85);
        for (a, b) in got.iter().zip(&want) {
            assert!((a - b).abs() < 1e-9, "n {n}: {a} vs {b}");
        }
        if n == 3 {
            assert!(got[1] > got[0] && got[1] > got[2]);
        }
    }
}

#[test]
fn random_graphs_match_oracle_and_sum_to_one() {
    for seed in 0..20u64 {
        let (n, edges, g) = common::instance(seed, 40, true);
        let pairs: Vec<(usize, usize)> = edges.keys().copied().collect();
        let p = PagerankParams::default();
        let got = pagerank(&g, &p).unwrap();
        let want = dense_pagerank(n, &pairs, p.alpha);
        assert!((got.iter().sum::<f64>() - 1.0).abs() <= 1e-9);
        for (a, b) in got.iter().zip(&want) {
            assert!((a - b).abs() < 1e-9, "seed {seed}");
            assert!(*a >= (1.0 - p.alpha) / n as f64 - 1e-12);
        }
    }
}

#[test]
fn unique_pendant_is_the_one_removed() {
    // 19-node ring plus one pendant hanging off node 0.
    let mut edges: Vec<(usize, usize, f64)> = (0..19).map(|i| (i, (i + 1) % 19, 1.0)).collect();
    edges.push((0, 19, 1.0));
    let g = WeightedGraph::from_edges(20, edges).unwrap();
    let p = PagerankParams::default();
    let scores = pagerank(&g, &p).unwrap();
    let min = (0..20).min_by(|&a, &b| scores[a].total_cmp(&scores[b])).unwrap();
    assert_eq!(min, 19);
    let (refined, ids) = refine_structure(&g, 0.05, RefineMode::Nodes, &p).unwrap();
    assert_eq!(refined.node_count(), 19);
    assert!(ids.index_of(19).is_none());
}

#[test]
fn removed_nodes_score_no_higher_than_survivors() {
    for seed in 0..20u64 {
        let (n, _, g) = common::instance(seed + 77, 60, false);
        let p = PagerankParams::default();
        let scores = pagerank(&g, &p).unwrap();
        for fraction in [0.05, 0.2, 0.5] {
            let (refined, ids) = refine_structure(&g, fraction, RefineMode::Nodes, &p).unwrap();
            let removed = (fraction * n as f64 - 1e-9).ceil() as usize;
            assert_eq!(n - refined.node_count(), removed, "seed {seed} fraction {fraction}");
            let kept: Vec<usize> = ids.externals().iter().map(|&v| v as usize).collect();
            let gone: Vec<usize> = (0..n).filter(|v| !kept.contains(v)).collect();
            let max_gone = gone.iter().map(|&v| scores[v]).fold(f64::NEG_INFINITY, f64::max);
            assert!(kept.iter().all(|&v| scores[v] >= max_gone));
        }
    }
}
