mod common;

use lpmetis::augment::{pagerank, PagerankParams};
use lpmetis::graph::{generate, load_edge_list, write_edge_list, GeneratorSpec, Model};
use lpmetis::label_prop::multilevel_lp;
use lpmetis::metrics::edge_cut;
use lpmetis::{
    coarsen, export_coarse, lpmetis, lpmetis_run, sample_subgraphs, CoarsenMode, IdMap, LpParams,
    LpmetisConfig, PartitionMap, WeightedGraph,
};
use rand::Rng;

fn in_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap().install(f)
}

#[test]
fn results_do_not_depend_on_thread_count() {
    let g = generate(&GeneratorSpec {
        model: Model::RandomWeighted { n: 3000, m: 20000, low: 0.1, high: 5.0 },
        seed: 3,
    })
    .unwrap()
    .graph;
    let cfg = LpmetisConfig::new(16);
    let run = || {
        let parts = lpmetis(&g, &cfg).unwrap();
        let lp = multilevel_lp(&g, &LpParams::default()).unwrap();
        let pr = pagerank(&g, &PagerankParams::default()).unwrap();
        let cg = coarsen(&lp, CoarsenMode::Edge, &g).unwrap();
        (parts, lp, pr, cg)
    };
    let one = in_pool(1, run);
    for threads in [2, 4, 8] {
        let many = in_pool(threads, run);
        assert_eq!(one.0, many.0, "{threads} threads");
        assert_eq!(one.1, many.1);
        assert_eq!(one.2, many.2);
        assert_eq!(one.3, many.3);
    }
}

#[test]
fn level_maps_compose_to_the_reported_parts() {
    for seed in 0..15u64 {
        let mut r = common::rng(seed);
        let n = r.gen_range(50..=1000);
        let m = r.gen_range(n..=n * 5);
        let g = generate(&GeneratorSpec { model: Model::RandomWeighted { n, m, low: 0.5, high: 2.0 }, seed })
            .unwrap()
            .graph;
        let k = r.gen_range(1..=12);
        let out = lpmetis_run(&g, &LpmetisConfig::new(k)).unwrap();
        assert_eq!(out.partition.part_count(), k);
        assert!(out.partition.is_surjective());
        if out.is_traceable() {
            for v in 0..n {
                assert_eq!(out.trace(v), out.partition.part_of(v), "seed {seed} node {v}");
            }
        } else {
            // Fallback splits refine the last community map.
            let communities = out.levels.iter().skip(1).try_fold(out.levels[0].clone(), |a, l| a.compose(l)).unwrap();
            for v in 0..n {
                for u in 0..n {
                    if out.partition.part_of(u) == out.partition.part_of(v) {
                        assert_eq!(communities.part_of(u), communities.part_of(v));
                    }
                }
            }
        }
    }
}

#[test]
fn disjoint_cliques_give_zero_cut() {
    let g = generate(&GeneratorSpec {
        model: Model::PlantedPartition { blocks: 2, block_size: 50, p_in: 1.0, p_out: 0.0 },
        seed: 42,
    })
    .unwrap()
    .graph;
    let p = lpmetis(&g, &LpmetisConfig::new(2)).unwrap();
    assert_eq!(edge_cut(&g, &p).unwrap(), 0.0);
    assert_eq!(p.part_sizes(), vec![50, 50]);
}

#[test]
fn edge_list_round_trip() {
    for seed in 0..10u64 {
        let (_, _, g) = common::instance(seed, 40, true);
        // Isolated nodes cannot be expressed in an edge list.
        if (0..g.node_count()).any(|v| g.degree(v) == 0) {
            continue;
        }
        let ids = IdMap::from_external((0..g.node_count() as u64).map(|v| v * 7 + 3).collect()).unwrap();
        let mut buf = Vec::new();
        write_edge_list(&g, &ids, &mut buf).unwrap();
        let (back, back_ids, _) = load_edge_list(buf.as_slice(), true).unwrap();
        assert_eq!(back.edge_count(), g.edge_count());
        for (a, b, w) in g.edges() {
            let (x, y) = (
                back_ids.index_of(ids.external_of(a)).unwrap(),
                back_ids.index_of(ids.external_of(b)).unwrap(),
            );
            assert_eq!(back.edge_weight(x, y), Some(w));
        }
    }
}

#[test]
fn sampling_contract() {
    let parts = PartitionMap::from_assignment((0..50).collect());
    let a = sample_subgraphs(&parts, 0.1, 42).unwrap();
    assert_eq!(a.len(), 5);
    assert!(a.windows(2).all(|w| w[0] < w[1]) && a.iter().all(|&p| p < 50));
    assert_eq!(a, sample_subgraphs(&parts, 0.1, 42).unwrap());
    assert_eq!(sample_subgraphs(&parts, 0.05, 42).unwrap().len(), 3);
}

#[test]
fn export_conserves_mass() {
    for seed in 0..10u64 {
        let (n, edges, g) = common::instance(seed, 64, true);
        let k = common::rng(seed).gen_range(1..=n);
        let parts = common::random_partition(&mut common::rng(seed + 5), n, k);
        let cg = export_coarse(&g, &parts).unwrap();
        let total: f64 = edges.values().sum();
        assert!((cg.total_mass() - total).abs() <= 1e-9 * total.max(1.0));
        assert_eq!(cg.graph.total_node_value(), n as u64);
    }
    let single = export_coarse(&WeightedGraph::edgeless(3), &PartitionMap::single(3)).unwrap();
    assert_eq!(single.node_count(), 1);
}
