//! End-to-end LPMetis: alternating label propagation and coarsening, then a
//! balanced k-way split of the final coarse graph mapped back to the
//! original nodes.

use std::borrow::Cow;
use std::collections::{BTreeMap, BinaryHeap};
use std::time::{Duration, Instant};

use rand::seq::index::sample;
use serde::{Deserialize, Serialize};

use crate::augment::ceil_count;
use crate::coarsen::{coarsen, coarsen_with_values, CoarseGraph, CoarsenMode};
use crate::error::{Error, Result};
use crate::graph::{induced_local, WeightedGraph};
use crate::kway::{kway_partition, partition_graph, BisectConfig};
use crate::label_prop::{multilevel_lp, LpParams};
use crate::partition::PartitionMap;
use crate::rng::{derive_seed, seeded};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LpmetisConfig {
    pub k: usize,
    pub lp: LpParams,
    /// Number of {label propagation, coarsening} levels.
    pub outer_t: usize,
    pub bisect: BisectConfig,
    /// Parts with fewer original nodes than this trigger a warning.
    pub min_subgraph_warn: usize,
}

impl LpmetisConfig {
    pub fn new(k: usize) -> Self {
        Self {
            k,
            lp: LpParams::default(),
            outer_t: 2,
            bisect: BisectConfig::default(),
            min_subgraph_warn: 30_000,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::InvalidParameter("k must be >= 1".into()));
        }
        if self.outer_t == 0 {
            return Err(Error::InvalidParameter("outer_t must be >= 1".into()));
        }
        self.lp.validate()?;
        self.bisect.validate()
    }
}

/// Size of the graph entering one label-propagation level.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelStats {
    pub nodes: usize,
    pub edges: usize,
    /// Communities found by label propagation on this level.
    pub communities: usize,
}

/// A community split during the too-few-communities fallback.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FallbackSplit {
    pub community: usize,
    pub nodes: usize,
    pub pieces: usize,
}

#[derive(Clone, Debug)]
pub struct LpmetisOutcome {
    pub partition: PartitionMap,
    /// `levels[l]` maps the nodes of level `l` onto the nodes of level `l + 1`.
    /// When the k-way step ran, the last entry maps the final coarse graph
    /// onto the `k` parts; after a fallback the levels end at the communities
    /// and `fallback` describes how they were split.
    pub levels: Vec<PartitionMap>,
    pub level_stats: Vec<LevelStats>,
    pub fallback: Vec<FallbackSplit>,
    /// `(part, nodes)` for every part below `min_subgraph_warn`.
    pub small_parts: Vec<(usize, usize)>,
    pub timings: Vec<(String, Duration)>,
    /// Cut weight of the k-way step measured on the final coarse graph.
    pub coarse_cut: f64,
}

impl LpmetisOutcome {
    /// Follows every level map from original node `v`.
    pub fn trace(&self, v: usize) -> usize {
        self.levels.iter().fold(v, |x, level| level.part_of(x))
    }

    /// Whether the level maps alone determine the final part of every node.
    pub fn is_traceable(&self) -> bool {
        self.fallback.is_empty()
    }
}

/// Partitions `g` into exactly `cfg.k` non-empty parts.
pub fn lpmetis(g: &WeightedGraph, cfg: &LpmetisConfig) -> Result<PartitionMap> {
    Ok(lpmetis_run(g, cfg)?.partition)
}

pub fn lpmetis_run(g: &WeightedGraph, cfg: &LpmetisConfig) -> Result<LpmetisOutcome> {
    cfg.validate()?;
    let n = g.node_count();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    if cfg.k > n {
        return Err(Error::Infeasible { requested: cfg.k, available: n });
    }

    let mut timings = Vec::new();
    let mut levels = Vec::new();
    let mut level_stats = Vec::new();
    let mut working = Cow::Borrowed(g);
    // Original node mass carried by each node of the working graph.
    let mut mass: Vec<u64> = g.node_values().to_vec();
    let mut coarse: Option<CoarseGraph> = None;

    for level in 0..cfg.outer_t {
        let lp = LpParams { seed: derive_seed(cfg.lp.seed, level as u64), ..cfg.lp.clone() };
        let start = Instant::now();
        let parts = multilevel_lp(&working, &lp)?;
        timings.push((format!("lp_{level}"), start.elapsed()));
        level_stats.push(LevelStats {
            nodes: working.node_count(),
            edges: working.edge_count(),
            communities: parts.part_count(),
        });

        let start = Instant::now();
        let last = level + 1 == cfg.outer_t;
        let next = if last {
            coarsen_with_values(&parts, &working, Some(&mass))?
        } else {
            coarsen(&parts, CoarsenMode::Edge, &working)?
        };
        timings.push((format!("coarsen_{level}"), start.elapsed()));

        let mut next_mass = vec![0u64; parts.part_count()];
        for (v, &m) in mass.iter().enumerate() {
            next_mass[parts.part_of(v)] += m;
        }
        mass = next_mass;
        levels.push(parts);
        if last {
            coarse = Some(next);
        } else {
            working = Cow::Owned(next.graph);
        }
    }
    let coarse = coarse.expect("outer_t >= 1");
    let m = coarse.node_count();

    let start = Instant::now();
    let (partition, coarse_cut, fallback) = if m >= cfg.k {
        let result = kway_partition(&coarse, cfg.k, &cfg.bisect)?;
        if !result.balanced {
            log::warn!(
                "k-way step exceeded the balance bound: max part ratio {:.3} (epsilon {})",
                result.max_ratio,
                cfg.bisect.epsilon
            );
        }
        levels.push(result.parts);
        (compose_all(n, &levels)?, result.cut_weight, Vec::new())
    } else {
        log::warn!(
            "label propagation left {m} communities for k = {}; splitting the largest",
            cfg.k
        );
        let communities = compose_all(n, &levels)?;
        let (split, events) = split_largest(g, &communities, &mass, cfg.k, &cfg.bisect)?;
        (split, 0.0, events)
    };
    timings.push(("kway".to_string(), start.elapsed()));

    let mut small_parts = Vec::new();
    for (p, &size) in partition.part_sizes().iter().enumerate() {
        if size < cfg.min_subgraph_warn {
            log::warn!("part {p} has {size} nodes, below {}", cfg.min_subgraph_warn);
            small_parts.push((p, size));
        }
    }

    Ok(LpmetisOutcome { partition, levels, level_stats, fallback, small_parts, timings, coarse_cut })
}

fn compose_all(n: usize, levels: &[PartitionMap]) -> Result<PartitionMap> {
    levels
        .iter()
        .try_fold(PartitionMap::from_assignment((0..n).collect()), |acc, next| acc.compose(next))
}

#[derive(PartialEq, Eq)]
struct Piece {
    /// Community mass per piece, compared as `mass / pieces` via cross-multiplying.
    mass: u64,
    pieces: u64,
    community: usize,
}

impl Ord for Piece {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.mass as u128 * other.pieces as u128)
            .cmp(&(other.mass as u128 * self.pieces as u128))
            .then(other.community.cmp(&self.community))
    }
}

impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Hands out the `k - M` missing parts one at a time to the community whose
/// pieces are currently heaviest, then splits each chosen community by
/// k-way partitioning its induced original subgraph with unit node values.
fn split_largest(
    g: &WeightedGraph,
    communities: &PartitionMap,
    mass: &[u64],
    k: usize,
    cfg: &BisectConfig,
) -> Result<(PartitionMap, Vec<FallbackSplit>)> {
    let members = communities.members();
    let mut pieces = vec![1usize; members.len()];
    let mut heap: BinaryHeap<Piece> = members
        .iter()
        .enumerate()
        .filter(|(_, mem)| mem.len() > 1)
        .map(|(c, _)| Piece { mass: mass[c], pieces: 1, community: c })
        .collect();
    let mut missing = k - members.len();
    while missing > 0 {
        let top = heap.pop().expect("k <= node count leaves a splittable community");
        let c = top.community;
        pieces[c] += 1;
        missing -= 1;
        if pieces[c] < members[c].len() {
            heap.push(Piece { mass: top.mass, pieces: pieces[c] as u64, community: c });
        }
    }

    let mut assignment = vec![0usize; g.node_count()];
    let mut events = Vec::new();
    let mut next_part = 0;
    for (c, mem) in members.iter().enumerate() {
        if pieces[c] == 1 {
            for &v in mem {
                assignment[v] = next_part;
            }
        } else {
            let sub = induced_local(g, mem).with_node_values(vec![1; mem.len()])?;
            let local_cfg = BisectConfig { seed: derive_seed(cfg.seed, c as u64 + 1), ..cfg.clone() };
            let result = partition_graph(&sub, pieces[c], &local_cfg)?;
            for (i, &v) in mem.iter().enumerate() {
                assignment[v] = next_part + result.parts.part_of(i);
            }
            log::info!("split community {c} ({} nodes) into {} parts", mem.len(), pieces[c]);
            events.push(FallbackSplit { community: c, nodes: mem.len(), pieces: pieces[c] });
        }
        next_part += pieces[c];
    }
    Ok((PartitionMap::new(assignment, k)?, events))
}

/// `ceil(ratio * K)` distinct part ids drawn uniformly without replacement, ascending.
pub fn sample_subgraphs(parts: &PartitionMap, ratio: f64, seed: u64) -> Result<Vec<usize>> {
    if !(ratio > 0.0 && ratio <= 1.0) {
        return Err(Error::InvalidParameter("ratio must lie in (0, 1]".into()));
    }
    let k = parts.part_count();
    if k == 0 {
        return Err(Error::InvalidParameter("partition has no parts".into()));
    }
    let count = ceil_count(ratio, k).clamp(1, k);
    let mut ids = sample(&mut seeded(seed), k, count).into_vec();
    ids.sort_unstable();
    Ok(ids)
}

/// Node-mode coarse graph of `parts`, for consumers that embed the global structure.
pub fn export_coarse(g: &WeightedGraph, parts: &PartitionMap) -> Result<CoarseGraph> {
    coarsen(parts, CoarsenMode::Node, g)
}

/// JSON record of one `lpmetis` run.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunManifest {
    pub k: usize,
    pub p_ratio: f64,
    pub p_bound: f64,
    /// Label-propagation rounds per level.
    pub t: usize,
    pub outer_t: usize,
    pub epsilon: f64,
    pub seed: u64,
    pub config: LpmetisConfig,
    pub threads: usize,
    pub nodes: usize,
    pub edges: usize,
    pub level_stats: Vec<LevelStats>,
    pub final_coarse_nodes: usize,
    pub coarse_cut: f64,
    pub fallback: Vec<FallbackSplit>,
    pub small_parts: usize,
    pub timings_ms: BTreeMap<String, f64>,
}

impl RunManifest {
    pub fn new(g: &WeightedGraph, cfg: &LpmetisConfig, outcome: &LpmetisOutcome, threads: usize) -> Self {
        let final_coarse_nodes = if outcome.is_traceable() {
            outcome.levels.last().map_or(0, PartitionMap::node_count)
        } else {
            outcome.levels.last().map_or(0, PartitionMap::part_count)
        };
        Self {
            k: cfg.k,
            p_ratio: cfg.lp.p_ratio,
            p_bound: cfg.lp.p_bound,
            t: cfg.lp.t_iterations,
            outer_t: cfg.outer_t,
            epsilon: cfg.bisect.epsilon,
            seed: cfg.lp.seed,
            config: cfg.clone(),
            threads,
            nodes: g.node_count(),
            edges: g.edge_count(),
            level_stats: outcome.level_stats.clone(),
            final_coarse_nodes,
            coarse_cut: outcome.coarse_cut,
            fallback: outcome.fallback.clone(),
            small_parts: outcome.small_parts.len(),
            timings_ms: outcome
                .timings
                .iter()
                .map(|(name, d)| (name.clone(), d.as_secs_f64() * 1e3))
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest is always serializable")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::{edge_cut, std_dev};

    fn cliques(count: usize, size: usize) -> WeightedGraph {
        let mut edges = Vec::new();
        for c in 0..count {
            for a in 0..size {
                for b in a + 1..size {
                    edges.push((c * size + a, c * size + b, 1.0));
                }
            }
        }
        WeightedGraph::from_edges(count * size, edges).unwrap()
    }

    #[test]
    fn disjoint_cliques_are_recovered() {
        let g = cliques(4, 10);
        let p = lpmetis(&g, &LpmetisConfig::new(4)).unwrap();
        assert_eq!(p.part_count(), 4);
        assert_eq!(edge_cut(&g, &p).unwrap(), 0.0);
        assert_eq!(std_dev(&p, 4).unwrap(), 0.0);
    }

    #[test]
    fn single_part() {
        let g = cliques(3, 5);
        let p = lpmetis(&g, &LpmetisConfig::new(1)).unwrap();
        assert!(p.assignment().iter().all(|&x| x == 0));
    }

    #[test]
    fn errors() {
        let g = cliques(1, 3);
        assert!(matches!(lpmetis(&g, &LpmetisConfig::new(4)), Err(Error::Infeasible { .. })));
        assert!(matches!(lpmetis(&WeightedGraph::edgeless(0), &LpmetisConfig::new(1)), Err(Error::EmptyGraph)));
        assert!(lpmetis(&g, &LpmetisConfig { outer_t: 0, ..LpmetisConfig::new(1) }).is_err());
    }

    #[test]
    fn fallback_reaches_k() {
        // A clique collapses to fewer communities than requested parts.
        let g = cliques(1, 12);
        let out = lpmetis_run(&g, &LpmetisConfig::new(6)).unwrap();
        assert_eq!(out.partition.part_count(), 6);
        assert!(out.partition.is_surjective());
        assert!(!out.fallback.is_empty());
        let communities = out.level_stats.last().unwrap().communities;
        let added: usize = out.fallback.iter().map(|f| f.pieces - 1).sum();
        assert_eq!(communities + added, 6);
    }

    #[test]
    fn trace_matches_partition() {
        let g = cliques(5, 6);
        let out = lpmetis_run(&g, &LpmetisConfig::new(3)).unwrap();
        assert!(out.is_traceable());
        for v in 0..g.node_count() {
            assert_eq!(out.trace(v), out.partition.part_of(v));
        }
    }

    #[test]
    fn sampling() {
        let parts = PartitionMap::from_assignment((0..50).collect());
        let s = sample_subgraphs(&parts, 0.1, 42).unwrap();
        assert_eq!(s.len(), 5);
        assert_eq!(s, sample_subgraphs(&parts, 0.1, 42).unwrap());
        assert_eq!(sample_subgraphs(&parts, 1.0, 1).unwrap(), (0..50).collect::<Vec<_>>());
        assert_eq!(sample_subgraphs(&parts, 0.05, 1).unwrap().len(), 3);
        assert!(sample_subgraphs(&parts, 0.0, 1).is_err());
        assert!(sample_subgraphs(&parts, 1.5, 1).is_err());
    }

    #[test]
    fn export_sums_cross_edges() {
        let g = WeightedGraph::from_edges(4, [(0, 2, 0.3), (1, 3, 0.4), (0, 1, 1.0)]).unwrap();
        let cg = export_coarse(&g, &PartitionMap::from_assignment(vec![0, 0, 1, 1])).unwrap();
        assert!((cg.graph.edge_weight(0, 1).unwrap() - 0.7).abs() < 1e-12);
        assert_eq!(cg.graph.node_values(), &[2, 2]);
    }
}
