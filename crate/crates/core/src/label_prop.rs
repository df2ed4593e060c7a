//! Multi-level label propagation: weighted synchronous voting interleaved
//! with relative-weight edge pruning.
//!
//! A round first recomputes every label from the previous round's labels,
//! then prunes the working graph. An edge survives when its relative weight
//! `e_ij / sum_m e_im` reaches `p_ratio` from either endpoint, or when the
//! edge's uniform draw for that round falls below `p_bound`.

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::par;
use crate::partition::PartitionMap;
use crate::rng::edge_uniform;

/// Parameters of one label-propagation call.
#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct LpParams {
    /// Relative weight at which an edge is kept unconditionally.
    pub p_ratio: f64,
    /// Probability of keeping an edge that falls short of `p_ratio`.
    pub p_bound: f64,
    /// Number of vote/prune rounds.
    pub t_iterations: usize,
    pub seed: u64,
}

impl Default for LpParams {
    fn default() -> Self {
        Self { p_ratio: 0.5, p_bound: 0.1, t_iterations: 2, seed: 42 }
    }
}

impl LpParams {
    pub fn validate(&self) -> Result<()> {
        let unit = |x: f64| (0.0..=1.0).contains(&x);
        if !unit(self.p_ratio) || !unit(self.p_bound) {
            return Err(Error::InvalidParameter(
                "p_ratio and p_bound must lie in [0, 1]".into(),
            ));
        }
        if self.t_iterations == 0 {
            return Err(Error::InvalidParameter("t_iterations must be >= 1".into()));
        }
        Ok(())
    }
}

/// Community label per node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelState {
    pub labels: Vec<usize>,
    pub iteration: usize,
}

impl LabelState {
    /// Every node labelled with its own index.
    pub fn identity(n: usize) -> Self {
        Self { labels: (0..n).collect(), iteration: 0 }
    }

    pub fn from_labels(labels: Vec<usize>) -> Self {
        Self { labels, iteration: 0 }
    }
}

/// How neighbors score candidate labels.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VoteRule {
    /// Each neighbor `m` adds `e_im / v_m` to its label; ties keep the current
    /// label when it is among the maxima, otherwise take the smallest label.
    Weighted,
    /// Classic frequency vote: each neighbor adds 1; ties take the smallest
    /// label regardless of the current one.
    Plain,
}

/// Removes edges whose relative weight is zero under the retention rule.
///
/// `iteration` selects the round's random draws.
pub fn edge_retention(g: &WeightedGraph, params: &LpParams, iteration: usize) -> WeightedGraph {
    let strength = par::map_range(g.node_count(), |i| g.weighted_degree(i));
    let keep = |i: usize, j: usize, w: f64| {
        w / strength[i] >= params.p_ratio
            || w / strength[j] >= params.p_ratio
            || edge_uniform(params.seed, iteration as u64, i, j) < params.p_bound
    };
    let rows = par::map_range(g.node_count(), |i| {
        let (t, w) = g.row(i);
        let mut kt = Vec::new();
        let mut kw = Vec::new();
        for (&j, &wij) in t.iter().zip(w) {
            if keep(i, j, wij) {
                kt.push(j);
                kw.push(wij);
            }
        }
        (kt, kw)
    });
    WeightedGraph::from_rows(rows, g.node_values().to_vec())
}

/// One synchronous weighted vote.
pub fn vote_update(g: &WeightedGraph, state: &LabelState) -> LabelState {
    vote_update_with(g, state, VoteRule::Weighted)
}

/// One synchronous vote under `rule`; reads only `state`.
pub fn vote_update_with(g: &WeightedGraph, state: &LabelState, rule: VoteRule) -> LabelState {
    assert_eq!(state.labels.len(), g.node_count(), "label state does not match graph");
    let labels = par::map_range_with(g.node_count(), Vec::new, |scratch, i| {
        vote_one(g, &state.labels, i, rule, scratch)
    });
    LabelState { labels, iteration: state.iteration + 1 }
}

fn vote_one(
    g: &WeightedGraph,
    labels: &[usize],
    node: usize,
    rule: VoteRule,
    scratch: &mut Vec<(usize, f64)>,
) -> usize {
    let current = labels[node];
    let (targets, weights) = g.row(node);
    if targets.is_empty() {
        return current;
    }
    scratch.clear();
    scratch.extend(targets.iter().zip(weights).map(|(&m, &w)| {
        let score = match rule {
            VoteRule::Weighted => w / g.node_value(m) as f64,
            VoteRule::Plain => 1.0,
        };
        (labels[m], score)
    }));
    // Stable: equal labels keep adjacency order, fixing the summation order.
    scratch.sort_by_key(|&(l, _)| l);

    let mut best_label = usize::MAX;
    let mut best_score = f64::NEG_INFINITY;
    let mut current_score = f64::NEG_INFINITY;
    let mut k = 0;
    while k < scratch.len() {
        let label = scratch[k].0;
        let mut score = 0.0;
        while k < scratch.len() && scratch[k].0 == label {
            score += scratch[k].1;
            k += 1;
        }
        if label == current {
            current_score = score;
        }
        // Ascending label order: strict improvement keeps the smallest maximizer.
        if score > best_score {
            best_score = score;
            best_label = label;
        }
    }
    match rule {
        VoteRule::Weighted if current_score == best_score => current,
        _ => best_label,
    }
}

/// Labels after every round of a multi-level label propagation run.
#[derive(Clone, Debug)]
pub struct LpTrace {
    /// `rounds[t]` holds the labels produced by round `t`.
    pub rounds: Vec<Vec<usize>>,
    pub partition: PartitionMap,
    /// Edge count of the working graph entering each round.
    pub edges_per_round: Vec<usize>,
}

/// Runs `t_iterations` rounds of {vote, prune} from identity labels and
/// groups nodes by their final label. `g` itself is left untouched.
pub fn multilevel_lp(g: &WeightedGraph, params: &LpParams) -> Result<PartitionMap> {
    Ok(multilevel_lp_trace(g, params)?.partition)
}

pub fn multilevel_lp_trace(g: &WeightedGraph, params: &LpParams) -> Result<LpTrace> {
    params.validate()?;
    let mut state = LabelState::identity(g.node_count());
    let mut rounds = Vec::with_capacity(params.t_iterations);
    let mut edges_per_round = Vec::with_capacity(params.t_iterations);
    let mut working = std::borrow::Cow::Borrowed(g);
    for t in 0..params.t_iterations {
        edges_per_round.push(working.edge_count());
        state = vote_update(&working, &state);
        rounds.push(state.labels.clone());
        // The final pruning cannot influence any label, so it is skipped.
        if t + 1 < params.t_iterations {
            working = std::borrow::Cow::Owned(edge_retention(&working, params, t));
        }
    }
    let partition = PartitionMap::from_labels(&state.labels);
    Ok(LpTrace { rounds, partition, edges_per_round })
}

/// Classic synchronous label propagation without pruning, from `init`.
///
/// Returns the label vector after each of `rounds` rounds.
pub fn plain_lpa(g: &WeightedGraph, init: LabelState, rounds: usize) -> Vec<Vec<usize>> {
    let mut state = init;
    (0..rounds)
        .map(|_| {
            state = vote_update_with(g, &state, VoteRule::Plain);
            state.labels.clone()
        })
        .collect()
}
