//! Seeded synthetic graph generators.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;

use super::WeightedGraph;
use crate::error::{Error, Result};
use crate::partition::PartitionMap;
use crate::rng::seeded;

#[derive(Clone, Debug, PartialEq)]
pub enum Model {
    /// `blocks` groups of `block_size` nodes; pairs connect with `p_in` inside a
    /// block and `p_out` across blocks. Unit weights.
    PlantedPartition { blocks: usize, block_size: usize, p_in: f64, p_out: f64 },
    /// Every left node joined to every right node. Unit weights.
    CompleteBipartite { left: usize, right: usize },
    /// Cycle over `n` nodes. Unit weights.
    Ring { n: usize },
    /// `m` distinct uniformly chosen pairs with weights uniform in `[low, high]`.
    RandomWeighted { n: usize, m: usize, low: f64, high: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorSpec {
    pub model: Model,
    pub seed: u64,
}

/// A generated graph, with its planted blocks when the model has them.
#[derive(Clone, Debug)]
pub struct Generated {
    pub graph: WeightedGraph,
    pub truth: Option<PartitionMap>,
}

impl Model {
    fn check(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidParameter(m.to_string()));
        let prob = |p: f64| (0.0..=1.0).contains(&p);
        match *self {
            Model::PlantedPartition { blocks, block_size, p_in, p_out } => {
                if blocks == 0 || block_size == 0 {
                    return bad("planted_partition needs blocks >= 1 and block_size >= 1");
                }
                if !prob(p_in) || !prob(p_out) {
                    return bad("planted_partition probabilities must lie in [0, 1]");
                }
            }
            Model::CompleteBipartite { left, right } => {
                if left == 0 || right == 0 {
                    return bad("complete_bipartite sides must be >= 1");
                }
            }
            Model::Ring { n } => {
                if n == 0 {
                    return bad("ring needs n >= 1");
                }
            }
            Model::RandomWeighted { n, m, low, high } => {
                if n == 0 {
                    return bad("random_weighted needs n >= 1");
                }
                let pairs = n as u128 * (n as u128 - 1) / 2;
                if m as u128 > pairs {
                    return bad("random_weighted asks for more edges than node pairs");
                }
                if !(low.is_finite() && high.is_finite() && low > 0.0 && low <= high) {
                    return bad("random_weighted needs 0 < low <= high");
                }
            }
        }
        Ok(())
    }
}

pub fn generate(spec: &GeneratorSpec) -> Result<Generated> {
    spec.model.check()?;
    let mut rng = seeded(spec.seed);
    let out = match spec.model {
        Model::PlantedPartition { blocks, block_size, p_in, p_out } => {
            let n = blocks * block_size;
            let mut edges = Vec::new();
            for i in 0..n {
                for j in i + 1..n {
                    let p = if i / block_size == j / block_size { p_in } else { p_out };
                    if rng.gen::<f64>() < p {
                        edges.push((i, j, 1.0));
                    }
                }
            }
            let truth = PartitionMap::new((0..n).map(|v| v / block_size).collect(), blocks)?;
            Generated {
                graph: WeightedGraph::from_sorted_unique(n, &edges, vec![1; n]),
                truth: Some(truth),
            }
        }
        Model::CompleteBipartite { left, right } => {
            let n = left + right;
            let edges: Vec<_> = (0..left)
                .flat_map(|i| (left..n).map(move |j| (i, j, 1.0)))
                .collect();
            let truth = PartitionMap::new((0..n).map(|v| usize::from(v >= left)).collect(), 2)?;
            Generated {
                graph: WeightedGraph::from_sorted_unique(n, &edges, vec![1; n]),
                truth: Some(truth),
            }
        }
        Model::Ring { n } => {
            let edges = (0..n).map(|i| (i, (i + 1) % n, 1.0)).collect::<Vec<_>>();
            Generated { graph: WeightedGraph::from_edges(n, edges)?, truth: None }
        }
        Model::RandomWeighted { n, m, low, high } => {
            let pairs = n * (n - 1) / 2;
            let chosen: Vec<(usize, usize)> = if m * 2 > pairs {
                let mut all: Vec<(usize, usize)> =
                    (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
                all.partial_shuffle(&mut rng, m);
                all.truncate(m);
                all
            } else {
                let mut seen = HashSet::with_capacity(m);
                let mut out = Vec::with_capacity(m);
                while out.len() < m {
                    let a = rng.gen_range(0..n);
                    let b = rng.gen_range(0..n);
                    if a == b {
                        continue;
                    }
                    let key = (a.min(b), a.max(b));
                    if seen.insert(key) {
                        out.push(key);
                    }
                }
                out
            };
            let edges = chosen
                .into_iter()
                .map(|(a, b)| (a, b, rng.gen_range(low..=high)))
                .collect();
            Generated { graph: WeightedGraph::from_canonical(n, edges, vec![1; n]), truth: None }
        }
    };
    Ok(out)
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Model::PlantedPartition { blocks, block_size, p_in, p_out } => {
                write!(f, "planted_partition({blocks},{block_size},{p_in},{p_out})")
            }
            Model::CompleteBipartite { left, right } => write!(f, "complete_bipartite({left},{right})"),
            Model::Ring { n } => write!(f, "ring({n})"),
            Model::RandomWeighted { n, m, low, high } => {
                write!(f, "random_weighted({n},{m},{low},{high})")
            }
        }
    }
}

impl FromStr for Model {
    type Err = Error;

    /// Parses `name(arg, ...)`, e.g. `planted_partition(2,50,1.0,0.0)`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("cannot parse model {s:?}"));
        let s = s.trim();
        let open = s.find('(').ok_or_else(bad)?;
        let inner = s[open + 1..].strip_suffix(')').ok_or_else(bad)?;
        let args: Vec<&str> = inner.split(',').map(str::trim).collect();
        let int = |i: usize| -> Result<usize> { args[i].parse().map_err(|_| bad()) };
        let real = |i: usize| -> Result<f64> { args[i].parse().map_err(|_| bad()) };
        let arity = |k: usize| if args.len() == k { Ok(()) } else { Err(bad()) };
        let model = match s[..open].trim() {
            "planted_partition" => {
                arity(4)?;
                Model::PlantedPartition { blocks: int(0)?, block_size: int(1)?, p_in: real(2)?, p_out: real(3)? }
            }
            "complete_bipartite" => {
                arity(2)?;
                Model::CompleteBipartite { left: int(0)?, right: int(1)? }
            }
            "ring" => {
                arity(1)?;
                Model::Ring { n: int(0)? }
            }
            "random_weighted" => {
                arity(4)?;
                Model::RandomWeighted { n: int(0)?, m: int(1)?, low: real(2)?, high: real(3)? }
            }
            _ => return Err(bad()),
        };
        model.check()?;
        Ok(model)
    }
}
