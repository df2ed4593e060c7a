//! Graph partitioning with LPMetis. Edge-pruned weighted label propagation
//! shrinks a large graph to a coarse graph of communities; a balanced
//! multilevel bisection then splits that into k parts, which map back to the
//! original nodes.
//!
//! ```
//! use lpmetis::{lpmetis, LpmetisConfig, WeightedGraph};
//!
//! let g = WeightedGraph::from_edges(6, [
//!     (0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0),
//!     (3, 4, 1.0), (4, 5, 1.0), (3, 5, 1.0),
//!     (2, 3, 0.1),
//! ]).unwrap();
//! let parts = lpmetis(&g, &LpmetisConfig::new(2)).unwrap();
//! assert_eq!(parts.part_count(), 2);
//! ```
//!
//! With the default `parallel` feature the hot loops run on rayon; every
//! parallel step collects in index order, so output is identical for any
//! thread count and for the sequential build.

pub mod augment;
pub mod coarsen;
mod error;
pub mod graph;
pub mod kway;
pub mod label_prop;
pub mod metrics;
pub mod par;
mod partition;
pub mod pipeline;
pub mod rng;

pub use coarsen::{coarsen, CoarseGraph, CoarsenMode};
pub use error::{Error, Result};
pub use graph::{IdMap, WeightedGraph};
pub use kway::{kway_partition, BisectConfig, KwayResult};
pub use label_prop::{edge_retention, multilevel_lp, vote_update, LabelState, LpParams};
pub use partition::PartitionMap;
pub use pipeline::{export_coarse, lpmetis, lpmetis_run, sample_subgraphs, LpmetisConfig};
