//! Subgraph augmentation: PageRank-based structure refinement and
//! part-level feature aggregation/concatenation.

mod features;
mod pagerank;
mod refine;

pub use features::{aggregate_features, concat_global, Aggregation, FeatureTable};
pub use pagerank::{pagerank, PagerankParams};
pub use refine::{refine_structure, removal_order, RefineMode};
pub(crate) use refine::ceil_count;
