//! Large induced d-degenerate subgraphs of k-degenerate graphs.
//!
//! The crate covers graph6 I/O and smallest-last orderings, the blue/red
//! colouring partition with checkable certificates, an exact bitset
//! branch-and-bound for `alpha_d`, closed-form bounds in exact rational
//! arithmetic, and extremal-ratio search over graph corpora.

pub mod bounds;
pub mod corpus;
pub mod exact;
pub mod fixtures;
pub mod graph;
pub mod graph6;
pub mod ordering;
pub mod partition;
pub mod rational;
pub mod search;

pub use crate::bounds::{aks_bound, theorem1_bound, theorem2_bound, BoundReport, BoundsError};
pub use crate::exact::{
    alpha_brute, alpha_exact, alpha_profile, AlphaResult, CancelToken, ExactError,
};
pub use crate::graph::{girth, has_triangle, Girth, Graph, GraphError};
pub use crate::graph6::{parse_graph6, write_graph6, Graph6Error};
pub use crate::ordering::{degeneracy, degeneracy_ordering, is_d_degenerate, VertexOrdering};
pub use crate::partition::{colour_forward, partition_theorem, verify_partition, Partition};
pub use crate::rational::Rational;
pub use crate::search::{conjecture_report, evolve, scan_stream, EvolveConfig, ExtremalRecord};
