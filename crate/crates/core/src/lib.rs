//! Tree decompositions by nested dissection with flow-based balanced
//! separators, plus greedy elimination orders, contraction hierarchies and
//! the PACE text formats.
//!
//! ```
//! use flowtd::{nested_dissection, partition_to_td, validate_td, CutterConfig, Graph, SeparatorMode};
//! use flowtd::elimination::{min_fill_order, order_to_td};
//!
//! # fn main() -> Result<(), Box<dyn std::error::Error>> {
//! let g = Graph::from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]);
//!
//! let cfg = CutterConfig::new(4, 0.2, 7, SeparatorMode::NodeCapacities)?;
//! let td = partition_to_td(&nested_dissection(&g, &cfg)?)?;
//! validate_td(&g, &td)?;
//! assert_eq!(td.width(), 2);
//!
//! let greedy = order_to_td(&g, &min_fill_order(&g));
//! assert_eq!(greedy.width(), 2);
//! # Ok(())
//! # }
//! ```

pub mod anytime;
pub mod cch;
pub mod decomposition;
pub mod elimination;
pub mod flow;
pub mod flowcutter;
pub mod graph;
pub mod io;
pub mod multilevel;
pub mod oracle;

pub use decomposition::{validate_td, TdViolation, TreeDecomposition};
pub use flowcutter::{best_separator, CutterConfig, SeparatorMode};
pub use graph::{Graph, NodeSet};
pub use multilevel::{nested_dissection, partition_to_td, td_to_partition, MultilevelPartition, NestedDissection};
