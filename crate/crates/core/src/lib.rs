//! Truss-number maintenance for dynamic undirected graphs.
//!
//! The [`Graph`] carries a truss number on every edge. [`decompose`] assigns
//! them from scratch, [`maintenance`] repairs them after a single insertion
//! or deletion, and [`index`] answers maximal k-truss queries from a small
//! set of representative edges. [`bench`] drives all of it from edge-list
//! files and seeded update streams.

pub mod bench;
pub mod decompose;
pub mod generators;
pub mod graph;
pub mod index;
pub mod maintenance;
pub mod oracle;

pub use graph::{EdgeKey, EdgeState, Graph, GraphError, VertexId};
pub use maintenance::{MaintenanceReport, PhiChange, UpdateKind};
