//! Benchmark and verification plumbing: edge-list ingestion, seeded update
//! streams, the three evaluation strategies and the step-by-step verifier.

mod input;
mod run;
mod updates;
pub mod verify;

use std::path::PathBuf;

use thiserror::Error;

use crate::graph::GraphError;
use crate::index::IndexError;

pub use input::{load_edge_list, parse_edge_list, read_stream, write_stream, LoadStats};
pub use run::{
    run_strategy, BenchConfig, BenchReport, Counters, QueryRecord, Strategy, Timings,
    SCHEMA_VERSION,
};
pub use updates::{generate_updates, validate_stream, UpdateOp};
pub use verify::{verify_stream, verify_stream_with, VerifySummary, Violation};

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("not enough edges: op {op} wants a deletion but the graph is empty")]
    InsufficientEdges { op: usize },
    #[error("no absent vertex pair left for insertion at op {op}")]
    Saturated { op: usize },
    #[error("op {index} ({op}) does not apply to the current graph")]
    InvalidOp { index: usize, op: UpdateOp },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("graph has {edges} edges, above the verifier limit of {limit}")]
    TooLarge { edges: usize, limit: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Index(#[from] IndexError),
    #[error("verification failed: {0}")]
    Verification(Box<Violation>),
}
