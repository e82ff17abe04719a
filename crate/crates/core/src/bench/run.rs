use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::updates::{validate_stream, UpdateOp};
use super::BenchError;
use crate::decompose::{decompose_from_k, truss_decompose};
use crate::graph::{EdgeKey, Graph};
use crate::index::{
    build_index, maintain_index_delete, maintain_index_insert, query_k_truss_indexed,
    query_k_truss_scan,
};
use crate::maintenance::{delete_edge, insert_edge, MaintenanceReport, UpdateKind};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    /// Apply updates structurally, re-decompose up to `k` at each query.
    Batch,
    /// Maintain truss numbers per update, scan the graph at each query.
    Progressive,
    /// Maintain truss numbers and representatives, query from representatives.
    Indexed,
}

impl Strategy {
    pub const ALL: [Strategy; 3] = [Strategy::Batch, Strategy::Progressive, Strategy::Indexed];
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::Batch => "batch",
            Strategy::Progressive => "progressive",
            Strategy::Indexed => "indexed",
        })
    }
}

impl FromStr for Strategy {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "batch" => Ok(Strategy::Batch),
            "progressive" => Ok(Strategy::Progressive),
            "indexed" => Ok(Strategy::Indexed),
            other => Err(BenchError::Config(format!("unknown strategy {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchConfig {
    pub strategy: Strategy,
    pub k: u32,
    pub update_count: usize,
    pub seed: u64,
    /// Query after every this many updates; 0 means once, at the end.
    pub query_every: usize,
    pub delete_fraction: f64,
}

impl BenchConfig {
    pub fn new(strategy: Strategy, k: u32, update_count: usize, seed: u64) -> Self {
        BenchConfig {
            strategy,
            k,
            update_count,
            seed,
            query_every: 0,
            delete_fraction: 0.5,
        }
    }

    /// Positions in the stream (number of applied updates) where a query runs.
    pub fn query_points(&self) -> Vec<usize> {
        let n = self.update_count;
        let q = if self.query_every == 0 {
            n.max(1)
        } else {
            self.query_every
        };
        let mut points: Vec<usize> = (1..=n / q).map(|i| i * q).collect();
        if points.last() != Some(&n) {
            points.push(n);
        }
        points
    }
}

/// Wall-clock milliseconds per phase. `total` covers maintain, index
/// maintenance and queries; loading and initial setup are reported apart.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub load_ms: f64,
    pub setup_ms: f64,
    pub maintain_ms: f64,
    pub index_maintain_ms: f64,
    pub query_ms: f64,
    pub total_ms: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counters {
    pub inserts: usize,
    pub deletes: usize,
    pub changed: usize,
    pub seeds: usize,
    pub enqueued: usize,
    pub inspected: usize,
    pub reruns: usize,
}

impl Counters {
    fn absorb(&mut self, r: &MaintenanceReport) {
        match r.kind {
            UpdateKind::Insert => self.inserts += 1,
            UpdateKind::Delete => self.deletes += 1,
        }
        self.changed += r.changed.len();
        self.seeds += r.seed_count;
        self.enqueued += r.enqueue_count;
        self.inspected += r.inspected_count;
        self.reruns += r.rerun_count;
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryRecord {
    pub after_updates: usize,
    pub component_count: usize,
    pub edges_in_trusses: usize,
    /// SHA-256 of the normalized component list; equal across strategies.
    pub digest: String,
}

impl QueryRecord {
    fn new(after_updates: usize, comps: &[Vec<EdgeKey>]) -> Self {
        QueryRecord {
            after_updates,
            component_count: comps.len(),
            edges_in_trusses: comps.iter().map(Vec::len).sum(),
            digest: digest(comps),
        }
    }
}

fn digest(comps: &[Vec<EdgeKey>]) -> String {
    let mut h = Sha256::new();
    for comp in comps {
        for e in comp {
            h.update(format!("{} {}\n", e.u(), e.v()));
        }
        h.update(b"--\n");
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub schema_version: u32,
    pub strategy: Strategy,
    pub k: u32,
    pub update_count: usize,
    pub seed: u64,
    pub delete_fraction: f64,
    pub query_every: usize,
    pub vertices: usize,
    pub edges_initial: usize,
    pub edges_final: usize,
    pub timings: Timings,
    pub counters: Counters,
    pub queries: Vec<QueryRecord>,
}

fn ms(d: Duration) -> f64 {
    d.as_secs_f64() * 1e3
}

/// Replays `stream` on a copy of `g` with one strategy.
pub fn run_strategy(
    g: &Graph,
    stream: &[UpdateOp],
    cfg: &BenchConfig,
) -> Result<BenchReport, BenchError> {
    if cfg.k < 3 {
        return Err(BenchError::Config(format!(
            "k must be at least 3, got {}",
            cfg.k
        )));
    }
    if stream.len() != cfg.update_count {
        return Err(BenchError::Config(format!(
            "stream has {} updates, configuration expects {}",
            stream.len(),
            cfg.update_count
        )));
    }
    validate_stream(g, stream)?;

    let mut timings = Timings::default();
    let mut counters = Counters::default();
    let mut queries = Vec::new();
    let k = cfg.k;

    let t = Instant::now();
    let mut h = g.clone();
    let mut idx = match cfg.strategy {
        Strategy::Batch => None,
        Strategy::Progressive => {
            truss_decompose(&mut h);
            None
        }
        Strategy::Indexed => {
            truss_decompose(&mut h);
            Some(build_index(&mut h))
        }
    };
    timings.setup_ms = ms(t.elapsed());

    let mut maintain = Duration::ZERO;
    let mut index_maintain = Duration::ZERO;
    let mut query = Duration::ZERO;
    let points = cfg.query_points();
    let mut next_point = points.iter().peekable();
    let mut applied = 0usize;

    loop {
        while next_point.peek() == Some(&&applied) {
            next_point.next();
            let comps = match (cfg.strategy, idx.as_mut()) {
                (Strategy::Batch, _) => {
                    let t = Instant::now();
                    decompose_from_k(&mut h, k);
                    maintain += t.elapsed();
                    let t = Instant::now();
                    let c = query_k_truss_scan(&h, k);
                    query += t.elapsed();
                    c
                }
                (_, Some(idx)) => {
                    let t = Instant::now();
                    let c = query_k_truss_indexed(&h, idx, k)?;
                    query += t.elapsed();
                    c
                }
                (_, None) => {
                    let t = Instant::now();
                    let c = query_k_truss_scan(&h, k);
                    query += t.elapsed();
                    c
                }
            };
            queries.push(QueryRecord::new(applied, &comps));
        }
        let Some(op) = stream.get(applied) else { break };
        if cfg.strategy == Strategy::Batch {
            let t = Instant::now();
            match op.kind {
                UpdateKind::Insert => h.insert_edge_raw(op.edge)?,
                UpdateKind::Delete => {
                    h.delete_edge_raw(op.edge)?;
                }
            }
            maintain += t.elapsed();
            match op.kind {
                UpdateKind::Insert => counters.inserts += 1,
                UpdateKind::Delete => counters.deletes += 1,
            }
        } else {
            let t = Instant::now();
            let report = match op.kind {
                UpdateKind::Insert => insert_edge(&mut h, op.edge)?,
                UpdateKind::Delete => delete_edge(&mut h, op.edge)?,
            };
            maintain += t.elapsed();
            counters.absorb(&report);
            if let Some(idx) = idx.as_mut() {
                let t = Instant::now();
                match op.kind {
                    UpdateKind::Insert => maintain_index_insert(&mut h, idx, &report, op.edge),
                    UpdateKind::Delete => maintain_index_delete(&mut h, idx, &report, op.edge),
                }
                index_maintain += t.elapsed();
            }
        }
        applied += 1;
    }

    timings.maintain_ms = ms(maintain);
    timings.index_maintain_ms = ms(index_maintain);
    timings.query_ms = ms(query);
    timings.total_ms = ms(maintain + index_maintain + query);
    Ok(BenchReport {
        schema_version: SCHEMA_VERSION,
        strategy: cfg.strategy,
        k,
        update_count: stream.len(),
        seed: cfg.seed,
        delete_fraction: cfg.delete_fraction,
        query_every: cfg.query_every,
        vertices: h.vertex_count(),
        edges_initial: g.edge_count(),
        edges_final: h.edge_count(),
        timings,
        counters,
        queries,
    })
}
