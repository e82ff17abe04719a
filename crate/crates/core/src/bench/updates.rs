use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustc_hash::{FxHashMap, FxHashSet};
use serde::{Deserialize, Serialize};

use super::BenchError;
use crate::graph::{EdgeKey, Graph, VertexId};
use crate::maintenance::UpdateKind;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UpdateOp {
    pub kind: UpdateKind,
    pub edge: EdgeKey,
}

impl UpdateOp {
    pub fn insert(edge: EdgeKey) -> Self {
        UpdateOp {
            kind: UpdateKind::Insert,
            edge,
        }
    }

    pub fn delete(edge: EdgeKey) -> Self {
        UpdateOp {
            kind: UpdateKind::Delete,
            edge,
        }
    }
}

impl fmt::Display for UpdateOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.kind {
            UpdateKind::Insert => 'I',
            UpdateKind::Delete => 'D',
        };
        write!(f, "{tag} {} {}", self.edge.u(), self.edge.v())
    }
}

/// Present edges with O(1) uniform sampling and removal.
struct EdgePool {
    items: Vec<EdgeKey>,
    pos: FxHashMap<EdgeKey, usize>,
}

impl EdgePool {
    fn new(mut items: Vec<EdgeKey>) -> Self {
        items.sort_unstable();
        let pos = items.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        EdgePool { items, pos }
    }

    fn contains(&self, e: &EdgeKey) -> bool {
        self.pos.contains_key(e)
    }

    fn push(&mut self, e: EdgeKey) {
        self.pos.insert(e, self.items.len());
        self.items.push(e);
    }

    fn swap_remove(&mut self, i: usize) -> EdgeKey {
        let e = self.items.swap_remove(i);
        self.pos.remove(&e);
        if let Some(&moved) = self.items.get(i) {
            self.pos.insert(moved, i);
        }
        e
    }
}

/// Seeded stream of valid updates over the graph's existing vertices.
///
/// Each op is a deletion with probability `delete_fraction`, sampled
/// uniformly from the edges present at that point, and otherwise an
/// insertion of a uniformly sampled absent pair.
pub fn generate_updates(
    g: &Graph,
    count: usize,
    seed: u64,
    delete_fraction: f64,
) -> Result<Vec<UpdateOp>, BenchError> {
    if !(0.0..=1.0).contains(&delete_fraction) {
        return Err(BenchError::Config(format!(
            "delete fraction {delete_fraction} not in [0, 1]"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut vertices: Vec<VertexId> = g.vertices().collect();
    vertices.sort_unstable();
    let n = vertices.len() as u64;
    let mut pool = EdgePool::new(g.edge_keys());
    let mut ops = Vec::with_capacity(count);

    for op in 0..count {
        if rng.random_bool(delete_fraction) {
            if pool.items.is_empty() {
                return Err(BenchError::InsufficientEdges { op });
            }
            let i = rng.random_range(0..pool.items.len());
            ops.push(UpdateOp::delete(pool.swap_remove(i)));
            continue;
        }
        let capacity = n * n.saturating_sub(1) / 2;
        if pool.items.len() as u64 >= capacity {
            return Err(BenchError::Saturated { op });
        }
        let mut pick = None;
        for _ in 0..64 {
            let a = vertices[rng.random_range(0..vertices.len())];
            let b = vertices[rng.random_range(0..vertices.len())];
            if let Some(e) = EdgeKey::new(a, b) {
                if !pool.contains(&e) {
                    pick = Some(e);
                    break;
                }
            }
        }
        let e = match pick {
            Some(e) => e,
            // Nearly complete graph: choose among the absent pairs directly.
            None => {
                let target = rng.random_range(0..capacity - pool.items.len() as u64);
                absent_pairs(&vertices, &pool)
                    .nth(target as usize)
                    .expect("absent pair exists")
            }
        };
        pool.push(e);
        ops.push(UpdateOp::insert(e));
    }
    Ok(ops)
}

fn absent_pairs<'a>(
    vertices: &'a [VertexId],
    pool: &'a EdgePool,
) -> impl Iterator<Item = EdgeKey> + 'a {
    vertices.iter().enumerate().flat_map(move |(i, &a)| {
        vertices[i + 1..]
            .iter()
            .filter_map(move |&b| EdgeKey::new(a, b))
            .filter(move |e| !pool.contains(e))
    })
}

/// Checks that every op applies in order: deletions hit present edges,
/// insertions hit absent ones.
pub fn validate_stream(g: &Graph, ops: &[UpdateOp]) -> Result<(), BenchError> {
    let mut present: FxHashSet<EdgeKey> = g.edges().map(|(k, _)| k).collect();
    for (index, op) in ops.iter().enumerate() {
        let ok = match op.kind {
            UpdateKind::Insert => present.insert(op.edge),
            UpdateKind::Delete => present.remove(&op.edge),
        };
        if !ok {
            return Err(BenchError::InvalidOp { index, op: *op });
        }
    }
    Ok(())
}
