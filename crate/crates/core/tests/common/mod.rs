//! Small hand-built graphs shared by the integration suites.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use truss_core::decompose::truss_decompose;
use truss_core::{EdgeKey, Graph, VertexId};

// Letter vertices used by the named fixtures.
pub const A: u64 = 1;
pub const B: u64 = 2;
pub const C: u64 = 3;
pub const D: u64 = 4;
pub const Z: u64 = 26;

pub fn e(a: u64, b: u64) -> EdgeKey {
    EdgeKey::of(a, b)
}

pub fn decomposed(mut g: Graph) -> Graph {
    truss_decompose(&mut g);
    g
}

fn add_clique(g: &mut Graph, members: &[u64]) {
    for (i, &x) in members.iter().enumerate() {
        for &y in &members[i + 1..] {
            let _ = g.insert_edge_raw(e(x, y));
        }
    }
}

/// `(a, b)` closes a single triangle with `c`, while `(a, c)` and `(b, c)`
/// each sit in their own K4.
pub fn weak_bridge() -> Graph {
    let mut g = Graph::new();
    add_clique(&mut g, &[A, C, 10, 11]);
    add_clique(&mut g, &[B, C, 20, 21]);
    g.insert_edge_raw(e(A, B)).unwrap();
    g
}

/// Before inserting `(a, b)`: `(b, c)` in a K4, triangles `a-c-d` and
/// `b-c-d`. Inserting `(a, b)` completes the K4 `a, b, c, d`.
pub fn completes_k4() -> Graph {
    let mut g = Graph::new();
    add_clique(&mut g, &[B, C, 20, 21]);
    for (x, y) in [(A, C), (A, D), (B, D), (C, D)] {
        g.insert_edge_raw(e(x, y)).unwrap();
    }
    g
}

/// Before inserting `(a, b)`: `(b, c)` in a K4 and `(a, c)` in the lone
/// triangle `a-c-z`. The only common neighbour of `a` and `b` is `c`.
pub fn single_common_neighbor() -> Graph {
    let mut g = Graph::new();
    add_clique(&mut g, &[B, C, 20, 21]);
    for (x, y) in [(A, C), (A, Z), (C, Z)] {
        g.insert_edge_raw(e(x, y)).unwrap();
    }
    g
}

/// Hop distance from either endpoint of `from` to every vertex.
pub fn distances(g: &Graph, from: EdgeKey) -> BTreeMap<VertexId, usize> {
    let mut dist = BTreeMap::from([(from.u(), 0), (from.v(), 0)]);
    let mut queue = VecDeque::from([from.u(), from.v()]);
    while let Some(x) = queue.pop_front() {
        let d = dist[&x];
        for y in g.neighbors(x) {
            if let std::collections::btree_map::Entry::Vacant(slot) = dist.entry(y) {
                slot.insert(d + 1);
                queue.push_back(y);
            }
        }
    }
    dist
}

pub fn component_set(comps: Vec<Vec<EdgeKey>>) -> BTreeSet<BTreeSet<EdgeKey>> {
    comps.into_iter().map(|c| c.into_iter().collect()).collect()
}
