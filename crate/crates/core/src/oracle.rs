//! Brute-force reference implementations.
//!
//! Everything here works on a private copy of the edge list using ordered
//! maps and repeated full support recomputation. None of it shares code with
//! the peeling decomposition, the maintenance engine or the index.

use std::collections::{BTreeMap, BTreeSet};

use crate::graph::{EdgeKey, Graph, VertexId};

type Adjacency = BTreeMap<VertexId, BTreeSet<VertexId>>;

fn adjacency_of(edges: &BTreeSet<EdgeKey>) -> Adjacency {
    let mut adj = Adjacency::new();
    for e in edges {
        adj.entry(e.u()).or_default().insert(e.v());
        adj.entry(e.v()).or_default().insert(e.u());
    }
    adj
}

fn triangles_through(adj: &Adjacency, e: &EdgeKey) -> usize {
    match (adj.get(&e.u()), adj.get(&e.v())) {
        (Some(a), Some(b)) => a.intersection(b).count(),
        _ => 0,
    }
}

/// Repeatedly drops every edge with fewer than `k - 2` triangles inside the
/// surviving set until nothing changes. Returns the survivors.
fn prune_to_level(mut alive: BTreeSet<EdgeKey>, k: u32) -> BTreeSet<EdgeKey> {
    let need = k.saturating_sub(2) as usize;
    loop {
        let adj = adjacency_of(&alive);
        let doomed: Vec<EdgeKey> = alive
            .iter()
            .filter(|e| triangles_through(&adj, e) < need)
            .copied()
            .collect();
        if doomed.is_empty() {
            return alive;
        }
        for e in doomed {
            alive.remove(&e);
        }
    }
}

/// Truss number of every edge by direct fixpoint of the k-truss definition.
pub fn decompose_naive(g: &Graph) -> BTreeMap<EdgeKey, u32> {
    let all: BTreeSet<EdgeKey> = g.edges().map(|(k, _)| k).collect();
    let mut phi: BTreeMap<EdgeKey, u32> = all.iter().map(|&e| (e, 2)).collect();
    let mut survivors = all;
    let mut k = 3;
    while !survivors.is_empty() {
        survivors = prune_to_level(survivors, k);
        for e in &survivors {
            phi.insert(*e, k);
        }
        k += 1;
    }
    phi
}

/// Connected components (edges sharing an endpoint) of an edge set, each
/// sorted, the list sorted by first edge.
pub fn edge_components(edges: &BTreeSet<EdgeKey>) -> Vec<Vec<EdgeKey>> {
    let adj = adjacency_of(edges);
    let mut seen: BTreeSet<VertexId> = BTreeSet::new();
    let mut out = Vec::new();
    for &start in adj.keys() {
        if !seen.insert(start) {
            continue;
        }
        let mut stack = vec![start];
        let mut verts = vec![start];
        while let Some(x) = stack.pop() {
            for &y in &adj[&x] {
                if seen.insert(y) {
                    stack.push(y);
                    verts.push(y);
                }
            }
        }
        let vs: BTreeSet<VertexId> = verts.into_iter().collect();
        let comp: Vec<EdgeKey> = edges
            .iter()
            .filter(|e| vs.contains(&e.u()))
            .copied()
            .collect();
        out.push(comp);
    }
    out.sort();
    out
}

/// Maximal k-trusses by pruning the whole graph at level `k`.
pub fn max_trusses_naive(g: &Graph, k: u32) -> Vec<Vec<EdgeKey>> {
    let all: BTreeSet<EdgeKey> = g.edges().map(|(k, _)| k).collect();
    let kept = prune_to_level(all, k.max(3));
    edge_components(&kept)
}
