//! Dynamic undirected simple graph with per-edge truss state.
//!
//! Vertex labels come verbatim from input data and may be sparse; internally
//! every vertex gets a dense index so adjacency lives in a `Vec`. Public
//! methods speak [`VertexId`] / [`EdgeKey`]; the maintenance engine works on
//! the dense [`Edge`] form through crate-private accessors.

use std::collections::BTreeSet;
use std::fmt;

use rustc_hash::{FxHashMap, FxHashSet};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// External vertex label.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub u64);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl From<u64> for VertexId {
    fn from(v: u64) -> Self {
        VertexId(v)
    }
}

/// Canonical unordered vertex pair, `u < v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EdgeKey {
    u: VertexId,
    v: VertexId,
}

impl EdgeKey {
    /// Builds the canonical key; `None` for a self-loop.
    pub fn new(a: impl Into<VertexId>, b: impl Into<VertexId>) -> Option<Self> {
        let (a, b) = (a.into(), b.into());
        match a.cmp(&b) {
            std::cmp::Ordering::Less => Some(EdgeKey { u: a, v: b }),
            std::cmp::Ordering::Greater => Some(EdgeKey { u: b, v: a }),
            std::cmp::Ordering::Equal => None,
        }
    }

    /// Like [`EdgeKey::new`] but panics on a self-loop. Handy for literals.
    pub fn of(a: u64, b: u64) -> Self {
        EdgeKey::new(a, b).unwrap_or_else(|| panic!("self-loop ({a},{a}) is not an edge"))
    }

    pub fn u(&self) -> VertexId {
        self.u
    }

    pub fn v(&self) -> VertexId {
        self.v
    }

    pub fn endpoints(&self) -> (VertexId, VertexId) {
        (self.u, self.v)
    }
}

impl fmt::Display for EdgeKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.u, self.v)
    }
}

/// Dense vertex index.
pub(crate) type Ix = u32;

/// Edge in dense-index form, canonical `0 < 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub(crate) struct Edge(pub Ix, pub Ix);

impl Edge {
    #[inline]
    pub fn new(a: Ix, b: Ix) -> Edge {
        debug_assert_ne!(a, b);
        if a < b {
            Edge(a, b)
        } else {
            Edge(b, a)
        }
    }
}

/// Per-edge truss state.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EdgeState {
    /// Truss number, always at least 2.
    pub phi: u32,
    /// Transient to one maintenance pass.
    pub marked: bool,
    /// Transient to one insertion pass.
    pub unchanged: bool,
    /// Representative of this edge's exact-phi truss component, if indexed.
    pub rep: Option<EdgeKey>,
}

impl Default for EdgeState {
    fn default() -> Self {
        EdgeState {
            phi: 2,
            marked: false,
            unchanged: false,
            rep: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("edge {0} already present")]
    DuplicateEdge(EdgeKey),
    #[error("self-loop on vertex {0}")]
    SelfLoop(VertexId),
    #[error("edge {0} not present")]
    MissingEdge(EdgeKey),
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("vertices {0} and {1} have no common neighbors")]
    EmptyTriangleSet(VertexId, VertexId),
    #[error("graph inconsistency: {0}")]
    Inconsistent(String),
}

/// Mutable undirected simple graph.
///
/// Not internally synchronized: mutate from one owner, share `&Graph` for
/// concurrent reads between mutations.
#[derive(Clone, Debug, Default)]
pub struct Graph {
    labels: Vec<VertexId>,
    index: FxHashMap<VertexId, Ix>,
    adj: Vec<FxHashSet<Ix>>,
    edges: FxHashMap<Edge, EdgeState>,
    deg_max: usize,
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a graph from `(u, v)` pairs, skipping self-loops and repeats.
    pub fn from_pairs<I, A>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (A, A)>,
        A: Into<VertexId>,
    {
        let mut g = Graph::new();
        for (a, b) in pairs {
            if let Some(key) = EdgeKey::new(a, b) {
                let _ = g.insert_edge_raw(key);
            }
        }
        g
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// High watermark of vertex degree; never lowered by deletions.
    pub fn deg_max(&self) -> usize {
        self.deg_max
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.labels.iter().copied()
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.index.contains_key(&v)
    }

    pub fn contains_edge(&self, key: EdgeKey) -> bool {
        self.dense(key).is_some_and(|e| self.edges.contains_key(&e))
    }

    pub fn degree(&self, v: VertexId) -> Option<usize> {
        self.index.get(&v).map(|&i| self.adj[i as usize].len())
    }

    /// Neighbours of `v` in unspecified order; empty for unknown vertices.
    pub fn neighbors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.index
            .get(&v)
            .into_iter()
            .flat_map(|&i| self.adj[i as usize].iter().map(|&j| self.label(j)))
    }

    /// Adds a vertex with no edges; returns false if it already existed.
    pub fn add_vertex(&mut self, v: VertexId) -> bool {
        if self.index.contains_key(&v) {
            return false;
        }
        self.intern(v);
        true
    }

    /// Inserts `key` with a fresh state (`phi = 2`). Truss numbers of other
    /// edges are left alone.
    pub fn insert_edge_raw(&mut self, key: EdgeKey) -> Result<(), GraphError> {
        if key.u == key.v {
            return Err(GraphError::SelfLoop(key.u));
        }
        let a = self.intern(key.u);
        let b = self.intern(key.v);
        let e = Edge::new(a, b);
        if self.edges.contains_key(&e) {
            return Err(GraphError::DuplicateEdge(key));
        }
        self.edges.insert(e, EdgeState::default());
        self.adj[a as usize].insert(b);
        self.adj[b as usize].insert(a);
        self.deg_max = self
            .deg_max
            .max(self.adj[a as usize].len())
            .max(self.adj[b as usize].len());
        Ok(())
    }

    /// Removes `key`. Endpoints stay in the vertex set even if isolated.
    pub fn delete_edge_raw(&mut self, key: EdgeKey) -> Result<EdgeState, GraphError> {
        let e = self.dense(key).ok_or(GraphError::MissingEdge(key))?;
        let state = self.edges.remove(&e).ok_or(GraphError::MissingEdge(key))?;
        self.adj[e.0 as usize].remove(&e.1);
        self.adj[e.1 as usize].remove(&e.0);
        Ok(state)
    }

    pub fn state(&self, key: EdgeKey) -> Option<&EdgeState> {
        self.dense(key).and_then(|e| self.edges.get(&e))
    }

    pub fn phi(&self, key: EdgeKey) -> Option<u32> {
        self.state(key).map(|s| s.phi)
    }

    /// Iterates `(key, state)` in unspecified order.
    pub fn edges(&self) -> impl Iterator<Item = (EdgeKey, &EdgeState)> + '_ {
        self.edges.iter().map(|(e, s)| (self.key_of(*e), s))
    }

    /// All edge keys, sorted.
    pub fn edge_keys(&self) -> Vec<EdgeKey> {
        let mut keys: Vec<EdgeKey> = self.edges.keys().map(|&e| self.key_of(e)).collect();
        keys.sort_unstable();
        keys
    }

    /// Sorted snapshot of every edge's truss number.
    pub fn phi_table(&self) -> Vec<(EdgeKey, u32)> {
        let mut t: Vec<(EdgeKey, u32)> = self
            .edges
            .iter()
            .map(|(e, s)| (self.key_of(*e), s.phi))
            .collect();
        t.sort_unstable();
        t
    }

    pub fn max_phi(&self) -> u32 {
        self.edges.values().map(|s| s.phi).max().unwrap_or(2)
    }

    /// `n(a) ∩ n(b)`; the edge `(a, b)` itself need not exist.
    pub fn common_neighbors(
        &self,
        a: VertexId,
        b: VertexId,
    ) -> Result<BTreeSet<VertexId>, GraphError> {
        let (ia, ib) = (self.ix(a)?, self.ix(b)?);
        let mut out = Vec::new();
        self.common_into(ia, ib, &mut out);
        Ok(out.into_iter().map(|i| self.labels[i as usize]).collect())
    }

    /// The `2·|n(a) ∩ n(b)|` edges joining the common neighbors to `a` and `b`.
    pub fn triangle_edge_set(
        &self,
        a: VertexId,
        b: VertexId,
    ) -> Result<BTreeSet<EdgeKey>, GraphError> {
        let (ia, ib) = (self.ix(a)?, self.ix(b)?);
        let mut common = Vec::new();
        self.common_into(ia, ib, &mut common);
        let mut out = BTreeSet::new();
        for w in common {
            out.insert(self.key_of(Edge::new(ia, w)));
            out.insert(self.key_of(Edge::new(ib, w)));
        }
        Ok(out)
    }

    /// Number of triangles through `key`.
    pub fn support(&self, key: EdgeKey) -> Result<usize, GraphError> {
        let e = self.present(key)?;
        Ok(self.common_count(e.0, e.1))
    }

    /// `(k_min, k_max)` over the truss numbers of the triangle edge set of
    /// `(a, b)`, using current states.
    pub fn k_bounds(&self, a: VertexId, b: VertexId) -> Result<(u32, u32), GraphError> {
        let (ia, ib) = (self.ix(a)?, self.ix(b)?);
        self.k_bounds_ix(ia, ib)
            .ok_or(GraphError::EmptyTriangleSet(a.min(b), a.max(b)))
    }

    /// Full structural audit: adjacency symmetry, edge table agreement,
    /// degree watermark and `phi >= 2`.
    pub fn audit(&self) -> Result<(), GraphError> {
        let mut half_edges = 0usize;
        for (i, nbrs) in self.adj.iter().enumerate() {
            let i = i as Ix;
            if nbrs.len() > self.deg_max {
                return Err(GraphError::Inconsistent(format!(
                    "vertex {} has degree {} above deg_max {}",
                    self.labels[i as usize],
                    nbrs.len(),
                    self.deg_max
                )));
            }
            for &j in nbrs {
                half_edges += 1;
                if i == j {
                    return Err(GraphError::Inconsistent(format!(
                        "self-loop at {}",
                        self.labels[i as usize]
                    )));
                }
                if !self.adj[j as usize].contains(&i) {
                    return Err(GraphError::Inconsistent(format!(
                        "asymmetric adjacency {} -> {}",
                        self.labels[i as usize], self.labels[j as usize]
                    )));
                }
                if !self.edges.contains_key(&Edge::new(i, j)) {
                    return Err(GraphError::Inconsistent(format!(
                        "adjacency {} -> {} has no edge record",
                        self.labels[i as usize], self.labels[j as usize]
                    )));
                }
            }
        }
        if half_edges != 2 * self.edges.len() {
            return Err(GraphError::Inconsistent(format!(
                "edge table holds {} edges but adjacency holds {} half-edges",
                self.edges.len(),
                half_edges
            )));
        }
        if let Some((e, s)) = self.edges.iter().find(|(_, s)| s.phi < 2) {
            return Err(GraphError::Inconsistent(format!(
                "edge {} has phi {}",
                self.key_of(*e),
                s.phi
            )));
        }
        Ok(())
    }

    /// True when no edge carries a `marked` or `unchanged` flag.
    pub fn flags_clear(&self) -> bool {
        self.edges.values().all(|s| !s.marked && !s.unchanged)
    }

    // ---- dense-index plumbing used by the algorithms ----

    fn intern(&mut self, v: VertexId) -> Ix {
        if let Some(&i) = self.index.get(&v) {
            return i;
        }
        let i = Ix::try_from(self.labels.len()).expect("vertex count exceeds u32");
        self.labels.push(v);
        self.index.insert(v, i);
        self.adj.push(FxHashSet::default());
        i
    }

    fn ix(&self, v: VertexId) -> Result<Ix, GraphError> {
        self.index
            .get(&v)
            .copied()
            .ok_or(GraphError::UnknownVertex(v))
    }

    pub(crate) fn dense(&self, key: EdgeKey) -> Option<Edge> {
        let a = *self.index.get(&key.u)?;
        let b = *self.index.get(&key.v)?;
        Some(Edge::new(a, b))
    }

    pub(crate) fn present(&self, key: EdgeKey) -> Result<Edge, GraphError> {
        self.dense(key)
            .filter(|e| self.edges.contains_key(e))
            .ok_or(GraphError::MissingEdge(key))
    }

    pub(crate) fn key_of(&self, e: Edge) -> EdgeKey {
        let (a, b) = (self.labels[e.0 as usize], self.labels[e.1 as usize]);
        if a < b {
            EdgeKey { u: a, v: b }
        } else {
            EdgeKey { u: b, v: a }
        }
    }

    pub(crate) fn label(&self, i: Ix) -> VertexId {
        self.labels[i as usize]
    }

    pub(crate) fn ix_of(&self, v: VertexId) -> Option<Ix> {
        self.index.get(&v).copied()
    }

    pub(crate) fn neighbors_ix(&self, i: Ix) -> &FxHashSet<Ix> {
        &self.adj[i as usize]
    }

    /// Appends `n(a) ∩ n(b)` to `out`: iterate the smaller set, probe the larger.
    pub(crate) fn common_into(&self, a: Ix, b: Ix, out: &mut Vec<Ix>) {
        let (sa, sb) = (&self.adj[a as usize], &self.adj[b as usize]);
        let (small, large) = if sa.len() <= sb.len() {
            (sa, sb)
        } else {
            (sb, sa)
        };
        out.extend(small.iter().copied().filter(|w| large.contains(w)));
    }

    pub(crate) fn common_count(&self, a: Ix, b: Ix) -> usize {
        let (sa, sb) = (&self.adj[a as usize], &self.adj[b as usize]);
        let (small, large) = if sa.len() <= sb.len() {
            (sa, sb)
        } else {
            (sb, sa)
        };
        small.iter().filter(|w| large.contains(w)).count()
    }

    pub(crate) fn k_bounds_ix(&self, a: Ix, b: Ix) -> Option<(u32, u32)> {
        let mut common = Vec::new();
        self.common_into(a, b, &mut common);
        let mut bounds: Option<(u32, u32)> = None;
        for w in common {
            for leg in [Edge::new(a, w), Edge::new(b, w)] {
                let p = self.edges[&leg].phi;
                bounds = Some(match bounds {
                    None => (p, p),
                    Some((lo, hi)) => (lo.min(p), hi.max(p)),
                });
            }
        }
        bounds
    }

    #[inline]
    pub(crate) fn st(&self, e: Edge) -> &EdgeState {
        &self.edges[&e]
    }

    #[inline]
    pub(crate) fn st_mut(&mut self, e: Edge) -> &mut EdgeState {
        self.edges.get_mut(&e).expect("edge present")
    }

    #[inline]
    pub(crate) fn phi_ix(&self, e: Edge) -> u32 {
        self.edges[&e].phi
    }

    pub(crate) fn dense_edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.edges.keys().copied()
    }

    pub(crate) fn states_mut(&mut self) -> impl Iterator<Item = &mut EdgeState> + '_ {
        self.edges.values_mut()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: u64) -> VertexId {
        VertexId(x)
    }

    fn k4() -> Graph {
        Graph::from_pairs([(1u64, 2u64), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)])
    }

    #[test]
    fn edge_key_is_canonical() {
        assert_eq!(EdgeKey::new(5u64, 2u64), EdgeKey::new(2u64, 5u64));
        assert_eq!(EdgeKey::of(9, 3).endpoints(), (v(3), v(9)));
        assert!(EdgeKey::new(4u64, 4u64).is_none());
    }

    #[test]
    fn insert_into_empty_graph() {
        let mut g = Graph::new();
        g.insert_edge_raw(EdgeKey::of(1, 2)).unwrap();
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.phi(EdgeKey::of(1, 2)), Some(2));
        assert!(g.flags_clear());
        g.audit().unwrap();
    }

    #[test]
    fn closing_a_triangle_is_bookkeeping_only() {
        let mut g = Graph::from_pairs([(1u64, 2u64), (1, 3)]);
        g.insert_edge_raw(EdgeKey::of(2, 3)).unwrap();
        assert_eq!(g.edge_count(), 3);
        assert_eq!(g.phi(EdgeKey::of(2, 3)), Some(2));
    }

    #[test]
    fn duplicate_and_self_loop_rejected() {
        let mut g = k4();
        assert_eq!(
            g.insert_edge_raw(EdgeKey::of(2, 1)),
            Err(GraphError::DuplicateEdge(EdgeKey::of(1, 2)))
        );
        let bad = EdgeKey { u: v(1), v: v(1) };
        assert_eq!(g.insert_edge_raw(bad), Err(GraphError::SelfLoop(v(1))));
    }

    #[test]
    fn delete_keeps_isolated_vertices() {
        let mut g = Graph::from_pairs([(1u64, 2u64)]);
        g.delete_edge_raw(EdgeKey::of(1, 2)).unwrap();
        assert_eq!(g.edge_count(), 0);
        assert_eq!(g.vertex_count(), 2);
        assert!(g.contains_vertex(v(1)) && g.contains_vertex(v(2)));
        g.audit().unwrap();
    }

    #[test]
    fn delete_from_triangle_and_missing() {
        let mut g = Graph::from_pairs([(1u64, 2u64), (2, 3), (1, 3)]);
        g.delete_edge_raw(EdgeKey::of(1, 2)).unwrap();
        assert_eq!(g.edge_count(), 2);
        assert_eq!(
            g.delete_edge_raw(EdgeKey::of(5, 9)),
            Err(GraphError::MissingEdge(EdgeKey::of(5, 9)))
        );
    }

    #[test]
    fn common_neighbors_and_triangle_edges() {
        let g = Graph::from_pairs([(1u64, 2u64), (3, 4), (1, 5), (2, 5), (1, 6), (2, 6)]);
        let c = g.common_neighbors(v(1), v(2)).unwrap();
        assert_eq!(c.into_iter().collect::<Vec<_>>(), vec![v(5), v(6)]);
        let t = g.triangle_edge_set(v(2), v(1)).unwrap();
        assert_eq!(t.len(), 4);
        assert!(t.contains(&EdgeKey::of(5, 2)));
        assert!(g.common_neighbors(v(1), v(3)).unwrap().is_empty());
        assert!(g.triangle_edge_set(v(3), v(4)).unwrap().is_empty());
        assert_eq!(
            g.common_neighbors(v(1), v(77)),
            Err(GraphError::UnknownVertex(v(77)))
        );
    }

    #[test]
    fn support_counts() {
        let g = k4();
        for key in g.edge_keys() {
            assert_eq!(g.support(key).unwrap(), 2);
        }
        let mut k6 = Graph::new();
        for a in 0..6u64 {
            for b in a + 1..6 {
                k6.insert_edge_raw(EdgeKey::of(a, b)).unwrap();
            }
        }
        assert_eq!(k6.support(EdgeKey::of(0, 5)).unwrap(), 4);
        let bridge = Graph::from_pairs([(1u64, 2u64), (2, 3)]);
        assert_eq!(bridge.support(EdgeKey::of(1, 2)).unwrap(), 0);
        assert!(matches!(
            bridge.support(EdgeKey::of(1, 3)),
            Err(GraphError::MissingEdge(_))
        ));
    }

    #[test]
    fn k_bounds_empty_set_is_an_error() {
        let g = Graph::from_pairs([(1u64, 2u64), (3, 4)]);
        assert_eq!(
            g.k_bounds(v(1), v(2)),
            Err(GraphError::EmptyTriangleSet(v(1), v(2)))
        );
    }

    #[test]
    fn deg_max_is_a_watermark() {
        let mut g = Graph::from_pairs([(0u64, 1u64), (0, 2), (0, 3)]);
        assert_eq!(g.deg_max(), 3);
        g.delete_edge_raw(EdgeKey::of(0, 3)).unwrap();
        assert_eq!(g.deg_max(), 3);
        g.audit().unwrap();
    }

    #[test]
    fn sparse_labels_are_kept_verbatim() {
        let g = Graph::from_pairs([(1_000_000u64, 7u64), (7, 42)]);
        let mut vs: Vec<_> = g.vertices().collect();
        vs.sort();
        assert_eq!(vs, vec![v(7), v(42), v(1_000_000)]);
        assert_eq!(
            g.edge_keys(),
            vec![EdgeKey::of(7, 42), EdgeKey::of(7, 1_000_000)]
        );
    }
}
