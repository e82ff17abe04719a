//! Maximal k-truss queries, with and without a representative-edge index.
//!
//! A maximal k-truss is a connected component (edges sharing an endpoint) of
//! the subgraph formed by edges with `phi >= k`. The index keeps, per level
//! `k >= 3`, a set of representative edges with at least one edge in every
//! such component, so a query only walks the trusses themselves.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use rustc_hash::FxHashSet;
use thiserror::Error;

use crate::graph::{Edge, EdgeKey, Graph, Ix};
use crate::maintenance::{MaintenanceReport, UpdateKind};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IndexError {
    #[error("representative {rep} of level {k} is stale (phi {phi:?})")]
    StaleIndex {
        k: u32,
        rep: EdgeKey,
        phi: Option<u32>,
    },
}

/// Representative edges per truss level.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TrussIndex {
    reps: BTreeMap<u32, BTreeSet<EdgeKey>>,
}

impl TrussIndex {
    pub fn reps(&self, k: u32) -> impl Iterator<Item = EdgeKey> + '_ {
        self.reps.get(&k).into_iter().flatten().copied()
    }

    pub fn rep_count(&self, k: u32) -> usize {
        self.reps.get(&k).map_or(0, BTreeSet::len)
    }

    /// Levels with at least one representative, ascending.
    pub fn levels(&self) -> impl Iterator<Item = u32> + '_ {
        self.reps
            .iter()
            .filter(|(_, r)| !r.is_empty())
            .map(|(&k, _)| k)
    }

    pub fn is_empty(&self) -> bool {
        self.reps.values().all(BTreeSet::is_empty)
    }

    /// Adds a representative without any checks.
    pub fn insert_rep(&mut self, k: u32, rep: EdgeKey) -> bool {
        self.reps.entry(k).or_default().insert(rep)
    }

    fn remove_rep(&mut self, k: u32, rep: EdgeKey) -> bool {
        let Some(set) = self.reps.get_mut(&k) else {
            return false;
        };
        let hit = set.remove(&rep);
        if set.is_empty() {
            self.reps.remove(&k);
        }
        hit
    }
}

/// Sorts each component and the component list so outputs compare as sets.
pub fn normalize(mut comps: Vec<Vec<EdgeKey>>) -> Vec<Vec<EdgeKey>> {
    for c in &mut comps {
        c.sort_unstable();
    }
    comps.sort();
    comps
}

/// Vertex-driven BFS over edges with `phi >= k`, starting at `start`.
/// Vertices already in `seen` are not re-entered. Returns the component's
/// edges, empty if `start` has no qualifying edge or was seen.
fn component_from(g: &Graph, start: Ix, k: u32, seen: &mut FxHashSet<Ix>) -> Vec<Edge> {
    let mut edges = Vec::new();
    if !seen.insert(start) {
        return edges;
    }
    let mut queue = VecDeque::from([start]);
    while let Some(x) = queue.pop_front() {
        for &y in g.neighbors_ix(x) {
            let e = Edge::new(x, y);
            if g.phi_ix(e) < k {
                continue;
            }
            if seen.insert(y) {
                queue.push_back(y);
            }
            // Both endpoints get popped; report the edge from one side only.
            if x < y {
                edges.push(e);
            }
        }
    }
    edges
}

/// Index-free baseline: scan every edge and group the `phi >= k` ones.
pub fn query_k_truss_scan(g: &Graph, k: u32) -> Vec<Vec<EdgeKey>> {
    let mut seen = FxHashSet::default();
    let mut out = Vec::new();
    for e in g.dense_edges() {
        if g.phi_ix(e) >= k && !seen.contains(&e.0) {
            let comp = component_from(g, e.0, k, &mut seen);
            out.push(comp.into_iter().map(|e| g.key_of(e)).collect());
        }
    }
    normalize(out)
}

/// Builds the index from current truss numbers: one representative per
/// component per level, the component's minimum edge.
pub fn build_index(g: &mut Graph) -> TrussIndex {
    let mut idx = TrussIndex::default();
    for st in g.states_mut() {
        st.rep = None;
    }
    for k in 3..=g.max_phi() {
        for comp in query_k_truss_scan(g, k) {
            let rep = comp[0];
            idx.insert_rep(k, rep);
            for key in comp {
                let e = g.dense(key).expect("component edge present");
                let st = g.st_mut(e);
                if st.phi == k {
                    st.rep = Some(rep);
                }
            }
        }
    }
    idx
}

/// Answers a level-`k` query by walking from each representative. Redundant
/// representatives met inside an already emitted component are dropped.
pub fn query_k_truss_indexed(
    g: &Graph,
    idx: &mut TrussIndex,
    k: u32,
) -> Result<Vec<Vec<EdgeKey>>, IndexError> {
    let reps: Vec<EdgeKey> = idx.reps(k).collect();
    let mut seen = FxHashSet::default();
    let mut out = Vec::new();
    let mut redundant = Vec::new();
    for rep in reps {
        let e = match g.present(rep) {
            Ok(e) if g.phi_ix(e) >= k => e,
            Ok(e) => {
                return Err(IndexError::StaleIndex {
                    k,
                    rep,
                    phi: Some(g.phi_ix(e)),
                })
            }
            Err(_) => return Err(IndexError::StaleIndex { k, rep, phi: None }),
        };
        if seen.contains(&e.0) {
            redundant.push(rep);
            continue;
        }
        let comp = component_from(g, e.0, k, &mut seen);
        out.push(comp.into_iter().map(|e| g.key_of(e)).collect());
    }
    for rep in redundant {
        idx.remove_rep(k, rep);
    }
    Ok(normalize(out))
}

/// Walks the level-`k` components around `starts` and makes each one hold
/// exactly one representative, refreshing exact-level rep pointers on the way.
fn recover_level(g: &mut Graph, idx: &mut TrussIndex, k: u32, starts: &[Ix]) {
    let mut seen = FxHashSet::default();
    for &s in starts {
        let comp = component_from(g, s, k, &mut seen);
        if comp.is_empty() {
            continue;
        }
        let keys: Vec<EdgeKey> = comp.iter().map(|&e| g.key_of(e)).collect();
        let present: Vec<EdgeKey> = keys
            .iter()
            .copied()
            .filter(|key| idx.reps.get(&k).is_some_and(|r| r.contains(key)))
            .collect();
        let rep = match present.iter().min() {
            Some(&r) => r,
            None => *keys.iter().min().expect("nonempty component"),
        };
        for other in present {
            if other != rep {
                idx.remove_rep(k, other);
            }
        }
        idx.insert_rep(k, rep);
        for e in comp {
            let st = g.st_mut(e);
            if st.phi == k {
                st.rep = Some(rep);
            }
        }
    }
}

/// Repairs the index after [`crate::maintenance::delete_edge`] removed
/// `deleted` and produced `report`.
pub fn maintain_index_delete(
    g: &mut Graph,
    idx: &mut TrussIndex,
    report: &MaintenanceReport,
    deleted: EdgeKey,
) {
    debug_assert_eq!(report.kind, UpdateKind::Delete);
    let ends: Vec<Ix> = [deleted.u(), deleted.v()]
        .iter()
        .filter_map(|&v| g.ix_of(v))
        .collect();
    let range = report.affected_range;
    for k in 3..=report.edge_phi {
        let was_rep = idx.remove_rep(k, deleted);
        let mut starts: Vec<Ix> = Vec::new();
        // Below the affected range the endpoints stay joined through their
        // triangle legs, so only a lost representative needs replacing.
        if was_rep || range.is_some_and(|(lo, hi)| lo <= k && k <= hi) {
            starts.extend(&ends);
        }
        for c in &report.changed {
            if c.old == k {
                idx.remove_rep(k, c.edge);
            }
            if c.old == k || c.new == k {
                let e = g.present(c.edge).expect("changed edge present");
                starts.extend([e.0, e.1]);
            }
        }
        if !starts.is_empty() {
            recover_level(g, idx, k, &starts);
        }
    }
    for c in &report.changed {
        if c.new < 3 {
            let e = g.present(c.edge).expect("changed edge present");
            g.st_mut(e).rep = None;
        }
    }
}

/// Repairs the index after [`crate::maintenance::insert_edge`] added
/// `inserted` and produced `report`.
pub fn maintain_index_insert(
    g: &mut Graph,
    idx: &mut TrussIndex,
    report: &MaintenanceReport,
    inserted: EdgeKey,
) {
    debug_assert_eq!(report.kind, UpdateKind::Insert);
    let Ok(e) = g.present(inserted) else {
        return;
    };
    let p = report.edge_phi;
    // Every risen edge reaches the inserted edge at its new level, so all
    // merging happens in the inserted edge's own components. Below the
    // smallest leg level those components existed already.
    let k_min = report.affected_range.map_or(p, |(lo, _)| lo).max(3);
    for k in k_min..=p {
        recover_level(g, idx, k, &[e.0]);
    }
    if p >= 3 && p < k_min {
        recover_level(g, idx, p, &[e.0]);
    }
}
