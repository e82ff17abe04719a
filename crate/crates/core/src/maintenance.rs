//! Incremental truss-number maintenance for single edge updates.
//!
//! Deletion runs an outward inspection from the removed edge: candidates are
//! pulled from a FIFO, an edge whose local support at its own level has
//! fallen below `phi - 2` drops one level, and its triangle neighbours are
//! queued. Insertion runs mark-and-verify: candidates with enough optimistic
//! support are marked, edges proven not to rise are flagged `unchanged` and
//! their neighbours are re-verified, and whatever is still marked when the
//! queue drains rises one level. Both passes only ever queue edges whose
//! truss number lies in the update's affected range.

use std::collections::VecDeque;

use rustc_hash::{FxHashMap, FxHashSet};
use serde::{Deserialize, Serialize};

use crate::graph::{Edge, EdgeKey, Graph, GraphError, Ix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UpdateKind {
    Insert,
    Delete,
}

/// One edge whose truss number moved during an update.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhiChange {
    pub edge: EdgeKey,
    pub old: u32,
    pub new: u32,
}

/// Outcome and instrumentation of one maintained update.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaintenanceReport {
    pub kind: UpdateKind,
    pub edge: EdgeKey,
    /// Truss number of the deleted edge before removal, or of the inserted
    /// edge after maintenance.
    pub edge_phi: u32,
    /// Number of common neighbours of the updated edge's endpoints.
    pub common_neighbors: usize,
    /// Existing edges whose truss number changed (never the inserted edge).
    pub changed: Vec<PhiChange>,
    /// Closed truss-number interval that was inspected, if any.
    pub affected_range: Option<(u32, u32)>,
    pub seed_count: usize,
    pub enqueue_count: usize,
    pub inspected_count: usize,
    /// Extra mark-and-verify passes triggered because the inserted edge's
    /// truss number rose past the value used while marking.
    pub rerun_count: usize,
}

impl MaintenanceReport {
    fn new(kind: UpdateKind, edge: EdgeKey, edge_phi: u32, common_neighbors: usize) -> Self {
        MaintenanceReport {
            kind,
            edge,
            edge_phi,
            common_neighbors,
            changed: Vec::new(),
            affected_range: None,
            seed_count: 0,
            enqueue_count: 0,
            inspected_count: 0,
            rerun_count: 0,
        }
    }
}

/// Deliberate defects for exercising the verifier. Not for production use.
#[doc(hidden)]
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Fault {
    #[default]
    None,
    /// Never set the `marked` flag. Insertion still expands each candidate
    /// once so the pass terminates, but nothing ends up marked.
    SkipMark,
}

/// Triangles through `key` whose two other edges both have `phi >= k`.
pub fn local_support(g: &Graph, key: EdgeKey, k: u32) -> Result<usize, GraphError> {
    let e = g.present(key)?;
    Ok(local_support_ix(g, e, k, &mut Vec::new()))
}

/// Optimistic support of `key` in the `(k+1)`-truss during an insertion pass:
/// triangles whose other two edges are each either above level `k`, or at
/// level `k` and not yet proven unchanged.
pub fn local_support2(g: &Graph, key: EdgeKey, k: u32) -> Result<usize, GraphError> {
    let e = g.present(key)?;
    Ok(local_support2_ix(g, e, k, &mut Vec::new()))
}

/// Truss number of `key` given final truss numbers on every other edge.
pub fn new_edge_truss(g: &Graph, key: EdgeKey) -> Result<u32, GraphError> {
    let e = g.present(key)?;
    Ok(new_edge_truss_ix(g, e, &mut Vec::new()))
}

/// Removes `key` and repairs every affected truss number.
pub fn delete_edge(g: &mut Graph, key: EdgeKey) -> Result<MaintenanceReport, GraphError> {
    delete_with_fault(g, key, Fault::None)
}

/// Inserts `key` and repairs every affected truss number, including the new
/// edge's own.
pub fn insert_edge(g: &mut Graph, key: EdgeKey) -> Result<MaintenanceReport, GraphError> {
    insert_with_fault(g, key, Fault::None)
}

fn local_support_ix(g: &Graph, e: Edge, k: u32, scratch: &mut Vec<Ix>) -> usize {
    scratch.clear();
    g.common_into(e.0, e.1, scratch);
    scratch
        .iter()
        .filter(|&&w| g.phi_ix(Edge::new(e.0, w)) >= k && g.phi_ix(Edge::new(e.1, w)) >= k)
        .count()
}

fn local_support2_ix(g: &Graph, e: Edge, k: u32, scratch: &mut Vec<Ix>) -> usize {
    let counts = |leg: Edge| {
        let s = g.st(leg);
        s.phi > k || (s.phi == k && !s.unchanged)
    };
    scratch.clear();
    g.common_into(e.0, e.1, scratch);
    scratch
        .iter()
        .filter(|&&w| counts(Edge::new(e.0, w)) && counts(Edge::new(e.1, w)))
        .count()
}

fn new_edge_truss_ix(g: &Graph, e: Edge, scratch: &mut Vec<Ix>) -> u32 {
    scratch.clear();
    g.common_into(e.0, e.1, scratch);
    if scratch.is_empty() {
        return 2;
    }
    // Per common neighbour, the weaker of its two legs bounds the levels at
    // which that triangle can support the edge.
    let mut weakest: Vec<u32> = scratch
        .iter()
        .map(|&w| g.phi_ix(Edge::new(e.0, w)).min(g.phi_ix(Edge::new(e.1, w))))
        .collect();
    let k_max = scratch
        .iter()
        .map(|&w| g.phi_ix(Edge::new(e.0, w)).max(g.phi_ix(Edge::new(e.1, w))))
        .max()
        .unwrap_or(2);
    weakest.sort_unstable_by(|a, b| b.cmp(a));
    let top = (scratch.len() as u32 + 2).min(k_max);
    (3..=top)
        .rev()
        .find(|&k| {
            let need = (k - 2) as usize;
            need <= weakest.len() && weakest[need - 1] >= k
        })
        .unwrap_or(2)
}

/// Queues the triangle edge set of `(x, y)` restricted to `phi ∈ [lo, hi]`.
fn enqueue_triangle_edges(
    g: &Graph,
    x: Ix,
    y: Ix,
    range: (u32, u32),
    queue: &mut VecDeque<Edge>,
    scratch: &mut Vec<Ix>,
) -> usize {
    enqueue_filtered(g, x, y, range, false, queue, scratch)
}

fn enqueue_filtered(
    g: &Graph,
    x: Ix,
    y: Ix,
    (lo, hi): (u32, u32),
    only_marked: bool,
    queue: &mut VecDeque<Edge>,
    scratch: &mut Vec<Ix>,
) -> usize {
    scratch.clear();
    g.common_into(x, y, scratch);
    let before = queue.len();
    for &w in scratch.iter() {
        for leg in [Edge::new(x, w), Edge::new(y, w)] {
            let s = g.st(leg);
            if lo <= s.phi && s.phi <= hi && (!only_marked || s.marked) {
                queue.push_back(leg);
            }
        }
    }
    queue.len() - before
}

/// Records first-seen old values so repeated moves collapse to one entry.
#[derive(Default)]
struct ChangeLog {
    order: Vec<Edge>,
    first_old: FxHashMap<Edge, u32>,
}

impl ChangeLog {
    fn note(&mut self, e: Edge, old: u32) {
        if let std::collections::hash_map::Entry::Vacant(slot) = self.first_old.entry(e) {
            slot.insert(old);
            self.order.push(e);
        }
    }

    fn finish(self, g: &Graph) -> Vec<PhiChange> {
        self.order
            .into_iter()
            .filter_map(|e| {
                let old = self.first_old[&e];
                let new = g.phi_ix(e);
                (old != new).then(|| PhiChange {
                    edge: g.key_of(e),
                    old,
                    new,
                })
            })
            .collect()
    }
}

#[doc(hidden)]
pub fn delete_with_fault(
    g: &mut Graph,
    key: EdgeKey,
    fault: Fault,
) -> Result<MaintenanceReport, GraphError> {
    let e = g.present(key)?;
    let phi_e = g.phi_ix(e);
    // Range endpoints come from the pre-deletion graph.
    let bounds = g.k_bounds_ix(e.0, e.1);
    let mut scratch = Vec::new();
    scratch.clear();
    g.common_into(e.0, e.1, &mut scratch);
    let mut report = MaintenanceReport::new(UpdateKind::Delete, key, phi_e, scratch.len());
    g.delete_edge_raw(key)?;

    let Some((k_min, _)) = bounds else {
        return Ok(report);
    };
    if k_min > phi_e {
        return Ok(report);
    }
    let range = (k_min, phi_e);
    report.affected_range = Some(range);

    let mut queue = VecDeque::new();
    report.seed_count = enqueue_triangle_edges(g, e.0, e.1, range, &mut queue, &mut scratch);
    report.enqueue_count = report.seed_count;

    let mut log = ChangeLog::default();
    let mut marked: Vec<Edge> = Vec::new();
    let mut ls_scratch = Vec::new();
    while let Some(x) = queue.pop_front() {
        report.inspected_count += 1;
        let st = g.st(x);
        if st.marked {
            continue;
        }
        let k = st.phi;
        if local_support_ix(g, x, k, &mut ls_scratch) + 2 < k as usize {
            log.note(x, k);
            let st = g.st_mut(x);
            st.phi = k - 1;
            if fault != Fault::SkipMark {
                st.marked = true;
                marked.push(x);
            }
            report.enqueue_count +=
                enqueue_triangle_edges(g, x.0, x.1, range, &mut queue, &mut scratch);
        }
    }
    for x in marked {
        g.st_mut(x).marked = false;
    }
    report.changed = log.finish(g);
    Ok(report)
}

#[doc(hidden)]
pub fn insert_with_fault(
    g: &mut Graph,
    key: EdgeKey,
    fault: Fault,
) -> Result<MaintenanceReport, GraphError> {
    if key.u() == key.v() {
        return Err(GraphError::SelfLoop(key.u()));
    }
    g.insert_edge_raw(key)?;
    let e = g.present(key)?;
    let mut scratch = Vec::new();
    g.common_into(e.0, e.1, &mut scratch);
    let common = scratch.len();
    let mut report = MaintenanceReport::new(UpdateKind::Insert, key, 2, common);
    let Some((k_min, k_max)) = g.k_bounds_ix(e.0, e.1) else {
        return Ok(report);
    };

    // Provisional value from pre-maintenance neighbours: a lower bound of
    // the final value, and the final value is at most one above it.
    let provisional = new_edge_truss_ix(g, e, &mut scratch);
    g.st_mut(e).phi = provisional;
    report.edge_phi = provisional;
    let hi = (common as u32 + 1).min(k_max);
    if k_min > hi {
        return Ok(report);
    }
    let mut range = (k_min, hi);
    report.affected_range = Some(range);

    let mut log = ChangeLog::default();
    loop {
        let risen = mark_and_verify(g, e, range, fault, &mut report);
        for x in risen {
            let st = g.st_mut(x);
            if x != e {
                log.note(x, st.phi);
            }
            st.phi += 1;
        }
        let carried = g.phi_ix(e);
        let recomputed = new_edge_truss_ix(g, e, &mut scratch);
        g.st_mut(e).phi = recomputed;
        if recomputed <= carried {
            break;
        }
        // The new edge ended above what the pass assumed for it; repeat with
        // the raised value over the current neighbourhood.
        report.rerun_count += 1;
        match g.k_bounds_ix(e.0, e.1) {
            Some((lo, hi_max)) if lo <= (common as u32 + 1).min(hi_max) => {
                range = (lo, (common as u32 + 1).min(hi_max));
                let (r_lo, r_hi) = report.affected_range.unwrap_or(range);
                report.affected_range = Some((r_lo.min(range.0), r_hi.max(range.1)));
            }
            _ => break,
        }
    }
    report.edge_phi = g.phi_ix(e);
    report.changed = log.finish(g);
    Ok(report)
}

/// One mark-and-verify pass seeded from the new edge. Returns the edges that
/// are still marked at the end (flags cleared).
fn mark_and_verify(
    g: &mut Graph,
    e: Edge,
    range: (u32, u32),
    fault: Fault,
    report: &mut MaintenanceReport,
) -> Vec<Edge> {
    let mut scratch = Vec::new();
    let mut ls_scratch = Vec::new();
    let mut queue = VecDeque::new();
    let seeded = enqueue_triangle_edges(g, e.0, e.1, range, &mut queue, &mut scratch);
    report.seed_count += seeded;
    report.enqueue_count += seeded;
    let mut touched: Vec<Edge> = Vec::new();
    let mut expanded: FxHashSet<Edge> = FxHashSet::default();

    while let Some(x) = queue.pop_front() {
        report.inspected_count += 1;
        let st = *g.st(x);
        let k = st.phi;
        if local_support2_ix(g, x, k, &mut ls_scratch) + 1 >= k as usize {
            let fresh = match fault {
                Fault::None => !st.marked,
                Fault::SkipMark => expanded.insert(x),
            };
            if fresh {
                if fault != Fault::SkipMark {
                    g.st_mut(x).marked = true;
                    touched.push(x);
                }
                report.enqueue_count +=
                    enqueue_triangle_edges(g, x.0, x.1, range, &mut queue, &mut scratch);
            }
        } else if st.marked || !st.unchanged {
            // Proven to stay at k. Only marked neighbours can have counted it
            // optimistically; unmarked ones are either queued already or done.
            let s = g.st_mut(x);
            s.marked = false;
            s.unchanged = true;
            if !st.marked {
                touched.push(x);
            }
            report.enqueue_count +=
                enqueue_filtered(g, x.0, x.1, range, true, &mut queue, &mut scratch);
        }
    }

    let mut risen = Vec::new();
    for x in touched {
        let s = g.st_mut(x);
        if s.marked {
            risen.push(x);
        }
        s.marked = false;
        s.unchanged = false;
    }
    risen.sort_unstable();
    risen.dedup();
    risen
}
