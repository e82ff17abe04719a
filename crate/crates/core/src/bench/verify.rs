//! Step-by-step checker: replays a stream with maintenance and index repair,
//! and after every update compares against the brute-force oracle and the
//! structural properties every correct maintenance result must have.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::Serialize;

use super::updates::{validate_stream, UpdateOp};
use super::BenchError;
use crate::decompose::truss_decompose;
use crate::graph::{EdgeKey, Graph, VertexId};
use crate::index::{
    build_index, maintain_index_delete, maintain_index_insert, query_k_truss_scan, TrussIndex,
};
use crate::maintenance::{
    delete_with_fault, insert_with_fault, Fault, MaintenanceReport, UpdateKind,
};
use crate::oracle::decompose_naive;

/// Largest graph the verifier accepts; the oracle is quadratic in edges.
pub const EDGE_LIMIT: usize = 5_000;

/// A failed check with enough context to replay it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    /// Position in the stream, `None` for the initial graph.
    pub op_index: Option<usize>,
    pub op: Option<UpdateOp>,
    pub check: &'static str,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.op_index, self.op) {
            (Some(i), Some(op)) => write!(f, "op #{i} ({op}): {}: {}", self.check, self.detail),
            _ => write!(f, "initial graph: {}: {}", self.check, self.detail),
        }
    }
}

/// A property that did not hold, without stream context.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckFailure {
    pub check: &'static str,
    pub detail: String,
}

fn fail(check: &'static str, detail: String) -> Result<(), CheckFailure> {
    Err(CheckFailure { check, detail })
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct VerifySummary {
    pub ops: usize,
    pub inserts: usize,
    pub deletes: usize,
    pub changed: usize,
    pub max_changed: usize,
    pub reruns: usize,
}

/// Truss numbers as an ordered map, for before/after comparisons.
pub fn phi_map(g: &Graph) -> BTreeMap<EdgeKey, u32> {
    g.phi_table().into_iter().collect()
}

/// Per-update properties: the report lists exactly the edges that moved,
/// each by one level, in the update's direction, from inside the affected
/// range; after an insertion every risen edge reaches the new edge through
/// edges at or above its new level.
pub fn check_update(
    before: &BTreeMap<EdgeKey, u32>,
    g: &Graph,
    op: &UpdateOp,
    report: &MaintenanceReport,
) -> Result<(), CheckFailure> {
    let mut moved: BTreeMap<EdgeKey, (u32, u32)> = BTreeMap::new();
    for (key, st) in g.edges() {
        if key == op.edge {
            continue;
        }
        let Some(&old) = before.get(&key) else {
            return fail("report", format!("edge {key} appeared"));
        };
        if old != st.phi {
            moved.insert(key, (old, st.phi));
        }
    }
    let reported: BTreeMap<EdgeKey, (u32, u32)> = report
        .changed
        .iter()
        .map(|c| (c.edge, (c.old, c.new)))
        .collect();
    if reported.len() != report.changed.len() {
        return fail("report", "an edge is listed twice".into());
    }
    if moved != reported {
        return fail(
            "report",
            format!("observed changes {moved:?} but report lists {reported:?}"),
        );
    }
    for (&key, &(old, new)) in &moved {
        if old.abs_diff(new) != 1 {
            return fail("plus-minus-one", format!("{key} moved {old} -> {new}"));
        }
        let right_way = match op.kind {
            UpdateKind::Delete => new < old,
            UpdateKind::Insert => new > old,
        };
        if !right_way {
            return fail("monotone", format!("{key} moved {old} -> {new} on {op}"));
        }
        match report.affected_range {
            Some((lo, hi)) if lo <= old && old <= hi => {}
            range => return fail("range", format!("{key} had phi {old} outside {range:?}")),
        }
    }
    if op.kind == UpdateKind::Insert {
        let p = g.phi(op.edge).unwrap_or(2);
        for (&key, &(_, new)) in &moved {
            if p < new || !reaches(g, key.u(), new, op.edge) {
                return fail(
                    "membership",
                    format!(
                        "{key} rose to {new} but is not joined to {} at that level",
                        op.edge
                    ),
                );
            }
        }
    }
    Ok(())
}

fn reaches(g: &Graph, from: VertexId, k: u32, target: EdgeKey) -> bool {
    let mut seen = BTreeSet::from([from]);
    let mut queue = VecDeque::from([from]);
    while let Some(x) = queue.pop_front() {
        if x == target.u() || x == target.v() {
            return true;
        }
        for y in g.neighbors(x) {
            let key = EdgeKey::new(x, y).expect("no self-loops");
            if g.phi(key).unwrap_or(0) >= k && seen.insert(y) {
                queue.push_back(y);
            }
        }
    }
    false
}

/// Properties of any correct truss assignment at rest: support and
/// neighbourhood upper bounds, and no leftover pass flags.
pub fn check_quiescent(g: &Graph) -> Result<(), CheckFailure> {
    for (key, st) in g.edges() {
        if st.marked || st.unchanged {
            return fail("flags", format!("{key} still flagged"));
        }
        let common = g
            .common_neighbors(key.u(), key.v())
            .expect("endpoints exist");
        if st.phi as usize > common.len() + 2 {
            return fail(
                "support-bound",
                format!("{key} has phi {} with support {}", st.phi, common.len()),
            );
        }
        let ceiling = common
            .iter()
            .flat_map(|&w| [EdgeKey::new(key.u(), w), EdgeKey::new(key.v(), w)])
            .flatten()
            .filter_map(|leg| g.phi(leg))
            .max()
            .unwrap_or(2);
        if st.phi > ceiling {
            return fail(
                "neighbour-bound",
                format!(
                    "{key} has phi {} above its triangle legs' {ceiling}",
                    st.phi
                ),
            );
        }
    }
    Ok(())
}

/// Every representative is a present edge at or above its level and every
/// maximal k-truss holds at least one.
pub fn check_index(g: &Graph, idx: &TrussIndex) -> Result<(), CheckFailure> {
    let top = g.max_phi().max(idx.levels().last().unwrap_or(0));
    for k in 3..=top {
        let reps: BTreeSet<EdgeKey> = idx.reps(k).collect();
        for &r in &reps {
            match g.phi(r) {
                Some(p) if p >= k => {}
                p => {
                    return fail(
                        "index-validity",
                        format!("rep {r} at level {k} has phi {p:?}"),
                    )
                }
            }
        }
        for comp in query_k_truss_scan(g, k) {
            if !comp.iter().any(|e| reps.contains(e)) {
                return fail(
                    "index-coverage",
                    format!("level {k} component at {} has no rep", comp[0]),
                );
            }
        }
    }
    Ok(())
}

fn check_oracle(g: &Graph) -> Result<(), CheckFailure> {
    let expected = decompose_naive(g);
    for (key, st) in g.edges() {
        let want = expected.get(&key).copied();
        if want != Some(st.phi) {
            return fail(
                "oracle",
                format!("{key} has phi {} but the oracle says {want:?}", st.phi),
            );
        }
    }
    Ok(())
}

pub fn verify_stream(g: &Graph, stream: &[UpdateOp]) -> Result<VerifySummary, BenchError> {
    verify_stream_with(g, stream, Fault::None)
}

/// Like [`verify_stream`], with a deliberate defect injected into maintenance.
#[doc(hidden)]
pub fn verify_stream_with(
    g: &Graph,
    stream: &[UpdateOp],
    fault: Fault,
) -> Result<VerifySummary, BenchError> {
    validate_stream(g, stream)?;
    let mut edges = g.edge_count();
    let peak = stream.iter().fold(edges, |peak, op| {
        match op.kind {
            UpdateKind::Insert => edges += 1,
            UpdateKind::Delete => edges -= 1,
        }
        peak.max(edges)
    });
    if peak > EDGE_LIMIT {
        return Err(BenchError::TooLarge {
            edges: peak,
            limit: EDGE_LIMIT,
        });
    }

    let violation = |op_index: Option<usize>, f: CheckFailure| {
        BenchError::Verification(Box::new(Violation {
            op_index,
            op: op_index.map(|i| stream[i]),
            check: f.check,
            detail: f.detail,
        }))
    };

    let mut h = g.clone();
    truss_decompose(&mut h);
    let mut idx = build_index(&mut h);
    check_oracle(&h)
        .and_then(|_| check_quiescent(&h))
        .and_then(|_| check_index(&h, &idx))
        .map_err(|f| violation(None, f))?;

    let mut summary = VerifySummary::default();
    for (i, op) in stream.iter().enumerate() {
        let before = phi_map(&h);
        let report = match op.kind {
            UpdateKind::Insert => insert_with_fault(&mut h, op.edge, fault)?,
            UpdateKind::Delete => delete_with_fault(&mut h, op.edge, fault)?,
        };
        match op.kind {
            UpdateKind::Insert => {
                summary.inserts += 1;
                maintain_index_insert(&mut h, &mut idx, &report, op.edge);
            }
            UpdateKind::Delete => {
                summary.deletes += 1;
                maintain_index_delete(&mut h, &mut idx, &report, op.edge);
            }
        }
        summary.ops += 1;
        summary.changed += report.changed.len();
        summary.max_changed = summary.max_changed.max(report.changed.len());
        summary.reruns += report.rerun_count;
        check_update(&before, &h, op, &report)
            .and_then(|_| check_oracle(&h))
            .and_then(|_| check_quiescent(&h))
            .and_then(|_| check_index(&h, &idx))
            .map_err(|f| violation(Some(i), f))?;
    }
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bench::generate_updates;
    use crate::generators;

    #[test]
    fn delete_then_reinsert_passes() {
        let g = generators::glued_cliques(&[3, 4, 5]);
        let ab = EdgeKey::of(0, 1);
        let s = verify_stream(&g, &[UpdateOp::delete(ab), UpdateOp::insert(ab)]).unwrap();
        assert_eq!(s.ops, 2);
        assert_eq!(s.changed, 2 * (g.edge_count() - 1));
    }

    #[test]
    fn empty_stream_passes() {
        assert_eq!(
            verify_stream(&generators::octahedron(), &[]).unwrap().ops,
            0
        );
    }

    #[test]
    fn skipped_marks_are_caught() {
        let g = generators::gnp(40, 0.2, 8);
        let stream = generate_updates(&g, 1000, 8, 0.5).unwrap();
        let err = verify_stream_with(&g, &stream, Fault::SkipMark).unwrap_err();
        let BenchError::Verification(v) = err else {
            panic!("expected a violation, got {err}");
        };
        assert!(v.op_index.is_some());
        verify_stream(&g, &stream[..200]).unwrap();
    }

    #[test]
    fn size_guard() {
        let g = generators::complete(101);
        assert!(matches!(
            verify_stream(&g, &[]),
            Err(BenchError::TooLarge { .. })
        ));
    }
}
