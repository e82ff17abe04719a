//! Batch truss decomposition by support peeling.

use rustc_hash::FxHashMap;

use crate::graph::{Edge, Graph, Ix};

/// Bucket queue of edge slots keyed by remaining support.
///
/// Bin-sort layout: `order` holds edge slots sorted by support, `start[s]` is
/// the first position of bucket `s`, `pos[slot]` is the slot's position in
/// `order`. Every live edge sits in exactly one bucket, the one matching its
/// current support; decrementing moves it to the previous bucket in O(1).
#[derive(Debug)]
pub struct SupportBuckets {
    support: Vec<u32>,
    order: Vec<usize>,
    pos: Vec<usize>,
    start: Vec<usize>,
    next: usize,
}

impl SupportBuckets {
    pub fn new(support: Vec<u32>) -> Self {
        let n = support.len();
        let max = support.iter().copied().max().unwrap_or(0) as usize;
        let mut start = vec![0usize; max + 2];
        for &s in &support {
            start[s as usize + 1] += 1;
        }
        for i in 1..start.len() {
            start[i] += start[i - 1];
        }
        let mut fill = start.clone();
        let mut order = vec![0usize; n];
        let mut pos = vec![0usize; n];
        for (slot, &s) in support.iter().enumerate() {
            let p = fill[s as usize];
            fill[s as usize] += 1;
            order[p] = slot;
            pos[slot] = p;
        }
        SupportBuckets {
            support,
            order,
            pos,
            start,
            next: 0,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.next >= self.order.len()
    }

    /// Support of the next edge `pop` would return.
    pub fn peek_support(&self) -> Option<u32> {
        self.order.get(self.next).map(|&slot| self.support[slot])
    }

    /// Removes and returns a minimum-support slot with its support.
    pub fn pop(&mut self) -> Option<(usize, u32)> {
        let slot = *self.order.get(self.next)?;
        let s = self.support[slot];
        // The popped slot is the head of its bucket; shrink that bucket.
        self.start[s as usize] += 1;
        self.next += 1;
        Some((slot, s))
    }

    pub fn support_of(&self, slot: usize) -> u32 {
        self.support[slot]
    }

    /// Whether `slot` has not been popped yet.
    pub fn is_live(&self, slot: usize) -> bool {
        self.pos[slot] >= self.next
    }

    /// Decrements a live slot's support by one.
    pub fn decrement(&mut self, slot: usize) {
        debug_assert!(self.is_live(slot));
        let s = self.support[slot] as usize;
        debug_assert!(s > 0);
        // Swap with the head of bucket s, then move the bucket boundary.
        let head_pos = self.start[s].max(self.next);
        let head = self.order[head_pos];
        let p = self.pos[slot];
        self.order.swap(p, head_pos);
        self.pos[head] = p;
        self.pos[slot] = head_pos;
        self.start[s] = head_pos + 1;
        self.support[slot] -= 1;
    }
}

/// Assigns every edge its truss number from scratch.
pub fn truss_decompose(g: &mut Graph) {
    peel(g, None);
}

/// Peels until every remaining edge is known to have `phi >= k`, then stops.
///
/// Edges peeled before the stop get their exact truss number. The remaining
/// edges get a lower bound that is at least `k`; only the split at `k` is
/// meaningful.
pub fn decompose_from_k(g: &mut Graph, k: u32) {
    peel(g, Some(k.max(3)));
}

fn peel(g: &mut Graph, stop_at: Option<u32>) {
    let edges: Vec<Edge> = g.dense_edges().collect();
    if edges.is_empty() {
        return;
    }
    let slot_of: FxHashMap<Edge, usize> = edges.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let support: Vec<u32> = edges
        .iter()
        .map(|e| g.common_count(e.0, e.1) as u32)
        .collect();
    let mut buckets = SupportBuckets::new(support);
    let mut phi = vec![0u32; edges.len()];
    let mut level = 2u32;
    let mut common: Vec<Ix> = Vec::new();

    while let Some(s) = buckets.peek_support() {
        if let Some(k) = stop_at {
            let next_level = level.max(s + 2);
            if next_level >= k {
                while let Some((slot, _)) = buckets.pop() {
                    phi[slot] = next_level;
                }
                break;
            }
        }
        let (slot, s) = buckets.pop().expect("peeked");
        level = level.max(s + 2);
        phi[slot] = level;
        let Edge(u, v) = edges[slot];
        common.clear();
        g.common_into(u, v, &mut common);
        for &w in &common {
            let a = slot_of[&Edge::new(u, w)];
            let b = slot_of[&Edge::new(v, w)];
            if buckets.is_live(a) && buckets.is_live(b) {
                buckets.decrement(a);
                buckets.decrement(b);
            }
        }
    }

    for (slot, e) in edges.into_iter().enumerate() {
        let st = g.st_mut(e);
        st.phi = phi[slot];
    }
}
