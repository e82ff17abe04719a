//! Deterministic graph constructors for tests, fixtures and benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{EdgeKey, Graph};

/// Complete graph on vertices `0..n`.
pub fn complete(n: u64) -> Graph {
    let mut g = Graph::new();
    for a in 0..n {
        for b in a + 1..n {
            g.insert_edge_raw(EdgeKey::of(a, b)).expect("fresh edge");
        }
    }
    g
}

/// Path `0 - 1 - ... - (n-1)`.
pub fn path(n: u64) -> Graph {
    Graph::from_pairs((1..n).map(|i| (i - 1, i)))
}

/// Complete graphs of the given sizes sharing the single edge `(0, 1)`.
///
/// Clique `i` uses vertices `0`, `1` and a private run of `size - 2` labels
/// starting at `100 * (i + 1)`.
pub fn glued_cliques(sizes: &[u64]) -> Graph {
    let mut g = Graph::new();
    g.insert_edge_raw(EdgeKey::of(0, 1)).expect("fresh edge");
    for (i, &size) in sizes.iter().enumerate() {
        assert!(size >= 3, "clique size must be at least 3");
        let base = 100 * (i as u64 + 1);
        let mut members = vec![0u64, 1];
        members.extend(base..base + size - 2);
        for (x, &a) in members.iter().enumerate() {
            for &b in &members[x + 1..] {
                if (a, b) != (0, 1) {
                    g.insert_edge_raw(EdgeKey::of(a, b)).expect("fresh edge");
                }
            }
        }
    }
    g
}

/// Size of the clique in [`glued_cliques`] that owns `key`. For the shared
/// edge this is the largest size.
pub fn glued_clique_size(sizes: &[u64], key: EdgeKey) -> u32 {
    if key == EdgeKey::of(0, 1) {
        return sizes.iter().copied().max().unwrap_or(2) as u32;
    }
    let private = if key.u().0 >= 100 {
        key.u().0
    } else {
        key.v().0
    };
    sizes[(private / 100 - 1) as usize] as u32
}

/// Octahedron on `0..6`; antipodal pairs are `(0,5)`, `(1,4)`, `(2,3)`.
/// Every edge lies in exactly two triangles.
pub fn octahedron() -> Graph {
    let mut g = Graph::new();
    for a in 0..6u64 {
        for b in a + 1..6 {
            if a + b != 5 {
                g.insert_edge_raw(EdgeKey::of(a, b)).expect("fresh edge");
            }
        }
    }
    g
}

/// Triangular lattice of `w × h` cells wrapped into a torus. Vertex `(x, y)`
/// has label `y * w + x`. For `w, h >= 4` every edge is in exactly two
/// triangles, so the whole graph is a 4-truss.
pub fn triangular_torus(w: u64, h: u64) -> Graph {
    assert!(w >= 4 && h >= 4, "torus needs at least 4x4 cells");
    let id = |x: u64, y: u64| (y % h) * w + (x % w);
    let mut g = Graph::new();
    for y in 0..h {
        for x in 0..w {
            let here = id(x, y);
            for there in [id(x + 1, y), id(x, y + 1), id(x + 1, y + 1)] {
                g.insert_edge_raw(EdgeKey::of(here, there))
                    .expect("fresh edge");
            }
        }
    }
    g
}

/// Erdős–Rényi `G(n, p)` on vertices `0..n`, all vertices present.
pub fn gnp(n: u64, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = Graph::new();
    for a in 0..n {
        g.add_vertex(a.into());
    }
    for a in 0..n {
        for b in a + 1..n {
            if rng.random_bool(p) {
                g.insert_edge_raw(EdgeKey::of(a, b)).expect("fresh edge");
            }
        }
    }
    g
}

/// Parameters for [`community_graph`].
#[derive(Clone, Debug)]
pub struct CommunityParams {
    pub communities: u64,
    pub community_size: u64,
    /// Intra-community edge probability for community `i` is interpolated
    /// from `p_in_low` to `p_in_high`, giving a spread of truss numbers.
    pub p_in_low: f64,
    pub p_in_high: f64,
    /// Uniformly random edges added between arbitrary vertices.
    pub extra_edges: u64,
}

impl Default for CommunityParams {
    /// Roughly 50k edges with truss numbers spread up to the low teens.
    fn default() -> Self {
        CommunityParams {
            communities: 100,
            community_size: 50,
            p_in_low: 0.15,
            p_in_high: 0.45,
            extra_edges: 20_000,
        }
    }
}

/// Planted-community graph: dense random blocks plus random background edges.
pub fn community_graph(params: &CommunityParams, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = Graph::new();
    let n = params.communities * params.community_size;
    for v in 0..n {
        g.add_vertex(v.into());
    }
    for c in 0..params.communities {
        let t = if params.communities > 1 {
            c as f64 / (params.communities - 1) as f64
        } else {
            0.0
        };
        let p = params.p_in_low + t * (params.p_in_high - params.p_in_low);
        let base = c * params.community_size;
        for a in base..base + params.community_size {
            for b in a + 1..base + params.community_size {
                if rng.random_bool(p) {
                    g.insert_edge_raw(EdgeKey::of(a, b)).expect("fresh edge");
                }
            }
        }
    }
    let mut added = 0;
    while added < params.extra_edges && n > 1 {
        let a = rng.random_range(0..n);
        let b = rng.random_range(0..n);
        if let Some(key) = EdgeKey::new(a, b) {
            if g.insert_edge_raw(key).is_ok() {
                added += 1;
            }
        }
    }
    g
}
