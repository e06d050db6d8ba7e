//! Small hand-checkable graphs used throughout the tests and docs.

use crate::graph::BipartiteGraph;

/// Nine edges `(u0,v0) (u0,v1) (u1,v0) (u1,v1) (u2,v0) (u2,v1) (u2,v2) (u3,v1) (u3,v2)`,
/// numbered `e0..e8` in that order. Edges `e0..e5` form a 3-bloom with bitruss
/// number 2; `e6..e8` have bitruss number 1.
pub fn nine_edge() -> BipartiteGraph {
    BipartiteGraph::from_pairs(NINE_EDGES.iter().copied())
}

pub const NINE_EDGES: [(u64, u64); 9] = [
    (0, 0),
    (0, 1),
    (1, 0),
    (1, 1),
    (2, 0),
    (2, 1),
    (2, 2),
    (3, 1),
    (3, 2),
];

/// `nine_edge` plus the two butterfly-free edges `(u2,v3)` and `(u3,v4)`.
pub fn eleven_edge() -> BipartiteGraph {
    BipartiteGraph::from_pairs(NINE_EDGES.iter().copied().chain([(2, 3), (3, 4)]))
}

/// Edge-list text for `nine_edge`, in the loader's input format.
pub fn nine_edge_text() -> String {
    let mut s = String::from("% bip unweighted\n");
    for (u, v) in NINE_EDGES {
        s.push_str(&format!("{u} {v}\n"));
    }
    s
}
