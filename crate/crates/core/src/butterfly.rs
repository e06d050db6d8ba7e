//! Butterfly counting through priority-obeyed wedges, and a brute-force oracle.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::graph::{Adjacency, BipartiteGraph, EdgeId, PriorityOrder, SubgraphView, VertexId};

/// Edge limit above which the brute-force oracle refuses to run.
pub const DEFAULT_ORACLE_LIMIT: usize = 50_000;

/// Per-edge butterfly supports and the total butterfly count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportTable {
    /// Indexed by graph edge ID; edges outside the counted (sub)graph hold 0.
    pub supports: Vec<u64>,
    pub total: u64,
}

impl SupportTable {
    pub fn max_support(&self) -> u64 {
        self.supports.iter().copied().max().unwrap_or(0)
    }
}

/// One priority-obeyed wedge `(start, middle, end)` by its two edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Wedge {
    pub middle: VertexId,
    /// Edge `(start, middle)`.
    pub near: EdgeId,
    /// Edge `(middle, end)`.
    pub far: EdgeId,
}

/// A maximal priority-obeyed bloom as discovered by the sweep: its dominant
/// pair and the wedges that compose it.
#[derive(Debug)]
pub struct SweptBloom<'a> {
    pub start: VertexId,
    pub end: VertexId,
    pub wedges: &'a [Wedge],
}

/// Scratch state for one start-vertex sweep: end vertex -> wedge count.
#[derive(Debug)]
pub(crate) struct WedgeTally {
    count: Vec<u32>,
    slot: Vec<u32>,
    fill: Vec<u32>,
    touched: Vec<VertexId>,
    grouped: Vec<Wedge>,
}

impl WedgeTally {
    pub(crate) fn new(vertex_count: usize) -> Self {
        WedgeTally {
            count: vec![0; vertex_count],
            slot: vec![0; vertex_count],
            fill: vec![0; vertex_count],
            touched: Vec::new(),
            grouped: Vec::new(),
        }
    }

    fn clear(&mut self) {
        for &w in &self.touched {
            self.count[w as usize] = 0;
        }
        self.touched.clear();
        self.grouped.clear();
    }
}

/// Visits every maximal priority-obeyed bloom with at least two wedges.
///
/// Start vertices are scanned in ID order; within one start vertex, blooms
/// are reported in the order their end vertex was first reached. Returns the
/// total number of priority-obeyed wedges seen.
pub fn sweep_blooms(
    adj: &Adjacency,
    priority: &PriorityOrder,
    mut on_bloom: impl FnMut(SweptBloom<'_>),
) -> u64 {
    let mut tally = WedgeTally::new(adj.vertex_count());
    let mut wedge_total = 0u64;
    for u in 0..adj.vertex_count() as VertexId {
        let pu = priority.rank(u);
        tally.clear();
        for &(v, _) in adj.neighbors(u) {
            if priority.rank(v) >= pu {
                continue;
            }
            for &(w, _) in adj.neighbors(v) {
                if priority.rank(w) >= pu {
                    continue;
                }
                let c = &mut tally.count[w as usize];
                if *c == 0 {
                    tally.touched.push(w);
                }
                *c += 1;
                wedge_total += 1;
            }
        }

        // Group the wedges of every end vertex with two or more of them.
        let mut offset = 0u32;
        for &w in &tally.touched {
            let c = tally.count[w as usize];
            if c > 1 {
                tally.slot[w as usize] = offset;
                tally.fill[w as usize] = offset;
                offset += c;
            }
        }
        if offset == 0 {
            continue;
        }
        tally.grouped.resize(
            offset as usize,
            Wedge {
                middle: 0,
                near: 0,
                far: 0,
            },
        );
        for &(v, near) in adj.neighbors(u) {
            if priority.rank(v) >= pu {
                continue;
            }
            for &(w, far) in adj.neighbors(v) {
                if priority.rank(w) >= pu || tally.count[w as usize] < 2 {
                    continue;
                }
                let at = tally.fill[w as usize] as usize;
                tally.grouped[at] = Wedge {
                    middle: v,
                    near,
                    far,
                };
                tally.fill[w as usize] += 1;
            }
        }
        for &w in &tally.touched {
            let c = tally.count[w as usize];
            if c > 1 {
                let s = tally.slot[w as usize] as usize;
                on_bloom(SweptBloom {
                    start: u,
                    end: w,
                    wedges: &tally.grouped[s..s + c as usize],
                });
            }
        }
    }
    wedge_total
}

/// Exact per-edge butterfly supports of the graph described by `adj`.
///
/// Each bloom of `k` wedges adds `k - 1` to each of its `2k` edges.
pub fn count_supports_in(adj: &Adjacency, priority: &PriorityOrder, edge_count: usize) -> SupportTable {
    let mut supports = vec![0u64; edge_count];
    sweep_blooms(adj, priority, |bloom| {
        let k = bloom.wedges.len() as u64;
        for wedge in bloom.wedges {
            supports[wedge.near as usize] += k - 1;
            supports[wedge.far as usize] += k - 1;
        }
    });
    let total = supports.iter().sum::<u64>() / 4;
    SupportTable { supports, total }
}

/// Supports over all alive edges of `g`, with priority recomputed on them.
pub fn count_supports(g: &BipartiteGraph) -> SupportTable {
    count_supports_view(&g.full_view())
}

/// Supports within a view; priority is recomputed on the view's degrees.
pub fn count_supports_view(view: &SubgraphView<'_>) -> SupportTable {
    let adj = view.adjacency();
    let priority = PriorityOrder::from_adjacency(&adj);
    count_supports_in(&adj, &priority, view.parent().edge_count())
}

/// Number of priority-obeyed wedges on the alive edges of `g`.
pub fn priority_obeyed_wedges(g: &BipartiteGraph) -> u64 {
    let adj = g.full_view().adjacency();
    let priority = PriorityOrder::from_adjacency(&adj);
    sweep_blooms(&adj, &priority, |_| {})
}

/// A butterfly as two upper and two lower internal vertex IDs, each pair ascending.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Butterfly {
    pub upper: [VertexId; 2],
    pub lower: [VertexId; 2],
}

fn alive_upper_sets(g: &BipartiteGraph) -> BTreeMap<VertexId, BTreeSet<VertexId>> {
    let mut sets: BTreeMap<VertexId, BTreeSet<VertexId>> = BTreeMap::new();
    for (id, e) in g.edges().iter().enumerate() {
        if g.is_alive(id as EdgeId) {
            sets.entry(e.upper).or_default().insert(e.lower);
        }
    }
    sets
}

fn check_limit(g: &BipartiteGraph, limit: usize) -> Result<()> {
    let edges = g.alive_count();
    if edges > limit {
        return Err(Error::OracleRefused { edges, limit });
    }
    Ok(())
}

/// Lists every butterfly among the alive edges of `g` by checking each pair of
/// upper vertices for pairs of common lower neighbors.
pub fn enumerate_butterflies_bruteforce(g: &BipartiteGraph, limit: usize) -> Result<Vec<Butterfly>> {
    check_limit(g, limit)?;
    let sets = alive_upper_sets(g);
    let uppers: Vec<_> = sets.keys().copied().collect();
    let mut out = Vec::new();
    for (i, &a) in uppers.iter().enumerate() {
        for &b in &uppers[i + 1..] {
            let common: Vec<VertexId> = sets[&a].intersection(&sets[&b]).copied().collect();
            for (j, &x) in common.iter().enumerate() {
                for &y in &common[j + 1..] {
                    out.push(Butterfly {
                        upper: [a, b],
                        lower: [x, y],
                    });
                }
            }
        }
    }
    Ok(out)
}

/// Per-edge butterfly counts of the alive edges, from the oracle's enumeration.
pub fn supports_bruteforce(g: &BipartiteGraph, limit: usize) -> Result<Vec<u64>> {
    let butterflies = enumerate_butterflies_bruteforce(g, limit)?;
    let lookup: HashMap<(VertexId, VertexId), EdgeId> = g
        .edges()
        .iter()
        .enumerate()
        .filter(|(id, _)| g.is_alive(*id as EdgeId))
        .map(|(id, e)| ((e.upper, e.lower), id as EdgeId))
        .collect();
    let mut supports = vec![0u64; g.edge_count()];
    for b in &butterflies {
        for u in b.upper {
            for l in b.lower {
                supports[lookup[&(u, l)] as usize] += 1;
            }
        }
    }
    Ok(supports)
}

/// Ground-truth bitruss numbers: recount from scratch, delete one
/// minimum-support edge, record the running threshold, repeat.
pub fn decompose_bruteforce(g: &BipartiteGraph, limit: usize) -> Result<Vec<u64>> {
    check_limit(g, limit)?;
    let mut work = g.clone();
    let mut phi = vec![0u64; g.edge_count()];
    let mut threshold = 0u64;
    loop {
        let supports = supports_bruteforce(&work, limit)?;
        let next = (0..work.edge_count() as EdgeId)
            .filter(|&e| work.is_alive(e))
            .min_by_key(|&e| (supports[e as usize], e));
        let Some(e) = next else { break };
        threshold = threshold.max(supports[e as usize]);
        phi[e as usize] = threshold;
        work.kill_edge(e);
    }
    Ok(phi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::graph::load_edge_list;

    #[test]
    fn example_supports() {
        let g = fixtures::nine_edge();
        let t = count_supports(&g);
        assert_eq!(t.supports, vec![2, 2, 2, 2, 2, 3, 1, 1, 1]);
        assert_eq!(t.total, 4);
    }

    #[test]
    fn single_edge_has_no_support() {
        let g = load_edge_list("3 4\n".as_bytes()).unwrap();
        let t = count_supports(&g);
        assert_eq!(t.supports, vec![0]);
        assert_eq!(t.total, 0);
    }

    #[test]
    fn large_bloom_supports() {
        let k = 1001u64;
        let g = BipartiteGraph::from_pairs((0..2).flat_map(|u| (0..k).map(move |v| (u, v))));
        let t = count_supports(&g);
        assert!(t.supports.iter().all(|&s| s == k - 1));
        assert_eq!(t.total, k * (k - 1) / 2);
    }

    #[test]
    fn oracle_lists_example_butterflies() {
        let g = fixtures::nine_edge();
        let found = enumerate_butterflies_bruteforce(&g, DEFAULT_ORACLE_LIMIT).unwrap();
        let u = |l| g.upper_vertex(l).unwrap();
        let v = |l| g.lower_vertex(l).unwrap();
        let mut expected = vec![
            Butterfly { upper: [u(0), u(1)], lower: [v(0), v(1)] },
            Butterfly { upper: [u(0), u(2)], lower: [v(0), v(1)] },
            Butterfly { upper: [u(1), u(2)], lower: [v(0), v(1)] },
            Butterfly { upper: [u(2), u(3)], lower: [v(1), v(2)] },
        ];
        expected.sort();
        let mut found = found;
        found.sort();
        assert_eq!(found, expected);
    }

    #[test]
    fn oracle_on_wedge_and_biclique() {
        let path = load_edge_list("0 0\n1 0\n".as_bytes()).unwrap();
        assert!(enumerate_butterflies_bruteforce(&path, 10).unwrap().is_empty());
        let k33 = BipartiteGraph::from_pairs((0..3).flat_map(|u| (0..3).map(move |v| (u, v))));
        assert_eq!(enumerate_butterflies_bruteforce(&k33, 100).unwrap().len(), 9);
    }

    #[test]
    fn oracle_refuses_oversized_input() {
        let g = fixtures::nine_edge();
        let err = enumerate_butterflies_bruteforce(&g, 8).unwrap_err();
        assert!(matches!(err, Error::OracleRefused { edges: 9, limit: 8 }));
        assert!(decompose_bruteforce(&g, 8).is_err());
    }

    #[test]
    fn oracle_decomposition_examples() {
        assert_eq!(
            decompose_bruteforce(&fixtures::nine_edge(), DEFAULT_ORACLE_LIMIT).unwrap(),
            vec![2, 2, 2, 2, 2, 2, 1, 1, 1]
        );
        assert_eq!(
            decompose_bruteforce(&fixtures::eleven_edge(), DEFAULT_ORACLE_LIMIT).unwrap(),
            vec![2, 2, 2, 2, 2, 2, 1, 1, 1, 0, 0]
        );
        let empty = load_edge_list("".as_bytes()).unwrap();
        assert!(decompose_bruteforce(&empty, 10).unwrap().is_empty());
    }

    #[test]
    fn wedge_count_within_space_bound() {
        let g = fixtures::eleven_edge();
        let bound: usize = g
            .edges()
            .iter()
            .map(|e| g.degree(e.upper).min(g.degree(e.lower)))
            .sum();
        assert!(priority_obeyed_wedges(&g) as usize <= bound);
    }
}
