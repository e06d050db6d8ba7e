//! Bipartite graph storage, edge-list loading, vertex priority and subgraph views.
//!
//! Internal vertex IDs are dense. Lower-layer vertices occupy `0..lower_count`
//! and upper-layer vertices occupy `lower_count..lower_count + upper_count`, so
//! every upper vertex ID exceeds every lower vertex ID.

use std::collections::HashMap;
use std::io::BufRead;

use crate::error::{Error, Result};

pub type VertexId = u32;
pub type EdgeId = u32;

/// One edge as a pair of internal vertex IDs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Edge {
    pub upper: VertexId,
    pub lower: VertexId,
}

/// Compressed adjacency. Each vertex's neighbors are stored as
/// `(neighbor, edge id)` pairs sorted by neighbor ID.
#[derive(Debug, Clone, Default)]
pub struct Adjacency {
    offsets: Vec<usize>,
    targets: Vec<(VertexId, EdgeId)>,
}

impl Adjacency {
    /// Builds adjacency for `vertex_count` vertices from the selected edges.
    pub fn build(vertex_count: usize, edges: &[Edge], selected: impl Fn(EdgeId) -> bool) -> Self {
        let mut degree = vec![0usize; vertex_count];
        for (id, e) in edges.iter().enumerate() {
            if selected(id as EdgeId) {
                degree[e.upper as usize] += 1;
                degree[e.lower as usize] += 1;
            }
        }
        let mut offsets = Vec::with_capacity(vertex_count + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut cursor = offsets[..vertex_count].to_vec();
        let mut targets = vec![(0, 0); *offsets.last().unwrap()];
        for (id, e) in edges.iter().enumerate() {
            let id = id as EdgeId;
            if selected(id) {
                targets[cursor[e.upper as usize]] = (e.lower, id);
                cursor[e.upper as usize] += 1;
                targets[cursor[e.lower as usize]] = (e.upper, id);
                cursor[e.lower as usize] += 1;
            }
        }
        for v in 0..vertex_count {
            targets[offsets[v]..offsets[v + 1]].sort_unstable();
        }
        Adjacency { offsets, targets }
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.offsets.len().saturating_sub(1)
    }

    #[inline]
    pub fn neighbors(&self, v: VertexId) -> &[(VertexId, EdgeId)] {
        let v = v as usize;
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    #[inline]
    pub fn degree(&self, v: VertexId) -> usize {
        let v = v as usize;
        self.offsets[v + 1] - self.offsets[v]
    }

    /// Edge ID of `(a, b)` if present, by binary search in `a`'s list.
    pub fn edge_between(&self, a: VertexId, b: VertexId) -> Option<EdgeId> {
        let nbrs = self.neighbors(a);
        nbrs.binary_search_by_key(&b, |&(n, _)| n)
            .ok()
            .map(|i| nbrs[i].1)
    }
}

/// A simple bipartite graph with dense internal IDs and logical edge deletion.
#[derive(Debug, Clone)]
pub struct BipartiteGraph {
    upper_count: usize,
    lower_count: usize,
    edges: Vec<Edge>,
    adjacency: Adjacency,
    alive: Vec<bool>,
    upper_labels: Vec<u64>,
    lower_labels: Vec<u64>,
    duplicates: usize,
}

impl BipartiteGraph {
    /// Builds a graph from external `(upper, lower)` label pairs.
    ///
    /// Labels of the two layers live in disjoint namespaces. Vertices are
    /// numbered in order of first appearance within their layer; duplicate
    /// pairs are dropped and counted.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (u64, u64)>) -> Self {
        let mut upper_index: HashMap<u64, u32> = HashMap::new();
        let mut lower_index: HashMap<u64, u32> = HashMap::new();
        let mut upper_labels = Vec::new();
        let mut lower_labels = Vec::new();
        let mut raw: Vec<(u32, u32)> = Vec::new();
        let mut seen: HashMap<(u32, u32), ()> = HashMap::new();
        let mut duplicates = 0;
        for (u, l) in pairs {
            let ui = *upper_index.entry(u).or_insert_with(|| {
                upper_labels.push(u);
                (upper_labels.len() - 1) as u32
            });
            let li = *lower_index.entry(l).or_insert_with(|| {
                lower_labels.push(l);
                (lower_labels.len() - 1) as u32
            });
            if seen.insert((ui, li), ()).is_some() {
                duplicates += 1;
                continue;
            }
            raw.push((ui, li));
        }
        let lower_count = lower_labels.len();
        let upper_count = upper_labels.len();
        let edges: Vec<Edge> = raw
            .into_iter()
            .map(|(u, l)| Edge {
                upper: lower_count as u32 + u,
                lower: l,
            })
            .collect();
        let adjacency = Adjacency::build(lower_count + upper_count, &edges, |_| true);
        let alive = vec![true; edges.len()];
        BipartiteGraph {
            upper_count,
            lower_count,
            edges,
            adjacency,
            alive,
            upper_labels,
            lower_labels,
            duplicates,
        }
    }

    pub fn upper_count(&self) -> usize {
        self.upper_count
    }

    pub fn lower_count(&self) -> usize {
        self.lower_count
    }

    pub fn vertex_count(&self) -> usize {
        self.upper_count + self.lower_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Number of duplicate input lines dropped while loading.
    pub fn duplicates_dropped(&self) -> usize {
        self.duplicates
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> Edge {
        self.edges[e as usize]
    }

    /// Adjacency over every loaded edge, ignoring alive flags.
    pub fn adjacency(&self) -> &Adjacency {
        &self.adjacency
    }

    pub fn is_upper(&self, v: VertexId) -> bool {
        v as usize >= self.lower_count
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adjacency.degree(v)
    }

    pub fn is_alive(&self, e: EdgeId) -> bool {
        self.alive[e as usize]
    }

    pub fn alive_flags(&self) -> &[bool] {
        &self.alive
    }

    pub fn alive_count(&self) -> usize {
        self.alive.iter().filter(|&&a| a).count()
    }

    pub fn kill_edge(&mut self, e: EdgeId) {
        self.alive[e as usize] = false;
    }

    /// External label of a vertex.
    pub fn label(&self, v: VertexId) -> u64 {
        if self.is_upper(v) {
            self.upper_labels[v as usize - self.lower_count]
        } else {
            self.lower_labels[v as usize]
        }
    }

    /// External `(upper, lower)` labels of an edge.
    pub fn edge_labels(&self, e: EdgeId) -> (u64, u64) {
        let edge = self.edge(e);
        (self.label(edge.upper), self.label(edge.lower))
    }

    /// Internal ID of the upper vertex with external label `label`.
    pub fn upper_vertex(&self, label: u64) -> Option<VertexId> {
        self.upper_labels
            .iter()
            .position(|&l| l == label)
            .map(|i| (self.lower_count + i) as VertexId)
    }

    /// Internal ID of the lower vertex with external label `label`.
    pub fn lower_vertex(&self, label: u64) -> Option<VertexId> {
        self.lower_labels
            .iter()
            .position(|&l| l == label)
            .map(|i| i as VertexId)
    }

    /// Edge ID of the edge between the given external labels.
    pub fn find_edge(&self, upper: u64, lower: u64) -> Option<EdgeId> {
        let u = self.upper_vertex(upper)?;
        let l = self.lower_vertex(lower)?;
        self.adjacency.edge_between(u, l)
    }

    /// View over every alive edge.
    pub fn full_view(&self) -> SubgraphView<'_> {
        SubgraphView {
            parent: self,
            members: self.alive.clone(),
        }
    }

    /// Alive edges whose support is at least `threshold`.
    pub fn extract_candidate_subgraph(&self, supports: &[u64], threshold: u64) -> SubgraphView<'_> {
        let members = (0..self.edge_count())
            .map(|e| self.alive[e] && supports[e] >= threshold)
            .collect();
        SubgraphView {
            parent: self,
            members,
        }
    }

    /// Alive edges whose bitruss number is at least `k`.
    pub fn extract_k_bitruss(&self, phi: &[u64], k: u64) -> SubgraphView<'_> {
        self.extract_candidate_subgraph(phi, k)
    }
}

/// Parses a whitespace-separated edge list. Lines starting with `%` are comments
/// and blank lines are skipped.
pub fn load_edge_list(source: impl BufRead) -> Result<BipartiteGraph> {
    let mut pairs = Vec::new();
    for (idx, line) in source.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|e| Error::Io {
            context: format!("line {line_no}"),
            source: e,
        })?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('%') {
            continue;
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        if tokens.len() != 2 {
            return Err(Error::Parse {
                line: line_no,
                message: format!("expected 2 tokens, found {}", tokens.len()),
            });
        }
        let parse = |t: &str| {
            t.parse::<u64>().map_err(|_| Error::Parse {
                line: line_no,
                message: format!("invalid vertex id {t:?}"),
            })
        };
        pairs.push((parse(tokens[0])?, parse(tokens[1])?));
    }
    Ok(BipartiteGraph::from_pairs(pairs))
}

/// Total vertex order by `(degree, internal id)`. Ranks run from 1 to `|V|`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PriorityOrder {
    rank: Vec<u32>,
}

impl PriorityOrder {
    pub fn from_adjacency(adjacency: &Adjacency) -> Self {
        let n = adjacency.vertex_count();
        let mut order: Vec<VertexId> = (0..n as VertexId).collect();
        order.sort_unstable_by_key(|&v| (adjacency.degree(v), v));
        let mut rank = vec![0u32; n];
        for (i, &v) in order.iter().enumerate() {
            rank[v as usize] = i as u32 + 1;
        }
        PriorityOrder { rank }
    }

    #[inline]
    pub fn rank(&self, v: VertexId) -> u32 {
        self.rank[v as usize]
    }

    pub fn ranks(&self) -> &[u32] {
        &self.rank
    }
}

/// Priority order of `g` over all loaded edges.
pub fn compute_priority(g: &BipartiteGraph) -> PriorityOrder {
    PriorityOrder::from_adjacency(g.adjacency())
}

/// A subset of a graph's alive edges.
#[derive(Debug, Clone)]
pub struct SubgraphView<'g> {
    parent: &'g BipartiteGraph,
    members: Vec<bool>,
}

impl<'g> SubgraphView<'g> {
    /// Selects `members` from `parent`. Dead edges are never selected.
    pub fn new(parent: &'g BipartiteGraph, members: Vec<bool>) -> Self {
        let members = members
            .into_iter()
            .zip(parent.alive_flags())
            .map(|(m, &a)| m && a)
            .collect();
        SubgraphView { parent, members }
    }

    pub fn parent(&self) -> &'g BipartiteGraph {
        self.parent
    }

    pub fn contains(&self, e: EdgeId) -> bool {
        self.members[e as usize]
    }

    pub fn members(&self) -> &[bool] {
        &self.members
    }

    pub fn remove(&mut self, e: EdgeId) {
        self.members[e as usize] = false;
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.members
            .iter()
            .enumerate()
            .filter(|(_, &m)| m)
            .map(|(e, _)| e as EdgeId)
    }

    pub fn edge_count(&self) -> usize {
        self.members.iter().filter(|&&m| m).count()
    }

    /// Adjacency restricted to the view's edges, over the parent's vertex IDs.
    pub fn adjacency(&self) -> Adjacency {
        Adjacency::build(self.parent.vertex_count(), self.parent.edges(), |e| {
            self.members[e as usize]
        })
    }
}
