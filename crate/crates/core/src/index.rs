//! The bloom-edge index.
//!
//! One side of the index holds the maximal priority-obeyed blooms, the other
//! holds the edges they contain. Each (bloom, edge) link records the edge's
//! twin in that bloom: the other edge of the same wedge. Removing an edge then
//! touches only the edges that share a bloom with it.

use std::fmt::Write as _;

use crate::butterfly::{sweep_blooms, SupportTable};
use crate::graph::{Adjacency, BipartiteGraph, EdgeId, PriorityOrder, SubgraphView, VertexId};

pub type BloomId = u32;
pub type LinkId = u32;

#[derive(Debug, Clone)]
pub struct BloomRecord {
    /// Dominant pair: the sweep's start vertex (highest priority in the bloom)
    /// and end vertex.
    pub anchor: (VertexId, VertexId),
    /// Current bloom number, i.e. the number of surviving wedges.
    pub k: u32,
    links: Vec<LinkId>,
    alive: bool,
}

impl BloomRecord {
    /// Butterflies in a `k`-bloom.
    pub fn butterflies(&self) -> u64 {
        let k = self.k as u64;
        k * k.saturating_sub(1) / 2
    }

    pub fn link_ids(&self) -> &[LinkId] {
        &self.links
    }
}

#[derive(Debug, Clone)]
pub struct LinkRecord {
    pub bloom: BloomId,
    pub edge: EdgeId,
    /// Twin edge in `bloom`; `None` when the twin is an assigned edge that is
    /// not part of a compressed index.
    pub twin: Option<EdgeId>,
    twin_link: Option<LinkId>,
    pos_in_bloom: u32,
    pos_in_edge: u32,
    alive: bool,
}

/// Recovers `k` from `k(k-1)/2 = butterflies`, if `butterflies` is triangular.
pub fn bloom_number_from_butterflies(butterflies: u64) -> Option<u64> {
    let disc = 1 + 8 * butterflies;
    let root = disc.isqrt();
    if root * root != disc {
        return None;
    }
    let k = root.div_ceil(2);
    (k * (k - 1) / 2 == butterflies).then_some(k)
}

#[derive(Debug, Clone)]
pub struct BEIndex {
    blooms: Vec<BloomRecord>,
    links: Vec<LinkRecord>,
    edge_links: Vec<Vec<LinkId>>,
    supports: Vec<u64>,
    has_entry: Vec<bool>,
    live_links: usize,
    updates: u64,
    // scratch for batch removal
    batch_counter: Vec<u32>,
    in_batch: Vec<bool>,
}

impl BEIndex {
    /// Builds the index from a bloom sweep over `adj`. Edges flagged in
    /// `assigned` keep their blooms' wedge counts but get no links and no entry.
    pub fn from_adjacency(
        adj: &Adjacency,
        priority: &PriorityOrder,
        edge_count: usize,
        assigned: Option<&[bool]>,
    ) -> (BEIndex, SupportTable) {
        let is_assigned = |e: EdgeId| assigned.is_some_and(|a| a[e as usize]);
        let mut index = BEIndex {
            blooms: Vec::new(),
            links: Vec::new(),
            edge_links: vec![Vec::new(); edge_count],
            supports: vec![0; edge_count],
            has_entry: vec![false; edge_count],
            live_links: 0,
            updates: 0,
            batch_counter: Vec::new(),
            in_batch: vec![false; edge_count],
        };
        let mut total = 0u64;
        sweep_blooms(adj, priority, |swept| {
            let bloom = index.blooms.len() as BloomId;
            let k = swept.wedges.len() as u32;
            index.blooms.push(BloomRecord {
                anchor: (swept.start, swept.end),
                k,
                links: Vec::with_capacity(2 * swept.wedges.len()),
                alive: true,
            });
            total += (k as u64) * (k as u64 - 1) / 2;
            for wedge in swept.wedges {
                let near_free = !is_assigned(wedge.near);
                let far_free = !is_assigned(wedge.far);
                let near_link = near_free.then(|| {
                    index.add_link(bloom, wedge.near, far_free.then_some(wedge.far))
                });
                let far_link = far_free.then(|| {
                    index.add_link(bloom, wedge.far, near_free.then_some(wedge.near))
                });
                if let (Some(a), Some(b)) = (near_link, far_link) {
                    index.links[a as usize].twin_link = Some(b);
                    index.links[b as usize].twin_link = Some(a);
                }
                for (free, e) in [(near_free, wedge.near), (far_free, wedge.far)] {
                    if free {
                        index.supports[e as usize] += k as u64 - 1;
                        index.has_entry[e as usize] = true;
                    }
                }
            }
        });
        index.batch_counter = vec![0; index.blooms.len()];
        let table = SupportTable {
            supports: index.supports.clone(),
            total,
        };
        (index, table)
    }

    fn add_link(&mut self, bloom: BloomId, edge: EdgeId, twin: Option<EdgeId>) -> LinkId {
        let id = self.links.len() as LinkId;
        let b = &mut self.blooms[bloom as usize];
        let el = &mut self.edge_links[edge as usize];
        self.links.push(LinkRecord {
            bloom,
            edge,
            twin,
            twin_link: None,
            pos_in_bloom: b.links.len() as u32,
            pos_in_edge: el.len() as u32,
            alive: true,
        });
        b.links.push(id);
        el.push(id);
        self.live_links += 1;
        id
    }

    /// Detaches a link from both of its lists by swap-remove.
    fn unlink(&mut self, id: LinkId) {
        let link = &self.links[id as usize];
        if !link.alive {
            return;
        }
        let (bloom, edge) = (link.bloom as usize, link.edge as usize);
        let (pb, pe) = (link.pos_in_bloom as usize, link.pos_in_edge as usize);

        let bl = &mut self.blooms[bloom].links;
        bl.swap_remove(pb);
        if let Some(&moved) = bl.get(pb) {
            self.links[moved as usize].pos_in_bloom = pb as u32;
        }
        let el = &mut self.edge_links[edge];
        el.swap_remove(pe);
        if let Some(&moved) = el.get(pe) {
            self.links[moved as usize].pos_in_edge = pe as u32;
        }
        let link = &mut self.links[id as usize];
        link.alive = false;
        if let Some(t) = link.twin_link.take() {
            self.links[t as usize].twin_link = None;
        }
        self.live_links -= 1;
    }

    fn drop_bloom(&mut self, bloom: BloomId) {
        while let Some(&l) = self.blooms[bloom as usize].links.last() {
            self.unlink(l);
        }
        self.blooms[bloom as usize].alive = false;
    }

    /// Lowers `e`'s stored support by `by`, never below `floor`. Supports at
    /// or below `floor` are left alone. Returns whether the value changed.
    fn decrement(&mut self, e: EdgeId, by: u64, floor: u64, touched: &mut Vec<EdgeId>) -> bool {
        let s = &mut self.supports[e as usize];
        if *s <= floor || by == 0 {
            return false;
        }
        *s = floor.max(*s - by.min(*s));
        self.updates += 1;
        touched.push(e);
        true
    }

    /// Removes one edge. Every other linked edge sharing a bloom with `e` has
    /// its support lowered (the twin by `k - 1`, the rest by 1), clamped at
    /// `floor`. Returns the edges whose stored support changed.
    pub fn remove_edge(&mut self, g: &mut BipartiteGraph, e: EdgeId, floor: u64) -> Vec<EdgeId> {
        let mut touched = Vec::new();
        let own: Vec<LinkId> = self.edge_links[e as usize].clone();
        for link in own {
            let bloom = self.links[link as usize].bloom;
            let k = self.blooms[bloom as usize].k as u64;
            if let Some(twin_link) = self.links[link as usize].twin_link {
                let twin = self.links[twin_link as usize].edge;
                self.decrement(twin, k - 1, floor, &mut touched);
                self.unlink(twin_link);
            }
            self.unlink(link);
            for i in 0..self.blooms[bloom as usize].links.len() {
                let other = self.links[self.blooms[bloom as usize].links[i] as usize].edge;
                self.decrement(other, 1, floor, &mut touched);
            }
            let b = &mut self.blooms[bloom as usize];
            b.k -= 1;
            if b.k < 2 {
                self.drop_bloom(bloom);
            }
        }
        self.has_entry[e as usize] = false;
        g.kill_edge(e);
        touched
    }

    /// Removes a batch of edges that all hold the same minimum support `mbs`.
    ///
    /// Each bloom is visited once per batch: it loses `C` wedges, where `C`
    /// counts the batch edges linked to it with twins collapsed; twins outside
    /// the batch lose `k - 1` and every other surviving edge loses `C`.
    pub fn remove_batch(&mut self, g: &mut BipartiteGraph, batch: &[EdgeId], mbs: u64) -> Vec<EdgeId> {
        let mut touched = Vec::new();
        let mut hit: Vec<BloomId> = Vec::new();
        for &e in batch {
            self.in_batch[e as usize] = true;
        }
        let mut own = Vec::new();
        for &e in batch {
            own.clear();
            own.extend_from_slice(&self.edge_links[e as usize]);
            for &link in &own {
                let bloom = self.links[link as usize].bloom;
                let counter = &mut self.batch_counter[bloom as usize];
                if *counter == 0 {
                    hit.push(bloom);
                }
                *counter += 1;
                if let Some(twin_link) = self.links[link as usize].twin_link {
                    let twin = self.links[twin_link as usize].edge;
                    let k = self.blooms[bloom as usize].k as u64;
                    self.decrement(twin, k - 1, mbs, &mut touched);
                    self.unlink(twin_link);
                }
            }
        }
        for &bloom in &hit {
            let c = self.batch_counter[bloom as usize];
            for i in 0..self.blooms[bloom as usize].links.len() {
                let other = self.links[self.blooms[bloom as usize].links[i] as usize].edge;
                if !self.in_batch[other as usize] {
                    self.decrement(other, c as u64, mbs, &mut touched);
                }
            }
            self.blooms[bloom as usize].k -= c;
        }
        for &e in batch {
            while let Some(&l) = self.edge_links[e as usize].last() {
                self.unlink(l);
            }
            self.has_entry[e as usize] = false;
            self.in_batch[e as usize] = false;
            g.kill_edge(e);
        }
        for &bloom in &hit {
            self.batch_counter[bloom as usize] = 0;
            if self.blooms[bloom as usize].k < 2 && self.blooms[bloom as usize].alive {
                self.drop_bloom(bloom);
            }
        }
        touched
    }

    /// Stored support of `e` (0 for edges without an entry).
    pub fn support(&self, e: EdgeId) -> u64 {
        self.supports[e as usize]
    }

    pub fn supports(&self) -> &[u64] {
        &self.supports
    }

    pub fn has_entry(&self, e: EdgeId) -> bool {
        self.has_entry[e as usize]
    }

    /// Number of support writes that changed a stored value.
    pub fn updates(&self) -> u64 {
        self.updates
    }

    pub fn live_links(&self) -> usize {
        self.live_links
    }

    /// Live blooms in ID order.
    pub fn blooms(&self) -> impl Iterator<Item = (BloomId, &BloomRecord)> {
        self.blooms
            .iter()
            .enumerate()
            .filter(|(_, b)| b.alive)
            .map(|(i, b)| (i as BloomId, b))
    }

    pub fn bloom(&self, id: BloomId) -> Option<&BloomRecord> {
        self.blooms.get(id as usize).filter(|b| b.alive)
    }

    pub fn link(&self, id: LinkId) -> &LinkRecord {
        &self.links[id as usize]
    }

    pub fn links_of_edge(&self, e: EdgeId) -> impl Iterator<Item = &LinkRecord> {
        self.edge_links[e as usize]
            .iter()
            .map(|&l| &self.links[l as usize])
    }

    pub fn links_of_bloom(&self, b: BloomId) -> impl Iterator<Item = &LinkRecord> {
        self.blooms[b as usize]
            .links
            .iter()
            .map(|&l| &self.links[l as usize])
    }

    /// Sorted edge IDs linked to bloom `b`.
    pub fn bloom_edges(&self, b: BloomId) -> Vec<EdgeId> {
        let mut edges: Vec<EdgeId> = self.links_of_bloom(b).map(|l| l.edge).collect();
        edges.sort_unstable();
        edges
    }

    /// Twin of `e` in bloom `b`, if `e` is linked to `b` and its twin is present.
    pub fn twin(&self, b: BloomId, e: EdgeId) -> Option<EdgeId> {
        self.links_of_edge(e)
            .find(|l| l.bloom == b)
            .and_then(|l| l.twin)
    }

    /// One line per live bloom: `B<id> k=<k> edges=<sorted edge ids>`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (id, bloom) in self.blooms() {
            let edges: Vec<String> = self.bloom_edges(id).iter().map(|e| e.to_string()).collect();
            let _ = writeln!(out, "B{id} k={} edges={}", bloom.k, edges.join(","));
        }
        out
    }

    /// Checks link bookkeeping: list positions, twin symmetry, and that every
    /// live bloom has `k >= 2`.
    pub fn check_structure(&self) -> Result<(), String> {
        let mut live = 0;
        for (id, bloom) in self.blooms.iter().enumerate() {
            if !bloom.alive {
                if !bloom.links.is_empty() {
                    return Err(format!("dropped bloom {id} still has links"));
                }
                continue;
            }
            if bloom.k < 2 {
                return Err(format!("bloom {id} has k={}", bloom.k));
            }
            if bloom.links.len() > 2 * bloom.k as usize {
                return Err(format!("bloom {id} has more links than 2k"));
            }
            for (pos, &l) in bloom.links.iter().enumerate() {
                let link = &self.links[l as usize];
                if !link.alive || link.bloom as usize != id || link.pos_in_bloom as usize != pos {
                    return Err(format!("bloom {id} link {l} inconsistent"));
                }
                if self.edge_links[link.edge as usize][link.pos_in_edge as usize] != l {
                    return Err(format!("edge list of link {l} inconsistent"));
                }
                if let Some(t) = link.twin_link {
                    let twin = &self.links[t as usize];
                    if !twin.alive || twin.twin_link != Some(l) || twin.bloom != link.bloom {
                        return Err(format!("twin of link {l} is not an involution"));
                    }
                    if link.twin != Some(twin.edge) || twin.twin != Some(link.edge) {
                        return Err(format!("twin edges of link {l} disagree"));
                    }
                }
                live += 1;
            }
        }
        if live != self.live_links {
            return Err(format!("live link count {} != {}", live, self.live_links));
        }
        Ok(())
    }
}

/// Full index over the alive edges of `g`, with the priority computed on them.
pub fn build_index(g: &BipartiteGraph) -> (BEIndex, SupportTable) {
    let adj = g.full_view().adjacency();
    let priority = PriorityOrder::from_adjacency(&adj);
    BEIndex::from_adjacency(&adj, &priority, g.edge_count(), None)
}

/// Index over `view` in which only edges not flagged in `assigned` get links.
/// Every bloom keeps the wedge count it has in the view.
pub fn build_compressed_index(view: &SubgraphView<'_>, assigned: &[bool]) -> (BEIndex, SupportTable) {
    let adj = view.adjacency();
    let priority = PriorityOrder::from_adjacency(&adj);
    BEIndex::from_adjacency(&adj, &priority, view.parent().edge_count(), Some(assigned))
}
