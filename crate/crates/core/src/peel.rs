//! Bitruss decomposition by peeling.
//!
//! Four variants share the same output:
//! - [`bit_bs`] recounts the butterflies of each removed edge by walking neighbors.
//! - [`bit_be`] removes edges one at a time through the bloom-edge index.
//! - [`bit_be_batch`] removes every minimum-support edge at once and visits each
//!   touched bloom once per batch.
//! - [`bit_pc`] peels progressively smaller candidate subgraphs, highest
//!   thresholds first, so edges with large supports are settled early and then
//!   stay frozen in later, larger candidates.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::butterfly::{count_supports, count_supports_view, SupportTable};
use crate::error::{Error, Result};
use crate::graph::{BipartiteGraph, EdgeId};
use crate::index::{build_compressed_index, build_index, BEIndex};

/// Default step fraction for [`bit_pc`].
pub const DEFAULT_TAU: f64 = 0.02;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhaseTiming {
    pub name: &'static str,
    pub elapsed: Duration,
}

/// Counters collected during one run. Everything except `phases` is
/// deterministic for a given input.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RunStats {
    /// Stored-support writes that changed a value.
    pub support_updates: u64,
    pub peak_links: usize,
    /// Peeling rounds: batches for the batched peel, candidate subgraphs for
    /// the progressive one, removals otherwise.
    pub iterations: usize,
    pub butterflies: u64,
    pub max_support: u64,
    pub k_max: u64,
    pub phases: Vec<PhaseTiming>,
}

impl RunStats {
    fn phase(&mut self, name: &'static str, since: Instant) {
        self.phases.push(PhaseTiming {
            name,
            elapsed: since.elapsed(),
        });
    }

    fn record_counts(&mut self, table: &SupportTable) {
        self.butterflies = table.total;
        self.max_support = table.max_support();
        self.k_max = compute_kmax(&table.supports);
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecompositionResult {
    /// Bitruss number per edge ID.
    pub phi: Vec<u64>,
    pub stats: RunStats,
}

impl DecompositionResult {
    pub fn max_phi(&self) -> u64 {
        self.phi.iter().copied().max().unwrap_or(0)
    }
}

/// Min-support queue keyed by stored support. Supports only ever fall to the
/// current level, so the level never moves backwards. Within a level, edges
/// come out in ID order. Entries are validated lazily against the caller's
/// current supports.
#[derive(Debug)]
struct BucketQueue {
    buckets: Vec<Vec<EdgeId>>,
    level: usize,
    ready: BinaryHeap<Reverse<EdgeId>>,
}

impl BucketQueue {
    fn new(entries: impl Iterator<Item = (EdgeId, u64)>) -> Self {
        let mut buckets: Vec<Vec<EdgeId>> = Vec::new();
        for (e, s) in entries {
            let s = s as usize;
            if s >= buckets.len() {
                buckets.resize_with(s + 1, Vec::new);
            }
            buckets[s].push(e);
        }
        let mut q = BucketQueue {
            buckets,
            level: 0,
            ready: BinaryHeap::new(),
        };
        q.fill_ready();
        q
    }

    fn fill_ready(&mut self) {
        if let Some(b) = self.buckets.get_mut(self.level) {
            self.ready.extend(b.drain(..).map(Reverse));
        }
    }

    fn push(&mut self, e: EdgeId, support: u64) {
        let s = support as usize;
        debug_assert!(s >= self.level);
        if s == self.level {
            self.ready.push(Reverse(e));
        } else {
            self.buckets[s].push(e);
        }
    }

    /// Smallest-ID edge at the minimum live support.
    fn pop(&mut self, current: impl Fn(EdgeId) -> Option<u64>) -> Option<(u64, EdgeId)> {
        loop {
            while let Some(Reverse(e)) = self.ready.pop() {
                if current(e) == Some(self.level as u64) {
                    return Some((self.level as u64, e));
                }
            }
            if !self.advance() {
                return None;
            }
        }
    }

    /// Every live edge at the minimum support, in ID order.
    fn pop_level(&mut self, current: impl Fn(EdgeId) -> Option<u64>) -> Option<(u64, Vec<EdgeId>)> {
        loop {
            let mut batch: Vec<EdgeId> = self
                .ready
                .drain()
                .map(|Reverse(e)| e)
                .filter(|&e| current(e) == Some(self.level as u64))
                .collect();
            if !batch.is_empty() {
                batch.sort_unstable();
                batch.dedup();
                return Some((self.level as u64, batch));
            }
            if !self.advance() {
                return None;
            }
        }
    }

    fn advance(&mut self) -> bool {
        if self.level + 1 >= self.buckets.len() {
            return false;
        }
        self.level += 1;
        self.fill_ready();
        true
    }
}

/// Largest `k` such that at least `k` edges have support `>= k`.
pub fn compute_kmax(supports: &[u64]) -> u64 {
    let mut sorted = supports.to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    sorted
        .iter()
        .enumerate()
        .take_while(|&(i, &s)| s > i as u64)
        .count() as u64
}

/// Baseline peel without an index: each removal walks `w ∈ N(v) \ u` and
/// `x ∈ N(w) ∩ N(u) \ v` to find the butterflies of `(u, v)`.
pub fn bit_bs(g: &BipartiteGraph) -> DecompositionResult {
    let mut stats = RunStats::default();
    let t = Instant::now();
    let table = count_supports(g);
    stats.phase("count", t);
    stats.record_counts(&table);

    let t = Instant::now();
    let adj = g.adjacency();
    let mut alive: Vec<bool> = g.alive_flags().to_vec();
    let mut supports = table.supports;
    let mut phi = vec![0u64; g.edge_count()];
    let mut queue = BucketQueue::new(
        (0..g.edge_count() as EdgeId)
            .filter(|&e| alive[e as usize])
            .map(|e| (e, supports[e as usize])),
    );
    let mut updates = 0u64;
    while let Some((level, e)) = queue.pop(|e| alive[e as usize].then(|| supports[e as usize])) {
        stats.iterations += 1;
        phi[e as usize] = level;
        let edge = g.edge(e);
        let (u, v) = (edge.upper, edge.lower);
        for &(w, e_wv) in adj.neighbors(v) {
            if w == u || !alive[e_wv as usize] {
                continue;
            }
            // merge N(w) and N(u)
            let (nw, nu) = (adj.neighbors(w), adj.neighbors(u));
            let (mut i, mut j) = (0, 0);
            while i < nw.len() && j < nu.len() {
                let (x, e_wx) = nw[i];
                let (y, e_ux) = nu[j];
                if x < y {
                    i += 1;
                } else if y < x {
                    j += 1;
                } else {
                    i += 1;
                    j += 1;
                    if x == v || !alive[e_wx as usize] || !alive[e_ux as usize] {
                        continue;
                    }
                    for other in [e_ux, e_wv, e_wx] {
                        let s = &mut supports[other as usize];
                        if *s > level {
                            *s -= 1;
                            updates += 1;
                            queue.push(other, *s);
                        }
                    }
                }
            }
        }
        alive[e as usize] = false;
    }
    stats.support_updates = updates;
    stats.phase("peel", t);
    DecompositionResult { phi, stats }
}

/// State visible to a [`bit_be_observed`] callback after each removal.
pub struct PeelSnapshot<'a> {
    /// Current peel level; the removed edge was assigned this bitruss number.
    pub level: u64,
    pub removed: EdgeId,
    pub graph: &'a BipartiteGraph,
    pub index: &'a BEIndex,
}

/// Index-based bottom-up peel, one edge at a time.
pub fn bit_be(g: &BipartiteGraph) -> DecompositionResult {
    bit_be_observed(g, |_| {})
}

/// [`bit_be`] with a callback after every edge removal.
pub fn bit_be_observed(g: &BipartiteGraph, mut observe: impl FnMut(&PeelSnapshot<'_>)) -> DecompositionResult {
    let mut stats = RunStats::default();
    let t = Instant::now();
    let (mut index, table) = build_index(g);
    stats.phase("index", t);
    stats.record_counts(&table);
    stats.peak_links = index.live_links();

    let t = Instant::now();
    let mut work = g.clone();
    let mut phi = vec![0u64; g.edge_count()];
    // Zero-support edges have no index entry and settle at 0 right away.
    for e in 0..g.edge_count() as EdgeId {
        if work.is_alive(e) && !index.has_entry(e) {
            work.kill_edge(e);
        }
    }
    let mut queue = BucketQueue::new(
        (0..g.edge_count() as EdgeId)
            .filter(|&e| work.is_alive(e))
            .map(|e| (e, index.support(e))),
    );
    loop {
        let next = queue.pop(|e| work.is_alive(e).then(|| index.support(e)));
        let Some((level, e)) = next else { break };
        stats.iterations += 1;
        phi[e as usize] = level;
        for touched in index.remove_edge(&mut work, e, level) {
            queue.push(touched, index.support(touched));
        }
        observe(&PeelSnapshot {
            level,
            removed: e,
            graph: &work,
            index: &index,
        });
    }
    stats.support_updates = index.updates();
    stats.phase("peel", t);
    DecompositionResult { phi, stats }
}

/// Order in which a batch's edges are fed to the index.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum BatchOrder {
    #[default]
    EdgeId,
    /// Shuffle each batch with a seeded generator.
    Shuffled(u64),
}

/// Batched index-based peel with the default batch order.
pub fn bit_be_batch(g: &BipartiteGraph) -> DecompositionResult {
    bit_be_batch_with(g, BatchOrder::EdgeId)
}

pub fn bit_be_batch_with(g: &BipartiteGraph, order: BatchOrder) -> DecompositionResult {
    let mut stats = RunStats::default();
    let t = Instant::now();
    let (mut index, table) = build_index(g);
    stats.phase("index", t);
    stats.record_counts(&table);
    stats.peak_links = index.live_links();

    let t = Instant::now();
    let mut work = g.clone();
    let mut phi = vec![0u64; g.edge_count()];
    let mut assigned = vec![false; g.edge_count()];
    let candidates: Vec<EdgeId> = (0..g.edge_count() as EdgeId).filter(|&e| g.is_alive(e)).collect();
    let mut rng = match order {
        BatchOrder::Shuffled(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        BatchOrder::EdgeId => None,
    };
    let rounds = batch_peel(
        &mut index,
        &mut work,
        &candidates,
        0,
        &mut phi,
        &mut assigned,
        rng.as_mut(),
    );
    stats.iterations = rounds;
    stats.support_updates = index.updates();
    stats.phase("peel", t);
    DecompositionResult { phi, stats }
}

/// Peels `candidates` in batches of minimum stored support. A batch at
/// support `mbs` is assigned `phi = mbs` only when `mbs >= threshold`;
/// otherwise it is removed from the index and left unassigned. Returns the
/// number of batches.
fn batch_peel(
    index: &mut BEIndex,
    work: &mut BipartiteGraph,
    candidates: &[EdgeId],
    threshold: u64,
    phi: &mut [u64],
    assigned: &mut [bool],
    mut rng: Option<&mut ChaCha8Rng>,
) -> usize {
    let mut queue = BucketQueue::new(candidates.iter().map(|&e| (e, index.support(e))));
    let mut rounds = 0;
    loop {
        let next = queue.pop_level(|e| work.is_alive(e).then(|| index.support(e)));
        let Some((mbs, mut batch)) = next else { break };
        rounds += 1;
        if let Some(rng) = rng.as_deref_mut() {
            batch.shuffle(rng);
        }
        for touched in index.remove_batch(work, &batch, mbs) {
            queue.push(touched, index.support(touched));
        }
        if mbs >= threshold {
            for &e in &batch {
                phi[e as usize] = mbs;
                assigned[e as usize] = true;
            }
        }
    }
    rounds
}

/// Threshold schedule of the progressive peel: starts at `k_max` and steps
/// down by `ceil(k_max * tau)` until it reaches zero.
#[derive(Debug, Clone, PartialEq)]
pub struct ProgressiveSchedule {
    pub k_max: u64,
    pub tau: f64,
    pub alpha: u64,
    pub epsilon: u64,
    pub iteration: usize,
}

impl ProgressiveSchedule {
    pub fn new(k_max: u64, tau: f64) -> Result<Self> {
        if !(tau > 0.0 && tau <= 1.0) {
            return Err(Error::InvalidParameter(format!("tau must be in (0, 1], got {tau}")));
        }
        let alpha = ((k_max as f64) * tau).ceil() as u64;
        Ok(ProgressiveSchedule {
            k_max,
            tau,
            alpha: alpha.max(1),
            epsilon: k_max,
            iteration: 1,
        })
    }

    /// Moves to the next threshold, `max(epsilon - alpha, 0)`.
    pub fn advance(&mut self) {
        self.epsilon = self.epsilon.saturating_sub(self.alpha);
        self.iteration += 1;
    }

    /// Every threshold the schedule visits, ending with 0.
    pub fn thresholds(&self) -> Vec<u64> {
        let mut s = self.clone();
        let mut out = vec![s.epsilon];
        while s.epsilon > 0 {
            s.advance();
            out.push(s.epsilon);
        }
        out
    }
}

/// Progressive peel over candidate subgraphs of decreasing threshold.
pub fn bit_pc(g: &BipartiteGraph, tau: f64) -> Result<DecompositionResult> {
    let mut stats = RunStats::default();
    let t = Instant::now();
    let global = count_supports(g);
    stats.phase("count", t);
    stats.record_counts(&global);
    let mut schedule = ProgressiveSchedule::new(stats.k_max, tau)?;

    let m = g.edge_count();
    let mut phi = vec![0u64; m];
    // Dead edges never enter a candidate; treat them as settled.
    let mut assigned: Vec<bool> = g.alive_flags().iter().map(|&a| !a).collect();
    let mut remaining = assigned.iter().filter(|&&a| !a).count();
    let mut index_time = Duration::ZERO;
    let mut peel_time = Duration::ZERO;
    let mut updates = 0u64;

    while remaining > 0 {
        let eps = schedule.epsilon;
        stats.iterations += 1;

        let t = Instant::now();
        let mut view = g.extract_candidate_subgraph(&global.supports, eps);
        if eps > 0 {
            let local = count_supports_view(&view);
            for e in 0..m as EdgeId {
                if view.contains(e) && !assigned[e as usize] && local.supports[e as usize] < eps {
                    view.remove(e);
                }
            }
        }
        let (mut index, _) = build_compressed_index(&view, &assigned);
        stats.peak_links = stats.peak_links.max(index.live_links());
        index_time += t.elapsed();

        let t = Instant::now();
        let candidates: Vec<EdgeId> = view.edge_ids().filter(|&e| !assigned[e as usize]).collect();
        let mut work = g.clone();
        batch_peel(
            &mut index,
            &mut work,
            &candidates,
            eps,
            &mut phi,
            &mut assigned,
            None,
        );
        updates += index.updates();
        remaining = assigned.iter().filter(|&&a| !a).count();
        peel_time += t.elapsed();

        if eps == 0 {
            debug_assert_eq!(remaining, 0);
            break;
        }
        schedule.advance();
    }
    stats.support_updates = updates;
    stats.phases.push(PhaseTiming {
        name: "index",
        elapsed: index_time,
    });
    stats.phases.push(PhaseTiming {
        name: "peel",
        elapsed: peel_time,
    });
    Ok(DecompositionResult { phi, stats })
}

/// Algorithm selector used by the CLI.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    Bs,
    Be,
    BeBatch,
    Pc,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [Algorithm::Bs, Algorithm::Be, Algorithm::BeBatch, Algorithm::Pc];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Bs => "bs",
            Algorithm::Be => "be",
            Algorithm::BeBatch => "be-batch",
            Algorithm::Pc => "pc",
        }
    }

    pub fn run(self, g: &BipartiteGraph, tau: f64) -> Result<DecompositionResult> {
        Ok(match self {
            Algorithm::Bs => bit_bs(g),
            Algorithm::Be => bit_be(g),
            Algorithm::BeBatch => bit_be_batch(g),
            Algorithm::Pc => bit_pc(g, tau)?,
        })
    }
}

impl std::str::FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown algorithm {s:?}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::graph::load_edge_list;

    const NINE_EDGE_PHI: [u64; 9] = [2, 2, 2, 2, 2, 2, 1, 1, 1];

    fn bloom(k: u64) -> BipartiteGraph {
        BipartiteGraph::from_pairs((0..2).flat_map(|u| (0..k).map(move |v| (u, v))))
    }

    #[test]
    fn every_algorithm_on_nine_edge_graph() {
        let g = fixtures::nine_edge();
        for alg in Algorithm::ALL {
            assert_eq!(alg.run(&g, DEFAULT_TAU).unwrap().phi, NINE_EDGE_PHI, "{}", alg.name());
        }
    }

    #[test]
    fn matching_is_all_zero() {
        let g = BipartiteGraph::from_pairs((0..4).map(|i| (i, i)));
        for alg in Algorithm::ALL {
            assert_eq!(alg.run(&g, 0.5).unwrap().phi, vec![0; 4]);
        }
    }

    #[test]
    fn empty_graph() {
        let g = load_edge_list("".as_bytes()).unwrap();
        for alg in Algorithm::ALL {
            let r = alg.run(&g, 1.0).unwrap();
            assert!(r.phi.is_empty());
        }
    }

    #[test]
    fn bloom_edges_get_k_minus_one() {
        for k in [2, 6, 30] {
            let g = bloom(k);
            for alg in Algorithm::ALL {
                let r = alg.run(&g, DEFAULT_TAU).unwrap();
                assert!(r.phi.iter().all(|&p| p == k - 1), "{} k={k}", alg.name());
            }
        }
    }

    #[test]
    fn kmax_examples() {
        assert_eq!(compute_kmax(&[2, 2, 2, 2, 2, 3, 1, 1, 1]), 2);
        assert_eq!(compute_kmax(&[0, 0, 0]), 0);
        assert_eq!(compute_kmax(&[]), 0);
        assert_eq!(compute_kmax(&[5; 12]), 5);
        assert_eq!(compute_kmax(&[100]), 1);
    }

    #[test]
    fn schedule_arithmetic() {
        let s = ProgressiveSchedule::new(7, 1.0).unwrap();
        assert_eq!(s.alpha, 7);
        assert_eq!(s.thresholds(), vec![7, 0]);
        let s = ProgressiveSchedule::new(10, 0.3).unwrap();
        assert_eq!(s.alpha, 3);
        assert_eq!(s.thresholds(), vec![10, 7, 4, 1, 0]);
        assert_eq!(ProgressiveSchedule::new(0, 0.02).unwrap().thresholds(), vec![0]);
        for bad in [0.0, -0.5, 1.5, f64::NAN] {
            assert!(ProgressiveSchedule::new(3, bad).is_err());
        }
    }

    #[test]
    fn pc_rejects_bad_tau() {
        let g = fixtures::nine_edge();
        assert!(matches!(bit_pc(&g, 0.0), Err(Error::InvalidParameter(_))));
        assert!(matches!(bit_pc(&g, 1.01), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn pc_example_iterations() {
        let g = fixtures::nine_edge();
        let r = bit_pc(&g, 0.02).unwrap();
        assert_eq!(r.phi, NINE_EDGE_PHI);
        assert_eq!(r.stats.iterations, 2);
        assert_eq!(r.stats.k_max, 2);
        let r = bit_pc(&g, 1.0).unwrap();
        assert_eq!(r.phi, NINE_EDGE_PHI);
        assert_eq!(r.stats.iterations, 2);
    }

    #[test]
    fn batch_example_rounds() {
        let r = bit_be_batch(&fixtures::nine_edge());
        assert_eq!(r.stats.iterations, 2);
        assert_eq!(r.stats.support_updates, 1);
    }

    #[test]
    fn bucket_queue_orders_by_support_then_id() {
        let supports = [3u64, 1, 1, 0, 2];
        let mut q = BucketQueue::new(supports.iter().enumerate().map(|(e, &s)| (e as EdgeId, s)));
        let mut out = Vec::new();
        while let Some((s, e)) = q.pop(|e| Some(supports[e as usize])) {
            out.push((s, e));
        }
        assert_eq!(out, vec![(0, 3), (1, 1), (1, 2), (2, 4), (3, 0)]);
    }

    #[test]
    fn algorithm_names_round_trip() {
        for alg in Algorithm::ALL {
            assert_eq!(alg.name().parse::<Algorithm>().unwrap(), alg);
        }
        assert!("nope".parse::<Algorithm>().is_err());
    }
}
