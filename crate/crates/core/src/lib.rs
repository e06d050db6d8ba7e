//! Bitruss decomposition of bipartite graphs.
//!
//! The bitruss number of an edge is the largest `k` such that the edge lies in
//! a subgraph where every edge is contained in at least `k` butterflies
//! (2x2 bicliques). This crate computes it with a bloom-edge index that groups
//! butterflies into `(2, k)`-bicliques, so removing an edge costs time
//! proportional to its butterfly count.
//!
//! ```
//! use bitruss::{fixtures, peel};
//!
//! let g = fixtures::nine_edge();
//! let result = peel::bit_be(&g);
//! assert_eq!(result.phi, vec![2, 2, 2, 2, 2, 2, 1, 1, 1]);
//! ```

pub mod butterfly;
pub mod error;
pub mod fixtures;
pub mod graph;
pub mod index;
pub mod peel;
pub mod synthetic;

pub use butterfly::{count_supports, decompose_bruteforce, SupportTable, DEFAULT_ORACLE_LIMIT};
pub use error::{Error, Result};
pub use graph::{compute_priority, load_edge_list, BipartiteGraph, EdgeId, PriorityOrder, SubgraphView, VertexId};
pub use index::{build_compressed_index, build_index, BEIndex};
pub use peel::{bit_be, bit_be_batch, bit_bs, bit_pc, compute_kmax, Algorithm, DecompositionResult, RunStats};
