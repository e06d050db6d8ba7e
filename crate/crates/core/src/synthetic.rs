//! Deterministic synthetic edge lists for tests and benchmarks.

use std::io::{self, Write};

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// A `(2, k)`-biclique: upper vertices 0 and 1, each joined to lower 0..k.
pub fn bloom(k: u64) -> Result<Vec<(u64, u64)>> {
    if k == 0 {
        return Err(Error::InvalidParameter("bloom size must be positive".into()));
    }
    Ok((0..2).flat_map(|u| (0..k).map(move |v| (u, v))).collect())
}

/// Parameters of the skewed-hub generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SkewedHub {
    /// Number of lower vertices shared by the two hub vertices (at least 2).
    pub bloom: u64,
    /// Butterflies hanging off the first hub vertex, one per pendant.
    pub pendants: u64,
    /// Fan-out of the high-degree, butterfly-poor stars; 0 disables them.
    pub fan: u64,
    pub seed: u64,
}

impl Default for SkewedHub {
    fn default() -> Self {
        SkewedHub {
            bloom: 2,
            pendants: 0,
            fan: 1000,
            seed: 0,
        }
    }
}

/// One large bloom on hub vertices `h1 = u0` and `h0 = u1`, plus pendant
/// butterflies and optional fan stars.
///
/// - Bloom: `h0` and `h1` both join lower `b_0 .. b_{bloom-1}` (labels `0..bloom`).
/// - Pendant `j`: fresh upper `x_j` and lower `y_j`, with edges `(h0, y_j)`,
///   `(x_j, y_j)` and `(x_j, b_i)` for a seeded random `i`. Each adds exactly
///   one butterfly `[h0, b_i, x_j, y_j]`.
/// - Fan `f > 0`: `h0` gains `f - 1` lower leaves `l_1..`, `b_1` gains `f - 1`
///   upper leaves `r_1..`; then `r_1` gets `f` fresh lower leaves and `l_1`
///   gets `f` fresh upper leaves.
///
/// With `bloom = 2, pendants = 0, fan = 1000` this is the 4002-vertex graph in
/// which the hub edge `(u1, v1)` lies in exactly one butterfly.
pub fn skewed_hub(p: SkewedHub) -> Result<Vec<(u64, u64)>> {
    if p.bloom < 2 {
        return Err(Error::InvalidParameter("skewed-hub bloom must be at least 2".into()));
    }
    let mut next_upper = 2u64;
    let mut next_lower = p.bloom;
    let (h1, h0) = (0u64, 1u64);
    let mut edges = Vec::new();
    for &h in &[h1, h0] {
        for b in 0..p.bloom {
            edges.push((h, b));
        }
    }

    if p.fan > 0 {
        let lefts: Vec<u64> = (1..p.fan).map(|_| take(&mut next_lower)).collect();
        let rights: Vec<u64> = (1..p.fan).map(|_| take(&mut next_upper)).collect();
        for &l in &lefts {
            edges.push((h0, l));
        }
        for &r in &rights {
            edges.push((r, 1));
        }
        if let Some(&r1) = rights.first() {
            for _ in 0..p.fan {
                edges.push((r1, take(&mut next_lower)));
            }
        }
        if let Some(&l1) = lefts.first() {
            for _ in 0..p.fan {
                edges.push((take(&mut next_upper), l1));
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    for _ in 0..p.pendants {
        let x = take(&mut next_upper);
        let y = take(&mut next_lower);
        let b = rng.random_range(0..p.bloom);
        edges.push((h0, y));
        edges.push((x, y));
        edges.push((x, b));
    }
    Ok(edges)
}

fn take(counter: &mut u64) -> u64 {
    let v = *counter;
    *counter += 1;
    v
}

/// Writes pairs as an edge list the loader accepts.
pub fn write_edge_list(mut out: impl Write, pairs: &[(u64, u64)]) -> io::Result<()> {
    for (u, v) in pairs {
        writeln!(out, "{u} {v}")?;
    }
    Ok(())
}

/// Bernoulli random bipartite graph with `upper x lower` possible edges.
pub fn random_bipartite(upper: u64, lower: u64, p: f64, seed: u64) -> Vec<(u64, u64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..upper {
        for v in 0..lower {
            if rng.random_bool(p) {
                edges.push((u, v));
            }
        }
    }
    edges
}
