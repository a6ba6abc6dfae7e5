//! Seeded update-stream generators. All randomness flows through ChaCha8
//! keyed by the caller's seed, so equal (kind, mode, n, m, W, seed) gives a
//! byte-identical `to_text` stream on any platform.

use hubs_core::graph::{EdgeWeight, Mode, UpdateOp, UpdateStream};
use hubs_core::Vertex;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StreamKind {
    /// m distinct random edges in random order.
    Random,
    /// Directed n-cycle first, then m−n random chords.
    CycleChords,
    /// Paths radiating out of vertex 0 (deep trees), then extra random
    /// edges once the n−1 path edges are used up.
    Spider,
}

impl StreamKind {
    pub fn parse(s: &str) -> Option<StreamKind> {
        match s {
            "random" => Some(StreamKind::Random),
            "cycle-chords" => Some(StreamKind::CycleChords),
            "spider" => Some(StreamKind::Spider),
            _ => None,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            StreamKind::Random => "random",
            StreamKind::CycleChords => "cycle-chords",
            StreamKind::Spider => "spider",
        }
    }
}

pub fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Deterministic stream with exactly `m` structural ops (clamped to the
/// n(n−1) possible edges): inserts for incremental mode; for decremental
/// mode the edges move into the initial block and the ops are the same
/// edges deleted in a fresh random order. Weights are uniform integers in
/// [1, W] when W > 1, else exactly 1.
pub fn gen_stream(
    kind: StreamKind,
    mode: Mode,
    n: usize,
    m: usize,
    w_max: f64,
    seed: u64,
) -> UpdateStream {
    let mut rng = rng_for(seed);
    let edges = match kind {
        StreamKind::Random => random_edges(n, m, &mut rng),
        StreamKind::CycleChords => cycle_chord_edges(n, m, &mut rng),
        StreamKind::Spider => spider_edges(n, m, &mut rng),
    };
    let weighted = w_max > 1.0;
    let inserts: Vec<UpdateOp> = edges
        .iter()
        .map(|&(u, v)| {
            let w = if weighted { rng.gen_range(1..=w_max as u64) as f64 } else { 1.0 };
            UpdateOp::Insert { u, v, w: EdgeWeight::new(w) }
        })
        .collect();
    match mode {
        Mode::Incremental => UpdateStream { mode, n, w_max, init: Vec::new(), ops: inserts },
        Mode::Decremental => {
            let mut order = edges;
            order.shuffle(&mut rng);
            let deletes = order.into_iter().map(|(u, v)| UpdateOp::Delete { u, v }).collect();
            UpdateStream { mode, n, w_max, init: inserts, ops: deletes }
        }
    }
}

fn all_pairs(n: usize) -> Vec<(Vertex, Vertex)> {
    let mut all = Vec::with_capacity(n * (n - 1));
    for u in 0..n {
        for v in 0..n {
            if u != v {
                all.push((u, v));
            }
        }
    }
    all
}

fn random_edges(n: usize, m: usize, rng: &mut ChaCha8Rng) -> Vec<(Vertex, Vertex)> {
    let mut all = all_pairs(n);
    let m = m.min(all.len());
    let (picked, _) = all.partial_shuffle(rng, m);
    picked.to_vec()
}

fn cycle_chord_edges(n: usize, m: usize, rng: &mut ChaCha8Rng) -> Vec<(Vertex, Vertex)> {
    let mut edges: Vec<(Vertex, Vertex)> = (0..n).map(|u| (u, (u + 1) % n)).collect();
    edges.truncate(m);
    let mut rest: Vec<(Vertex, Vertex)> =
        all_pairs(n).into_iter().filter(|&(u, v)| v != (u + 1) % n).collect();
    let extra = (m.min(n * (n - 1))).saturating_sub(edges.len());
    let (picked, _) = rest.partial_shuffle(rng, extra);
    edges.extend_from_slice(picked);
    edges
}

fn spider_edges(n: usize, m: usize, rng: &mut ChaCha8Rng) -> Vec<(Vertex, Vertex)> {
    let legs = ((n as f64).sqrt().ceil() as usize).clamp(1, n.max(2) - 1);
    // leg j owns vertices j+1, j+1+legs, j+1+2*legs, ...
    let mut edges: Vec<(Vertex, Vertex)> = Vec::with_capacity(n - 1);
    for v in 1..n {
        let prev = if v <= legs { 0 } else { v - legs };
        edges.push((prev, v));
    }
    edges.truncate(m);
    let on_leg: std::collections::HashSet<(Vertex, Vertex)> = edges.iter().copied().collect();
    let mut rest: Vec<(Vertex, Vertex)> =
        all_pairs(n).into_iter().filter(|e| !on_leg.contains(e)).collect();
    let extra = (m.min(n * (n - 1))).saturating_sub(edges.len());
    let (picked, _) = rest.partial_shuffle(rng, extra);
    edges.extend_from_slice(picked);
    edges
}
