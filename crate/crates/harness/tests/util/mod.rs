#![allow(dead_code)]

use hubs_core::graph::{EdgeWeight, GraphView, Mode, UpdateOp};
use hubs_core::{DynamicDigraph, Vertex};
use rand::prelude::*;

pub fn weight(w: f64) -> EdgeWeight {
    EdgeWeight::new(w)
}

pub fn random_edges(
    n: usize,
    m: usize,
    w_max: f64,
    rng: &mut impl Rng,
) -> Vec<(Vertex, Vertex, EdgeWeight)> {
    let mut pairs = Vec::with_capacity(n * (n - 1));
    for u in 0..n {
        for v in 0..n {
            if u != v {
                pairs.push((u, v));
            }
        }
    }
    let m = m.min(pairs.len());
    let (picked, _) = pairs.partial_shuffle(rng, m);
    picked
        .iter()
        .map(|&(u, v)| {
            let w = if w_max > 1.0 { rng.gen_range(1..=w_max as u64) as f64 } else { 1.0 };
            (u, v, weight(w))
        })
        .collect()
}

pub fn random_graph(
    n: usize,
    m: usize,
    w_max: f64,
    mode: Mode,
    rng: &mut impl Rng,
) -> DynamicDigraph {
    let edges = random_edges(n, m, w_max, rng);
    DynamicDigraph::from_edges(n, mode, w_max, &edges).unwrap()
}

/// Decremental graph plus its full teardown in random order.
pub fn random_teardown(
    n: usize,
    m: usize,
    w_max: f64,
    rng: &mut impl Rng,
) -> (DynamicDigraph, Vec<UpdateOp>) {
    let edges = random_edges(n, m, w_max, rng);
    let g = DynamicDigraph::from_edges(n, Mode::Decremental, w_max, &edges).unwrap();
    let mut ops: Vec<UpdateOp> =
        edges.iter().map(|&(u, v, _)| UpdateOp::Delete { u, v }).collect();
    ops.shuffle(rng);
    (g, ops)
}

/// Insert-dominated incremental stream; when `decreases` is set, roughly a
/// fifth of the ops lower the weight of an already-present edge instead.
pub fn random_incremental(
    n: usize,
    m: usize,
    w_max: f64,
    decreases: bool,
    rng: &mut impl Rng,
) -> Vec<UpdateOp> {
    let edges = random_edges(n, m, w_max, rng);
    let mut ops = Vec::with_capacity(m + m / 4);
    let mut present: Vec<(Vertex, Vertex, f64)> = Vec::new();
    for (u, v, w) in edges {
        ops.push(UpdateOp::Insert { u, v, w });
        present.push((u, v, w.value));
        if decreases && !present.is_empty() && rng.gen_bool(0.25) {
            let k = rng.gen_range(0..present.len());
            let (x, y, old) = present[k];
            if old > 1.0 {
                let nw = rng.gen_range(1..=old as u64 - 1) as f64;
                present[k].2 = nw;
                ops.push(UpdateOp::SetWeight { u: x, v: y, w: weight(nw) });
            }
        }
    }
    ops
}

pub fn sandwich_ok(est: f64, truth: f64, ratio: f64) -> bool {
    if truth.is_infinite() {
        return est.is_infinite();
    }
    est >= truth - 1e-9 * truth.max(1.0) && est <= ratio * truth * (1.0 + 1e-9)
}

/// Brute hub-set check: enumerates every shortest u→v path over the
/// shortest-path DAG and asks whether at least one is (H,d)-covered.
/// Exponential; keep n small.
pub fn hub_exact_brute(g: &DynamicDigraph, members: &[Vertex], d: u32) -> bool {
    let n = g.vertex_count();
    let mut in_h = vec![false; n];
    for &v in members {
        in_h[v] = true;
    }
    for src in 0..n {
        let dist = hubs_harness::oracle::bfs(g, src);
        for v in 0..n {
            if v == src || dist[v].is_infinite() {
                continue;
            }
            // walk the DAG backwards from v collecting paths
            let mut stack = vec![vec![v]];
            let mut some_covered = false;
            while let Some(path) = stack.pop() {
                let head = *path.last().unwrap();
                if head == src {
                    let fwd: Vec<Vertex> = path.iter().rev().copied().collect();
                    if hubs_core::hubs::is_covered(&fwd, |x| in_h[x], d) {
                        some_covered = true;
                        break;
                    }
                    continue;
                }
                g.for_each_in(head, |p, _| {
                    if dist[p] + 1.0 == dist[head] {
                        let mut longer = path.clone();
                        longer.push(p);
                        stack.push(longer);
                    }
                });
            }
            if !some_covered {
                return false;
            }
        }
    }
    true
}

/// Cheapest (H,d)-covered walk from u to v of at most `hop_cap` edges, by
/// plain exhaustive DFS. Exponential; for cross-checking tiny instances.
pub fn covered_min_len_brute(
    g: &DynamicDigraph,
    in_h: &[bool],
    d: u32,
    u: Vertex,
    v: Vertex,
    hop_cap: u32,
) -> f64 {
    fn go(
        g: &DynamicDigraph,
        in_h: &[bool],
        d: u32,
        v: Vertex,
        cur: Vertex,
        seg: u32,
        hops_left: u32,
        len: f64,
        best: &mut f64,
    ) {
        if len >= *best {
            return;
        }
        if cur == v {
            *best = len;
        }
        if hops_left == 0 {
            return;
        }
        let seg = if in_h[cur] { 0 } else { seg };
        if seg == d {
            return;
        }
        let mut outs = Vec::new();
        g.for_each_out(cur, |t, w| outs.push((t, w)));
        for (t, w) in outs {
            go(g, in_h, d, v, t, seg + 1, hops_left - 1, len + w, best);
        }
    }
    let mut best = f64::INFINITY;
    go(g, in_h, d, v, u, 0, hop_cap, 0.0, &mut best);
    best
}
