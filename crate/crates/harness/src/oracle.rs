//! Reference oracles: plain distance matrices recomputed from scratch, and
//! the heavyweight hub-set validity checks. Everything here is deliberately
//! naive — the library never calls these; tests compare against them.

use hubs_core::graph::GraphView;
use hubs_core::Vertex;
use std::collections::BinaryHeap;
use std::collections::VecDeque;

pub const INF: f64 = f64::INFINITY;

/// Exact distance matrix. BFS per source when `weighted` is false (every
/// edge counts one hop); binary-heap Dijkstra otherwise.
pub fn oracle_dist<G: GraphView>(g: &G, weighted: bool) -> Vec<Vec<f64>> {
    let n = g.vertex_count();
    (0..n).map(|s| if weighted { dijkstra(g, s) } else { bfs(g, s) }).collect()
}

/// Hop-bounded matrix: `k` rounds of Bellman-Ford relaxation per source, so
/// row `u` holds the cheapest u→v value over paths of at most k edges.
pub fn oracle_hop_dist<G: GraphView>(g: &G, k: u32) -> Vec<Vec<f64>> {
    let n = g.vertex_count();
    (0..n).map(|s| hop_dist_from(g, s, k)).collect()
}

/// Single row of the hop-bounded matrix.
pub fn hop_dist_from<G: GraphView>(g: &G, src: Vertex, k: u32) -> Vec<f64> {
    let n = g.vertex_count();
    let mut cur = vec![INF; n];
    cur[src] = 0.0;
    for _ in 0..k {
        let mut next = cur.clone();
        for u in 0..n {
            if cur[u].is_finite() {
                g.for_each_out(u, |v, w| {
                    if cur[u] + w < next[v] {
                        next[v] = cur[u] + w;
                    }
                });
            }
        }
        cur = next;
    }
    cur
}

pub fn bfs<G: GraphView>(g: &G, src: Vertex) -> Vec<f64> {
    let n = g.vertex_count();
    let mut dist = vec![INF; n];
    dist[src] = 0.0;
    let mut queue = VecDeque::from([src]);
    while let Some(u) = queue.pop_front() {
        g.for_each_out(u, |v, _| {
            if dist[v].is_infinite() {
                dist[v] = dist[u] + 1.0;
                queue.push_back(v);
            }
        });
    }
    dist
}

pub fn dijkstra<G: GraphView>(g: &G, src: Vertex) -> Vec<f64> {
    let n = g.vertex_count();
    let mut dist = vec![INF; n];
    dist[src] = 0.0;
    // nonnegative f64 keys order correctly through their bit patterns
    let mut heap = BinaryHeap::from([(std::cmp::Reverse(0u64), src)]);
    while let Some((std::cmp::Reverse(bits), u)) = heap.pop() {
        let du = f64::from_bits(bits);
        if du > dist[u] {
            continue;
        }
        g.for_each_out(u, |v, w| {
            let cand = du + w;
            if cand < dist[v] {
                dist[v] = cand;
                heap.push((std::cmp::Reverse(cand.to_bits()), v));
            }
        });
    }
    dist
}

/// True iff H is a d-hub set: for every reachable pair some shortest path
/// splits into ≤d-hop segments with every segment after the first starting
/// in H. Per source, a DP over the shortest-path DAG tracks f(v) = the
/// fewest hops since the segment in progress began; an edge p→v of the DAG
/// either extends p's segment (f(p)+1, if that stays ≤ d) or, when p ∈ H,
/// opens a fresh segment at p (giving 1). Only states ≤ d are kept, so a
/// vertex with no admissible predecessor state witnesses an uncoverable
/// pair.
pub fn hub_oracle_exact<G: GraphView>(g: &G, members: &[Vertex], d: u32) -> bool {
    let n = g.vertex_count();
    let mut in_h = vec![false; n];
    for &v in members {
        in_h[v] = true;
    }
    let none = u32::MAX;
    for src in 0..n {
        let dist = bfs(g, src);
        let mut order: Vec<Vertex> = (0..n).filter(|&v| dist[v].is_finite()).collect();
        order.sort_by(|&a, &b| dist[a].total_cmp(&dist[b]));
        let mut f = vec![none; n];
        f[src] = 0;
        for &v in order.iter().skip(1) {
            let mut best = none;
            g.for_each_in(v, |p, _| {
                if dist[p] + 1.0 == dist[v] && f[p] != none {
                    if in_h[p] {
                        best = best.min(1);
                    }
                    if f[p] + 1 <= d {
                        best = best.min(f[p] + 1);
                    }
                }
            });
            if best == none {
                return false;
            }
            f[v] = best;
        }
    }
    true
}

/// Approximate-hub check: every reachable pair must admit an (H,d)-covered
/// walk of length at most ratio·δ(u,v). Dijkstra over states (vertex, hops
/// used by the current segment); standing at a member of H resets the
/// segment for free. A tiny relative slack absorbs float noise on the
/// boundary.
pub fn hub_oracle_approx<G: GraphView>(g: &G, members: &[Vertex], d: u32, ratio: f64) -> bool {
    let n = g.vertex_count();
    let mut in_h = vec![false; n];
    for &v in members {
        in_h[v] = true;
    }
    let truth = oracle_dist(g, true);
    for src in 0..n {
        let best = covered_dist(g, &in_h, d, src);
        for v in 0..n {
            let t = truth[src][v];
            if t.is_finite() && best[v] > ratio * t * (1.0 + 1e-9) {
                return false;
            }
        }
    }
    true
}

/// Cheapest (H,d)-covered walk from `src` to every vertex: min over segment
/// states of the state-space Dijkstra used by `hub_oracle_approx`.
pub fn covered_dist<G: GraphView>(g: &G, in_h: &[bool], d: u32, src: Vertex) -> Vec<f64> {
    let n = g.vertex_count();
    let d = d as usize;
    let idx = |v: Vertex, s: usize| v * (d + 1) + s;
    let mut dist = vec![INF; n * (d + 1)];
    dist[idx(src, 0)] = 0.0;
    let mut heap = BinaryHeap::from([(std::cmp::Reverse(0u64), src, 0usize)]);
    while let Some((std::cmp::Reverse(bits), u, s)) = heap.pop() {
        let du = f64::from_bits(bits);
        if du > dist[idx(u, s)] {
            continue;
        }
        if s > 0 && in_h[u] && du < dist[idx(u, 0)] {
            dist[idx(u, 0)] = du;
            heap.push((std::cmp::Reverse(bits), u, 0));
        }
        if s < d {
            g.for_each_out(u, |v, w| {
                let cand = du + w;
                if cand < dist[idx(v, s + 1)] {
                    dist[idx(v, s + 1)] = cand;
                    heap.push((std::cmp::Reverse(cand.to_bits()), v, s + 1));
                }
            });
        }
    }
    (0..n)
        .map(|v| (0..=d).map(|s| dist[idx(v, s)]).fold(INF, f64::min))
        .collect()
}
