//! Brute-force reference oracles shared by the apsp integration tests.
#![allow(dead_code)]

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use hubs_core::graph::{DynamicDigraph, EdgeWeight, Mode, UpdateOp, Vertex, INF};
use rand::Rng;

/// Exact single-source distances by binary-heap Dijkstra.
pub fn dijkstra(g: &DynamicDigraph, src: Vertex) -> Vec<f64> {
    let n = g.n();
    let mut dist = vec![INF; n];
    dist[src] = 0.0;
    let mut heap: BinaryHeap<Reverse<(u64, Vertex)>> = BinaryHeap::new();
    heap.push(Reverse((0, src)));
    while let Some(Reverse((key, x))) = heap.pop() {
        if f64::from_bits(key) > dist[x] {
            continue;
        }
        let dx = dist[x];
        for &y in g.out_neighbors(x) {
            let cand = dx + g.weight(x, y).unwrap();
            if cand < dist[y] {
                dist[y] = cand;
                heap.push(Reverse((cand.to_bits(), y)));
            }
        }
    }
    dist
}

/// All-pairs exact distances, row per source.
pub fn dijkstra_all(g: &DynamicDigraph) -> Vec<Vec<f64>> {
    (0..g.n()).map(|s| dijkstra(g, s)).collect()
}

/// Hop-bounded distances from `src`: cheapest over paths of <= h edges.
pub fn hop_dist(g: &DynamicDigraph, src: Vertex, h: usize) -> Vec<f64> {
    let n = g.n();
    let mut cur = vec![INF; n];
    cur[src] = 0.0;
    for _ in 0..h {
        let mut next = cur.clone();
        for (u, v, w) in g.edges() {
            if cur[u].is_finite() && cur[u] + w < next[v] {
                next[v] = cur[u] + w;
            }
        }
        cur = next;
    }
    cur
}

/// BFS hop counts from `src` (unweighted distances), usize::MAX = unreachable.
pub fn bfs(g: &DynamicDigraph, src: Vertex) -> Vec<usize> {
    let n = g.n();
    let mut dist = vec![usize::MAX; n];
    dist[src] = 0;
    let mut queue = std::collections::VecDeque::new();
    queue.push_back(src);
    while let Some(x) = queue.pop_front() {
        for &y in g.out_neighbors(x) {
            if dist[y] == usize::MAX {
                dist[y] = dist[x] + 1;
                queue.push_back(y);
            }
        }
    }
    dist
}

/// Relative sandwich check with a tiny slack for float noise:
/// oracle <= est <= ratio * oracle. Infinities must agree exactly.
pub fn sandwich_ok(est: f64, oracle: f64, ratio: f64) -> bool {
    if oracle.is_infinite() || est.is_infinite() {
        return oracle.is_infinite() && est.is_infinite();
    }
    est >= oracle - 1e-9 * oracle.max(1.0) && est <= ratio * oracle * (1.0 + 1e-9)
}

/// Random incremental stream: `m` inserts of distinct edges with integer
/// weights in [1, w_max] (unit weights when w_max == 1), plus optional
/// weight decreases mixed in when `decreases` is true.
pub fn random_incremental(
    n: usize,
    m: usize,
    w_max: f64,
    decreases: bool,
    rng: &mut impl Rng,
) -> Vec<UpdateOp> {
    let mut present: Vec<(Vertex, Vertex, f64)> = Vec::new();
    let mut ops = Vec::new();
    while ops.len() < m {
        if decreases && !present.is_empty() && rng.gen_bool(0.2) {
            let i = rng.gen_range(0..present.len());
            let (u, v, w) = present[i];
            if w > 1.0 {
                let nw = rng.gen_range(1..=(w as u64 - 1).max(1)) as f64;
                present[i].2 = nw;
                ops.push(UpdateOp::SetWeight { u, v, w: EdgeWeight::new(nw) });
                continue;
            }
        }
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        if u == v || present.iter().any(|&(a, b, _)| (a, b) == (u, v)) {
            continue;
        }
        let w = if w_max <= 1.0 { 1.0 } else { rng.gen_range(1..=w_max as u64) as f64 };
        present.push((u, v, w));
        ops.push(UpdateOp::Insert { u, v, w: EdgeWeight::new(w) });
    }
    ops
}

/// Random graph plus a deletion order covering every edge (full teardown).
pub fn random_teardown(
    n: usize,
    m: usize,
    w_max: f64,
    rng: &mut impl Rng,
) -> (DynamicDigraph, Vec<UpdateOp>) {
    let mut edges: Vec<(Vertex, Vertex, EdgeWeight)> = Vec::new();
    while edges.len() < m {
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        if u == v || edges.iter().any(|&(a, b, _)| (a, b) == (u, v)) {
            continue;
        }
        let w = if w_max <= 1.0 { 1.0 } else { rng.gen_range(1..=w_max as u64) as f64 };
        edges.push((u, v, EdgeWeight::new(w)));
    }
    let g = DynamicDigraph::from_edges(n, Mode::Decremental, w_max.max(1.0), &edges).unwrap();
    let mut order: Vec<usize> = (0..m).collect();
    for i in (1..m).rev() {
        order.swap(i, rng.gen_range(0..=i));
    }
    let ops = order.into_iter().map(|i| UpdateOp::Delete { u: edges[i].0, v: edges[i].1 }).collect();
    (g, ops)
}

/// Hop-bounded distances over a raw edge list: `h` rounds of relaxation.
pub fn bellman_hop(n: usize, edges: &[(Vertex, Vertex, f64)], src: Vertex, h: usize) -> Vec<f64> {
    let mut dist = vec![INF; n];
    dist[src] = 0.0;
    for _ in 0..h {
        let prev = dist.clone();
        for &(u, v, w) in edges {
            if prev[u] + w < dist[v] {
                dist[v] = prev[u] + w;
            }
        }
    }
    dist
}
