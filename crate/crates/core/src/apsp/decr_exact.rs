//! Exact decremental APSP from a nested hub-set hierarchy.
//!
//! Given hub sets A_0 = V ⊇ A_1 ⊇ … ⊇ A_q with hop parameters d_0 ≤ … ≤ d_q
//! (A_i a d_i-hub of the graph and its reverse), level i keeps exact ES
//! trees from and to every a ∈ A_i of depth T_i = min(d_{i+1}, n-1)
//! (T_q = n-1) and the label sums
//! δ'_i(u, v) = min over a ∈ A_i of δ(u, a) + δ(a, v).
//!
//! Every sum overestimates δ(u, v); for pairs with δ(u, v) in the level's
//! interval (min(d_i, n-1), T_i] some hub sits within the first d_i hops of
//! a shortest path and both halves fit the tree depth, so the level is
//! exact there. The intervals tile (0, n-1], level 0 handles short pairs
//! via a = u, and the global minimum over levels is exact everywhere.
//!
//! Deletions only ever increase labels, so per pair and level the minimum
//! sum is maintained by a count array over sums 0..=2T_i and a
//! forward-only pointer: a label change updates n sum buckets and the
//! pointer only advances, O(n) per label event plus the pointer's total
//! 2T_i forward travel.

use crate::graph::{DynamicDigraph, GraphError, UpdateOp, Vertex, INF};
use crate::sssp::estree::{Direction, EsTree, TreeEvent, UNREACHABLE};

pub struct ExactDecrApsp {
    n: usize,
    g: DynamicDigraph,
    levels: Vec<DecrLevel>,
}

struct DecrLevel {
    /// tree depth T_i; sums range over 0..=2*depth
    depth: u32,
    /// exclusive lower end of the interval this level covers exactly
    lower: u32,
    from: Vec<EsTree>,
    to: Vec<EsTree>,
    /// shadow labels: to_lab[j][u] = δ(u, a_j), from_lab[j][v] = δ(a_j, v)
    to_lab: Vec<Vec<u32>>,
    from_lab: Vec<Vec<u32>>,
    /// cnt[(u*n + v) * stride + s] = #hubs whose label sum for (u,v) is s
    cnt: Vec<u16>,
    /// per pair, the smallest sum with a nonzero count (stride-1 = none)
    ptr: Vec<u32>,
}

impl DecrLevel {
    fn stride(&self) -> usize {
        2 * self.depth as usize + 2
    }

    fn dist(&self, n: usize, u: Vertex, v: Vertex) -> f64 {
        let p = self.ptr[u * n + v];
        if p as usize == self.stride() - 1 {
            INF
        } else {
            p as f64
        }
    }
}

impl ExactDecrApsp {
    /// `sets`/`depths` are the hub hierarchy A_0..A_q, d_0..d_q; A_0 must
    /// be all of V so that short pairs are covered.
    pub fn new(g: DynamicDigraph, sets: &[Vec<Vertex>], depths: &[u32]) -> Self {
        let n = g.n();
        assert_eq!(sets.len(), depths.len());
        assert!(!sets.is_empty());
        assert_eq!(sets[0].len(), n, "level 0 must contain every vertex");
        let q = sets.len() - 1;
        let cap = n.saturating_sub(1) as u32;
        let mut levels = Vec::with_capacity(q + 1);
        for i in 0..=q {
            let depth = if i < q { depths[i + 1].min(cap) } else { cap };
            let lower = depths[i].min(cap);
            let hubs = &sets[i];
            let mut from = Vec::with_capacity(hubs.len());
            let mut to = Vec::with_capacity(hubs.len());
            let mut from_lab = Vec::with_capacity(hubs.len());
            let mut to_lab = Vec::with_capacity(hubs.len());
            for &a in hubs {
                let mut tf = EsTree::new(&g, a, depth, Direction::FromSource);
                let mut tt = EsTree::new(&g, a, depth, Direction::ToSource);
                tf.drain_events();
                tt.drain_events();
                from_lab.push(tf.levels().to_vec());
                to_lab.push(tt.levels().to_vec());
                from.push(tf);
                to.push(tt);
            }
            let stride = 2 * depth as usize + 2;
            let mut cnt = vec![0u16; n * n * stride];
            for j in 0..hubs.len() {
                for u in 0..n {
                    let tu = to_lab[j][u];
                    if tu == UNREACHABLE {
                        continue;
                    }
                    for v in 0..n {
                        let fv = from_lab[j][v];
                        if fv != UNREACHABLE {
                            cnt[(u * n + v) * stride + (tu + fv) as usize] += 1;
                        }
                    }
                }
            }
            let mut ptr = vec![(stride - 1) as u32; n * n];
            for pair in 0..n * n {
                for s in 0..stride - 1 {
                    if cnt[pair * stride + s] > 0 {
                        ptr[pair] = s as u32;
                        break;
                    }
                }
            }
            levels.push(DecrLevel { depth, lower, from, to, to_lab, from_lab, cnt, ptr });
        }
        ExactDecrApsp { n, g, levels }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn graph(&self) -> &DynamicDigraph {
        &self.g
    }

    pub fn level_count(&self) -> usize {
        self.levels.len()
    }

    /// (exclusive lower end, tree depth): the level is exact on pairs with
    /// distance in (lower, depth].
    pub fn level_interval(&self, i: usize) -> (u32, u32) {
        (self.levels[i].lower, self.levels[i].depth)
    }

    /// δ'_i(u, v): the level's own estimate, always ≥ the true distance.
    pub fn level_distance(&self, i: usize, u: Vertex, v: Vertex) -> f64 {
        self.levels[i].dist(self.n, u, v)
    }

    /// Exact hop distance.
    pub fn distance(&self, u: Vertex, v: Vertex) -> f64 {
        if u == v {
            return 0.0;
        }
        let mut best = INF;
        for l in &self.levels {
            best = best.min(l.dist(self.n, u, v));
        }
        best
    }

    pub fn delete(&mut self, op: &UpdateOp) -> Result<(), GraphError> {
        let (x, y) = match *op {
            UpdateOp::Delete { u, v } => (u, v),
            _ => {
                return Err(GraphError::ModeViolation {
                    mode: "decremental",
                    what: "insert or reweight",
                })
            }
        };
        self.g.apply(op)?;
        let n = self.n;
        for lvl in &mut self.levels {
            let stride = lvl.stride();
            for j in 0..lvl.from.len() {
                lvl.from[j].on_delete(&self.g, x, y);
                for ev in lvl.from[j].drain_events() {
                    if let TreeEvent::Level(w, new) = ev {
                        let old = lvl.from_lab[j][w];
                        // pairs (u, w) lose sum to_lab+old and gain to_lab+new
                        for u in 0..n {
                            let tu = lvl.to_lab[j][u];
                            if tu == UNREACHABLE {
                                continue;
                            }
                            let pair = u * n + w;
                            retag(
                                &mut lvl.cnt[pair * stride..(pair + 1) * stride],
                                &mut lvl.ptr[pair],
                                sum_of(tu, old),
                                sum_of(tu, new),
                            );
                        }
                        lvl.from_lab[j][w] = new;
                    }
                }
                lvl.to[j].on_delete(&self.g, x, y);
                for ev in lvl.to[j].drain_events() {
                    if let TreeEvent::Level(w, new) = ev {
                        let old = lvl.to_lab[j][w];
                        for v in 0..n {
                            let fv = lvl.from_lab[j][v];
                            if fv == UNREACHABLE {
                                continue;
                            }
                            let pair = w * n + v;
                            retag(
                                &mut lvl.cnt[pair * stride..(pair + 1) * stride],
                                &mut lvl.ptr[pair],
                                sum_of(old, fv),
                                sum_of(new, fv),
                            );
                        }
                        lvl.to_lab[j][w] = new;
                    }
                }
            }
        }
        Ok(())
    }
}

fn sum_of(a: u32, b: u32) -> Option<usize> {
    if a == UNREACHABLE || b == UNREACHABLE {
        None
    } else {
        Some((a + b) as usize)
    }
}

/// Moves one hub's contribution for a pair from sum `old` to sum `new` and
/// advances the pair's minimum pointer past empty buckets. Label sums only
/// grow, so the pointer never needs to move backward.
fn retag(cnt: &mut [u16], ptr: &mut u32, old: Option<usize>, new: Option<usize>) {
    if old == new {
        return;
    }
    if let Some(s) = old {
        cnt[s] -= 1;
    }
    if let Some(s) = new {
        cnt[s] += 1;
        debug_assert!(s as u32 >= *ptr, "a label sum decreased under deletions");
    }
    let none = (cnt.len() - 1) as u32;
    while *ptr < none && cnt[*ptr as usize] == 0 {
        *ptr += 1;
    }
}
