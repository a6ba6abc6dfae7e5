//! Incremental (1+eps)-approximate APSP for dense graphs.
//!
//! A ladder of k = ceil(log2 n) matrices sits over the raw adjacency
//! weights: layer i entry (u,v) is the quantized two-hop closure of layer
//! i-1, W_i[u][v] = expround_{1+eps1}(min_x W_{i-1}[u][x] + W_{i-1}[x][v]),
//! so layer i approximates distances over paths of at most 2^i edges within
//! a factor (1+eps1)^i, and layer k (2^k >= n) approximates true distances.
//! With eps1 = eps/(4k) the final factor is under (1+eps).
//!
//! Everything is event-driven: a weight decrease at layer i-1 entry (a,b)
//! can only improve layer-i entries through the two sweeps (a,*) via
//! midpoint b and (*,b) via midpoint a, each O(n). Entries are powers of
//! (1+eps1) and only ever decrease, so each changes O(log(nW)/eps1) times;
//! the sweeps do the work a row of h=2 hop-bounded SSSP structures on the
//! complete layer graph would, with the quantization standing in for their
//! bucket rounding.

use std::collections::VecDeque;

use crate::graph::{exp_round_up, GraphError, UpdateOp, Vertex, INF};

pub struct DenseIncrApsp {
    n: usize,
    eps: f64,
    eps1: f64,
    k: usize,
    /// w[i] is the layer-i matrix, row-major; w[0] holds raw edge weights.
    w: Vec<Vec<f64>>,
    changes: Vec<(Vertex, Vertex, f64)>,
}

impl DenseIncrApsp {
    pub fn new(n: usize, eps: f64) -> Self {
        assert!(eps > 0.0, "accuracy must be positive");
        let k = ceil_log2(n).max(1);
        let eps1 = eps / (4 * k) as f64;
        let mut w = vec![vec![INF; n * n]; k + 1];
        for layer in &mut w {
            for v in 0..n {
                layer[v * n + v] = 0.0;
            }
        }
        DenseIncrApsp { n, eps, eps1, k, w, changes: Vec::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn eps1(&self) -> f64 {
        self.eps1
    }

    pub fn layers(&self) -> usize {
        self.k
    }

    /// Final (1+eps)-approximate estimate.
    pub fn estimate(&self, u: Vertex, v: Vertex) -> f64 {
        self.w[self.k][u * self.n + v]
    }

    /// Layer-i estimate: between delta and (1+eps1)^i * delta^(2^i).
    pub fn layer_estimate(&self, i: usize, u: Vertex, v: Vertex) -> f64 {
        self.w[i][u * self.n + v]
    }

    /// Final-layer estimate changes since the last drain (latest value per
    /// entry; an entry may appear more than once).
    pub fn drain_changes(&mut self) -> Vec<(Vertex, Vertex, f64)> {
        std::mem::take(&mut self.changes)
    }

    /// Applies an incremental update. Errors mirror the dynamic graph's:
    /// deletions and weight increases are mode violations.
    pub fn insert(&mut self, op: &UpdateOp) -> Result<bool, GraphError> {
        let (u, v, wt) = match *op {
            UpdateOp::Insert { u, v, w } | UpdateOp::SetWeight { u, v, w } => (u, v, w.value),
            UpdateOp::Delete { .. } => {
                return Err(GraphError::ModeViolation {
                    mode: "incremental",
                    what: "edge deletion",
                })
            }
        };
        if u >= self.n {
            return Err(GraphError::BadVertex(u));
        }
        if v >= self.n {
            return Err(GraphError::BadVertex(v));
        }
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        if !wt.is_finite() || wt < 1.0 {
            return Err(GraphError::BadWeight(wt));
        }
        let cur = self.w[0][u * self.n + v];
        if wt > cur {
            return Err(GraphError::ModeViolation { mode: "incremental", what: "weight increase" });
        }
        if wt == cur {
            return Ok(false);
        }
        self.relax(u, v, wt);
        Ok(true)
    }

    /// Monotone raw-weight update: lowers edge (u,v) to `wt` if that
    /// improves it, silently keeping the current value otherwise. This is
    /// the entry point for pipelines that feed possibly-stale candidates.
    pub fn relax(&mut self, u: Vertex, v: Vertex, wt: f64) {
        debug_assert!(u != v && wt >= 1.0);
        let n = self.n;
        if wt >= self.w[0][u * n + v] {
            return;
        }
        self.w[0][u * n + v] = wt;
        let mut queue: VecDeque<(usize, Vertex, Vertex)> = VecDeque::new();
        queue.push_back((0, u, v));
        let base_q = 1.0 + self.eps1;
        while let Some((i, a, b)) = queue.pop_front() {
            if i == self.k {
                self.changes.push((a, b, self.w[i][a * n + b]));
                continue;
            }
            let (lo, hi) = self.w.split_at_mut(i + 1);
            let wi = &lo[i];
            let wnext = &mut hi[0];
            let base = wi[a * n + b];
            // (a,t) through midpoint b
            for t in 0..n {
                if t == a {
                    continue;
                }
                let tail = wi[b * n + t];
                if !tail.is_finite() {
                    continue;
                }
                let q = exp_round_up(base_q, base + tail).0;
                if q < wnext[a * n + t] {
                    wnext[a * n + t] = q;
                    queue.push_back((i + 1, a, t));
                }
            }
            // (s,b) through midpoint a
            for s in 0..n {
                if s == b {
                    continue;
                }
                let head = wi[s * n + a];
                if !head.is_finite() {
                    continue;
                }
                let q = exp_round_up(base_q, head + base).0;
                if q < wnext[s * n + b] {
                    wnext[s * n + b] = q;
                    queue.push_back((i + 1, s, b));
                }
            }
        }
    }
}

fn ceil_log2(n: usize) -> usize {
    if n <= 1 {
        0
    } else {
        (usize::BITS - (n - 1).leading_zeros()) as usize
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::EdgeWeight;

    #[test]
    fn empty_and_diagonal() {
        let d = DenseIncrApsp::new(4, 0.5);
        for u in 0..4 {
            for v in 0..4 {
                if u == v {
                    assert_eq!(d.estimate(u, v), 0.0);
                } else {
                    assert!(d.estimate(u, v).is_infinite());
                }
            }
        }
    }

    #[test]
    fn mode_checks() {
        let mut d = DenseIncrApsp::new(4, 0.5);
        let ins = |u, v, w| UpdateOp::Insert { u, v, w: EdgeWeight::new(w) };
        assert!(d.insert(&ins(0, 1, 4.0)).unwrap());
        assert!(!d.insert(&ins(0, 1, 4.0)).unwrap());
        assert!(matches!(
            d.insert(&ins(0, 1, 5.0)),
            Err(GraphError::ModeViolation { .. })
        ));
        assert!(matches!(
            d.insert(&UpdateOp::Delete { u: 0, v: 1 }),
            Err(GraphError::ModeViolation { .. })
        ));
        assert!(matches!(d.insert(&ins(1, 1, 1.0)), Err(GraphError::SelfLoop(1))));
        assert!(matches!(d.insert(&ins(1, 2, 0.25)), Err(GraphError::BadWeight(_))));
        // weight decrease through either op kind is fine
        assert!(d.insert(&UpdateOp::SetWeight { u: 0, v: 1, w: EdgeWeight::new(2.0) }).unwrap());
        assert!((d.estimate(0, 1) - 2.0).abs() < 2.0 * 0.5);
    }

    #[test]
    fn single_edge_estimate() {
        let mut d = DenseIncrApsp::new(5, 0.3);
        d.insert(&UpdateOp::Insert { u: 2, v: 4, w: EdgeWeight::new(3.5) }).unwrap();
        let e = d.estimate(2, 4);
        assert!(e >= 3.5 && e <= 1.3 * 3.5, "estimate {e} outside [w,(1+eps)w]");
        assert!(d.estimate(4, 2).is_infinite());
    }
}
