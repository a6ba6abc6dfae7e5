//! Hop-bounded (1+eps)-approximate single-source shortest paths under
//! dynamic edge updates.
//!
//! For every distance scale 2^k a *bucket* rounds edge weights up to
//! multiples of a quantum eps*2^k/h and runs an h-layer Bellman–Ford over
//! the rounded weights, clamping anything past (1+eps)*2^(k+1) to infinity.
//! A pair whose h-hop distance lands near 2^k picks up at most h quanta of
//! rounding error, i.e. a (1+eps) factor, in that bucket; the estimate is
//! the min over buckets. Hence the sandwich
//! dist(s,v) <= est(v) <= (1+eps) * dist_h(s,v),
//! where dist_h is the best length over paths of at most h edges.
//!
//! An edge update dirties the cells (j, head) in every bucket whose rounded
//! weight moved; repair recomputes dirty cells layer by layer from their
//! in-edges, propagating only actual value changes. Estimates are realized
//! by parent pointers: following them from v walks a genuine path to the
//! source whose true length is at most est(v), with estimates strictly
//! decreasing along the way.

use crate::graph::{GraphView, Vertex, INF};

#[derive(Clone, Copy, PartialEq, Debug)]
enum From {
    None,
    /// value carried from the previous layer
    Carry,
    /// reached over an edge from the given vertex
    Edge(Vertex),
}

struct Bucket {
    q: f64,
    cap: f64,
    /// d[j][v]: best rounded length of an s->v path with <= j edges
    d: Vec<Vec<f64>>,
    from: Vec<Vec<From>>,
}

impl Bucket {
    fn round(&self, w: f64) -> f64 {
        (w / self.q).ceil() * self.q
    }
}

pub struct Hsssp {
    source: Vertex,
    h: usize,
    eps: f64,
    buckets: Vec<Bucket>,
    est: Vec<f64>,
    changes: Vec<(Vertex, f64)>,
    // scratch: dirty queue per layer with a visited stamp to dedup
    dirty: Vec<Vec<Vertex>>,
    stamp: Vec<Vec<u32>>,
    round: u32,
}

impl Hsssp {
    /// `w_max` bounds edge weights; it sizes the bucket ladder.
    pub fn new(g: &impl GraphView, source: Vertex, h: usize, eps: f64, w_max: f64) -> Self {
        assert!(h >= 1 && eps > 0.0 && w_max >= 1.0);
        let n = g.vertex_count();
        let top = ((h as f64) * w_max).log2().ceil() as i32;
        let top = top.max(0);
        let buckets = (0..=top)
            .map(|k| {
                let scale = (2.0f64).powi(k);
                Bucket {
                    q: eps * scale / h as f64,
                    cap: (1.0 + eps) * scale * 2.0,
                    d: vec![vec![INF; n]; h + 1],
                    from: vec![vec![From::None; n]; h + 1],
                }
            })
            .collect();
        let mut s = Hsssp {
            source,
            h,
            eps,

            buckets,
            est: vec![INF; n],
            changes: Vec::new(),
            dirty: vec![Vec::new(); h + 1],
            stamp: vec![vec![0; n]; h + 1],
            round: 0,
        };
        for b in 0..s.buckets.len() {
            s.buckets[b].d[0][source] = 0.0;
            for j in 1..=h {
                s.buckets[b].d[j][source] = 0.0;
                for v in 0..n {
                    s.recompute(g, b, j, v);
                }
            }
        }
        for v in 0..n {
            s.est[v] = s.min_over_buckets(v);
        }
        s
    }

    pub fn source(&self) -> Vertex {
        self.source
    }

    pub fn hop_bound(&self) -> usize {
        self.h
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn est(&self, v: Vertex) -> f64 {
        self.est[v]
    }

    pub fn estimates(&self) -> &[f64] {
        &self.est
    }

    /// Estimate changes since the last drain, one entry per vertex whose
    /// final estimate moved (latest value).
    pub fn drain_changes(&mut self) -> Vec<(Vertex, f64)> {
        std::mem::take(&mut self.changes)
    }

    fn min_over_buckets(&self, v: Vertex) -> f64 {
        let mut best = INF;
        for b in &self.buckets {
            let x = b.d[self.h][v];
            if x < best {
                best = x;
            }
        }
        best
    }

    /// Parent of `v` in the estimate-realizing tree. `None` for the source
    /// and unreached vertices.
    ///
    /// Following parents from `v` walks a genuine path to the source whose
    /// length under current weights is at most `est(v)`, with estimates
    /// strictly decreasing at every step (so the pointers form a tree). The
    /// walk is not hop-bounded; for an h-hop witness use
    /// [`path`](Self::path).
    pub fn tree_parent(&self, v: Vertex) -> Option<Vertex> {
        if v == self.source || self.est[v].is_infinite() {
            return None;
        }
        let b = self
            .buckets
            .iter()
            .find(|b| b.d[self.h][v] == self.est[v])
            .expect("winning bucket exists for finite estimate");
        let mut j = self.h;
        loop {
            match b.from[j][v] {
                From::Carry => j -= 1,
                From::Edge(p) => return Some(p),
                From::None => unreachable!("finite non-source estimate must trace to an edge"),
            }
        }
    }

    /// A source-to-`v` path of at most `h` edges whose length under current
    /// weights is at most `est(v)`, as (tail, head) pairs in path order.
    pub fn path(&self, v: Vertex) -> Option<Vec<(Vertex, Vertex)>> {
        if self.est[v].is_infinite() {
            return None;
        }
        if v == self.source {
            return Some(Vec::new());
        }
        let b = self
            .buckets
            .iter()
            .find(|b| b.d[self.h][v] == self.est[v])
            .expect("winning bucket exists for finite estimate");
        let mut steps = Vec::new();
        let mut j = self.h;
        let mut x = v;
        while x != self.source {
            match b.from[j][x] {
                From::Carry => j -= 1,
                From::Edge(p) => {
                    steps.push((p, x));
                    x = p;
                    j -= 1;
                }
                From::None => unreachable!("finite cell must trace to the source"),
            }
        }
        steps.reverse();
        Some(steps)
    }

    /// Recomputes cell (j, v) of bucket `b` from layer j-1. Returns true if
    /// the stored value changed.
    fn recompute(&mut self, g: &impl GraphView, b: usize, j: usize, v: Vertex) -> bool {
        if v == self.source {
            return false; // pinned to 0 in every layer
        }
        let bucket = &self.buckets[b];
        let mut best = bucket.d[j - 1][v];
        let mut from = if best.is_finite() { From::Carry } else { From::None };
        let prev = &bucket.d[j - 1];
        let (q, cap) = (bucket.q, bucket.cap);
        g.for_each_in(v, |p, w| {
            let wr = (w / q).ceil() * q;
            let cand = prev[p] + wr;
            if cand < best {
                best = cand;
                from = From::Edge(p);
            }
        });
        if best > cap {
            best = INF;
            from = From::None;
        }
        let bucket = &mut self.buckets[b];
        let changed = bucket.d[j][v] != best;
        bucket.d[j][v] = best;
        bucket.from[j][v] = from;
        changed
    }

    fn mark(&mut self, j: usize, v: Vertex) {
        if self.stamp[j][v] != self.round {
            self.stamp[j][v] = self.round;
            self.dirty[j].push(v);
        }
    }

    /// Call after edge (u, v) in `g` has been inserted, deleted, or
    /// reweighted. `old_w`/`new_w` are the edge's weights before and after
    /// (None = absent); buckets where the rounded weight is unaffected are
    /// skipped.
    pub fn on_edge(
        &mut self,
        g: &impl GraphView,
        u: Vertex,
        v: Vertex,
        old_w: Option<f64>,
        new_w: Option<f64>,
    ) {
        let _ = u;
        let mut touched: Vec<Vertex> = Vec::new();
        for b in 0..self.buckets.len() {
            {
                let bucket = &self.buckets[b];
                let ro = old_w.map(|w| bucket.round(w));
                let rn = new_w.map(|w| bucket.round(w));
                match (ro, rn) {
                    (Some(a), Some(c)) if a == c => continue,
                    (Some(a), Some(c)) if a > bucket.cap && c > bucket.cap => continue,
                    (Some(a), None) if a > bucket.cap => continue,
                    (None, Some(c)) if c > bucket.cap => continue,
                    (None, None) => continue,
                    _ => {}
                }
            }
            self.round += 1;
            for j in 1..=self.h {
                self.mark(j, v);
            }
            for j in 1..=self.h {
                let work = std::mem::take(&mut self.dirty[j]);
                for x in work {
                    if self.recompute(g, b, j, x) {
                        if j == self.h {
                            touched.push(x);
                        } else {
                            self.mark(j + 1, x);
                            let mut outs = Vec::new();
                            g.for_each_out(x, |y, _| outs.push(y));
                            for y in outs {
                                self.mark(j + 1, y);
                            }
                        }
                    }
                }
            }
        }
        touched.sort_unstable();
        touched.dedup();
        for x in touched {
            let e = self.min_over_buckets(x);
            if e != self.est[x] {
                self.est[x] = e;
                self.changes.push((x, e));
            }
        }
    }
}
