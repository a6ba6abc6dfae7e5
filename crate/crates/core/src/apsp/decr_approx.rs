//! (1+eps)-approximate decremental APSP over a hub-set hierarchy.
//!
//! Given A_0 = V ⊇ A_1 ⊇ … ⊇ A_q (A_i a d_i-hub of the graph and its
//! reverse), level q keeps one hop-bounded SSSP pair (forward on G,
//! reverse on rev(G)) from the single A_q vertex with h = n-1. Level i < q
//! keeps, for every u ∈ A_i, a forward structure on G ∪ S_u and a reverse
//! one on rev(G) ∪ S'_u with h = d_{i+1}+1, where the stars hold one spoke
//! u→v per v ∈ A_{i+1} weighted by the level-(i+1) estimate of that pair
//! (the reverse structures of level i+1 feed the forward spokes and vice
//! versa, so each spoke approximates the distance in its own metric).
//!
//! A path longer than d_{i+1} hops jumps to the last hub of its covering
//! decomposition in one spoke and finishes with at most d_{i+1} real hops,
//! so each level loses one (1+eps') factor over the next:
//! delta <= est_i <= (1+eps')^(q-i+1) delta on (A_i × V) ∪ (V × A_i), with
//! eps' = eps/(2(q+1)) making level 0 — which answers queries — accurate
//! to (1+eps')^(q+1) <= 1+eps. Deletions only raise estimates, and every
//! spoke update is a weight increase, so all component structures stay in
//! their decremental regime. Level 0 needs no reverse side (nothing
//! consumes it) and is skipped.

use crate::graph::{DynamicDigraph, GraphError, StarUnion, UpdateOp, Vertex, INF};
use crate::sssp::hsssp::Hsssp;

pub struct ApproxDecrApsp {
    n: usize,
    q: usize,
    eps: f64,
    epsq: f64,
    g: DynamicDigraph,
    sets: Vec<Vec<Vertex>>,
    /// vertex -> index into sets[i], per level
    pos: Vec<Vec<Option<usize>>>,
    /// hop bound per level: d_{i+1}+1, n-1 at level q
    hops: Vec<usize>,
    fwd: Vec<Vec<Hsssp>>,
    rev: Vec<Vec<Hsssp>>,
    /// spoke weights for fwd[i][j] (levels i < q), indexed by target vertex
    s_fwd: Vec<Vec<Vec<f64>>>,
    s_rev: Vec<Vec<Vec<f64>>>,
}

impl ApproxDecrApsp {
    pub fn new(g: DynamicDigraph, eps: f64, sets: &[Vec<Vertex>], depths: &[u32]) -> Self {
        let n = g.n();
        assert!(eps > 0.0, "accuracy must be positive");
        assert_eq!(sets.len(), depths.len());
        assert!(!sets.is_empty());
        assert!(sets[0].iter().copied().eq(0..n), "level 0 must be all of V, sorted");
        assert_eq!(sets[sets.len() - 1].len(), 1, "top level must be a single vertex");
        let q = sets.len() - 1;
        let epsq = eps / (2.0 * (q as f64 + 1.0));
        let star_w = (g.w_max() * n as f64 * 4.0).max(1.0);
        let cap = n.saturating_sub(1).max(1);
        let mut pos = Vec::with_capacity(q + 1);
        for level in sets {
            let mut p = vec![None; n];
            for (j, &a) in level.iter().enumerate() {
                p[a] = Some(j);
            }
            pos.push(p);
        }
        let hops: Vec<usize> =
            (0..=q).map(|i| if i < q { (depths[i + 1] as usize + 1).min(cap) } else { cap }).collect();
        let mut me = ApproxDecrApsp {
            n,
            q,
            eps,
            epsq,
            sets: sets.to_vec(),
            pos,
            hops,
            fwd: (0..=q).map(|_| Vec::new()).collect(),
            rev: (0..=q).map(|_| Vec::new()).collect(),
            s_fwd: vec![Vec::new(); q + 1],
            s_rev: vec![Vec::new(); q + 1],
            g,
        };
        // top-down: level i spokes read level i+1 estimates at build time
        for i in (0..=q).rev() {
            let h = me.hops[i];
            for j in 0..me.sets[i].len() {
                let u = me.sets[i][j];
                let (sf, sr) = if i < q {
                    let mut sf = vec![INF; n];
                    let mut sr = vec![INF; n];
                    for (k, &v) in me.sets[i + 1].iter().enumerate() {
                        sf[v] = me.rev[i + 1][k].est(u);
                        sr[v] = me.fwd[i + 1][k].est(u);
                    }
                    (sf, sr)
                } else {
                    (Vec::new(), Vec::new())
                };
                let f = if i < q {
                    let view = StarUnion { base: &me.g, center: u, spokes: &sf };
                    Hsssp::new(&view, u, h, epsq, star_w)
                } else {
                    Hsssp::new(&me.g, u, h, epsq, star_w)
                };
                me.fwd[i].push(f);
                if i > 0 {
                    let rv = me.g.reversed();
                    let r = if i < q {
                        let view = StarUnion { base: &rv, center: u, spokes: &sr };
                        Hsssp::new(&view, u, h, epsq, star_w)
                    } else {
                        Hsssp::new(&rv, u, h, epsq, star_w)
                    };
                    me.rev[i].push(r);
                }
                me.s_fwd[i].push(sf);
                me.s_rev[i].push(sr);
            }
        }
        for level in me.fwd.iter_mut().chain(me.rev.iter_mut()) {
            for s in level {
                s.drain_changes();
            }
        }
        me
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// Per-level accuracy eps' = eps / (2(q+1)).
    pub fn eps_level(&self) -> f64 {
        self.epsq
    }

    pub fn graph(&self) -> &DynamicDigraph {
        &self.g
    }

    pub fn level_sets(&self) -> &[Vec<Vertex>] {
        &self.sets
    }

    pub fn hop_bound(&self, i: usize) -> usize {
        self.hops[i]
    }

    /// Level-i forward estimate from the j-th hub of A_i.
    pub fn level_estimate(&self, i: usize, j: usize, v: Vertex) -> f64 {
        self.fwd[i][j].est(v)
    }

    /// Level-i reverse estimate (distance v → hub); levels 1..=q only.
    pub fn level_estimate_rev(&self, i: usize, j: usize, v: Vertex) -> f64 {
        self.rev[i][j].est(v)
    }

    /// Forward spoke weights of the j-th hub of A_i (empty at level q).
    pub fn spokes_fwd(&self, i: usize, j: usize) -> &[f64] {
        &self.s_fwd[i][j]
    }

    /// delta <= est <= (1+eps) delta.
    pub fn distance(&self, u: Vertex, v: Vertex) -> f64 {
        if u == v {
            0.0
        } else {
            self.fwd[0][u].est(v)
        }
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
        let old = self.g.weight(x, y);
        self.g.apply(op)?;
        for i in (0..=self.q).rev() {
            // the deleted edge reaches every structure of this level
            for j in 0..self.sets[i].len() {
                let u = self.sets[i][j];
                if i < self.q {
                    let view = StarUnion { base: &self.g, center: u, spokes: &self.s_fwd[i][j] };
                    self.fwd[i][j].on_edge(&view, x, y, old, None);
                } else {
                    self.fwd[i][j].on_edge(&self.g, x, y, old, None);
                }
                if i > 0 {
                    let rv = self.g.reversed();
                    if i < self.q {
                        let view = StarUnion { base: &rv, center: u, spokes: &self.s_rev[i][j] };
                        self.rev[i][j].on_edge(&view, y, x, old, None);
                    } else {
                        self.rev[i][j].on_edge(&rv, y, x, old, None);
                    }
                }
            }
            // level i+1 has settled; its estimate increases raise our spokes
            if i < self.q {
                for k in 0..self.sets[i + 1].len() {
                    let v = self.sets[i + 1][k];
                    for (t, est) in self.rev[i + 1][k].drain_changes() {
                        let Some(j) = self.pos[i][t] else { continue };
                        self.update_spoke(i, j, v, est, true);
                    }
                    if i > 0 {
                        for (t, est) in self.fwd[i + 1][k].drain_changes() {
                            let Some(j) = self.pos[i][t] else { continue };
                            self.update_spoke(i, j, v, est, false);
                        }
                    }
                }
            }
        }
        // level-0 forward changes have no consumer; keep the logs empty
        for f in &mut self.fwd[0] {
            f.drain_changes();
        }
        Ok(())
    }

    fn update_spoke(&mut self, i: usize, j: usize, v: Vertex, est: f64, forward: bool) {
        let u = self.sets[i][j];
        let spokes = if forward { &mut self.s_fwd[i][j] } else { &mut self.s_rev[i][j] };
        let old = spokes[v];
        if old == est {
            return;
        }
        spokes[v] = est;
        let old_w = old.is_finite().then_some(old);
        let new_w = est.is_finite().then_some(est);
        if forward {
            let view = StarUnion { base: &self.g, center: u, spokes: &self.s_fwd[i][j] };
            self.fwd[i][j].on_edge(&view, u, v, old_w, new_w);
        } else {
            let rv = self.g.reversed();
            let view = StarUnion { base: &rv, center: u, spokes: &self.s_rev[i][j] };
            self.rev[i][j].on_edge(&view, u, v, old_w, new_w);
        }
    }
}
