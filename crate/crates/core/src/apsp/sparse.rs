//! Incremental (1+eps)-approximate APSP for sparse graphs.
//!
//! A phase-based pipeline over an even hop parameter d:
//!
//!  * tree banks from and to every vertex (exact ES trees to depth d when
//!    unweighted, (1+eps1)-approximate hop-bounded SSSP structures when
//!    weighted) supply both the hub construction and the hub-graph weights;
//!  * a hub set H is recomputed from the banks every f = ceil((n/d) ln n)
//!    inserts and patched in between by adding the endpoints of every
//!    insert, which keeps it valid between rebuilds;
//!  * the hub graph A (edges between hubs at bank distance, in the reverse
//!    metric) feeds a dense incremental APSP instance D_A over hub indices;
//!  * per-vertex shortcut stars S_u (reverse metric, fed by D_A estimates)
//!    and R_u (forward metric, fed by the D_u estimates) let hop-bounded
//!    SSSP instances D_u on rev(G) ∪ S_u and D'_u on G ∪ R_u reach any
//!    vertex in one shortcut hop plus at most one covering segment.
//!
//! Stars only ever shrink and every feed is a min-update, so all component
//! graphs stay incremental; stars persist across phase rollovers (stale
//! entries still overestimate true distances, and the fresh D_A re-feeds the
//! hub pairs that matter). Final estimates D'_u(v) satisfy
//! delta <= est <= (1+eps1)^3 delta unweighted and (1+eps1)^(p+4) weighted.

use rand::rngs::StdRng;
use rand::SeedableRng;
use thiserror::Error;

use crate::apsp::dense::DenseIncrApsp;
use crate::blockers::{
    decompose_depth, las_vegas_blocker, BlockerError, RootedTree, StoredTree,
};
use crate::graph::{
    DynamicDigraph, GraphError, Mode, StarUnion, UpdateOp, Vertex, INF,
};
use crate::hubs::{
    approx_hub_exponent, extend_on_insert, hubs_from_approx_trees, hubs_from_exact_trees, HubSet,
    HubsError,
};
use crate::sssp::estree::{Direction, EsTree, TreeEvent, UNREACHABLE};
use crate::sssp::hsssp::Hsssp;

#[derive(Debug, Error)]
pub enum SparseError {
    #[error("hop parameter must be even and in [2, n)")]
    BadD,
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Hubs(#[from] HubsError),
    #[error(transparent)]
    Blocker(#[from] BlockerError),
}

pub struct SparseIncrApsp {
    n: usize,
    d: u32,
    eps: f64,
    eps1: f64,
    weighted: bool,
    /// covering-segment hop bound: d unweighted, min(2*d'*p, n-1) weighted
    hub_hop: u32,
    /// d' = d * ceil(log2 n), the weighted blocker scale (0 when unweighted)
    dprime: u32,
    phase_len: u64,
    phase_count: u64,
    boundaries: u64,
    rolled: bool,
    g: DynamicDigraph,
    // unweighted banks: ES trees to depth hub_hop, both directions
    from_trees: Vec<EsTree>,
    to_trees: Vec<EsTree>,
    // weighted banks: approximate trees at h = 3d' plus the hub-to-hub bank
    // at h = hub_hop, reverse side carrying the reverse metric
    wfrom: Vec<Hsssp>,
    wto: Vec<Hsssp>,
    wa_bank: Vec<Hsssp>,
    hubs: HubSet,
    hub_index: Vec<Option<usize>>,
    rev_index: Vec<Vertex>,
    da: DenseIncrApsp,
    /// S_u spokes: weights over delta_rev(u, .), n entries per vertex
    s: Vec<Vec<f64>>,
    /// R_u spokes: weights over delta_G(u, .)
    r: Vec<Vec<f64>>,
    /// h-SSSP on rev(G) ∪ S_u from u, h = hub_hop + 1
    du: Vec<Hsssp>,
    /// h-SSSP on G ∪ R_u from u, h = hub_hop + 1
    dpu: Vec<Hsssp>,
    /// replaces the deterministic greedy rebuild with sampling + verify
    sampled_rebuild: Option<(f64, StdRng)>,
}

/// The paper's tuning d = n^(1/3) (ln n)^(4/3), rounded to the nearest even
/// integer and clamped into [2, n).
pub fn auto_d(n: usize) -> u32 {
    let x = (n as f64).powf(1.0 / 3.0) * (n as f64).ln().max(1.0).powf(4.0 / 3.0);
    let mut d = ((x / 2.0).round() as u32 * 2).max(2);
    if (d as usize) >= n {
        d = (((n - 1) / 2) * 2) as u32;
    }
    d
}

impl SparseIncrApsp {
    pub fn new(n: usize, d: u32, eps: f64, weighted: bool, w_max: f64) -> Result<Self, SparseError> {
        if d % 2 != 0 || d < 2 || (d as usize) >= n {
            return Err(SparseError::BadD);
        }
        assert!(eps > 0.0, "accuracy must be positive");
        let p = approx_hub_exponent(n);
        let (eps1, dprime, hub_hop) = if weighted {
            let dprime = d * (p - 1).max(1);
            let hub_hop = (2 * dprime * p).min(n as u32 - 1);
            (eps / (2 * p + 8) as f64, dprime, hub_hop)
        } else {
            (eps / 6.0, 0, d)
        };
        let g = DynamicDigraph::new(n, Mode::Incremental, w_max);
        let phase_len = ((n as f64 / d as f64) * (n as f64).ln()).ceil().max(1.0) as u64;
        let star_w = (w_max * n as f64 * 4.0).max(1.0);
        let h_small = hub_hop as usize + 1;
        let mut pipeline = SparseIncrApsp {
            n,
            d,
            eps,
            eps1,
            weighted,
            hub_hop,
            dprime,
            phase_len,
            phase_count: 0,
            boundaries: 0,
            rolled: false,
            from_trees: Vec::new(),
            to_trees: Vec::new(),
            wfrom: Vec::new(),
            wto: Vec::new(),
            wa_bank: Vec::new(),
            hubs: HubSet { members: Vec::new(), d: hub_hop, ratio: 1.0 },
            hub_index: vec![None; n],
            rev_index: Vec::new(),
            da: DenseIncrApsp::new(1, eps1),
            s: vec![vec![INF; n]; n],
            r: vec![vec![INF; n]; n],
            du: Vec::new(),
            dpu: Vec::new(),
            sampled_rebuild: None,
            g,
        };
        if weighted {
            for v in 0..n {
                pipeline.wfrom.push(Hsssp::new(&pipeline.g, v, (3 * dprime) as usize, eps1, w_max));
            }
            let rv = pipeline.g.reversed();
            for v in 0..n {
                pipeline.wto.push(Hsssp::new(&rv, v, (3 * dprime) as usize, eps1, w_max));
            }
            for v in 0..n {
                pipeline.wa_bank.push(Hsssp::new(&rv, v, hub_hop as usize, eps1, w_max));
            }
        } else {
            for v in 0..n {
                pipeline.from_trees.push(EsTree::new(&pipeline.g, v, hub_hop, Direction::FromSource));
            }
            for v in 0..n {
                pipeline.to_trees.push(EsTree::new(&pipeline.g, v, hub_hop, Direction::ToSource));
            }
        }
        for u in 0..n {
            let rv = pipeline.g.reversed();
            let view = StarUnion { base: &rv, center: u, spokes: &pipeline.s[u] };
            pipeline.du.push(Hsssp::new(&view, u, h_small, eps1, star_w));
        }
        for u in 0..n {
            let view = StarUnion { base: &pipeline.g, center: u, spokes: &pipeline.r[u] };
            pipeline.dpu.push(Hsssp::new(&view, u, h_small, eps1, star_w));
        }
        pipeline.recompute_hubs()?;
        Ok(pipeline)
    }

    /// Same pipeline with d auto-tuned.
    pub fn with_default_d(n: usize, eps: f64, weighted: bool, w_max: f64) -> Result<Self, SparseError> {
        Self::new(n, auto_d(n), eps, weighted, w_max)
    }

    /// Replaces the deterministic greedy hub rebuild with the sampled
    /// Las Vegas construction (candidate sampling at the given `c`, then
    /// verified against the banks).
    pub fn use_sampled_rebuild(&mut self, c: f64, seed: u64) {
        self.sampled_rebuild = Some((c, StdRng::seed_from_u64(seed)));
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn eps1(&self) -> f64 {
        self.eps1
    }

    pub fn hub_hop(&self) -> u32 {
        self.hub_hop
    }

    pub fn weighted(&self) -> bool {
        self.weighted
    }

    pub fn phase_len(&self) -> u64 {
        self.phase_len
    }

    /// Number of phase rollovers so far.
    pub fn boundary_count(&self) -> u64 {
        self.boundaries
    }

    /// Whether the most recent insert ended a phase.
    pub fn just_rolled_over(&self) -> bool {
        self.rolled
    }

    pub fn graph(&self) -> &DynamicDigraph {
        &self.g
    }

    pub fn hub_members(&self) -> &[Vertex] {
        &self.hubs.members
    }

    pub fn s_spokes(&self, u: Vertex) -> &[f64] {
        &self.s[u]
    }

    pub fn r_spokes(&self, u: Vertex) -> &[f64] {
        &self.r[u]
    }

    /// Current hub-graph edges (u, v, w): w overlays delta_rev(u, v).
    pub fn a_edges(&self) -> Vec<(Vertex, Vertex, f64)> {
        let mut out = Vec::new();
        for (iu, &u) in self.rev_index.iter().enumerate() {
            for (iv, &v) in self.rev_index.iter().enumerate() {
                if iu != iv {
                    let w = self.da.layer_estimate(0, iu, iv);
                    if w.is_finite() {
                        out.push((u, v, w));
                    }
                }
            }
        }
        out
    }

    /// Final estimate: delta <= est <= (1+eps) delta.
    pub fn estimate(&self, u: Vertex, v: Vertex) -> f64 {
        if u == v {
            0.0
        } else {
            self.dpu[u].est(v)
        }
    }

    pub fn insert(&mut self, op: &UpdateOp) -> Result<(), SparseError> {
        let (x, y, wt) = match *op {
            UpdateOp::Insert { u, v, w } | UpdateOp::SetWeight { u, v, w } => (u, v, w.value),
            UpdateOp::Delete { .. } => {
                return Err(SparseError::Graph(GraphError::ModeViolation {
                    mode: "incremental",
                    what: "edge deletion",
                }))
            }
        };
        if !self.weighted && wt != 1.0 {
            return Err(SparseError::Graph(GraphError::BadWeight(wt)));
        }
        let old = self.g.weight(x, y);
        if !self.g.apply(op)? {
            return Ok(()); // no-op in the restricted model
        }
        self.rolled = false;

        // 1. banks
        if self.weighted {
            for b in &mut self.wfrom {
                b.on_edge(&self.g, x, y, old, Some(wt));
            }
            let rv = self.g.reversed();
            for b in &mut self.wto {
                b.on_edge(&rv, y, x, old, Some(wt));
            }
            for b in &mut self.wa_bank {
                b.on_edge(&rv, y, x, old, Some(wt));
            }
        } else {
            for t in &mut self.from_trees {
                t.on_insert(&self.g, x, y);
            }
            for t in &mut self.to_trees {
                t.on_insert(&self.g, x, y);
            }
        }

        // 2. hub extension with the endpoints
        extend_on_insert(&mut self.hubs, x, y);
        let mut new_hubs: Vec<Vertex> = Vec::new();
        for m in [x, y] {
            if self.hub_index[m].is_none() && !new_hubs.contains(&m) {
                self.hub_index[m] = Some(self.rev_index.len());
                self.rev_index.push(m);
                new_hubs.push(m);
            }
        }

        // 3. phase rollover
        self.phase_count += 1;
        if self.phase_count >= self.phase_len {
            self.phase_count = 0;
            self.boundaries += 1;
            self.rolled = true;
            new_hubs.clear();
            self.recompute_hubs()?;
        }

        // 4. hub-graph refresh: full scans for hubs new this op, then the
        // banks' change streams filtered to current hub pairs
        for &nh in &new_hubs {
            let others: Vec<Vertex> = self.hubs.members.iter().copied().filter(|&v| v != nh).collect();
            for v in others {
                self.a_seed_pair(nh, v);
                self.a_seed_pair(v, nh);
            }
        }
        if self.weighted {
            for i in 0..self.n {
                let chs = self.wa_bank[i].drain_changes();
                let Some(iu) = self.hub_index[i] else { continue };
                for (v, est) in chs {
                    if v != i && est.is_finite() {
                        if let Some(iv) = self.hub_index[v] {
                            self.da.relax(iu, iv, est.max(1.0));
                        }
                    }
                }
            }
            for b in &mut self.wfrom {
                b.drain_changes();
            }
            for b in &mut self.wto {
                b.drain_changes();
            }
        } else {
            for i in 0..self.n {
                let evs = self.to_trees[i].drain_events();
                let Some(iu) = self.hub_index[i] else { continue };
                for ev in evs {
                    if let TreeEvent::Level(v, l) = ev {
                        if v != i && l != UNREACHABLE {
                            if let Some(iv) = self.hub_index[v] {
                                self.da.relax(iu, iv, (l as f64).max(1.0));
                            }
                        }
                    }
                }
            }
            for t in &mut self.from_trees {
                t.drain_events();
            }
        }

        // 5. the new edge reaches every D_u, then D_A's estimate stream
        // lowers the S stars and those decreases reach their D_u
        {
            let rv = self.g.reversed();
            for u in 0..self.n {
                let view = StarUnion { base: &rv, center: u, spokes: &self.s[u] };
                self.du[u].on_edge(&view, y, x, old, Some(wt));
            }
        }
        for (iu, iv, est) in self.da.drain_changes() {
            let (u, v) = (self.rev_index[iu], self.rev_index[iv]);
            if est < self.s[u][v] {
                let old_s = self.s[u][v];
                self.s[u][v] = est;
                let rv = self.g.reversed();
                let view = StarUnion { base: &rv, center: u, spokes: &self.s[u] };
                self.du[u].on_edge(&view, u, v, old_s.is_finite().then_some(old_s), Some(est));
            }
        }

        // 6. the new edge reaches every D'_u, then D_u estimate changes
        // lower the R stars and those decreases reach their D'_u
        for u in 0..self.n {
            let view = StarUnion { base: &self.g, center: u, spokes: &self.r[u] };
            self.dpu[u].on_edge(&view, x, y, old, Some(wt));
        }
        for v in 0..self.n {
            let chs = self.du[v].drain_changes();
            for (t, est) in chs {
                if est < self.r[t][v] {
                    let old_r = self.r[t][v];
                    self.r[t][v] = est;
                    let view = StarUnion { base: &self.g, center: t, spokes: &self.r[t] };
                    self.dpu[t].on_edge(&view, t, v, old_r.is_finite().then_some(old_r), Some(est));
                }
            }
        }
        for u in 0..self.n {
            self.dpu[u].drain_changes();
        }
        Ok(())
    }

    /// One hub-graph candidate: bank distance from u to v in the reverse
    /// metric, min-folded into D_A.
    fn a_seed_pair(&mut self, u: Vertex, v: Vertex) {
        let w = if self.weighted {
            self.wa_bank[u].est(v)
        } else {
            match self.to_trees[u].level(v) {
                UNREACHABLE => INF,
                l => l as f64,
            }
        };
        if w.is_finite() {
            let (iu, iv) = (self.hub_index[u].unwrap(), self.hub_index[v].unwrap());
            self.da.relax(iu, iv, w.max(1.0));
        }
    }

    /// Phase-boundary rebuild: fresh hub set from the banks, fresh hub
    /// index space and dense instance, full hub-graph population. The S/R
    /// stars and their h-SSSP instances persist (their entries still
    /// overestimate true distances); the fresh D_A re-feeds every current
    /// hub pair through the usual change stream.
    fn recompute_hubs(&mut self) -> Result<(), SparseError> {
        let trees = self.bank_trees();
        let blocker_d = if self.weighted { self.dprime / 2 } else { self.d / 2 };
        let members = match &mut self.sampled_rebuild {
            Some((c, rng)) => {
                // pieces of depth <= blocker_d make the stored-tree verifier
                // agree with the greedy construction's scoring
                let pieces: Vec<RootedTree> = if self.weighted {
                    trees
                        .iter()
                        .flat_map(|t| decompose_depth(t, self.n, blocker_d))
                        .collect()
                } else {
                    trees.iter().map(|t| truncate(t, self.n, blocker_d)).collect()
                };
                let mut stored: Vec<StoredTree> =
                    pieces.iter().map(|t| StoredTree::new(self.n, t)).collect();
                las_vegas_blocker(&mut stored, self.n, blocker_d, *c, rng, None)?.members
            }
            None => Vec::new(),
        };
        self.hubs = if self.weighted {
            let mut h = hubs_from_approx_trees(&trees, self.n, self.dprime, self.eps1)?;
            if !members.is_empty() {
                h.members = members;
            }
            h.d = h.d.min(self.n as u32 - 1); // simple paths never need more hops
            h
        } else {
            // depth-(d/2) truncations of exact BFS trees are exact BFS trees
            let cut: Vec<RootedTree> =
                trees.iter().map(|t| truncate(t, self.n, blocker_d)).collect();
            let mut h = hubs_from_exact_trees(&cut, self.n, blocker_d)?;
            if !members.is_empty() {
                h.members = members;
            }
            h
        };
        debug_assert_eq!(self.hubs.d, self.hub_hop);
        self.hub_index = vec![None; self.n];
        self.rev_index.clear();
        for &m in &self.hubs.members {
            self.hub_index[m] = Some(self.rev_index.len());
            self.rev_index.push(m);
        }
        let cap = self.rev_index.len() + 2 * self.phase_len as usize + 4;
        self.da = DenseIncrApsp::new(cap, self.eps1);
        let members: Vec<Vertex> = self.hubs.members.clone();
        for &u in &members {
            for &v in &members {
                if u != v {
                    self.a_seed_pair(u, v);
                }
            }
        }
        Ok(())
    }

    /// The banks as rooted trees for the blocker machinery.
    fn bank_trees(&self) -> Vec<RootedTree> {
        let mut trees = Vec::with_capacity(2 * self.n);
        if self.weighted {
            for bank in self.wfrom.iter().chain(self.wto.iter()) {
                let parents: Vec<Option<Vertex>> =
                    (0..self.n).map(|x| bank.tree_parent(x)).collect();
                trees.push(RootedTree::from_parents(bank.source(), &parents));
            }
        } else {
            for t in self.from_trees.iter().chain(self.to_trees.iter()) {
                trees.push(RootedTree::from_parents(t.source(), t.parents()));
            }
        }
        trees
    }
}

/// The subtree of vertices within `d` hops of the root.
fn truncate(tree: &RootedTree, n: usize, d: u32) -> RootedTree {
    let mut parents: Vec<Option<Vertex>> = vec![None; n];
    let mut depth: Vec<Option<u32>> = vec![None; n];
    depth[tree.root] = Some(0);
    // edges arrive in arbitrary order; settle depths by fixpoint
    let mut pending: Vec<(Vertex, Vertex)> = tree.edges.clone();
    while !pending.is_empty() {
        let before = pending.len();
        pending.retain(|&(c, p)| match depth[p] {
            Some(dp) => {
                if dp + 1 <= d {
                    depth[c] = Some(dp + 1);
                    parents[c] = Some(p);
                } else {
                    depth[c] = Some(dp + 1); // known deep; drop the edge
                }
                false
            }
            None => true,
        });
        if pending.len() == before {
            break; // remaining edges hang below dropped vertices
        }
    }
    RootedTree::from_parents(tree.root, &parents)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn truncate_keeps_the_shallow_part() {
        // chain 0 <- 1 <- 2 <- 3 <- 4 with a side branch 5 under 1
        let parents = vec![None, Some(0), Some(1), Some(2), Some(3), Some(1)];
        let tree = RootedTree::from_parents(0, &parents);
        assert_eq!(tree.depth(6), 4);
        let cut = truncate(&tree, 6, 2);
        assert_eq!(cut.depth(6), 2);
        let mut kept: Vec<Vertex> = cut.edges.iter().map(|&(c, _)| c).collect();
        kept.sort_unstable();
        assert_eq!(kept, vec![1, 2, 5]);
    }
}
