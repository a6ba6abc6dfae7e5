//! Blocker sets of rooted-tree collections.
//!
//! A set B blocks a depth-<=d tree if every vertex at depth exactly d has
//! itself or an ancestor in B; equivalently, removing the subtrees rooted at
//! B vertices leaves depth < d. Deeper trees are handled by first slicing
//! them into maximal depth-<=d pieces rooted where the depth is divisible by
//! d. This module computes blockers greedily (max coverage score per pick),
//! by sampling (retry until a verification pass), and monitors blocker
//! validity of an evolving forest against a fixed B.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

use crate::dyntree::EulerForest;
use crate::graph::Vertex;

#[derive(Debug, Error, PartialEq)]
pub enum BlockerError {
    #[error("tree depth {found} exceeds blocker parameter {d}")]
    DepthExceeded { d: u32, found: u32 },
    #[error("no sampled set verified within {0} trials")]
    TrialsExhausted(u64),
}

/// A rooted out-tree over a subset of `0..n`, as (child, parent) pairs.
#[derive(Clone, Debug)]
pub struct RootedTree {
    pub root: Vertex,
    pub edges: Vec<(Vertex, Vertex)>,
}

impl RootedTree {
    /// Collects the tree rooted at `root` from a parent array (entries not
    /// reachable from `root` must be `None`).
    pub fn from_parents(root: Vertex, parents: &[Option<Vertex>]) -> Self {
        let edges = parents
            .iter()
            .enumerate()
            .filter_map(|(c, p)| p.map(|p| (c, p)))
            .collect();
        RootedTree { root, edges }
    }

    pub fn vertex_count(&self) -> usize {
        self.edges.len() + 1
    }

    /// Children lists and depths, vertices in BFS (parents-first) order.
    fn layout(&self, n: usize) -> TreeLayout {
        let mut children: Vec<Vec<Vertex>> = vec![Vec::new(); n];
        for &(c, p) in &self.edges {
            children[p].push(c);
        }
        let mut depth = vec![u32::MAX; n];
        let mut order = Vec::with_capacity(self.vertex_count());
        depth[self.root] = 0;
        order.push(self.root);
        let mut head = 0;
        while head < order.len() {
            let v = order[head];
            head += 1;
            for &c in &children[v] {
                depth[c] = depth[v] + 1;
                order.push(c);
            }
        }
        debug_assert_eq!(order.len(), self.vertex_count(), "edges must form one tree");
        TreeLayout { children, depth, order }
    }

    pub fn depth(&self, n: usize) -> u32 {
        let l = self.layout(n);
        l.order.iter().map(|&v| l.depth[v]).max().unwrap()
    }
}

struct TreeLayout {
    children: Vec<Vec<Vertex>>,
    depth: Vec<u32>,
    order: Vec<Vertex>,
}

/// Slices `tree` into its maximal depth-<=d subtrees rooted at non-leaf
/// vertices whose depth is divisible by `d`. Cut vertices appear twice: as a
/// leaf of the piece above and the root of the piece below. Every vertex of
/// the tree appears in some piece (a single-vertex tree yields itself).
pub fn decompose_depth(tree: &RootedTree, n: usize, d: u32) -> Vec<RootedTree> {
    assert!(d > 0);
    if tree.edges.is_empty() {
        return vec![tree.clone()];
    }
    let l = tree.layout(n);
    let is_piece_root = |v: Vertex| l.depth[v] % d == 0 && !l.children[v].is_empty();
    let mut pieces = Vec::new();
    for &x in &l.order {
        if !is_piece_root(x) {
            continue;
        }
        let mut edges = Vec::new();
        let mut stack = vec![x];
        while let Some(v) = stack.pop() {
            for &c in &l.children[v] {
                edges.push((c, v));
                if !is_piece_root(c) {
                    stack.push(c);
                }
            }
        }
        pieces.push(RootedTree { root: x, edges });
    }
    pieces
}

/// King's greedy blocker: repeatedly pick the vertex covering the most
/// remaining depth-`d` vertices across all trees (ties to the lowest id) and
/// remove its subtrees. Trees must already have depth <= d; decompose deeper
/// trees first.
pub fn greedy_blocker(
    trees: &[RootedTree],
    n: usize,
    d: u32,
) -> Result<Vec<Vertex>, BlockerError> {
    assert!(d > 0);
    struct T {
        layout: TreeLayout,
        parent: Vec<Vertex>,
        /// live descendants at depth exactly d, self included
        ddcount: Vec<u64>,
        removed: Vec<bool>,
    }
    let mut ts = Vec::with_capacity(trees.len());
    let mut score = vec![0u64; n];
    let mut owner: Vec<Vec<usize>> = vec![Vec::new(); n]; // tree indices containing v
    for rt in trees {
        let layout = rt.layout(n);
        if let Some(&deepest) = layout.order.last() {
            if layout.depth[deepest] > d {
                return Err(BlockerError::DepthExceeded { d, found: layout.depth[deepest] });
            }
        }
        let mut parent = vec![usize::MAX; n];
        for &(c, p) in &rt.edges {
            parent[c] = p;
        }
        let mut ddcount = vec![0u64; n];
        for &v in layout.order.iter().rev() {
            let mut cnt = u64::from(layout.depth[v] == d);
            for &c in &layout.children[v] {
                cnt += ddcount[c];
            }
            ddcount[v] = cnt;
        }
        let ti = ts.len();
        for &v in &layout.order {
            score[v] += ddcount[v];
            owner[v].push(ti);
        }
        ts.push(T { layout, parent, ddcount, removed: vec![false; n] });
    }

    let mut heap: BinaryHeap<(u64, Reverse<Vertex>)> = BinaryHeap::new();
    for v in 0..n {
        if score[v] > 0 {
            heap.push((score[v], Reverse(v)));
        }
    }
    let mut blocker = Vec::new();
    while let Some((s, Reverse(v))) = heap.pop() {
        if s != score[v] {
            continue; // stale
        }
        if s == 0 {
            break;
        }
        blocker.push(v);
        let mut touched = Vec::new();
        for &ti in &owner[v] {
            let t = &mut ts[ti];
            if t.removed[v] {
                continue;
            }
            let gone = t.ddcount[v];
            // ancestors lose v's contribution
            let mut p = t.parent[v];
            while p != usize::MAX && !t.removed[p] {
                t.ddcount[p] -= gone;
                score[p] -= gone;
                touched.push(p);
                p = t.parent[p];
            }
            // the live subtree of v leaves this tree entirely
            let mut stack = vec![v];
            while let Some(x) = stack.pop() {
                t.removed[x] = true;
                score[x] -= t.ddcount[x];
                touched.push(x);
                for &c in &t.layout.children[x] {
                    if !t.removed[c] {
                        stack.push(c);
                    }
                }
            }
        }
        for w in touched {
            if score[w] > 0 {
                heap.push((score[w], Reverse(w)));
            }
        }
    }
    blocker.sort_unstable();
    Ok(blocker)
}

/// Uniform random subset of `0..n` of size min(ceil(c*(n/d)*ln n), n) — the
/// size at which such a set blocks any fixed collection of Y depth-d trees
/// with probability >= 1 - Y/n^(c-1).
pub fn sample_candidate(n: usize, d: u32, c: f64, rng: &mut impl Rng) -> Vec<Vertex> {
    assert!(c > 1.0 && d > 0);
    let target = (c * (n as f64 / d as f64) * (n as f64).ln()).ceil() as usize;
    let size = target.min(n);
    let mut pool: Vec<Vertex> = (0..n).collect();
    let (picked, _) = pool.partial_shuffle(rng, size);
    let mut picked = picked.to_vec();
    picked.sort_unstable();
    picked
}

/// A depth-bounded tree held in an Euler-tour forest so blocker checks can
/// cut and relink in O(log n) per member.
pub struct StoredTree {
    pub forest: EulerForest,
    pub root: Vertex,
}

impl StoredTree {
    pub fn new(n: usize, tree: &RootedTree) -> Self {
        let mut forest = EulerForest::new(n);
        let mut parent = vec![usize::MAX; n];
        for &(c, p) in &tree.edges {
            parent[c] = p;
        }
        let l = tree.layout(n);
        for &v in &l.order {
            if v != tree.root {
                forest.link(v, parent[v]).unwrap();
            }
        }
        StoredTree { forest, root: tree.root }
    }
}

/// True iff `b` blocks every stored tree at parameter `d`: per tree, if the
/// root is a member the tree is trivially blocked; otherwise cut every
/// member out, test that the remaining root tree has depth < d, and relink.
/// The forests are restored exactly (parents and depths).
pub fn verify_blocker(trees: &mut [StoredTree], b: &[Vertex], d: u32) -> bool {
    assert!(d > 0);
    let mut ok = true;
    for st in trees.iter_mut() {
        if b.contains(&st.root) {
            continue;
        }
        let mut undo = Vec::with_capacity(b.len());
        for &m in b {
            if let Some(p) = st.forest.parent(m) {
                st.forest.cut(m).unwrap();
                undo.push((m, p));
            }
        }
        if st.forest.max_depth(st.root) >= d as usize {
            ok = false;
        }
        for (m, p) in undo.into_iter().rev() {
            st.forest.link(m, p).unwrap();
        }
        if !ok {
            break;
        }
    }
    ok
}

pub struct SampledBlocker {
    pub members: Vec<Vertex>,
    pub trials: u64,
}

/// Samples candidate sets until one verifies as a blocker. Expected O(1)
/// trials when c exceeds 1 + log_n |trees|; pass `max_trials` to turn a
/// statistical anomaly into an error instead of a hang.
pub fn las_vegas_blocker(
    trees: &mut [StoredTree],
    n: usize,
    d: u32,
    c: f64,
    rng: &mut impl Rng,
    max_trials: Option<u64>,
) -> Result<SampledBlocker, BlockerError> {
    let mut trials = 0;
    loop {
        trials += 1;
        let cand = sample_candidate(n, d, c, rng);
        if verify_blocker(trees, &cand, d) {
            return Ok(SampledBlocker { members: cand, trials });
        }
        if let Some(cap) = max_trials {
            if trials >= cap {
                return Err(BlockerError::TrialsExhausted(cap));
            }
        }
    }
}

/// Tracks whether a fixed set B blocks an evolving forest at parameter `d`.
///
/// Internally keeps the forest cut at every B vertex, so B members are only
/// ever piece roots; B blocks the forest iff no piece rooted outside B
/// reaches depth d. Each structural update adjusts a count of offending
/// pieces with O(log n) depth queries, so the answer is exact at all times
/// and recovers if a later update shrinks an offending piece.
pub struct BlockerMonitor {
    pieces: EulerForest,
    in_b: Vec<bool>,
    d: u32,
    bad: usize,
}

impl BlockerMonitor {
    /// `parents` describes the current forest (every tree of depth <= d);
    /// `b` is fixed for the monitor's lifetime.
    pub fn new(n: usize, parents: &[Option<Vertex>], b: &[Vertex], d: u32) -> Self {
        assert!(d > 0);
        let mut in_b = vec![false; n];
        for &m in b {
            in_b[m] = true;
        }
        let mut pieces = EulerForest::new(n);
        // link children after their parents: order by depth in the real forest
        let mut depth = vec![0u32; n];
        let mut order: Vec<Vertex> = (0..n).collect();
        for v in 0..n {
            let mut x = v;
            let mut dd = 0;
            while let Some(p) = parents[x] {
                x = p;
                dd += 1;
            }
            depth[v] = dd;
        }
        order.sort_unstable_by_key(|&v| depth[v]);
        for v in order {
            if let Some(p) = parents[v] {
                if !in_b[v] {
                    pieces.link(v, p).unwrap();
                }
            }
        }
        let mut bad = 0;
        for v in 0..n {
            if pieces.parent(v).is_none() && !in_b[v] && pieces.max_depth(v) >= d as usize {
                bad += 1;
            }
        }
        BlockerMonitor { pieces, in_b, d, bad }
    }

    fn offends(&mut self, piece_root: Vertex) -> bool {
        !self.in_b[piece_root] && self.pieces.max_depth(piece_root) >= self.d as usize
    }

    /// The real forest made root `r` a child of `v`.
    pub fn on_link(&mut self, r: Vertex, v: Vertex) {
        if self.in_b[r] {
            return; // B vertices stay piece roots; their subtrees are blocked
        }
        let pr = self.pieces.root(v);
        self.bad -= usize::from(self.offends(r));
        self.bad -= usize::from(self.offends(pr));
        self.pieces.link(r, v).unwrap();
        self.bad += usize::from(self.offends(pr));
    }

    /// The real forest detached `v` (not a root) from its parent.
    pub fn on_cut(&mut self, v: Vertex) {
        if self.in_b[v] {
            return; // already a piece root; nothing moves
        }
        let pr = self.pieces.root(v);
        self.bad -= usize::from(self.offends(pr));
        self.pieces.cut(v).unwrap();
        self.bad += usize::from(self.offends(pr));
        self.bad += usize::from(self.offends(v));
    }

    pub fn is_blocker(&self) -> bool {
        self.bad == 0
    }
}
