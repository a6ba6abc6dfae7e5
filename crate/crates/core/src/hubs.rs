//! Hub sets: covered paths, hub construction from tree-collection blockers,
//! incremental repair, and the leveled hub-family monitor.
//!
//! A path is (B,d)-covered if it splits into segments of at most d hops,
//! each segment after the first starting at a vertex of B. A d-hub set
//! covers some shortest path for every reachable pair; an approximate hub
//! set covers a path within a length ratio instead. Hubs come from blockers
//! of shortest-path-tree collections: blocking depth-d trees from every
//! vertex gives a 2d-hub set, blocking trees rooted at an existing d-hub set
//! gives a 6d-hub set, and blocking decomposed approximate trees gives an
//! approximate hub set. The family monitor keeps a nested hierarchy of such
//! sets valid under edge deletions, raising an alarm when a level's blocker
//! property breaks.

use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

use crate::blockers::{decompose_depth, greedy_blocker, BlockerError, BlockerMonitor, RootedTree};
use crate::graph::{DynamicDigraph, GraphView, UpdateOp, Vertex};
use crate::sssp::estree::{Direction, EsTree, TreeEvent};

#[derive(Debug, Error, PartialEq)]
pub enum HubsError {
    #[error("hop parameter must be even")]
    OddD,
    #[error(transparent)]
    Blocker(#[from] BlockerError),
}

/// A claimed hub set: covered paths use at most `d` hops per segment and
/// overshoot true distance by at most a factor `ratio` (1 for exact sets).
#[derive(Clone, Debug)]
pub struct HubSet {
    pub members: Vec<Vertex>,
    pub d: u32,
    pub ratio: f64,
}

impl HubSet {
    pub fn contains(&self, v: Vertex) -> bool {
        self.members.binary_search(&v).is_ok()
    }
}

/// True iff `path` (a vertex sequence) splits into segments of at most `d`
/// hops with every segment after the first starting at a vertex of B.
/// Greedy left-to-right splitting is exact: always jump to the farthest
/// B vertex within reach.
pub fn is_covered(path: &[Vertex], in_b: impl Fn(Vertex) -> bool, d: u32) -> bool {
    cover_split(path, in_b, d).is_some()
}

/// Segment starts of the greedy covering split (`[0, ...]`), or None if the
/// path is not (B,d)-covered.
pub fn cover_split(path: &[Vertex], in_b: impl Fn(Vertex) -> bool, d: u32) -> Option<Vec<usize>> {
    let d = d as usize;
    let mut starts = vec![0];
    if path.len() <= 1 {
        return Some(starts);
    }
    let last = path.len() - 1;
    let mut start = 0;
    while start + d < last {
        let next = (start + 1..=start + d).rev().find(|&j| in_b(path[j]))?;
        starts.push(next);
        start = next;
    }
    Some(starts)
}

/// Splits a (B,d)-covered path of at least d hops into consecutive blocks of
/// hop-length in [d,3d], every block after the first starting at a vertex of
/// B. Returns index ranges (start,end) into `path`; None if the path is not
/// covered or shorter than d hops.
///
/// Recipe: group whole covering segments until a block reaches d hops (then
/// it has at most 2d-1); if the leftover tail is shorter than d hops, absorb
/// it into the final block (at most 3d-2 total).
pub fn split_blocks(
    path: &[Vertex],
    in_b: impl Fn(Vertex) -> bool,
    d: u32,
) -> Option<Vec<(usize, usize)>> {
    let starts = cover_split(path, &in_b, d)?;
    let d = d as usize;
    let last = path.len() - 1;
    if last < d {
        return None;
    }
    let mut bounds = starts;
    bounds.push(last); // segment t spans bounds[t]..bounds[t+1]
    let mut blocks = Vec::new();
    let mut bstart = 0; // index into path
    let mut t = 0; // first segment of the current block
    while bounds[t] < last {
        let mut f = t;
        while bounds[f + 1] - bstart < d {
            f += 1;
        }
        let mut bend = bounds[f + 1];
        if last - bend < d {
            bend = last;
            f = bounds.len() - 2;
        }
        blocks.push((bstart, bend));
        bstart = bend;
        t = f + 1;
        if bend == last {
            break;
        }
    }
    Some(blocks)
}

/// BFS tree from `source` truncated at `depth`, following out-edges
/// (FromSource) or in-edges (ToSource). Edge weights are ignored.
pub fn bfs_tree<G: GraphView>(g: &G, source: Vertex, depth: u32, dir: Direction) -> RootedTree {
    let n = g.vertex_count();
    let mut level = vec![u32::MAX; n];
    let mut parent: Vec<Option<Vertex>> = vec![None; n];
    let mut queue = std::collections::VecDeque::new();
    level[source] = 0;
    queue.push_back(source);
    while let Some(v) = queue.pop_front() {
        if level[v] == depth {
            continue;
        }
        let mut visit = |w: Vertex, _: f64| {
            if level[w] == u32::MAX {
                level[w] = level[v] + 1;
                parent[w] = Some(v);
                queue.push_back(w);
            }
        };
        match dir {
            Direction::FromSource => g.for_each_out(v, &mut visit),
            Direction::ToSource => g.for_each_in(v, &mut visit),
        }
    }
    RootedTree::from_parents(source, &parent)
}

/// Depth-`d` BFS trees from every vertex in both directions (2n trees).
pub fn exact_tree_bank<G: GraphView>(g: &G, d: u32) -> Vec<RootedTree> {
    let n = g.vertex_count();
    let mut trees = Vec::with_capacity(2 * n);
    for v in 0..n {
        trees.push(bfs_tree(g, v, d, Direction::FromSource));
    }
    for v in 0..n {
        trees.push(bfs_tree(g, v, d, Direction::ToSource));
    }
    trees
}

/// Blocker of exact depth-d trees from every vertex in both directions:
/// a 2d-hub set of the graph and its reverse.
pub fn hubs_from_exact_trees(
    trees: &[RootedTree],
    n: usize,
    d: u32,
) -> Result<HubSet, HubsError> {
    let members = greedy_blocker(trees, n, d)?;
    Ok(HubSet { members, d: 2 * d, ratio: 1.0 })
}

/// Blocker of exact depth-d trees rooted at the members of a valid d-hub
/// set (both directions): a 6d-hub set.
pub fn hubs_from_hub_trees(
    h: &HubSet,
    trees: &[RootedTree],
    n: usize,
    d: u32,
) -> Result<HubSet, HubsError> {
    debug_assert_eq!(h.d, d, "trees must match the hub set's hop parameter");
    debug_assert!(trees.iter().all(|t| h.contains(t.root)));
    let members = greedy_blocker(trees, n, d)?;
    Ok(HubSet { members, d: 6 * d, ratio: h.ratio })
}

/// p = ceil(log2 n) + 1: segments of a shortest path halve at most p times.
pub fn approx_hub_exponent(n: usize) -> u32 {
    ceil_log2(n) + 1
}

fn ceil_log2(n: usize) -> u32 {
    if n <= 1 {
        0
    } else {
        usize::BITS - (n - 1).leading_zeros()
    }
}

/// Blocker (at parameter d/2) of the depth-(d/2) decompositions of
/// (1+eps)-approximate shortest-path trees up to depth 3d from every vertex
/// in both directions: a (1+eps)^p-approximate 2dp-hub set, p = ceil(log2
/// n)+1. The input trees may have any hop depth; the decomposition slices
/// them.
pub fn hubs_from_approx_trees(
    trees: &[RootedTree],
    n: usize,
    d: u32,
    eps: f64,
) -> Result<HubSet, HubsError> {
    if d % 2 != 0 || d == 0 {
        return Err(HubsError::OddD);
    }
    let half = d / 2;
    let mut pieces = Vec::new();
    for t in trees {
        pieces.extend(decompose_depth(t, n, half));
    }
    let members = greedy_blocker(&pieces, n, half)?;
    let p = approx_hub_exponent(n);
    Ok(HubSet { members, d: 2 * d * p, ratio: (1.0 + eps).powi(p as i32) })
}

/// After inserting edge x→y, H ∪ {x,y} remains a valid hub set: any new
/// shortest path crosses the edge once and both endpoints become segment
/// boundaries.
pub fn extend_on_insert(h: &mut HubSet, x: Vertex, y: Vertex) {
    for v in [x, y] {
        if let Err(pos) = h.members.binary_search(&v) {
            h.members.insert(pos, v);
        }
    }
}

/// Level sets and depths of the nested hierarchy: A_i = first a_i entries
/// of `perm` (sorted), a_i = min(6^(q-i), n), q = ceil(log_6 n), with
/// d_0 = ceil(z * (n/a_1) * ceil(ln n)) and d_i = 6*d_{i-1}, all capped at
/// n-1. Exposed so drivers that only need the plan (e.g. to seed the
/// decremental pipelines) can skip building the monitor forests.
pub fn family_plan(n: usize, z: f64, perm: &[Vertex]) -> (Vec<Vec<Vertex>>, Vec<u32>) {
    assert_eq!(perm.len(), n);
    assert!(z >= 1.0);
    let mut q = 0usize;
    let mut pow = 1usize;
    while pow < n {
        pow *= 6;
        q += 1;
    }
    let mut sizes = Vec::with_capacity(q + 1);
    for i in 0..=q {
        sizes.push(6usize.pow((q - i) as u32).min(n));
    }
    let sets: Vec<Vec<Vertex>> = sizes
        .iter()
        .map(|&a| {
            let mut s = perm[..a].to_vec();
            s.sort_unstable();
            s
        })
        .collect();
    let cap = (n.max(2) - 1) as u32;
    let ln_n = (n.max(2) as f64).ln().ceil();
    let mut depths: Vec<u32> = Vec::with_capacity(q + 1);
    for i in 0..=q {
        let d = if i == 0 {
            let a1 = if q >= 1 { sizes[1] as f64 } else { 1.0 };
            ((z * (n as f64 / a1) * ln_n).ceil() as u32).min(cap)
        } else {
            depths[i - 1].saturating_mul(6).min(cap)
        };
        depths.push(d.max(1));
    }
    (sets, depths)
}

/// Nested hub-set hierarchy A_0 ⊇ A_1 ⊇ … ⊇ A_q monitored under edge
/// deletions.
///
/// Level i keeps truncated BFS trees of depth d_{i-1} from and to every
/// vertex of A_{i-1}, mirrored into blocker monitors against B = A_i. While
/// no monitor reports a violation, induction gives that each A_i is a
/// d_i-hub set of the graph and its reverse: A_0 = V is trivially a hub set,
/// and blocking the depth-d trees rooted at a d-hub set yields a 6d-hub set,
/// with d_i = min(6 d_{i-1}, n-1). The alarm is not sticky: it reflects the
/// current forest state and clears if later deletions shrink the offending
/// pieces.
pub struct HubFamily {
    pub q: usize,
    /// A_0..A_q, each sorted; prefixes of one random permutation.
    pub sets: Vec<Vec<Vertex>>,
    /// d_0..d_q.
    pub depths: Vec<u32>,
    levels: Vec<Level>,
    n: usize,
}

struct Level {
    from: Vec<(EsTree, BlockerMonitor)>,
    to: Vec<(EsTree, BlockerMonitor)>,
}

impl HubFamily {
    pub fn new(g: &DynamicDigraph, z: f64, rng: &mut impl Rng) -> Self {
        let mut perm: Vec<Vertex> = (0..g.vertex_count()).collect();
        perm.shuffle(rng);
        Self::with_permutation(g, z, &perm)
    }

    /// Deterministic construction: A_i = first a_i entries of `perm`, with
    /// a_i = min(6^(q-i), n) and q = ceil(log_6 n).
    pub fn with_permutation(g: &DynamicDigraph, z: f64, perm: &[Vertex]) -> Self {
        let (sets, depths) = family_plan(g.vertex_count(), z, perm);
        Self::with_sets(g, sets, depths)
    }

    /// Builds the monitor hierarchy over caller-supplied sets and depths
    /// (normally those of `with_permutation`; exposed so the Las Vegas
    /// wrapper can watch a deliberately degenerate family in tests).
    pub fn with_sets(g: &DynamicDigraph, sets: Vec<Vec<Vertex>>, depths: Vec<u32>) -> Self {
        let n = g.vertex_count();
        assert!(!sets.is_empty());
        assert_eq!(sets.len(), depths.len());
        let q = sets.len() - 1;
        let mut levels = Vec::with_capacity(q);
        for i in 1..=q {
            let d = depths[i - 1];
            let b = &sets[i];
            let build = |dir| -> Vec<(EsTree, BlockerMonitor)> {
                sets[i - 1]
                    .iter()
                    .map(|&r| {
                        let t = EsTree::new(g, r, d, dir);
                        let m = BlockerMonitor::new(n, t.parents(), b, d);
                        (t, m)
                    })
                    .collect()
            };
            levels.push(Level { from: build(Direction::FromSource), to: build(Direction::ToSource) });
        }
        HubFamily { q, sets, depths, levels, n }
    }

    /// Feeds one already-applied deletion through every tree and monitor.
    pub fn on_update(&mut self, g: &DynamicDigraph, op: &UpdateOp) {
        let UpdateOp::Delete { u, v } = *op else {
            panic!("hub family monitors a decremental stream");
        };
        for level in &mut self.levels {
            for (tree, mon) in level.from.iter_mut().chain(level.to.iter_mut()) {
                tree.on_delete(g, u, v);
                for ev in tree.drain_events() {
                    match ev {
                        TreeEvent::Detach(x) => mon.on_cut(x),
                        TreeEvent::Attach(x, p) => mon.on_link(x, p),
                        TreeEvent::Level(..) => {}
                    }
                }
            }
        }
    }

    /// True iff some level's blocker property is currently violated. While
    /// false, every A_i is a d_i-hub set of the graph and its reverse.
    pub fn alarm(&self) -> bool {
        self.levels.iter().any(|l| {
            l.from.iter().chain(l.to.iter()).any(|(_, m)| !m.is_blocker())
        })
    }

    /// Consistency check: every incrementally maintained monitor agrees
    /// with one rebuilt from its tree's current parent array. Costly;
    /// intended for tests and debugging.
    pub fn audit(&mut self) -> bool {
        let n = self.n;
        for (i, level) in self.levels.iter_mut().enumerate() {
            let d = self.depths[i];
            let b = &self.sets[i + 1];
            for (tree, mon) in level.from.iter_mut().chain(level.to.iter_mut()) {
                let fresh = BlockerMonitor::new(n, tree.parents(), b, d);
                if fresh.is_blocker() != mon.is_blocker() {
                    return false;
                }
            }
        }
        true
    }

    /// The levels as claimed hub sets (A_i at hop parameter d_i).
    pub fn hub_sets(&self) -> Vec<HubSet> {
        self.sets
            .iter()
            .zip(&self.depths)
            .map(|(s, &d)| HubSet { members: s.clone(), d, ratio: 1.0 })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn short_paths_covered_without_hubs() {
        let path: Vec<Vertex> = (0..=5).collect();
        assert!(is_covered(&path, |_| false, 5));
        assert!(!is_covered(&path, |_| false, 4));
        assert!(is_covered(&path[..1], |_| false, 1));
    }

    #[test]
    fn cover_needs_segment_starts_in_b() {
        let path: Vec<Vertex> = (0..=6).collect();
        // B={3}: segments 0..3 and 3..6, both 3 hops
        assert!(is_covered(&path, |v| v == 3, 3));
        // B={2}: tail 2..6 has 4 hops
        assert!(!is_covered(&path, |v| v == 2, 3));
        assert_eq!(cover_split(&path, |v| v == 3, 3), Some(vec![0, 3]));
    }

    #[test]
    fn blocks_tile_with_bounded_hops() {
        // 14-hop path covered at d=3 by every third vertex
        let path: Vec<Vertex> = (0..=14).collect();
        let in_b = |v: Vertex| v % 3 == 0 && v > 0;
        let blocks = split_blocks(&path, in_b, 3).unwrap();
        assert_eq!(blocks.first().unwrap().0, 0);
        assert_eq!(blocks.last().unwrap().1, 14);
        for w in blocks.windows(2) {
            assert_eq!(w[0].1, w[1].0);
            assert!(in_b(path[w[1].0]));
        }
        for &(s, e) in &blocks {
            assert!((3..=9).contains(&(e - s)), "block {s}..{e}");
        }
    }

    #[test]
    fn exponent_matches_definition() {
        assert_eq!(approx_hub_exponent(2), 2);
        assert_eq!(approx_hub_exponent(8), 4);
        assert_eq!(approx_hub_exponent(9), 5);
        assert_eq!(approx_hub_exponent(1024), 11);
    }

    #[test]
    fn extend_keeps_sorted_unique() {
        let mut h = HubSet { members: vec![2, 5], d: 4, ratio: 1.0 };
        extend_on_insert(&mut h, 5, 0);
        assert_eq!(h.members, vec![0, 2, 5]);
        extend_on_insert(&mut h, 0, 2);
        assert_eq!(h.members, vec![0, 2, 5]);
    }
}
