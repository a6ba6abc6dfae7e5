//! Even–Shiloach trees: a single-source BFS tree maintained to a depth
//! cutoff under edge insertions and deletions.
//!
//! Levels are hop counts (weights ignored). Deletions repair bottom-up with
//! a min-heap of orphans; a vertex re-scans its predecessors once per level
//! it rises, so total repair work is O(m * depth) over any deletion
//! sequence. Insertions propagate decreases by plain BFS. Structural changes
//! are logged as events whose order is always valid to replay against a
//! forest mirror: a child is detached before anything else touches it, and
//! an attach target is grounded by the time the attach is emitted.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

use crate::graph::{GraphView, Vertex};

pub const UNREACHABLE: u32 = u32::MAX;

/// Which way distances run: from the source along edges, or to the source
/// (i.e. the same tree on the reversed graph).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Direction {
    FromSource,
    ToSource,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TreeEvent {
    /// `v` lost its parent and is now a root (possibly temporarily).
    Detach(Vertex),
    /// `v` (currently a root) became a child of the second vertex.
    Attach(Vertex, Vertex),
    /// `v`'s level settled at a new value (`UNREACHABLE` = dropped out).
    Level(Vertex, u32),
}

pub struct EsTree {
    source: Vertex,
    depth: u32,
    dir: Direction,
    level: Vec<u32>,
    parent: Vec<Option<Vertex>>,
    children: Vec<Vec<Vertex>>,
    child_pos: Vec<usize>,
    events: Vec<TreeEvent>,
    /// predecessor/successor edge examinations, for cost reporting
    pub scans: u64,
}

impl EsTree {
    pub fn new(g: &impl GraphView, source: Vertex, depth: u32, dir: Direction) -> Self {
        let n = g.vertex_count();
        let mut t = EsTree {
            source,
            depth,
            dir,
            level: vec![UNREACHABLE; n],
            parent: vec![None; n],
            children: vec![Vec::new(); n],
            child_pos: vec![0; n],
            events: Vec::new(),
            scans: 0,
        };
        t.level[source] = 0;
        let mut queue = VecDeque::new();
        queue.push_back(source);
        while let Some(x) = queue.pop_front() {
            let lx = t.level[x];
            if lx == depth {
                continue;
            }
            let mut found = Vec::new();
            t.succ(g, x, |y| found.push(y));
            for y in found {
                if t.level[y] == UNREACHABLE {
                    t.level[y] = lx + 1;
                    t.set_parent(y, x);
                    queue.push_back(y);
                }
            }
        }
        t.events.clear(); // construction is not part of the update log
        t
    }

    pub fn source(&self) -> Vertex {
        self.source
    }

    pub fn depth_limit(&self) -> u32 {
        self.depth
    }

    pub fn level(&self, v: Vertex) -> u32 {
        self.level[v]
    }

    pub fn levels(&self) -> &[u32] {
        &self.level
    }

    pub fn parent(&self, v: Vertex) -> Option<Vertex> {
        self.parent[v]
    }

    pub fn parents(&self) -> &[Option<Vertex>] {
        &self.parent
    }

    pub fn drain_events(&mut self) -> Vec<TreeEvent> {
        std::mem::take(&mut self.events)
    }

    /// Tree-direction successors of `x` (vertices whose level may be
    /// `level(x) + 1`).
    fn succ(&mut self, g: &impl GraphView, x: Vertex, mut f: impl FnMut(Vertex)) {
        let scans = &mut self.scans;
        match self.dir {
            Direction::FromSource => g.for_each_out(x, |y, _| {
                *scans += 1;
                f(y)
            }),
            Direction::ToSource => g.for_each_in(x, |y, _| {
                *scans += 1;
                f(y)
            }),
        }
    }

    /// Tree-direction predecessors of `x` (candidate parents).
    fn pred(&mut self, g: &impl GraphView, x: Vertex, mut f: impl FnMut(Vertex)) {
        let scans = &mut self.scans;
        match self.dir {
            Direction::FromSource => g.for_each_in(x, |y, _| {
                *scans += 1;
                f(y)
            }),
            Direction::ToSource => g.for_each_out(x, |y, _| {
                *scans += 1;
                f(y)
            }),
        }
    }

    fn set_parent(&mut self, v: Vertex, p: Vertex) {
        debug_assert!(self.parent[v].is_none());
        self.parent[v] = Some(p);
        self.child_pos[v] = self.children[p].len();
        self.children[p].push(v);
    }

    fn detach(&mut self, v: Vertex) {
        let p = self.parent[v].expect("detach of a root");
        let pos = self.child_pos[v];
        self.children[p].swap_remove(pos);
        if let Some(&moved) = self.children[p].get(pos) {
            self.child_pos[moved] = pos;
        }
        self.parent[v] = None;
        self.events.push(TreeEvent::Detach(v));
    }

    fn attach(&mut self, v: Vertex, p: Vertex) {
        self.set_parent(v, p);
        self.events.push(TreeEvent::Attach(v, p));
    }

    /// Call after edge (u, v) has been inserted into `g`.
    pub fn on_insert(&mut self, g: &impl GraphView, u: Vertex, v: Vertex) {
        let (a, b) = match self.dir {
            Direction::FromSource => (u, v),
            Direction::ToSource => (v, u),
        };
        if self.level[a] == UNREACHABLE || self.level[a] + 1 > self.depth {
            return;
        }
        if self.level[a] + 1 >= self.level[b] {
            return;
        }
        self.improve(b, a, self.level[a] + 1);
        let mut queue = VecDeque::new();
        queue.push_back(b);
        while let Some(x) = queue.pop_front() {
            let lx = self.level[x];
            if lx == self.depth {
                continue;
            }
            let mut reached = Vec::new();
            self.succ(g, x, |y| reached.push(y));
            for y in reached {
                if lx + 1 < self.level[y] {
                    self.improve(y, x, lx + 1);
                    queue.push_back(y);
                }
            }
        }
    }

    fn improve(&mut self, v: Vertex, p: Vertex, new_level: u32) {
        if self.parent[v].is_some() {
            self.detach(v);
        }
        self.attach(v, p);
        self.level[v] = new_level;
        self.events.push(TreeEvent::Level(v, new_level));
    }

    /// Call after edge (u, v) has been deleted from `g`.
    pub fn on_delete(&mut self, g: &impl GraphView, u: Vertex, v: Vertex) {
        let (a, b) = match self.dir {
            Direction::FromSource => (u, v),
            Direction::ToSource => (v, u),
        };
        if self.parent[b] != Some(a) {
            return; // non-tree edges never carry the level witness
        }
        self.detach(b);
        let mut heap: BinaryHeap<Reverse<(u32, Vertex)>> = BinaryHeap::new();
        heap.push(Reverse((self.level[b], b)));
        while let Some(Reverse((l, x))) = heap.pop() {
            if self.level[x] != l || self.parent[x].is_some() {
                continue; // stale entry
            }
            // a predecessor one level up keeps x where it is
            let mut preds = Vec::new();
            self.pred(g, x, |p| preds.push(p));
            let witness =
                preds.into_iter().find(|&p| self.level[p] != UNREACHABLE && self.level[p] + 1 == l);
            if let Some(p) = witness {
                self.attach(x, p);
                continue;
            }
            // x must sink one level; its children can no longer hang on it
            while let Some(c) = self.children[x].pop() {
                self.parent[c] = None;
                self.events.push(TreeEvent::Detach(c));
                heap.push(Reverse((self.level[c], c)));
            }
            if l + 1 > self.depth {
                self.level[x] = UNREACHABLE;
                self.events.push(TreeEvent::Level(x, UNREACHABLE));
            } else {
                self.level[x] = l + 1;
                self.events.push(TreeEvent::Level(x, l + 1));
                heap.push(Reverse((l + 1, x)));
            }
        }
    }
}
