//! Euler-tour forests: rooted forests under link/cut with O(log n) amortized
//! depth queries.
//!
//! Each tree is stored as its Euler tour (open/close parenthesis per vertex)
//! in a splay tree, every tour node valued with the vertex's depth. Linking a
//! root `u` below `v` is a range-add of `depth(v)+1` over `u`'s tour followed
//! by a splice before `close(v)`; cutting extracts the tour interval
//! `[open(v), close(v)]` and range-adds `-depth(v)`. Subtree-max over the
//! tour then answers "deepest vertex in this tree" directly, which is what
//! the blocker monitor polls.

use thiserror::Error;

use crate::graph::Vertex;

const NIL: usize = usize::MAX;

#[derive(Debug, Error, PartialEq)]
pub enum ForestError {
    #[error("vertex {0} is not a tree root")]
    NotARoot(Vertex),
    #[error("vertices {0} and {1} are in the same tree")]
    SameTree(Vertex, Vertex),
    #[error("vertex {0} is a tree root")]
    IsRoot(Vertex),
}

struct Node {
    parent: usize,
    left: usize,
    right: usize,
    val: i64,
    mx: i64,
    add: i64,
}

/// Forest of rooted trees over vertices `0..n`, initially all singletons.
pub struct EulerForest {
    nodes: Vec<Node>,
    tree_parent: Vec<Option<Vertex>>,
}

fn open(v: Vertex) -> usize {
    2 * v
}

fn close(v: Vertex) -> usize {
    2 * v + 1
}

impl EulerForest {
    pub fn new(n: usize) -> Self {
        let mut nodes = Vec::with_capacity(2 * n);
        for v in 0..n {
            // fresh singleton tour: open(v) -> close(v)
            nodes.push(Node { parent: NIL, left: NIL, right: close(v), val: 0, mx: 0, add: 0 });
            nodes.push(Node { parent: open(v), left: NIL, right: NIL, val: 0, mx: 0, add: 0 });
        }
        EulerForest { nodes, tree_parent: vec![None; n] }
    }

    pub fn len(&self) -> usize {
        self.tree_parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tree_parent.is_empty()
    }

    pub fn parent(&self, v: Vertex) -> Option<Vertex> {
        self.tree_parent[v]
    }

    /// Depth of `v` in its tree (roots have depth 0).
    pub fn depth(&mut self, v: Vertex) -> usize {
        let o = open(v);
        self.splay(o);
        self.nodes[o].val as usize
    }

    /// Maximum depth over all vertices of `v`'s tree.
    pub fn max_depth(&mut self, v: Vertex) -> usize {
        let o = open(v);
        self.splay(o);
        self.nodes[o].mx as usize
    }

    /// Root of `v`'s tree.
    pub fn root(&mut self, v: Vertex) -> Vertex {
        let o = open(v);
        self.splay(o);
        let mut x = o;
        while self.nodes[x].left != NIL {
            x = self.nodes[x].left;
        }
        self.splay(x);
        x / 2
    }

    pub fn same_tree(&mut self, a: Vertex, b: Vertex) -> bool {
        if a == b {
            return true;
        }
        self.splay(open(a));
        self.splay(open(b));
        self.nodes[open(a)].parent != NIL
    }

    /// Makes root `u` (with its whole tree) a child of `v`.
    pub fn link(&mut self, u: Vertex, v: Vertex) -> Result<(), ForestError> {
        if self.tree_parent[u].is_some() {
            return Err(ForestError::NotARoot(u));
        }
        if self.same_tree(u, v) {
            return Err(ForestError::SameTree(u, v));
        }
        let dv = self.depth(v) as i64;
        self.splay(open(u));
        self.apply_add(open(u), dv + 1);
        let useq = open(u);
        // split v's tour just before close(v), splice u's tour in between
        let cv = close(v);
        self.splay(cv);
        let left = self.nodes[cv].left;
        if left != NIL {
            self.nodes[cv].left = NIL;
            self.nodes[left].parent = NIL;
            self.pull(cv);
        }
        let merged = self.join(left, useq);
        self.join(merged, cv);
        self.tree_parent[u] = Some(v);
        Ok(())
    }

    /// Detaches `v` from its parent; `v` becomes a root keeping its subtree.
    pub fn cut(&mut self, v: Vertex) -> Result<(), ForestError> {
        if self.tree_parent[v].is_none() {
            return Err(ForestError::IsRoot(v));
        }
        let y = self.depth(v) as i64;
        let ov = open(v);
        self.splay(ov);
        let before = self.nodes[ov].left;
        if before != NIL {
            self.nodes[ov].left = NIL;
            self.nodes[before].parent = NIL;
            self.pull(ov);
        }
        let cv = close(v);
        self.splay(cv);
        let after = self.nodes[cv].right;
        if after != NIL {
            self.nodes[cv].right = NIL;
            self.nodes[after].parent = NIL;
            self.pull(cv);
        }
        self.apply_add(cv, -y);
        self.join(before, after);
        self.tree_parent[v] = None;
        Ok(())
    }

    /// Vertices of `v`'s tree in Euler-tour order (root first). Linear time;
    /// meant for inspection and tests, not the hot path.
    pub fn tree_vertices(&mut self, v: Vertex) -> Vec<Vertex> {
        let o = open(v);
        self.splay(o);
        let mut out = Vec::new();
        let mut stack = vec![(o, false)];
        while let Some((x, visited)) = stack.pop() {
            if x == NIL {
                continue;
            }
            if visited {
                if x % 2 == 0 {
                    out.push(x / 2);
                }
                stack.push((self.nodes[x].right, false));
            } else {
                stack.push((x, true));
                stack.push((self.nodes[x].left, false));
            }
        }
        out
    }

    fn apply_add(&mut self, x: usize, d: i64) {
        let n = &mut self.nodes[x];
        n.val += d;
        n.mx += d;
        n.add += d;
    }

    fn push(&mut self, x: usize) {
        let d = self.nodes[x].add;
        if d != 0 {
            let (l, r) = (self.nodes[x].left, self.nodes[x].right);
            if l != NIL {
                self.apply_add(l, d);
            }
            if r != NIL {
                self.apply_add(r, d);
            }
            self.nodes[x].add = 0;
        }
    }

    fn pull(&mut self, x: usize) {
        let mut m = self.nodes[x].val;
        let (l, r) = (self.nodes[x].left, self.nodes[x].right);
        if l != NIL {
            m = m.max(self.nodes[l].mx);
        }
        if r != NIL {
            m = m.max(self.nodes[r].mx);
        }
        self.nodes[x].mx = m;
    }

    fn rotate(&mut self, x: usize) {
        let p = self.nodes[x].parent;
        let g = self.nodes[p].parent;
        if self.nodes[p].left == x {
            let b = self.nodes[x].right;
            self.nodes[p].left = b;
            if b != NIL {
                self.nodes[b].parent = p;
            }
            self.nodes[x].right = p;
        } else {
            let b = self.nodes[x].left;
            self.nodes[p].right = b;
            if b != NIL {
                self.nodes[b].parent = p;
            }
            self.nodes[x].left = p;
        }
        self.nodes[p].parent = x;
        self.nodes[x].parent = g;
        if g != NIL {
            if self.nodes[g].left == p {
                self.nodes[g].left = x;
            } else {
                self.nodes[g].right = x;
            }
        }
        self.pull(p);
        self.pull(x);
    }

    fn splay(&mut self, x: usize) {
        // push pending adds root-to-x so rotations see clean tags
        let mut path = vec![x];
        let mut c = x;
        while self.nodes[c].parent != NIL {
            c = self.nodes[c].parent;
            path.push(c);
        }
        for &y in path.iter().rev() {
            self.push(y);
        }
        while self.nodes[x].parent != NIL {
            let p = self.nodes[x].parent;
            let g = self.nodes[p].parent;
            if g != NIL {
                let zigzig = (self.nodes[g].left == p) == (self.nodes[p].left == x);
                if zigzig {
                    self.rotate(p);
                } else {
                    self.rotate(x);
                }
            }
            self.rotate(x);
        }
    }

    /// Concatenates two tour sequences; either side may be NIL. Returns the
    /// root of the result.
    fn join(&mut self, a: usize, b: usize) -> usize {
        if a == NIL {
            return b;
        }
        if b == NIL {
            return a;
        }
        let mut x = a;
        self.push(x);
        while self.nodes[x].right != NIL {
            x = self.nodes[x].right;
            self.push(x);
        }
        self.splay(x);
        self.nodes[x].right = b;
        self.nodes[b].parent = x;
        self.pull(x);
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_link_and_depths() {
        let mut f = EulerForest::new(5);
        // build path 0 <- 1 <- 2 <- 3 <- 4 by linking deepest-first
        for v in (1..5).rev() {
            f.link(v, v - 1).unwrap();
        }
        for v in 0..5 {
            assert_eq!(f.depth(v), v);
            assert_eq!(f.root(v), 0);
            assert_eq!(f.max_depth(v), 4);
        }
        assert_eq!(f.tree_vertices(2), vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn cut_shifts_depths_and_splits() {
        let mut f = EulerForest::new(6);
        // star-ish tree: 0 -> 1 -> {2, 3}, 3 -> 4, plus loner 5
        f.link(1, 0).unwrap();
        f.link(2, 1).unwrap();
        f.link(3, 1).unwrap();
        f.link(4, 3).unwrap();
        assert_eq!(f.depth(4), 3);
        assert_eq!(f.max_depth(0), 3);

        f.cut(3).unwrap();
        assert_eq!(f.parent(3), None);
        assert_eq!(f.depth(3), 0);
        assert_eq!(f.depth(4), 1);
        assert!(!f.same_tree(0, 4));
        assert!(f.same_tree(3, 4));
        assert_eq!(f.max_depth(0), 2);
        assert_eq!(f.max_depth(4), 1);
        assert_eq!(f.root(4), 3);

        // relink the severed subtree somewhere deeper
        f.link(3, 2).unwrap();
        assert_eq!(f.depth(4), 4);
        assert_eq!(f.max_depth(5), 0);
    }

    #[test]
    fn link_errors() {
        let mut f = EulerForest::new(4);
        f.link(1, 0).unwrap();
        assert_eq!(f.link(1, 2), Err(ForestError::NotARoot(1)));
        assert_eq!(f.link(0, 1), Err(ForestError::SameTree(0, 1)));
        assert_eq!(f.link(2, 2), Err(ForestError::SameTree(2, 2)));
        assert_eq!(f.cut(0), Err(ForestError::IsRoot(0)));
        assert_eq!(f.cut(2), Err(ForestError::IsRoot(2)));
    }

    #[test]
    fn whole_tree_relink_keeps_relative_depths() {
        let mut f = EulerForest::new(7);
        f.link(1, 0).unwrap();
        f.link(2, 1).unwrap();
        f.link(4, 3).unwrap();
        f.link(5, 4).unwrap();
        f.link(6, 4).unwrap();
        // hang the 3-rooted tree (depth 2) under vertex 2 (depth 2)
        f.link(3, 2).unwrap();
        assert_eq!(f.depth(3), 3);
        assert_eq!(f.depth(5), 5);
        assert_eq!(f.depth(6), 5);
        assert_eq!(f.max_depth(0), 5);
        assert_eq!(f.tree_vertices(0).len(), 7);
    }
}
