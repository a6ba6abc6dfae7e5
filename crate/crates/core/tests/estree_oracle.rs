//! Per-operation cross-check of Even–Shiloach trees against BFS
//! recomputation, plus replay of their event logs into an Euler-tour forest
//! mirror (the consumption pattern the blocker monitor relies on).

use hubs_core::dyntree::EulerForest;
use hubs_core::graph::{DynamicDigraph, EdgeWeight, Mode, UpdateOp};
use hubs_core::sssp::estree::{Direction, EsTree, TreeEvent, UNREACHABLE};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

fn bfs_levels(g: &DynamicDigraph, source: usize, depth: u32, dir: Direction) -> Vec<u32> {
    let n = g.n();
    let mut level = vec![UNREACHABLE; n];
    level[source] = 0;
    let mut queue = std::collections::VecDeque::new();
    queue.push_back(source);
    while let Some(x) = queue.pop_front() {
        if level[x] == depth {
            continue;
        }
        let next: Vec<usize> = match dir {
            Direction::FromSource => g.out_neighbors(x).to_vec(),
            Direction::ToSource => g.in_neighbors(x).to_vec(),
        };
        for y in next {
            if level[y] == UNREACHABLE {
                level[y] = level[x] + 1;
                queue.push_back(y);
            }
        }
    }
    level
}

struct Mirror {
    forest: EulerForest,
}

impl Mirror {
    fn of(tree: &EsTree, n: usize) -> Self {
        let mut forest = EulerForest::new(n);
        // attach shallow-first so parents are always grounded
        let mut order: Vec<usize> = (0..n).filter(|&v| tree.parent(v).is_some()).collect();
        order.sort_by_key(|&v| tree.level(v));
        for v in order {
            forest.link(v, tree.parent(v).unwrap()).unwrap();
        }
        Mirror { forest }
    }

    fn apply(&mut self, events: &[TreeEvent]) {
        for ev in events {
            match *ev {
                TreeEvent::Detach(v) => self.forest.cut(v).unwrap(),
                TreeEvent::Attach(v, p) => self.forest.link(v, p).unwrap(),
                TreeEvent::Level(..) => {}
            }
        }
    }
}

fn check_state(
    g: &DynamicDigraph,
    tree: &EsTree,
    mirror: &mut Mirror,
    depth: u32,
    dir: Direction,
    ctx: &str,
) {
    let want = bfs_levels(g, tree.source(), depth, dir);
    for v in 0..g.n() {
        assert_eq!(tree.level(v), want[v], "level({v}) wrong {ctx}");
        assert_eq!(mirror.forest.parent(v), tree.parent(v), "mirror parent({v}) {ctx}");
        if let Some(p) = tree.parent(v) {
            assert_eq!(tree.level(v), tree.level(p) + 1, "parent level gap at {v} {ctx}");
        }
        if tree.level(v) != UNREACHABLE && v != tree.source() {
            assert!(tree.parent(v).is_some(), "reachable non-source {v} must have a parent {ctx}");
        }
        if mirror.forest.root(v) == tree.source() {
            assert_eq!(
                mirror.forest.depth(v) as u32,
                tree.level(v),
                "mirror depth({v}) {ctx}"
            );
        }
    }
}

fn incremental_trial(seed: u64, n: usize, m: usize, depth: u32, dir: Direction) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = DynamicDigraph::new(n, Mode::Incremental, 1.0);
    let source = rng.gen_range(0..n);
    let mut tree = EsTree::new(&g, source, depth, dir);
    let mut mirror = Mirror::of(&tree, n);
    let mut added = 0;
    while added < m {
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        if u == v || g.has_edge(u, v) {
            continue;
        }
        g.apply(&UpdateOp::Insert { u, v, w: EdgeWeight::one() }).unwrap();
        tree.on_insert(&g, u, v);
        mirror.apply(&tree.drain_events());
        added += 1;
        check_state(&g, &tree, &mut mirror, depth, dir, &format!("seed {seed} after +{u}->{v}"));
    }
}

fn decremental_trial(seed: u64, n: usize, m: usize, depth: u32, dir: Direction) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    let mut present = std::collections::HashSet::new();
    while edges.len() < m {
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        if u != v && present.insert((u, v)) {
            edges.push((u, v, EdgeWeight::one()));
        }
    }
    let mut g = DynamicDigraph::from_edges(n, Mode::Decremental, 1.0, &edges).unwrap();
    let source = rng.gen_range(0..n);
    let mut tree = EsTree::new(&g, source, depth, dir);
    let mut mirror = Mirror::of(&tree, n);
    let mut order: Vec<(usize, usize)> = edges.iter().map(|&(u, v, _)| (u, v)).collect();
    order.shuffle(&mut rng);
    for (u, v) in order {
        g.apply(&UpdateOp::Delete { u, v }).unwrap();
        tree.on_delete(&g, u, v);
        mirror.apply(&tree.drain_events());
        check_state(&g, &tree, &mut mirror, depth, dir, &format!("seed {seed} after -{u}->{v}"));
    }
}

#[test]
fn incremental_streams_match_bfs() {
    for seed in 0..25 {
        for &dir in &[Direction::FromSource, Direction::ToSource] {
            incremental_trial(seed, 24, 90, 3, dir);
            incremental_trial(seed + 1000, 24, 90, 23, dir);
        }
    }
}

#[test]
fn decremental_streams_match_bfs() {
    for seed in 0..25 {
        for &dir in &[Direction::FromSource, Direction::ToSource] {
            decremental_trial(seed, 24, 90, 3, dir);
            decremental_trial(seed + 1000, 24, 90, 23, dir);
        }
    }
}

#[test]
fn sparse_path_teardown() {
    // worst case for repair: one long path, delete edges front to back
    let n = 60;
    let mut edges = Vec::new();
    for v in 1..n {
        edges.push((v - 1, v, EdgeWeight::one()));
    }
    let mut g = DynamicDigraph::from_edges(n, Mode::Decremental, 1.0, &edges).unwrap();
    let mut tree = EsTree::new(&g, 0, (n - 1) as u32, Direction::FromSource);
    let mut mirror = Mirror::of(&tree, n);
    for v in 1..n {
        g.apply(&UpdateOp::Delete { u: v - 1, v }).unwrap();
        tree.on_delete(&g, v - 1, v);
        mirror.apply(&tree.drain_events());
        check_state(&g, &tree, &mut mirror, (n - 1) as u32, Direction::FromSource, "teardown");
    }
    assert!(tree.scans as usize <= 2 * n * n, "repair cost blew past O(md)");
}
