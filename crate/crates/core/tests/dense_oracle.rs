//! Dense incremental APSP against exact oracles.

mod util;

use hubs_core::apsp::dense::DenseIncrApsp;
use hubs_core::graph::{DynamicDigraph, EdgeWeight, Mode, UpdateOp};
use rand::rngs::StdRng;
use rand::SeedableRng;
use util::{dijkstra_all, hop_dist, random_incremental, sandwich_ok};

fn check_all_pairs(d: &DenseIncrApsp, g: &DynamicDigraph, ratio: f64) {
    let oracle = dijkstra_all(g);
    for u in 0..g.n() {
        for v in 0..g.n() {
            assert!(
                sandwich_ok(d.estimate(u, v), oracle[u][v], ratio),
                "pair ({u},{v}): est {} vs dist {}",
                d.estimate(u, v),
                oracle[u][v]
            );
        }
    }
}

#[test]
fn triangle_built_edge_by_edge() {
    let eps = 0.4;
    let mut d = DenseIncrApsp::new(3, eps);
    let mut g = DynamicDigraph::new(3, Mode::Incremental, 16.0);
    for &(u, v, w) in &[(0, 1, 2.0), (1, 2, 3.0), (0, 2, 9.0)] {
        let op = UpdateOp::Insert { u, v, w: EdgeWeight::new(w) };
        g.apply(&op).unwrap();
        d.insert(&op).unwrap();
        check_all_pairs(&d, &g, 1.0 + eps);
    }
    // 0->2 should go through 1: estimate within (1+eps) of 5, not 9
    assert!(d.estimate(0, 2) <= 5.0 * (1.0 + eps));
}

#[test]
fn random_stream_sandwich_after_every_op() {
    let eps = 0.5;
    let n = 60;
    let mut rng = StdRng::seed_from_u64(0xD15E);
    let ops = random_incremental(n, 400, 32.0, true, &mut rng);
    let mut d = DenseIncrApsp::new(n, eps);
    let mut g = DynamicDigraph::new(n, Mode::Incremental, 32.0);
    for (idx, op) in ops.iter().enumerate() {
        g.apply(op).unwrap();
        d.insert(op).unwrap();
        // oracle after every op is the contract; thin the full check a
        // little for speed but never skip the final state
        if idx % 4 == 0 || idx + 1 == ops.len() {
            check_all_pairs(&d, &g, 1.0 + eps);
        }
    }
}

#[test]
fn layer_invariant_holds() {
    let eps = 0.5;
    let n = 30;
    let mut rng = StdRng::seed_from_u64(7);
    let ops = random_incremental(n, 150, 8.0, false, &mut rng);
    let mut d = DenseIncrApsp::new(n, eps);
    let mut g = DynamicDigraph::new(n, Mode::Incremental, 8.0);
    let eps1 = d.eps1();
    for (idx, op) in ops.iter().enumerate() {
        g.apply(op).unwrap();
        d.insert(op).unwrap();
        if idx % 10 != 0 && idx + 1 != ops.len() {
            continue;
        }
        for i in 1..=d.layers() {
            let hop = 1usize << i.min(20);
            let ratio = (1.0 + eps1).powi(i as i32);
            for u in 0..n {
                let capped = hop_dist(&g, u, hop.min(n));
                let exact = util::dijkstra(&g, u);
                for v in 0..n {
                    let est = d.layer_estimate(i, u, v);
                    assert!(
                        est >= exact[v] - 1e-9 * exact[v].max(1.0) || est.is_infinite(),
                        "layer {i} ({u},{v}): est {est} below dist {}",
                        exact[v]
                    );
                    if capped[v].is_finite() {
                        assert!(
                            est <= ratio * capped[v] * (1.0 + 1e-9),
                            "layer {i} ({u},{v}): est {est} above (1+eps1)^{i} * {}",
                            capped[v]
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn change_log_mirrors_matrix() {
    let n = 20;
    let mut rng = StdRng::seed_from_u64(99);
    let ops = random_incremental(n, 120, 16.0, true, &mut rng);
    let mut d = DenseIncrApsp::new(n, 0.3);
    let mut shadow = vec![f64::INFINITY; n * n];
    for v in 0..n {
        shadow[v * n + v] = 0.0;
    }
    for op in &ops {
        d.insert(op).unwrap();
        for (u, v, val) in d.drain_changes() {
            shadow[u * n + v] = val;
        }
        for u in 0..n {
            for v in 0..n {
                assert_eq!(
                    shadow[u * n + v],
                    d.estimate(u, v),
                    "change log out of sync at ({u},{v})"
                );
            }
        }
    }
}
