//! Exact decremental APSP with a self-checking hub family.
//!
//! Wraps the exact decremental pipeline with the monitored hub hierarchy:
//! each deletion is mirrored into the family's blocker monitors, and while
//! no monitor objects every A_i is certified to be a d_i-hub set, so the
//! inner structure's answers are exact — not just with high probability.
//! When a monitor fires, the wrapper draws a fresh random permutation,
//! rebuilds the family and the inner pipeline on the current graph, and
//! retries until the new family verifies; nothing is reused across a
//! restart. Alarms are expected to be rare (random sets block with
//! overwhelming probability), so the Las Vegas cost stays near zero.
//!
//! Hop metric: the wrapper answers unweighted (hop-count) distances.

use rand::rngs::StdRng;
use rand::SeedableRng;

use crate::apsp::decr_exact::ExactDecrApsp;
use crate::graph::{DynamicDigraph, EdgeWeight, GraphError, Mode, UpdateOp, Vertex};
use crate::hubs::HubFamily;

const REBUILD_CAP: u32 = 64;

pub struct LvDecrApsp {
    z: f64,
    rng: StdRng,
    g: DynamicDigraph,
    family: HubFamily,
    inner: ExactDecrApsp,
    restarts: u64,
}

fn copy_graph(g: &DynamicDigraph) -> DynamicDigraph {
    let edges: Vec<(Vertex, Vertex, EdgeWeight)> =
        g.edges().map(|(u, v, w)| (u, v, EdgeWeight::new(w))).collect();
    DynamicDigraph::from_edges(g.n(), Mode::Decremental, g.w_max(), &edges)
        .expect("a valid graph stays valid under copying")
}

fn fresh_family(g: &DynamicDigraph, z: f64, rng: &mut StdRng) -> HubFamily {
    for _ in 0..REBUILD_CAP {
        let f = HubFamily::new(g, z, rng);
        if !f.alarm() {
            return f;
        }
    }
    panic!("no random hub family verified after {REBUILD_CAP} draws");
}

impl LvDecrApsp {
    pub fn new(g: DynamicDigraph, z: f64, seed: u64) -> Self {
        let mut rng = StdRng::seed_from_u64(seed);
        let family = fresh_family(&g, z, &mut rng);
        let inner = ExactDecrApsp::new(copy_graph(&g), &family.sets, &family.depths);
        LvDecrApsp { z, rng, family, inner, restarts: 0, g }
    }

    pub fn n(&self) -> usize {
        self.g.n()
    }

    pub fn graph(&self) -> &DynamicDigraph {
        &self.g
    }

    pub fn family(&self) -> &HubFamily {
        &self.family
    }

    /// Completed restarts (alarm → fresh family + full rebuild).
    pub fn restarts(&self) -> u64 {
        self.restarts
    }

    pub fn alarm(&self) -> bool {
        self.family.alarm()
    }

    /// Exact hop distance.
    pub fn distance(&self, u: Vertex, v: Vertex) -> f64 {
        self.inner.distance(u, v)
    }

    /// Alias for `distance`, matching the other pipelines' naming.
    pub fn estimate(&self, u: Vertex, v: Vertex) -> f64 {
        self.distance(u, v)
    }

    pub fn delete(&mut self, op: &UpdateOp) -> Result<(), GraphError> {
        self.g.apply(op)?;
        self.family.on_update(&self.g, op);
        self.inner.delete(op).expect("mirrored graph diverged from the wrapper's");
        if self.family.alarm() {
            self.restart();
        }
        Ok(())
    }

    fn restart(&mut self) {
        self.restarts += 1;
        self.family = fresh_family(&self.g, self.z, &mut self.rng);
        self.inner = ExactDecrApsp::new(copy_graph(&self.g), &self.family.sets, &self.family.depths);
    }

    /// Test hook: replaces the watchdog family with one whose upper sets are
    /// cut to an eighth, which is (almost surely) not a valid blocker. The
    /// inner pipeline keeps its original, valid family, so answers stay
    /// exact; the next deletion sees the alarm and restarts.
    pub fn inject_fault(&mut self) {
        let mut sets = self.family.sets.clone();
        for s in sets.iter_mut().skip(1) {
            s.truncate((s.len() / 8).max(1));
        }
        let depths = self.family.depths.clone();
        self.family = HubFamily::with_sets(&self.g, sets, depths);
    }
}
