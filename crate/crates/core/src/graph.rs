//! Dynamic directed graphs under partially-dynamic update streams.
//!
//! A graph is either *incremental* (edge insertions and weight decreases) or
//! *decremental* (deletions and weight increases). Every structure in this
//! crate consumes updates after they have been applied to the underlying
//! graph, so the graph itself is the single source of truth for adjacency.

use std::collections::HashMap;
use std::fmt::Write as _;

use thiserror::Error;

pub type Vertex = usize;

pub const INF: f64 = f64::INFINITY;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Mode {
    Incremental,
    Decremental,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Incremental => "incremental",
            Mode::Decremental => "decremental",
        }
    }
}

/// Edge weight. Weights from a rounded ("restricted") stream are powers
/// `(1+eps')^i` and carry the integer exponent so equality checks on them are
/// exact rather than floating-point.
#[derive(Clone, Copy, Debug)]
pub struct EdgeWeight {
    pub value: f64,
    pub exponent: Option<u32>,
}

impl EdgeWeight {
    pub fn new(value: f64) -> Self {
        EdgeWeight { value, exponent: None }
    }

    pub fn one() -> Self {
        EdgeWeight { value: 1.0, exponent: None }
    }

    pub fn restricted(value: f64, exponent: u32) -> Self {
        EdgeWeight { value, exponent: Some(exponent) }
    }

    /// Exact when both sides carry exponents; plain f64 equality otherwise.
    pub fn same_as(&self, other: &EdgeWeight) -> bool {
        match (self.exponent, other.exponent) {
            (Some(a), Some(b)) => a == b,
            _ => self.value == other.value,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub enum UpdateOp {
    Insert { u: Vertex, v: Vertex, w: EdgeWeight },
    Delete { u: Vertex, v: Vertex },
    SetWeight { u: Vertex, v: Vertex, w: EdgeWeight },
}

impl UpdateOp {
    pub fn endpoints(&self) -> (Vertex, Vertex) {
        match *self {
            UpdateOp::Insert { u, v, .. }
            | UpdateOp::Delete { u, v }
            | UpdateOp::SetWeight { u, v, .. } => (u, v),
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum GraphError {
    #[error("operation not legal in {mode} mode: {what}")]
    ModeViolation { mode: &'static str, what: &'static str },
    #[error("edge {u}->{v} does not exist")]
    UnknownEdge { u: Vertex, v: Vertex },
    #[error("vertex {0} out of range")]
    BadVertex(Vertex),
    #[error("self-loop {0}->{0} rejected")]
    SelfLoop(Vertex),
    #[error("weight {0} outside [1, W]")]
    BadWeight(f64),
    #[error("stream parse error at line {line}: {what}")]
    Parse { line: usize, what: String },
}

/// Directed graph with real weights in `[1, W]`, no self-loops, no parallel
/// edges, mutated only through mode-checked updates.
#[derive(Clone)]
pub struct DynamicDigraph {
    n: usize,
    mode: Mode,
    w_max: f64,
    out: Vec<Vec<Vertex>>,
    inc: Vec<Vec<Vertex>>,
    w: HashMap<(Vertex, Vertex), EdgeWeight>,
    updates: u64,
    non_unit: usize,
}

impl DynamicDigraph {
    pub fn new(n: usize, mode: Mode, w_max: f64) -> Self {
        DynamicDigraph {
            n,
            mode,
            w_max,
            out: vec![Vec::new(); n],
            inc: vec![Vec::new(); n],
            w: HashMap::new(),
            updates: 0,
            non_unit: 0,
        }
    }

    /// Builds a decremental graph from its initial edge set (insertions are
    /// not legal decremental updates, so initial edges bypass the mode check
    /// and do not count towards the update total).
    pub fn from_edges(
        n: usize,
        mode: Mode,
        w_max: f64,
        edges: &[(Vertex, Vertex, EdgeWeight)],
    ) -> Result<Self, GraphError> {
        let mut g = DynamicDigraph::new(n, mode, w_max);
        for &(u, v, w) in edges {
            g.check_edge(u, v, Some(w.value))?;
            if g.w.contains_key(&(u, v)) {
                return Err(GraphError::ModeViolation {
                    mode: mode.as_str(),
                    what: "duplicate edge in initial edge set",
                });
            }
            g.raw_insert(u, v, w);
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn w_max(&self) -> f64 {
        self.w_max
    }

    pub fn edge_count(&self) -> usize {
        self.w.len()
    }

    /// Total number of updates that actually changed the graph.
    pub fn update_count(&self) -> u64 {
        self.updates
    }

    pub fn is_unweighted(&self) -> bool {
        self.non_unit == 0
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.w.contains_key(&(u, v))
    }

    pub fn weight(&self, u: Vertex, v: Vertex) -> Option<f64> {
        self.w.get(&(u, v)).map(|ew| ew.value)
    }

    pub fn out_neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.out[v]
    }

    pub fn in_neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.inc[v]
    }

    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex, f64)> + '_ {
        self.out
            .iter()
            .enumerate()
            .flat_map(move |(u, outs)| outs.iter().map(move |&v| (u, v, self.w[&(u, v)].value)))
    }

    fn check_edge(&self, u: Vertex, v: Vertex, w: Option<f64>) -> Result<(), GraphError> {
        if u >= self.n {
            return Err(GraphError::BadVertex(u));
        }
        if v >= self.n {
            return Err(GraphError::BadVertex(v));
        }
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        if let Some(w) = w {
            if !(w >= 1.0 && w <= self.w_max) || !w.is_finite() {
                return Err(GraphError::BadWeight(w));
            }
        }
        Ok(())
    }

    fn raw_insert(&mut self, u: Vertex, v: Vertex, w: EdgeWeight) {
        self.out[u].push(v);
        self.inc[v].push(u);
        if w.value != 1.0 {
            self.non_unit += 1;
        }
        self.w.insert((u, v), w);
    }

    fn raw_delete(&mut self, u: Vertex, v: Vertex) {
        let pos = self.out[u].iter().position(|&x| x == v).unwrap();
        self.out[u].swap_remove(pos);
        let pos = self.inc[v].iter().position(|&x| x == u).unwrap();
        self.inc[v].swap_remove(pos);
        let old = self.w.remove(&(u, v)).unwrap();
        if old.value != 1.0 {
            self.non_unit -= 1;
        }
    }

    fn set_weight(&mut self, u: Vertex, v: Vertex, w: EdgeWeight) -> Result<bool, GraphError> {
        let old = *self.w.get(&(u, v)).ok_or(GraphError::UnknownEdge { u, v })?;
        if old.same_as(&w) {
            return Ok(false);
        }
        match self.mode {
            Mode::Incremental if w.value > old.value => {
                return Err(GraphError::ModeViolation {
                    mode: "incremental",
                    what: "weight increase",
                })
            }
            Mode::Decremental if w.value < old.value => {
                return Err(GraphError::ModeViolation {
                    mode: "decremental",
                    what: "weight decrease",
                })
            }
            _ => {}
        }
        if old.value == w.value {
            // same real value, different exponent tag: bookkeeping only
            self.w.insert((u, v), w);
            return Ok(false);
        }
        if old.value != 1.0 {
            self.non_unit -= 1;
        }
        if w.value != 1.0 {
            self.non_unit += 1;
        }
        self.w.insert((u, v), w);
        Ok(true)
    }

    /// Applies one update. Returns whether the graph actually changed; the
    /// update counter advances only on change (no-ops are free in the
    /// restricted model).
    pub fn apply(&mut self, op: &UpdateOp) -> Result<bool, GraphError> {
        let changed = match *op {
            UpdateOp::Insert { u, v, w } => {
                self.check_edge(u, v, Some(w.value))?;
                if self.mode == Mode::Decremental {
                    return Err(GraphError::ModeViolation {
                        mode: "decremental",
                        what: "edge insertion",
                    });
                }
                if self.w.contains_key(&(u, v)) {
                    self.set_weight(u, v, w)?
                } else {
                    self.raw_insert(u, v, w);
                    true
                }
            }
            UpdateOp::Delete { u, v } => {
                self.check_edge(u, v, None)?;
                if self.mode == Mode::Incremental {
                    return Err(GraphError::ModeViolation {
                        mode: "incremental",
                        what: "edge deletion",
                    });
                }
                if !self.w.contains_key(&(u, v)) {
                    return Err(GraphError::UnknownEdge { u, v });
                }
                self.raw_delete(u, v);
                true
            }
            UpdateOp::SetWeight { u, v, w } => {
                self.check_edge(u, v, Some(w.value))?;
                self.set_weight(u, v, w)?
            }
        };
        if changed {
            self.updates += 1;
        }
        Ok(changed)
    }

    /// Logical view with every edge reversed; shares this graph's storage.
    pub fn reversed(&self) -> ReverseView<'_, DynamicDigraph> {
        ReverseView(self)
    }

    /// Internal consistency check: adjacency lists mutually consistent with
    /// the weight map, weights in range, no self-loops.
    pub fn audit(&self) -> Result<(), String> {
        let mut seen = 0usize;
        for u in 0..self.n {
            for &v in &self.out[u] {
                if u == v {
                    return Err(format!("self-loop at {u}"));
                }
                let w = self.w.get(&(u, v)).ok_or(format!("missing weight {u}->{v}"))?;
                if !(w.value >= 1.0 && w.value <= self.w_max) {
                    return Err(format!("weight {} out of range on {u}->{v}", w.value));
                }
                if !self.inc[v].contains(&u) {
                    return Err(format!("in-list of {v} missing {u}"));
                }
                seen += 1;
            }
        }
        if seen != self.w.len() {
            return Err("weight map and adjacency disagree".into());
        }
        let in_total: usize = self.inc.iter().map(Vec::len).sum();
        if in_total != seen {
            return Err("in-list sizes disagree with edge count".into());
        }
        Ok(())
    }
}

/// Read access to a weighted digraph: everything the shortest-path
/// structures need, satisfied by the concrete graph, reversed views, and
/// star-augmented composites alike.
pub trait GraphView {
    fn vertex_count(&self) -> usize;
    fn for_each_out(&self, v: Vertex, f: impl FnMut(Vertex, f64));
    fn for_each_in(&self, v: Vertex, f: impl FnMut(Vertex, f64));
}

impl GraphView for DynamicDigraph {
    fn vertex_count(&self) -> usize {
        self.n
    }

    fn for_each_out(&self, v: Vertex, mut f: impl FnMut(Vertex, f64)) {
        for &t in &self.out[v] {
            f(t, self.w[&(v, t)].value);
        }
    }

    fn for_each_in(&self, v: Vertex, mut f: impl FnMut(Vertex, f64)) {
        for &s in &self.inc[v] {
            f(s, self.w[&(s, v)].value);
        }
    }
}

impl<G: GraphView> GraphView for &G {
    fn vertex_count(&self) -> usize {
        (*self).vertex_count()
    }

    fn for_each_out(&self, v: Vertex, f: impl FnMut(Vertex, f64)) {
        (*self).for_each_out(v, f)
    }

    fn for_each_in(&self, v: Vertex, f: impl FnMut(Vertex, f64)) {
        (*self).for_each_in(v, f)
    }
}

/// Edge-reversing view.
pub struct ReverseView<'a, G>(pub &'a G);

impl<G: GraphView> GraphView for ReverseView<'_, G> {
    fn vertex_count(&self) -> usize {
        self.0.vertex_count()
    }

    fn for_each_out(&self, v: Vertex, f: impl FnMut(Vertex, f64)) {
        self.0.for_each_in(v, f)
    }

    fn for_each_in(&self, v: Vertex, f: impl FnMut(Vertex, f64)) {
        self.0.for_each_out(v, f)
    }
}

/// Base graph plus a star of weighted shortcut edges out of `center`;
/// union semantics (parallel edges both visible, min wins in any
/// shortest-path computation).
pub struct StarUnion<'a, G> {
    pub base: &'a G,
    pub center: Vertex,
    pub spokes: &'a [f64],
}

impl<G: GraphView> GraphView for StarUnion<'_, G> {
    fn vertex_count(&self) -> usize {
        self.base.vertex_count()
    }

    fn for_each_out(&self, v: Vertex, mut f: impl FnMut(Vertex, f64)) {
        self.base.for_each_out(v, &mut f);
        if v == self.center {
            for (t, &w) in self.spokes.iter().enumerate() {
                if w.is_finite() && t != v {
                    f(t, w);
                }
            }
        }
    }

    fn for_each_in(&self, v: Vertex, mut f: impl FnMut(Vertex, f64)) {
        self.base.for_each_in(v, &mut f);
        if v != self.center && self.spokes[v].is_finite() {
            f(self.center, self.spokes[v]);
        }
    }
}

/// `a^ceil(log_a x)`: the smallest integer power of `a` that is >= `x`.
/// The fixup loop guards against the log/exp round trip landing one step
/// low or high in floating point.
pub fn exp_round_up(a: f64, x: f64) -> (f64, u32) {
    debug_assert!(a > 1.0 && x >= 1.0);
    let mut i = (x.ln() / a.ln() - 1e-12).ceil() as i64;
    if i < 0 {
        i = 0;
    }
    let mut i = i as u32;
    let mut v = a.powi(i as i32);
    while v < x {
        i += 1;
        v = a.powi(i as i32);
    }
    while i > 0 && a.powi(i as i32 - 1) >= x {
        i -= 1;
        v = a.powi(i as i32);
    }
    (v, i)
}

/// A mode-consistent update stream over `n` vertices with weights bounded by
/// `W`. Decremental streams carry their initial graph as a leading block of
/// insert lines, replayed before any structure attaches.
#[derive(Clone)]
pub struct UpdateStream {
    pub mode: Mode,
    pub n: usize,
    pub w_max: f64,
    pub init: Vec<UpdateOp>,
    pub ops: Vec<UpdateOp>,
}

impl UpdateStream {
    /// Graph with the initial block applied and no dynamic ops yet.
    pub fn initial_graph(&self) -> Result<DynamicDigraph, GraphError> {
        let edges: Vec<_> = self
            .init
            .iter()
            .map(|op| match *op {
                UpdateOp::Insert { u, v, w } => (u, v, w),
                _ => unreachable!("init block contains only inserts"),
            })
            .collect();
        DynamicDigraph::from_edges(self.n, self.mode, self.w_max, &edges)
    }

    /// Applies the whole stream; returns the final graph.
    pub fn replay(&self) -> Result<DynamicDigraph, GraphError> {
        let mut g = self.initial_graph()?;
        for op in &self.ops {
            g.apply(op)?;
        }
        Ok(g)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# mode={} n={} W={}", self.mode.as_str(), self.n, self.w_max);
        for op in self.init.iter().chain(self.ops.iter()) {
            match *op {
                UpdateOp::Insert { u, v, w } => {
                    let _ = writeln!(s, "i {u} {v} {}", w.value);
                }
                UpdateOp::Delete { u, v } => {
                    let _ = writeln!(s, "d {u} {v}");
                }
                UpdateOp::SetWeight { u, v, w } => {
                    let _ = writeln!(s, "w {u} {v} {}", w.value);
                }
            }
        }
        s
    }

    pub fn parse(text: &str) -> Result<UpdateStream, GraphError> {
        let err = |line: usize, what: &str| GraphError::Parse { line, what: what.to_string() };
        let mut lines = text.lines().enumerate();
        let (_, header) = lines.next().ok_or_else(|| err(1, "empty stream"))?;
        let header = header
            .strip_prefix('#')
            .ok_or_else(|| err(1, "missing `# mode=... n=... W=...` header"))?;
        let mut mode = None;
        let mut n = None;
        let mut w_max = None;
        for field in header.split_whitespace() {
            let (key, val) =
                field.split_once('=').ok_or_else(|| err(1, "malformed header field"))?;
            match key {
                "mode" => {
                    mode = Some(match val {
                        "incremental" => Mode::Incremental,
                        "decremental" => Mode::Decremental,
                        _ => return Err(err(1, "mode must be incremental|decremental")),
                    })
                }
                "n" => n = Some(val.parse::<usize>().map_err(|_| err(1, "bad n"))?),
                "W" => w_max = Some(val.parse::<f64>().map_err(|_| err(1, "bad W"))?),
                _ => return Err(err(1, "unknown header field")),
            }
        }
        let mode = mode.ok_or_else(|| err(1, "header missing mode"))?;
        let n = n.ok_or_else(|| err(1, "header missing n"))?;
        let w_max = w_max.ok_or_else(|| err(1, "header missing W"))?;

        let mut init = Vec::new();
        let mut ops = Vec::new();
        let mut in_init = mode == Mode::Decremental;
        for (idx, line) in lines {
            let lineno = idx + 1;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut it = line.split_whitespace();
            let kind = it.next().unwrap();
            let mut vertex = |what| -> Result<Vertex, GraphError> {
                it.next()
                    .ok_or_else(|| err(lineno, what))?
                    .parse::<Vertex>()
                    .map_err(|_| err(lineno, what))
            };
            let op = match kind {
                "i" => {
                    let u = vertex("bad insert op")?;
                    let v = vertex("bad insert op")?;
                    let w = it
                        .next()
                        .ok_or_else(|| err(lineno, "insert missing weight"))?
                        .parse::<f64>()
                        .map_err(|_| err(lineno, "bad weight"))?;
                    UpdateOp::Insert { u, v, w: EdgeWeight::new(w) }
                }
                "d" => {
                    let u = vertex("bad delete op")?;
                    let v = vertex("bad delete op")?;
                    UpdateOp::Delete { u, v }
                }
                "w" => {
                    let u = vertex("bad set-weight op")?;
                    let v = vertex("bad set-weight op")?;
                    let w = it
                        .next()
                        .ok_or_else(|| err(lineno, "set-weight missing weight"))?
                        .parse::<f64>()
                        .map_err(|_| err(lineno, "bad weight"))?;
                    UpdateOp::SetWeight { u, v, w: EdgeWeight::new(w) }
                }
                _ => return Err(err(lineno, "unknown op kind")),
            };
            if it.next().is_some() {
                return Err(err(lineno, "trailing tokens"));
            }
            match op {
                UpdateOp::Insert { .. } if in_init => init.push(op),
                UpdateOp::Insert { .. } if mode == Mode::Decremental => {
                    return Err(err(lineno, "insert after decremental updates began"))
                }
                _ => {
                    in_init = false;
                    ops.push(op);
                }
            }
        }
        Ok(UpdateStream { mode, n, w_max, init, ops })
    }

    /// Rounds every weight up to the next integer power of `(1+eps/4)` and
    /// drops ops that no longer change the rounded graph. Distances in the
    /// rounded graph sit within a `(1+eps/4)` factor above the originals,
    /// and each edge survives at most `ceil(log_{1+eps/4} W) + 2` times.
    pub fn round_restricted(&self, eps: f64) -> UpdateStream {
        let a = 1.0 + eps / 4.0;
        let round = |w: f64| {
            let (value, exponent) = exp_round_up(a, w);
            EdgeWeight::restricted(value, exponent)
        };
        let mut cur: HashMap<(Vertex, Vertex), u32> = HashMap::new();
        let mut init = Vec::new();
        for op in &self.init {
            if let UpdateOp::Insert { u, v, w } = *op {
                let w = round(w.value);
                cur.insert((u, v), w.exponent.unwrap());
                init.push(UpdateOp::Insert { u, v, w });
            }
        }
        let mut ops = Vec::new();
        for op in &self.ops {
            match *op {
                UpdateOp::Insert { u, v, w } => {
                    let w = round(w.value);
                    match cur.get(&(u, v)) {
                        Some(&e) if e == w.exponent.unwrap() => {}
                        Some(_) => {
                            cur.insert((u, v), w.exponent.unwrap());
                            ops.push(UpdateOp::SetWeight { u, v, w });
                        }
                        None => {
                            cur.insert((u, v), w.exponent.unwrap());
                            ops.push(UpdateOp::Insert { u, v, w });
                        }
                    }
                }
                UpdateOp::Delete { u, v } => {
                    cur.remove(&(u, v));
                    ops.push(*op);
                }
                UpdateOp::SetWeight { u, v, w } => {
                    let w = round(w.value);
                    if cur.get(&(u, v)) != Some(&w.exponent.unwrap()) {
                        cur.insert((u, v), w.exponent.unwrap());
                        ops.push(UpdateOp::SetWeight { u, v, w });
                    }
                }
            }
        }
        // Rounding up can push a weight past the original cap, so the rounded
        // stream carries the rounded cap.
        let w_max = exp_round_up(a, self.w_max).0;
        UpdateStream { mode: self.mode, n: self.n, w_max, init, ops }
    }
}
