//! Replay-and-verify driver: runs one of the five dynamic-APSP engines over
//! an update stream, cross-checks maintained estimates against a
//! from-scratch oracle at the configured cadence, and renders the results
//! as reports plus one CSV row per checked op.

use crate::gen::{self, StreamKind};
use crate::oracle;
use hubs_core::apsp::decr_approx::ApproxDecrApsp;
use hubs_core::apsp::decr_exact::ExactDecrApsp;
use hubs_core::apsp::dense::DenseIncrApsp;
use hubs_core::apsp::las_vegas::LvDecrApsp;
use hubs_core::apsp::sparse::SparseIncrApsp;
use hubs_core::graph::{GraphError, Mode, UpdateStream};
use hubs_core::hubs::family_plan;
use hubs_core::Vertex;
use rand::seq::SliceRandom;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algo {
    DenseIncr,
    SparseIncr,
    ExactDecr,
    ApproxDecr,
    LvDecr,
}

impl Algo {
    pub fn parse(s: &str) -> Option<Algo> {
        match s {
            "dense-incr" => Some(Algo::DenseIncr),
            "sparse-incr" => Some(Algo::SparseIncr),
            "exact-decr" => Some(Algo::ExactDecr),
            "approx-decr" => Some(Algo::ApproxDecr),
            "lv-decr" => Some(Algo::LvDecr),
            _ => None,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Algo::DenseIncr => "dense-incr",
            Algo::SparseIncr => "sparse-incr",
            Algo::ExactDecr => "exact-decr",
            Algo::ApproxDecr => "approx-decr",
            Algo::LvDecr => "lv-decr",
        }
    }

    pub fn mode(&self) -> Mode {
        match self {
            Algo::DenseIncr | Algo::SparseIncr => Mode::Incremental,
            _ => Mode::Decremental,
        }
    }

    /// Exact engines answer hop distances; weights must all be 1.
    pub fn unweighted_only(&self) -> bool {
        matches!(self, Algo::ExactDecr | Algo::LvDecr)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cadence {
    EveryOp,
    EveryK(u64),
    End,
}

impl Cadence {
    /// `each` | `k:<int>` | `end`.
    pub fn parse(s: &str) -> Result<Cadence, ReplayError> {
        if s == "each" {
            return Ok(Cadence::EveryOp);
        }
        if s == "end" {
            return Ok(Cadence::End);
        }
        if let Some(k) = s.strip_prefix("k:") {
            if let Ok(k) = k.parse::<u64>() {
                if k >= 1 {
                    return Ok(Cadence::EveryK(k));
                }
            }
        }
        Err(ReplayError::Config(format!("bad cadence `{s}` (want each | k:<int> | end)")))
    }

    pub fn as_str(&self) -> String {
        match self {
            Cadence::EveryOp => "each".into(),
            Cadence::EveryK(k) => format!("k:{k}"),
            Cadence::End => "end".into(),
        }
    }
}

#[derive(Debug, Error)]
pub enum ReplayError {
    #[error("config error: {0}")]
    Config(String),
    #[error("stream parse error: {0}")]
    StreamParse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// One cross-check of a maintained estimate against the oracle. Failing
/// reports carry the seed and stream position needed to reproduce them.
#[derive(Debug, Clone)]
pub struct OracleReport {
    pub op_index: u64,
    pub u: Vertex,
    pub v: Vertex,
    pub maintained: f64,
    pub oracle: f64,
    pub bound: f64,
    pub pass: bool,
    pub seed: u64,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub algo: Algo,
    pub n: usize,
    pub m: usize,
    pub w_max: f64,
    pub eps: f64,
    pub d: u32,
    pub z: f64,
    pub c: f64,
    pub seed: u64,
    /// Stream file; when absent the generator below is used.
    pub stream: Option<PathBuf>,
    pub gen: StreamKind,
    /// None picks the default: every op for n ≤ 64, else every 10th.
    pub check: Option<Cadence>,
    pub csv: Option<PathBuf>,
    /// Real elapsed times in the CSV; off by default so output is
    /// byte-stable for a fixed seed and config.
    pub timing: bool,
    /// Test hook: at this op index the first finite estimate is corrupted
    /// before checking, to exercise the failure path end to end.
    pub corrupt_at: Option<u64>,
}

impl RunConfig {
    pub fn new(algo: Algo) -> RunConfig {
        RunConfig {
            algo,
            n: 32,
            m: 96,
            w_max: 1.0,
            eps: 0.5,
            d: 4,
            z: 4.0,
            c: 3.0,
            seed: 1,
            stream: None,
            gen: StreamKind::Random,
            check: None,
            csv: None,
            timing: false,
            corrupt_at: None,
        }
    }

    fn header(&self, effective_n: usize, effective_w: f64) -> String {
        let stream = match &self.stream {
            Some(p) => p.display().to_string(),
            None => format!("gen:{}", self.gen.as_str()),
        };
        let check = match self.check {
            Some(c) => c.as_str(),
            None => {
                if effective_n <= 64 {
                    "each".into()
                } else {
                    "k:10".into()
                }
            }
        };
        format!(
            "# algo={} n={} m={} W={} eps={} d={} z={} c={} seed={} stream={} check={} timing={}\n",
            self.algo.as_str(),
            effective_n,
            self.m,
            effective_w,
            self.eps,
            self.d,
            self.z,
            self.c,
            self.seed,
            stream,
            check,
            self.timing
        )
    }
}

#[derive(Debug)]
pub struct RunSummary {
    pub header: String,
    pub reports: Vec<OracleReport>,
    pub csv: String,
    pub ops: u64,
    pub checks: u64,
    pub checked_pairs: u64,
    pub failures: u64,
}

impl RunSummary {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

enum Engine {
    Dense(DenseIncrApsp),
    Sparse(SparseIncrApsp),
    Exact(ExactDecrApsp),
    Approx(ApproxDecrApsp),
    Lv(LvDecrApsp),
}

impl Engine {
    fn apply(&mut self, op: &hubs_core::UpdateOp) -> Result<(), ReplayError> {
        let bad = |e: String| ReplayError::Config(format!("stream op rejected: {e}"));
        match self {
            Engine::Dense(a) => a.insert(op).map(|_| ()).map_err(|e| bad(e.to_string())),
            Engine::Sparse(a) => a.insert(op).map_err(|e| bad(e.to_string())),
            Engine::Exact(a) => a.delete(op).map_err(|e| bad(e.to_string())),
            Engine::Approx(a) => a.delete(op).map_err(|e| bad(e.to_string())),
            Engine::Lv(a) => a.delete(op).map_err(|e| bad(e.to_string())),
        }
    }

    fn estimate(&self, u: Vertex, v: Vertex) -> f64 {
        match self {
            Engine::Dense(a) => a.estimate(u, v),
            Engine::Sparse(a) => a.estimate(u, v),
            Engine::Exact(a) => a.distance(u, v),
            Engine::Approx(a) => a.distance(u, v),
            Engine::Lv(a) => a.distance(u, v),
        }
    }
}

fn load_stream(cfg: &RunConfig) -> Result<UpdateStream, ReplayError> {
    match &cfg.stream {
        Some(path) => {
            let text = std::fs::read_to_string(path)?;
            UpdateStream::parse(&text).map_err(|e| ReplayError::StreamParse(e.to_string()))
        }
        None => {
            if cfg.n < 2 {
                return Err(ReplayError::Config("n must be at least 2".into()));
            }
            if cfg.m == 0 {
                return Err(ReplayError::Config("m must be positive".into()));
            }
            Ok(gen::gen_stream(cfg.gen, cfg.algo.mode(), cfg.n, cfg.m, cfg.w_max, cfg.seed))
        }
    }
}

/// Runs the configured engine over the stream and cross-checks every pair
/// against the oracle at the chosen cadence. `reports` keeps the worst pair
/// of each checked op plus every failing pair (capped per op); the CSV has
/// one row per checked op under the echoed-parameter header.
pub fn replay_verify(cfg: &RunConfig) -> Result<RunSummary, ReplayError> {
    let stream = load_stream(cfg)?;
    if stream.mode != cfg.algo.mode() {
        return Err(ReplayError::Config(format!(
            "{} needs a {} stream, got {}",
            cfg.algo.as_str(),
            cfg.algo.mode().as_str(),
            stream.mode.as_str()
        )));
    }
    let weighted = stream.w_max > 1.0;
    if cfg.algo.unweighted_only() && weighted {
        return Err(ReplayError::Config(format!(
            "{} answers hop distances; stream must be unweighted",
            cfg.algo.as_str()
        )));
    }
    if cfg.eps <= 0.0 && !matches!(cfg.algo, Algo::ExactDecr | Algo::LvDecr) {
        return Err(ReplayError::Config("eps must be positive".into()));
    }
    let n = stream.n;
    let bound = match cfg.algo {
        Algo::ExactDecr | Algo::LvDecr => 1.0,
        _ => 1.0 + cfg.eps,
    };

    let mut shadow = stream
        .initial_graph()
        .map_err(|e| ReplayError::StreamParse(e.to_string()))?;
    let mut engine = match cfg.algo {
        Algo::DenseIncr => Engine::Dense(DenseIncrApsp::new(n, cfg.eps)),
        Algo::SparseIncr => {
            if cfg.d < 2 || cfg.d % 2 != 0 || (cfg.d as usize) >= n {
                return Err(ReplayError::Config(format!(
                    "sparse-incr needs an even d in [2, n); got d={} n={n}",
                    cfg.d
                )));
            }
            Engine::Sparse(
                SparseIncrApsp::new(n, cfg.d, cfg.eps, weighted, stream.w_max)
                    .map_err(|e| ReplayError::Config(e.to_string()))?,
            )
        }
        Algo::ExactDecr | Algo::ApproxDecr => {
            if cfg.z < 1.0 {
                return Err(ReplayError::Config("z must be at least 1".into()));
            }
            let mut perm: Vec<Vertex> = (0..n).collect();
            perm.shuffle(&mut gen::rng_for(cfg.seed ^ 0x5eed));
            let (sets, depths) = family_plan(n, cfg.z, &perm);
            let g = stream
                .initial_graph()
                .map_err(|e| ReplayError::StreamParse(e.to_string()))?;
            if cfg.algo == Algo::ExactDecr {
                Engine::Exact(ExactDecrApsp::new(g, &sets, &depths))
            } else {
                Engine::Approx(ApproxDecrApsp::new(g, cfg.eps, &sets, &depths))
            }
        }
        Algo::LvDecr => {
            if cfg.z < 1.0 {
                return Err(ReplayError::Config("z must be at least 1".into()));
            }
            let g = stream
                .initial_graph()
                .map_err(|e| ReplayError::StreamParse(e.to_string()))?;
            Engine::Lv(LvDecrApsp::new(g, cfg.z, cfg.seed))
        }
    };

    let cadence = cfg.check.unwrap_or(if n <= 64 { Cadence::EveryOp } else { Cadence::EveryK(10) });
    let total_ops = stream.ops.len() as u64;
    let header = cfg.header(n, stream.w_max);
    let mut csv = header.clone();
    csv.push_str("op_index,algorithm,n,m,eps,checked_pairs,max_ratio,failures,elapsed_ns\n");
    let mut reports: Vec<OracleReport> = Vec::new();
    let mut checks = 0u64;
    let mut checked_pairs = 0u64;
    let mut failures = 0u64;

    for (i, op) in stream.ops.iter().enumerate() {
        let op_index = (i + 1) as u64;
        let started = Instant::now();
        shadow
            .apply(op)
            .map_err(|e: GraphError| ReplayError::StreamParse(format!("op {op_index}: {e}")))?;
        engine.apply(op)?;
        let due = match cadence {
            Cadence::EveryOp => true,
            Cadence::EveryK(k) => op_index % k == 0 || op_index == total_ops,
            Cadence::End => op_index == total_ops,
        };
        if !due {
            continue;
        }
        checks += 1;
        let truth = oracle::oracle_dist(&shadow, weighted);
        let mut op_pairs = 0u64;
        let mut op_failures = 0u64;
        let mut max_ratio = 1.0f64;
        let mut worst: Option<OracleReport> = None;
        let mut corrupt_budget = if cfg.corrupt_at == Some(op_index) { 1 } else { 0 };
        for u in 0..n {
            for v in 0..n {
                if u == v {
                    continue;
                }
                op_pairs += 1;
                let mut est = engine.estimate(u, v);
                let t = truth[u][v];
                if corrupt_budget > 0 && t.is_finite() {
                    est = est * 10.0 + 1000.0;
                    corrupt_budget -= 1;
                }
                let pass = if t.is_finite() {
                    est >= t - 1e-9 * t.max(1.0) && est <= bound * t * (1.0 + 1e-9)
                } else {
                    est.is_infinite()
                };
                let ratio = if t.is_finite() && t > 0.0 && est.is_finite() {
                    est / t
                } else if t.is_finite() && est.is_infinite() {
                    f64::INFINITY
                } else {
                    1.0
                };
                if ratio > max_ratio {
                    max_ratio = ratio;
                }
                let report = || OracleReport {
                    op_index,
                    u,
                    v,
                    maintained: est,
                    oracle: t,
                    bound,
                    pass,
                    seed: cfg.seed,
                };
                if !pass {
                    op_failures += 1;
                    if op_failures <= 64 {
                        reports.push(report());
                    }
                } else if worst.as_ref().map_or(true, |w| {
                    let wr = if w.oracle > 0.0 && w.oracle.is_finite() && w.maintained.is_finite()
                    {
                        w.maintained / w.oracle
                    } else {
                        1.0
                    };
                    ratio > wr
                }) {
                    worst = Some(report());
                }
            }
        }
        if op_failures == 0 {
            if let Some(w) = worst {
                reports.push(w);
            }
        }
        checked_pairs += op_pairs;
        failures += op_failures;
        let elapsed = if cfg.timing { started.elapsed().as_nanos() as u64 } else { 0 };
        let ratio_cell =
            if max_ratio.is_finite() { format!("{max_ratio:.6}") } else { "inf".to_string() };
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{},{},{},{}",
            op_index,
            cfg.algo.as_str(),
            n,
            cfg.m,
            cfg.eps,
            op_pairs,
            ratio_cell,
            op_failures,
            elapsed
        );
    }

    if let Some(path) = &cfg.csv {
        std::fs::write(path, &csv)?;
    }
    Ok(RunSummary { header, reports, csv, ops: total_ops, checks, checked_pairs, failures })
}
