use clap::{Args, Parser, Subcommand};
use hubs_harness::gen::StreamKind;
use hubs_harness::replay::{replay_verify, Algo, Cadence, RunConfig};
use std::path::PathBuf;
use std::process::ExitCode;

/// Replay-and-verify driver for the dynamic-APSP structures: runs an engine
/// over a seeded or file-backed update stream and cross-checks it against a
/// from-scratch oracle.
#[derive(Parser)]
#[command(name = "hubs", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run one engine over one stream and verify it.
    Run(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// dense-incr | sparse-incr | exact-decr | approx-decr | lv-decr
    #[arg(long)]
    algo: String,
    /// Vertex count for generated streams (a stream file overrides it).
    #[arg(long, default_value_t = 32)]
    n: usize,
    /// Structural op count for generated streams.
    #[arg(long, default_value_t = 96)]
    m: usize,
    /// Max edge weight; 1 means unweighted.
    #[arg(long = "W", default_value_t = 1.0)]
    w: f64,
    #[arg(long, default_value_t = 0.5)]
    eps: f64,
    /// Hop parameter of the sparse incremental engine (even, in [2, n)).
    #[arg(long, default_value_t = 4)]
    d: u32,
    /// Sampling-size multiplier of the hub-family plan.
    #[arg(long, default_value_t = 4.0)]
    z: f64,
    /// Blocker-sampling exponent (reserved for sampled rebuilds).
    #[arg(long, default_value_t = 3.0)]
    c: f64,
    /// PRNG seed; the HUBS_SEED environment variable overrides it.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Update-stream file; omit to generate one.
    #[arg(long)]
    stream: Option<PathBuf>,
    /// Generator when no stream file is given: random | cycle-chords | spider.
    #[arg(long, default_value = "random")]
    gen: String,
    /// Check cadence: each | k:<int> | end. Default: each for n <= 64,
    /// k:10 above.
    #[arg(long)]
    check: Option<String>,
    /// Write per-check CSV rows here.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Record real elapsed times in the CSV (off keeps output byte-stable).
    #[arg(long, default_value_t = false)]
    timing: bool,
}

fn run(args: &RunArgs) -> Result<bool, String> {
    let algo = Algo::parse(&args.algo)
        .ok_or_else(|| format!("config error: unknown algo `{}`", args.algo))?;
    let gen = StreamKind::parse(&args.gen)
        .ok_or_else(|| format!("config error: unknown generator `{}`", args.gen))?;
    let seed = match std::env::var("HUBS_SEED") {
        Ok(s) => s
            .parse::<u64>()
            .map_err(|_| format!("config error: HUBS_SEED must be a u64, got `{s}`"))?,
        Err(_) => args.seed,
    };
    let mut cfg = RunConfig::new(algo);
    cfg.n = args.n;
    cfg.m = args.m;
    cfg.w_max = args.w;
    cfg.eps = args.eps;
    cfg.d = args.d;
    cfg.z = args.z;
    cfg.c = args.c;
    cfg.seed = seed;
    cfg.stream = args.stream.clone();
    cfg.gen = gen;
    cfg.check = match &args.check {
        Some(s) => Some(Cadence::parse(s).map_err(|e| e.to_string())?),
        None => None,
    };
    cfg.csv = args.csv.clone();
    cfg.timing = args.timing;

    let summary = replay_verify(&cfg).map_err(|e| e.to_string())?;
    print!("{}", summary.header);
    let mut shown = 0;
    for r in summary.reports.iter().filter(|r| !r.pass) {
        if shown == 20 {
            println!("... further failures elided");
            break;
        }
        println!(
            "FAIL op={} pair=({},{}) maintained={} oracle={} bound={} seed={}",
            r.op_index, r.u, r.v, r.maintained, r.oracle, r.bound, r.seed
        );
        shown += 1;
    }
    println!(
        "{}: {} ops, {} checks, {} pairs, {} failures",
        algo.as_str(),
        summary.ops,
        summary.checks,
        summary.checked_pairs,
        summary.failures
    );
    Ok(summary.passed())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.cmd {
        Cmd::Run(args) => match run(&args) {
            Ok(true) => ExitCode::SUCCESS,
            Ok(false) => ExitCode::from(1),
            Err(msg) => {
                eprintln!("{msg}");
                ExitCode::from(2)
            }
        },
    }
}
