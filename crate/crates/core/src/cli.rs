//! The `hotspot` command line.
//!
//! Exit codes: 0 on success, 1 for usage errors, 2 for data errors.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Error;
use crate::io::{format_trajectory, generate, parse_queries, parse_trajectory, GenParams};
use crate::oracle::{oracle_sampled_opt, oracle_vertex_anchored_opt};
use crate::query::HotspotIndex;
use crate::trajectory::{Trajectory, Window, Witness};

#[derive(Debug, Parser)]
#[command(name = "hotspot", version, about = "Time-windowed contiguous hotspot queries")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Answer hotspot queries over a trajectory file.
    Query(QueryArgs),
    /// Brute-force reference values for one window.
    Oracle(OracleArgs),
    /// Write a synthetic trajectory.
    Gen(GenArgs),
    /// Time index construction and queries on a synthetic trajectory.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Tsv,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("target").required(true).args(["window", "queries", "whole"])))]
struct QueryArgs {
    /// Trajectory CSV (`t,x,y`).
    #[arg(long)]
    input: PathBuf,
    /// Side length of the square.
    #[arg(long)]
    side: f64,
    /// A single query window.
    #[arg(long, num_args = 2, value_names = ["X", "Y"], allow_negative_numbers = true)]
    window: Option<Vec<f64>>,
    /// File with one `X Y` window per line.
    #[arg(long)]
    queries: Option<PathBuf>,
    /// Query the whole trajectory.
    #[arg(long)]
    whole: bool,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Debug, Args)]
struct OracleArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    side: f64,
    #[arg(long, num_args = 2, value_names = ["X", "Y"], allow_negative_numbers = true, required = true)]
    window: Vec<f64>,
    /// Sampled start times per edge.
    #[arg(long, default_value_t = 200)]
    samples: usize,
}

#[derive(Debug, Args)]
struct GenArgs {
    /// Number of vertices.
    #[arg(long = "n")]
    n: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = GenParams::default().dwell_fraction)]
    dwell_fraction: f64,
    #[arg(long, default_value_t = GenParams::default().extent)]
    extent: f64,
}

#[derive(Debug, Args)]
struct BenchArgs {
    #[arg(long = "n")]
    n: usize,
    #[arg(long)]
    queries: usize,
    #[arg(long)]
    side: f64,
    #[arg(long)]
    seed: u64,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Data(String),
}

impl Failure {
    fn from_model(e: Error) -> Self {
        match e {
            Error::InvalidSide(_) | Error::InvalidWindow { .. } | Error::Precondition(_) => {
                Failure::Usage(e.to_string())
            }
            _ => Failure::Data(e.to_string()),
        }
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure::Data(format!("{}: {e}", path.display()))
}

fn write_failure(e: std::io::Error) -> Failure {
    Failure::Data(format!("write failed: {e}"))
}

#[derive(Serialize)]
struct SquareRecord {
    x: f64,
    y: f64,
    side: f64,
}

#[derive(Serialize)]
struct WitnessRecord {
    window: [f64; 2],
    score: f64,
    interval: [f64; 2],
    square: SquareRecord,
}

impl WitnessRecord {
    fn new(window: Window, w: &Witness) -> Self {
        Self {
            window: [window.start, window.end],
            score: w.score,
            interval: [w.interval.start, w.interval.end],
            square: SquareRecord { x: w.square.anchor_x, y: w.square.anchor_y, side: w.square.side },
        }
    }

    fn tsv(&self) -> String {
        format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            self.window[0],
            self.window[1],
            self.score,
            self.interval[0],
            self.interval[1],
            self.square.x,
            self.square.y,
            self.square.side
        )
    }
}

const TSV_HEADER: &str = "window_start\twindow_end\tscore\tinterval_start\tinterval_end\tsquare_x\tsquare_y\tside";

fn load_trajectory(path: &Path) -> Result<Trajectory, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| io_failure(path, e))?;
    parse_trajectory(&text).map_err(|e| Failure::Data(format!("{}: {e}", path.display())))
}

fn run_query(args: QueryArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let traj = load_trajectory(&args.input)?;
    let windows: Vec<(f64, f64)> = if let Some(w) = &args.window {
        vec![(w[0], w[1])]
    } else if let Some(path) = &args.queries {
        let text = std::fs::read_to_string(path).map_err(|e| io_failure(path, e))?;
        parse_queries(&text).map_err(|e| Failure::Data(format!("{}: {e}", path.display())))?
    } else {
        let span = traj.span();
        vec![(span.start, span.end)]
    };
    let idx = HotspotIndex::build(traj, args.side).map_err(Failure::from_model)?;
    if let Format::Tsv = args.format {
        writeln!(out, "{TSV_HEADER}").map_err(write_failure)?;
    }
    for (x, y) in windows {
        let window = idx.clamp_window(x, y).map_err(Failure::from_model)?;
        let wit = idx.query(x, y).map_err(Failure::from_model)?;
        let rec = WitnessRecord::new(window, &wit);
        let line = match args.format {
            Format::Json => serde_json::to_string(&rec).expect("record serializes"),
            Format::Tsv => rec.tsv(),
        };
        writeln!(out, "{line}").map_err(write_failure)?;
    }
    Ok(())
}

#[derive(Serialize)]
struct OracleRecord {
    window: [f64; 2],
    vertex_anchored: WitnessRecord,
    sampled: f64,
    samples: usize,
}

fn run_oracle(args: OracleArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let traj = load_trajectory(&args.input)?;
    if !(args.side.is_finite() && args.side > 0.0) {
        return Err(Failure::from_model(Error::InvalidSide(args.side)));
    }
    if args.samples == 0 {
        return Err(Failure::Usage("--samples must be at least 1".into()));
    }
    let (x, y) = (args.window[0], args.window[1]);
    if !(x.is_finite() && y.is_finite()) || x > y {
        return Err(Failure::from_model(Error::InvalidWindow { start: x, end: y }));
    }
    let span = traj.span();
    let window = Window { start: x.clamp(span.start, span.end), end: y.clamp(span.start, span.end) };
    let anchored = oracle_vertex_anchored_opt(&traj, args.side, window).map_err(Failure::from_model)?;
    let sampled = oracle_sampled_opt(&traj, args.side, window, args.samples).map_err(Failure::from_model)?;
    let rec = OracleRecord {
        window: [window.start, window.end],
        vertex_anchored: WitnessRecord::new(window, &anchored),
        sampled,
        samples: args.samples,
    };
    writeln!(out, "{}", serde_json::to_string(&rec).expect("record serializes")).map_err(write_failure)
}

fn run_gen(args: GenArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let params = GenParams { dwell_fraction: args.dwell_fraction, extent: args.extent, ..GenParams::default() };
    let traj = generate(args.n, args.seed, &params).map_err(Failure::from_model)?;
    std::fs::write(&args.out, format_trajectory(&traj)).map_err(|e| io_failure(&args.out, e))?;
    writeln!(out, "wrote {} vertices to {}", traj.len(), args.out.display()).map_err(write_failure)
}

/// Nearest-rank percentile of an ascending slice.
fn percentile(sorted: &[f64], p: f64) -> f64 {
    if sorted.is_empty() {
        return f64::NAN;
    }
    let rank = ((p / 100.0) * sorted.len() as f64).ceil() as usize;
    sorted[rank.clamp(1, sorted.len()) - 1]
}

fn run_bench(args: BenchArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let traj = generate(args.n, args.seed, &GenParams::default()).map_err(Failure::from_model)?;
    let span = traj.span();

    let started = Instant::now();
    let (idx, stats) = HotspotIndex::build_with_stats(traj, args.side).map_err(Failure::from_model)?;
    let build = started.elapsed();

    let mut rng = ChaCha8Rng::seed_from_u64(args.seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut latencies = Vec::with_capacity(args.queries);
    let mut depths: Vec<u64> = Vec::new();
    for _ in 0..args.queries {
        let a = rng.gen_range(span.start..=span.end);
        let b = rng.gen_range(span.start..=span.end);
        let (x, y) = if a <= b { (a, b) } else { (b, a) };
        let t0 = Instant::now();
        let (wit, trace) = idx.query_traced(x, y).map_err(Failure::from_model)?;
        latencies.push(t0.elapsed().as_secs_f64() * 1e6);
        std::hint::black_box(wit);
        if depths.len() <= trace.depth {
            depths.resize(trace.depth + 1, 0);
        }
        depths[trace.depth] += 1;
    }
    latencies.sort_by(f64::total_cmp);

    let t0 = Instant::now();
    let whole = idx.whole_trajectory_hotspot();
    let whole_time = t0.elapsed();

    let pops: u64 = stats.queues().iter().map(|q| q.pops).sum();
    let pushes: u64 = stats.queues().iter().map(|q| q.pushes).sum();
    let w = |out: &mut dyn Write, s: String| writeln!(out, "{s}").map_err(write_failure);
    w(out, format!("vertices            {}", args.n))?;
    w(out, format!("side                {}", args.side))?;
    w(out, format!("build_ms            {:.3}", build.as_secs_f64() * 1e3))?;
    w(out, format!("queue_pushes        {pushes}"))?;
    w(out, format!("queue_pops          {pops}"))?;
    w(out, format!("queries             {}", args.queries))?;
    w(out, format!("query_median_us     {:.3}", percentile(&latencies, 50.0)))?;
    w(out, format!("query_p99_us        {:.3}", percentile(&latencies, 99.0)))?;
    w(out, format!("whole_us            {:.3}", whole_time.as_secs_f64() * 1e6))?;
    w(out, format!("whole_score         {}", whole.score))?;
    w(out, "depth  count".to_string())?;
    for (d, c) in depths.iter().enumerate().filter(|(_, &c)| c > 0) {
        w(out, format!("{d:>5}  {c}"))?;
    }
    Ok(())
}

/// Runs the command line with the given arguments (including the program
/// name) and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    0
                }
                _ => {
                    let _ = write!(err, "{e}");
                    1
                }
            };
        }
    };
    let result = match cli.command {
        Command::Query(a) => run_query(a, out),
        Command::Oracle(a) => run_oracle(a, out),
        Command::Gen(a) => run_gen(a, out),
        Command::Bench(a) => run_bench(a, out),
    };
    match result {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            1
        }
        Err(Failure::Data(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
    }
}

#[cfg(test)]
mod tests {
    use super::percentile;

    #[test]
    fn nearest_rank_percentiles() {
        let v: Vec<f64> = (1..=100).map(f64::from).collect();
        assert_eq!(percentile(&v, 50.0), 50.0);
        assert_eq!(percentile(&v, 99.0), 99.0);
        assert_eq!(percentile(&v, 100.0), 100.0);
        assert_eq!(percentile(&[3.0], 99.0), 3.0);
        assert!(percentile(&[], 50.0).is_nan());
    }
}
