//! Subcommands and exit codes.
//!
//! | code | meaning                                              |
//! |------|------------------------------------------------------|
//! | 0    | success (for `eval`: the partitioning is valid)      |
//! | 1    | parse, I/O or usage error; `eval` length mismatch     |
//! | 2    | infeasible constraints, or `oracle` size guard hit   |
//! | 3    | `eval` found constraint violations                   |

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use dhgpart_core::baselines::{one_pass, overlap_greedy};
use dhgpart_core::driver::{partition_with, Clock, NoClock};
use dhgpart_core::oracle::brute_force_optimal;
use dhgpart_core::{
    check_validity, connectivity, Config, Constraints, Error, Hypergraph, PartId, Partitioning,
};

use crate::gen::{generate, GenParams};
use crate::metrics::{kind_name, Metrics};
use crate::{dhg, hgr, partfile, FormatError};

#[derive(Debug, Parser)]
#[command(name = "dhgpart", version, about = "Constrained directed hypergraph partitioner")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Multi-level partitioning of a .dhg file.
    Partition(PartitionArgs),
    /// Connectivity and constraint report for an existing partition file.
    Eval(EvalArgs),
    /// Run a reference partitioner.
    Baseline(BaselineArgs),
    /// Exhaustive optimum for instances of at most 10 nodes.
    Oracle(OracleArgs),
    /// Write a seeded random .dhg instance.
    Gen(GenArgs),
    /// Convert an hMETIS .hgr file to .dhg.
    Convert(ConvertArgs),
}

#[derive(Debug, Args)]
pub struct LimitArgs {
    /// Maximum nodes per partition.
    #[arg(long = "max-size")]
    pub max_size: u64,
    /// Maximum distinct inbound hyperedges per partition.
    #[arg(long = "max-inbound")]
    pub max_inbound: u64,
}

impl LimitArgs {
    fn constraints(&self) -> Constraints {
        Constraints::new(self.max_size, self.max_inbound)
    }
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Partition file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Metrics JSON file.
    #[arg(long)]
    pub metrics: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PartitionArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[command(flatten)]
    pub limits: LimitArgs,
    /// Refinement passes per level.
    #[arg(long, default_value_t = 8)]
    pub rounds: usize,
    /// Histogram batch width.
    #[arg(long, default_value_t = 32)]
    pub batch: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Record wall-clock phase times in the metrics (makes them run-dependent).
    #[arg(long)]
    pub timings: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub parts: PathBuf,
    #[command(flatten)]
    pub limits: LimitArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Onepass,
    Overlap,
}

#[derive(Debug, Args)]
pub struct BaselineArgs {
    #[arg(long, value_enum)]
    pub method: Method,
    #[arg(long)]
    pub input: PathBuf,
    #[command(flatten)]
    pub limits: LimitArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[command(flatten)]
    pub limits: LimitArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long)]
    pub nodes: usize,
    #[arg(long)]
    pub edges: usize,
    #[arg(long = "max-pins", default_value_t = 4)]
    pub max_pins: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ConvertArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// A command failure with its exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    msg: String,
}

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Self {
        Failure { code: 1, msg: e.to_string() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Infeasible { .. } | Error::BadConstraints | Error::TooLarge { .. } => 2,
            _ => 1,
        };
        Failure { code, msg: e.to_string() }
    }
}

struct WallClock(Instant);

impl Clock for WallClock {
    fn now_ms(&self) -> f64 {
        self.0.elapsed().as_secs_f64() * 1e3
    }
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let result = match &cli.command {
        Command::Partition(a) => cmd_partition(a),
        Command::Eval(a) => cmd_eval(a),
        Command::Baseline(a) => cmd_baseline(a),
        Command::Oracle(a) => cmd_oracle(a),
        Command::Gen(a) => cmd_gen(a),
        Command::Convert(a) => cmd_convert(a),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.msg);
            f.code
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|source| {
        FormatError::Io { path: path.to_path_buf(), source }.into()
    })
}

fn write_out(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    let res = match path {
        Some(p) => fs::write(p, text),
        None => io::stdout().lock().write_all(text.as_bytes()),
    };
    res.map_err(|source| {
        FormatError::Io {
            path: path.map_or_else(|| PathBuf::from("<stdout>"), Path::to_path_buf),
            source,
        }
        .into()
    })
}

fn load(path: &Path) -> Result<Hypergraph, Failure> {
    Ok(dhg::parse(&read(path)?)?)
}

fn emit(rho: &Partitioning, metrics: Metrics, out: &OutputArgs) -> Result<i32, Failure> {
    write_out(out.out.as_deref(), &partfile::write(rho.assignment()))?;
    if let Some(path) = &out.metrics {
        write_out(Some(path), &metrics.to_json())?;
    }
    Ok(0)
}

fn cmd_partition(a: &PartitionArgs) -> Result<i32, Failure> {
    let g = load(&a.input)?;
    let c = a.limits.constraints();
    let mut cfg = Config::new(c);
    cfg.max_rounds = a.rounds;
    cfg.batch_size = a.batch;
    cfg.seed = a.seed;
    if a.batch == 0 {
        return Err(Failure { code: 1, msg: "--batch must be positive".into() });
    }
    let wall = WallClock(Instant::now());
    let clock: &dyn Clock = if a.timings { &wall } else { &NoClock };
    let (rho, stats) = partition_with(&g, &cfg, clock, &mut ())?;
    let violations = check_validity(&g, &rho, &c);
    let metrics = Metrics::new("multilevel", rho.num_parts(), connectivity(&g, &rho), &violations)
        .with_stats(&stats);
    emit(&rho, metrics, &a.output)
}

fn cmd_baseline(a: &BaselineArgs) -> Result<i32, Failure> {
    let g = load(&a.input)?;
    let c = a.limits.constraints();
    let (name, rho) = match a.method {
        Method::Onepass => ("onepass", one_pass(&g, &c)?),
        Method::Overlap => ("overlap", overlap_greedy(&g, &c)?),
    };
    let violations = check_validity(&g, &rho, &c);
    let metrics = Metrics::new(name, rho.num_parts(), connectivity(&g, &rho), &violations);
    emit(&rho, metrics, &a.output)
}

fn cmd_oracle(a: &OracleArgs) -> Result<i32, Failure> {
    let g = load(&a.input)?;
    let c = a.limits.constraints();
    let (rho, value) = brute_force_optimal(&g, &c)?;
    let violations = check_validity(&g, &rho, &c);
    let metrics = Metrics::new("oracle", rho.num_parts(), value, &violations);
    emit(&rho, metrics, &a.output)
}

fn cmd_eval(a: &EvalArgs) -> Result<i32, Failure> {
    let g = load(&a.input)?;
    let raw = partfile::parse(&read(&a.parts)?)?;
    if raw.len() != g.num_nodes() {
        return Err(Failure {
            code: 1,
            msg: format!("partition file has {} entries, hypergraph has {} nodes", raw.len(), g.num_nodes()),
        });
    }
    // Ids may have gaps; evaluate on compacted ids and report the originals.
    let mut labels: Vec<PartId> = raw.clone();
    labels.sort_unstable();
    labels.dedup();
    let rho = Partitioning::compact(raw);
    let c = a.limits.constraints();
    let violations = check_validity(&g, &rho, &c);

    let mut out = io::stdout().lock();
    let _ = writeln!(out, "connectivity: {}", connectivity(&g, &rho));
    let _ = writeln!(out, "partitions: {}", rho.num_parts());
    for v in &violations {
        let _ = writeln!(
            out,
            "violation: partition {} {} {} > {}",
            labels[v.part as usize],
            kind_name(v.kind),
            v.actual,
            v.limit
        );
    }
    Ok(if violations.is_empty() { 0 } else { 3 })
}

fn cmd_gen(a: &GenArgs) -> Result<i32, Failure> {
    if a.nodes == 0 && a.edges > 0 {
        return Err(Failure { code: 1, msg: "edges need at least one node".into() });
    }
    let g = generate(&GenParams {
        nodes: a.nodes,
        edges: a.edges,
        max_pins: a.max_pins,
        seed: a.seed,
    });
    write_out(a.out.as_deref(), &dhg::write(&g))?;
    Ok(0)
}

fn cmd_convert(a: &ConvertArgs) -> Result<i32, Failure> {
    let g = hgr::parse(&read(&a.input)?)?;
    write_out(a.out.as_deref(), &dhg::write(&g))?;
    Ok(0)
}
