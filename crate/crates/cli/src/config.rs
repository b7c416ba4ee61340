//! Command-line parsing into validated configurations.

use std::ffi::OsString;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::error::ErrorKind;
use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use grainstone::algorithms::DEFAULT_K;
use grainstone::mem_policy::{PageSize, Policy};
use grainstone::{Algo, NodeId, Variant, Weight};
use serde::{Serialize, Serializer};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GraphSource {
    File(PathBuf),
    Rmat { scale: u32, edge_factor: u64, seed: u64 },
}

impl fmt::Display for GraphSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphSource::File(path) => write!(f, "file:{}", path.display()),
            GraphSource::Rmat { scale, edge_factor, seed } => write!(f, "rmat:{scale}:{edge_factor}:{seed}"),
        }
    }
}

impl FromStr for GraphSource {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if let Some(path) = s.strip_prefix("file:") {
            if path.is_empty() {
                return Err("empty file path".into());
            }
            return Ok(GraphSource::File(path.into()));
        }
        let fields: Vec<&str> = s.strip_prefix("rmat:").ok_or("expected file:PATH or rmat:SCALE:EF:SEED")?.split(':').collect();
        match fields[..] {
            [scale, ef, seed] => Ok(GraphSource::Rmat {
                scale: scale.parse().map_err(|_| format!("bad rmat scale {scale:?}"))?,
                edge_factor: ef.parse().map_err(|_| format!("bad rmat edge factor {ef:?}"))?,
                seed: seed.parse().map_err(|_| format!("bad rmat seed {seed:?}"))?,
            }),
            _ => Err("expected rmat:SCALE:EF:SEED".into()),
        }
    }
}

/// `--weights SEED:MAX`: uniform random weights in `[1, MAX]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WeightSpec {
    pub seed: u64,
    pub max: Weight,
}

impl fmt::Display for WeightSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.seed, self.max)
    }
}

impl FromStr for WeightSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (seed, max) = s.split_once(':').ok_or("expected SEED:MAX")?;
        let seed = seed.parse().map_err(|_| format!("bad weight seed {seed:?}"))?;
        let max: Weight = max.parse().map_err(|_| format!("bad max weight {max:?}"))?;
        if max == 0 {
            return Err("max weight must be at least 1".into());
        }
        Ok(WeightSpec { seed, max })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SourceSelector {
    MaxOutDegree,
    Explicit(NodeId),
}

impl fmt::Display for SourceSelector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SourceSelector::MaxOutDegree => f.write_str("max-out-degree"),
            SourceSelector::Explicit(id) => write!(f, "{id}"),
        }
    }
}

impl FromStr for SourceSelector {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "max-out-degree" {
            return Ok(SourceSelector::MaxOutDegree);
        }
        s.parse().map(SourceSelector::Explicit).map_err(|_| format!("expected max-out-degree or a node id, got {s:?}"))
    }
}

macro_rules! serialize_as_display {
    ($($ty:ty),+) => {$(
        impl Serialize for $ty {
            fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                s.collect_str(self)
            }
        }
    )+};
}

serialize_as_display!(GraphSource, WeightSpec, SourceSelector);

fn display<T: fmt::Display, S: Serializer>(value: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(value)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Distribute {
    Sockets,
    Threads,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum ReportFormat {
    Json,
    Csv,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub algo: Algo,
    pub variant: Variant,
    pub graph: GraphSource,
    pub weights: Option<WeightSpec>,
    pub threads: usize,
    #[serde(serialize_with = "display")]
    pub policy: Policy,
    pub distribute: Distribute,
    pub page_size: PageSize,
    pub delta: Option<u64>,
    pub tolerance: f64,
    pub max_rounds: u64,
    pub k: u64,
    pub damping: f64,
    pub source: SourceSelector,
    pub trials: usize,
    pub verify: bool,
    pub report: ReportFormat,
    pub out: Option<PathBuf>,
    pub transpose: bool,
}

impl RunConfig {
    /// Defaults for everything but the algorithm and graph.
    pub fn new(algo: Algo, graph: GraphSource) -> Self {
        RunConfig {
            algo,
            variant: algo.default_variant(),
            graph,
            weights: None,
            threads: default_threads(),
            policy: Policy::Interleaved,
            distribute: Distribute::Sockets,
            page_size: PageSize::Small,
            delta: None,
            tolerance: 1e-6,
            max_rounds: 100,
            k: DEFAULT_K,
            damping: 0.85,
            source: SourceSelector::MaxOutDegree,
            trials: 3,
            verify: false,
            report: ReportFormat::Json,
            out: None,
            transpose: true,
        }
    }

    /// Checks the cross-field rules clap cannot express.
    pub fn validate(&self) -> Result<(), String> {
        if !self.algo.supports(self.variant) {
            let names: Vec<&str> = self.algo.variants().iter().map(|v| v.name()).collect();
            return Err(format!(
                "variant {} is not available for {}; choose one of {}",
                self.variant,
                self.algo,
                names.join(", ")
            ));
        }
        if !self.transpose && self.variant.needs_transpose() {
            return Err(format!("variant {} reads in-edges and cannot run with --no-transpose", self.variant));
        }
        if self.trials == 0 {
            return Err("--trials must be at least 1".into());
        }
        if self.threads == 0 {
            return Err("--threads must be at least 1".into());
        }
        if self.delta == Some(0) {
            return Err("--delta must be at least 1".into());
        }
        if !(0.0..=1.0).contains(&self.damping) {
            return Err("--damping must lie in [0, 1]".into());
        }
        if self.tolerance.is_nan() || self.tolerance < 0.0 {
            return Err("--tolerance must be non-negative".into());
        }
        Ok(())
    }
}

fn default_threads() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

#[derive(Clone, Debug, PartialEq)]
pub struct GenConfig {
    pub graph: GraphSource,
    pub weights: Option<WeightSpec>,
    pub symmetrize: bool,
    pub out: PathBuf,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MicroConfig {
    pub bytes: u64,
    pub threads: usize,
    pub policy: Policy,
    pub page_size: PageSize,
    pub sockets: usize,
    pub socket_capacity: u64,
    pub threads_per_socket: usize,
    pub out: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Command {
    Run(RunConfig),
    Gen(GenConfig),
    Micro(MicroConfig),
}

/// `4096`, `64K`, `8M`, `320G`, `1T` (binary multiples).
pub fn parse_size(s: &str) -> Result<u64, String> {
    let s = s.trim();
    let (digits, shift) = match s.char_indices().last() {
        Some((i, c)) if c.is_ascii_alphabetic() => {
            let shift = match c.to_ascii_uppercase() {
                'K' => 10,
                'M' => 20,
                'G' => 30,
                'T' => 40,
                _ => return Err(format!("unknown size suffix in {s:?}")),
            };
            (&s[..i], shift)
        }
        _ => (s, 0),
    };
    let value: u64 = digits.parse().map_err(|_| format!("bad size {s:?}"))?;
    value.checked_shl(shift).filter(|v| v >> shift == value).ok_or_else(|| format!("size {s:?} overflows"))
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be at least 1".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

#[derive(Debug, Parser)]
#[command(name = "grainstone", version, about = "Shared-memory graph analytics benchmark harness")]
struct Cli {
    #[command(subcommand)]
    command: CommandArgs,
}

#[derive(Debug, Subcommand)]
enum CommandArgs {
    /// Run one benchmark: a warm-up, timed trials, optional verification and a report.
    Run(RunArgs),
    /// Write a CSR-bin file from RMAT parameters or an edge list.
    Gen(GenArgs),
    /// Allocation-policy write microbenchmark.
    Micro(MicroArgs),
}

#[derive(Debug, Args)]
struct RunArgs {
    /// bfs, sssp, cc, pr, kcore, bc or tc
    #[arg(long)]
    algo: Algo,
    /// Operator/schedule variant; defaults to the first one listed for the algorithm
    #[arg(long)]
    variant: Option<Variant>,
    /// file:PATH (CSR-bin or edge list) or rmat:SCALE:EF:SEED
    #[arg(long, default_value = "rmat:14:16:42")]
    graph: GraphSource,
    /// Replace edge weights with uniform draws from [1, MAX]
    #[arg(long, value_name = "SEED:MAX")]
    weights: Option<WeightSpec>,
    #[arg(long, env = "GRAINSTONE_THREADS", value_parser = positive)]
    threads: Option<usize>,
    /// local:S, interleaved or blocked
    #[arg(long, default_value = "interleaved")]
    policy: Policy,
    #[arg(long, value_enum, default_value_t = Distribute::Sockets)]
    distribute: Distribute,
    /// 4k or 2m
    #[arg(long, default_value = "4k")]
    page_size: PageSize,
    /// Bucket width for delta_async; defaults to the rounded mean weight
    #[arg(long)]
    delta: Option<u64>,
    #[arg(long, default_value_t = 1e-6)]
    tolerance: f64,
    #[arg(long, default_value_t = 100)]
    max_rounds: u64,
    #[arg(long, default_value_t = DEFAULT_K)]
    k: u64,
    #[arg(long, default_value_t = 0.85)]
    damping: f64,
    /// max-out-degree or a node id
    #[arg(long, default_value = "max-out-degree")]
    source: SourceSelector,
    #[arg(long, default_value_t = 3, value_parser = positive)]
    trials: usize,
    /// Compare the last trial against the sequential oracle
    #[arg(long)]
    verify: bool,
    #[arg(long, value_enum, default_value_t = ReportFormat::Json)]
    report: ReportFormat,
    /// Write the report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Do not build the in-edge CSR
    #[arg(long)]
    no_transpose: bool,
}

#[derive(Debug, Args)]
struct GenArgs {
    /// file:PATH (edge list) or rmat:SCALE:EF:SEED
    #[arg(long)]
    graph: GraphSource,
    #[arg(long, value_name = "SEED:MAX")]
    weights: Option<WeightSpec>,
    /// Add the reverse of every edge (drops self-loops and weights before --weights is applied)
    #[arg(long)]
    symmetrize: bool,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct MicroArgs {
    /// Buffer size, e.g. 256M or 4G
    #[arg(long, default_value = "256M", value_parser = parse_size)]
    bytes: u64,
    #[arg(long, env = "GRAINSTONE_THREADS", value_parser = positive)]
    threads: Option<usize>,
    #[arg(long, default_value = "interleaved")]
    policy: Policy,
    #[arg(long, default_value = "4k")]
    page_size: PageSize,
    #[arg(long, default_value_t = 2, value_parser = positive)]
    sockets: usize,
    #[arg(long, default_value = "192G", value_parser = parse_size)]
    socket_capacity: u64,
    #[arg(long, default_value_t = 48, value_parser = positive)]
    threads_per_socket: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Parses a full argument vector, program name first.
///
/// Usage errors, including invalid flag combinations, come back as clap
/// errors whose exit code is 2 (help and version requests use 0).
pub fn parse_config<I, T>(argv: I) -> Result<Command, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv)?;
    let command = match cli.command {
        CommandArgs::Run(a) => {
            let config = RunConfig {
                algo: a.algo,
                variant: a.variant.unwrap_or(a.algo.default_variant()),
                graph: a.graph,
                weights: a.weights,
                threads: a.threads.unwrap_or_else(default_threads),
                policy: a.policy,
                distribute: a.distribute,
                page_size: a.page_size,
                delta: a.delta,
                tolerance: a.tolerance,
                max_rounds: a.max_rounds,
                k: a.k,
                damping: a.damping,
                source: a.source,
                trials: a.trials,
                verify: a.verify,
                report: a.report,
                out: a.out,
                transpose: !a.no_transpose,
            };
            config
                .validate()
                .map_err(|msg| Cli::command().error(ErrorKind::ArgumentConflict, msg))?;
            Command::Run(config)
        }
        CommandArgs::Gen(a) => Command::Gen(GenConfig {
            graph: a.graph,
            weights: a.weights,
            symmetrize: a.symmetrize,
            out: a.out,
        }),
        CommandArgs::Micro(a) => Command::Micro(MicroConfig {
            bytes: a.bytes,
            threads: a.threads.unwrap_or_else(default_threads),
            policy: a.policy,
            page_size: a.page_size,
            sockets: a.sockets,
            socket_capacity: a.socket_capacity,
            threads_per_socket: a.threads_per_socket,
            out: a.out,
        }),
    };
    Ok(command)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> Result<RunConfig, clap::Error> {
        let argv = ["grainstone", "run"].iter().chain(args);
        match parse_config(argv)? {
            Command::Run(c) => Ok(c),
            other => panic!("parsed {other:?}"),
        }
    }

    #[test]
    fn bfs_defaults() {
        let c = run(&["--algo", "bfs", "--graph", "rmat:14:16:42", "--threads", "8"]).unwrap();
        assert_eq!(c.variant, Variant::PushBspSparse);
        assert_eq!(c.trials, 3);
        assert_eq!(c.threads, 8);
        assert_eq!(
            c.graph,
            GraphSource::Rmat {
                scale: 14,
                edge_factor: 16,
                seed: 42
            }
        );
        assert!(c.transpose && !c.verify);
    }

    #[test]
    fn sssp_delta() {
        let c = run(&["--algo", "sssp", "--variant", "delta_async", "--delta", "4"]).unwrap();
        assert_eq!(c.delta, Some(4));
        assert_eq!(c.variant, Variant::DeltaAsync);
    }

    #[test]
    fn pagerank_defaults_echoed() {
        let c = run(&["--algo", "pr", "--tolerance", "1e-6", "--max-rounds", "100"]).unwrap();
        assert_eq!((c.tolerance, c.max_rounds, c.damping), (1e-6, 100, 0.85));
        let json = serde_json::to_value(&c).unwrap();
        assert_eq!(json["tolerance"], 1e-6);
        assert_eq!(json["max_rounds"], 100);
        assert_eq!(json["policy"], "interleaved");
        assert_eq!(json["graph"], "rmat:14:16:42");
    }

    #[test]
    fn usage_errors_exit_2() {
        for args in [
            &["--algo", "bfs", "--variant", "direction_opt", "--no-transpose"][..],
            &["--algo", "bfs", "--variant", "delta_async"],
            &["--algo", "bfs", "--bogus"],
            &["--algo", "nope"],
            &["--algo", "bfs", "--trials", "0"],
            &["--algo", "bfs", "--graph", "rmat:1:2"],
            &["--algo", "sssp", "--delta", "0"],
            &["--algo", "pr", "--damping", "1.5"],
        ] {
            let err = run(args).unwrap_err();
            assert_eq!(err.exit_code(), 2, "{args:?}");
        }
    }

    #[test]
    fn other_subcommands() {
        let gen = parse_config(["grainstone", "gen", "--graph", "rmat:10:4:1", "--out", "g.csr"]).unwrap();
        assert!(matches!(gen, Command::Gen(GenConfig { symmetrize: false, .. })));
        let micro = parse_config(["grainstone", "micro", "--bytes", "8M", "--threads", "2", "--policy", "local:1"]).unwrap();
        let Command::Micro(m) = micro else { panic!() };
        assert_eq!((m.bytes, m.threads, m.policy), (8 << 20, 2, Policy::Local(1)));
    }

    #[test]
    fn sizes() {
        assert_eq!(parse_size("4096"), Ok(4096));
        assert_eq!(parse_size("320G"), Ok(320 << 30));
        assert_eq!(parse_size("2m"), Ok(2 << 20));
        assert!(parse_size("12X").is_err());
        assert!(parse_size("99999999999T").is_err());
    }

    #[test]
    fn selectors_round_trip() {
        for s in ["max-out-degree", "17"] {
            assert_eq!(s.parse::<SourceSelector>().unwrap().to_string(), s);
        }
        for s in ["rmat:10:16:3", "file:/tmp/x.el"] {
            assert_eq!(s.parse::<GraphSource>().unwrap().to_string(), s);
        }
        assert_eq!("7:255".parse::<WeightSpec>().unwrap(), WeightSpec { seed: 7, max: 255 });
        assert!("7:0".parse::<WeightSpec>().is_err());
    }
}
