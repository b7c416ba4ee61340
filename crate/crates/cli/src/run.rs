//! Graph loading, timed trials and oracle verification.

use std::fs::File;
use std::io::Read;
use std::path::Path;

use grainstone::algorithms::{
    bc, bfs, cc, default_delta, kcore, pagerank, sssp, tc, DirectionOptParams, PageRankParams,
};
use grainstone::graph::{compute_meta, generate_rmat, ingest_edge_list, load_csr_bin, GraphMeta, RmatParams};
use grainstone::mem_policy::{page_plan, plan_allocation, socket_balance, DistributeOver, Topology};
use grainstone::oracle::{
    oracle_bc_seq, oracle_bfs, oracle_cc_unionfind, oracle_dijkstra, oracle_kcore, oracle_pagerank_power, oracle_tc,
    ORACLE_TC_MAX_NODES,
};
use grainstone::{Algo, Graph, NodeId, RunStats, Runtime, UNREACHED};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::{Distribute, GraphSource, RunConfig, SourceSelector, WeightSpec};
use crate::error::CliError;

/// Weights assigned when sssp runs on a graph without any.
pub const AUTO_WEIGHTS: WeightSpec = WeightSpec { seed: 0, max: 255 };
/// Power-iteration steps used by the pr oracle.
pub const PR_ORACLE_ITERATIONS: usize = 200;
pub const PR_VERIFY_LINF: f64 = 1e-4;
pub const BC_VERIFY_ABS: f64 = 1e-9;

/// Deliberate corruption of one output entry before verification, used to
/// exercise the failure path.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Fault {
    pub node: NodeId,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GraphSummary {
    pub source: String,
    pub num_nodes: u64,
    pub num_edges: u64,
    pub weighted: bool,
    /// `input`, `none`, or the `SEED:MAX` the weights were drawn with.
    pub weights: String,
    pub transpose: bool,
    /// SHA-256 of the out-edge CSR arrays.
    pub sha256: String,
    pub max_out_degree_node: NodeId,
    pub max_out_degree: u64,
    pub max_in_degree: u64,
    pub estimated_diameter: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VerificationStatus {
    Skipped,
    Passed,
    Failed,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verification {
    pub status: VerificationStatus,
    pub detail: Option<String>,
    pub first_mismatch: Option<NodeId>,
}

impl Verification {
    fn skipped(reason: impl Into<String>) -> Self {
        Verification {
            status: VerificationStatus::Skipped,
            detail: Some(reason.into()),
            first_mismatch: None,
        }
    }

    fn passed() -> Self {
        Verification {
            status: VerificationStatus::Passed,
            detail: None,
            first_mismatch: None,
        }
    }

    fn failed(detail: String, node: Option<NodeId>) -> Self {
        Verification {
            status: VerificationStatus::Failed,
            detail: Some(detail),
            first_mismatch: node,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AllocationSummary {
    pub total_bytes: u64,
    pub block_size: u64,
    pub num_blocks: usize,
    pub per_socket_bytes: Vec<u64>,
    /// max / min socket bytes; null when a socket holds nothing.
    pub ratio: Option<f64>,
    pub num_pages: u64,
    pub tlb_reach: u64,
    /// Automatic NUMA page migration should be turned off for these runs.
    pub numa_migration: &'static str,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResultSummary {
    pub metric: &'static str,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub config: RunConfig,
    pub graph: GraphSummary,
    pub source_node: Option<NodeId>,
    pub delta: Option<u64>,
    pub trials: Vec<RunStats>,
    pub mean_wall_ms: f64,
    pub result: ResultSummary,
    pub verification: Verification,
    pub allocation: AllocationSummary,
}

impl RunReport {
    pub fn exit_code(&self) -> i32 {
        i32::from(self.verification.status == VerificationStatus::Failed)
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Output {
    Ints(Vec<u64>),
    Flags(Vec<bool>),
    Reals(Vec<f64>),
    Count(u64),
}

/// Loads a CSR-bin file when the header looks like one, an edge list otherwise.
pub fn load_graph_file(path: &Path) -> Result<Graph, CliError> {
    let file_err = |source| CliError::File {
        path: path.to_owned(),
        source,
    };
    let mut head = [0u8; 8];
    let mut file = File::open(path).map_err(file_err)?;
    let len = file.metadata().map_err(file_err)?.len();
    let is_csr_bin = len >= 32 && file.read_exact(&mut head).is_ok() && matches!(u64::from_le_bytes(head), 1 | 2);
    Ok(if is_csr_bin {
        load_csr_bin(path)?
    } else {
        ingest_edge_list(path, false, true)?
    })
}

pub fn load_source(source: &GraphSource) -> Result<Graph, CliError> {
    match source {
        GraphSource::File(path) => load_graph_file(path),
        &GraphSource::Rmat { scale, edge_factor, seed } => {
            Ok(generate_rmat(&RmatParams::graph500(scale, edge_factor, seed))?)
        }
    }
}

/// SHA-256 over the little-endian offsets, destinations and weights.
pub fn graph_hash(graph: &Graph) -> String {
    let csr = graph.out();
    let mut hasher = Sha256::new();
    for x in csr.offsets().iter().chain(csr.dests()) {
        hasher.update(x.to_le_bytes());
    }
    for w in csr.weights().unwrap_or(&[]) {
        hasher.update(w.to_le_bytes());
    }
    hasher.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

fn prepare_graph(config: &RunConfig) -> Result<(Graph, String), CliError> {
    let mut graph = load_source(&config.graph)?;
    let spec = match config.weights {
        Some(spec) => Some(spec),
        None if config.algo == Algo::Sssp && !graph.is_weighted() => Some(AUTO_WEIGHTS),
        None => None,
    };
    let weights = match spec {
        Some(spec) => {
            graph = graph.assign_random_weights(spec.seed, spec.max)?;
            spec.to_string()
        }
        None if graph.is_weighted() => "input".into(),
        None => "none".into(),
    };
    if config.transpose {
        graph = graph.build_transpose();
    }
    Ok((graph, weights))
}

fn allocation_summary(config: &RunConfig, graph: &Graph) -> Result<AllocationSummary, CliError> {
    let topology = Topology::two_socket();
    let distribute = match config.distribute {
        Distribute::Sockets => DistributeOver::Sockets,
        Distribute::Threads => DistributeOver::Threads(config.threads),
    };
    let total = graph.memory_bytes().max(1);
    let map = plan_allocation(total, config.policy, &topology, distribute, config.page_size)?;
    let balance = socket_balance(&map);
    let pages = page_plan(total, config.page_size);
    Ok(AllocationSummary {
        total_bytes: total,
        block_size: map.block_size,
        num_blocks: map.num_blocks(),
        per_socket_bytes: balance.per_socket_bytes,
        ratio: balance.ratio.is_finite().then_some(balance.ratio),
        num_pages: pages.num_pages,
        tlb_reach: pages.tlb_reach,
        numa_migration: "off",
    })
}

fn run_once(
    config: &RunConfig,
    graph: &Graph,
    source: NodeId,
    delta: u64,
    rt: &Runtime,
) -> Result<(Output, RunStats), CliError> {
    let v = config.variant;
    Ok(match config.algo {
        Algo::Bfs => {
            let (d, s) = bfs(graph, source, v, DirectionOptParams::default(), rt)?;
            (Output::Ints(d), s)
        }
        Algo::Sssp => {
            let (d, s) = sssp(graph, source, v, delta, rt)?;
            (Output::Ints(d), s)
        }
        Algo::Cc => {
            let (l, s) = cc(graph, v, rt)?;
            (Output::Ints(l), s)
        }
        Algo::Pr => {
            let params = PageRankParams {
                tolerance: config.tolerance,
                max_rounds: config.max_rounds,
                damping: config.damping,
            };
            let (r, s) = pagerank(graph, params, rt)?;
            (Output::Reals(r), s)
        }
        Algo::Kcore => {
            let (f, s) = kcore(graph, config.k, v, rt)?;
            (Output::Flags(f), s)
        }
        Algo::Bc => {
            let (b, s) = bc(graph, source, v, rt)?;
            (Output::Reals(b), s)
        }
        Algo::Tc => {
            let (c, s) = tc(graph, v, rt)?;
            (Output::Count(c), s)
        }
    })
}

fn summarize(algo: Algo, output: &Output) -> ResultSummary {
    let (metric, value) = match (algo, output) {
        (Algo::Bfs | Algo::Sssp, Output::Ints(d)) => ("reached", d.iter().filter(|&&x| x != UNREACHED).count() as f64),
        (Algo::Cc, Output::Ints(l)) => (
            "components",
            l.iter().enumerate().filter(|&(i, &x)| i as u64 == x).count() as f64,
        ),
        (Algo::Kcore, Output::Flags(f)) => ("core_size", f.iter().filter(|&&x| x).count() as f64),
        (Algo::Pr, Output::Reals(r)) => ("max_rank", r.iter().copied().fold(0.0, f64::max)),
        (Algo::Bc, Output::Reals(b)) => ("max_score", b.iter().copied().fold(0.0, f64::max)),
        (_, Output::Count(c)) => ("triangles", *c as f64),
        _ => unreachable!("output kind fixed by algorithm"),
    };
    ResultSummary { metric, value }
}

fn inject(output: &mut Output, fault: Fault) -> Option<NodeId> {
    let at = |len: usize| (fault.node % len.max(1) as u64) as usize;
    match output {
        Output::Ints(v) if !v.is_empty() => {
            let i = at(v.len());
            v[i] = if v[i] == UNREACHED { 0 } else { v[i] + 1 };
            Some(i as NodeId)
        }
        Output::Flags(v) if !v.is_empty() => {
            let i = at(v.len());
            v[i] = !v[i];
            Some(i as NodeId)
        }
        Output::Reals(v) if !v.is_empty() => {
            let i = at(v.len());
            v[i] += 1.0;
            Some(i as NodeId)
        }
        Output::Count(c) => {
            *c += 1;
            None
        }
        _ => None,
    }
}

fn compare_exact<T: PartialEq + std::fmt::Debug>(expected: &[T], got: &[T]) -> Verification {
    if expected.len() != got.len() {
        return Verification::failed(format!("expected {} entries, got {}", expected.len(), got.len()), None);
    }
    match expected.iter().zip(got).position(|(e, g)| e != g) {
        None => Verification::passed(),
        Some(i) => Verification::failed(
            format!("node {i}: expected {:?}, got {:?}", expected[i], got[i]),
            Some(i as NodeId),
        ),
    }
}

fn compare_within(expected: &[f64], got: &[f64], bound: f64) -> Verification {
    if expected.len() != got.len() {
        return Verification::failed(format!("expected {} entries, got {}", expected.len(), got.len()), None);
    }
    match expected.iter().zip(got).position(|(e, g)| (e - g).abs() >= bound || g.is_nan()) {
        None => Verification::passed(),
        Some(i) => Verification::failed(
            format!("node {i}: expected {}, got {} (bound {bound})", expected[i], got[i]),
            Some(i as NodeId),
        ),
    }
}

fn verify(config: &RunConfig, graph: &Graph, source: NodeId, output: &Output) -> Result<Verification, CliError> {
    Ok(match (config.algo, output) {
        (Algo::Bfs, Output::Ints(got)) => compare_exact(&oracle_bfs(graph, source), got),
        (Algo::Sssp, Output::Ints(got)) => compare_exact(&oracle_dijkstra(graph, source)?, got),
        (Algo::Cc, Output::Ints(got)) => compare_exact(&oracle_cc_unionfind(graph), got),
        (Algo::Kcore, Output::Flags(got)) => compare_exact(&oracle_kcore(graph, config.k), got),
        (Algo::Pr, Output::Reals(got)) => compare_within(
            &oracle_pagerank_power(graph, config.damping, PR_ORACLE_ITERATIONS),
            got,
            PR_VERIFY_LINF,
        ),
        (Algo::Bc, Output::Reals(got)) => compare_within(&oracle_bc_seq(graph, source), got, BC_VERIFY_ABS),
        (Algo::Tc, &Output::Count(got)) => {
            if graph.num_nodes() > ORACLE_TC_MAX_NODES {
                Verification::skipped(format!("tc oracle is limited to {ORACLE_TC_MAX_NODES} nodes"))
            } else {
                let expected = oracle_tc(graph);
                if expected == got {
                    Verification::passed()
                } else {
                    Verification::failed(format!("expected {expected} triangles, got {got}"), None)
                }
            }
        }
        _ => unreachable!("output kind fixed by algorithm"),
    })
}

fn resolve_source(config: &RunConfig, graph: &Graph, meta: &GraphMeta) -> Result<Option<NodeId>, CliError> {
    if !config.algo.needs_source() {
        return Ok(None);
    }
    let source = match config.source {
        SourceSelector::MaxOutDegree => meta.max_out_degree_node,
        SourceSelector::Explicit(id) => id,
    };
    if source >= graph.num_nodes() {
        return Err(grainstone::Error::SourceOutOfRange {
            source_node: source,
            num_nodes: graph.num_nodes(),
        }
        .into());
    }
    Ok(Some(source))
}

pub fn execute(config: &RunConfig) -> Result<RunReport, CliError> {
    execute_with(config, None)
}

/// Runs one untimed warm-up and `config.trials` timed trials, then verifies
/// the last trial's output when asked. A fault, if given, corrupts that
/// output first.
pub fn execute_with(config: &RunConfig, fault: Option<Fault>) -> Result<RunReport, CliError> {
    config.validate().map_err(CliError::Usage)?;
    let (graph, weights) = prepare_graph(config)?;
    let meta = compute_meta(&graph);
    let source = resolve_source(config, &graph, &meta)?;
    let delta = (config.algo == Algo::Sssp).then(|| config.delta.unwrap_or_else(|| default_delta(&graph)));
    let allocation = allocation_summary(config, &graph)?;
    let rt = Runtime::new(config.threads)?;

    let src = source.unwrap_or(0);
    let d = delta.unwrap_or(1);
    run_once(config, &graph, src, d, &rt)?;
    let mut trials = Vec::with_capacity(config.trials);
    let mut last = None;
    for _ in 0..config.trials {
        let (output, stats) = run_once(config, &graph, src, d, &rt)?;
        trials.push(stats);
        last = Some(output);
    }
    let mut output = last.expect("at least one trial");
    if let Some(fault) = fault {
        inject(&mut output, fault);
    }
    let verification = if config.verify {
        verify(config, &graph, src, &output)?
    } else {
        Verification::skipped("not requested")
    };
    let mean_wall_ms = trials.iter().map(|t| t.wall_ms).sum::<f64>() / trials.len() as f64;

    Ok(RunReport {
        config: config.clone(),
        graph: GraphSummary {
            source: config.graph.to_string(),
            num_nodes: graph.num_nodes(),
            num_edges: graph.num_edges(),
            weighted: graph.is_weighted(),
            weights,
            transpose: graph.in_csr().is_some(),
            sha256: graph_hash(&graph),
            max_out_degree_node: meta.max_out_degree_node,
            max_out_degree: meta.max_out_degree,
            max_in_degree: meta.max_in_degree,
            estimated_diameter: meta.estimated_diameter,
        },
        source_node: source,
        delta,
        result: summarize(config.algo, &output),
        trials,
        mean_wall_ms,
        verification,
        allocation,
    })
}
