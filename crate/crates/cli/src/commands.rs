//! The `gen` and `micro` subcommands.

use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use grainstone::graph::{compute_meta, ingest_edge_list, write_csr_bin, GraphMeta};
use grainstone::mem_policy::{page_plan, socket_balance, write_microbenchmark, PagePlan, TimingReport, Topology};
use serde::Serialize;

use crate::config::{GenConfig, GraphSource, MicroConfig};
use crate::error::CliError;
use crate::run::{graph_hash, load_source};

#[derive(Debug, Serialize)]
pub struct GenSummary {
    pub out: String,
    pub sha256: String,
    pub weighted: bool,
    #[serde(flatten)]
    pub meta: GraphMeta,
}

pub fn generate(config: &GenConfig) -> Result<GenSummary, CliError> {
    let mut graph = match &config.graph {
        GraphSource::File(path) => ingest_edge_list(path, config.symmetrize, true)?,
        rmat => {
            let g = load_source(rmat)?;
            if config.symmetrize {
                g.to_undirected()
            } else {
                g
            }
        }
    };
    if let Some(spec) = config.weights {
        graph = graph.assign_random_weights(spec.seed, spec.max)?;
    }
    write_csr_bin(&graph, &config.out)?;
    Ok(GenSummary {
        out: config.out.display().to_string(),
        sha256: graph_hash(&graph),
        weighted: graph.is_weighted(),
        meta: compute_meta(&graph),
    })
}

#[derive(Debug, Serialize)]
pub struct MicroReport {
    #[serde(flatten)]
    pub timing: TimingReport,
    /// max / min socket bytes; null when a socket holds nothing.
    pub ratio: Option<f64>,
    pub page_plan: PagePlan,
    pub checksum: u64,
}

pub fn micro(config: &MicroConfig) -> Result<MicroReport, CliError> {
    let topology = Topology::new(config.sockets, config.socket_capacity, config.threads_per_socket)?;
    let timing = write_microbenchmark(config.bytes, config.threads, config.policy, &topology, config.page_size)?;
    let ratio = socket_balance(&timing.map).ratio;
    Ok(MicroReport {
        ratio: ratio.is_finite().then_some(ratio),
        page_plan: page_plan(config.bytes, config.page_size),
        checksum: timing.checksum,
        timing,
    })
}

/// Pretty JSON to `path`, or stdout.
pub fn write_json(value: &impl Serialize, path: Option<&Path>) -> Result<(), CliError> {
    let mut w: Box<dyn Write> = match path {
        Some(path) => Box::new(File::create(path).map_err(|source| CliError::File {
            path: path.to_owned(),
            source,
        })?),
        None => Box::new(io::stdout().lock()),
    };
    serde_json::to_writer_pretty(&mut w, value)?;
    w.write_all(b"\n")?;
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use grainstone::graph::load_csr_bin;
    use grainstone::mem_policy::{fill_byte, PageSize, Policy};

    #[test]
    fn gen_writes_loadable_file() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("g.csr");
        let summary = generate(&GenConfig {
            graph: "rmat:8:4:2".parse().unwrap(),
            weights: Some("1:9".parse().unwrap()),
            symmetrize: true,
            out: out.clone(),
        })
        .unwrap();
        let g = load_csr_bin(&out).unwrap();
        assert!(g.is_weighted() && g.is_simple_undirected());
        assert_eq!(summary.sha256, graph_hash(&g));
        assert_eq!(summary.meta.num_edges, g.num_edges());
    }

    #[test]
    fn micro_reports_placement_and_checksum() {
        let r = micro(&MicroConfig {
            bytes: 4 << 20,
            threads: 2,
            policy: Policy::Interleaved,
            page_size: PageSize::Small,
            sockets: 2,
            socket_capacity: 1 << 30,
            threads_per_socket: 1,
            out: None,
        })
        .unwrap();
        assert_eq!(r.timing.per_socket_bytes, [2 << 20, 2 << 20]);
        assert_eq!(r.ratio, Some(1.0));
        assert_eq!(r.page_plan.num_pages, 1024);
        let expected: u64 = (0..4u64 << 20).map(|i| fill_byte(i) as u64).sum();
        assert_eq!(r.checksum, expected);
    }
}
