//! Topology-driven pull PageRank.
//!
//! Ranks start uniform at `1/n` and every round each node gathers
//! `rank(u) / outdeg(u)` over its in-edges. Mass held by nodes without
//! out-edges is spread uniformly, so the ranks keep summing to one. The run
//! stops once the L1 change of a round drops below the tolerance or after
//! `max_rounds` rounds.

use std::time::Instant;

use rayon::prelude::*;

use super::{RunStats, Runtime, Work};
use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PageRankParams {
    pub tolerance: f64,
    pub max_rounds: u64,
    pub damping: f64,
}

impl Default for PageRankParams {
    fn default() -> Self {
        Self {
            tolerance: 1e-6,
            max_rounds: 100,
            damping: 0.85,
        }
    }
}

pub fn pagerank(graph: &Graph, params: PageRankParams, rt: &Runtime) -> Result<(Vec<f64>, RunStats)> {
    let in_csr = graph.in_csr().ok_or(Error::MissingTranspose)?;
    if !(0.0..=1.0).contains(&params.damping) {
        return Err(Error::InvalidParameter(format!("damping {} outside [0, 1]", params.damping)));
    }
    if params.tolerance.is_nan() || params.tolerance < 0.0 {
        return Err(Error::InvalidParameter("tolerance must be non-negative".into()));
    }
    let started = Instant::now();
    let n = graph.num_nodes();
    let mut stats = RunStats::default();
    if n == 0 {
        return Ok((Vec::new(), stats));
    }
    let nf = n as f64;
    let damping = params.damping;
    let mut rank = vec![1.0 / nf; n as usize];
    let mut contribution = vec![0.0; n as usize];
    while stats.rounds < params.max_rounds {
        stats.start_round(n);
        let dangling: f64 = rt.install(|| {
            contribution
                .par_iter_mut()
                .zip(rank.par_iter())
                .enumerate()
                .map(|(u, (share, &r))| {
                    let degree = graph.out_degree(u as u64);
                    if degree == 0 {
                        *share = 0.0;
                        r
                    } else {
                        *share = r / degree as f64;
                        0.0
                    }
                })
                .sum()
        });
        let base = (1.0 - damping) / nf + damping * dangling / nf;
        let next: Vec<f64> = rt.install(|| {
            (0..n)
                .into_par_iter()
                .map(|v| base + damping * in_csr.neighbors(v).iter().map(|&u| contribution[u as usize]).sum::<f64>())
                .collect()
        });
        let change: f64 = rt.install(|| next.par_iter().zip(rank.par_iter()).map(|(a, b)| (a - b).abs()).sum());
        stats.record(Work {
            applications: n,
            edges: in_csr.num_edges(),
        });
        rank = next;
        if change < params.tolerance {
            break;
        }
    }
    stats.wall_ms = started.elapsed().as_secs_f64() * 1e3;
    Ok((rank, stats))
}
