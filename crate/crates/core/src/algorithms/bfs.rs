//! Level-synchronous breadth-first search.
//!
//! `push_bsp_sparse` expands an explicit list of frontier nodes each round.
//! `direction_opt` starts the same way but switches to a pull step over a
//! bit-vector frontier once the frontier's out-edges make up a large share of
//! the graph, and back to push once the frontier shrinks.

use std::time::Instant;

use rayon::prelude::*;

use super::{check_source, LabelArray, RunStats, Runtime, Variant, Work, UNREACHED};
use crate::error::{Error, Result};
use crate::graph::{Csr, Graph, NodeId};
use crate::worklist::DenseFrontier;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DirectionOptParams {
    /// Switch to pull when the frontier's out-edges exceed `|E| / alpha`.
    pub alpha: u64,
    /// Switch back to push when the frontier holds fewer than `|V| / beta` nodes.
    pub beta: u64,
}

impl Default for DirectionOptParams {
    fn default() -> Self {
        Self { alpha: 15, beta: 18 }
    }
}

pub fn bfs(
    graph: &Graph,
    source: NodeId,
    variant: Variant,
    params: DirectionOptParams,
    rt: &Runtime,
) -> Result<(Vec<u64>, RunStats)> {
    check_source(graph, source)?;
    let started = Instant::now();
    let (dist, mut stats) = match variant {
        Variant::PushBspSparse => push_only(graph, source, rt),
        Variant::DirectionOpt => {
            let in_csr = graph.in_csr().ok_or(Error::MissingTranspose)?;
            if params.alpha == 0 || params.beta == 0 {
                return Err(Error::InvalidParameter("alpha and beta must be positive".into()));
            }
            direction_optimizing(graph, in_csr, source, params, rt)
        }
        other => return Err(Error::InvalidParameter(format!("{other} is not a bfs variant"))),
    };
    stats.wall_ms = started.elapsed().as_secs_f64() * 1e3;
    Ok((dist.into_vec(), stats))
}

/// One push round: claims unvisited out-neighbors of `frontier` at `level + 1`.
fn push_step(graph: &Graph, dist: &LabelArray, frontier: &[NodeId], level: u64, rt: &Runtime) -> (Vec<NodeId>, Work) {
    rt.install(|| {
        frontier
            .par_iter()
            .fold(
                || (Vec::new(), Work::default()),
                |(mut next, mut work), &u| {
                    work.applications += 1;
                    for &v in graph.out_neighbors(u) {
                        work.edges += 1;
                        if dist.claim(v, UNREACHED, level + 1) {
                            next.push(v);
                        }
                    }
                    (next, work)
                },
            )
            .reduce(
                || (Vec::new(), Work::default()),
                |(mut a, wa), (b, wb)| {
                    a.extend(b);
                    (a, wa + wb)
                },
            )
    })
}

fn push_only(graph: &Graph, source: NodeId, rt: &Runtime) -> (LabelArray, RunStats) {
    let mut dist = LabelArray::new(graph.num_nodes(), UNREACHED);
    dist.set(source, 0);
    let mut stats = RunStats::default();
    let mut frontier = vec![source];
    let mut level = 0;
    while !frontier.is_empty() {
        stats.start_round(frontier.len() as u64);
        let (next, work) = push_step(graph, &dist, &frontier, level, rt);
        stats.record(work);
        frontier = next;
        level += 1;
    }
    (dist, stats)
}

fn out_edge_sum(graph: &Graph, frontier: &[NodeId], rt: &Runtime) -> u64 {
    rt.install(|| frontier.par_iter().map(|&u| graph.out_degree(u)).sum())
}

/// One pull round: every unvisited node scans its in-edges for a parent in
/// the current frontier.
fn pull_step(in_csr: &Csr, dist: &LabelArray, frontier: &DenseFrontier, level: u64, rt: &Runtime) -> Work {
    let n = in_csr.num_nodes();
    rt.install(|| {
        (0..n)
            .into_par_iter()
            .filter(|&v| dist.get(v) == UNREACHED)
            .map(|v| {
                let mut work = Work {
                    applications: 1,
                    edges: 0,
                };
                for &u in in_csr.neighbors(v) {
                    work.edges += 1;
                    if frontier.contains(u) {
                        // only this task writes v's label
                        dist.claim(v, UNREACHED, level + 1);
                        frontier.activate(v);
                        break;
                    }
                }
                work
            })
            .sum()
    })
}

fn direction_optimizing(
    graph: &Graph,
    in_csr: &Csr,
    source: NodeId,
    params: DirectionOptParams,
    rt: &Runtime,
) -> (LabelArray, RunStats) {
    let n = graph.num_nodes();
    let pull_threshold = graph.num_edges() / params.alpha;
    let push_threshold = n / params.beta;
    let mut dist = LabelArray::new(n, UNREACHED);
    dist.set(source, 0);
    let mut stats = RunStats::default();
    let mut frontier = vec![source];
    let mut scout = graph.out_degree(source);
    let mut level = 0;
    while !frontier.is_empty() {
        if scout > pull_threshold {
            let mut dense = DenseFrontier::new(n);
            for &u in &frontier {
                dense.insert_current(u);
            }
            let mut size = frontier.len() as u64;
            loop {
                stats.start_round(size);
                stats.record(pull_step(in_csr, &dist, &dense, level, rt));
                size = dense.swap();
                level += 1;
                if size == 0 || size < push_threshold {
                    break;
                }
            }
            frontier = dense.iter().collect();
        } else {
            stats.start_round(frontier.len() as u64);
            let (next, work) = push_step(graph, &dist, &frontier, level, rt);
            stats.record(work);
            frontier = next;
            level += 1;
        }
        scout = out_edge_sum(graph, &frontier, rt);
    }
    (dist, stats)
}
