//! Single-source shortest paths over non-negative integer weights.
//!
//! * `delta_async`: asynchronous delta-stepping. Nodes sit in buckets of
//!   width `delta` by tentative distance and the bucketed worklist is
//!   drained to quiescence with no rounds.
//! * `data_driven_bsp`: bulk-synchronous rounds over a bit-vector frontier of
//!   nodes whose distance dropped in the previous round.
//! * `bellman_ford_topo`: topology-driven Bellman-Ford; every round relaxes
//!   the out-edges of every node using the distances of the previous round.

use std::time::Instant;

use rayon::prelude::*;

use super::{check_source, LabelArray, RunStats, Runtime, Variant, Work, UNREACHED};
use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId, Weight};
use crate::worklist::{BucketedWorklist, DenseFrontier};

/// `max(1, round(mean edge weight))`, or 1 for unweighted or edgeless graphs.
pub fn default_delta(graph: &Graph) -> u64 {
    graph.mean_weight().map_or(1, |mean| (mean.round() as u64).max(1))
}

pub fn sssp(graph: &Graph, source: NodeId, variant: Variant, delta: u64, rt: &Runtime) -> Result<(Vec<u64>, RunStats)> {
    check_source(graph, source)?;
    if !graph.is_weighted() {
        return Err(Error::MissingWeights);
    }
    let started = Instant::now();
    let (dist, mut stats) = match variant {
        Variant::DeltaAsync => {
            if delta == 0 {
                return Err(Error::InvalidParameter("delta must be at least 1".into()));
            }
            delta_async(graph, source, delta, rt)
        }
        Variant::DataDrivenBsp => data_driven_bsp(graph, source, rt),
        Variant::BellmanFordTopo => bellman_ford_topo(graph, source, rt),
        other => return Err(Error::InvalidParameter(format!("{other} is not an sssp variant"))),
    };
    stats.wall_ms = started.elapsed().as_secs_f64() * 1e3;
    Ok((dist.into_vec(), stats))
}

#[inline]
fn edges(graph: &Graph, u: NodeId) -> impl Iterator<Item = (NodeId, Weight)> + '_ {
    graph.out().weighted_neighbors(u).expect("weights checked on entry")
}

fn delta_async(graph: &Graph, source: NodeId, delta: u64, rt: &Runtime) -> (LabelArray, RunStats) {
    let mut dist = LabelArray::new(graph.num_nodes(), UNREACHED);
    dist.set(source, 0);
    let max_weight = graph.out().weights().and_then(|w| w.iter().max()).copied().unwrap_or(0) as u64;
    let worklist = BucketedWorklist::new().with_priority_bound((max_weight / delta) as usize + 1);
    worklist.push(source, 0);
    let per_worker = worklist.drain_with(rt.threads(), Work::default, |work, u, bucket, pusher| {
        let d = dist.get(u);
        // improved since it was queued here; the lower-bucket copy handles it
        if d / delta < bucket as u64 {
            return;
        }
        work.applications += 1;
        for (v, w) in edges(graph, u) {
            work.edges += 1;
            let candidate = d + w as u64;
            if dist.fetch_min(v, candidate) {
                pusher.push(v, (candidate / delta) as usize);
            }
        }
    });
    let mut stats = RunStats::default();
    stats.record(per_worker.into_iter().map(|(_, w)| w).sum());
    (dist, stats)
}

fn data_driven_bsp(graph: &Graph, source: NodeId, rt: &Runtime) -> (LabelArray, RunStats) {
    let n = graph.num_nodes();
    let mut dist = LabelArray::new(n, UNREACHED);
    dist.set(source, 0);
    let mut frontier = DenseFrontier::new(n);
    frontier.insert_current(source);
    let mut stats = RunStats::default();
    let mut size = 1;
    while size > 0 {
        stats.start_round(size);
        let active = &frontier;
        let work = rt.install(|| {
            (0..active.num_words())
                .into_par_iter()
                .map(|word| {
                    let mut work = Work::default();
                    for u in active.word_nodes(word) {
                        work.applications += 1;
                        let d = dist.get(u);
                        for (v, w) in edges(graph, u) {
                            work.edges += 1;
                            if dist.fetch_min(v, d + w as u64) {
                                active.activate(v);
                            }
                        }
                    }
                    work
                })
                .sum()
        });
        stats.record(work);
        size = frontier.swap();
    }
    (dist, stats)
}

fn bellman_ford_topo(graph: &Graph, source: NodeId, rt: &Runtime) -> (LabelArray, RunStats) {
    let n = graph.num_nodes();
    let mut dist = LabelArray::new(n, UNREACHED);
    dist.set(source, 0);
    let mut stats = RunStats::default();
    // with non-negative weights the distances settle within n - 1 rounds; the
    // n-th round only confirms nothing changes
    while stats.rounds < n {
        stats.start_round(n);
        let previous = dist.snapshot();
        let (changed, work) = rt.install(|| {
            (0..n)
                .into_par_iter()
                .map(|u| {
                    let mut work = Work {
                        applications: 1,
                        edges: 0,
                    };
                    let mut changed = false;
                    let d = previous[u as usize];
                    if d != UNREACHED {
                        for (v, w) in edges(graph, u) {
                            work.edges += 1;
                            changed |= dist.fetch_min(v, d + w as u64);
                        }
                    }
                    (changed, work)
                })
                .reduce(|| (false, Work::default()), |a, b| (a.0 | b.0, a.1 + b.1))
        });
        stats.record(work);
        if !changed {
            break;
        }
    }
    (dist, stats)
}
