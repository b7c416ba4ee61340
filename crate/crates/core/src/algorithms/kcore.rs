//! Fixed-k core by asynchronous data-driven peeling.
//!
//! Works on the simple undirected view. Nodes with degree below `k` seed the
//! worklist; removing a node decrements its neighbors' degrees and a
//! neighbor whose degree falls from `k` to `k - 1` is queued in turn.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::Instant;

use super::{RunStats, Runtime, Variant, Work};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::worklist::SparseWorklist;

pub const DEFAULT_K: u64 = 100;

pub fn kcore(graph: &Graph, k: u64, variant: Variant, rt: &Runtime) -> Result<(Vec<bool>, RunStats)> {
    if variant != Variant::PeelAsync {
        return Err(Error::InvalidParameter(format!("{variant} is not a kcore variant")));
    }
    let started = Instant::now();
    let view = graph.undirected_view();
    let n = view.num_nodes();
    let degree: Vec<AtomicU64> = (0..n).map(|u| AtomicU64::new(view.out_degree(u))).collect();
    let removed: Vec<AtomicBool> = (0..n).map(|_| AtomicBool::new(false)).collect();
    let worklist = SparseWorklist::new();
    for u in 0..n {
        if view.out_degree(u) < k {
            worklist.push(u);
        }
    }
    let per_worker = worklist.drain_with(rt.threads(), Work::default, |work, u, pusher| {
        if removed[u as usize].swap(true, Ordering::AcqRel) {
            return;
        }
        work.applications += 1;
        for &v in view.out_neighbors(u) {
            work.edges += 1;
            if !removed[v as usize].load(Ordering::Acquire)
                && degree[v as usize].fetch_sub(1, Ordering::AcqRel) == k
            {
                pusher.push(v);
            }
        }
    });
    let mut stats = RunStats::default();
    stats.record(per_worker.into_iter().map(|(_, w)| w).sum());
    stats.wall_ms = started.elapsed().as_secs_f64() * 1e3;
    let in_core = removed.into_iter().map(|r| !r.into_inner()).collect();
    Ok((in_core, stats))
}
