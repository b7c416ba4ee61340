//! Single-source betweenness dependencies (Brandes).
//!
//! A level-synchronous forward sweep records BFS levels and shortest-path
//! counts; a backward sweep over the levels, deepest first, accumulates
//! `delta(v) = sum over successors w of sigma(v) / sigma(w) * (1 + delta(w))`
//! by pulling from out-neighbors one level down.

use std::sync::atomic::{AtomicU64, Ordering};
use std::time::Instant;

use rayon::prelude::*;

use super::{check_source, LabelArray, RunStats, Runtime, Variant, Work, UNREACHED};
use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};

fn add_f64(slot: &AtomicU64, value: f64) {
    let mut current = slot.load(Ordering::Relaxed);
    loop {
        let next = (f64::from_bits(current) + value).to_bits();
        match slot.compare_exchange_weak(current, next, Ordering::AcqRel, Ordering::Relaxed) {
            Ok(_) => return,
            Err(seen) => current = seen,
        }
    }
}

pub fn bc(graph: &Graph, source: NodeId, variant: Variant, rt: &Runtime) -> Result<(Vec<f64>, RunStats)> {
    if variant != Variant::Brandes {
        return Err(Error::InvalidParameter(format!("{variant} is not a bc variant")));
    }
    check_source(graph, source)?;
    let started = Instant::now();
    let n = graph.num_nodes();
    let mut stats = RunStats::default();

    let mut dist = LabelArray::new(n, UNREACHED);
    dist.set(source, 0);
    // path counts are integers; f64 keeps them exact up to 2^53
    let sigma: Vec<AtomicU64> = (0..n).map(|_| AtomicU64::new(0f64.to_bits())).collect();
    sigma[source as usize].store(1f64.to_bits(), Ordering::Relaxed);
    let mut levels = vec![vec![source]];
    loop {
        let depth = levels.len() as u64 - 1;
        let current = levels.last().unwrap();
        stats.start_round(current.len() as u64);
        let (next, work) = rt.install(|| {
            current
                .par_iter()
                .fold(
                    || (Vec::new(), Work::default()),
                    |(mut next, mut work), &u| {
                        work.applications += 1;
                        let paths = f64::from_bits(sigma[u as usize].load(Ordering::Relaxed));
                        for &v in graph.out_neighbors(u) {
                            work.edges += 1;
                            if dist.claim(v, UNREACHED, depth + 1) {
                                next.push(v);
                            }
                            if dist.get(v) == depth + 1 {
                                add_f64(&sigma[v as usize], paths);
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
        });
        stats.record(work);
        if next.is_empty() {
            break;
        }
        levels.push(next);
    }

    let sigma: Vec<f64> = sigma.into_iter().map(|s| f64::from_bits(s.into_inner())).collect();
    let dist = dist.into_vec();
    let mut delta = vec![0.0f64; n as usize];
    for (depth, level) in levels.iter().enumerate().rev().skip(1) {
        let below = depth as u64 + 1;
        let updates: Vec<(f64, Work)> = rt.install(|| {
            level
                .par_iter()
                .map(|&v| {
                    let mut work = Work {
                        applications: 1,
                        edges: 0,
                    };
                    let mut acc = 0.0;
                    for &w in graph.out_neighbors(v) {
                        work.edges += 1;
                        if dist[w as usize] == below {
                            acc += sigma[v as usize] / sigma[w as usize] * (1.0 + delta[w as usize]);
                        }
                    }
                    (acc, work)
                })
                .collect()
        });
        for (&v, (acc, work)) in level.iter().zip(updates) {
            delta[v as usize] = acc;
            stats.record(work);
        }
    }
    delta[source as usize] = 0.0;
    stats.wall_ms = started.elapsed().as_secs_f64() * 1e3;
    Ok((delta, stats))
}
