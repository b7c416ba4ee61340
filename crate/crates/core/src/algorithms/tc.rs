//! Exact triangle counting on the simple undirected view.
//!
//! Each edge is oriented from the lower to the higher node in (degree, id)
//! order, which bounds every oriented list by the square root of the edge
//! count. A triangle is then counted once, at its lowest-ranked node, by
//! merging two sorted oriented lists.

use std::time::Instant;

use rayon::prelude::*;

use super::{RunStats, Runtime, Variant, Work};
use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};

fn intersect_sorted(a: &[NodeId], b: &[NodeId]) -> (u64, u64) {
    let (mut i, mut j, mut common, mut steps) = (0, 0, 0, 0);
    while i < a.len() && j < b.len() {
        steps += 1;
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                common += 1;
                i += 1;
                j += 1;
            }
        }
    }
    (common, steps)
}

pub fn tc(graph: &Graph, variant: Variant, rt: &Runtime) -> Result<(u64, RunStats)> {
    if variant != Variant::DegreeOrdered {
        return Err(Error::InvalidParameter(format!("{variant} is not a tc variant")));
    }
    if let Some(u) = graph.out().first_unsorted() {
        return Err(Error::UnsortedAdjacency(u));
    }
    let started = Instant::now();
    let view = graph.undirected_view();
    let n = view.num_nodes();
    let rank = |u: NodeId| (view.out_degree(u), u);

    let oriented: Vec<Vec<NodeId>> = rt.install(|| {
        (0..n)
            .into_par_iter()
            .map(|u| view.out_neighbors(u).iter().copied().filter(|&v| rank(v) > rank(u)).collect())
            .collect()
    });
    let (count, work) = rt.install(|| {
        (0..n as usize)
            .into_par_iter()
            .map(|u| {
                let mine = &oriented[u];
                let mut work = Work {
                    applications: 1,
                    edges: 0,
                };
                let mut count = 0;
                for &v in mine {
                    let (common, steps) = intersect_sorted(mine, &oriented[v as usize]);
                    count += common;
                    work.edges += steps.max(1);
                }
                (count, work)
            })
            .reduce(|| (0, Work::default()), |a, b| (a.0 + b.0, a.1 + b.1))
    });
    let mut stats = RunStats::default();
    stats.record(work);
    stats.wall_ms = started.elapsed().as_secs_f64() * 1e3;
    Ok((count, stats))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Csr;
    use crate::oracle::oracle_tc;

    fn run(graph: &Graph) -> u64 {
        tc(graph, Variant::DegreeOrdered, &Runtime::new(2).unwrap()).unwrap().0
    }

    #[test]
    fn complete_graphs() {
        for k in 3..8u64 {
            let mut edges = Vec::new();
            for u in 0..k {
                for v in u + 1..k {
                    edges.push((u, v));
                }
            }
            let g = Graph::from_edges(k, &edges).unwrap();
            assert_eq!(run(&g), k * (k - 1) * (k - 2) / 6);
        }
    }

    #[test]
    fn trees_have_none() {
        let edges: Vec<_> = (1..50u64).map(|v| (v / 2, v)).collect();
        assert_eq!(run(&Graph::from_edges(50, &edges).unwrap()), 0);
    }

    #[test]
    fn loops_and_duplicates_ignored() {
        let g = Graph::from_edges(3, &[(0, 1), (1, 0), (1, 2), (2, 0), (2, 2), (0, 1)]).unwrap();
        assert_eq!(run(&g), 1);
        assert_eq!(oracle_tc(&g), 1);
    }

    #[test]
    fn unsorted_adjacency_is_rejected() {
        let csr = Csr::from_parts_unsorted(vec![0, 2, 2, 2], vec![2, 1], None).unwrap();
        let g = Graph::from_csr(csr);
        assert!(matches!(
            tc(&g, Variant::DegreeOrdered, &Runtime::new(1).unwrap()),
            Err(Error::UnsortedAdjacency(0))
        ));
    }
}
