//! Weakly connected components by bulk-synchronous label propagation.
//!
//! Every node starts labelled with its own id. Each round, the active nodes
//! push the label they held at the start of the round to all neighbors (both
//! edge directions); nodes whose label dropped become active next round. The
//! `label_prop_sc` variant follows every propagation round with a shortcut
//! pass that replaces each label by its label's label, a one-level jump.
//! Labels converge to the minimum id of each component.

use std::time::Instant;

use rayon::prelude::*;

use super::{LabelArray, RunStats, Runtime, Variant, Work};
use crate::error::{Error, Result};
use crate::graph::{Csr, Graph, NodeId};
use crate::worklist::DenseFrontier;

pub fn cc(graph: &Graph, variant: Variant, rt: &Runtime) -> Result<(Vec<u64>, RunStats)> {
    let shortcut = match variant {
        Variant::LabelPropBsp => false,
        Variant::LabelPropSc => true,
        other => return Err(Error::InvalidParameter(format!("{other} is not a cc variant"))),
    };
    let started = Instant::now();
    let in_edges = graph.in_edges();
    let (labels, mut stats) = label_propagation(graph.out(), &in_edges, shortcut, rt);
    stats.wall_ms = started.elapsed().as_secs_f64() * 1e3;
    Ok((labels.into_vec(), stats))
}

fn label_propagation(out: &Csr, inc: &Csr, shortcut: bool, rt: &Runtime) -> (LabelArray, RunStats) {
    let n = out.num_nodes();
    let labels = LabelArray::from_fn(n, |v| v);
    let mut frontier = DenseFrontier::full(n);
    let mut stats = RunStats::default();
    let mut size = n;
    while size > 0 {
        stats.start_round(size);
        let active = &frontier;
        let labels = &labels;
        // read every active label before any of them changes this round
        let pending: Vec<(NodeId, u64)> = rt.install(|| {
            (0..active.num_words())
                .into_par_iter()
                .flat_map_iter(|word| active.word_nodes(word).map(|u| (u, labels.get(u))))
                .collect()
        });
        let mut work: Work = rt.install(|| {
            pending
                .par_iter()
                .with_min_len(64)
                .map(|&(u, label)| {
                    let mut work = Work {
                        applications: 1,
                        edges: 0,
                    };
                    for &v in out.neighbors(u).iter().chain(inc.neighbors(u)) {
                        work.edges += 1;
                        if labels.fetch_min(v, label) {
                            active.activate(v);
                        }
                    }
                    work
                })
                .sum()
        });
        if shortcut {
            work = work
                + rt.install(|| {
                    (0..n)
                        .into_par_iter()
                        .map(|v| {
                            let label = labels.get(v);
                            let jumped = labels.get(label);
                            if jumped < label && labels.fetch_min(v, jumped) {
                                active.activate(v);
                            }
                            Work {
                                applications: 1,
                                edges: 0,
                            }
                        })
                        .sum()
                });
        }
        stats.record(work);
        size = frontier.swap();
    }
    (labels, stats)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::oracle_cc_unionfind;

    fn both(graph: &Graph, threads: usize) -> [(Vec<u64>, RunStats); 2] {
        let rt = Runtime::new(threads).unwrap();
        [Variant::LabelPropBsp, Variant::LabelPropSc].map(|v| cc(graph, v, &rt).unwrap())
    }

    #[test]
    fn triangle_and_edge() {
        let g = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 0), (4, 3)]).unwrap();
        for (labels, _) in both(&g, 2) {
            assert_eq!(labels, [0, 0, 0, 3, 3]);
        }
    }

    #[test]
    fn isolated_nodes() {
        let g = Graph::from_edges(4, &[]).unwrap();
        for (labels, stats) in both(&g, 1) {
            assert_eq!(labels, [0, 1, 2, 3]);
            assert_eq!(stats.rounds, 1);
        }
    }

    #[test]
    fn shortcut_saves_rounds_on_a_long_path() {
        // path 0 - 1 - ... - 63 with edges pointing toward 0
        let edges: Vec<_> = (1..64u64).map(|v| (v, v - 1)).collect();
        let g = Graph::from_edges(64, &edges).unwrap();
        let [(plain, plain_stats), (sc, sc_stats)] = both(&g, 1);
        assert_eq!(plain, vec![0; 64]);
        assert_eq!(sc, plain);
        assert_eq!(plain_stats.rounds, 64);
        assert!(sc_stats.rounds < plain_stats.rounds);
    }

    #[test]
    fn random_graph_matches_union_find() {
        let edges: Vec<_> = (0..300u64).map(|i| ((i * 37) % 500, (i * 91 + 7) % 500)).collect();
        let g = Graph::from_edges(500, &edges).unwrap();
        let expected = oracle_cc_unionfind(&g);
        for threads in [1, 4] {
            for (labels, _) in both(&g, threads) {
                assert_eq!(labels, expected);
            }
        }
    }

    #[test]
    fn rejects_other_variants() {
        let g = Graph::empty();
        assert!(cc(&g, Variant::Brandes, &Runtime::new(1).unwrap()).is_err());
    }
}
