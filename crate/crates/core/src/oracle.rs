//! Sequential reference implementations.
//!
//! Each function here is single-threaded, deterministic and written for
//! obviousness rather than speed. They share no code with the parallel
//! algorithms they are used to check.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

use crate::algorithms::UNREACHED;
use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};

/// Largest graph [`oracle_tc`] accepts.
pub const ORACLE_TC_MAX_NODES: u64 = 1024;

/// Queue-based BFS hop distances; [`UNREACHED`] for unreachable nodes.
pub fn oracle_bfs(graph: &Graph, source: NodeId) -> Vec<u64> {
    let mut dist = vec![UNREACHED; graph.num_nodes() as usize];
    dist[source as usize] = 0;
    let mut queue = VecDeque::from([source]);
    while let Some(u) = queue.pop_front() {
        for &v in graph.out_neighbors(u) {
            if dist[v as usize] == UNREACHED {
                dist[v as usize] = dist[u as usize] + 1;
                queue.push_back(v);
            }
        }
    }
    dist
}

/// Binary-heap Dijkstra over the out-edge weights.
pub fn oracle_dijkstra(graph: &Graph, source: NodeId) -> Result<Vec<u64>> {
    let weights = graph.out().weights().ok_or(Error::MissingWeights)?;
    let mut dist = vec![UNREACHED; graph.num_nodes() as usize];
    dist[source as usize] = 0;
    let mut heap = BinaryHeap::from([Reverse((0u64, source))]);
    while let Some(Reverse((d, u))) = heap.pop() {
        if d > dist[u as usize] {
            continue;
        }
        for i in graph.out().range(u) {
            let v = graph.out().dests()[i] as usize;
            let candidate = d + weights[i] as u64;
            if candidate < dist[v] {
                dist[v] = candidate;
                heap.push(Reverse((candidate, v as NodeId)));
            }
        }
    }
    Ok(dist)
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut root = x;
    while parent[root] != root {
        root = parent[root];
    }
    let mut cur = x;
    while parent[cur] != root {
        let next = parent[cur];
        parent[cur] = root;
        cur = next;
    }
    root
}

/// Weakly connected components by union-find; each node is labelled with
/// the smallest id in its component.
pub fn oracle_cc_unionfind(graph: &Graph) -> Vec<u64> {
    let n = graph.num_nodes() as usize;
    let mut parent: Vec<usize> = (0..n).collect();
    for u in 0..n {
        for &v in graph.out_neighbors(u as NodeId) {
            let (ru, rv) = (find(&mut parent, u), find(&mut parent, v as usize));
            if ru != rv {
                // keep the smaller id as root so roots are component minima
                let (lo, hi) = if ru < rv { (ru, rv) } else { (rv, ru) };
                parent[hi] = lo;
            }
        }
    }
    (0..n).map(|v| find(&mut parent, v) as u64).collect()
}

/// Dense power iteration starting from the uniform vector `1/n`, with
/// dangling mass spread uniformly. Runs exactly `iterations` steps.
pub fn oracle_pagerank_power(graph: &Graph, damping: f64, iterations: usize) -> Vec<f64> {
    let n = graph.num_nodes() as usize;
    if n == 0 {
        return Vec::new();
    }
    let nf = n as f64;
    let mut rank = vec![1.0 / nf; n];
    for _ in 0..iterations {
        let mut next = vec![0.0; n];
        let mut dangling = 0.0;
        for (u, &r) in rank.iter().enumerate() {
            let deg = graph.out_degree(u as NodeId);
            if deg == 0 {
                dangling += r;
                continue;
            }
            let share = r / deg as f64;
            for &v in graph.out_neighbors(u as NodeId) {
                next[v as usize] += share;
            }
        }
        for value in next.iter_mut() {
            *value = (1.0 - damping) / nf + damping * (*value + dangling / nf);
        }
        rank = next;
    }
    rank
}

/// Fixed-k core of the simple undirected view by repeated full scans.
pub fn oracle_kcore(graph: &Graph, k: u64) -> Vec<bool> {
    let undirected = graph.to_undirected();
    let n = undirected.num_nodes() as usize;
    let mut alive = vec![true; n];
    loop {
        let mut changed = false;
        for v in 0..n {
            if !alive[v] {
                continue;
            }
            let live_degree = undirected
                .out_neighbors(v as NodeId)
                .iter()
                .filter(|&&u| alive[u as usize])
                .count() as u64;
            if live_degree < k {
                alive[v] = false;
                changed = true;
            }
        }
        if !changed {
            return alive;
        }
    }
}

/// Textbook single-source Brandes dependency accumulation over out-edges.
pub fn oracle_bc_seq(graph: &Graph, source: NodeId) -> Vec<f64> {
    let n = graph.num_nodes() as usize;
    let mut sigma = vec![0.0f64; n];
    let mut dist = vec![-1i64; n];
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut stack = Vec::with_capacity(n);
    let mut queue = VecDeque::new();
    sigma[source as usize] = 1.0;
    dist[source as usize] = 0;
    queue.push_back(source as usize);
    while let Some(v) = queue.pop_front() {
        stack.push(v);
        for &w in graph.out_neighbors(v as NodeId) {
            let w = w as usize;
            if dist[w] < 0 {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
            if dist[w] == dist[v] + 1 {
                sigma[w] += sigma[v];
                preds[w].push(v);
            }
        }
    }
    let mut delta = vec![0.0f64; n];
    while let Some(w) = stack.pop() {
        for &v in &preds[w] {
            delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
        }
    }
    delta[source as usize] = 0.0;
    delta
}

/// Triangles of the simple undirected view by checking every node triple.
///
/// # Panics
/// When the graph has more than [`ORACLE_TC_MAX_NODES`] nodes.
pub fn oracle_tc(graph: &Graph) -> u64 {
    let n = graph.num_nodes();
    assert!(n <= ORACLE_TC_MAX_NODES, "oracle_tc is limited to {ORACLE_TC_MAX_NODES} nodes, got {n}");
    let n = n as usize;
    let mut adjacent = vec![false; n * n];
    for u in 0..n {
        for &v in graph.out_neighbors(u as NodeId) {
            let v = v as usize;
            if u != v {
                adjacent[u * n + v] = true;
                adjacent[v * n + u] = true;
            }
        }
    }
    let mut count = 0;
    for i in 0..n {
        for j in i + 1..n {
            if !adjacent[i * n + j] {
                continue;
            }
            for k in j + 1..n {
                if adjacent[i * n + k] && adjacent[j * n + k] {
                    count += 1;
                }
            }
        }
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain(n: u64) -> Graph {
        let edges: Vec<_> = (0..n - 1).map(|i| (i, i + 1)).collect();
        Graph::from_edges(n, &edges).unwrap()
    }

    #[test]
    fn bfs_chain_and_unreachable() {
        assert_eq!(oracle_bfs(&chain(5), 0), [0, 1, 2, 3, 4]);
        let g = Graph::from_edges(3, &[(0, 1)]).unwrap();
        assert_eq!(oracle_bfs(&g, 0), [0, 1, UNREACHED]);
    }

    #[test]
    fn dijkstra_hand_trace() {
        let g = Graph::from_weighted_edges(4, &[(0, 1, 5), (0, 2, 1), (2, 1, 1), (1, 3, 2), (2, 3, 7)]).unwrap();
        assert_eq!(oracle_dijkstra(&g, 0).unwrap(), [0, 2, 1, 4]);
        let single = Graph::from_weighted_edges(1, &[]).unwrap();
        assert_eq!(oracle_dijkstra(&single, 0).unwrap(), [0]);
        assert!(matches!(oracle_dijkstra(&chain(3), 0), Err(Error::MissingWeights)));
    }

    #[test]
    fn dijkstra_unit_weights_is_bfs() {
        let g = Graph::from_edges(6, &[(0, 1), (0, 2), (1, 3), (2, 3), (3, 4), (5, 0)]).unwrap();
        let unit = g.clone().assign_random_weights(0, 1).unwrap();
        assert_eq!(oracle_dijkstra(&unit, 0).unwrap(), oracle_bfs(&g, 0));
    }

    #[test]
    fn cc_min_labels() {
        let g = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 0), (4, 3)]).unwrap();
        assert_eq!(oracle_cc_unionfind(&g), [0, 0, 0, 3, 3]);
        assert!(oracle_cc_unionfind(&Graph::empty()).is_empty());
    }

    #[test]
    fn pagerank_cycle_is_uniform() {
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let r = oracle_pagerank_power(&g, 0.85, 50);
        assert!(r.iter().all(|&x| (x - 0.25).abs() < 1e-12));
    }

    #[test]
    fn kcore_small_cases() {
        let triangle = Graph::from_edges(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(oracle_kcore(&triangle, 2), [true; 3]);
        assert_eq!(oracle_kcore(&chain(3), 2), [false; 3]);
    }

    #[test]
    fn bc_path_and_star() {
        assert_eq!(oracle_bc_seq(&chain(3), 0), [0.0, 1.0, 0.0]);
        let star = Graph::from_edges(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
        assert_eq!(oracle_bc_seq(&star, 0), [0.0; 5]);
    }

    #[test]
    fn tc_k4_and_tree() {
        let mut edges = Vec::new();
        for u in 0..4 {
            for v in 0..4 {
                if u != v {
                    edges.push((u, v));
                }
            }
        }
        assert_eq!(oracle_tc(&Graph::from_edges(4, &edges).unwrap()), 4);
        assert_eq!(oracle_tc(&chain(10)), 0);
    }

    #[test]
    #[should_panic(expected = "limited to 1024")]
    fn tc_guard() {
        oracle_tc(&Graph::from_edges(1025, &[]).unwrap());
    }
}
