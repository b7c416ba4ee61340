use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::{Graph, NodeId};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphMeta {
    pub num_nodes: u64,
    pub num_edges: u64,
    /// Smallest id among the nodes of maximum out-degree.
    pub max_out_degree_node: NodeId,
    pub max_out_degree: u64,
    pub max_in_degree: u64,
    /// Double-sweep BFS lower bound on the undirected diameter.
    pub estimated_diameter: u64,
}

/// Farthest node from `start` over the given adjacency and its distance;
/// ties go to the smallest id.
fn farthest(graph: &Graph, start: NodeId) -> (NodeId, u64) {
    let mut dist = vec![u64::MAX; graph.num_nodes() as usize];
    let mut queue = VecDeque::from([start]);
    dist[start as usize] = 0;
    let mut best = (start, 0);
    while let Some(u) = queue.pop_front() {
        let d = dist[u as usize];
        if d > best.1 || (d == best.1 && u < best.0) {
            best = (u, d);
        }
        for &v in graph.out_neighbors(u) {
            if dist[v as usize] == u64::MAX {
                dist[v as usize] = d + 1;
                queue.push_back(v);
            }
        }
    }
    best
}

pub fn compute_meta(graph: &Graph) -> GraphMeta {
    let n = graph.num_nodes();
    let (max_out_degree_node, max_out_degree) = (0..n)
        .map(|u| (u, graph.out_degree(u)))
        .fold((0, 0), |best, cur| if cur.1 > best.1 { cur } else { best });
    let max_in_degree = match graph.in_csr() {
        Some(t) => (0..n).map(|u| t.degree(u)).max().unwrap_or(0),
        None => {
            let mut indeg = vec![0u64; n as usize];
            for &d in graph.out().dests() {
                indeg[d as usize] += 1;
            }
            indeg.into_iter().max().unwrap_or(0)
        }
    };
    let estimated_diameter = if n == 0 {
        0
    } else {
        let undirected = graph.undirected_view();
        let (far, _) = farthest(&undirected, max_out_degree_node);
        farthest(&undirected, far).1
    };
    GraphMeta {
        num_nodes: n,
        num_edges: graph.num_edges(),
        max_out_degree_node,
        max_out_degree,
        max_in_degree,
        estimated_diameter,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn star() {
        let edges: Vec<_> = (1..10).map(|v| (0, v)).collect();
        let m = compute_meta(&Graph::from_edges(10, &edges).unwrap());
        assert_eq!((m.max_out_degree_node, m.max_out_degree), (0, 9));
        assert_eq!(m.max_in_degree, 1);
        assert_eq!(m.estimated_diameter, 2);
    }

    #[test]
    fn directed_path_diameter() {
        let edges: Vec<_> = (0..99).map(|v| (v, v + 1)).collect();
        let m = compute_meta(&Graph::from_edges(100, &edges).unwrap());
        assert_eq!(m.estimated_diameter, 99);
        assert_eq!(m.max_out_degree_node, 0);
    }

    #[test]
    fn ties_go_to_smallest_id() {
        let g = Graph::from_edges(4, &[(2, 0), (2, 1), (1, 0), (1, 3)]).unwrap();
        let m = compute_meta(&g);
        assert_eq!((m.max_out_degree_node, m.max_out_degree), (1, 2));
    }

    #[test]
    fn empty_graph() {
        let m = compute_meta(&Graph::empty());
        assert_eq!((m.num_nodes, m.max_out_degree, m.estimated_diameter), (0, 0, 0));
    }
}
