//! Immutable compressed-sparse-row graphs.
//!
//! A [`Graph`] always holds its out-edges and may additionally hold the
//! transposed (in-edge) CSR for variants that pull or traverse both
//! directions. Adjacency lists are sorted ascending by destination on every
//! construction path, which the triangle counter and the binary-search
//! helpers rely on.

mod csr_bin;
mod edge_list;
mod meta;
mod rmat;

use std::borrow::Cow;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

pub use csr_bin::{load_csr_bin, write_csr_bin, CSR_BIN_HEADER_BYTES, CSR_BIN_VERSION};
pub use edge_list::{ingest_edge_list, parse_edge_list};
pub use meta::{compute_meta, GraphMeta};
pub use rmat::{generate_rmat, RmatParams, GRAPH500_PROBS};

pub type NodeId = u64;
pub type Weight = u32;

/// Default upper bound for generated edge weights.
pub const DEFAULT_MAX_WEIGHT: Weight = 255;

/// One direction of a graph in CSR layout.
///
/// `offsets` has `num_nodes + 1` entries starting at zero; the neighbors of
/// `u` are `dests[offsets[u]..offsets[u + 1]]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Csr {
    offsets: Vec<u64>,
    dests: Vec<NodeId>,
    weights: Option<Vec<Weight>>,
}

impl Csr {
    /// Builds a CSR from raw arrays, checking well-formedness and sorting
    /// each adjacency list (weights move with their destinations).
    pub fn new(offsets: Vec<u64>, dests: Vec<NodeId>, weights: Option<Vec<Weight>>) -> Result<Self> {
        let mut csr = Self::from_parts_unsorted(offsets, dests, weights)?;
        csr.sort_adjacency();
        Ok(csr)
    }

    /// Like [`Csr::new`] but leaves adjacency order untouched.
    ///
    /// Algorithms that need sorted lists check for it and report
    /// [`Error::UnsortedAdjacency`].
    pub fn from_parts_unsorted(
        offsets: Vec<u64>,
        dests: Vec<NodeId>,
        weights: Option<Vec<Weight>>,
    ) -> Result<Self> {
        if offsets.is_empty() {
            return Err(Error::InvalidCsr("offsets must have num_nodes + 1 entries".into()));
        }
        if offsets[0] != 0 {
            return Err(Error::InvalidCsr(format!("offsets[0] = {}, expected 0", offsets[0])));
        }
        if let Some(i) = offsets.windows(2).position(|w| w[0] > w[1]) {
            return Err(Error::InvalidCsr(format!("offsets decrease at node {i}")));
        }
        let num_edges = *offsets.last().unwrap();
        if num_edges != dests.len() as u64 {
            return Err(Error::InvalidCsr(format!(
                "offsets end at {num_edges} but {} destinations given",
                dests.len()
            )));
        }
        let num_nodes = offsets.len() as u64 - 1;
        if let Some(&d) = dests.iter().find(|&&d| d >= num_nodes) {
            return Err(Error::InvalidCsr(format!(
                "destination {d} out of range for {num_nodes} nodes"
            )));
        }
        if let Some(w) = &weights {
            if w.len() != dests.len() {
                return Err(Error::InvalidCsr(format!(
                    "{} weights for {} edges",
                    w.len(),
                    dests.len()
                )));
            }
        }
        Ok(Self { offsets, dests, weights })
    }

    fn sort_adjacency(&mut self) {
        for u in 0..self.num_nodes() {
            let range = self.range(u);
            match &mut self.weights {
                None => self.dests[range].sort_unstable(),
                Some(weights) => {
                    let dests = &mut self.dests[range.clone()];
                    if dests.windows(2).all(|w| w[0] <= w[1]) {
                        continue;
                    }
                    let mut pairs: Vec<_> = dests
                        .iter()
                        .copied()
                        .zip(weights[range.clone()].iter().copied())
                        .collect();
                    pairs.sort_unstable();
                    for (i, (d, w)) in pairs.into_iter().enumerate() {
                        dests[i] = d;
                        weights[range.start + i] = w;
                    }
                }
            }
        }
    }

    /// Counting-sort construction from an edge list.
    ///
    /// Adjacency lists come out sorted by destination; with `dedupe`, parallel
    /// edges collapse to one carrying the minimum weight.
    pub fn from_edges(num_nodes: u64, edges: &[(NodeId, NodeId, Weight)], weighted: bool, dedupe: bool) -> Result<Self> {
        let n = num_nodes as usize;
        let mut degree = vec![0u64; n + 1];
        for &(src, dst, _) in edges {
            if src >= num_nodes || dst >= num_nodes {
                return Err(Error::InvalidCsr(format!(
                    "edge ({src}, {dst}) out of range for {num_nodes} nodes"
                )));
            }
            degree[src as usize + 1] += 1;
        }
        for i in 0..n {
            degree[i + 1] += degree[i];
        }
        let mut cursor = degree.clone();
        let mut slots = vec![(0, 0); edges.len()];
        for &(src, dst, w) in edges {
            let pos = &mut cursor[src as usize];
            slots[*pos as usize] = (dst, w);
            *pos += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        let mut dests = Vec::with_capacity(edges.len());
        let mut weights = Vec::with_capacity(if weighted { edges.len() } else { 0 });
        offsets.push(0);
        for u in 0..n {
            let list = &mut slots[degree[u] as usize..degree[u + 1] as usize];
            list.sort_unstable();
            let mut last = None;
            for &(d, w) in list.iter() {
                // sorted by (dest, weight): the first copy of a dest has the minimum weight
                if dedupe && last == Some(d) {
                    continue;
                }
                last = Some(d);
                dests.push(d);
                if weighted {
                    weights.push(w);
                }
            }
            offsets.push(dests.len() as u64);
        }
        Ok(Self {
            offsets,
            dests,
            weights: weighted.then_some(weights),
        })
    }

    pub fn num_nodes(&self) -> u64 {
        self.offsets.len() as u64 - 1
    }

    pub fn num_edges(&self) -> u64 {
        self.dests.len() as u64
    }

    #[inline]
    pub fn range(&self, u: NodeId) -> std::ops::Range<usize> {
        self.offsets[u as usize] as usize..self.offsets[u as usize + 1] as usize
    }

    #[inline]
    pub fn degree(&self, u: NodeId) -> u64 {
        self.offsets[u as usize + 1] - self.offsets[u as usize]
    }

    #[inline]
    pub fn neighbors(&self, u: NodeId) -> &[NodeId] {
        &self.dests[self.range(u)]
    }

    /// Neighbors paired with edge weights; `None` for unweighted graphs.
    #[inline]
    pub fn weighted_neighbors(&self, u: NodeId) -> Option<impl Iterator<Item = (NodeId, Weight)> + '_> {
        let range = self.range(u);
        self.weights
            .as_ref()
            .map(|w| self.dests[range.clone()].iter().copied().zip(w[range].iter().copied()))
    }

    pub fn offsets(&self) -> &[u64] {
        &self.offsets
    }

    pub fn dests(&self) -> &[NodeId] {
        &self.dests
    }

    pub fn weights(&self) -> Option<&[Weight]> {
        self.weights.as_deref()
    }

    pub fn is_sorted(&self) -> bool {
        (0..self.num_nodes()).all(|u| self.neighbors(u).windows(2).all(|w| w[0] <= w[1]))
    }

    /// First node whose adjacency list is out of order.
    pub fn first_unsorted(&self) -> Option<NodeId> {
        (0..self.num_nodes()).find(|&u| self.neighbors(u).windows(2).any(|w| w[0] > w[1]))
    }

    /// Transposed CSR: for every edge `(u, v)` the result holds `(v, u)`.
    pub fn transpose(&self) -> Csr {
        let n = self.num_nodes() as usize;
        let mut offsets = vec![0u64; n + 1];
        for &d in &self.dests {
            offsets[d as usize + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let mut cursor = offsets.clone();
        let mut dests = vec![0; self.dests.len()];
        let mut weights = self.weights.as_ref().map(|_| vec![0; self.dests.len()]);
        // sources are visited in ascending order, so each in-list comes out sorted
        for u in 0..n as u64 {
            for i in self.range(u) {
                let v = self.dests[i] as usize;
                let pos = cursor[v] as usize;
                dests[pos] = u;
                if let (Some(out), Some(inw)) = (&self.weights, weights.as_mut()) {
                    inw[pos] = out[i];
                }
                cursor[v] += 1;
            }
        }
        Csr { offsets, dests, weights }
    }

    fn memory_bytes(&self) -> u64 {
        self.offsets.len() as u64 * 8
            + self.dests.len() as u64 * 8
            + self.weights.as_ref().map_or(0, |w| w.len() as u64 * 4)
    }
}

/// A directed graph: out-edges plus an optional transposed copy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    out: Csr,
    in_csr: Option<Csr>,
}

impl Graph {
    pub fn from_csr(out: Csr) -> Self {
        Self { out, in_csr: None }
    }

    /// Validating constructor over raw arrays; sorts adjacency lists.
    pub fn new(offsets: Vec<u64>, dests: Vec<NodeId>, weights: Option<Vec<Weight>>) -> Result<Self> {
        Csr::new(offsets, dests, weights).map(Self::from_csr)
    }

    /// Graph with `num_nodes` nodes and the given unweighted edges.
    pub fn from_edges(num_nodes: u64, edges: &[(NodeId, NodeId)]) -> Result<Self> {
        let triples: Vec<_> = edges.iter().map(|&(u, v)| (u, v, 0)).collect();
        Csr::from_edges(num_nodes, &triples, false, false).map(Self::from_csr)
    }

    /// Graph with `num_nodes` nodes and the given weighted edges.
    pub fn from_weighted_edges(num_nodes: u64, edges: &[(NodeId, NodeId, Weight)]) -> Result<Self> {
        Csr::from_edges(num_nodes, edges, true, false).map(Self::from_csr)
    }

    pub fn empty() -> Self {
        Self::from_csr(Csr {
            offsets: vec![0],
            dests: Vec::new(),
            weights: None,
        })
    }

    pub fn num_nodes(&self) -> u64 {
        self.out.num_nodes()
    }

    pub fn num_edges(&self) -> u64 {
        self.out.num_edges()
    }

    pub fn out(&self) -> &Csr {
        &self.out
    }

    pub fn in_csr(&self) -> Option<&Csr> {
        self.in_csr.as_ref()
    }

    pub fn is_weighted(&self) -> bool {
        self.out.weights.is_some()
    }

    #[inline]
    pub fn out_degree(&self, u: NodeId) -> u64 {
        self.out.degree(u)
    }

    #[inline]
    pub fn out_neighbors(&self, u: NodeId) -> &[NodeId] {
        self.out.neighbors(u)
    }

    /// Populates the in-edge CSR. A no-op when it is already present.
    pub fn build_transpose(mut self) -> Self {
        if self.in_csr.is_none() {
            self.in_csr = Some(self.out.transpose());
        }
        self
    }

    /// Drops the in-edge CSR.
    pub fn without_transpose(mut self) -> Self {
        self.in_csr = None;
        self
    }

    /// The graph with every edge reversed (its out-edges are our in-edges).
    pub fn reversed(&self) -> Graph {
        let reversed_out = self.in_csr.clone().unwrap_or_else(|| self.out.transpose());
        Graph {
            out: reversed_out,
            in_csr: self.in_csr.as_ref().map(|_| self.out.clone()),
        }
    }

    /// In-edges, borrowed when present and computed otherwise.
    pub fn in_edges(&self) -> Cow<'_, Csr> {
        match &self.in_csr {
            Some(csr) => Cow::Borrowed(csr),
            None => Cow::Owned(self.out.transpose()),
        }
    }

    /// Simple undirected view: both directions of every edge, no parallel
    /// edges, no self-loops. Weights are dropped.
    pub fn to_undirected(&self) -> Graph {
        let mut edges = Vec::with_capacity(2 * self.num_edges() as usize);
        for u in 0..self.num_nodes() {
            for &v in self.out_neighbors(u) {
                if u != v {
                    edges.push((u, v, 0));
                    edges.push((v, u, 0));
                }
            }
        }
        let csr = Csr::from_edges(self.num_nodes(), &edges, false, true).expect("ids already validated");
        Graph::from_csr(csr)
    }

    /// True when every edge has its reverse, there are no self-loops and no
    /// parallel edges. Requires sorted adjacency.
    pub fn is_simple_undirected(&self) -> bool {
        (0..self.num_nodes()).all(|u| {
            let list = self.out_neighbors(u);
            list.windows(2).all(|w| w[0] < w[1])
                && list
                    .iter()
                    .all(|&v| v != u && self.out_neighbors(v).binary_search(&u).is_ok())
        })
    }

    /// The simple undirected view, borrowing `self` when it already is one.
    pub fn undirected_view(&self) -> Cow<'_, Graph> {
        if self.is_simple_undirected() {
            Cow::Borrowed(self)
        } else {
            Cow::Owned(self.to_undirected())
        }
    }

    /// Bytes held by the CSR arrays of the directions currently allocated.
    pub fn memory_bytes(&self) -> u64 {
        self.out.memory_bytes() + self.in_csr.as_ref().map_or(0, Csr::memory_bytes)
    }

    /// Replaces the weights with uniform draws from `[1, max_weight]`.
    ///
    /// Deterministic per seed; the transpose, when present, is rebuilt so its
    /// weights stay aligned.
    pub fn assign_random_weights(self, seed: u64, max_weight: Weight) -> Result<Graph> {
        if max_weight == 0 {
            return Err(Error::InvalidParameter("max_weight must be at least 1".into()));
        }
        let had_transpose = self.in_csr.is_some();
        let mut out = self.out;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        out.weights = Some((0..out.dests.len()).map(|_| rng.gen_range(1..=max_weight)).collect());
        let graph = Graph::from_csr(out);
        Ok(if had_transpose { graph.build_transpose() } else { graph })
    }

    /// Sum of all edge weights divided by the edge count, if weighted.
    pub fn mean_weight(&self) -> Option<f64> {
        let w = self.out.weights()?;
        if w.is_empty() {
            return Some(0.0);
        }
        Some(w.iter().map(|&x| x as f64).sum::<f64>() / w.len() as f64)
    }
}

/// Free-function form of [`Graph::build_transpose`].
pub fn build_transpose(graph: Graph) -> Graph {
    graph.build_transpose()
}

/// Free-function form of [`Graph::assign_random_weights`].
pub fn assign_random_weights(graph: Graph, seed: u64, max_weight: Weight) -> Result<Graph> {
    graph.assign_random_weights(seed, max_weight)
}
