use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{Csr, Graph, NodeId};
use crate::error::{Error, Result};

/// Quadrant probabilities (a, b, c, d) used by graph500.
pub const GRAPH500_PROBS: [f64; 4] = [0.57, 0.19, 0.19, 0.05];

const MAX_SCALE: u32 = 32;

#[derive(Clone, Debug, PartialEq)]
pub struct RmatParams {
    pub scale: u32,
    pub edge_factor: u64,
    pub probs: [f64; 4],
    pub seed: u64,
}

impl RmatParams {
    pub fn graph500(scale: u32, edge_factor: u64, seed: u64) -> Self {
        Self {
            scale,
            edge_factor,
            probs: GRAPH500_PROBS,
            seed,
        }
    }

    pub fn num_nodes(&self) -> u64 {
        1u64 << self.scale
    }

    /// Edge samples drawn before self-loop removal and deduplication.
    pub fn num_samples(&self) -> u64 {
        self.edge_factor << self.scale
    }

    fn validate(&self) -> Result<()> {
        if self.scale > MAX_SCALE {
            return Err(Error::ScaleTooLarge(self.scale));
        }
        let sum: f64 = self.probs.iter().sum();
        if (sum - 1.0).abs() > 1e-9 || self.probs.iter().any(|&p| p < 0.0) {
            return Err(Error::ProbabilitySum(sum));
        }
        Ok(())
    }
}

/// Samples an RMAT graph by recursive quadrant descent, one edge at a time.
///
/// Self-loops are dropped and parallel edges merged, so the edge count is at
/// most [`RmatParams::num_samples`]. Output is bitwise deterministic per
/// parameter set.
pub fn generate_rmat(params: &RmatParams) -> Result<Graph> {
    params.validate()?;
    let [a, b, c, _] = params.probs;
    let (ab, abc) = (a + b, a + b + c);
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let samples = params.num_samples();
    let mut edges: Vec<(NodeId, NodeId, u32)> = Vec::with_capacity(samples as usize);
    for _ in 0..samples {
        let (mut src, mut dst) = (0u64, 0u64);
        for _ in 0..params.scale {
            let r: f64 = rng.gen();
            let (row, col) = if r < a {
                (0, 0)
            } else if r < ab {
                (0, 1)
            } else if r < abc {
                (1, 0)
            } else {
                (1, 1)
            };
            src = (src << 1) | row;
            dst = (dst << 1) | col;
        }
        if src != dst {
            edges.push((src, dst, 0));
        }
    }
    let csr = Csr::from_edges(params.num_nodes(), &edges, false, true)?;
    Ok(Graph::from_csr(csr))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scale_zero_is_a_single_node() {
        let g = generate_rmat(&RmatParams::graph500(0, 16, 1)).unwrap();
        assert_eq!((g.num_nodes(), g.num_edges()), (1, 0));
    }

    #[test]
    fn node_count_of_kron30() {
        assert_eq!(RmatParams::graph500(30, 10, 0).num_nodes(), 1_073_741_824);
    }

    #[test]
    fn rejects_bad_parameters() {
        let mut p = RmatParams::graph500(4, 4, 0);
        p.probs = [0.5, 0.2, 0.2, 0.2];
        assert!(matches!(generate_rmat(&p), Err(Error::ProbabilitySum(_))));
        assert!(matches!(
            generate_rmat(&RmatParams::graph500(33, 1, 0)),
            Err(Error::ScaleTooLarge(33))
        ));
    }

    #[test]
    fn deterministic_and_simple() {
        let p = RmatParams::graph500(9, 8, 17);
        let g1 = generate_rmat(&p).unwrap();
        let g2 = generate_rmat(&p).unwrap();
        assert_eq!(g1, g2);
        assert!(g1.num_edges() <= p.num_samples());
        for u in 0..g1.num_nodes() {
            let list = g1.out_neighbors(u);
            assert!(list.windows(2).all(|w| w[0] < w[1]));
            assert!(!list.contains(&u));
        }
        let other = generate_rmat(&RmatParams::graph500(9, 8, 18)).unwrap();
        assert_ne!(g1, other);
    }
}
