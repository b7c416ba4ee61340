use std::sync::atomic::{AtomicU64, Ordering};

use crate::graph::NodeId;

/// Bulk-synchronous bit-vector frontier: one bit per node for the current
/// round and one for the next.
#[derive(Debug)]
pub struct DenseFrontier {
    num_nodes: u64,
    current: Vec<AtomicU64>,
    next: Vec<AtomicU64>,
    round: u64,
}

fn zeroed(words: usize) -> Vec<AtomicU64> {
    (0..words).map(|_| AtomicU64::new(0)).collect()
}

impl DenseFrontier {
    pub fn new(num_nodes: u64) -> Self {
        let words = num_nodes.div_ceil(64) as usize;
        Self {
            num_nodes,
            current: zeroed(words),
            next: zeroed(words),
            round: 0,
        }
    }

    /// A frontier whose current round holds every node.
    pub fn full(num_nodes: u64) -> Self {
        let frontier = Self::new(num_nodes);
        for (i, word) in frontier.current.iter().enumerate() {
            let remaining = num_nodes - 64 * i as u64;
            let bits = if remaining >= 64 { u64::MAX } else { (1u64 << remaining) - 1 };
            word.store(bits, Ordering::Relaxed);
        }
        frontier
    }

    pub fn num_nodes(&self) -> u64 {
        self.num_nodes
    }

    pub fn round(&self) -> u64 {
        self.round
    }

    /// Marks `node` for the next round. Returns true iff this call set the bit.
    #[inline]
    pub fn activate(&self, node: NodeId) -> bool {
        debug_assert!(node < self.num_nodes);
        let mask = 1u64 << (node % 64);
        self.next[(node / 64) as usize].fetch_or(mask, Ordering::AcqRel) & mask == 0
    }

    /// Adds `node` directly to the current round (used for seeding).
    pub fn insert_current(&mut self, node: NodeId) {
        let mask = 1u64 << (node % 64);
        *self.current[(node / 64) as usize].get_mut() |= mask;
    }

    #[inline]
    pub fn contains(&self, node: NodeId) -> bool {
        self.current[(node / 64) as usize].load(Ordering::Relaxed) & (1u64 << (node % 64)) != 0
    }

    #[inline]
    pub fn next_contains(&self, node: NodeId) -> bool {
        self.next[(node / 64) as usize].load(Ordering::Relaxed) & (1u64 << (node % 64)) != 0
    }

    /// Makes the next round current, clears the new next round and returns
    /// the size of the new current round.
    pub fn swap(&mut self) -> u64 {
        std::mem::swap(&mut self.current, &mut self.next);
        for word in &mut self.next {
            *word.get_mut() = 0;
        }
        self.round += 1;
        self.len()
    }

    /// Popcount of the current round.
    pub fn len(&self) -> u64 {
        self.current
            .iter()
            .map(|w| w.load(Ordering::Relaxed).count_ones() as u64)
            .sum()
    }

    pub fn is_empty(&self) -> bool {
        self.current.iter().all(|w| w.load(Ordering::Relaxed) == 0)
    }

    pub fn num_words(&self) -> usize {
        self.current.len()
    }

    /// Nodes of the current round stored in word `word`, ascending.
    #[inline]
    pub fn word_nodes(&self, word: usize) -> impl Iterator<Item = NodeId> {
        let mut bits = self.current[word].load(Ordering::Relaxed);
        let base = 64 * word as u64;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let tz = bits.trailing_zeros() as u64;
            bits &= bits - 1;
            Some(base + tz)
        })
    }

    /// All nodes of the current round, ascending.
    pub fn iter(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.num_words()).flat_map(|w| self.word_nodes(w))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn activate_reports_first_setter() {
        let f = DenseFrontier::new(10);
        assert!(f.activate(5));
        assert!(!f.activate(5));
        assert!(!f.contains(5));
        assert!(f.next_contains(5));
    }

    #[test]
    fn swap_moves_next_to_current() {
        let mut f = DenseFrontier::new(130);
        for n in [0, 64, 129, 64] {
            f.activate(n);
        }
        assert_eq!(f.swap(), 3);
        assert_eq!(f.round(), 1);
        assert_eq!(f.iter().collect::<Vec<_>>(), [0, 64, 129]);
        assert!(f.activate(64));
        assert_eq!(f.swap(), 1);
        assert_eq!(f.swap(), 0);
        assert!(f.is_empty());
    }

    #[test]
    fn full_frontier_has_every_node() {
        for n in [0, 1, 63, 64, 65, 200] {
            let f = DenseFrontier::full(n);
            assert_eq!(f.len(), n);
            assert_eq!(f.iter().count() as u64, n);
        }
    }

    #[test]
    fn concurrent_activation_counts_each_node_once() {
        let n = 4096u64;
        let threads = 8;
        let f = DenseFrontier::new(n);
        let wins: u64 = std::thread::scope(|s| {
            let handles: Vec<_> = (0..threads)
                .map(|_| s.spawn(|| (0..n).filter(|&v| f.activate(v)).count() as u64))
                .collect();
            handles.into_iter().map(|h| h.join().unwrap()).sum()
        });
        assert_eq!(wins, n);
    }
}
