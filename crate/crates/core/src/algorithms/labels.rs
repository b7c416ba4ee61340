use std::sync::atomic::{AtomicU64, Ordering};

use crate::graph::NodeId;

/// Per-node 64-bit labels with atomic monotone updates.
#[derive(Debug)]
pub struct LabelArray {
    values: Vec<AtomicU64>,
}

impl LabelArray {
    pub fn new(len: u64, init: u64) -> Self {
        Self::from_fn(len, |_| init)
    }

    pub fn from_fn(len: u64, mut init: impl FnMut(NodeId) -> u64) -> Self {
        Self {
            values: (0..len).map(|i| AtomicU64::new(init(i))).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    #[inline]
    pub fn get(&self, node: NodeId) -> u64 {
        self.values[node as usize].load(Ordering::Relaxed)
    }

    #[inline]
    pub fn set(&mut self, node: NodeId, value: u64) {
        *self.values[node as usize].get_mut() = value;
    }

    /// Lowers the label to `value` if that is smaller. Returns true iff this
    /// call changed the stored value.
    #[inline]
    pub fn fetch_min(&self, node: NodeId, value: u64) -> bool {
        let slot = &self.values[node as usize];
        let mut current = slot.load(Ordering::Relaxed);
        while value < current {
            match slot.compare_exchange_weak(current, value, Ordering::AcqRel, Ordering::Relaxed) {
                Ok(_) => return true,
                Err(seen) => current = seen,
            }
        }
        false
    }

    /// Replaces `expected` with `value`; true iff this call did it.
    #[inline]
    pub fn claim(&self, node: NodeId, expected: u64, value: u64) -> bool {
        self.values[node as usize]
            .compare_exchange(expected, value, Ordering::AcqRel, Ordering::Relaxed)
            .is_ok()
    }

    pub fn snapshot(&self) -> Vec<u64> {
        self.values.iter().map(|v| v.load(Ordering::Relaxed)).collect()
    }

    pub fn into_vec(self) -> Vec<u64> {
        self.values.into_iter().map(AtomicU64::into_inner).collect()
    }
}
