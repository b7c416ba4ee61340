use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use crossbeam::deque::{Injector, Steal};
use crossbeam::utils::Backoff;

use super::DEFAULT_CHUNK_CAPACITY;
use crate::graph::NodeId;

/// Concurrent bag of node ids, shared between workers in fixed-size chunks.
///
/// Duplicates are kept: an id pushed three times is handed to the operator
/// three times.
pub struct SparseWorklist {
    chunks: Injector<Vec<NodeId>>,
    open: Mutex<Vec<NodeId>>,
    pending: AtomicUsize,
    chunk_capacity: usize,
}

impl Default for SparseWorklist {
    fn default() -> Self {
        Self::new()
    }
}

impl SparseWorklist {
    pub fn new() -> Self {
        Self::with_chunk_capacity(DEFAULT_CHUNK_CAPACITY)
    }

    pub fn with_chunk_capacity(chunk_capacity: usize) -> Self {
        assert!(chunk_capacity > 0, "chunk capacity must be positive");
        Self {
            chunks: Injector::new(),
            open: Mutex::new(Vec::with_capacity(chunk_capacity)),
            pending: AtomicUsize::new(0),
            chunk_capacity,
        }
    }

    pub fn chunk_capacity(&self) -> usize {
        self.chunk_capacity
    }

    /// Pushes from outside a drain (or from any thread during one).
    pub fn push(&self, node: NodeId) {
        self.pending.fetch_add(1, Ordering::AcqRel);
        let mut open = self.open.lock().unwrap();
        open.push(node);
        if open.len() == self.chunk_capacity {
            let full = std::mem::replace(&mut *open, Vec::with_capacity(self.chunk_capacity));
            self.chunks.push(full);
        }
    }

    /// Ids pushed but not yet fully processed.
    pub fn len(&self) -> usize {
        self.pending.load(Ordering::Acquire)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn take_chunk(&self) -> Option<Vec<NodeId>> {
        loop {
            match self.chunks.steal() {
                Steal::Success(chunk) => return Some(chunk),
                Steal::Retry => continue,
                Steal::Empty => break,
            }
        }
        let mut open = self.open.lock().unwrap();
        (!open.is_empty()).then(|| std::mem::replace(&mut *open, Vec::with_capacity(self.chunk_capacity)))
    }

    /// Runs `op` once per pushed occurrence until the bag is empty, including
    /// ids pushed by `op` itself. Returns the number of invocations.
    pub fn drain<F>(&self, workers: usize, op: F) -> u64
    where
        F: Fn(NodeId, &mut SparsePusher<'_>) + Sync,
    {
        self.drain_with(workers, || (), |_, node, pusher| op(node, pusher))
            .into_iter()
            .map(|(count, ())| count)
            .sum()
    }

    /// [`SparseWorklist::drain`] with per-worker state, returned alongside
    /// each worker's invocation count.
    pub fn drain_with<S, I, F>(&self, workers: usize, init: I, op: F) -> Vec<(u64, S)>
    where
        S: Send,
        I: Fn() -> S + Sync,
        F: Fn(&mut S, NodeId, &mut SparsePusher<'_>) + Sync,
    {
        let workers = workers.max(1);
        if workers == 1 {
            return vec![self.worker_loop(&init, &op)];
        }
        std::thread::scope(|scope| {
            let handles: Vec<_> = (0..workers)
                .map(|_| scope.spawn(|| self.worker_loop(&init, &op)))
                .collect();
            handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
        })
    }

    fn worker_loop<S, I, F>(&self, init: &I, op: &F) -> (u64, S)
    where
        I: Fn() -> S,
        F: Fn(&mut S, NodeId, &mut SparsePusher<'_>),
    {
        let mut state = init();
        let mut pusher = SparsePusher {
            worklist: self,
            local: Vec::with_capacity(self.chunk_capacity),
        };
        let mut current: Vec<NodeId> = Vec::new();
        let mut count = 0u64;
        let backoff = Backoff::new();
        loop {
            if let Some(node) = current.pop() {
                op(&mut state, node, &mut pusher);
                // only after the operator's own pushes are counted
                self.pending.fetch_sub(1, Ordering::AcqRel);
                count += 1;
                continue;
            }
            if !pusher.local.is_empty() {
                std::mem::swap(&mut current, &mut pusher.local);
                continue;
            }
            if let Some(chunk) = self.take_chunk() {
                current = chunk;
                backoff.reset();
                continue;
            }
            if self.pending.load(Ordering::Acquire) == 0 {
                break;
            }
            backoff.snooze();
        }
        (count, state)
    }
}

/// Push handle given to the operator during a drain.
pub struct SparsePusher<'a> {
    worklist: &'a SparseWorklist,
    local: Vec<NodeId>,
}

impl SparsePusher<'_> {
    #[inline]
    pub fn push(&mut self, node: NodeId) {
        self.worklist.pending.fetch_add(1, Ordering::AcqRel);
        self.local.push(node);
        if self.local.len() == self.worklist.chunk_capacity {
            let full = std::mem::replace(&mut self.local, Vec::with_capacity(self.worklist.chunk_capacity));
            self.worklist.chunks.push(full);
        }
    }
}
