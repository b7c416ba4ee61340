use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use crossbeam::utils::Backoff;

use super::DEFAULT_CHUNK_CAPACITY;
use crate::graph::NodeId;

pub type Priority = usize;

#[derive(Default)]
struct Buckets {
    /// Chunks waiting in each bucket, indexed by priority.
    slots: Vec<Vec<Vec<NodeId>>>,
    /// No bucket below this index holds a chunk.
    lowest: usize,
}

impl Buckets {
    fn put(&mut self, priority: Priority, chunk: Vec<NodeId>) {
        if self.slots.len() <= priority {
            self.slots.resize_with(priority + 1, Vec::new);
        }
        self.slots[priority].push(chunk);
        self.lowest = self.lowest.min(priority);
    }

    fn take_lowest(&mut self) -> Option<(Priority, Vec<NodeId>)> {
        while self.lowest < self.slots.len() {
            if let Some(chunk) = self.slots[self.lowest].pop() {
                return Some((self.lowest, chunk));
            }
            self.lowest += 1;
        }
        None
    }
}

/// Worklist of node ids keyed by a bucket index (delta-stepping style).
///
/// Workers always take from the lowest non-empty bucket. A push below the
/// bucket being processed re-opens the lower bucket: the pushing worker hands
/// back the rest of its chunk and moves down before continuing.
pub struct BucketedWorklist {
    buckets: Mutex<Buckets>,
    pending: AtomicUsize,
    chunk_capacity: usize,
    priority_bound: Option<Priority>,
}

impl Default for BucketedWorklist {
    fn default() -> Self {
        Self::new()
    }
}

impl BucketedWorklist {
    pub fn new() -> Self {
        Self::with_chunk_capacity(DEFAULT_CHUNK_CAPACITY)
    }

    pub fn with_chunk_capacity(chunk_capacity: usize) -> Self {
        assert!(chunk_capacity > 0, "chunk capacity must be positive");
        Self {
            buckets: Mutex::new(Buckets::default()),
            pending: AtomicUsize::new(0),
            chunk_capacity,
            priority_bound: None,
        }
    }

    /// Records how many buckets can be live at once (`max_weight / delta + 1`
    /// for delta-stepping); used to presize the bucket array.
    pub fn with_priority_bound(mut self, bound: Priority) -> Self {
        self.priority_bound = Some(bound);
        self.buckets.get_mut().unwrap().slots.reserve(bound + 1);
        self
    }

    pub fn priority_bound(&self) -> Option<Priority> {
        self.priority_bound
    }

    pub fn push(&self, node: NodeId, priority: Priority) {
        self.pending.fetch_add(1, Ordering::AcqRel);
        let mut buckets = self.buckets.lock().unwrap();
        let cap = self.chunk_capacity;
        if buckets.slots.len() <= priority {
            buckets.slots.resize_with(priority + 1, Vec::new);
        }
        match buckets.slots[priority].last_mut() {
            Some(chunk) if chunk.len() < cap => chunk.push(node),
            _ => {
                let mut chunk = Vec::with_capacity(cap);
                chunk.push(node);
                buckets.slots[priority].push(chunk);
            }
        }
        buckets.lowest = buckets.lowest.min(priority);
    }

    pub fn len(&self) -> usize {
        self.pending.load(Ordering::Acquire)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Runs `op(node, priority, pusher)` once per pushed occurrence until the
    /// worklist is empty. Returns the number of invocations.
    pub fn drain<F>(&self, workers: usize, op: F) -> u64
    where
        F: Fn(NodeId, Priority, &mut BucketPusher<'_>) + Sync,
    {
        self.drain_with(workers, || (), |_, node, prio, pusher| op(node, prio, pusher))
            .into_iter()
            .map(|(count, ())| count)
            .sum()
    }

    pub fn drain_with<S, I, F>(&self, workers: usize, init: I, op: F) -> Vec<(u64, S)>
    where
        S: Send,
        I: Fn() -> S + Sync,
        F: Fn(&mut S, NodeId, Priority, &mut BucketPusher<'_>) + Sync,
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
        F: Fn(&mut S, NodeId, Priority, &mut BucketPusher<'_>),
    {
        let mut state = init();
        let mut pusher = BucketPusher {
            worklist: self,
            local: Vec::new(),
            current: 0,
            lowered: false,
        };
        let mut current: Vec<NodeId> = Vec::new();
        let mut count = 0u64;
        let backoff = Backoff::new();
        loop {
            if let Some(node) = current.pop() {
                op(&mut state, node, pusher.current, &mut pusher);
                self.pending.fetch_sub(1, Ordering::AcqRel);
                count += 1;
                if pusher.lowered {
                    pusher.lowered = false;
                    let rest = std::mem::take(&mut current);
                    let mut buckets = self.buckets.lock().unwrap();
                    if !rest.is_empty() {
                        buckets.put(pusher.current, rest);
                    }
                    pusher.flush_into(&mut buckets);
                }
                continue;
            }
            let mut buckets = self.buckets.lock().unwrap();
            pusher.flush_into(&mut buckets);
            if let Some((priority, chunk)) = buckets.take_lowest() {
                drop(buckets);
                pusher.current = priority;
                current = chunk;
                backoff.reset();
                continue;
            }
            drop(buckets);
            if self.pending.load(Ordering::Acquire) == 0 {
                break;
            }
            backoff.snooze();
        }
        (count, state)
    }
}

/// Push handle given to the operator during a bucketed drain.
pub struct BucketPusher<'a> {
    worklist: &'a BucketedWorklist,
    local: Vec<(Priority, Vec<NodeId>)>,
    current: Priority,
    lowered: bool,
}

impl BucketPusher<'_> {
    /// Bucket of the item being processed.
    pub fn current_priority(&self) -> Priority {
        self.current
    }

    pub fn push(&mut self, node: NodeId, priority: Priority) {
        self.worklist.pending.fetch_add(1, Ordering::AcqRel);
        if priority < self.current {
            self.lowered = true;
        }
        let cap = self.worklist.chunk_capacity;
        let slot = match self.local.iter().position(|(p, _)| *p == priority) {
            Some(i) => i,
            None => {
                self.local.push((priority, Vec::with_capacity(cap)));
                self.local.len() - 1
            }
        };
        let chunk = &mut self.local[slot].1;
        chunk.push(node);
        if chunk.len() == cap {
            let (p, full) = self.local.swap_remove(slot);
            self.worklist.buckets.lock().unwrap().put(p, full);
        }
    }

    fn flush_into(&mut self, buckets: &mut Buckets) {
        for (priority, chunk) in self.local.drain(..) {
            buckets.put(priority, chunk);
        }
    }
}
