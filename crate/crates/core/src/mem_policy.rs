//! NUMA placement planning and page-size arithmetic.
//!
//! Allocations are split into blocks the size of a page and each block is
//! assigned to a socket. Three policies are modelled:
//!
//! * `local(s)` places everything on socket `s`, spilling to the following
//!   sockets once `s` is full;
//! * `interleaved` deals blocks round-robin;
//! * `blocked` hands each unit one contiguous run of blocks.
//!
//! Interleaving and blocking can be done over sockets or over threads. In the
//! thread mode each thread's share lands on the socket hosting that thread,
//! and threads fill socket 0 first, so runs with few threads concentrate all
//! memory on one socket.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};

pub const SMALL_PAGE_BYTES: u64 = 4096;
pub const HUGE_PAGE_BYTES: u64 = 2 * 1024 * 1024;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PageSize {
    #[serde(rename = "4k")]
    Small,
    #[serde(rename = "2m")]
    Huge,
}

impl PageSize {
    pub fn bytes(self) -> u64 {
        match self {
            PageSize::Small => SMALL_PAGE_BYTES,
            PageSize::Huge => HUGE_PAGE_BYTES,
        }
    }

    pub fn from_bytes(bytes: u64) -> Result<Self> {
        match bytes {
            SMALL_PAGE_BYTES => Ok(PageSize::Small),
            HUGE_PAGE_BYTES => Ok(PageSize::Huge),
            other => Err(Error::UnsupportedPageSize(other)),
        }
    }
}

impl fmt::Display for PageSize {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PageSize::Small => "4k",
            PageSize::Huge => "2m",
        })
    }
}

impl FromStr for PageSize {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "4k" | "4kb" | "4096" => Ok(PageSize::Small),
            "2m" | "2mb" | "2097152" => Ok(PageSize::Huge),
            _ => Err(Error::InvalidParameter(format!("unknown page size {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Topology {
    pub num_sockets: usize,
    /// Bytes of memory attached to each socket.
    pub socket_capacity: u64,
    pub threads_per_socket: usize,
}

impl Topology {
    pub fn new(num_sockets: usize, socket_capacity: u64, threads_per_socket: usize) -> Result<Self> {
        if num_sockets == 0 || socket_capacity == 0 || threads_per_socket == 0 {
            return Err(Error::InvalidParameter(
                "topology needs at least one socket, capacity and thread".into(),
            ));
        }
        Ok(Self {
            num_sockets,
            socket_capacity,
            threads_per_socket,
        })
    }

    /// Two sockets with 192GB and 48 hardware threads each.
    pub fn two_socket() -> Self {
        Self {
            num_sockets: 2,
            socket_capacity: 192 << 30,
            threads_per_socket: 48,
        }
    }

    /// Socket hosting `thread`; threads fill socket 0 first.
    pub fn socket_of_thread(&self, thread: usize) -> usize {
        (thread / self.threads_per_socket) % self.num_sockets
    }

    pub fn total_capacity(&self) -> u64 {
        self.socket_capacity.saturating_mul(self.num_sockets as u64)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Policy {
    Local(usize),
    Interleaved,
    Blocked,
}

impl fmt::Display for Policy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Policy::Local(s) => write!(f, "local:{s}"),
            Policy::Interleaved => f.write_str("interleaved"),
            Policy::Blocked => f.write_str("blocked"),
        }
    }
}

impl FromStr for Policy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "interleaved" => Ok(Policy::Interleaved),
            "blocked" => Ok(Policy::Blocked),
            "local" => Ok(Policy::Local(0)),
            _ => s
                .strip_prefix("local:")
                .and_then(|rest| rest.parse().ok())
                .map(Policy::Local)
                .ok_or_else(|| Error::InvalidParameter(format!("unknown policy {s:?}"))),
        }
    }
}

/// The units a policy distributes blocks over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DistributeOver {
    Sockets,
    Threads(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AllocationMap {
    pub total_bytes: u64,
    pub block_size: u64,
    pub num_sockets: usize,
    pub policy: Policy,
    /// Socket of each block.
    pub assignments: Vec<usize>,
}

impl AllocationMap {
    pub fn num_blocks(&self) -> usize {
        self.assignments.len()
    }

    /// Bytes covered by block `i`; only the last block can be partial.
    pub fn block_bytes(&self, i: usize) -> u64 {
        let start = i as u64 * self.block_size;
        self.block_size.min(self.total_bytes - start)
    }
}

/// Sizes of `units` balanced contiguous runs over `n` items: the first
/// `n % units` runs get one extra item.
pub(crate) fn balanced_runs(n: usize, units: usize) -> impl Iterator<Item = usize> {
    let (base, extra) = (n / units, n % units);
    (0..units).map(move |u| base + usize::from(u < extra))
}

pub fn plan_allocation(
    total: u64,
    policy: Policy,
    topology: &Topology,
    distribute_over: DistributeOver,
    page_size: PageSize,
) -> Result<AllocationMap> {
    if total == 0 {
        return Err(Error::InvalidParameter("allocation size must be positive".into()));
    }
    let block_size = page_size.bytes();
    let nblocks = total.div_ceil(block_size) as usize;
    let unit_socket = |unit: usize| match distribute_over {
        DistributeOver::Sockets => unit,
        DistributeOver::Threads(_) => topology.socket_of_thread(unit),
    };
    let units = match distribute_over {
        DistributeOver::Sockets => topology.num_sockets,
        DistributeOver::Threads(t) => t,
    };
    if units == 0 {
        return Err(Error::InvalidParameter("need at least one thread".into()));
    }

    let assignments = match policy {
        Policy::Interleaved => (0..nblocks).map(|i| unit_socket(i % units)).collect(),
        Policy::Blocked => balanced_runs(nblocks, units)
            .enumerate()
            .flat_map(|(unit, run)| std::iter::repeat_n(unit_socket(unit), run))
            .collect(),
        Policy::Local(preferred) => {
            if preferred >= topology.num_sockets {
                return Err(Error::InvalidParameter(format!(
                    "socket {preferred} out of range for {} sockets",
                    topology.num_sockets
                )));
            }
            if total > topology.total_capacity() {
                return Err(Error::ExceedsCapacity {
                    requested: total,
                    capacity: topology.total_capacity(),
                });
            }
            let mut assignments = Vec::with_capacity(nblocks);
            let mut socket = preferred;
            let mut used = 0u64;
            for i in 0..nblocks {
                let bytes = block_size.min(total - i as u64 * block_size);
                if used + bytes > topology.socket_capacity {
                    socket = (socket + 1) % topology.num_sockets;
                    used = 0;
                }
                used += bytes;
                assignments.push(socket);
            }
            assignments
        }
    };
    Ok(AllocationMap {
        total_bytes: total,
        block_size,
        num_sockets: topology.num_sockets,
        policy,
        assignments,
    })
}

fn serialize_ratio<S: Serializer>(ratio: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if ratio.is_finite() {
        s.serialize_f64(*ratio)
    } else {
        s.serialize_none()
    }
}

/// Per-socket byte totals of an allocation map.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SocketBalance {
    pub per_socket_bytes: Vec<u64>,
    /// max / min over sockets; infinite when a socket holds nothing
    /// (serialized as `null`).
    #[serde(serialize_with = "serialize_ratio")]
    pub ratio: f64,
}

pub fn socket_balance(map: &AllocationMap) -> SocketBalance {
    let mut per_socket_bytes = vec![0u64; map.num_sockets];
    for (i, &socket) in map.assignments.iter().enumerate() {
        per_socket_bytes[socket] += map.block_bytes(i);
    }
    let max = per_socket_bytes.iter().copied().max().unwrap_or(0);
    let min = per_socket_bytes.iter().copied().min().unwrap_or(0);
    let ratio = if min == 0 { f64::INFINITY } else { max as f64 / min as f64 };
    SocketBalance {
        per_socket_bytes,
        ratio,
    }
}

/// Data-TLB entry counts per page size.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TlbConfig {
    pub small_entries: u64,
    pub huge_entries: u64,
}

impl Default for TlbConfig {
    fn default() -> Self {
        Self {
            small_entries: 64,
            huge_entries: 32,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PagePlan {
    pub total_bytes: u64,
    pub page_size: PageSize,
    pub num_pages: u64,
    /// Bytes addressable without a TLB miss (entries x page size).
    pub tlb_reach: u64,
}

pub fn page_plan(total: u64, page_size: PageSize) -> PagePlan {
    page_plan_with(total, page_size, TlbConfig::default())
}

pub fn page_plan_with(total: u64, page_size: PageSize, tlb: TlbConfig) -> PagePlan {
    let entries = match page_size {
        PageSize::Small => tlb.small_entries,
        PageSize::Huge => tlb.huge_entries,
    };
    PagePlan {
        total_bytes: total,
        page_size,
        num_pages: total.div_ceil(page_size.bytes()),
        tlb_reach: entries * page_size.bytes(),
    }
}

/// Result of [`write_microbenchmark`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TimingReport {
    pub total_bytes: u64,
    pub threads: usize,
    pub policy: Policy,
    pub page_size: PageSize,
    pub per_socket_bytes: Vec<u64>,
    pub wall_ms: f64,
    #[serde(skip)]
    pub map: AllocationMap,
    /// Half-open byte range written by each thread.
    #[serde(skip)]
    pub thread_ranges: Vec<(u64, u64)>,
    #[serde(skip)]
    pub checksum: u64,
}

/// Byte written at position `i` of the microbenchmark buffer.
#[inline]
pub fn fill_byte(i: u64) -> u8 {
    (i % 251) as u8
}

/// Allocates `total` bytes and has `threads` workers write every byte once,
/// each a contiguous, page-aligned share.
///
/// The buffer comes from a zeroed allocation, so pages are first touched by
/// the writing thread. Placement is reported from the model map; the host's
/// actual page placement is not inspected.
pub fn write_microbenchmark(
    total: u64,
    threads: usize,
    policy: Policy,
    topology: &Topology,
    page_size: PageSize,
) -> Result<TimingReport> {
    if threads == 0 {
        return Err(Error::InvalidParameter("need at least one thread".into()));
    }
    let map = plan_allocation(total, policy, topology, DistributeOver::Threads(threads), page_size)?;
    let block = page_size.bytes();
    let mut thread_ranges = Vec::with_capacity(threads);
    let mut start_block = 0u64;
    for run in balanced_runs(map.num_blocks(), threads) {
        let start = (start_block * block).min(total);
        let end = ((start_block + run as u64) * block).min(total);
        thread_ranges.push((start, end));
        start_block += run as u64;
    }

    let len = usize::try_from(total).map_err(|_| Error::InvalidParameter("allocation exceeds address space".into()))?;
    let mut buffer: Vec<u8> = Vec::new();
    buffer
        .try_reserve_exact(len)
        .map_err(|e| Error::InvalidParameter(format!("allocation of {total} bytes failed: {e}")))?;
    buffer.resize(len, 0);

    let started = Instant::now();
    std::thread::scope(|scope| {
        let mut rest = buffer.as_mut_slice();
        for &(start, end) in &thread_ranges {
            let (mine, tail) = rest.split_at_mut((end - start) as usize);
            rest = tail;
            scope.spawn(move || {
                for (offset, byte) in mine.iter_mut().enumerate() {
                    *byte = fill_byte(start + offset as u64);
                }
            });
        }
    });
    let wall_ms = started.elapsed().as_secs_f64() * 1e3;
    let checksum = buffer.iter().map(|&b| b as u64).sum();

    Ok(TimingReport {
        total_bytes: total,
        threads,
        policy,
        page_size,
        per_socket_bytes: socket_balance(&map).per_socket_bytes,
        wall_ms,
        map,
        thread_ranges,
        checksum,
    })
}
