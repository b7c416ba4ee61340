//! The benchmark algorithms, each available in one or more schedule
//! variants and instrumented with work counters.
//!
//! All label updates are monotone (atomic min or one-way flags), so the
//! final labels do not depend on the schedule or the number of workers.
//! Counters are exact with one worker; with more, duplicated work may show
//! up as extra operator applications.

mod bc;
mod bfs;
mod cc;
mod kcore;
mod labels;
mod pagerank;
mod sssp;
mod tc;

use std::fmt;
use std::iter::Sum;
use std::ops::Add;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};

pub use bc::bc;
pub use bfs::{bfs, DirectionOptParams};
pub use cc::cc;
pub use kcore::{kcore, DEFAULT_K};
pub use labels::LabelArray;
pub use pagerank::{pagerank, PageRankParams};
pub use sssp::{default_delta, sssp};
pub use tc::tc;

/// Label of nodes not reached from the source.
pub const UNREACHED: u64 = u64::MAX;

/// Worker count plus the thread pool used by bulk-synchronous variants.
/// Asynchronous variants spawn the same number of scoped workers per drain.
pub struct Runtime {
    threads: usize,
    pool: rayon::ThreadPool,
}

impl Runtime {
    pub fn new(threads: usize) -> Result<Self> {
        if threads == 0 {
            return Err(Error::InvalidParameter("thread count must be at least 1".into()));
        }
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .thread_name(|i| format!("grainstone-{i}"))
            .build()
            .map_err(|e| Error::ThreadPool(e.to_string()))?;
        Ok(Self { threads, pool })
    }

    pub fn threads(&self) -> usize {
        self.threads
    }

    pub fn install<R: Send>(&self, op: impl FnOnce() -> R + Send) -> R {
        self.pool.install(op)
    }
}

impl fmt::Debug for Runtime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Runtime").field("threads", &self.threads).finish()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RunStats {
    /// Bulk-synchronous rounds; zero for asynchronous drains.
    pub rounds: u64,
    pub operator_applications: u64,
    pub edges_relaxed: u64,
    /// Active vertices at the start of each round (bulk-synchronous only).
    pub frontier_sizes: Vec<u64>,
    pub wall_ms: f64,
}

/// Per-worker work tally, merged at round or drain boundaries.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub(crate) struct Work {
    pub applications: u64,
    pub edges: u64,
}

impl Add for Work {
    type Output = Work;

    fn add(self, rhs: Work) -> Work {
        Work {
            applications: self.applications + rhs.applications,
            edges: self.edges + rhs.edges,
        }
    }
}

impl Sum for Work {
    fn sum<I: Iterator<Item = Work>>(iter: I) -> Work {
        iter.fold(Work::default(), Add::add)
    }
}

impl RunStats {
    pub(crate) fn record(&mut self, work: Work) {
        self.operator_applications += work.applications;
        self.edges_relaxed += work.edges;
    }

    pub(crate) fn start_round(&mut self, frontier: u64) {
        self.rounds += 1;
        self.frontier_sizes.push(frontier);
    }
}

pub(crate) fn check_source(graph: &Graph, source: NodeId) -> Result<()> {
    if source >= graph.num_nodes() {
        return Err(Error::SourceOutOfRange {
            source_node: source,
            num_nodes: graph.num_nodes(),
        });
    }
    Ok(())
}

macro_rules! named_enum {
    ($(#[$meta:meta])* $name:ident { $($variant:ident => $text:literal),+ $(,)? }) => {
        $(#[$meta])*
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
        pub enum $name {
            $(#[serde(rename = $text)] $variant),+
        }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),+];

            pub fn name(self) -> &'static str {
                match self {
                    $($name::$variant => $text),+
                }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.name())
            }
        }

        impl FromStr for $name {
            type Err = Error;

            fn from_str(s: &str) -> Result<Self> {
                match s {
                    $($text => Ok($name::$variant),)+
                    _ => Err(Error::InvalidParameter(format!(
                        concat!("unknown ", stringify!($name), " {:?}"), s
                    ))),
                }
            }
        }
    };
}

named_enum!(
    /// The seven benchmarks.
    Algo {
        Bfs => "bfs",
        Sssp => "sssp",
        Cc => "cc",
        Pr => "pr",
        Kcore => "kcore",
        Bc => "bc",
        Tc => "tc",
    }
);

named_enum!(
    /// Operator/schedule combinations.
    Variant {
        PushBspSparse => "push_bsp_sparse",
        DirectionOpt => "direction_opt",
        DeltaAsync => "delta_async",
        DataDrivenBsp => "data_driven_bsp",
        BellmanFordTopo => "bellman_ford_topo",
        LabelPropBsp => "label_prop_bsp",
        LabelPropSc => "label_prop_sc",
        PullTopo => "pull_topo",
        PeelAsync => "peel_async",
        Brandes => "brandes",
        DegreeOrdered => "degree_ordered",
    }
);

impl Algo {
    /// Variants implemented for this benchmark; the first is the default.
    pub fn variants(self) -> &'static [Variant] {
        use Variant::*;
        match self {
            Algo::Bfs => &[PushBspSparse, DirectionOpt],
            Algo::Sssp => &[DeltaAsync, DataDrivenBsp, BellmanFordTopo],
            Algo::Cc => &[LabelPropBsp, LabelPropSc],
            Algo::Pr => &[PullTopo],
            Algo::Kcore => &[PeelAsync],
            Algo::Bc => &[Brandes],
            Algo::Tc => &[DegreeOrdered],
        }
    }

    pub fn default_variant(self) -> Variant {
        self.variants()[0]
    }

    pub fn supports(self, variant: Variant) -> bool {
        self.variants().contains(&variant)
    }

    /// Whether the benchmark starts from a source node.
    pub fn needs_source(self) -> bool {
        matches!(self, Algo::Bfs | Algo::Sssp | Algo::Bc)
    }
}

impl Variant {
    /// Whether the variant reads in-edges.
    pub fn needs_transpose(self) -> bool {
        matches!(self, Variant::DirectionOpt | Variant::PullTopo)
    }
}
