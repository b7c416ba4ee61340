//! Shared-memory graph analytics over immutable CSR graphs.
//!
//! The crate is organised around the pieces a graph analytics run is built
//! from: the [`graph`] representation, the [`worklist`]s that track active
//! vertices, the [`algorithms`] that combine operators with a schedule, and
//! a [`mem_policy`] model of NUMA placement. The [`oracle`] module holds slow
//! sequential references used for verification.

pub mod algorithms;
pub mod error;
pub mod graph;
pub mod mem_policy;
pub mod oracle;
pub mod worklist;

pub use algorithms::{Algo, RunStats, Runtime, Variant, UNREACHED};
pub use error::{Error, Result};
pub use graph::{Graph, NodeId, Weight};
