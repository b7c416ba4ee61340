//! Active-vertex tracking: a dense bit-vector frontier for bulk-synchronous
//! rounds, a chunked sparse bag for asynchronous execution, and a bucketed
//! variant of the bag ordered by priority.

mod bucketed;
mod dense;
mod sparse;

pub use bucketed::{BucketPusher, BucketedWorklist, Priority};
pub use dense::DenseFrontier;
pub use sparse::{SparsePusher, SparseWorklist};

/// Node ids per chunk; workers steal whole chunks.
pub const DEFAULT_CHUNK_CAPACITY: usize = 64;
