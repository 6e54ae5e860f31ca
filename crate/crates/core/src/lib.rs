//! Time-windowed contiguous hotspot queries over polygonal trajectories.
//!
//! A hotspot of a trajectory is an axis-parallel square of fixed side length
//! that contains the longest contiguous stretch of the trajectory. After a
//! linear-time build, [`HotspotIndex`] answers the question for any time
//! window in `O(log² n)`, returning a [`Witness`] whose square is at least
//! half as heavy as the true hotspot of that window. The [`oracle`] module
//! holds brute-force references used to check that guarantee.
//!
//! ```
//! use hotspot::{HotspotIndex, Trajectory, Vertex};
//!
//! let traj = Trajectory::new(vec![
//!     Vertex::new(0.0, 0.0, 0.0),
//!     Vertex::new(1.0, 1.0, 0.0),
//!     Vertex::new(2.0, 3.0, 0.0),
//!     Vertex::new(3.0, 3.0, 2.0),
//! ])?;
//! let index = HotspotIndex::build(traj, 2.0)?;
//! let best = index.query(0.0, 3.0)?;
//! assert_eq!(best.score, 2.0);
//! # Ok::<(), hotspot::Error>(())
//! ```

pub mod cli;
pub mod error;
pub mod fixtures;
pub mod io;
pub mod oracle;
pub mod preprocess;
pub mod query;
pub mod rmq;
pub mod sliding;
pub mod trajectory;

pub use error::{Error, Result};
pub use preprocess::{build_hot_arrays, Direction, HotArrays, HotEntry, HotTables};
pub use query::{Case, HotspotIndex, QueryTrace};
pub use rmq::RangeArgmax;
pub use sliding::SlidingExtremaQueue;
pub use trajectory::{edge_hotspot, weight_of_square, BBox, Point, Square, Trajectory, Vertex, Window, Witness, EPS};
