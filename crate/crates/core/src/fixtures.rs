//! Small hand-checkable trajectories.

use crate::trajectory::{Trajectory, Vertex};

/// Four vertices: `(0,0)@0`, `(1,0)@1`, `(3,0)@2`, `(3,2)@3`. With side 2 its
/// whole-trajectory hotspot has weight 2 (the last two edges).
pub fn t4() -> Trajectory {
    Trajectory::new(vec![
        Vertex::new(0.0, 0.0, 0.0),
        Vertex::new(1.0, 1.0, 0.0),
        Vertex::new(2.0, 3.0, 0.0),
        Vertex::new(3.0, 3.0, 2.0),
    ])
    .expect("valid trajectory")
}
