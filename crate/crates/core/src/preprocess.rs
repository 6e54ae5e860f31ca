//! Per-vertex hot arrays and their range-argmax tables.
//!
//! For every vertex `v`, the backward entry describes the longest
//! sub-trajectory ending at `v` that fits in an s×s square (it may start in
//! the middle of an edge); the forward entry describes the longest one
//! starting at `v`. Both are found with one linear sliding-window pass over
//! the vertices; the forward pass runs on the time-reversed trajectory.

use crate::error::{Error, Result};
use crate::rmq::RangeArgmax;
use crate::sliding::{QueueStats, SlidingExtremaQueue};
use crate::trajectory::{clip_segment, BBox, Point, Square, Trajectory, EPS};

/// Longest fitting stretch anchored at one vertex.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HotEntry {
    /// Duration of the stretch.
    pub dur: f64,
    /// Far endpoint time: the start for backward entries, the end for forward ones.
    pub end: f64,
    /// Minimum corner of a square containing the stretch.
    pub anchor: Point,
}

impl HotEntry {
    pub fn square(&self, side: f64) -> Square {
        Square::anchored_at(self.anchor, side)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    /// Stretches ending at the vertex.
    Backward,
    /// Stretches starting at the vertex.
    Forward,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HotArrays {
    side: f64,
    backward: Vec<HotEntry>,
    forward: Vec<HotEntry>,
}

impl HotArrays {
    pub fn side(&self) -> f64 {
        self.side
    }

    pub fn len(&self) -> usize {
        self.backward.len()
    }

    pub fn is_empty(&self) -> bool {
        self.backward.is_empty()
    }

    pub fn backward(&self) -> &[HotEntry] {
        &self.backward
    }

    pub fn forward(&self) -> &[HotEntry] {
        &self.forward
    }

    pub fn entries(&self, dir: Direction) -> &[HotEntry] {
        match dir {
            Direction::Backward => &self.backward,
            Direction::Forward => &self.forward,
        }
    }
}

/// Work counters of one build, one entry per sliding queue.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BuildStats {
    pub backward_x: QueueStats,
    pub backward_y: QueueStats,
    pub forward_x: QueueStats,
    pub forward_y: QueueStats,
}

impl BuildStats {
    pub fn queues(&self) -> [QueueStats; 4] {
        [self.backward_x, self.backward_y, self.forward_x, self.forward_y]
    }
}

pub(crate) fn check_side(side: f64) -> Result<()> {
    if side.is_finite() && side > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidSide(side))
    }
}

/// Extends a fitting window that starts at vertex `u` backwards onto the
/// edge `u-1 → u`, as far as the bounding box still fits.
///
/// `window_box` is the bounding box of the window (vertices `u..=v`).
/// Returns the earliest reachable time and a square containing the extended
/// window. Along the edge, each coordinate must stay within
/// `[max - side, min + side]`; the feasible set is an interval starting at
/// `u`, so solving the two linear constraints gives its far end directly.
pub fn extend_back(traj: &Trajectory, u: usize, window_box: &BBox, side: f64) -> (f64, Square) {
    let mut bb = *window_box;
    if u == 0 {
        return (traj.time(0), Square::anchored_at(Point::new(bb.min_x, bb.min_y), side));
    }
    let (a, b) = (traj.loc(u - 1), traj.loc(u));
    let mut reach = 1.0f64;
    for (base, d, lo, hi) in
        [(b.x, a.x - b.x, bb.max_x - side, bb.min_x + side), (b.y, a.y - b.y, bb.max_y - side, bb.min_y + side)]
    {
        if d > 0.0 {
            reach = reach.min((hi - base) / d);
        } else if d < 0.0 {
            reach = reach.min((lo - base) / d);
        }
    }
    let reach = reach.max(0.0);
    debug_assert!(
        (reach - extend_back_by_corners(a, b, &bb, side)).abs() <= 1e-9,
        "corner alignment disagrees at vertex {u}"
    );
    let (tu, tprev) = (traj.time(u), traj.time(u - 1));
    let (p, point) = if reach >= 1.0 {
        (tprev, a)
    } else if reach == 0.0 {
        (tu, b)
    } else {
        (tu - reach * (tu - tprev), Point::new(b.x + reach * (a.x - b.x), b.y + reach * (a.y - b.y)))
    };
    bb.include(point);
    (p, Square::anchored_at(Point::new(bb.min_x, bb.min_y), side))
}

/// Same quantity as [`extend_back`], found by aligning a square with each of
/// the four corners of the window box and keeping the one that covers the
/// longest part of the edge `a → b` ending at `b`. Returns the edge fraction.
pub(crate) fn extend_back_by_corners(a: Point, b: Point, bb: &BBox, side: f64) -> f64 {
    let mut best = 0.0f64;
    // far sides come from the box itself, not `anchor + side`, so a corner
    // lies exactly on the square boundary
    for (lx, hx) in [(bb.min_x, bb.min_x + side), (bb.max_x - side, bb.max_x)] {
        for (ly, hy) in [(bb.min_y, bb.min_y + side), (bb.max_y - side, bb.max_y)] {
            let (lo, hi) = (Point::new(lx, ly), Point::new(hx, hy));
            if let Some((enter, leave)) = clip_segment(b, a, lo, hi) {
                if enter <= 0.0 {
                    best = best.max(leave);
                }
            }
        }
    }
    best
}

fn backward_pass(traj: &Trajectory, side: f64) -> (Vec<HotEntry>, QueueStats, QueueStats) {
    let n = traj.len();
    let mut xs = SlidingExtremaQueue::new();
    let mut ys = SlidingExtremaQueue::new();
    let mut entries = Vec::with_capacity(n);
    let mut window_start = 0;
    for v in 0..n {
        let loc = traj.loc(v);
        xs.push(v, loc.x);
        ys.push(v, loc.y);
        while xs.extent() > side + EPS || ys.extent() > side + EPS {
            xs.pop_oldest().expect("single vertex always fits");
            ys.pop_oldest().expect("single vertex always fits");
        }
        let (u, _) = xs.oldest().expect("window holds v");
        debug_assert!(u >= window_start, "window start moved backwards");
        window_start = u;
        let bb = BBox {
            min_x: xs.min().expect("non-empty"),
            max_x: xs.max().expect("non-empty"),
            min_y: ys.min().expect("non-empty"),
            max_y: ys.max().expect("non-empty"),
        };
        let (p, square) = extend_back(traj, u, &bb, side);
        entries.push(HotEntry { dur: traj.time(v) - p, end: p, anchor: Point::new(square.anchor_x, square.anchor_y) });
    }
    (entries, xs.stats(), ys.stats())
}

pub fn build_hot_arrays(traj: &Trajectory, side: f64) -> Result<HotArrays> {
    build_hot_arrays_with_stats(traj, side).map(|(arrays, _)| arrays)
}

pub fn build_hot_arrays_with_stats(traj: &Trajectory, side: f64) -> Result<(HotArrays, BuildStats)> {
    check_side(side)?;
    let (backward, backward_x, backward_y) = backward_pass(traj, side);
    let (mut rev, forward_x, forward_y) = backward_pass(&traj.reversed(), side);
    rev.reverse();
    let forward = rev.into_iter().map(|e| HotEntry { end: -e.end, ..e }).collect();
    let stats = BuildStats { backward_x, backward_y, forward_x, forward_y };
    Ok((HotArrays { side, backward, forward }, stats))
}

pub fn build_range_argmax(values: Vec<f64>) -> Result<RangeArgmax> {
    RangeArgmax::new(values)
}

/// Hot arrays plus range-argmax over their durations, answering the
/// multi-vertex versions of the hot functions.
#[derive(Debug, Clone)]
pub struct HotTables {
    arrays: HotArrays,
    backward_max: RangeArgmax,
    forward_max: RangeArgmax,
}

impl HotTables {
    pub fn new(arrays: HotArrays) -> Result<Self> {
        let backward_max = build_range_argmax(arrays.backward.iter().map(|e| e.dur).collect())?;
        let forward_max = build_range_argmax(arrays.forward.iter().map(|e| e.dur).collect())?;
        Ok(Self { arrays, backward_max, forward_max })
    }

    pub fn arrays(&self) -> &HotArrays {
        &self.arrays
    }

    /// Vertex in `i..=j` with the longest stretch in direction `dir`, and its
    /// entry. Ties go to the smaller index.
    pub fn hot_range(&self, dir: Direction, i: usize, j: usize) -> Result<(usize, HotEntry)> {
        let k = match dir {
            Direction::Backward => self.backward_max.query(i, j)?,
            Direction::Forward => self.forward_max.query(i, j)?,
        };
        Ok((k, self.arrays.entries(dir)[k]))
    }
}
