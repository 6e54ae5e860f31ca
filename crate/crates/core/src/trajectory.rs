//! Trajectories, squares and certified witnesses.
//!
//! A trajectory is a sequence of time-stamped planar vertices; the position
//! between two consecutive vertices is linearly interpolated. All squares are
//! axis-parallel and closed, and every containment or fit test is inclusive
//! up to [`EPS`].

use crate::error::{Error, Result};

/// Absolute tolerance on lengths and durations, applied on the inclusive side
/// of fit and containment tests.
pub const EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    fn lerp(self, other: Point, f: f64) -> Point {
        Point::new(self.x + f * (other.x - self.x), self.y + f * (other.y - self.y))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Vertex {
    pub t: f64,
    pub loc: Point,
}

impl Vertex {
    pub const fn new(t: f64, x: f64, y: f64) -> Self {
        Self { t, loc: Point::new(x, y) }
    }
}

/// A closed time interval `[start, end]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window {
    pub start: f64,
    pub end: f64,
}

impl Window {
    pub fn new(start: f64, end: f64) -> Result<Self> {
        if !start.is_finite() || !end.is_finite() || start > end {
            return Err(Error::InvalidWindow { start, end });
        }
        Ok(Self { start, end })
    }

    pub const fn point(t: f64) -> Self {
        Self { start: t, end: t }
    }

    pub fn duration(&self) -> f64 {
        self.end - self.start
    }

    /// Whether `other` lies inside `self`, with `EPS` slack at both ends.
    pub fn covers(&self, other: &Window) -> bool {
        other.start >= self.start - EPS && other.end <= self.end + EPS
    }
}

/// Axis-aligned bounding box.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BBox {
    pub min_x: f64,
    pub max_x: f64,
    pub min_y: f64,
    pub max_y: f64,
}

impl BBox {
    pub fn from_point(p: Point) -> Self {
        Self { min_x: p.x, max_x: p.x, min_y: p.y, max_y: p.y }
    }

    pub fn include(&mut self, p: Point) {
        self.min_x = self.min_x.min(p.x);
        self.max_x = self.max_x.max(p.x);
        self.min_y = self.min_y.min(p.y);
        self.max_y = self.max_y.max(p.y);
    }

    pub fn width(&self) -> f64 {
        self.max_x - self.min_x
    }

    pub fn height(&self) -> f64 {
        self.max_y - self.min_y
    }

    /// True iff the box fits inside some `side`×`side` square.
    pub fn fits(&self, side: f64) -> bool {
        self.width() <= side + EPS && self.height() <= side + EPS
    }

    /// The square of the given side anchored at the box's minimum corner.
    pub fn covering_square(&self, side: f64) -> Result<Square> {
        if !self.fits(side) {
            return Err(Error::Precondition("bounding box does not fit in the square"));
        }
        Ok(Square { anchor_x: self.min_x, anchor_y: self.min_y, side })
    }
}

/// Closed square `[anchor_x, anchor_x + side] × [anchor_y, anchor_y + side]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Square {
    pub anchor_x: f64,
    pub anchor_y: f64,
    pub side: f64,
}

impl Square {
    pub fn anchored_at(p: Point, side: f64) -> Self {
        Self { anchor_x: p.x, anchor_y: p.y, side }
    }

    pub fn contains(&self, p: Point) -> bool {
        p.x >= self.anchor_x - EPS
            && p.x <= self.anchor_x + self.side + EPS
            && p.y >= self.anchor_y - EPS
            && p.y <= self.anchor_y + self.side + EPS
    }

    /// Parameter range of the segment `p0 → p1` lying inside the square
    /// (inflated by `EPS`), or `None` when they are disjoint.
    pub fn clip(&self, p0: Point, p1: Point) -> Option<(f64, f64)> {
        clip_segment(
            p0,
            p1,
            Point::new(self.anchor_x - EPS, self.anchor_y - EPS),
            Point::new(self.anchor_x + self.side + EPS, self.anchor_y + self.side + EPS),
        )
    }
}

/// Liang–Barsky clipping of the segment `p0 + λ(p1 − p0)`, `λ ∈ [0, 1]`,
/// against the closed box `[lo, hi]`. Returns the parameter interval inside.
pub fn clip_segment(p0: Point, p1: Point, lo: Point, hi: Point) -> Option<(f64, f64)> {
    let mut enter = 0.0f64;
    let mut leave = 1.0f64;
    for (p, d, min, max) in [(p0.x, p1.x - p0.x, lo.x, hi.x), (p0.y, p1.y - p0.y, lo.y, hi.y)] {
        if d == 0.0 {
            if p < min || p > max {
                return None;
            }
        } else {
            let (mut a, mut b) = ((min - p) / d, (max - p) / d);
            if a > b {
                std::mem::swap(&mut a, &mut b);
            }
            enter = enter.max(a);
            leave = leave.min(b);
        }
    }
    (enter <= leave).then_some((enter, leave))
}

/// A square together with a time interval whose sub-trajectory it contains.
/// The score is the interval's duration, a certified lower bound on the
/// square's weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Witness {
    pub square: Square,
    pub interval: Window,
    pub score: f64,
}

impl Witness {
    pub fn new(square: Square, interval: Window) -> Self {
        Self { square, interval, score: interval.duration() }
    }

    /// Zero-score witness at a single location.
    pub fn at_point(p: Point, t: f64, side: f64) -> Self {
        Self::new(Square::anchored_at(p, side), Window::point(t))
    }
}

/// A polygonal trajectory with strictly increasing time-stamps.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    vertices: Vec<Vertex>,
}

impl Trajectory {
    pub fn new(vertices: Vec<Vertex>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::EmptyTrajectory);
        }
        for (index, v) in vertices.iter().enumerate() {
            if !(v.t.is_finite() && v.loc.x.is_finite() && v.loc.y.is_finite()) {
                return Err(Error::NonFinite { index });
            }
            if index > 0 {
                let prev = vertices[index - 1].t;
                if v.t <= prev {
                    return Err(Error::NonIncreasingTime { index, prev, t: v.t });
                }
            }
        }
        Ok(Self { vertices })
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    #[inline]
    pub fn time(&self, i: usize) -> f64 {
        self.vertices[i].t
    }

    #[inline]
    pub fn loc(&self, i: usize) -> Point {
        self.vertices[i].loc
    }

    pub fn start_time(&self) -> f64 {
        self.vertices[0].t
    }

    pub fn end_time(&self) -> f64 {
        self.vertices[self.vertices.len() - 1].t
    }

    pub fn span(&self) -> Window {
        Window { start: self.start_time(), end: self.end_time() }
    }

    /// Index of the first vertex with time-stamp `>= t` (may be `len()`).
    pub fn first_at_or_after(&self, t: f64) -> usize {
        self.vertices.partition_point(|v| v.t < t)
    }

    /// Index of the last vertex with time-stamp `<= t`, if any.
    pub fn last_at_or_before(&self, t: f64) -> Option<usize> {
        self.vertices.partition_point(|v| v.t <= t).checked_sub(1)
    }

    fn check_time(&self, t: f64) -> Result<()> {
        let span = self.span();
        if !(t >= span.start && t <= span.end) {
            return Err(Error::OutOfRange { t, start: span.start, end: span.end });
        }
        Ok(())
    }

    fn check_window(&self, w: Window) -> Result<()> {
        if w.start.is_nan() || w.end.is_nan() || w.start > w.end {
            return Err(Error::InvalidWindow { start: w.start, end: w.end });
        }
        self.check_time(w.start)?;
        self.check_time(w.end)
    }

    /// Position on edge `k → k+1` at time `t`.
    #[inline]
    pub(crate) fn on_edge(&self, k: usize, t: f64) -> Point {
        let (a, b) = (&self.vertices[k], &self.vertices[k + 1]);
        if t == a.t {
            a.loc
        } else if t == b.t {
            b.loc
        } else {
            a.loc.lerp(b.loc, (t - a.t) / (b.t - a.t))
        }
    }

    /// Position of the entity at time `t`.
    pub fn locate(&self, t: f64) -> Result<Point> {
        self.check_time(t)?;
        let k = self.vertices.partition_point(|v| v.t <= t);
        // k >= 1 because t >= start_time
        let prev = &self.vertices[k - 1];
        if prev.t == t || k == self.vertices.len() {
            return Ok(prev.loc);
        }
        Ok(self.on_edge(k - 1, t))
    }

    /// Tight bounding box of the sub-trajectory over `w`.
    pub fn bbox(&self, w: Window) -> Result<BBox> {
        self.check_window(w)?;
        let mut bb = BBox::from_point(self.locate(w.start)?);
        bb.include(self.locate(w.end)?);
        let first = self.vertices.partition_point(|v| v.t <= w.start);
        for v in self.vertices[first..].iter().take_while(|v| v.t < w.end) {
            bb.include(v.loc);
        }
        Ok(bb)
    }

    /// The same path traversed backwards, with negated time-stamps.
    pub fn reversed(&self) -> Trajectory {
        let vertices = self.vertices.iter().rev().map(|v| Vertex { t: -v.t, loc: v.loc }).collect();
        Trajectory { vertices }
    }
}

/// Best witness for a window lying on a single edge.
///
/// Speed is constant along an edge, so every sub-segment of a given duration
/// has the same extents; the witness starts at `w.start`.
pub fn edge_hotspot(traj: &Trajectory, w: Window, side: f64) -> Result<Witness> {
    traj.check_window(w)?;
    let after_start = traj.vertices.partition_point(|v| v.t <= w.start);
    if after_start < traj.len() && traj.time(after_start) < w.end {
        return Err(Error::Precondition("window spans a vertex"));
    }
    let p = traj.locate(w.start)?;
    let duration = w.duration();
    if duration == 0.0 {
        return Ok(Witness::at_point(p, w.start, side));
    }
    let q = traj.locate(w.end)?;
    let mut frac = 1.0f64;
    for disp in [(q.x - p.x).abs(), (q.y - p.y).abs()] {
        if disp > 0.0 {
            frac = frac.min(side / disp);
        }
    }
    let (end, r) = if frac >= 1.0 {
        (w.end, q)
    } else {
        let end = w.start + duration * frac;
        (end, p.lerp(q, frac))
    };
    let mut bb = BBox::from_point(p);
    bb.include(r);
    let square = bb.covering_square(side)?;
    Ok(Witness::new(square, Window { start: w.start, end }))
}

/// Longest single contiguous stretch of the window spent inside the closed
/// square, computed by a sweep over the edges with exact segment clipping.
pub fn weight_of_square(traj: &Trajectory, w: Window, square: &Square) -> Result<f64> {
    traj.check_window(w)?;
    if traj.len() == 1 || w.duration() == 0.0 {
        return Ok(0.0);
    }
    let last_edge = traj.len() - 2;
    let mut k = traj.last_at_or_before(w.start).unwrap_or(0).min(last_edge);
    let mut best = 0.0f64;
    let mut run_start = 0.0;
    let mut open = false;
    while k <= last_edge && traj.time(k) < w.end {
        let a = traj.time(k).max(w.start);
        let b = traj.time(k + 1).min(w.end);
        if b > a {
            let (pa, pb) = (traj.on_edge(k, a), traj.on_edge(k, b));
            match square.clip(pa, pb) {
                Some((l0, l1)) => {
                    let c = if l0 <= 0.0 { a } else { a + l0 * (b - a) };
                    let d = if l1 >= 1.0 { b } else { a + l1 * (b - a) };
                    if !(open && l0 <= 0.0) {
                        run_start = c;
                    }
                    best = best.max(d - run_start);
                    open = l1 >= 1.0;
                }
                None => open = false,
            }
        }
        k += 1;
    }
    Ok(best)
}
