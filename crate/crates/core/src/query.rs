//! Time-windowed hotspot queries over a preprocessed trajectory.
//!
//! A query over vertices `i..=j` splits at the middle vertex `w` and looks at
//! the best backward stretch ending in `w..=j` and the best forward stretch
//! starting in `i..=w`. When a stretch reaches past the far end of the
//! window, its square covers that whole half; otherwise the stretch itself is
//! the best one anchored on that side. At most one half is ever left
//! uncovered, and only that half is searched again, so a query visits
//! `O(log m)` levels with O(1) range lookups each. The returned square is at
//! least half as heavy as the true hotspot of the window.

use crate::error::{Error, Result};
use crate::preprocess::{build_hot_arrays_with_stats, BuildStats, Direction, HotArrays, HotTables};
use crate::trajectory::{edge_hotspot, Trajectory, Window, Witness};

/// Branch taken at one level of the vertex-aligned search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Case {
    /// Zero-length window.
    Point,
    /// Window inside a single edge.
    Edge,
    /// Both halves covered by a single square.
    Covered,
    /// Neither half covered; the best anchored stretches are exact.
    Exact,
    /// Right half covered, search continues on the left half.
    RecurseLeft,
    /// Left half covered, search continues on the right half.
    RecurseRight,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QueryTrace {
    /// Number of levels visited.
    pub depth: usize,
    /// Branch taken at the first level.
    pub top_case: Case,
}

#[derive(Default)]
struct Best(Option<Witness>);

impl Best {
    fn offer(&mut self, w: Witness) {
        if self.0.is_none_or(|b| w.score > b.score) {
            self.0 = Some(w);
        }
    }
}

/// Immutable query structure for one trajectory and one square side length.
#[derive(Debug, Clone)]
pub struct HotspotIndex {
    traj: Trajectory,
    side: f64,
    tables: HotTables,
}

impl HotspotIndex {
    pub fn build(traj: Trajectory, side: f64) -> Result<Self> {
        Self::build_with_stats(traj, side).map(|(idx, _)| idx)
    }

    pub fn build_with_stats(traj: Trajectory, side: f64) -> Result<(Self, BuildStats)> {
        let (arrays, stats) = build_hot_arrays_with_stats(&traj, side)?;
        let tables = HotTables::new(arrays)?;
        Ok((Self { traj, side, tables }, stats))
    }

    pub fn trajectory(&self) -> &Trajectory {
        &self.traj
    }

    pub fn side(&self) -> f64 {
        self.side
    }

    pub fn arrays(&self) -> &HotArrays {
        self.tables.arrays()
    }

    pub fn tables(&self) -> &HotTables {
        &self.tables
    }

    /// Clamps `[x, y]` to the trajectory's time span.
    pub fn clamp_window(&self, x: f64, y: f64) -> Result<Window> {
        if !(x.is_finite() && y.is_finite()) || x > y {
            return Err(Error::InvalidWindow { start: x, end: y });
        }
        let span = self.traj.span();
        Ok(Window { start: x.clamp(span.start, span.end), end: y.clamp(span.start, span.end) })
    }

    /// Backward stretch of vertex `k`, clipped to start no earlier than `lo`.
    fn backward_candidate(&self, k: usize, lo: f64) -> Witness {
        let e = self.arrays().backward()[k];
        Witness::new(e.square(self.side), Window { start: e.end.max(lo), end: self.traj.time(k) })
    }

    /// Forward stretch of vertex `k`, clipped to end no later than `hi`.
    fn forward_candidate(&self, k: usize, hi: f64) -> Witness {
        let e = self.arrays().forward()[k];
        Witness::new(e.square(self.side), Window { start: self.traj.time(k), end: e.end.min(hi) })
    }

    pub fn query_vertex_aligned(&self, i: usize, j: usize) -> Result<Witness> {
        self.query_vertex_aligned_traced(i, j).map(|(w, _)| w)
    }

    /// Approximate hotspot of the sub-trajectory between vertices `i` and `j`.
    pub fn query_vertex_aligned_traced(&self, i: usize, j: usize) -> Result<(Witness, QueryTrace)> {
        let n = self.traj.len();
        if i > j || j >= n {
            return Err(Error::InvalidRange { i, j, n });
        }
        let (mut i, mut j) = (i, j);
        let mut best = Best::default();
        let mut depth = 0;
        let mut top_case = None;
        loop {
            depth += 1;
            let (ti, tj) = (self.traj.time(i), self.traj.time(j));
            if i == j {
                best.offer(Witness::at_point(self.traj.loc(i), ti, self.side));
                top_case.get_or_insert(Case::Point);
                break;
            }
            if j == i + 1 {
                best.offer(edge_hotspot(&self.traj, Window { start: ti, end: tj }, self.side)?);
                top_case.get_or_insert(Case::Edge);
                break;
            }
            let w = i + (j - i) / 2;
            let (kb, back) = self.tables.hot_range(Direction::Backward, w, j)?;
            let (kf, fwd) = self.tables.hot_range(Direction::Forward, i, w)?;
            best.offer(self.backward_candidate(kb, ti));
            best.offer(self.forward_candidate(kf, tj));
            // reaching exactly to the boundary counts as covering it
            let case = match (back.end <= ti, fwd.end >= tj) {
                (true, true) => Case::Covered,
                (false, false) => Case::Exact,
                (false, true) => Case::RecurseLeft,
                (true, false) => Case::RecurseRight,
            };
            top_case.get_or_insert(case);
            match case {
                Case::RecurseLeft => j = w,
                Case::RecurseRight => i = w,
                Case::Exact => {
                    self.offer_remaining_anchored(i, w, j, &mut best)?;
                    break;
                }
                _ => break,
            }
        }
        let trace = QueryTrace { depth, top_case: top_case.expect("at least one level") };
        Ok((best.0.expect("at least one candidate"), trace))
    }

    /// In the uncovered case the range maxima already give the best backward
    /// stretch ending in `w..=j` and forward stretch starting in `i..=w`.
    /// This adds the other two families (backward stretches ending before
    /// `w`, forward ones starting after `w`), clipped to the window, so the
    /// result equals the best vertex-anchored stretch of the window.
    ///
    /// Stretch endpoints are non-decreasing in the vertex index, so the
    /// stretches that get clipped form a prefix (backward) or suffix
    /// (forward) found by binary search; the rest are unclipped and compared
    /// by range argmax.
    fn offer_remaining_anchored(&self, i: usize, w: usize, j: usize, best: &mut Best) -> Result<()> {
        let (ti, tj) = (self.traj.time(i), self.traj.time(j));
        let arrays = self.arrays();

        let clipped = arrays.backward()[i..w].partition_point(|e| e.end <= ti);
        if clipped > 0 {
            best.offer(self.backward_candidate(i + clipped - 1, ti));
        }
        if i + clipped < w {
            let (k, _) = self.tables.hot_range(Direction::Backward, i + clipped, w - 1)?;
            best.offer(self.backward_candidate(k, ti));
        }

        let free = arrays.forward()[w + 1..=j].partition_point(|e| e.end < tj);
        if w + 1 + free <= j {
            best.offer(self.forward_candidate(w + 1 + free, tj));
        }
        if free > 0 {
            let (k, _) = self.tables.hot_range(Direction::Forward, w + 1, w + free)?;
            best.offer(self.forward_candidate(k, tj));
        }
        Ok(())
    }

    pub fn query(&self, x: f64, y: f64) -> Result<Witness> {
        self.query_traced(x, y).map(|(w, _)| w)
    }

    /// Approximate hotspot of the sub-trajectory over `[x, y]`, clamped to the
    /// trajectory's time span.
    pub fn query_traced(&self, x: f64, y: f64) -> Result<(Witness, QueryTrace)> {
        let win = self.clamp_window(x, y)?;
        if win.duration() == 0.0 {
            let wit = Witness::at_point(self.traj.locate(win.start)?, win.start, self.side);
            return Ok((wit, QueryTrace { depth: 0, top_case: Case::Point }));
        }
        let u = self.traj.first_at_or_after(win.start);
        let v = self.traj.last_at_or_before(win.end).expect("window starts inside span");
        if u > v {
            let wit = edge_hotspot(&self.traj, win, self.side)?;
            return Ok((wit, QueryTrace { depth: 0, top_case: Case::Edge }));
        }
        let (aligned, trace) = self.query_vertex_aligned_traced(u, v)?;
        let mut best = Best(Some(aligned));
        // a hotspot overhanging the window boundary contains u (or v), or can
        // slide along its edge until it does
        for k in [u, v] {
            best.offer(self.backward_candidate(k, win.start));
            best.offer(self.forward_candidate(k, win.end));
        }
        Ok((best.0.expect("aligned candidate"), trace))
    }

    pub fn whole_trajectory_hotspot(&self) -> Witness {
        let span = self.traj.span();
        self.query(span.start, span.end).expect("full span is a valid window")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::t4;
    use crate::trajectory::{weight_of_square, Vertex, EPS};

    fn index() -> HotspotIndex {
        HotspotIndex::build(t4(), 2.0).unwrap()
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-12
    }

    #[test]
    fn build_examples() {
        let idx = index();
        let durs: Vec<f64> = idx.arrays().backward().iter().map(|e| e.dur).collect();
        assert_eq!(durs, [0.0, 1.0, 1.0, 2.0]);
        let single = HotspotIndex::build(Trajectory::new(vec![Vertex::new(0.0, 1.0, 2.0)]).unwrap(), 1.0).unwrap();
        assert_eq!(single.arrays().forward()[0].dur, 0.0);
        assert!(matches!(HotspotIndex::build(t4(), 0.0), Err(Error::InvalidSide(_))));
    }

    #[test]
    fn aligned_examples() {
        let idx = index();
        let (w, trace) = idx.query_vertex_aligned_traced(0, 3).unwrap();
        assert!(close(w.score, 2.0));
        assert_eq!(w.interval, Window { start: 1.0, end: 3.0 });
        assert_eq!((w.square.anchor_x, w.square.anchor_y), (1.0, 0.0));
        assert_eq!(trace.top_case, Case::RecurseLeft);
        assert_eq!(trace.depth, 2);

        let (w, trace) = idx.query_vertex_aligned_traced(1, 3).unwrap();
        assert!(close(w.score, 2.0));
        assert_eq!(w.interval, Window { start: 1.0, end: 3.0 });
        assert_eq!(trace.top_case, Case::Covered);

        let w = idx.query_vertex_aligned(0, 1).unwrap();
        assert!(close(w.score, 1.0));
        assert_eq!(w.interval, Window { start: 0.0, end: 1.0 });

        let w = idx.query_vertex_aligned(2, 2).unwrap();
        assert_eq!(w.score, 0.0);
        assert!(matches!(idx.query_vertex_aligned(2, 1), Err(Error::InvalidRange { .. })));
        assert!(matches!(idx.query_vertex_aligned(0, 4), Err(Error::InvalidRange { .. })));
    }

    #[test]
    fn general_examples() {
        let idx = index();
        assert!(close(idx.query(0.5, 3.0).unwrap().score, 2.0));
        let w = idx.query(1.2, 1.8).unwrap();
        assert!(close(w.score, 0.6));
        let w = idx.query(0.0, 1.5).unwrap();
        assert!(close(w.score, 1.5));
        assert_eq!(w.interval, Window { start: 0.0, end: 1.5 });
        assert!(matches!(idx.query(2.0, 1.0), Err(Error::InvalidWindow { .. })));
        assert!(matches!(idx.query(f64::NAN, 1.0), Err(Error::InvalidWindow { .. })));
    }

    #[test]
    fn clamping() {
        let idx = index();
        assert_eq!(idx.clamp_window(-5.0, 10.0).unwrap(), Window { start: 0.0, end: 3.0 });
        assert!(close(idx.query(-5.0, 10.0).unwrap().score, 2.0));
        let w = idx.query(7.0, 9.0).unwrap();
        assert_eq!(w.score, 0.0);
        assert_eq!((w.square.anchor_x, w.square.anchor_y), (3.0, 2.0));
    }

    #[test]
    fn whole_trajectory_examples() {
        assert!(close(index().whole_trajectory_hotspot().score, 2.0));

        let line = Trajectory::new(vec![Vertex::new(0.0, 0.0, 0.0), Vertex::new(10.0, 10.0, 0.0)]).unwrap();
        let w = HotspotIndex::build(line, 4.0).unwrap().whole_trajectory_hotspot();
        assert!(close(w.score, 4.0));

        let still =
            Trajectory::new(vec![Vertex::new(0.0, 2.0, 2.0), Vertex::new(3.0, 2.0, 2.0), Vertex::new(7.0, 2.0, 2.0)])
                .unwrap();
        assert!(close(HotspotIndex::build(still, 1.0).unwrap().whole_trajectory_hotspot().score, 7.0));

        let single = Trajectory::new(vec![Vertex::new(5.0, 1.0, 1.0)]).unwrap();
        let w = HotspotIndex::build(single, 1.0).unwrap().whole_trajectory_hotspot();
        assert_eq!(w.score, 0.0);
        assert_eq!((w.square.anchor_x, w.square.anchor_y), (1.0, 1.0));
    }

    #[test]
    fn witnesses_are_certified() {
        let idx = index();
        let t = idx.trajectory();
        for &(x, y) in &[(0.0, 3.0), (0.5, 3.0), (1.2, 1.8), (0.0, 1.5), (0.1, 2.9), (2.0, 2.0)] {
            let w = idx.query(x, y).unwrap();
            let win = Window { start: x, end: y };
            assert!(win.covers(&w.interval));
            assert!(weight_of_square(t, win, &w.square).unwrap() >= w.score - EPS);
        }
    }

    #[test]
    fn index_is_shareable() {
        fn assert_send_sync<T: Send + Sync>() {}
        assert_send_sync::<HotspotIndex>();
    }
}
