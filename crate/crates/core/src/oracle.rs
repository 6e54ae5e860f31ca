//! Brute-force reference computations.
//!
//! Nothing here touches the sliding queues, the hot arrays or the range
//! argmax used by the index; only the trajectory model is shared. Both
//! optimum estimates are lower bounds on the true hotspot weight.

use crate::error::{Error, Result};
use crate::preprocess::HotEntry;
use crate::trajectory::{clip_segment, edge_hotspot, weight_of_square, BBox, Point, Trajectory, Window, Witness, EPS};

/// How far along `from → to` (as a fraction) the path can go while the box
/// grown by the reached point still fits in a `side`×`side` square.
fn reach_along(from: Point, to: Point, bb: &BBox, side: f64) -> f64 {
    let lo = Point::new(bb.max_x - side, bb.max_y - side);
    let hi = Point::new(bb.min_x + side, bb.min_y + side);
    match clip_segment(from, to, lo, hi) {
        Some((enter, leave)) if enter <= 0.0 => leave,
        _ => 0.0,
    }
}

fn check_vertex(traj: &Trajectory, v: usize) -> Result<()> {
    if v >= traj.len() {
        return Err(Error::InvalidRange { i: v, j: v, n: traj.len() });
    }
    Ok(())
}

/// Longest fitting stretch ending at vertex `v`, by walking back vertex by
/// vertex and then solving on the first edge that no longer fits.
pub fn oracle_backward_at_vertex(traj: &Trajectory, side: f64, v: usize) -> Result<HotEntry> {
    check_vertex(traj, v)?;
    let mut bb = BBox::from_point(traj.loc(v));
    let mut u = v;
    while u > 0 {
        let mut grown = bb;
        grown.include(traj.loc(u - 1));
        if !grown.fits(side) {
            break;
        }
        bb = grown;
        u -= 1;
    }
    let mut start = traj.time(u);
    if u > 0 {
        let f = reach_along(traj.loc(u), traj.loc(u - 1), &bb, side);
        if f > 0.0 {
            start = traj.time(u) + f * (traj.time(u - 1) - traj.time(u));
            bb.include(traj.locate(start)?);
        }
    }
    Ok(HotEntry { dur: traj.time(v) - start, end: start, anchor: Point::new(bb.min_x, bb.min_y) })
}

/// Longest fitting stretch starting at vertex `v`.
pub fn oracle_forward_at_vertex(traj: &Trajectory, side: f64, v: usize) -> Result<HotEntry> {
    check_vertex(traj, v)?;
    let n = traj.len();
    let mut bb = BBox::from_point(traj.loc(v));
    let mut u = v;
    while u + 1 < n {
        let mut grown = bb;
        grown.include(traj.loc(u + 1));
        if !grown.fits(side) {
            break;
        }
        bb = grown;
        u += 1;
    }
    let mut end = traj.time(u);
    if u + 1 < n {
        let f = reach_along(traj.loc(u), traj.loc(u + 1), &bb, side);
        if f > 0.0 {
            end = traj.time(u) + f * (traj.time(u + 1) - traj.time(u));
            bb.include(traj.locate(end)?);
        }
    }
    Ok(HotEntry { dur: end - traj.time(v), end, anchor: Point::new(bb.min_x, bb.min_y) })
}

fn check_window(traj: &Trajectory, w: Window) -> Result<()> {
    let span = traj.span();
    if !(w.start <= w.end && w.start >= span.start && w.end <= span.end) {
        return Err(Error::InvalidWindow { start: w.start, end: w.end });
    }
    Ok(())
}

/// Per-vertex stretches of one trajectory, computed once and reused across
/// windows.
#[derive(Debug, Clone)]
pub struct AnchoredOracle<'a> {
    traj: &'a Trajectory,
    side: f64,
    backward: Vec<HotEntry>,
    forward: Vec<HotEntry>,
}

impl<'a> AnchoredOracle<'a> {
    pub fn new(traj: &'a Trajectory, side: f64) -> Result<Self> {
        let backward = (0..traj.len()).map(|v| oracle_backward_at_vertex(traj, side, v)).collect::<Result<_>>()?;
        let forward = (0..traj.len()).map(|v| oracle_forward_at_vertex(traj, side, v)).collect::<Result<_>>()?;
        Ok(Self { traj, side, backward, forward })
    }

    pub fn backward(&self) -> &[HotEntry] {
        &self.backward
    }

    pub fn forward(&self) -> &[HotEntry] {
        &self.forward
    }

    /// Best stretch of `w` that starts or ends at a vertex, or lies on a
    /// single edge.
    pub fn best_in(&self, w: Window) -> Result<Witness> {
        check_window(self.traj, w)?;
        let traj = self.traj;
        let mut best = Witness::at_point(traj.locate(w.start)?, w.start, self.side);
        let mut offer = |cand: Witness| {
            if cand.score > best.score {
                best = cand;
            }
        };
        let first = traj.first_at_or_after(w.start);
        let mut cut = w.start;
        for v in first..traj.len() {
            let t = traj.time(v);
            if t > w.end {
                break;
            }
            let b = self.backward[v];
            offer(Witness::new(b.square(self.side), Window { start: b.end.max(w.start), end: t }));
            let f = self.forward[v];
            offer(Witness::new(f.square(self.side), Window { start: t, end: f.end.min(w.end) }));
            if t > cut {
                offer(edge_hotspot(traj, Window { start: cut, end: t }, self.side)?);
            }
            cut = t;
        }
        if w.end > cut {
            offer(edge_hotspot(traj, Window { start: cut, end: w.end }, self.side)?);
        }
        Ok(best)
    }
}

/// Best vertex-anchored or single-edge stretch inside `w`.
pub fn oracle_vertex_anchored_opt(traj: &Trajectory, side: f64, w: Window) -> Result<Witness> {
    AnchoredOracle::new(traj, side)?.best_in(w)
}

/// Min/max of vertex coordinates over index ranges, by doubling.
struct CoordRanges {
    levels: Vec<Vec<BBox>>,
}

impl CoordRanges {
    fn new(traj: &Trajectory) -> Self {
        let mut levels = vec![traj.vertices().iter().map(|v| BBox::from_point(v.loc)).collect::<Vec<_>>()];
        let mut width = 1;
        while 2 * width <= traj.len() {
            let prev = levels.last().unwrap();
            let next = (0..=traj.len() - 2 * width).map(|i| union(&prev[i], &prev[i + width])).collect();
            levels.push(next);
            width *= 2;
        }
        Self { levels }
    }

    fn bbox(&self, i: usize, j: usize) -> BBox {
        let level = (usize::BITS - 1 - (j - i + 1).leading_zeros()) as usize;
        let row = &self.levels[level];
        union(&row[i], &row[j + 1 - (1 << level)])
    }
}

fn union(a: &BBox, b: &BBox) -> BBox {
    BBox {
        min_x: a.min_x.min(b.min_x),
        max_x: a.max_x.max(b.max_x),
        min_y: a.min_y.min(b.min_y),
        max_y: a.max_y.max(b.max_y),
    }
}

/// Sampled estimate of the window's optimum: from every vertex time, the
/// window start, and `k` evenly spaced times per edge, extend forward as far
/// as the stretch fits (clipped to the window). Start times are visited in
/// increasing order, so the last fitting vertex only moves forward.
pub fn oracle_sampled_opt(traj: &Trajectory, side: f64, w: Window, k: usize) -> Result<f64> {
    check_window(traj, w)?;
    if k == 0 {
        return Err(Error::Precondition("at least one sample per edge"));
    }
    let n = traj.len();
    if n == 1 || w.duration() == 0.0 {
        return Ok(0.0);
    }
    let ranges = CoordRanges::new(traj);
    let mut starts = Vec::new();
    let first_edge = traj.last_at_or_before(w.start).unwrap_or(0).min(n - 2);
    for e in first_edge..n - 1 {
        let a = traj.time(e).max(w.start);
        let b = traj.time(e + 1).min(w.end);
        if a > w.end {
            break;
        }
        if b < a {
            continue;
        }
        starts.extend((0..k).map(|s| a + (b - a) * s as f64 / k as f64));
        if b == traj.time(e + 1) {
            starts.push(b);
        }
    }

    let mut best = 0.0f64;
    // index of the last vertex inside the current stretch
    let mut last = 0usize;
    for t0 in starts {
        let next = traj.vertices().partition_point(|v| v.t <= t0);
        if next == n {
            continue;
        }
        let p0 = traj.locate(t0)?;
        let grown = |upto: usize| {
            let mut bb = ranges.bbox(next, upto);
            bb.include(p0);
            bb
        };
        if last + 1 < next {
            last = next - 1;
        }
        while last + 1 < n && traj.time(last + 1) <= w.end && grown(last + 1).fits(side) {
            last += 1;
        }
        let (bb, from, t_from) =
            if last >= next { (grown(last), traj.loc(last), traj.time(last)) } else { (BBox::from_point(p0), p0, t0) };
        let reach = if last + 1 < n {
            let f = reach_along(from, traj.loc(last + 1), &bb, side);
            t_from + f * (traj.time(last + 1) - t_from)
        } else {
            t_from
        };
        best = best.max(reach.min(w.end) - t0);
    }
    Ok(best)
}

/// Checks that the witness interval lies in `w`, that its sub-trajectory is
/// inside the witness square, and that the score is the interval's duration.
pub fn verify_witness(traj: &Trajectory, w: Window, wit: &Witness) -> bool {
    let iv = wit.interval;
    if iv.start.is_nan()
        || iv.end.is_nan()
        || iv.start > iv.end
        || !w.covers(&iv)
        || (wit.score - iv.duration()).abs() > EPS
    {
        return false;
    }
    let span = traj.span();
    let clipped = Window { start: iv.start.max(span.start), end: iv.end.min(span.end) };
    if clipped.start > clipped.end || !span.covers(&iv) {
        return false;
    }
    if iv.duration() == 0.0 {
        return traj.locate(clipped.start).is_ok_and(|p| wit.square.contains(p));
    }
    weight_of_square(traj, clipped, &wit.square).is_ok_and(|weight| weight >= iv.duration() - EPS)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::t4;
    use crate::trajectory::{Square, Vertex};

    fn win(a: f64, b: f64) -> Window {
        Window::new(a, b).unwrap()
    }

    #[test]
    fn backward_examples() {
        let t = t4();
        let e = oracle_backward_at_vertex(&t, 2.0, 3).unwrap();
        assert_eq!((e.dur, e.end), (2.0, 1.0));
        assert_eq!(oracle_backward_at_vertex(&t, 2.0, 0).unwrap().dur, 0.0);
        let e = oracle_backward_at_vertex(&t, 2.0, 2).unwrap();
        assert_eq!((e.dur, e.end), (1.0, 1.0));
        assert!(oracle_backward_at_vertex(&t, 2.0, 4).is_err());
    }

    #[test]
    fn forward_examples() {
        let t = t4();
        let durs: Vec<f64> = (0..4).map(|v| oracle_forward_at_vertex(&t, 2.0, v).unwrap().dur).collect();
        assert_eq!(durs, [1.5, 2.0, 1.0, 0.0]);
    }

    #[test]
    fn anchored_examples() {
        let t = t4();
        let w = oracle_vertex_anchored_opt(&t, 2.0, win(0.0, 3.0)).unwrap();
        assert_eq!(w.score, 2.0);
        assert!(verify_witness(&t, win(0.0, 3.0), &w));
        assert_eq!(oracle_vertex_anchored_opt(&t, 2.0, win(0.0, 1.5)).unwrap().score, 1.5);
        assert_eq!(oracle_vertex_anchored_opt(&t, 2.0, win(1.7, 1.7)).unwrap().score, 0.0);
        assert!(oracle_vertex_anchored_opt(&t, 2.0, win(1.0, 4.0)).is_err());
        let w = oracle_vertex_anchored_opt(&t, 2.0, win(1.2, 1.8)).unwrap();
        assert!((w.score - 0.6).abs() < 1e-12);
    }

    #[test]
    fn sampled_examples() {
        let t = t4();
        assert_eq!(oracle_sampled_opt(&t, 2.0, win(0.0, 3.0), 100).unwrap(), 2.0);

        let diag = Trajectory::new(vec![Vertex::new(0.0, 0.0, 0.0), Vertex::new(10.0, 6.0, 8.0)]).unwrap();
        let v = oracle_sampled_opt(&diag, 4.0, win(0.0, 10.0), 1000).unwrap();
        assert!((v - 5.0).abs() < 0.02);

        let coarse = oracle_sampled_opt(&t, 2.0, win(0.2, 2.7), 1).unwrap();
        let fine = oracle_sampled_opt(&t, 2.0, win(0.2, 2.7), 1000).unwrap();
        assert!(coarse <= fine + EPS);
        assert!(fine <= 2.5 + EPS);
        assert!(oracle_sampled_opt(&t, 2.0, win(0.0, 3.0), 0).is_err());
    }

    #[test]
    fn sampled_finds_mid_edge_optimum() {
        // the best stretch starts in the middle of the first edge
        let tr = Trajectory::new(vec![
            Vertex::new(0.0, 0.0, 0.0),
            Vertex::new(10.0, 10.0, 0.0),
            Vertex::new(20.0, 10.5, 0.0),
            Vertex::new(21.0, 50.0, 0.0),
        ])
        .unwrap();
        let v = oracle_sampled_opt(&tr, 1.0, tr.span(), 1000).unwrap();
        // x from 9.5 to 10.5: 0.5 on the first edge, all of the second, a sliver of the third
        assert!((10.5 - 0.02..=10.5 + 1.0 / 39.5 + EPS).contains(&v), "{v}");
    }

    #[test]
    fn verify_examples() {
        let t = t4();
        let wit = Witness::new(Square { anchor_x: 1.0, anchor_y: 0.0, side: 2.0 }, win(1.0, 3.0));
        assert!(verify_witness(&t, win(0.0, 3.0), &wit));
        assert!(!verify_witness(&t, win(2.0, 3.0), &wit));
        let inflated = Witness { score: wit.score + 0.1, ..wit };
        assert!(!verify_witness(&t, win(0.0, 3.0), &inflated));
        let outside = Witness::new(Square { anchor_x: 0.0, anchor_y: 0.0, side: 2.0 }, win(0.0, 3.0));
        assert!(!verify_witness(&t, win(0.0, 3.0), &outside));
    }
}
