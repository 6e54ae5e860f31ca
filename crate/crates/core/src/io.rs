//! Trajectory CSV files, query batches and synthetic trajectories.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::trajectory::{Point, Trajectory, Vertex};

fn parse_error(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn parse_number(field: &str, line: usize, what: &str) -> Result<f64> {
    let v: f64 = field
        .trim()
        .parse()
        .map_err(|_| parse_error(line, format!("{what}: cannot parse {:?} as a number", field.trim())))?;
    if !v.is_finite() {
        return Err(parse_error(line, format!("{what}: non-finite value {v}")));
    }
    Ok(v)
}

/// Parses `t,x,y` rows (one per line, optional `t,x,y` header, blank lines
/// ignored). Time-stamps must be strictly increasing.
pub fn parse_trajectory(text: &str) -> Result<Trajectory> {
    let mut vertices: Vec<Vertex> = Vec::new();
    let mut seen_row = false;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let row = raw.trim();
        if row.is_empty() {
            continue;
        }
        if !seen_row {
            seen_row = true;
            let header: Vec<String> = row.split(',').map(|f| f.trim().to_ascii_lowercase()).collect();
            if header == ["t", "x", "y"] {
                continue;
            }
        }
        let fields: Vec<&str> = row.split(',').collect();
        if fields.len() != 3 {
            return Err(parse_error(line, format!("expected 3 fields t,x,y, found {}", fields.len())));
        }
        let t = parse_number(fields[0], line, "t")?;
        let x = parse_number(fields[1], line, "x")?;
        let y = parse_number(fields[2], line, "y")?;
        if let Some(prev) = vertices.last() {
            if t <= prev.t {
                return Err(parse_error(line, format!("non-increasing time {t} after {}", prev.t)));
            }
        }
        vertices.push(Vertex::new(t, x, y));
    }
    if vertices.is_empty() {
        return Err(Error::EmptyTrajectory);
    }
    Trajectory::new(vertices)
}

/// CSV text with a `t,x,y` header. Values use the shortest decimal form that
/// parses back to the same `f64`.
pub fn format_trajectory(traj: &Trajectory) -> String {
    let mut out = String::with_capacity(traj.len() * 48 + 6);
    out.push_str("t,x,y\n");
    for v in traj.vertices() {
        let _ = writeln!(out, "{},{},{}", v.t, v.loc.x, v.loc.y);
    }
    out
}

/// Parses a query batch: two time values per line, whitespace separated.
/// Blank lines and lines starting with `#` are skipped.
pub fn parse_queries(text: &str) -> Result<Vec<(f64, f64)>> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let row = raw.trim();
        if row.is_empty() || row.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = row.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(parse_error(line, format!("expected 2 values, found {}", fields.len())));
        }
        let x = parse_number(fields[0], line, "window start")?;
        let y = parse_number(fields[1], line, "window end")?;
        if x > y {
            return Err(parse_error(line, format!("window start {x} after end {y}")));
        }
        out.push((x, y));
    }
    Ok(out)
}

/// Shape of a synthetic random-waypoint trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenParams {
    /// Side of the square region the walk stays in.
    pub extent: f64,
    /// Distance covered per unit time while moving.
    pub speed: f64,
    /// Probability that a step is a dwell step.
    pub dwell_fraction: f64,
    /// Dwell steps land within this distance (per axis) of where the dwell began.
    pub dwell_radius: f64,
}

impl Default for GenParams {
    fn default() -> Self {
        Self { extent: 100.0, speed: 2.0, dwell_fraction: 0.2, dwell_radius: 0.5 }
    }
}

/// Seeded random-waypoint walk with dwell episodes. Time steps are uniform in
/// `[0.5, 1.5)`.
pub fn generate(n: usize, seed: u64, params: &GenParams) -> Result<Trajectory> {
    if n == 0 {
        return Err(Error::Precondition("trajectory needs at least one vertex"));
    }
    if !(0.0..=1.0).contains(&params.dwell_fraction) {
        return Err(Error::Precondition("dwell fraction must be within [0, 1]"));
    }
    if !(params.extent > 0.0 && params.speed > 0.0 && params.dwell_radius >= 0.0) {
        return Err(Error::Precondition("extent and speed must be positive, dwell radius non-negative"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ext = params.extent;
    let r = params.dwell_radius;
    let random_point = |rng: &mut ChaCha8Rng| Point::new(rng.gen_range(0.0..ext), rng.gen_range(0.0..ext));

    let mut pos = random_point(&mut rng);
    let mut target = random_point(&mut rng);
    let mut anchor = pos;
    let mut dwelling = false;
    let mut t = 0.0f64;
    let mut vertices = Vec::with_capacity(n);
    vertices.push(Vertex { t, loc: pos });
    for _ in 1..n {
        let dt = rng.gen_range(0.5..1.5);
        t += dt;
        if rng.gen_bool(params.dwell_fraction) {
            if !dwelling {
                anchor = pos;
                dwelling = true;
            }
            pos = Point::new(anchor.x + rng.gen_range(-r..=r), anchor.y + rng.gen_range(-r..=r));
        } else {
            dwelling = false;
            let (dx, dy) = (target.x - pos.x, target.y - pos.y);
            let dist = dx.hypot(dy);
            let step = params.speed * dt;
            if dist <= step {
                pos = target;
                target = random_point(&mut rng);
            } else {
                pos = Point::new(pos.x + dx * step / dist, pos.y + dy * step / dist);
            }
        }
        vertices.push(Vertex { t, loc: pos });
    }
    Trajectory::new(vertices)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::t4;
    use crate::query::HotspotIndex;

    #[test]
    fn parse_examples() {
        assert_eq!(parse_trajectory("0,0,0\n1,1,0\n2,3,0\n3,3,2").unwrap(), t4());
        assert_eq!(parse_trajectory("t,x,y\n0,0,0\n1,1,0\n2,3,0\n3,3,2\n").unwrap(), t4());
        assert_eq!(parse_trajectory(" T , X , Y \n0, 0, 0\n\n1,1,0\n2,3,0\n3,3,2\n").unwrap(), t4());
        match parse_trajectory("0,0,0\n0,1,1") {
            Err(Error::Parse { line: 2, msg }) => assert!(msg.contains("non-increasing")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn parse_errors() {
        assert_eq!(parse_trajectory(""), Err(Error::EmptyTrajectory));
        assert_eq!(parse_trajectory("t,x,y\n"), Err(Error::EmptyTrajectory));
        assert!(matches!(parse_trajectory("0,0\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_trajectory("0,0,0\n1,nan,0"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_trajectory("0,0,0\n1,inf,0"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_trajectory("0,0,0\n1,abc,0"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_trajectory("1,0,0\n0.5,0,0"), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn queries() {
        let q = parse_queries("# windows\n0 3\n\n1.2\t1.8\n-1 10\n").unwrap();
        assert_eq!(q, vec![(0.0, 3.0), (1.2, 1.8), (-1.0, 10.0)]);
        assert!(matches!(parse_queries("1 2 3"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_queries("0 1\n3 2"), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn generation_is_deterministic() {
        let p = GenParams::default();
        assert_eq!(generate(500, 9, &p).unwrap(), generate(500, 9, &p).unwrap());
        assert_ne!(generate(500, 9, &p).unwrap(), generate(500, 10, &p).unwrap());
        assert!(generate(0, 1, &p).is_err());
        assert!(generate(5, 1, &GenParams { dwell_fraction: 1.5, ..p }).is_err());
    }

    #[test]
    fn generated_times_increase() {
        let tr = generate(1000, 4, &GenParams::default()).unwrap();
        assert_eq!(tr.len(), 1000);
        assert!(tr.vertices().windows(2).all(|w| w[0].t < w[1].t));
        let mean_dt = tr.end_time() / 999.0;
        assert!((mean_dt - 1.0).abs() < 0.1);
    }

    #[test]
    fn full_dwell_is_one_hotspot() {
        let p = GenParams { dwell_fraction: 1.0, ..GenParams::default() };
        let tr = generate(300, 2, &p).unwrap();
        let total = tr.span().duration();
        let idx = HotspotIndex::build(tr, 2.0 * p.dwell_radius).unwrap();
        assert_eq!(idx.whole_trajectory_hotspot().score, total);
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let tr = generate(2000, 77, &GenParams::default()).unwrap();
        let back = parse_trajectory(&format_trajectory(&tr)).unwrap();
        assert_eq!(back, tr);
        for (a, b) in back.vertices().iter().zip(tr.vertices()) {
            assert_eq!(a.t.to_bits(), b.t.to_bits());
            assert_eq!(a.loc.x.to_bits(), b.loc.x.to_bits());
            assert_eq!(a.loc.y.to_bits(), b.loc.y.to_bits());
        }
    }
}
