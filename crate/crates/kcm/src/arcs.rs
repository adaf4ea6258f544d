//! Exact arc geometry on the circle of directions (`d = 2` only).
//!
//! The stable set of a two-dimensional family is a finite union of closed
//! arcs whose endpoints are orthogonal to rule sites. Everything here is
//! decided with integer cross products; no angles are ever computed.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use serde::Serialize;

use crate::family::{is_stable, Direction, UpdateFamily};
use crate::{Error, Result};

/// A circular arc running counterclockwise from `start` to `end`.
///
/// `start == end` denotes a single point (both endpoints closed).
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct Arc {
    start: Direction,
    end: Direction,
    closed_start: bool,
    closed_end: bool,
}

impl Arc {
    pub fn point(dir: Direction) -> Arc {
        Arc {
            start: dir.clone(),
            end: dir,
            closed_start: true,
            closed_end: true,
        }
    }

    pub fn start(&self) -> &Direction {
        &self.start
    }

    pub fn end(&self) -> &Direction {
        &self.end
    }

    pub fn closed_start(&self) -> bool {
        self.closed_start
    }

    pub fn closed_end(&self) -> bool {
        self.closed_end
    }

    pub fn is_point(&self) -> bool {
        self.start == self.end
    }

    pub fn contains(&self, u: &Direction) -> bool {
        if *u == self.start {
            return self.closed_start;
        }
        if *u == self.end {
            return self.closed_end;
        }
        if self.is_point() {
            return false;
        }
        ccw_open_contains(xy(&self.start), xy(&self.end), xy(u))
    }
}

impl std::fmt::Display for Arc {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_point() {
            return write!(f, "{{{}}}", self.start);
        }
        let open = if self.closed_start { "[" } else { "(" };
        let close = if self.closed_end { "]" } else { ")" };
        write!(f, "{}{}, {}{}", open, self.start, self.end, close)
    }
}

/// A normalized set of pairwise disjoint arcs, sorted by angle, or the full
/// circle.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct ArcSet {
    full: bool,
    arcs: Vec<Arc>,
}

impl ArcSet {
    pub fn empty() -> ArcSet {
        ArcSet {
            full: false,
            arcs: Vec::new(),
        }
    }

    pub fn full_circle() -> ArcSet {
        ArcSet {
            full: true,
            arcs: Vec::new(),
        }
    }

    pub fn is_empty(&self) -> bool {
        !self.full && self.arcs.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.full
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn contains(&self, u: &Direction) -> bool {
        self.full || self.arcs.iter().any(|a| a.contains(u))
    }

    /// Whether the set fits inside a single line through the origin: empty,
    /// one point, or two antipodal points.
    pub fn line_confined(&self) -> bool {
        if self.full {
            return false;
        }
        if !self.arcs.iter().all(Arc::is_point) {
            return false;
        }
        match self.arcs.len() {
            0 | 1 => true,
            2 => self.arcs[1].start == self.arcs[0].start.negated(),
            _ => false,
        }
    }
}

impl std::fmt::Display for ArcSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.full {
            return f.write_str("full circle");
        }
        if self.arcs.is_empty() {
            return f.write_str("empty");
        }
        for (i, a) in self.arcs.iter().enumerate() {
            if i > 0 {
                f.write_str(" ∪ ")?;
            }
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

fn xy(d: &Direction) -> (i64, i64) {
    debug_assert_eq!(d.dim(), 2);
    (d.vec()[0], d.vec()[1])
}

fn cross(a: (i64, i64), b: (i64, i64)) -> i128 {
    a.0 as i128 * b.1 as i128 - a.1 as i128 * b.0 as i128
}

/// Counterclockwise quarter turn.
fn rot90(v: (i64, i64)) -> (i64, i64) {
    (-v.1, v.0)
}

/// 0 for angles in `[0, π)`, 1 for `[π, 2π)`.
fn half(v: (i64, i64)) -> u8 {
    if v.1 > 0 || (v.1 == 0 && v.0 > 0) {
        0
    } else {
        1
    }
}

/// Total order by angle in `[0, 2π)`, starting at the positive x axis.
pub(crate) fn angle_cmp(a: &Direction, b: &Direction) -> Ordering {
    let (va, vb) = (xy(a), xy(b));
    match half(va).cmp(&half(vb)) {
        Ordering::Equal => {
            let c = cross(va, vb);
            // Same half and colinear means the same primitive ray.
            if c > 0 {
                Ordering::Less
            } else if c < 0 {
                Ordering::Greater
            } else {
                Ordering::Equal
            }
        }
        other => other,
    }
}

/// Whether `u` lies strictly inside the counterclockwise arc from `s` to `e`.
/// Requires `s`, `e`, `u` pairwise distinct as rays.
fn ccw_open_contains(s: (i64, i64), e: (i64, i64), u: (i64, i64)) -> bool {
    // Bucket by the counterclockwise sweep from s: (0,π), {π}, (π,2π).
    let bucket = |v: (i64, i64)| -> u8 {
        let c = cross(s, v);
        if c > 0 {
            1
        } else if c == 0 {
            2
        } else {
            3
        }
    };
    let (bu, be) = (bucket(u), bucket(e));
    if bu != be {
        bu < be
    } else {
        cross(u, e) > 0
    }
}

struct Sweep {
    /// Critical directions, sorted by angle; closed under negation.
    points: Vec<Direction>,
    point_stable: Vec<bool>,
    /// `interval_stable[k]` covers the open arc from `points[k]` to the next.
    interval_stable: Vec<bool>,
    interval_mid: Vec<Direction>,
}

fn sweep(family: &UpdateFamily) -> Result<Sweep> {
    if family.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: family.dim(),
        });
    }
    // Stability can only switch where some rule site is orthogonal to the
    // direction, so the critical set is {±rot90(x)} over all rule sites.
    let mut set = BTreeSet::new();
    for rule in family.rules() {
        for site in rule.sites() {
            let p = rot90((site.coords()[0], site.coords()[1]));
            let dir = Direction::new(vec![p.0, p.1]).expect("rule sites are nonzero");
            set.insert(dir.negated());
            set.insert(dir);
        }
    }
    let mut points: Vec<Direction> = set.into_iter().collect();
    points.sort_by(angle_cmp);
    let k = points.len();
    debug_assert!(k >= 2 && k % 2 == 0);

    let point_stable = points
        .iter()
        .map(|p| is_stable(family, p))
        .collect::<Result<Vec<_>>>()?;
    let mut interval_mid = Vec::with_capacity(k);
    for i in 0..k {
        let a = xy(&points[i]);
        let b = xy(&points[(i + 1) % k]);
        let mid = if a == (-b.0, -b.1) {
            // Antipodal neighbours (k == 2): the open interval is a half
            // circle and the quarter turn of its start lies inside.
            rot90(a)
        } else {
            (a.0 + b.0, a.1 + b.1)
        };
        interval_mid.push(Direction::new(vec![mid.0, mid.1]).expect("strictly inside an arc"));
    }
    let interval_stable = interval_mid
        .iter()
        .map(|m| is_stable(family, m))
        .collect::<Result<Vec<_>>>()?;
    Ok(Sweep {
        points,
        point_stable,
        interval_stable,
        interval_mid,
    })
}

/// The exact stable-direction set of a two-dimensional family.
pub fn stable_arcs_2d(family: &UpdateFamily) -> Result<ArcSet> {
    let sw = sweep(family)?;
    let k = sw.points.len();

    // Circular list of pieces: point 0, interval 0, point 1, interval 1, ...
    let piece_stable = |idx: usize| -> bool {
        if idx % 2 == 0 {
            sw.point_stable[idx / 2]
        } else {
            sw.interval_stable[idx / 2]
        }
    };
    let total = 2 * k;
    if (0..total).all(piece_stable) {
        return Ok(ArcSet::full_circle());
    }

    let first_unstable = (0..total).find(|&i| !piece_stable(i)).unwrap();
    let mut arcs = Vec::new();
    let mut run: Vec<usize> = Vec::new();
    for step in 1..=total {
        let idx = (first_unstable + step) % total;
        if piece_stable(idx) {
            run.push(idx);
        } else if !run.is_empty() {
            arcs.push(run_to_arc(&sw, &run));
            run.clear();
        }
    }
    if !run.is_empty() {
        arcs.push(run_to_arc(&sw, &run));
    }
    arcs.sort_by(|a, b| angle_cmp(&a.start, &b.start));
    Ok(ArcSet { full: false, arcs })
}

fn run_to_arc(sw: &Sweep, run: &[usize]) -> Arc {
    let k = sw.points.len();
    let boundary = |idx: usize, at_start: bool| -> (Direction, bool) {
        if idx % 2 == 0 {
            (sw.points[idx / 2].clone(), true)
        } else if at_start {
            (sw.points[idx / 2].clone(), false)
        } else {
            (sw.points[(idx / 2 + 1) % k].clone(), false)
        }
    };
    let (start, closed_start) = boundary(run[0], true);
    let (end, closed_end) = boundary(*run.last().unwrap(), false);
    // The stable set is topologically closed, so boundaries of maximal runs
    // are always stable points.
    debug_assert!(closed_start && closed_end);
    Arc {
        start,
        end,
        closed_start,
        closed_end,
    }
}

/// Verified-stable sample directions, interior points of stable arcs first,
/// then stable arc endpoints. Used when picking spanning direction sets.
pub(crate) fn stable_direction_samples(family: &UpdateFamily) -> Result<Vec<Direction>> {
    let sw = sweep(family)?;
    let mut out = Vec::new();
    for (i, stable) in sw.interval_stable.iter().enumerate() {
        if *stable {
            out.push(sw.interval_mid[i].clone());
        }
    }
    for (i, stable) in sw.point_stable.iter().enumerate() {
        if *stable {
            out.push(sw.points[i].clone());
        }
    }
    Ok(out)
}
