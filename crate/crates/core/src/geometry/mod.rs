//! Geometric realization: star polygon, Reuleaux arcs and the inscribed
//! equilateral polygon, at unit diameter.
//!
//! The star path starts at the origin heading along +x. After the `j`-th
//! unit step the heading turns by `pi - k_j pi / n`, where `k_j` is part
//! `j mod r`, so the interior angle at star vertex `j` is `k_j pi / n`.
//! Headings are tracked as exact integer multiples of `pi / n`.

mod svg;

use serde::Serialize;
use thiserror::Error;

use crate::composition::Composition;
use crate::scalar::Real;

pub use svg::{render_svg, Layers, SvgStyle};

/// Closure residual at or below which a path counts as closed.
pub const CLOSURE_ACCEPT: f64 = 1e-9;
/// Closure residual above which a path counts as open.
pub const CLOSURE_REJECT: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("non-finite coordinate in the realization")]
    NonFinite,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Point<T> {
    pub x: T,
    pub y: T,
}

impl<T: Real> Point<T> {
    pub fn new(x: T, y: T) -> Self {
        Self { x, y }
    }

    fn polar(radius: T, angle: T) -> Self {
        Self::new(radius * angle.cos(), radius * angle.sin())
    }

    pub fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y)
    }

    pub fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y)
    }

    pub fn norm(self) -> T {
        self.x.hypot(self.y)
    }

    pub fn cross(self, o: Self) -> T {
        self.x * o.y - self.y * o.x
    }

    pub fn dist(self, o: Self) -> T {
        self.sub(o).norm()
    }
}

/// One Reuleaux arc: centered at a star vertex, joining its two neighbours.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Arc<T> {
    pub center: Point<T>,
    pub start: Point<T>,
    pub end: Point<T>,
    /// Number of polygon sides on the arc.
    pub sides: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Realization<T> {
    pub composition: Composition,
    pub star_vertices: Vec<Point<T>>,
    /// Boundary order, starting at star vertex 0.
    pub polygon_vertices: Vec<Point<T>>,
    pub arcs: Vec<Arc<T>>,
    pub closure_residual: T,
    pub side_lengths: Vec<T>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Closure {
    Closed,
    Open,
    /// Between the two thresholds; never expected.
    Ambiguous,
}

pub fn closure_verdict(residual: f64) -> Closure {
    if residual <= CLOSURE_ACCEPT {
        Closure::Closed
    } else if residual > CLOSURE_REJECT {
        Closure::Open
    } else {
        Closure::Ambiguous
    }
}

fn cast<T: Real>(x: f64) -> T {
    T::from(x).expect("float conversion")
}

/// Heading of step `j` in units of `pi / n`, modulo `2n`.
fn heading_indices(c: &Composition) -> Vec<usize> {
    let (n, parts) = (c.n(), c.parts());
    let two_n = 2 * n;
    let mut m = 0usize;
    let mut out = Vec::with_capacity(parts.len() + 1);
    out.push(0);
    for j in 1..=parts.len() {
        m = (m + n + two_n - parts[j % parts.len()] % two_n) % two_n;
        out.push(m);
    }
    out
}

fn star_path<T: Real>(c: &Composition) -> Vec<Point<T>> {
    let step = T::PI() / cast(c.n() as f64);
    let mut at = Point::new(T::zero(), T::zero());
    let mut out = vec![at];
    for &m in &heading_indices(c)[..c.len()] {
        at = at.add(Point::polar(T::one(), step * cast(m as f64)));
        out.push(at);
    }
    out
}

/// Distance from the end of the star path back to its start.
pub fn closure_residual<T: Real>(c: &Composition) -> T {
    let path = star_path::<T>(c);
    path[path.len() - 1].norm()
}

/// Heading after a full traversal, as a multiple of `pi / n` modulo `2n`;
/// always 0 since the turns sum to an odd multiple of `pi`.
pub fn final_heading(c: &Composition) -> usize {
    heading_indices(c)[c.len()]
}

pub fn side_length<T: Real>(n: usize) -> T {
    cast::<T>(2.0) * (T::PI() / cast((2 * n) as f64)).sin()
}

pub fn expected_width<T: Real>(n: usize) -> T {
    (T::PI() / cast((2 * n) as f64)).cos()
}

pub fn realize<T: Real>(c: &Composition) -> Realization<T> {
    let r = c.len();
    let mut path = star_path::<T>(c);
    let closure_residual = path[r].norm();
    path.truncate(r);
    let star = path;
    let mut polygon = Vec::with_capacity(c.n());
    let mut arcs = Vec::with_capacity(r);
    for j in 0..r {
        let ci = (2 * j + 1) % r;
        let (center, start, end) = (star[ci], star[(ci + r - 1) % r], star[(ci + 1) % r]);
        let k = c.parts()[ci];
        let a0 = start.sub(center);
        let a1 = end.sub(center);
        let alpha0 = a0.y.atan2(a0.x);
        let sweep = a0.cross(a1).atan2(a0.x * a1.x + a0.y * a1.y);
        for i in 0..k {
            let t = alpha0 + sweep * cast(i as f64) / cast(k as f64);
            polygon.push(center.add(Point::polar(T::one(), t)));
        }
        arcs.push(Arc {
            center,
            start,
            end,
            sides: k,
        });
    }
    let side_lengths = (0..polygon.len())
        .map(|i| polygon[i].dist(polygon[(i + 1) % polygon.len()]))
        .collect();
    Realization {
        composition: c.clone(),
        star_vertices: star,
        polygon_vertices: polygon,
        arcs,
        closure_residual,
        side_lengths,
    }
}

impl<T: Real> Realization<T> {
    pub fn is_finite(&self) -> bool {
        let ok = |p: &Point<T>| p.x.is_finite() && p.y.is_finite();
        self.star_vertices.iter().all(ok) && self.polygon_vertices.iter().all(ok)
    }
}

/// Whether every turn has the same orientation, within `tol`.
pub fn is_convex<T: Real>(points: &[Point<T>], tol: T) -> bool {
    let n = points.len();
    let turns: Vec<T> = (0..n)
        .map(|i| {
            let (a, b, c) = (points[i], points[(i + 1) % n], points[(i + 2) % n]);
            b.sub(a).cross(c.sub(b))
        })
        .collect();
    turns.iter().all(|&t| t > -tol) || turns.iter().all(|&t| t < tol)
}

fn signed_area<T: Real>(points: &[Point<T>]) -> T {
    let n = points.len();
    (0..n).fold(T::zero(), |acc, i| acc + points[i].cross(points[(i + 1) % n]))
}

/// Largest vertex distance, by rotating calipers on a convex polygon.
pub fn diameter<T: Real>(points: &[Point<T>]) -> T {
    calipers(points).0
}

/// Smallest distance between parallel supporting lines, by rotating
/// calipers on a convex polygon.
pub fn width<T: Real>(points: &[Point<T>]) -> T {
    calipers(points).1
}

fn calipers<T: Real>(points: &[Point<T>]) -> (T, T) {
    let mut pts = points.to_vec();
    if signed_area(&pts) < T::zero() {
        pts.reverse();
    }
    let n = pts.len();
    let mut diam = T::zero();
    let mut width = T::infinity();
    let mut j = 1;
    for i in 0..n {
        let (a, b) = (pts[i], pts[(i + 1) % n]);
        let edge = b.sub(a);
        let len = edge.norm();
        let height = |k: usize| edge.cross(pts[k % n].sub(a));
        while height(j + 1) > height(j) {
            j = (j + 1) % n;
        }
        width = width.min(height(j) / len);
        for k in [j, (j + 1) % n] {
            diam = diam.max(a.dist(pts[k])).max(b.dist(pts[k]));
        }
    }
    (diam, width)
}

/// Brute-force diameter over all vertex pairs.
pub fn diameter_brute<T: Real>(points: &[Point<T>]) -> T {
    let mut best = T::zero();
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            best = best.max(a.dist(*b));
        }
    }
    best
}

/// Brute-force width: over every edge, the farthest vertex from its line.
pub fn width_brute<T: Real>(points: &[Point<T>]) -> T {
    let n = points.len();
    (0..n)
        .map(|i| {
            let (a, b) = (points[i], points[(i + 1) % n]);
            let edge = b.sub(a);
            points
                .iter()
                .map(|p| (edge.cross(p.sub(a)) / edge.norm()).abs())
                .fold(T::zero(), T::max)
        })
        .fold(T::infinity(), T::min)
}
