//! Triangle utilities: barycentric coordinates, centroid, and projection
//! onto the convex set `triangle ∩ rectangle`.

use super::predicates::orient2d_raw;
use super::{GeometryError, Point, Rect, Triangle};

/// Barycentric coordinates of `p` with respect to `t`.
///
/// `λ_i` is negative exactly when `p` is on the far side of the edge
/// opposite vertex `i`.
pub fn barycentric(t: &Triangle, points: &[Point], p: Point) -> Result<[f64; 3], GeometryError> {
    let [a, b, c] = t.corners(points);
    let area = orient2d_raw(a, b, c);
    let scale = (b - a).norm2().max((c - a).norm2());
    if scale == 0.0 || area.abs() <= 1e-14 * scale {
        return Err(GeometryError::DegenerateTriangle);
    }
    let l1 = orient2d_raw(p, b, c) / area;
    let l2 = orient2d_raw(a, p, c) / area;
    Ok([l1, l2, 1.0 - l1 - l2])
}

pub fn centroid(t: &Triangle, points: &[Point]) -> Point {
    let [a, b, c] = t.corners(points);
    Point::new((a.x + b.x + c.x) / 3.0, (a.y + b.y + c.y) / 3.0)
}

/// A closed convex polygon, stored counter-clockwise. May be degenerate
/// (a segment or a single point) when the clipped area vanishes.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvexRegion {
    vertices: Vec<Point>,
}

impl ConvexRegion {
    /// Intersection of triangle `t` with `rect`.
    pub fn triangle_rect(t: &Triangle, points: &[Point], rect: &Rect) -> Result<Self, GeometryError> {
        let [a, b, c] = t.corners(points);
        let mut poly = if orient2d_raw(a, b, c) >= 0.0 { vec![a, b, c] } else { vec![a, c, b] };
        // Sutherland-Hodgman against the four half-planes.
        let planes = [
            (Axis::X, rect.min_x, true),
            (Axis::X, rect.max_x, false),
            (Axis::Y, rect.min_y, true),
            (Axis::Y, rect.max_y, false),
        ];
        for (axis, bound, keep_above) in planes {
            poly = clip_axis(&poly, axis, bound, keep_above);
            if poly.is_empty() {
                return Err(GeometryError::EmptyIntersection);
            }
        }
        poly.dedup_by(|p, q| p.distance2(*q) == 0.0);
        while poly.len() > 1 && poly[0].distance2(poly[poly.len() - 1]) == 0.0 {
            poly.pop();
        }
        Ok(ConvexRegion { vertices: poly })
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn area(&self) -> f64 {
        let n = self.vertices.len();
        if n < 3 {
            return 0.0;
        }
        let mut twice = 0.0;
        for i in 0..n {
            twice += self.vertices[i].cross(self.vertices[(i + 1) % n]);
        }
        0.5 * twice
    }

    /// Whether `p` is inside the region with slack `tol` (distance units).
    pub fn contains(&self, p: Point, tol: f64) -> bool {
        self.distance(p) <= tol
    }

    pub fn distance(&self, p: Point) -> f64 {
        p.distance(self.project(p))
    }

    /// Euclidean projection of `p` onto the region.
    pub fn project(&self, p: Point) -> Point {
        let v = &self.vertices;
        let n = v.len();
        if n == 1 {
            return v[0];
        }
        if n >= 3 && self.area() > 0.0 && (0..n).all(|i| (v[(i + 1) % n] - v[i]).cross(p - v[i]) >= 0.0) {
            return p;
        }
        let mut best = v[0];
        let mut best_d = f64::INFINITY;
        let edges = if n == 2 { 1 } else { n };
        for i in 0..edges {
            let q = project_on_segment(p, v[i], v[(i + 1) % n]);
            let d = q.distance2(p);
            if d < best_d {
                best_d = d;
                best = q;
            }
        }
        best
    }
}

fn project_on_segment(p: Point, a: Point, b: Point) -> Point {
    let ab = b - a;
    let len2 = ab.norm2();
    if len2 == 0.0 {
        return a;
    }
    let s = ((p - a).dot(ab) / len2).clamp(0.0, 1.0);
    a + ab * s
}

#[derive(Clone, Copy)]
enum Axis {
    X,
    Y,
}

/// Keeps the part of `poly` on one side of the line `axis = bound`.
/// Crossing points are placed exactly on the line.
fn clip_axis(poly: &[Point], axis: Axis, bound: f64, keep_above: bool) -> Vec<Point> {
    let coord = |p: Point| match axis {
        Axis::X => p.x,
        Axis::Y => p.y,
    };
    let signed = |p: Point| if keep_above { coord(p) - bound } else { bound - coord(p) };
    let mut out = Vec::with_capacity(poly.len() + 1);
    for i in 0..poly.len() {
        let cur = poly[i];
        let next = poly[(i + 1) % poly.len()];
        let (sc, sn) = (signed(cur), signed(next));
        if sc >= 0.0 {
            out.push(cur);
        }
        if (sc >= 0.0) != (sn >= 0.0) {
            let s = sc / (sc - sn);
            let x = match axis {
                Axis::X => Point::new(bound, cur.y + (next.y - cur.y) * s),
                Axis::Y => Point::new(cur.x + (next.x - cur.x) * s, bound),
            };
            out.push(x);
        }
    }
    out
}

/// Projects `p` onto the closed convex set `t ∩ rect`.
pub fn clamp_to_triangle_and_rect(
    p: Point,
    t: &Triangle,
    points: &[Point],
    rect: &Rect,
) -> Result<Point, GeometryError> {
    Ok(ConvexRegion::triangle_rect(t, points, rect)?.project(p))
}
