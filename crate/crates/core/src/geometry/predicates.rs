//! Tolerance-based orientation and in-circle predicates.
//!
//! Determinants are normalized to be dimensionless before comparison with
//! [`PREDICATE_TOL`], so the predicates behave the same at every coordinate
//! scale. Values within the tolerance band are reported as degenerate
//! (collinear / cocircular) and callers break the tie themselves.

use super::Point;

/// Threshold on normalized determinants.
pub const PREDICATE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    CounterClockwise,
    Clockwise,
    Collinear,
}

/// Twice the signed area of `abc`; positive when counter-clockwise.
pub fn orient2d_raw(a: Point, b: Point, c: Point) -> f64 {
    (b - a).cross(c - a)
}

/// Signed sine of the angle at `a`: `orient2d_raw / (|b-a| |c-a|)`.
/// Zero when two of the points coincide.
pub fn orient2d_normalized(a: Point, b: Point, c: Point) -> f64 {
    let ab = b - a;
    let ac = c - a;
    let scale = ab.norm() * ac.norm();
    if scale == 0.0 {
        return 0.0;
    }
    ab.cross(ac) / scale
}

pub fn orientation(a: Point, b: Point, c: Point) -> Orientation {
    let s = orient2d_normalized(a, b, c);
    if s > PREDICATE_TOL {
        Orientation::CounterClockwise
    } else if s < -PREDICATE_TOL {
        Orientation::Clockwise
    } else {
        Orientation::Collinear
    }
}

/// Classic in-circle determinant; positive when `d` is inside the
/// circumcircle of the counter-clockwise triangle `abc`.
pub fn incircle_raw(a: Point, b: Point, c: Point, d: Point) -> f64 {
    let (ad, bd, cd) = (a - d, b - d, c - d);
    let (alift, blift, clift) = (ad.norm2(), bd.norm2(), cd.norm2());
    alift * bd.cross(cd) + blift * cd.cross(ad) + clift * ad.cross(bd)
}

/// In-circle determinant divided by the fourth power of the largest
/// distance from `d` to a triangle vertex.
pub fn incircle_normalized(a: Point, b: Point, c: Point, d: Point) -> f64 {
    let scale = a.distance2(d).max(b.distance2(d)).max(c.distance2(d));
    if scale == 0.0 {
        return 0.0;
    }
    incircle_raw(a, b, c, d) / (scale * scale)
}

/// Circumcenter and circumradius of a non-degenerate triangle.
pub fn circumcircle(a: Point, b: Point, c: Point) -> Option<(Point, f64)> {
    let ab = b - a;
    let ac = c - a;
    let d = 2.0 * ab.cross(ac);
    if d == 0.0 || orientation(a, b, c) == Orientation::Collinear {
        return None;
    }
    let (ab2, ac2) = (ab.norm2(), ac.norm2());
    let ux = (ac.y * ab2 - ab.y * ac2) / d;
    let uy = (ab.x * ac2 - ac.x * ab2) / d;
    let offset = Point::new(ux, uy);
    Some((a + offset, offset.norm()))
}
