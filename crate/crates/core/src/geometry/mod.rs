//! Planar geometry: points, rectangles, Delaunay triangulation and the
//! triangle utilities used by the per-triangle optimizer.

mod delaunay;
pub mod predicates;
mod region;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

pub use delaunay::{delaunay_triangulate, Triangle, Triangulation};
pub use region::{barycentric, centroid, clamp_to_triangle_and_rect, ConvexRegion};

/// A point (or displacement vector) in the plane.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn dot(self, other: Point) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the planar cross product.
    pub fn cross(self, other: Point) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm2(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn distance(self, other: Point) -> f64 {
        (self - other).norm()
    }

    pub fn distance2(self, other: Point) -> f64 {
        (self - other).norm2()
    }

    pub fn midpoint(self, other: Point) -> Point {
        Point::new(0.5 * (self.x + other.x), 0.5 * (self.y + other.y))
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, rhs: Point) -> Point {
        Point::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, rhs: Point) -> Point {
        Point::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, rhs: f64) -> Point {
        Point::new(self.x * rhs, self.y * rhs)
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Axis-aligned rectangle with a closed boundary.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rect {
    pub min_x: f64,
    pub min_y: f64,
    pub max_x: f64,
    pub max_y: f64,
}

impl Rect {
    /// Builds a rectangle, rejecting empty or non-finite ones.
    pub fn new(min_x: f64, min_y: f64, max_x: f64, max_y: f64) -> Result<Self, GeometryError> {
        let all_finite = [min_x, min_y, max_x, max_y].iter().all(|v| v.is_finite());
        if !all_finite || max_x <= min_x || max_y <= min_y {
            return Err(GeometryError::InvalidRect { min_x, min_y, max_x, max_y });
        }
        Ok(Rect { min_x, min_y, max_x, max_y })
    }

    pub fn width(&self) -> f64 {
        self.max_x - self.min_x
    }

    pub fn height(&self) -> f64 {
        self.max_y - self.min_y
    }

    pub fn area(&self) -> f64 {
        self.width() * self.height()
    }

    pub fn center(&self) -> Point {
        Point::new(0.5 * (self.min_x + self.max_x), 0.5 * (self.min_y + self.max_y))
    }

    /// Closed-boundary containment.
    pub fn contains(&self, p: Point) -> bool {
        p.x >= self.min_x && p.x <= self.max_x && p.y >= self.min_y && p.y <= self.max_y
    }

    pub fn contains_rect(&self, other: &Rect) -> bool {
        other.min_x >= self.min_x && other.max_x <= self.max_x && other.min_y >= self.min_y && other.max_y <= self.max_y
    }

    /// Smallest distance from any side of `inner` to the matching side of `self`.
    pub fn margin_to(&self, inner: &Rect) -> f64 {
        (inner.min_x - self.min_x)
            .min(inner.min_y - self.min_y)
            .min(self.max_x - inner.max_x)
            .min(self.max_y - inner.max_y)
    }

    /// Distance from `p` to the rectangle (zero inside).
    pub fn distance_to(&self, p: Point) -> f64 {
        let dx = (self.min_x - p.x).max(0.0).max(p.x - self.max_x);
        let dy = (self.min_y - p.y).max(0.0).max(p.y - self.max_y);
        dx.hypot(dy)
    }

    pub fn corners(&self) -> [Point; 4] {
        [
            Point::new(self.min_x, self.min_y),
            Point::new(self.max_x, self.min_y),
            Point::new(self.max_x, self.max_y),
            Point::new(self.min_x, self.max_y),
        ]
    }

    pub fn expand(&self, margin: f64) -> Rect {
        Rect {
            min_x: self.min_x - margin,
            min_y: self.min_y - margin,
            max_x: self.max_x + margin,
            max_y: self.max_y + margin,
        }
    }
}

impl fmt::Display for Rect {
    /// `min_x,min_y,max_x,max_y`, the form accepted by the CLI `--roi` flag.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{},{}", self.min_x, self.min_y, self.max_x, self.max_y)
    }
}

impl std::str::FromStr for Rect {
    type Err = GeometryError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let bad = || GeometryError::Parse(format!("expected x0,y0,x1,y1, got {s:?}"));
        if parts.len() != 4 {
            return Err(bad());
        }
        let mut v = [0.0; 4];
        for (slot, part) in v.iter_mut().zip(&parts) {
            *slot = part.parse().map_err(|_| bad())?;
        }
        Rect::new(v[0], v[1], v[2], v[3])
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GeometryError {
    #[error("triangulation needs at least 3 points, got {0}")]
    TooFewPoints(usize),
    #[error("all input points are collinear")]
    DegenerateInput,
    #[error("point {0} duplicates an existing vertex")]
    DuplicatePoint(Point),
    #[error("point {0} lies outside the convex hull")]
    OutsideHull(Point),
    #[error("triangle is degenerate (zero area)")]
    DegenerateTriangle,
    #[error("triangle and rectangle do not intersect")]
    EmptyIntersection,
    #[error("invalid rectangle [{min_x}, {max_x}] x [{min_y}, {max_y}]")]
    InvalidRect { min_x: f64, min_y: f64, max_x: f64, max_y: f64 },
    #[error("non-finite coordinate in input")]
    NonFinite,
    #[error("parse error: {0}")]
    Parse(String),
}
