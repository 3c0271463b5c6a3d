//! Incremental Bowyer-Watson Delaunay triangulation.
//!
//! The working mesh is closed with "ghost" triangles: every convex-hull edge
//! `a -> b` carries a ghost `[b, a, GHOST]` whose third vertex is a symbolic
//! point at infinity. A ghost conflicts with a new point when the point lies
//! strictly outside its hull edge (or on the open edge), which plays the role
//! of an infinitely large super-triangle. Points inserted outside the
//! current hull therefore extend the hull exactly, and no triangles need to be
//! discarded after construction.
//!
//! The public view exposes only the real triangles, each rotated so its
//! smallest vertex index comes first (orientation preserved) and sorted, so
//! two triangulations of the same point set compare equal as triangle lists
//! regardless of how they were built.

use std::collections::HashMap;
use std::fmt::Write as _;

use super::predicates::{
    circumcircle, incircle_normalized, orient2d_normalized, orientation, Orientation, PREDICATE_TOL,
};
use super::{GeometryError, Point};

const GHOST: usize = usize::MAX;

/// Relative distance under which two points count as the same vertex.
const COINCIDENT_TOL: f64 = 1e-12;

/// Three vertex indices into a point sequence, counter-clockwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triangle {
    pub v1: usize,
    pub v2: usize,
    pub v3: usize,
}

impl Triangle {
    pub const fn new(v1: usize, v2: usize, v3: usize) -> Self {
        Triangle { v1, v2, v3 }
    }

    pub fn vertices(&self) -> [usize; 3] {
        [self.v1, self.v2, self.v3]
    }

    pub fn corners(&self, points: &[Point]) -> [Point; 3] {
        [points[self.v1], points[self.v2], points[self.v3]]
    }

    /// Signed area, positive for counter-clockwise vertex order.
    pub fn signed_area(&self, points: &[Point]) -> f64 {
        let [a, b, c] = self.corners(points);
        0.5 * (b - a).cross(c - a)
    }

    /// Longest edge length.
    pub fn diameter(&self, points: &[Point]) -> f64 {
        let [a, b, c] = self.corners(points);
        a.distance(b).max(b.distance(c)).max(c.distance(a))
    }

    fn canonical(v: [usize; 3]) -> Triangle {
        let k = (0..3).min_by_key(|&i| v[i]).unwrap();
        Triangle::new(v[k], v[(k + 1) % 3], v[(k + 2) % 3])
    }
}

#[derive(Clone, Debug)]
pub struct Triangulation {
    points: Vec<Point>,
    triangles: Vec<Triangle>,
    neighbors: Vec<[Option<usize>; 3]>,
    /// Real and ghost triangles, ghost vertex always in the last slot.
    mesh: Vec<[usize; 3]>,
}

impl Triangulation {
    /// Delaunay triangulation of `points`, inserting them in input order.
    pub fn new(points: Vec<Point>) -> Result<Self, GeometryError> {
        if points.len() < 3 {
            return Err(GeometryError::TooFewPoints(points.len()));
        }
        if points.iter().any(|p| !p.is_finite()) {
            return Err(GeometryError::NonFinite);
        }
        check_duplicates(&points)?;

        let (a, b, c) = initial_triangle(&points)?;
        let mut mesh = vec![[a, b, c], [b, a, GHOST], [c, b, GHOST], [a, c, GHOST]];
        for i in 0..points.len() {
            if i != a && i != b && i != c {
                insert_into_mesh(&points, &mut mesh, i);
            }
        }

        let mut tri = Triangulation { points, triangles: Vec::new(), neighbors: Vec::new(), mesh };
        tri.rebuild_view();
        Ok(tri)
    }

    /// Adds `p` as a new vertex and restores the Delaunay property by
    /// re-triangulating the cavity of triangles whose circumcircle contains
    /// it. Returns the index of the new vertex.
    pub fn insert_point(&mut self, p: Point) -> Result<usize, GeometryError> {
        if !p.is_finite() {
            return Err(GeometryError::NonFinite);
        }
        let scale = coordinate_scale(&self.points).max(p.x.abs()).max(p.y.abs());
        if self.points.iter().any(|q| q.distance(p) <= COINCIDENT_TOL * scale) {
            return Err(GeometryError::DuplicatePoint(p));
        }
        if self.locate(p).is_none() {
            return Err(GeometryError::OutsideHull(p));
        }
        self.points.push(p);
        let idx = self.points.len() - 1;
        insert_into_mesh(&self.points, &mut self.mesh, idx);
        self.rebuild_view();
        Ok(idx)
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn triangles(&self) -> &[Triangle] {
        &self.triangles
    }

    pub fn triangle(&self, id: usize) -> Triangle {
        self.triangles[id]
    }

    pub fn len(&self) -> usize {
        self.triangles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triangles.is_empty()
    }

    /// Neighbors of triangle `id`; entry `i` is across the edge opposite
    /// vertex `i`, `None` on the convex hull.
    pub fn neighbors(&self, id: usize) -> [Option<usize>; 3] {
        self.neighbors[id]
    }

    /// Index of a triangle containing `p` (boundary inclusive), if any.
    pub fn locate(&self, p: Point) -> Option<usize> {
        self.triangles.iter().position(|t| {
            let [a, b, c] = t.corners(&self.points);
            orient2d_normalized(a, b, p) >= -PREDICATE_TOL
                && orient2d_normalized(b, c, p) >= -PREDICATE_TOL
                && orient2d_normalized(c, a, p) >= -PREDICATE_TOL
        })
    }

    /// Sum of triangle areas.
    pub fn total_area(&self) -> f64 {
        self.triangles.iter().map(|t| t.signed_area(&self.points)).sum()
    }

    /// Convex-hull vertex indices in counter-clockwise order, read off the
    /// ghost triangles.
    pub fn hull(&self) -> Vec<usize> {
        // ghost [b, a, GHOST] encodes hull edge a -> b
        let next: HashMap<usize, usize> = self.mesh.iter().filter(|t| t[2] == GHOST).map(|t| (t[1], t[0])).collect();
        let Some(&start) = next.keys().min() else {
            return Vec::new();
        };
        let mut hull = vec![start];
        let mut cur = next[&start];
        while cur != start && hull.len() <= next.len() {
            hull.push(cur);
            cur = next[&cur];
        }
        hull
    }

    /// Brute-force empty-circumcircle audit: every `(triangle, point)` pair
    /// where the point lies strictly inside the triangle's circumcircle by
    /// more than `rel_tol` times the circumradius.
    pub fn delaunay_violations(&self, rel_tol: f64) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (tid, t) in self.triangles.iter().enumerate() {
            let [a, b, c] = t.corners(&self.points);
            let Some((center, radius)) = circumcircle(a, b, c) else {
                out.push((tid, t.v1));
                continue;
            };
            for (pid, p) in self.points.iter().enumerate() {
                if t.vertices().contains(&pid) {
                    continue;
                }
                if p.distance(center) < radius * (1.0 - rel_tol) {
                    out.push((tid, pid));
                }
            }
        }
        out
    }

    /// Plain-text export: `points N`, `x,y` lines, `triangles M`, `i,j,k` lines.
    pub fn to_export_string(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "points {}", self.points.len());
        for p in &self.points {
            let _ = writeln!(s, "{},{}", p.x, p.y);
        }
        let _ = writeln!(s, "triangles {}", self.triangles.len());
        for t in &self.triangles {
            let _ = writeln!(s, "{},{},{}", t.v1, t.v2, t.v3);
        }
        s
    }

    fn rebuild_view(&mut self) {
        let mut triangles: Vec<Triangle> =
            self.mesh.iter().filter(|t| t[2] != GHOST).map(|&t| Triangle::canonical(t)).collect();
        triangles.sort_unstable();

        let mut edges = HashMap::with_capacity(triangles.len() * 3);
        for (id, t) in triangles.iter().enumerate() {
            let v = t.vertices();
            for i in 0..3 {
                edges.insert((v[(i + 1) % 3], v[(i + 2) % 3]), id);
            }
        }
        self.neighbors = triangles
            .iter()
            .map(|t| {
                let v = t.vertices();
                std::array::from_fn(|i| edges.get(&(v[(i + 2) % 3], v[(i + 1) % 3])).copied())
            })
            .collect();
        self.triangles = triangles;
    }
}

/// Free-function form of [`Triangulation::new`].
pub fn delaunay_triangulate(points: &[Point]) -> Result<Triangulation, GeometryError> {
    Triangulation::new(points.to_vec())
}

fn coordinate_scale(points: &[Point]) -> f64 {
    points.iter().fold(1.0f64, |m, p| m.max(p.x.abs()).max(p.y.abs()))
}

fn check_duplicates(points: &[Point]) -> Result<(), GeometryError> {
    let scale = coordinate_scale(points);
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&i, &j| points[i].x.total_cmp(&points[j].x).then(points[i].y.total_cmp(&points[j].y)));
    for w in order.windows(2) {
        let (p, q) = (points[w[0]], points[w[1]]);
        if p.distance(q) <= COINCIDENT_TOL * scale {
            return Err(GeometryError::DuplicatePoint(q));
        }
    }
    Ok(())
}

/// First non-collinear triple in input order, returned counter-clockwise.
fn initial_triangle(points: &[Point]) -> Result<(usize, usize, usize), GeometryError> {
    let (a, b) = (0, 1);
    for c in 2..points.len() {
        match orientation(points[a], points[b], points[c]) {
            Orientation::CounterClockwise => return Ok((a, b, c)),
            Orientation::Clockwise => return Ok((b, a, c)),
            Orientation::Collinear => {}
        }
    }
    Err(GeometryError::DegenerateInput)
}

fn is_ghost(t: &[usize; 3]) -> bool {
    t[2] == GHOST
}

fn adjacency(mesh: &[[usize; 3]]) -> Vec<[usize; 3]> {
    let mut edges = HashMap::with_capacity(mesh.len() * 3);
    for (id, t) in mesh.iter().enumerate() {
        for i in 0..3 {
            edges.insert((t[(i + 1) % 3], t[(i + 2) % 3]), id);
        }
    }
    mesh.iter().map(|t| std::array::from_fn(|i| edges[&(t[(i + 2) % 3], t[(i + 1) % 3])])).collect()
}

/// Whether `p` lies strictly inside the hull edge of a ghost, or on its open
/// segment.
fn ghost_conflict(points: &[Point], t: &[usize; 3], p: Point) -> bool {
    let (a, b) = (points[t[0]], points[t[1]]);
    let o = orient2d_normalized(a, b, p);
    if o > PREDICATE_TOL {
        return true;
    }
    if o < -PREDICATE_TOL {
        return false;
    }
    let ab = b - a;
    let s = (p - a).dot(ab) / ab.norm2();
    s > 0.0 && s < 1.0
}

/// Conflict test for a real triangle entered through edge `opposite`.
/// Cocircular cases keep the diagonal touching the lowest vertex index.
fn real_conflict(points: &[Point], t: &[usize; 3], opposite: usize, pi: usize) -> bool {
    let s = incircle_normalized(points[t[0]], points[t[1]], points[t[2]], points[pi]);
    if s > PREDICATE_TOL {
        return true;
    }
    if s < -PREDICATE_TOL {
        return false;
    }
    let far = t[opposite];
    let (u, v) = (t[(opposite + 1) % 3], t[(opposite + 2) % 3]);
    pi.min(far) < u.min(v)
}

fn locate_seed(points: &[Point], mesh: &[[usize; 3]], p: Point) -> Option<usize> {
    let inside = mesh.iter().position(|t| {
        !is_ghost(t) && (0..3).all(|i| orient2d_normalized(points[t[i]], points[t[(i + 1) % 3]], p) >= -PREDICATE_TOL)
    });
    inside.or_else(|| mesh.iter().position(|t| is_ghost(t) && ghost_conflict(points, t, p)))
}

fn insert_into_mesh(points: &[Point], mesh: &mut Vec<[usize; 3]>, pi: usize) {
    let p = points[pi];
    let adj = adjacency(mesh);
    let seed =
        locate_seed(points, mesh, p).expect("a point distinct from all vertices always conflicts with some triangle");

    let mut in_cavity = vec![false; mesh.len()];
    let mut cavity = vec![seed];
    in_cavity[seed] = true;
    let mut stack = vec![seed];
    while let Some(t) = stack.pop() {
        for i in 0..3 {
            let n = adj[t][i];
            if in_cavity[n] {
                continue;
            }
            let tri = &mesh[n];
            let hit = if is_ghost(tri) {
                ghost_conflict(points, tri, p)
            } else {
                let back = (0..3).find(|&j| adj[n][j] == t).unwrap();
                real_conflict(points, tri, back, pi)
            };
            if hit {
                in_cavity[n] = true;
                cavity.push(n);
                stack.push(n);
            }
        }
    }

    // Grow the cavity until every real boundary edge sees `p` strictly on its
    // left, so the fan of new triangles has positive orientation.
    loop {
        let mut grew = false;
        for k in 0..cavity.len() {
            let t = cavity[k];
            for i in 0..3 {
                let n = adj[t][i];
                if in_cavity[n] {
                    continue;
                }
                let (u, v) = (mesh[t][(i + 1) % 3], mesh[t][(i + 2) % 3]);
                if u != GHOST && v != GHOST && orient2d_normalized(points[u], points[v], p) <= PREDICATE_TOL {
                    in_cavity[n] = true;
                    cavity.push(n);
                    grew = true;
                }
            }
        }
        if !grew {
            break;
        }
    }

    let mut fresh = Vec::with_capacity(cavity.len() + 2);
    for &t in &cavity {
        for i in 0..3 {
            if in_cavity[adj[t][i]] {
                continue;
            }
            let (u, v) = (mesh[t][(i + 1) % 3], mesh[t][(i + 2) % 3]);
            fresh.push(if u == GHOST {
                [v, pi, GHOST]
            } else if v == GHOST {
                [pi, u, GHOST]
            } else {
                [u, v, pi]
            });
        }
    }

    cavity.sort_unstable();
    let mut fresh = fresh.into_iter();
    for &slot in &cavity {
        match fresh.next() {
            Some(t) => mesh[slot] = t,
            None => break,
        }
    }
    mesh.extend(fresh);
    debug_assert!(mesh.len() == adjacency(mesh).len());
}
