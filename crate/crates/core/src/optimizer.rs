//! Per-triangle minimization of the interference field.
//!
//! Each Delaunay triangle (clipped to the region of interest) is searched by
//! fixed-length normalized gradient steps, `z <- P(z - dt * ∇g / |∇g|)`,
//! where `P` projects onto `triangle ∩ roi`. A step that fails to lower `g`
//! is retried with `dt * shrink_factor`, so every accepted iterate strictly
//! decreases the field. The shrunken step is kept for the remainder of the
//! run.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::geometry::{centroid, ConvexRegion, GeometryError, Point, Rect, Triangle, Triangulation};
use crate::radio::{interference, interference_and_gradient, RadioError};
use crate::scenario::StationSet;

/// Smallest step tried before the line search gives up.
const MIN_STEP: f64 = 1e-15;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum OptimizeError {
    #[error("triangle does not overlap the region of interest")]
    EmptyIntersection,
    #[error("no descent step from start point {0}")]
    NoDescent(Point),
    #[error(transparent)]
    Radio(#[from] RadioError),
    #[error("invalid descent configuration: {0}")]
    InvalidConfig(String),
}

impl From<GeometryError> for OptimizeError {
    fn from(_: GeometryError) -> Self {
        OptimizeError::EmptyIntersection
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DescentConfig {
    pub step_dt: f64,
    pub max_iters: usize,
    /// Absolute threshold on `|∇g|`.
    pub grad_tol: f64,
    pub move_tol: f64,
    pub shrink_factor: f64,
    /// Also start from the three edge midpoints and keep the best result.
    pub multistart: bool,
}

impl Default for DescentConfig {
    fn default() -> Self {
        Self::for_intensity(1.0)
    }
}

impl DescentConfig {
    pub(crate) const KEYS: [&'static str; 6] = [
        "descent.step_dt",
        "descent.max_iters",
        "descent.grad_tol",
        "descent.move_tol",
        "descent.shrink_factor",
        "descent.multistart",
    ];

    /// Defaults with the step set to 1% of the mean station spacing
    /// `1/sqrt(lambda)`.
    pub fn for_intensity(lambda: f64) -> Self {
        let spacing = if lambda > 0.0 { lambda.sqrt().recip() } else { 1.0 };
        DescentConfig {
            step_dt: 0.01 * spacing,
            max_iters: 10_000,
            grad_tol: 1e-10,
            move_tol: 1e-9,
            shrink_factor: 0.5,
            multistart: true,
        }
    }

    pub fn validate(&self) -> Result<(), OptimizeError> {
        let bad = |m: &str| Err(OptimizeError::InvalidConfig(m.to_string()));
        if !(self.step_dt > 0.0) || !self.step_dt.is_finite() {
            return bad("step_dt must be positive");
        }
        if self.max_iters < 1 {
            return bad("max_iters must be at least 1");
        }
        if !(self.shrink_factor > 0.0 && self.shrink_factor < 1.0) {
            return bad("shrink_factor must lie in (0, 1)");
        }
        if !(self.grad_tol >= 0.0) || !(self.move_tol >= 0.0) {
            return bad("tolerances must be non-negative");
        }
        Ok(())
    }
}

/// One descent run from one start point.
#[derive(Clone, Debug, PartialEq)]
pub struct DescentRun {
    /// Accepted iterates, starting with the projected start point.
    pub path: Vec<Point>,
    /// `g` at each entry of `path`; strictly decreasing.
    pub g_history: Vec<f64>,
    pub converged: bool,
}

impl DescentRun {
    pub fn start(&self) -> Point {
        self.path[0]
    }

    pub fn end(&self) -> Point {
        *self.path.last().unwrap()
    }

    pub fn final_g(&self) -> f64 {
        *self.g_history.last().unwrap()
    }

    pub fn iterations(&self) -> usize {
        self.path.len() - 1
    }
}

/// Local interference minimum found inside one triangle.
#[derive(Clone, Debug, PartialEq)]
pub struct CandidateSite {
    pub triangle_id: usize,
    pub position: Point,
    pub interference: f64,
    pub iterations: usize,
    pub converged: bool,
    /// The winning run (centroid start unless another start did better).
    pub run: DescentRun,
    /// End points of every start, centroid first.
    pub start_ends: Vec<Point>,
}

impl CandidateSite {
    /// Largest distance between end points of different starts.
    pub fn multistart_spread(&self) -> f64 {
        let mut spread = 0.0f64;
        for (i, a) in self.start_ends.iter().enumerate() {
            for b in &self.start_ends[i + 1..] {
                spread = spread.max(a.distance(*b));
            }
        }
        spread
    }
}

/// Minimizes `g` over `t ∩ roi`.
pub fn minimize_in_triangle(
    triangle_id: usize,
    t: &Triangle,
    points: &[Point],
    stations: &StationSet,
    roi: &Rect,
    cfg: &DescentConfig,
) -> Result<CandidateSite, OptimizeError> {
    let region = ConvexRegion::triangle_rect(t, points, roi)?;
    let [a, b, c] = t.corners(points);
    let mut starts = vec![centroid(t, points)];
    if cfg.multistart {
        starts.extend([a.midpoint(b), b.midpoint(c), c.midpoint(a)]);
    }

    let mut best: Option<DescentRun> = None;
    let mut ends = Vec::with_capacity(starts.len());
    let mut last_err = None;
    for s in starts {
        match descend(s, &region, stations, cfg) {
            Ok(run) => {
                ends.push(run.end());
                if best.as_ref().is_none_or(|b| run.final_g() < b.final_g()) {
                    best = Some(run);
                }
            }
            Err(e) => last_err = Some(e),
        }
    }
    let run = match best {
        Some(run) => run,
        None => return Err(last_err.unwrap()),
    };
    Ok(CandidateSite {
        triangle_id,
        position: run.end(),
        interference: run.final_g(),
        iterations: run.iterations(),
        converged: run.converged,
        run,
        start_ends: ends,
    })
}

/// Projected normalized-gradient descent from `start`.
pub fn descend(
    start: Point,
    region: &ConvexRegion,
    stations: &StationSet,
    cfg: &DescentConfig,
) -> Result<DescentRun, OptimizeError> {
    let mut z = region.project(start);
    let mut g = interference(z, stations)?;
    let mut run = DescentRun { path: vec![z], g_history: vec![g], converged: false };
    let mut step = cfg.step_dt;
    let pinned_tol = 1e-15 * (1.0 + z.x.abs().max(z.y.abs()));

    for iter in 0..cfg.max_iters {
        let (_, grad) = interference_and_gradient(z, stations)?;
        let norm = grad.norm();
        if norm < cfg.grad_tol {
            run.converged = true;
            break;
        }
        let dir = grad * (-1.0 / norm);

        let mut accepted = None;
        let mut moved_any = false;
        while step >= MIN_STEP {
            let cand = region.project(z + dir * step);
            let moved = cand.distance(z);
            if moved <= pinned_tol {
                // the projection pins us: constrained stationary point
                break;
            }
            moved_any = true;
            let gc = interference(cand, stations)?;
            if gc < g {
                accepted = Some((cand, gc, moved));
                break;
            }
            step *= cfg.shrink_factor;
        }

        match accepted {
            Some((cand, gc, moved)) => {
                z = cand;
                g = gc;
                run.path.push(z);
                run.g_history.push(g);
                if moved < cfg.move_tol {
                    run.converged = true;
                    break;
                }
                // recover from earlier backtracking, never beyond the base step
                step = (step / cfg.shrink_factor).min(cfg.step_dt);
            }
            None if iter == 0 && moved_any => return Err(OptimizeError::NoDescent(z)),
            None => {
                // no representable decrease remains
                run.converged = true;
                break;
            }
        }
    }
    Ok(run)
}

/// Whether `t ∩ roi` has non-empty interior.
pub fn overlaps_roi(t: &Triangle, points: &[Point], roi: &Rect) -> bool {
    let area = t.signed_area(points).abs();
    match ConvexRegion::triangle_rect(t, points, roi) {
        Ok(region) => region.area() > 1e-12 * area,
        Err(_) => false,
    }
}

/// One candidate per triangle overlapping the roi, in triangle order.
///
/// A start that cannot descend at all leaves its projected start point as
/// the candidate with `converged = false`.
pub fn candidate_minima(
    tri: &Triangulation,
    stations: &StationSet,
    roi: &Rect,
    cfg: &DescentConfig,
) -> Vec<CandidateSite> {
    let points = tri.points();
    let ids: Vec<usize> = (0..tri.len()).filter(|&id| overlaps_roi(&tri.triangle(id), points, roi)).collect();
    ids.par_iter()
        .filter_map(|&id| {
            let t = tri.triangle(id);
            match minimize_in_triangle(id, &t, points, stations, roi, cfg) {
                Ok(site) => Some(site),
                Err(OptimizeError::NoDescent(p)) => {
                    let g = interference(p, stations).ok()?;
                    let run = DescentRun { path: vec![p], g_history: vec![g], converged: false };
                    Some(CandidateSite {
                        triangle_id: id,
                        position: p,
                        interference: g,
                        iterations: 0,
                        converged: false,
                        run,
                        start_ends: vec![p],
                    })
                }
                Err(_) => None,
            }
        })
        .collect()
}

/// Candidate dump: `triangle_id,x,y,g,iterations,converged` per line.
pub fn format_candidates(sites: &[CandidateSite]) -> String {
    let mut s = String::new();
    for c in sites {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{}",
            c.triangle_id, c.position.x, c.position.y, c.interference, c.iterations, c.converged
        );
    }
    s
}
