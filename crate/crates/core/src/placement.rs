//! Greedy selection of new base-station sites from the candidate minima.
//!
//! Heuristic 1 ranks the candidate set once, on the original stations, and
//! takes the `k` lowest-interference sites. Heuristic 2 adds one site at a
//! time: after each addition the new station joins the triangulation and the
//! interference field, and the candidates are recomputed and re-ranked.

use std::fmt::{self, Write as _};

use crate::geometry::{GeometryError, Point, Rect, Triangulation};
use crate::optimizer::{candidate_minima, CandidateSite, DescentConfig};
use crate::scenario::{ScenarioError, StationSet};

/// Relative band inside which interference values count as tied.
const RANK_TIE_TOL: f64 = 1e-12;

/// Picks closer than this to an earlier pick are skipped.
const MIN_SEPARATION: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PlacementError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Heuristic {
    /// Rank once, take the best `k`.
    RankOnce,
    /// Add, re-triangulate, re-rank.
    Rerank,
}

impl Heuristic {
    pub fn id(self) -> u8 {
        match self {
            Heuristic::RankOnce => 1,
            Heuristic::Rerank => 2,
        }
    }

    pub fn from_id(id: u8) -> Option<Self> {
        match id {
            1 => Some(Heuristic::RankOnce),
            2 => Some(Heuristic::Rerank),
            _ => None,
        }
    }
}

impl fmt::Display for Heuristic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "heuristic {}", self.id())
    }
}

/// How Heuristic 2 updates its triangulation after each addition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Retriangulation {
    /// Bowyer-Watson insertion into the existing triangulation.
    #[default]
    Incremental,
    /// Triangulate the augmented station set from scratch.
    FromScratch,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PlacementPlan {
    pub heuristic: Heuristic,
    pub requested: usize,
    /// New sites in order of addition.
    pub added: Vec<Point>,
    /// `g` at each site when it was selected.
    pub per_addition_interference: Vec<f64>,
    pub roi: Rect,
}

impl PlacementPlan {
    /// Fewer sites than requested were available.
    pub fn is_short(&self) -> bool {
        self.added.len() < self.requested
    }

    /// Plan file: `heuristic,<id>` then `order,x,y,g_at_selection` lines.
    /// The roi travels in a `# roi` comment line.
    pub fn to_file_string(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "heuristic,{}", self.heuristic.id());
        let _ = writeln!(s, "# roi {}", self.roi);
        let _ = writeln!(s, "# requested {}", self.requested);
        for (i, (p, g)) in self.added.iter().zip(&self.per_addition_interference).enumerate() {
            let _ = writeln!(s, "{},{},{},{}", i + 1, p.x, p.y, g);
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self, PlacementError> {
        let err = |line: usize, msg: String| PlacementError::Parse { line, msg };
        let mut heuristic = None;
        let mut roi = None;
        let mut requested = None;
        let mut added = Vec::new();
        let mut gs = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(meta) = line.strip_prefix('#') {
                let meta = meta.trim();
                if let Some(r) = meta.strip_prefix("roi ") {
                    roi = Some(r.parse::<Rect>().map_err(|e| err(n + 1, e.to_string()))?);
                } else if let Some(k) = meta.strip_prefix("requested ") {
                    requested = Some(k.trim().parse().map_err(|_| err(n + 1, format!("bad count {k:?}")))?);
                }
                continue;
            }
            if heuristic.is_none() {
                let id = line
                    .strip_prefix("heuristic,")
                    .and_then(|v| v.trim().parse::<u8>().ok())
                    .and_then(Heuristic::from_id)
                    .ok_or_else(|| err(n + 1, format!("expected heuristic,<1|2>, got {line:?}")))?;
                heuristic = Some(id);
                continue;
            }
            let f: Vec<&str> = line.split(',').map(str::trim).collect();
            let bad = || err(n + 1, format!("expected order,x,y,g, got {line:?}"));
            if f.len() != 4 {
                return Err(bad());
            }
            let order: usize = f[0].parse().map_err(|_| bad())?;
            if order != added.len() + 1 {
                return Err(err(n + 1, format!("order {order} out of sequence")));
            }
            let x: f64 = f[1].parse().map_err(|_| bad())?;
            let y: f64 = f[2].parse().map_err(|_| bad())?;
            gs.push(f[3].parse::<f64>().map_err(|_| bad())?);
            added.push(Point::new(x, y));
        }
        let heuristic = heuristic.ok_or_else(|| err(0, "missing heuristic header".into()))?;
        let roi = roi.ok_or_else(|| err(0, "missing # roi line".into()))?;
        Ok(PlacementPlan {
            heuristic,
            requested: requested.unwrap_or(added.len()),
            added,
            per_addition_interference: gs,
            roi,
        })
    }
}

/// Orders candidates by interference, ties (within a relative band) by
/// triangle id.
pub fn rank_candidates(candidates: &[CandidateSite]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..candidates.len()).collect();
    order.sort_by(|&a, &b| {
        candidates[a]
            .interference
            .total_cmp(&candidates[b].interference)
            .then(candidates[a].triangle_id.cmp(&candidates[b].triangle_id))
    });
    // Re-sort runs of near-equal values by triangle id.
    let mut start = 0;
    while start < order.len() {
        let g0 = candidates[order[start]].interference;
        let mut end = start + 1;
        while end < order.len() && candidates[order[end]].interference - g0 <= RANK_TIE_TOL * g0.abs() {
            end += 1;
        }
        order[start..end].sort_by_key(|&i| candidates[i].triangle_id);
        start = end;
    }
    order
}

fn triangulate(stations: &StationSet) -> Result<Triangulation, PlacementError> {
    Ok(Triangulation::new(stations.positions().to_vec())?)
}

fn far_from(p: Point, taken: &[Point]) -> bool {
    taken.iter().all(|q| q.distance(p) >= MIN_SEPARATION)
}

pub fn heuristic1(
    stations: &StationSet,
    roi: &Rect,
    k: usize,
    cfg: &DescentConfig,
) -> Result<PlacementPlan, PlacementError> {
    let tri = triangulate(stations)?;
    let mut plan = PlacementPlan {
        heuristic: Heuristic::RankOnce,
        requested: k,
        added: Vec::new(),
        per_addition_interference: Vec::new(),
        roi: *roi,
    };
    if k == 0 {
        return Ok(plan);
    }
    let candidates = candidate_minima(&tri, stations, roi, cfg);
    for i in rank_candidates(&candidates) {
        if plan.added.len() == k {
            break;
        }
        let c = &candidates[i];
        if far_from(c.position, &plan.added) {
            plan.added.push(c.position);
            plan.per_addition_interference.push(c.interference);
        }
    }
    Ok(plan)
}

pub fn heuristic2(
    stations: &StationSet,
    roi: &Rect,
    k: usize,
    cfg: &DescentConfig,
) -> Result<PlacementPlan, PlacementError> {
    heuristic2_with(stations, roi, k, cfg, Retriangulation::Incremental)
}

pub fn heuristic2_with(
    stations: &StationSet,
    roi: &Rect,
    k: usize,
    cfg: &DescentConfig,
    mode: Retriangulation,
) -> Result<PlacementPlan, PlacementError> {
    let mut tri = triangulate(stations)?;
    let mut current = stations.clone();
    let mut plan = PlacementPlan {
        heuristic: Heuristic::Rerank,
        requested: k,
        added: Vec::new(),
        per_addition_interference: Vec::new(),
        roi: *roi,
    };
    for _ in 0..k {
        let candidates = candidate_minima(&tri, &current, roi, cfg);
        let pick = rank_candidates(&candidates)
            .into_iter()
            .map(|i| &candidates[i])
            .find(|c| far_from(c.position, current.positions()));
        let Some(pick) = pick else {
            break;
        };
        plan.added.push(pick.position);
        plan.per_addition_interference.push(pick.interference);
        current = current.with_added(&[pick.position])?;
        match mode {
            Retriangulation::Incremental => {
                tri.insert_point(pick.position)?;
            }
            Retriangulation::FromScratch => tri = triangulate(&current)?,
        }
    }
    Ok(plan)
}

pub fn run_heuristic(
    heuristic: Heuristic,
    stations: &StationSet,
    roi: &Rect,
    k: usize,
    cfg: &DescentConfig,
) -> Result<PlacementPlan, PlacementError> {
    match heuristic {
        Heuristic::RankOnce => heuristic1(stations, roi, k, cfg),
        Heuristic::Rerank => heuristic2(stations, roi, k, cfg),
    }
}
