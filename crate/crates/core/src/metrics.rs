//! Grid estimators for β-coverage and capacity over the region of interest.
//!
//! The roi is sampled at the centres of a `resolution x resolution` grid.
//! Every station contributes interference, including those outside the roi.
//! Rows are evaluated independently (in parallel) and reduced in row order,
//! so results are bit-identical regardless of thread count.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::geometry::{Point, Rect};
use crate::radio::{RadioParams, SINGULAR_EPS};
use crate::scenario::{stations_in, StationSet};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MetricsError {
    #[error("station set is empty")]
    EmptySet,
    #[error("station index {index} out of range for {len} stations")]
    BadIndex { index: usize, len: usize },
    #[error("grid resolution must be at least 2, got {0}")]
    BadResolution(usize),
    #[error("reports were computed with different settings: {0}")]
    MismatchedConfig(String),
}

/// Cell-centre sampling grid over a rectangle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    pub rect: Rect,
    pub resolution: usize,
}

impl Grid {
    pub fn new(rect: Rect, resolution: usize) -> Result<Self, MetricsError> {
        if resolution < 2 {
            return Err(MetricsError::BadResolution(resolution));
        }
        Ok(Grid { rect, resolution })
    }

    pub fn cell_width(&self) -> f64 {
        self.rect.width() / self.resolution as f64
    }

    pub fn cell_height(&self) -> f64 {
        self.rect.height() / self.resolution as f64
    }

    pub fn cell_area(&self) -> f64 {
        self.rect.area() / (self.resolution * self.resolution) as f64
    }

    pub fn cell_count(&self) -> usize {
        self.resolution * self.resolution
    }

    /// Centre of cell `(col, row)`; row 0 is at `min_y`.
    pub fn center(&self, col: usize, row: usize) -> Point {
        Point::new(
            self.rect.min_x + (col as f64 + 0.5) * self.cell_width(),
            self.rect.min_y + (row as f64 + 0.5) * self.cell_height(),
        )
    }

    fn rows<T: Send>(&self, f: impl Fn(usize, &mut Vec<f64>) -> T + Sync) -> Vec<T> {
        (0..self.resolution).into_par_iter().map_init(Vec::new, |buf, row| f(row, buf)).collect()
    }
}

/// Received powers from every station at `z` plus the nearest station.
struct Field {
    total: f64,
    best: usize,
    /// Interference seen by the best server (everything but its own term).
    best_rest: f64,
    singular: bool,
}

fn field_at(z: Point, stations: &StationSet, terms: &mut Vec<f64>) -> Field {
    terms.clear();
    let eps2 = SINGULAR_EPS * SINGULAR_EPS;
    let mut best = 0;
    let mut best_d2 = f64::INFINITY;
    for (i, s) in stations.positions().iter().enumerate() {
        let d2 = z.distance2(*s);
        if d2 < best_d2 {
            best_d2 = d2;
            best = i;
        }
        terms.push(if d2 < eps2 { 0.0 } else { stations.power_from_d2(d2) });
    }
    let singular = best_d2 < eps2;
    let mut total = 0.0;
    let mut best_rest = 0.0;
    for (i, &t) in terms.iter().enumerate() {
        total += t;
        if i != best {
            best_rest += t;
        }
    }
    Field { total, best, best_rest, singular }
}

impl Field {
    fn best_sinr(&self, terms: &[f64], cap: f64) -> f64 {
        if self.singular || self.best_rest == 0.0 {
            cap
        } else {
            (terms[self.best] / self.best_rest).min(cap)
        }
    }

    fn sinr(&self, k: usize, terms: &[f64], cap: f64) -> f64 {
        if k == self.best {
            return self.best_sinr(terms, cap);
        }
        if self.singular {
            return 0.0;
        }
        let rest = self.total - terms[k];
        if rest <= 0.0 {
            cap
        } else {
            (terms[k] / rest).min(cap)
        }
    }
}

fn log2_1p(s: f64) -> f64 {
    s.ln_1p() * std::f64::consts::LOG2_E
}

fn require_nonempty(stations: &StationSet) -> Result<(), MetricsError> {
    if stations.is_empty() {
        Err(MetricsError::EmptySet)
    } else {
        Ok(())
    }
}

/// Index of the station covering each cell at threshold `beta`, row-major
/// with row 0 at `min_y`. Only the best server can reach `beta >= 1`; for
/// `beta < 1` the best server is reported when it qualifies.
pub fn coverage_map(
    stations: &StationSet,
    roi: &Rect,
    beta: f64,
    resolution: usize,
    sinr_cap: f64,
) -> Result<Vec<Option<usize>>, MetricsError> {
    require_nonempty(stations)?;
    let grid = Grid::new(*roi, resolution)?;
    let rows = grid.rows(|row, terms| {
        (0..resolution)
            .map(|col| {
                let f = field_at(grid.center(col, row), stations, terms);
                (f.best_sinr(terms, sinr_cap) >= beta).then_some(f.best)
            })
            .collect::<Vec<_>>()
    });
    Ok(rows.into_iter().flatten().collect())
}

/// Covered area and fraction of the roi where the best server reaches `beta`.
pub fn coverage(stations: &StationSet, roi: &Rect, beta: f64, resolution: usize) -> Result<(f64, f64), MetricsError> {
    let map = coverage_map(stations, roi, beta, resolution, crate::radio::DEFAULT_SINR_CAP)?;
    let covered = map.iter().filter(|c| c.is_some()).count();
    let fraction = covered as f64 / map.len() as f64;
    Ok((fraction * roi.area(), fraction))
}

/// β-reception area of every station inside the roi.
pub fn reception_areas(
    stations: &StationSet,
    roi: &Rect,
    beta: f64,
    resolution: usize,
) -> Result<Vec<f64>, MetricsError> {
    require_nonempty(stations)?;
    let grid = Grid::new(*roi, resolution)?;
    let n = stations.len();
    let cap = crate::radio::DEFAULT_SINR_CAP;
    let rows = grid.rows(|row, terms| {
        let mut counts = vec![0u32; n];
        for col in 0..resolution {
            let f = field_at(grid.center(col, row), stations, terms);
            for (k, c) in counts.iter_mut().enumerate() {
                if f.sinr(k, terms, cap) >= beta {
                    *c += 1;
                }
            }
        }
        counts
    });
    let mut totals = vec![0u64; n];
    for r in rows {
        for (t, c) in totals.iter_mut().zip(r) {
            *t += c as u64;
        }
    }
    Ok(totals.into_iter().map(|c| c as f64 * grid.cell_area()).collect())
}

pub fn reception_area(
    i: usize,
    stations: &StationSet,
    roi: &Rect,
    beta: f64,
    resolution: usize,
) -> Result<f64, MetricsError> {
    if i >= stations.len() {
        return Err(MetricsError::BadIndex { index: i, len: stations.len() });
    }
    Ok(reception_areas(stations, roi, beta, resolution)?[i])
}

/// `Σ_k log2(1 + SINR_k(z))` summed over every station.
pub fn capacity_at(z: Point, stations: &StationSet, params: &RadioParams) -> f64 {
    let mut terms = Vec::with_capacity(stations.len());
    let f = field_at(z, stations, &mut terms);
    params.bandwidth_w * (0..stations.len()).map(|k| log2_1p(f.sinr(k, &terms, params.sinr_cap))).sum::<f64>()
}

/// Rate from the best server only.
pub fn best_server_capacity_at(z: Point, stations: &StationSet, params: &RadioParams) -> f64 {
    let mut terms = Vec::with_capacity(stations.len());
    let f = field_at(z, stations, &mut terms);
    params.bandwidth_w * log2_1p(f.best_sinr(&terms, params.sinr_cap))
}

/// Grid mean of [`capacity_at`] over the roi.
pub fn average_capacity(
    stations: &StationSet,
    roi: &Rect,
    params: &RadioParams,
    resolution: usize,
) -> Result<f64, MetricsError> {
    Ok(evaluate(stations, roi, params, resolution)?.avg_capacity_density)
}

#[derive(Clone, Debug, PartialEq)]
pub struct MetricsReport {
    pub coverage_area: f64,
    pub coverage_fraction: f64,
    /// Grid mean of the all-station rate sum, per unit bandwidth.
    pub avg_capacity_density: f64,
    /// Grid mean of the best-server rate, per unit bandwidth.
    pub avg_capacity_best_server: f64,
    pub station_count_roi: usize,
    pub grid_resolution: usize,
    pub roi: Rect,
    pub beta: f64,
}

impl MetricsReport {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{:<28}{:.4}", "Coverage area", self.coverage_area);
        let _ = writeln!(s, "{:<28}{:.2}%", "Coverage percentage", 100.0 * self.coverage_fraction);
        let _ = writeln!(s, "{:<28}{:.4}", "Capacity", self.avg_capacity_density);
        let _ = writeln!(s, "{:<28}{:.4}", "Capacity (best server)", self.avg_capacity_best_server);
        let _ = writeln!(s, "{:<28}{}", "Stations in roi", self.station_count_roi);
        let _ = writeln!(s, "{:<28}{}", "Grid resolution", self.grid_resolution);
        s
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("metric,value\n");
        for (name, v) in self.rows() {
            let _ = writeln!(s, "{name},{v}");
        }
        s
    }

    fn rows(&self) -> [(&'static str, f64); 5] {
        [
            ("coverage_area", self.coverage_area),
            ("coverage_fraction", self.coverage_fraction),
            ("avg_capacity_density", self.avg_capacity_density),
            ("avg_capacity_best_server", self.avg_capacity_best_server),
            ("station_count_roi", self.station_count_roi as f64),
        ]
    }
}

/// Coverage and both capacity averages in one grid pass.
pub fn evaluate(
    stations: &StationSet,
    roi: &Rect,
    params: &RadioParams,
    resolution: usize,
) -> Result<MetricsReport, MetricsError> {
    require_nonempty(stations)?;
    let grid = Grid::new(*roi, resolution)?;
    let n = stations.len();
    let cap = params.sinr_cap;
    let rows = grid.rows(|row, terms| {
        let (mut covered, mut all, mut best) = (0u64, 0.0f64, 0.0f64);
        for col in 0..resolution {
            let f = field_at(grid.center(col, row), stations, terms);
            let sb = f.best_sinr(terms, cap);
            if sb >= params.beta {
                covered += 1;
            }
            best += log2_1p(sb);
            all += (0..n).map(|k| log2_1p(f.sinr(k, terms, cap))).sum::<f64>();
        }
        (covered, all, best)
    });
    let (mut covered, mut all, mut best) = (0u64, 0.0, 0.0);
    for (c, a, b) in rows {
        covered += c;
        all += a;
        best += b;
    }
    let cells = grid.cell_count() as f64;
    let fraction = covered as f64 / cells;
    Ok(MetricsReport {
        coverage_area: fraction * roi.area(),
        coverage_fraction: fraction,
        avg_capacity_density: params.bandwidth_w * all / cells,
        avg_capacity_best_server: params.bandwidth_w * best / cells,
        station_count_roi: stations_in(stations, roi).len(),
        grid_resolution: resolution,
        roi: *roi,
        beta: params.beta,
    })
}

/// Relative change from `base` to `value`, in percent.
pub fn pct_increase(base: f64, value: f64) -> f64 {
    if base == value {
        0.0
    } else {
        100.0 * (value - base) / base
    }
}

/// Scenario 0 against one or more placement outcomes.
#[derive(Clone, Debug, PartialEq)]
pub struct Comparison {
    pub base: MetricsReport,
    /// `(short label, column title, report)`, e.g. `("h1", "Heuristic 1", ..)`.
    pub others: Vec<(String, String, MetricsReport)>,
}

/// Scenario 0 versus Heuristic 1 and Heuristic 2.
pub fn compare_scenarios(
    base: &MetricsReport,
    h1: &MetricsReport,
    h2: &MetricsReport,
) -> Result<Comparison, MetricsError> {
    Comparison::new(
        base.clone(),
        vec![("h1".into(), "Heuristic 1".into(), h1.clone()), ("h2".into(), "Heuristic 2".into(), h2.clone())],
    )
}

impl Comparison {
    pub fn new(base: MetricsReport, others: Vec<(String, String, MetricsReport)>) -> Result<Self, MetricsError> {
        for (_, title, r) in &others {
            if r.roi != base.roi || r.grid_resolution != base.grid_resolution || r.beta != base.beta {
                return Err(MetricsError::MismatchedConfig(format!(
                    "{title}: roi {} res {} beta {} vs roi {} res {} beta {}",
                    r.roi, r.grid_resolution, r.beta, base.roi, base.grid_resolution, base.beta
                )));
            }
        }
        Ok(Comparison { base, others })
    }

    pub fn coverage_increase(&self, i: usize) -> f64 {
        pct_increase(self.base.coverage_area, self.others[i].2.coverage_area)
    }

    pub fn capacity_increase(&self, i: usize) -> f64 {
        pct_increase(self.base.avg_capacity_density, self.others[i].2.avg_capacity_density)
    }

    /// Aligned table in the layout of the coverage and capacity tables.
    pub fn to_text_table(&self) -> String {
        const W: usize = 16;
        let mut s = String::new();
        let mut line = |label: &str, base: String, vals: Vec<String>| {
            let _ = write!(s, "{label:<26}{base:>W$}");
            for v in vals {
                let _ = write!(s, "{v:>W$}");
            }
            s.push('\n');
        };
        line("", "Scenario 0".into(), self.others.iter().map(|o| o.1.clone()).collect());
        let r = |f: fn(&MetricsReport) -> f64, fmt: fn(f64) -> String| -> (String, Vec<String>) {
            (fmt(f(&self.base)), self.others.iter().map(|o| fmt(f(&o.2))).collect())
        };
        let pct = |f: fn(&MetricsReport) -> f64| -> Vec<String> {
            self.others.iter().map(|o| format!("{:.2}%", pct_increase(f(&self.base), f(&o.2)))).collect()
        };

        let (b, v) = r(|m| m.avg_capacity_density, |x| format!("{x:.4}"));
        line("Capacity", b, v);
        line("Percentage increase", "-".into(), pct(|m| m.avg_capacity_density));
        let (b, v) = r(|m| m.avg_capacity_best_server, |x| format!("{x:.4}"));
        line("Capacity (best server)", b, v);
        line("Percentage increase", "-".into(), pct(|m| m.avg_capacity_best_server));
        let (b, v) = r(|m| m.coverage_area, |x| format!("{x:.4}"));
        line("Total coverage area", b, v);
        let (b, v) = r(|m| m.coverage_fraction, |x| format!("{:.2}%", 100.0 * x));
        line("Coverage percentage", b, v);
        line("Percentage increase", "-".into(), pct(|m| m.coverage_area));
        let (b, v) = r(|m| m.station_count_roi as f64, |x| format!("{x}"));
        line("Stations in roi", b, v);
        s
    }

    /// Machine-readable form; with the two standard heuristics the header is
    /// `metric,scenario0,heuristic1,heuristic2,pct_increase_h1,pct_increase_h2`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("metric,scenario0");
        for (short, _, _) in &self.others {
            let _ = write!(s, ",heuristic{}", short.trim_start_matches('h'));
        }
        for (short, _, _) in &self.others {
            let _ = write!(s, ",pct_increase_{short}");
        }
        s.push('\n');
        let base_rows = self.base.rows();
        for (i, (name, b)) in base_rows.iter().enumerate() {
            let _ = write!(s, "{name},{b}");
            let vals: Vec<f64> = self.others.iter().map(|o| o.2.rows()[i].1).collect();
            for v in &vals {
                let _ = write!(s, ",{v}");
            }
            for v in &vals {
                let _ = write!(s, ",{}", pct_increase(*b, *v));
            }
            s.push('\n');
        }
        s
    }
}
