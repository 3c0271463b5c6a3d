//! SVG 1.1 rendering of scenarios: reception areas, stations, triangulation,
//! candidate minima with their descent paths, the roi outline and added
//! stations with their order of addition.
//!
//! Output is a pure function of the inputs; all coordinates are printed with
//! fixed precision so identical inputs give identical bytes.

use std::fmt::Write as _;

use crate::geometry::{Point, Rect, Triangulation};
use crate::metrics::{coverage_map, Grid, MetricsError};
use crate::optimizer::CandidateSite;
use crate::placement::PlacementPlan;
use crate::radio::RadioParams;
use crate::scenario::StationSet;

/// Fill colours for reception areas, cycled by station index.
pub const PALETTE: [&str; 12] = [
    "#8dd3c7", "#ffffb3", "#bebada", "#fb8072", "#80b1d3", "#fdb462", "#b3de69", "#fccde5", "#d9d9d9", "#bc80bd",
    "#ccebc5", "#ffed6f",
];

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RenderError {
    #[error("invalid render spec: {0}")]
    InvalidSpec(String),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error(transparent)]
    Scenario(#[from] crate::scenario::ScenarioError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Layer {
    ReceptionAreas,
    Triangulation,
    DescentPaths,
    Candidates,
    Roi,
    Stations,
    AddedStations,
}

impl Layer {
    /// Drawing order, bottom first.
    pub const ALL: [Layer; 7] = [
        Layer::ReceptionAreas,
        Layer::Triangulation,
        Layer::DescentPaths,
        Layer::Candidates,
        Layer::Roi,
        Layer::Stations,
        Layer::AddedStations,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Layer::ReceptionAreas => "reception",
            Layer::Triangulation => "triangulation",
            Layer::DescentPaths => "descent",
            Layer::Candidates => "candidates",
            Layer::Roi => "roi",
            Layer::Stations => "stations",
            Layer::AddedStations => "added",
        }
    }

    pub fn from_name(s: &str) -> Option<Layer> {
        Layer::ALL.into_iter().find(|l| l.name() == s)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RenderSpec {
    pub width: u32,
    pub height: u32,
    pub layers: Vec<Layer>,
    /// Cells per axis of the reception-area raster over the roi.
    pub raster_resolution: usize,
    /// Visible border around the roi, as a fraction of its larger side.
    pub margin: f64,
}

impl Default for RenderSpec {
    fn default() -> Self {
        RenderSpec { width: 800, height: 800, layers: Layer::ALL.to_vec(), raster_resolution: 250, margin: 0.25 }
    }
}

impl RenderSpec {
    pub fn with_layers(layers: &[Layer]) -> Self {
        RenderSpec { layers: layers.to_vec(), ..RenderSpec::default() }
    }

    pub fn validate(&self) -> Result<(), RenderError> {
        if self.width < 100 || self.height < 100 {
            return Err(RenderError::InvalidSpec(format!("canvas {}x{} is below 100x100", self.width, self.height)));
        }
        if self.layers.is_empty() {
            return Err(RenderError::InvalidSpec("no layers enabled".into()));
        }
        if self.raster_resolution < 2 {
            return Err(RenderError::InvalidSpec("raster resolution must be at least 2".into()));
        }
        if !(self.margin >= 0.0) {
            return Err(RenderError::InvalidSpec("margin must be non-negative".into()));
        }
        Ok(())
    }

    pub fn has(&self, layer: Layer) -> bool {
        self.layers.contains(&layer)
    }

    /// Enabled layers in drawing order joined by `-`, for file names.
    pub fn layerset_name(&self) -> String {
        Layer::ALL.iter().filter(|l| self.has(**l)).map(|l| l.name()).collect::<Vec<_>>().join("-")
    }
}

/// `<scenario-name>.<layerset>.svg`
pub fn file_name(scenario: &str, spec: &RenderSpec) -> String {
    format!("{scenario}.{}.svg", spec.layerset_name())
}

#[derive(Clone, Debug, PartialEq)]
pub struct Rendered {
    pub svg: String,
    /// Raster cells shaded as covered (0 without the reception layer).
    pub covered_cells: usize,
}

struct Canvas {
    view: Rect,
    scale: f64,
    height: f64,
}

impl Canvas {
    fn map(&self, p: Point) -> (f64, f64) {
        ((p.x - self.view.min_x) * self.scale, self.height - (p.y - self.view.min_y) * self.scale)
    }

    fn visible(&self, p: Point) -> bool {
        self.view.contains(p)
    }
}

fn f(v: f64) -> String {
    // avoid "-0.00"
    let s = format!("{v:.2}");
    if s == "-0.00" {
        "0.00".into()
    } else {
        s
    }
}

pub fn render_scenario(
    stations: &StationSet,
    roi: &Rect,
    tri: Option<&Triangulation>,
    candidates: Option<&[CandidateSite]>,
    plan: Option<&PlacementPlan>,
    params: &RadioParams,
    spec: &RenderSpec,
) -> Result<Rendered, RenderError> {
    spec.validate()?;
    let span = roi.width().max(roi.height());
    let view = roi.expand(spec.margin * span);
    let scale = (spec.width as f64 / view.width()).min(spec.height as f64 / view.height());
    let canvas = Canvas { view, scale, height: view.height() * scale };
    let (cw, ch) = (view.width() * scale, view.height() * scale);

    let mut svg = String::new();
    let _ = writeln!(svg, r#"<?xml version="1.0" encoding="UTF-8" standalone="no"?>"#);
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{}" height="{}" viewBox="0 0 {} {}">"#,
        f(cw),
        f(ch),
        f(cw),
        f(ch)
    );
    let _ = writeln!(svg, "<desc>layers {}</desc>", spec.layerset_name());
    let _ = writeln!(svg, r##"<rect x="0" y="0" width="{}" height="{}" fill="#ffffff"/>"##, f(cw), f(ch));

    let mut covered_cells = 0;
    for layer in Layer::ALL.into_iter().filter(|l| spec.has(*l)) {
        match layer {
            Layer::ReceptionAreas => {
                let field = match plan {
                    Some(p) if !p.added.is_empty() => stations.with_added(&p.added)?,
                    _ => stations.clone(),
                };
                covered_cells = draw_reception(&mut svg, &canvas, &field, roi, params, spec.raster_resolution)?;
            }
            Layer::Triangulation => {
                if let Some(tri) = tri {
                    draw_triangulation(&mut svg, &canvas, tri);
                }
            }
            Layer::DescentPaths => {
                if let Some(c) = candidates {
                    draw_paths(&mut svg, &canvas, c);
                }
            }
            Layer::Candidates => {
                if let Some(c) = candidates {
                    draw_candidates(&mut svg, &canvas, c);
                }
            }
            Layer::Roi => {
                let (x0, y0) = canvas.map(Point::new(roi.min_x, roi.max_y));
                let _ = writeln!(
                    svg,
                    r##"<rect id="roi" x="{}" y="{}" width="{}" height="{}" fill="none" stroke="#000000" stroke-width="3"/>"##,
                    f(x0),
                    f(y0),
                    f(roi.width() * scale),
                    f(roi.height() * scale)
                );
            }
            Layer::Stations => {
                let _ = writeln!(svg, r##"<g id="stations" fill="#1f3a93">"##);
                for p in stations.positions() {
                    if canvas.visible(*p) {
                        let (x, y) = canvas.map(*p);
                        let _ = writeln!(svg, r#"<circle class="station" cx="{}" cy="{}" r="3"/>"#, f(x), f(y));
                    }
                }
                let _ = writeln!(svg, "</g>");
            }
            Layer::AddedStations => {
                if let Some(plan) = plan {
                    draw_added(&mut svg, &canvas, plan);
                }
            }
        }
    }
    let _ = writeln!(svg, "</svg>");
    Ok(Rendered { svg, covered_cells })
}

fn draw_reception(
    svg: &mut String,
    canvas: &Canvas,
    stations: &StationSet,
    roi: &Rect,
    params: &RadioParams,
    resolution: usize,
) -> Result<usize, RenderError> {
    let grid = Grid::new(*roi, resolution)?;
    let map = coverage_map(stations, roi, params.beta, resolution, params.sinr_cap)?;
    let covered = map.iter().filter(|c| c.is_some()).count();
    let (cell_w, cell_h) = (grid.cell_width() * canvas.scale, grid.cell_height() * canvas.scale);
    let _ = writeln!(svg, r#"<g id="reception" stroke="none" shape-rendering="crispEdges">"#);
    let _ = writeln!(svg, "<desc>covered-cells {covered} of {}</desc>", map.len());
    for row in 0..resolution {
        let cells = &map[row * resolution..(row + 1) * resolution];
        let (_, top) = canvas.map(Point::new(roi.min_x, roi.min_y + (row + 1) as f64 * grid.cell_height()));
        let mut col = 0;
        while col < resolution {
            let Some(owner) = cells[col] else {
                col += 1;
                continue;
            };
            let start = col;
            while col < resolution && cells[col] == Some(owner) {
                col += 1;
            }
            let (left, _) = canvas.map(Point::new(roi.min_x + start as f64 * grid.cell_width(), 0.0));
            let _ = writeln!(
                svg,
                r#"<rect class="cov" x="{}" y="{}" width="{}" height="{}" fill="{}"/>"#,
                f(left),
                f(top),
                f((col - start) as f64 * cell_w),
                f(cell_h),
                PALETTE[owner % PALETTE.len()]
            );
        }
    }
    let _ = writeln!(svg, "</g>");
    Ok(covered)
}

fn draw_triangulation(svg: &mut String, canvas: &Canvas, tri: &Triangulation) {
    let pts = tri.points();
    let mut d = String::new();
    for (id, t) in tri.triangles().iter().enumerate() {
        let v = t.vertices();
        for i in 0..3 {
            let (a, b) = (v[(i + 1) % 3], v[(i + 2) % 3]);
            // each interior edge once, from the side with the smaller id
            let emit = match tri.neighbors(id)[i] {
                None => true,
                Some(n) => id < n,
            };
            if emit {
                let (x0, y0) = canvas.map(pts[a]);
                let (x1, y1) = canvas.map(pts[b]);
                let _ = write!(d, "M{} {}L{} {}", f(x0), f(y0), f(x1), f(y1));
            }
        }
    }
    let _ = writeln!(svg, r##"<path id="triangulation" d="{d}" fill="none" stroke="#555555" stroke-width="0.8"/>"##);
}

fn draw_paths(svg: &mut String, canvas: &Canvas, candidates: &[CandidateSite]) {
    let _ = writeln!(svg, r##"<g id="descent" fill="none" stroke="#2e7d32" stroke-width="1">"##);
    for c in candidates {
        let pts: Vec<String> = c
            .run
            .path
            .iter()
            .map(|p| {
                let (x, y) = canvas.map(*p);
                format!("{},{}", f(x), f(y))
            })
            .collect();
        if pts.len() > 1 {
            let _ = writeln!(svg, r#"<polyline points="{}"/>"#, pts.join(" "));
        }
    }
    let _ = writeln!(svg, "</g>");
}

fn draw_candidates(svg: &mut String, canvas: &Canvas, candidates: &[CandidateSite]) {
    let _ = writeln!(svg, r##"<g id="candidates" stroke="#000000" stroke-width="1.2" fill="none">"##);
    for c in candidates {
        let (sx, sy) = canvas.map(c.run.start());
        let _ = writeln!(
            svg,
            r#"<path class="start" d="M{} {}L{} {}M{} {}L{} {}"/>"#,
            f(sx - 3.0),
            f(sy - 3.0),
            f(sx + 3.0),
            f(sy + 3.0),
            f(sx - 3.0),
            f(sy + 3.0),
            f(sx + 3.0),
            f(sy - 3.0)
        );
        let (ex, ey) = canvas.map(c.position);
        let _ = writeln!(svg, r#"<circle class="minimum" cx="{}" cy="{}" r="3.5"/>"#, f(ex), f(ey));
    }
    let _ = writeln!(svg, "</g>");
}

fn draw_added(svg: &mut String, canvas: &Canvas, plan: &PlacementPlan) {
    let _ = writeln!(svg, r##"<g id="added" fill="#d62728" font-family="sans-serif" font-size="14">"##);
    for (i, p) in plan.added.iter().enumerate() {
        let (x, y) = canvas.map(*p);
        let _ = writeln!(svg, r#"<circle class="added" cx="{}" cy="{}" r="4.5"/>"#, f(x), f(y));
        let _ = writeln!(svg, r#"<text class="order" x="{}" y="{}">{}</text>"#, f(x + 6.0), f(y - 6.0), i + 1);
    }
    let _ = writeln!(svg, "</g>");
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scene() -> (StationSet, Rect, RadioParams) {
        let pts = vec![Point::new(1.0, 1.0), Point::new(8.0, 2.0), Point::new(4.0, 9.0), Point::new(6.0, 5.0)];
        (
            StationSet::new(pts, 4.0).unwrap(),
            Rect::new(0.0, 0.0, 10.0, 10.0).unwrap(),
            RadioParams::new(4.0, 1.0).unwrap(),
        )
    }

    #[test]
    fn minimal_layers() {
        let (s, roi, p) = scene();
        let out =
            render_scenario(&s, &roi, None, None, None, &p, &RenderSpec::with_layers(&[Layer::Stations, Layer::Roi]))
                .unwrap();
        assert_eq!(out.svg.matches(r#"class="station""#).count(), 4);
        assert!(out.svg.contains(r#"id="roi""#));
        assert!(!out.svg.contains("reception"));
        assert_eq!(out.covered_cells, 0);
        assert!(out.svg.trim_end().ends_with("</svg>"));
    }

    #[test]
    fn output_is_deterministic() {
        let (s, roi, p) = scene();
        let tri = Triangulation::new(s.positions().to_vec()).unwrap();
        let spec = RenderSpec { raster_resolution: 40, ..RenderSpec::default() };
        let a = render_scenario(&s, &roi, Some(&tri), None, None, &p, &spec).unwrap();
        let b = render_scenario(&s, &roi, Some(&tri), None, None, &p, &spec).unwrap();
        assert_eq!(a.svg, b.svg);
    }

    #[test]
    fn covered_cells_match_metrics() {
        let (s, roi, p) = scene();
        let spec = RenderSpec { raster_resolution: 50, ..RenderSpec::with_layers(&[Layer::ReceptionAreas]) };
        let out = render_scenario(&s, &roi, None, None, None, &p, &spec).unwrap();
        let (_, frac) = crate::metrics::coverage(&s, &roi, 1.0, 50).unwrap();
        assert_eq!(out.covered_cells, (frac * 2500.0).round() as usize);
        assert!(out.svg.contains(&format!("<desc>covered-cells {} of 2500</desc>", out.covered_cells)));
    }

    #[test]
    fn invalid_specs() {
        let (s, roi, p) = scene();
        let none = RenderSpec::with_layers(&[]);
        assert!(matches!(render_scenario(&s, &roi, None, None, None, &p, &none), Err(RenderError::InvalidSpec(_))));
        let tiny = RenderSpec { width: 50, ..RenderSpec::default() };
        assert!(matches!(render_scenario(&s, &roi, None, None, None, &p, &tiny), Err(RenderError::InvalidSpec(_))));
    }

    #[test]
    fn layer_names() {
        for l in Layer::ALL {
            assert_eq!(Layer::from_name(l.name()), Some(l));
        }
        let spec = RenderSpec::with_layers(&[Layer::Roi, Layer::ReceptionAreas, Layer::Stations]);
        assert_eq!(file_name("seed7", &spec), "seed7.reception-roi-stations.svg");
    }
}
