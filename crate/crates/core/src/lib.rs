//! Minimum-interference placement of new base stations.
//!
//! Existing stations are Delaunay-triangulated; in every triangle that
//! overlaps the region of interest a projected normalized-gradient descent
//! finds the point of least received power `g(z) = Σ |z - z_i|^-alpha`.
//! Two greedy heuristics pick new sites from those candidates, and grid
//! estimators measure the resulting β-coverage and Shannon capacity.
//!
//! ```
//! use siteplan::{heuristic2, DescentConfig, Rect, ScenarioConfig, generate_ppp};
//!
//! let cfg = ScenarioConfig::reference(3);
//! let stations = generate_ppp(&cfg.extent, cfg.lambda, cfg.seed, cfg.alpha).unwrap();
//! let plan = heuristic2(&stations, &cfg.roi, 2, &cfg.descent).unwrap();
//! assert_eq!(plan.added.len(), 2);
//! assert!(plan.added.iter().all(|p| cfg.roi.contains(*p)));
//! ```

pub mod geometry;
pub mod metrics;
pub mod optimizer;
pub mod placement;
pub mod radio;
pub mod render;
pub mod scenario;

pub use geometry::{
    barycentric, centroid, clamp_to_triangle_and_rect, delaunay_triangulate, GeometryError, Point, Rect, Triangle,
    Triangulation,
};
pub use metrics::{
    average_capacity, compare_scenarios, coverage, coverage_map, evaluate, pct_increase, reception_area,
    reception_areas, Comparison, Grid, MetricsError, MetricsReport,
};
pub use optimizer::{candidate_minima, minimize_in_triangle, CandidateSite, DescentConfig, OptimizeError};
pub use placement::{
    heuristic1, heuristic2, heuristic2_with, run_heuristic, Heuristic, PlacementError, PlacementPlan, Retriangulation,
};
pub use radio::{
    best_server, channel_gain, interference, interference_gradient, shannon_rate, sinr, RadioError, RadioParams,
};
pub use render::{render_scenario, Layer, RenderError, RenderSpec};
pub use scenario::{generate_ppp, stations_in, ScenarioConfig, ScenarioError, StationSet};
