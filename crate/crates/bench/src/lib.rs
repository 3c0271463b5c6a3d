//! Fixtures shared by the criterion benchmarks.

use siteplan::{generate_ppp, ScenarioConfig, StationSet};

/// Stations of the reference desk-scale scenario for `seed`.
pub fn reference_stations(seed: u64) -> (ScenarioConfig, StationSet) {
    let cfg = ScenarioConfig::reference(seed);
    let stations = generate_ppp(&cfg.extent, cfg.lambda, cfg.seed, cfg.alpha).expect("valid reference config");
    (cfg, stations)
}

/// A Poisson field with roughly `n` stations on a square of side `side`.
pub fn field_of(n: usize, side: f64, seed: u64) -> StationSet {
    let extent = siteplan::Rect::new(0.0, 0.0, side, side).expect("positive side");
    generate_ppp(&extent, n as f64 / (side * side), seed, 4.0).expect("valid intensity")
}
