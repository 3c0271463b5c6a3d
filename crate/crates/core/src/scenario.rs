//! Network scenarios: Poisson base-station fields, station sets, and the
//! plain-text config and station-list formats.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};

use crate::geometry::{Point, Rect};
use crate::optimizer::DescentConfig;

/// Generator identity recorded in run manifests and station-file headers.
pub const RNG_ALGORITHM: &str =
    "ChaCha8Rng(rand_chacha 0.9, seed_from_u64); count ~ rand_distr 0.5 Poisson; positions uniform";

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ScenarioError {
    #[error("path-loss exponent must exceed 2, got {0}")]
    InvalidAlpha(f64),
    #[error("stations {0} and {1} share the same position")]
    DuplicateStation(usize, usize),
    #[error("non-finite station coordinate at index {0}")]
    NonFinite(usize),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

impl ScenarioError {
    /// Malformed input (as opposed to well-formed but out-of-range values).
    pub fn is_parse_error(&self) -> bool {
        matches!(self, ScenarioError::Parse { .. })
    }
}

/// Base-station positions plus the shared path-loss exponent.
#[derive(Clone, Debug, PartialEq)]
pub struct StationSet {
    positions: Vec<Point>,
    alpha: f64,
    /// `alpha / 2` when it is an integer, enabling `powi`.
    half_alpha: Option<i32>,
}

impl StationSet {
    pub fn new(positions: Vec<Point>, alpha: f64) -> Result<Self, ScenarioError> {
        if !(alpha > 2.0) || !alpha.is_finite() {
            return Err(ScenarioError::InvalidAlpha(alpha));
        }
        if let Some(i) = positions.iter().position(|p| !p.is_finite()) {
            return Err(ScenarioError::NonFinite(i));
        }
        let mut order: Vec<usize> = (0..positions.len()).collect();
        order.sort_by(|&i, &j| {
            positions[i].x.total_cmp(&positions[j].x).then(positions[i].y.total_cmp(&positions[j].y))
        });
        for w in order.windows(2) {
            if positions[w[0]] == positions[w[1]] {
                return Err(ScenarioError::DuplicateStation(w[0].min(w[1]), w[0].max(w[1])));
            }
        }
        Ok(Self::new_unchecked(positions, alpha))
    }

    pub(crate) fn new_unchecked(positions: Vec<Point>, alpha: f64) -> Self {
        let h = alpha / 2.0;
        let half_alpha = (h.fract() == 0.0 && h.abs() < 64.0).then_some(h as i32);
        StationSet { positions, alpha, half_alpha }
    }

    pub fn positions(&self) -> &[Point] {
        &self.positions
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    /// Copy of this set with `extra` appended (same path loss).
    pub fn with_added(&self, extra: &[Point]) -> Result<StationSet, ScenarioError> {
        let mut positions = self.positions.clone();
        positions.extend_from_slice(extra);
        StationSet::new(positions, self.alpha)
    }

    /// Received power `d^-alpha` from a squared distance.
    #[inline]
    pub fn power_from_d2(&self, d2: f64) -> f64 {
        match self.half_alpha {
            Some(n) => 1.0 / d2.powi(n),
            None => d2.powf(-0.5 * self.alpha),
        }
    }
}

/// Samples a homogeneous Poisson point process of intensity `lambda` on
/// `extent`: a Poisson(lambda * area) count, then i.i.d. uniform positions.
pub fn generate_ppp(extent: &Rect, lambda: f64, seed: u64, alpha: f64) -> Result<StationSet, ScenarioError> {
    if !(lambda >= 0.0) || !lambda.is_finite() {
        return Err(ScenarioError::InvalidParameter(format!("lambda must be >= 0, got {lambda}")));
    }
    if !(alpha > 2.0) {
        return Err(ScenarioError::InvalidAlpha(alpha));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mean = lambda * extent.area();
    let count = if mean == 0.0 {
        0
    } else {
        let dist =
            Poisson::new(mean).map_err(|e| ScenarioError::InvalidParameter(format!("poisson mean {mean}: {e}")))?;
        dist.sample(&mut rng) as usize
    };
    let positions = (0..count)
        .map(|_| Point::new(rng.random_range(extent.min_x..extent.max_x), rng.random_range(extent.min_y..extent.max_y)))
        .collect();
    Ok(StationSet::new_unchecked(positions, alpha))
}

/// Stations whose position lies in `rect` (closed boundary), order kept.
pub fn stations_in(stations: &StationSet, rect: &Rect) -> StationSet {
    let positions = stations.positions().iter().copied().filter(|p| rect.contains(*p)).collect();
    StationSet::new_unchecked(positions, stations.alpha())
}

/// Everything needed to regenerate and plan one scenario.
#[derive(Clone, Debug, PartialEq)]
pub struct ScenarioConfig {
    pub extent: Rect,
    pub roi: Rect,
    pub lambda: f64,
    pub seed: u64,
    pub alpha: f64,
    pub beta: f64,
    pub k_new: usize,
    pub grid_resolution: usize,
    pub descent: DescentConfig,
}

const REQUIRED_KEYS: [&str; 8] = ["extent", "roi", "lambda", "seed", "alpha", "beta", "k_new", "grid_resolution"];

impl ScenarioConfig {
    /// The desk-scale reference experiment: 40x40 extent, central 20x20
    /// region of interest holding about 30 stations.
    pub fn reference(seed: u64) -> Self {
        let lambda = 0.075;
        ScenarioConfig {
            extent: Rect { min_x: 0.0, min_y: 0.0, max_x: 40.0, max_y: 40.0 },
            roi: Rect { min_x: 10.0, min_y: 10.0, max_x: 30.0, max_y: 30.0 },
            lambda,
            seed,
            alpha: 4.0,
            beta: 1.0,
            k_new: 5,
            grid_resolution: 500,
            descent: DescentConfig::for_intensity(lambda),
        }
    }

    pub fn validate(&self) -> Result<(), ScenarioError> {
        let bad = |m: String| Err(ScenarioError::InvalidParameter(m));
        if !self.extent.contains_rect(&self.roi) {
            return bad(format!("roi {} is not contained in extent {}", self.roi, self.extent));
        }
        if !(self.lambda >= 0.0) || !self.lambda.is_finite() {
            return bad(format!("lambda must be >= 0, got {}", self.lambda));
        }
        if !(self.alpha > 2.0) || !self.alpha.is_finite() {
            return Err(ScenarioError::InvalidAlpha(self.alpha));
        }
        if !(self.beta > 0.0) || !self.beta.is_finite() {
            return bad(format!("beta must be > 0, got {}", self.beta));
        }
        if self.grid_resolution < 2 {
            return bad(format!("grid_resolution must be >= 2, got {}", self.grid_resolution));
        }
        self.descent.validate().or_else(|e| bad(e.to_string()))
    }

    /// Warning text when the roi sits closer than `1/sqrt(lambda)` to the
    /// extent boundary.
    pub fn edge_buffer_warning(&self) -> Option<String> {
        if self.lambda <= 0.0 {
            return None;
        }
        let needed = 1.0 / self.lambda.sqrt();
        let margin = self.extent.margin_to(&self.roi);
        (margin < needed)
            .then(|| format!("roi margin {margin} is below the edge-effect buffer 1/sqrt(lambda) = {needed}"))
    }

    /// Parses `key = value` lines; `#` starts a comment line. Unknown and
    /// repeated keys are errors. `descent.*` keys are optional.
    pub fn parse(text: &str) -> Result<Self, ScenarioError> {
        let mut seen = std::collections::HashMap::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |msg: String| ScenarioError::Parse { line: n + 1, msg };
            let (k, v) = line.split_once('=').ok_or_else(|| err(format!("expected key = value, got {line:?}")))?;
            let key = k.trim().to_string();
            let known = REQUIRED_KEYS.contains(&key.as_str()) || DescentConfig::KEYS.contains(&key.as_str());
            if !known {
                return Err(err(format!("unknown key {key:?}")));
            }
            if seen.insert(key.clone(), (n + 1, v.trim().to_string())).is_some() {
                return Err(err(format!("duplicate key {key:?}")));
            }
        }
        for key in REQUIRED_KEYS {
            if !seen.contains_key(key) {
                return Err(ScenarioError::Parse { line: 0, msg: format!("missing key {key:?}") });
            }
        }

        fn value<T: std::str::FromStr>(
            seen: &std::collections::HashMap<String, (usize, String)>,
            key: &str,
        ) -> Result<Option<T>, ScenarioError> {
            match seen.get(key) {
                None => Ok(None),
                Some((line, v)) => v
                    .parse()
                    .map(Some)
                    .map_err(|_| ScenarioError::Parse { line: *line, msg: format!("bad value {v:?} for {key}") }),
            }
        }
        let rect = |key: &str| -> Result<Rect, ScenarioError> {
            let (line, v) = &seen[key];
            v.parse::<Rect>().map_err(|e| ScenarioError::Parse { line: *line, msg: format!("{key}: {e}") })
        };

        let lambda: f64 = value(&seen, "lambda")?.unwrap();
        let mut descent = DescentConfig::for_intensity(lambda);
        if let Some(v) = value(&seen, "descent.step_dt")? {
            descent.step_dt = v;
        }
        if let Some(v) = value(&seen, "descent.max_iters")? {
            descent.max_iters = v;
        }
        if let Some(v) = value(&seen, "descent.grad_tol")? {
            descent.grad_tol = v;
        }
        if let Some(v) = value(&seen, "descent.move_tol")? {
            descent.move_tol = v;
        }
        if let Some(v) = value(&seen, "descent.shrink_factor")? {
            descent.shrink_factor = v;
        }
        if let Some(v) = value(&seen, "descent.multistart")? {
            descent.multistart = v;
        }

        Ok(ScenarioConfig {
            extent: rect("extent")?,
            roi: rect("roi")?,
            lambda,
            seed: value(&seen, "seed")?.unwrap(),
            alpha: value(&seen, "alpha")?.unwrap(),
            beta: value(&seen, "beta")?.unwrap(),
            k_new: value(&seen, "k_new")?.unwrap(),
            grid_resolution: value(&seen, "grid_resolution")?.unwrap(),
            descent,
        })
    }

    /// Inverse of [`ScenarioConfig::parse`], every key written explicitly.
    pub fn to_kv_string(&self) -> String {
        let d = &self.descent;
        let mut s = String::new();
        let _ = writeln!(s, "extent = {}", self.extent);
        let _ = writeln!(s, "roi = {}", self.roi);
        let _ = writeln!(s, "lambda = {}", self.lambda);
        let _ = writeln!(s, "seed = {}", self.seed);
        let _ = writeln!(s, "alpha = {}", self.alpha);
        let _ = writeln!(s, "beta = {}", self.beta);
        let _ = writeln!(s, "k_new = {}", self.k_new);
        let _ = writeln!(s, "grid_resolution = {}", self.grid_resolution);
        let _ = writeln!(s, "descent.step_dt = {}", d.step_dt);
        let _ = writeln!(s, "descent.max_iters = {}", d.max_iters);
        let _ = writeln!(s, "descent.grad_tol = {}", d.grad_tol);
        let _ = writeln!(s, "descent.move_tol = {}", d.move_tol);
        let _ = writeln!(s, "descent.shrink_factor = {}", d.shrink_factor);
        let _ = writeln!(s, "descent.multistart = {}", d.multistart);
        s
    }
}

/// Station list: one `x,y` per line, `#` comment lines ignored.
pub fn parse_station_list(text: &str) -> Result<Vec<Point>, ScenarioError> {
    let mut out = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = || ScenarioError::Parse { line: n + 1, msg: format!("expected x,y, got {line:?}") };
        let (x, y) = line.split_once(',').ok_or_else(err)?;
        let p = Point::new(x.trim().parse().map_err(|_| err())?, y.trim().parse().map_err(|_| err())?);
        if !p.is_finite() {
            return Err(err());
        }
        out.push(p);
    }
    Ok(out)
}

/// Writes a station list; `comments` become leading `# ` lines.
pub fn format_station_list(points: &[Point], comments: &[String]) -> String {
    let mut s = String::new();
    for c in comments {
        let _ = writeln!(s, "# {c}");
    }
    for p in points {
        let _ = writeln!(s, "{},{}", p.x, p.y);
    }
    s
}
