//! Closed-form field quantities for uniform-power stations with power-law
//! path loss and no thermal noise.

use crate::geometry::Point;
use crate::scenario::StationSet;

/// Queries closer than this to a station are singular.
pub const SINGULAR_EPS: f64 = 1e-9;

/// Default SINR ceiling (60 dB).
pub const DEFAULT_SINR_CAP: f64 = 1e6;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RadioError {
    #[error("point {0} coincides with a station")]
    SingularPoint(Point),
    #[error("station index {index} out of range for {len} stations")]
    BadIndex { index: usize, len: usize },
    #[error("station set is empty")]
    EmptySet,
    #[error("invalid radio parameter: {0}")]
    InvalidParameter(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct RadioParams {
    pub alpha: f64,
    pub beta: f64,
    /// Per-sub-band bandwidth; 1 makes rates spectral efficiencies.
    pub bandwidth_w: f64,
    /// Antenna height. The planner works with 0.
    pub h: f64,
    pub kappa: f64,
    pub sinr_cap: f64,
}

impl RadioParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self, RadioError> {
        let p = RadioParams { alpha, beta, bandwidth_w: 1.0, h: 0.0, kappa: 1.0, sinr_cap: DEFAULT_SINR_CAP };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), RadioError> {
        let bad = |m: &str| Err(RadioError::InvalidParameter(m.to_string()));
        if !(self.alpha > 2.0) {
            return bad("alpha must exceed 2");
        }
        if !(self.beta > 0.0) {
            return bad("beta must be positive");
        }
        if !(self.bandwidth_w > 0.0) {
            return bad("bandwidth must be positive");
        }
        if !(self.sinr_cap > 0.0) {
            return bad("sinr_cap must be positive");
        }
        if !(self.h >= 0.0) || !(self.kappa > 0.0) {
            return bad("height must be >= 0 and kappa > 0");
        }
        Ok(())
    }
}

fn check_singular(z: Point, stations: &StationSet) -> Result<(), RadioError> {
    let eps2 = SINGULAR_EPS * SINGULAR_EPS;
    if stations.positions().iter().any(|s| z.distance2(*s) < eps2) {
        return Err(RadioError::SingularPoint(z));
    }
    Ok(())
}

/// `g(z) = Σ |z - z_i|^-alpha`.
pub fn interference(z: Point, stations: &StationSet) -> Result<f64, RadioError> {
    let eps2 = SINGULAR_EPS * SINGULAR_EPS;
    let mut g = 0.0;
    for s in stations.positions() {
        let d2 = z.distance2(*s);
        if d2 < eps2 {
            return Err(RadioError::SingularPoint(z));
        }
        g += stations.power_from_d2(d2);
    }
    Ok(g)
}

/// `∇g(z) = Σ -alpha (z - z_i) / |z - z_i|^(alpha+2)`.
pub fn interference_gradient(z: Point, stations: &StationSet) -> Result<Point, RadioError> {
    Ok(interference_and_gradient(z, stations)?.1)
}

/// `g` and `∇g` in a single pass over the stations.
pub fn interference_and_gradient(z: Point, stations: &StationSet) -> Result<(f64, Point), RadioError> {
    let eps2 = SINGULAR_EPS * SINGULAR_EPS;
    let alpha = stations.alpha();
    let mut g = 0.0;
    let mut grad = Point::default();
    for s in stations.positions() {
        let d = z - *s;
        let d2 = d.norm2();
        if d2 < eps2 {
            return Err(RadioError::SingularPoint(z));
        }
        let pw = stations.power_from_d2(d2);
        g += pw;
        grad = grad + d * (-alpha * pw / d2);
    }
    Ok((g, grad))
}

/// Signal-to-interference ratio of station `k` at `z`, capped at `sinr_cap`.
/// With a single station the ratio is the cap.
pub fn sinr(z: Point, k: usize, stations: &StationSet, sinr_cap: f64) -> Result<f64, RadioError> {
    let n = stations.len();
    if k >= n {
        return Err(RadioError::BadIndex { index: k, len: n });
    }
    check_singular(z, stations)?;
    let mut signal = 0.0;
    let mut rest = 0.0;
    for (j, s) in stations.positions().iter().enumerate() {
        let pw = stations.power_from_d2(z.distance2(*s));
        if j == k {
            signal = pw;
        } else {
            rest += pw;
        }
    }
    if rest == 0.0 {
        return Ok(sinr_cap);
    }
    Ok((signal / rest).min(sinr_cap))
}

/// Nearest station (lowest index on ties); under uniform power this is the
/// maximum-SINR server.
pub fn best_server(z: Point, stations: &StationSet) -> Result<usize, RadioError> {
    if stations.is_empty() {
        return Err(RadioError::EmptySet);
    }
    check_singular(z, stations)?;
    let mut best = 0;
    let mut best_d2 = f64::INFINITY;
    for (i, s) in stations.positions().iter().enumerate() {
        let d2 = z.distance2(*s);
        if d2 < best_d2 {
            best = i;
            best_d2 = d2;
        }
    }
    Ok(best)
}

/// Shannon rate `W log2(1 + min(s, cap))`.
pub fn shannon_rate(s: f64, params: &RadioParams) -> f64 {
    params.bandwidth_w * s.min(params.sinr_cap).max(0.0).ln_1p() * std::f64::consts::LOG2_E
}

/// `κ (h² + d²)^(-alpha/2)`.
pub fn channel_gain(d: f64, params: &RadioParams) -> Result<f64, RadioError> {
    let r2 = params.h * params.h + d * d;
    if r2 == 0.0 {
        return Err(RadioError::SingularPoint(Point::default()));
    }
    Ok(params.kappa * r2.powf(-0.5 * params.alpha))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(points: &[(f64, f64)], alpha: f64) -> StationSet {
        StationSet::new(points.iter().map(|&(x, y)| Point::new(x, y)).collect(), alpha).unwrap()
    }

    fn square() -> StationSet {
        set(&[(1., 1.), (-1., 1.), (-1., -1.), (1., -1.)], 4.0)
    }

    #[test]
    fn interference_values() {
        assert!((interference(Point::default(), &square()).unwrap() - 1.0).abs() < 1e-15);
        // alpha = 2 is outside the station-set domain; approach it from above
        let one = set(&[(3., 4.)], 2.0 + 1e-12);
        assert!((interference(Point::default(), &one).unwrap() - 0.04).abs() < 1e-12);
        assert_eq!(interference(Point::new(1., 1.), &square()), Err(RadioError::SingularPoint(Point::new(1., 1.))));
    }

    #[test]
    fn gradient_values() {
        let g = interference_gradient(Point::default(), &square()).unwrap();
        assert!(g.norm() < 1e-15);
        let one = set(&[(0., 0.)], 4.0);
        assert_eq!(interference_gradient(Point::new(1., 0.), &one).unwrap(), Point::new(-4.0, 0.0));
    }

    #[test]
    fn sinr_values() {
        let two = set(&[(0., 0.), (2., 0.)], 3.0);
        assert!((sinr(Point::new(1., 0.), 0, &two, DEFAULT_SINR_CAP).unwrap() - 1.0).abs() < 1e-15);
        let s = sinr(Point::default(), 0, &square(), DEFAULT_SINR_CAP).unwrap();
        assert!((s - 1.0 / 3.0).abs() < 1e-15);
        let pair = set(&[(0., 0.), (4., 0.)], 4.0);
        assert!((sinr(Point::new(1., 0.), 0, &pair, DEFAULT_SINR_CAP).unwrap() - 81.0).abs() < 1e-12);
        assert_eq!(sinr(Point::new(5., 5.), 0, &set(&[(0., 0.)], 4.0), 1e6).unwrap(), 1e6);
        assert_eq!(sinr(Point::new(1., 1.), 2, &pair, 1e6), Err(RadioError::BadIndex { index: 2, len: 2 }));
    }

    #[test]
    fn best_server_tie_goes_to_lowest_index() {
        let s = set(&[(0., 0.), (10., 0.)], 4.0);
        assert_eq!(best_server(Point::new(1., 1.), &s).unwrap(), 0);
        assert_eq!(best_server(Point::new(5., 3.), &s).unwrap(), 0);
        assert_eq!(best_server(Point::new(9., 3.), &s).unwrap(), 1);
        assert_eq!(best_server(Point::default(), &set(&[], 4.0)), Err(RadioError::EmptySet));
    }

    #[test]
    fn shannon_values() {
        let mut p = RadioParams::new(4.0, 1.0).unwrap();
        assert_eq!(shannon_rate(1.0, &p), 1.0);
        assert_eq!(shannon_rate(3.0, &p), 2.0);
        assert_eq!(shannon_rate(0.0, &p), 0.0);
        p.bandwidth_w = 5.0;
        assert_eq!(shannon_rate(0.0, &p), 0.0);
        assert_eq!(shannon_rate(1.0, &p), 5.0);
    }

    #[test]
    fn channel_gain_values() {
        let mut p = RadioParams::new(2.0 + f64::EPSILON * 4.0, 1.0).unwrap();
        p.alpha = 2.0; // exercise the formula at the boundary exponent
        p.h = 1.0;
        assert_eq!(channel_gain(0.0, &p).unwrap(), 1.0);
        p.h = 4.0;
        assert!((channel_gain(3.0, &p).unwrap() - 1.0 / 25.0).abs() < 1e-15);
        let mut q = RadioParams::new(4.0, 1.0).unwrap();
        assert!((channel_gain(2.0, &q).unwrap() - 2f64.powi(-4)).abs() < 1e-15);
        q.h = 0.0;
        assert!(channel_gain(0.0, &q).is_err());
    }

    #[test]
    fn params_validation() {
        assert!(RadioParams::new(1.5, 1.0).is_err());
        assert!(RadioParams::new(4.0, 0.0).is_err());
    }
}
