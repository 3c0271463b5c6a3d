use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use siteplan::{
    coverage, evaluate, generate_ppp, heuristic2, reception_areas, Point, RadioParams, Rect, ScenarioConfig, StationSet,
};

fn thirty_stations(seed: u64) -> (StationSet, Rect) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts = (0..30).map(|_| Point::new(rng.random_range(0.0..20.0), rng.random_range(0.0..20.0))).collect();
    (StationSet::new(pts, 4.0).unwrap(), Rect::new(0.0, 0.0, 20.0, 20.0).unwrap())
}

#[test]
fn refining_the_grid_barely_moves_the_estimates() {
    let params = RadioParams::new(4.0, 1.0).unwrap();
    for seed in [3, 4] {
        let (s, roi) = thirty_stations(seed);
        let coarse = evaluate(&s, &roi, &params, 500).unwrap();
        let fine = evaluate(&s, &roi, &params, 1000).unwrap();
        assert!((coarse.coverage_fraction - fine.coverage_fraction).abs() < 0.01);
        let rel = (coarse.avg_capacity_density - fine.avg_capacity_density).abs() / fine.avg_capacity_density;
        assert!(rel < 0.02, "capacity moved {rel}");
    }
}

#[test]
fn coverage_shrinks_as_beta_grows() {
    let (s, roi) = thirty_stations(5);
    let mut last = f64::INFINITY;
    for beta in [0.25, 0.5, 1.0, 2.0, 4.0, 10.0] {
        let (area, fraction) = coverage(&s, &roi, beta, 200).unwrap();
        assert!(fraction <= last);
        assert!((area - fraction * roi.area()).abs() < 1e-9);
        last = fraction;
    }
}

#[test]
fn reception_areas_do_not_overlap_when_beta_is_at_least_one() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for seed in 0..10 {
        let (s, roi) = thirty_stations(seed);
        let beta = rng.random_range(1.0..3.0);
        let res = 200;
        let areas = reception_areas(&s, &roi, beta, res).unwrap();
        let total: f64 = areas.iter().sum();
        assert!(total <= roi.area() * (1.0 + 2.0 / res as f64), "seed {seed}: {total}");
        let (covered, _) = coverage(&s, &roi, beta, res).unwrap();
        assert!((total - covered).abs() < 1e-9 * roi.area());
    }
}

#[test]
fn coverage_is_invariant_under_scaling() {
    let (s, roi) = thirty_stations(7);
    let k = 37.5;
    let scaled = StationSet::new(s.positions().iter().map(|p| *p * k).collect(), 4.0).unwrap();
    let big = Rect::new(roi.min_x * k, roi.min_y * k, roi.max_x * k, roi.max_y * k).unwrap();
    let (_, a) = coverage(&s, &roi, 1.0, 300).unwrap();
    let (_, b) = coverage(&scaled, &big, 1.0, 300).unwrap();
    assert!((a - b).abs() < 1e-4, "{a} vs {b}");
}

#[test]
fn evaluate_agrees_with_the_single_metric_entry_points() {
    let (s, roi) = thirty_stations(8);
    let params = RadioParams::new(4.0, 1.0).unwrap();
    let report = evaluate(&s, &roi, &params, 120).unwrap();
    let (area, fraction) = coverage(&s, &roi, 1.0, 120).unwrap();
    assert_eq!(report.coverage_fraction, fraction);
    assert_eq!(report.coverage_area, area);
    assert_eq!(report.avg_capacity_density, siteplan::average_capacity(&s, &roi, &params, 120).unwrap());
    assert!(report.avg_capacity_best_server <= report.avg_capacity_density);
    assert_eq!(report.station_count_roi, 30);
}

#[test]
fn thread_count_does_not_change_results() {
    let (s, roi) = thirty_stations(9);
    let params = RadioParams::new(4.0, 1.0).unwrap();
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| evaluate(&s, &roi, &params, 150).unwrap())
    };
    assert_eq!(run(1), run(3));
}

#[test]
fn a_lone_station_covers_everything() {
    let s = StationSet::new(vec![Point::new(5.0, 5.0)], 4.0).unwrap();
    let roi = Rect::new(0.0, 0.0, 10.0, 10.0).unwrap();
    assert_eq!(coverage(&s, &roi, 1.0, 50).unwrap().1, 1.0);
}

#[test]
fn heuristic2_addition_never_lowers_capacity_on_reference_seeds() {
    for seed in 0..20 {
        let c = ScenarioConfig::reference(seed);
        let s = generate_ppp(&c.extent, c.lambda, c.seed, c.alpha).unwrap();
        let params = RadioParams::new(c.alpha, c.beta).unwrap();
        let plan = heuristic2(&s, &c.roi, 1, &c.descent).unwrap();
        let before = evaluate(&s, &c.roi, &params, 150).unwrap();
        let after = evaluate(&s.with_added(&plan.added).unwrap(), &c.roi, &params, 150).unwrap();
        assert!(after.avg_capacity_density >= before.avg_capacity_density, "seed {seed}");
    }
}
