use siteplan::{generate_ppp, stations_in, Rect};

fn counts(extent: &Rect, lambda: f64, seeds: u64) -> Vec<f64> {
    (0..seeds).map(|s| generate_ppp(extent, lambda, s, 4.0).unwrap().len() as f64).collect()
}

fn mean_var(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var)
}

#[test]
fn mean_count_over_a_thousand_seeds() {
    let extent = Rect::new(0.0, 0.0, 10.0, 10.0).unwrap();
    let (mean, _) = mean_var(&counts(&extent, 1.0, 1000));
    let band = 3.0 * 100f64.sqrt() / 1000f64.sqrt();
    assert!((mean - 100.0).abs() < band, "mean {mean}");
}

#[test]
fn count_variance_equals_mean() {
    let extent = Rect::new(0.0, 0.0, 10.0, 10.0).unwrap();
    let (mean, var) = mean_var(&counts(&extent, 1.0, 10_000));
    assert!((mean - 100.0).abs() < 4.0 * 0.1, "mean {mean}");
    // standard error of the sample variance of Poisson(100) over 1e4 draws is ~1.42
    assert!((var - 100.0).abs() < 5.0 * 1.42, "variance {var}");
}

#[test]
fn positions_are_uniform_on_a_four_by_four_grid() {
    let extent = Rect::new(-3.0, 2.0, 5.0, 10.0).unwrap();
    let mut cells = [0u64; 16];
    for seed in 0..200 {
        for p in generate_ppp(&extent, 1.5, seed, 4.0).unwrap().positions() {
            assert!(extent.contains(*p));
            let cx = (((p.x - extent.min_x) / 2.0) as usize).min(3);
            let cy = (((p.y - extent.min_y) / 2.0) as usize).min(3);
            cells[cy * 4 + cx] += 1;
        }
    }
    let total: u64 = cells.iter().sum();
    let expected = total as f64 / 16.0;
    let chi2: f64 = cells.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
    // 15 degrees of freedom, p = 0.001
    assert!(chi2 < 37.697, "chi-square {chi2}");
}

#[test]
fn subregion_counts_scale_with_area() {
    let extent = Rect::new(0.0, 0.0, 10.0, 10.0).unwrap();
    let quarter = Rect::new(0.0, 0.0, 5.0, 5.0).unwrap();
    let xs: Vec<f64> =
        (0..2000).map(|s| stations_in(&generate_ppp(&extent, 1.0, s, 4.0).unwrap(), &quarter).len() as f64).collect();
    let (mean, var) = mean_var(&xs);
    assert!((mean - 25.0).abs() < 4.0 * (25.0f64 / 2000.0).sqrt(), "mean {mean}");
    assert!((var - 25.0).abs() < 5.0, "variance {var}");
}

#[test]
fn seeds_are_reproducible() {
    let extent = Rect::new(0.0, 0.0, 40.0, 40.0).unwrap();
    let a = generate_ppp(&extent, 0.075, 9, 4.0).unwrap();
    let b = generate_ppp(&extent, 0.075, 9, 4.0).unwrap();
    let c = generate_ppp(&extent, 0.075, 10, 4.0).unwrap();
    assert_eq!(a.positions(), b.positions());
    assert_ne!(a.positions(), c.positions());
}

#[test]
fn zero_intensity_gives_an_empty_field() {
    let extent = Rect::new(0.0, 0.0, 10.0, 10.0).unwrap();
    assert!(generate_ppp(&extent, 0.0, 1, 4.0).unwrap().is_empty());
    assert!(generate_ppp(&extent, -1.0, 1, 4.0).is_err());
    assert!(generate_ppp(&extent, 1.0, 1, 2.0).is_err());
}
