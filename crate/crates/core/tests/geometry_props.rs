use proptest::prelude::*;
use siteplan::{barycentric, clamp_to_triangle_and_rect, GeometryError, Point, Rect, Triangle, Triangulation};

fn point_set(max: usize) -> impl Strategy<Value = Vec<Point>> {
    prop::collection::vec((0.0..100.0f64, 0.0..100.0f64), 10..max)
        .prop_map(|v| v.into_iter().map(|(x, y)| Point::new(x, y)).collect())
}

fn lattice_set() -> impl Strategy<Value = Vec<Point>> {
    prop::collection::btree_set((0i32..8, 0i32..8), 10..40)
        .prop_map(|s| s.into_iter().map(|(x, y)| Point::new(x as f64, y as f64)).collect())
}

fn shoelace(points: &[Point], ring: &[usize]) -> f64 {
    let n = ring.len();
    (0..n).map(|i| points[ring[i]].cross(points[ring[(i + 1) % n]])).sum::<f64>() * 0.5
}

fn triangle_set(t: &Triangulation, relabel: impl Fn(usize) -> usize) -> Vec<[usize; 3]> {
    let mut out: Vec<[usize; 3]> = t
        .triangles()
        .iter()
        .map(|tr| {
            let mut v = tr.vertices().map(&relabel);
            v.sort_unstable();
            v
        })
        .collect();
    out.sort_unstable();
    out
}

fn check_structure(t: &Triangulation) {
    let pts = t.points();
    for (id, tr) in t.triangles().iter().enumerate() {
        assert!(tr.signed_area(pts) > 0.0, "triangle {id} not counter-clockwise");
        for (i, nb) in t.neighbors(id).iter().enumerate() {
            if let Some(nb) = *nb {
                assert!(t.neighbors(nb).contains(&Some(id)));
                let v = tr.vertices();
                let edge = [v[(i + 1) % 3], v[(i + 2) % 3]];
                let other = t.triangle(nb).vertices();
                assert!(edge.iter().all(|e| other.contains(e)));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn empty_circumcircle_on_random_sets(pts in point_set(200)) {
        let t = Triangulation::new(pts).unwrap();
        prop_assert!(t.delaunay_violations(1e-9).is_empty());
        check_structure(&t);
    }

    #[test]
    fn area_matches_hull(pts in point_set(120)) {
        let t = Triangulation::new(pts).unwrap();
        let hull = shoelace(t.points(), &t.hull());
        prop_assert!((t.total_area() - hull).abs() <= 1e-9 * hull);
    }

    #[test]
    fn cocircular_lattices_stay_valid(pts in lattice_set()) {
        match Triangulation::new(pts) {
            Ok(t) => {
                prop_assert!(t.delaunay_violations(1e-9).is_empty());
                let hull = shoelace(t.points(), &t.hull());
                prop_assert!((t.total_area() - hull).abs() <= 1e-9 * hull.max(1.0));
                check_structure(&t);
            }
            Err(e) => prop_assert_eq!(e, GeometryError::DegenerateInput),
        }
    }

    #[test]
    fn insertion_agrees_with_scratch(pts in point_set(120), extra in (20.0..80.0f64, 20.0..80.0f64)) {
        let mut t = Triangulation::new(pts.clone()).unwrap();
        let p = Point::new(extra.0, extra.1);
        prop_assume!(t.locate(p).is_some());
        let idx = t.insert_point(p).unwrap();
        prop_assert_eq!(idx, pts.len());

        // rebuild in reverse order so the oracle takes a different path
        let mut all = pts;
        all.push(p);
        let n = all.len();
        let reversed: Vec<Point> = all.iter().rev().copied().collect();
        let scratch = Triangulation::new(reversed).unwrap();
        prop_assert_eq!(triangle_set(&t, |i| i), triangle_set(&scratch, |i| n - 1 - i));
        prop_assert!(t.delaunay_violations(1e-9).is_empty());
    }

    #[test]
    fn barycentric_round_trip(
        a in (-50.0..50.0f64, -50.0..50.0f64),
        b in (-50.0..50.0f64, -50.0..50.0f64),
        c in (-50.0..50.0f64, -50.0..50.0f64),
        w in (0.0..1.0f64, 0.0..1.0f64),
    ) {
        let pts = vec![Point::new(a.0, a.1), Point::new(b.0, b.1), Point::new(c.0, c.1)];
        let t = Triangle::new(0, 1, 2);
        prop_assume!(t.signed_area(&pts).abs() > 1e-3);
        let l1 = w.0;
        let l2 = (1.0 - l1) * w.1;
        let l3 = 1.0 - l1 - l2;
        let p = pts[0] * l1 + pts[1] * l2 + pts[2] * l3;
        let got = barycentric(&t, &pts, p).unwrap();
        for (g, want) in got.iter().zip([l1, l2, l3]) {
            prop_assert!((g - want).abs() < 1e-9, "{got:?} vs {:?}", [l1, l2, l3]);
        }
    }
}

#[test]
fn hundred_fixed_sets_are_delaunay() {
    use rand::{Rng, SeedableRng};
    for seed in 0..100u64 {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let n = rng.random_range(10..=200);
        let pts: Vec<Point> = (0..n).map(|_| Point::new(rng.random(), rng.random())).collect();
        let t = Triangulation::new(pts).unwrap();
        assert!(t.delaunay_violations(1e-9).is_empty(), "seed {seed}");
    }
}

fn in_region(q: Point, t: &Triangle, pts: &[Point], rect: &Rect, tol: f64) -> bool {
    let l = barycentric(t, pts, q).unwrap();
    l.iter().all(|&x| x >= -tol) && rect.expand(tol).contains(q)
}

#[test]
fn clamp_beats_every_dense_sample() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    let mut checked = 0;
    while checked < 40 {
        let pts: Vec<Point> =
            (0..3).map(|_| Point::new(rng.random_range(0.0..10.0), rng.random_range(0.0..10.0))).collect();
        let t = if Triangle::new(0, 1, 2).signed_area(&pts) > 0.0 {
            Triangle::new(0, 1, 2)
        } else {
            Triangle::new(0, 2, 1)
        };
        if t.signed_area(&pts) < 1.0 {
            continue;
        }
        let x0 = rng.random_range(0.0..6.0);
        let y0 = rng.random_range(0.0..6.0);
        let rect = Rect::new(x0, y0, x0 + rng.random_range(1.0..6.0), y0 + rng.random_range(1.0..6.0)).unwrap();
        let p = Point::new(rng.random_range(-5.0..15.0), rng.random_range(-5.0..15.0));
        let q = match clamp_to_triangle_and_rect(p, &t, &pts, &rect) {
            Ok(q) => q,
            Err(GeometryError::EmptyIntersection) => continue,
            Err(e) => panic!("{e}"),
        };
        assert!(in_region(q, &t, &pts, &rect, 1e-9));
        if in_region(p, &t, &pts, &rect, 0.0) {
            assert_eq!(q, p);
        }
        let best = q.distance(p);
        let n = 300;
        for i in 0..=n {
            for j in 0..=(n - i) {
                let (a, b) = (i as f64 / n as f64, j as f64 / n as f64);
                let s = pts[t.v1] * a + pts[t.v2] * b + pts[t.v3] * (1.0 - a - b);
                if rect.contains(s) {
                    assert!(best <= s.distance(p) + 1e-9, "sample {s} closer than {q} to {p}");
                }
            }
        }
        checked += 1;
    }
}

#[test]
fn projection_from_outside_one_edge_lands_on_it() {
    let pts = vec![Point::new(0.0, 0.0), Point::new(4.0, 0.0), Point::new(0.0, 4.0)];
    let t = Triangle::new(0, 1, 2);
    let rect = Rect::new(-10.0, -10.0, 10.0, 10.0).unwrap();
    let q = clamp_to_triangle_and_rect(Point::new(1.5, -2.0), &t, &pts, &rect).unwrap();
    assert!((q.x - 1.5).abs() < 1e-12 && q.y.abs() < 1e-12);
}
