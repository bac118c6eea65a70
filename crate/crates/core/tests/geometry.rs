mod common;

use common::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tvkit::geometry::{
    circle_polyline_distance, circumcircle, extend_palatal_trace, is_simple_polyline,
    point_polyline_distance,
};
use tvkit::{Circle, PalatalTrace, PalateExtension, Point};

const RES: f64 = 0.05;

fn to_points(poly: &[P]) -> Vec<Point> {
    poly.iter().copied().map(pt).collect()
}

#[test]
fn circle_polyline_matches_dense_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..100 {
        let poly = random_polyline(&mut rng, 8, 20.0);
        let center = (rng.gen_range(-20.0..20.0), rng.gen_range(-20.0..20.0));
        let r = rng.gen_range(1.0..15.0);
        let w = circle_polyline_distance(&Circle::new(pt(center), r).unwrap(), &to_points(&poly), RES).unwrap();
        let (oracle, xs) = dense_circle_polyline(center, r, &poly, 1e-3, 1e-3);
        assert!((w.distance - oracle).abs() < 1e-3, "{} vs {oracle}", w.distance);
        assert!(w.distance <= oracle + 1e-12);
        assert!(xs.iter().any(|x| (x - w.point_a.x).abs() < 0.1));
        assert!((w.point_a.dist(pt(center)) - r).abs() < 1e-9);
        assert!((w.point_a.dist(w.point_b) - w.distance).abs() < 1e-9);
    }
}

#[test]
fn point_polyline_matches_dense_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..100 {
        let poly = random_polyline(&mut rng, 8, 20.0);
        let p = (rng.gen_range(-25.0..25.0), rng.gen_range(-25.0..25.0));
        let w = point_polyline_distance(pt(p), &to_points(&poly), RES).unwrap();
        let oracle = dense_point_polyline(p, &poly, 1e-3);
        assert!((w.distance - oracle).abs() < 1e-3);
        assert!(w.distance <= oracle + 1e-12);
    }
}

#[test]
fn outside_circle_distance_is_centre_distance_minus_radius() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut checked = 0;
    while checked < 200 {
        let poly = random_polyline(&mut rng, 6, 20.0);
        let center = (rng.gen_range(-20.0..20.0), rng.gen_range(-20.0..20.0));
        let r = rng.gen_range(0.5..5.0);
        let pts = to_points(&poly);
        let to_center = point_polyline_distance(pt(center), &pts, RES).unwrap().distance;
        if to_center <= r {
            continue;
        }
        let w = circle_polyline_distance(&Circle::new(pt(center), r).unwrap(), &pts, RES).unwrap();
        assert!((w.distance - (to_center - r)).abs() < 1e-9);
        let sampled = sampled_circle_polyline(center, r, &poly, 20_000);
        assert!(w.distance <= sampled + 1e-12 && sampled - w.distance < 1e-3);
        checked += 1;
    }
}

#[test]
fn circumcircle_residuals_and_reference() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..1000 {
        let p: Vec<P> = random_polyline(&mut rng, 3, 30.0);
        let Ok(c) = circumcircle(pt(p[0]), pt(p[1]), pt(p[2])) else { continue };
        for q in &p {
            assert!((c.center.dist(pt(*q)) - c.radius).abs() <= 1e-9 * c.radius);
        }
        let (rc, rr) = circumcircle_ref(p[0], p[1], p[2]);
        assert!((rr - c.radius).abs() <= 1e-9 * rr.max(1.0));
        assert!(pt(rc).dist(c.center) <= 1e-9 * rr.max(1.0));
    }
}

#[test]
fn resolution_does_not_change_exact_distance() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..50 {
        let pts = to_points(&random_polyline(&mut rng, 8, 20.0));
        let c = Circle::new(Point::new(rng.gen_range(-5.0..5.0), 0.0), rng.gen_range(1.0..8.0)).unwrap();
        let coarse = circle_polyline_distance(&c, &pts, 0.1).unwrap().distance;
        let fine = circle_polyline_distance(&c, &pts, 0.05).unwrap().distance;
        assert!(fine - coarse <= 0.1);
    }
}

#[test]
fn densifying_the_same_curve_keeps_distances() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..50 {
        let poly = random_polyline(&mut rng, 6, 20.0);
        let dense: Vec<P> = {
            let mut v: Vec<P> = densify(&poly, 0.7).collect();
            v.dedup();
            v
        };
        let p = pt((rng.gen_range(-20.0..20.0), rng.gen_range(-20.0..20.0)));
        let a = point_polyline_distance(p, &to_points(&poly), RES).unwrap().distance;
        let b = point_polyline_distance(p, &to_points(&dense), RES).unwrap().distance;
        assert!((a - b).abs() < RES);
    }
}

#[test]
fn extension_continues_last_segment_then_drops() {
    let palate = PalatalTrace::new(
        "s",
        vec![Point::new(0.0, 10.0), Point::new(-10.0, 12.0), Point::new(-20.0, 12.0)],
        false,
    )
    .unwrap();
    let e = extend_palatal_trace(&palate, &PalateExtension::new(-30.0)).unwrap();
    let pts = e.points();
    assert_eq!(&pts[..3], palate.points());
    let junction = pts.iter().position(|p| p.x == -30.0).unwrap();
    assert!(pts[3..=junction].iter().all(|p| p.y == 12.0));
    assert!(pts[junction..].iter().all(|p| p.x == -30.0));
    assert_eq!(pts.last().unwrap().y, 12.0 - 30.0);
    assert!(pts[2..].windows(2).all(|w| w[0].dist(w[1]) <= 1.0 + 1e-12));
    assert!(is_simple_polyline(pts));

    let sloped = PalatalTrace::new("s", vec![Point::new(0.0, 10.0), Point::new(-10.0, 8.0)], false).unwrap();
    let e = extend_palatal_trace(&sloped, &PalateExtension::new(-25.0)).unwrap();
    for p in e.points().iter().filter(|p| p.x > -25.0) {
        assert!((p.y - (10.0 + 0.2 * p.x)).abs() < 1e-12);
    }
}

#[test]
fn extension_errors() {
    let palate = PalatalTrace::new("s", vec![Point::new(0.0, 10.0), Point::new(-10.0, 12.0)], false).unwrap();
    assert!(extend_palatal_trace(&palate, &PalateExtension::new(-5.0)).is_err());
    let forward = PalatalTrace::new("s", vec![Point::new(-10.0, 10.0), Point::new(0.0, 12.0)], false).unwrap();
    assert!(extend_palatal_trace(&forward, &PalateExtension::new(-30.0)).is_err());
}

fn coord() -> impl Strategy<Value = f64> {
    -30.0..30.0f64
}

fn point() -> impl Strategy<Value = Point> {
    (coord(), coord()).prop_map(|(x, y)| Point::new(x, y))
}

proptest! {
    #[test]
    fn rigid_motion_equivariance(
        poly in prop::collection::vec(point(), 2..10),
        q in point(),
        r in 0.5..10.0f64,
        theta in -3.2..3.2f64,
        tx in -50.0..50.0f64,
        ty in -50.0..50.0f64,
    ) {
        prop_assume!(poly.windows(2).all(|w| w[0].dist(w[1]) > 1e-6));
        let m = Rigid { theta, t: (tx, ty) };
        let moved: Vec<Point> = poly.iter().map(|p| m.apply(*p)).collect();

        let a = point_polyline_distance(q, &poly, RES).unwrap();
        let b = point_polyline_distance(m.apply(q), &moved, RES).unwrap();
        prop_assert!((a.distance - b.distance).abs() < 1e-9);
        prop_assert!(m.apply(a.point_b).dist(b.point_b) < 1e-6);

        let c = Circle::new(q, r).unwrap();
        let cm = Circle::new(m.apply(q), r).unwrap();
        let a = circle_polyline_distance(&c, &poly, RES).unwrap();
        let b = circle_polyline_distance(&cm, &moved, RES).unwrap();
        prop_assert!((a.distance - b.distance).abs() < 1e-9);
    }

    #[test]
    fn circumcircle_moves_with_its_points(p1 in point(), p2 in point(), p3 in point(), theta in -3.2..3.2f64, tx in -50.0..50.0f64) {
        if let Ok(c) = circumcircle(p1, p2, p3) {
            prop_assume!(c.radius < 1e4);
            let m = Rigid { theta, t: (tx, -tx) };
            let cm = circumcircle(m.apply(p1), m.apply(p2), m.apply(p3)).unwrap();
            prop_assert!((cm.radius - c.radius).abs() <= 1e-9 * c.radius.max(1.0));
            prop_assert!(cm.center.dist(m.apply(c.center)) <= 1e-7 * c.radius.max(1.0));
        }
    }
}
