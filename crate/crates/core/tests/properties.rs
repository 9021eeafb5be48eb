use koranyi_core::distance_sets::{distance_set, steinhaus_constant, steinhaus_product};
use koranyi_core::special::laguerre::laguerre_normalized;
use koranyi_core::spectral::rk_coefficient;
use koranyi_core::{koranyi_dist, HPoint};
use proptest::prelude::*;

fn point(n: usize) -> impl Strategy<Value = HPoint> {
    (
        prop::collection::vec(-50.0..50.0f64, n),
        prop::collection::vec(-50.0..50.0f64, n),
        -500.0..500.0f64,
    )
        .prop_map(|(x, y, t)| HPoint::new(x, y, t).unwrap())
}

fn triple() -> impl Strategy<Value = (HPoint, HPoint, HPoint)> {
    (1usize..=3).prop_flat_map(|n| (point(n), point(n), point(n)))
}

fn scale(ps: &[&HPoint]) -> f64 {
    ps.iter()
        .map(|p| p.x().iter().chain(p.y()).fold(p.t().abs(), |m, c| m.max(c.abs())))
        .fold(1.0, f64::max)
}

proptest! {
    #[test]
    fn product_is_associative((p, q, s) in triple()) {
        let lhs = p.mul(&q).unwrap().mul(&s).unwrap();
        let rhs = p.mul(&q.mul(&s).unwrap()).unwrap();
        let sc = scale(&[&p, &q, &s]);
        prop_assert!(lhs.max_coord_diff(&rhs) <= 1e-12 * sc * sc);
    }

    #[test]
    fn inverse_cancels((p, _, _) in triple()) {
        let e = HPoint::origin(p.dim());
        prop_assert_eq!(p.mul(&p.inverse()).unwrap(), e.clone());
        prop_assert_eq!(p.inverse().mul(&p).unwrap(), e);
    }

    #[test]
    fn distance_is_left_invariant((p, q, a) in triple()) {
        let d = koranyi_dist(&p, &q).unwrap();
        let moved = koranyi_dist(&a.mul(&p).unwrap(), &a.mul(&q).unwrap()).unwrap();
        prop_assert!((d - moved).abs() <= 1e-12 * scale(&[&p, &q, &a]));
    }

    #[test]
    fn distance_is_symmetric((p, q, _) in triple()) {
        let a = koranyi_dist(&p, &q).unwrap();
        let b = koranyi_dist(&q, &p).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * scale(&[&p, &q]));
    }

    #[test]
    fn norm_is_homogeneous((p, _, _) in triple(), r in 1e-3..1e3f64) {
        let np = p.koranyi_norm();
        prop_assert!((p.dilate(r).unwrap().koranyi_norm() - r * np).abs() <= 1e-12 * r * np);
    }

    #[test]
    fn dilation_is_automorphism((p, q, _) in triple(), r in 1e-2..1e2f64) {
        let lhs = p.mul(&q).unwrap().dilate(r).unwrap();
        let rhs = p.dilate(r).unwrap().mul(&q.dilate(r).unwrap()).unwrap();
        prop_assert!(lhs.max_coord_diff(&rhs) <= 1e-12 * (r * scale(&[&p, &q])).powi(2));
    }

    #[test]
    fn normalized_laguerre_bounded(k in 0usize..400, n in 1usize..=4, x in 0.0..3000.0f64) {
        prop_assert!(laguerre_normalized(k, n, x).abs() <= 1.0 + 1e-9);
    }

    #[test]
    fn rk_even_in_lambda(k in 0usize..60, n in 1usize..=3, l in 0.01..200.0f64) {
        let a = rk_coefficient(k, n, l, 1.0, 1e-10).unwrap();
        let b = rk_coefficient(k, n, -l, 1.0, 1e-10).unwrap();
        prop_assert!((a.value - b.value).abs() <= 1e-9);
        prop_assert!(a.value.abs() <= 1.0 + 1e-8);
    }

    #[test]
    fn steinhaus_bisection_contract(n in 1usize..=4, rho in 0.01..0.49f64) {
        let c = steinhaus_constant(n, rho).unwrap();
        let rhs = 2.0 * (1.0 - rho);
        prop_assert!(steinhaus_product(n, c * 0.999999) < rhs);
        prop_assert!(steinhaus_product(n, c * 1.000001) >= rhs);
    }

    #[test]
    fn distance_set_left_invariant(pts in prop::collection::vec(point(1), 1..8), a in point(1)) {
        let moved: Vec<HPoint> = pts.iter().map(|p| a.mul(p).unwrap()).collect();
        let d0 = distance_set(&pts).unwrap();
        let d1 = distance_set(&moved).unwrap();
        prop_assert_eq!(d0[0], 0.0);
        prop_assert!(d0.windows(2).all(|w| w[0] < w[1]));
        let hi = d0.last().copied().unwrap_or(0.0).max(1.0);
        let near = |d: f64, set: &[f64]| set.iter().any(|&e| (e - d).abs() <= 1e-9 * scale(&[&a]).powi(2) * hi);
        prop_assert!(d0.iter().all(|&d| near(d, &d1)) && d1.iter().all(|&d| near(d, &d0)));
    }
}
