mod common;

use common::*;
use hellyfit::fit_lp::{beta_fixed_rotation, seidel_lp, LpStatus};
use hellyfit::geometry::{
    cap_measure_2d, contains, miniball, normalize_to_unit_ball, random_rotation, ArcBody, Body, Cap, HalfSpace, Point,
    Rotation, VPolytope,
};
use hellyfit::lab::TangentFamily;
use hellyfit::rotation_net::{build_net_2d, max_angle_2d};
use hellyfit::schema;
use hellyfit::solver::{beta_brute, beta_direct, beta_msw, beta_on_subset};
use proptest::prelude::*;
use std::f64::consts::{PI, TAU};

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, failure_persistence: None, ..ProptestConfig::default() }
}

fn points(dim: usize, n: std::ops::Range<usize>) -> impl Strategy<Value = Vec<Point<f64>>> {
    prop::collection::vec(prop::collection::vec(-5.0..5.0f64, dim), n).prop_map(|v| v.into_iter().map(Point::new).collect())
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn halfspace_normals_are_unit(x in -4.0..4.0f64, y in -4.0..4.0f64, b in -3.0..3.0f64) {
        prop_assume!(x.hypot(y) > 1e-3);
        let h = HalfSpace::new(Point::xy(x, y), b).unwrap();
        prop_assert!((h.normal().norm() - 1.0).abs() < 1e-12);
        prop_assert!((h.offset() - b / x.hypot(y)).abs() < 1e-12);
    }

    #[test]
    fn miniball_ignores_order_and_seed(mut pts in points(3, 4..30), s1 in any::<u64>(), s2 in any::<u64>()) {
        let a = miniball(&pts, s1).unwrap();
        pts.reverse();
        let b = miniball(&pts, s2).unwrap();
        prop_assert!((a.radius - b.radius).abs() < 1e-9);
        prop_assert!(a.center.distance(&b.center) < 1e-6);
        for p in &pts {
            prop_assert!(a.contains(p, 1e-9));
        }
    }

    #[test]
    fn normalization_is_idempotent_and_translation_free(seed in 0..1000u64, wx in -9.0..9.0f64, wy in -9.0..9.0f64) {
        let k = random_polygon(5, seed);
        let (n1, _) = normalize_to_unit_ball(&k).unwrap();
        let (n2, sim2) = normalize_to_unit_ball(&n1).unwrap();
        prop_assert!((sim2.radius - 1.0).abs() < 1e-9 && sim2.center.norm() < 1e-9);
        let (n3, _) = normalize_to_unit_ball(&k.translate(&Point::xy(wx, wy))).unwrap();
        for (a, b) in n1.vertices().iter().zip(n3.vertices()) {
            prop_assert!(a.distance(b) < 1e-8);
        }
        prop_assert_eq!(n1.vertices().len(), n2.vertices().len());
    }

    #[test]
    fn opposite_caps_cover_the_trace(c in 0.0..TAU, w in 0.0..6.0f64, a in 0.0..TAU, slack in 0.0..1.0f64) {
        let body = Body::Arc(ArcBody::new(c, w).unwrap());
        let mu = 1.0 - w / TAU;
        let d = cap_measure_2d(&body, &Cap::at_angle(a, slack)).unwrap()
            + cap_measure_2d(&body, &Cap::at_angle(a + PI, slack)).unwrap();
        prop_assert!(d >= mu - 1e-12);
    }

    #[test]
    fn lp_witness_is_feasible_and_seed_free(seed in any::<u64>(), k in 1usize..=3, s2 in any::<u64>()) {
        let (lp, rows, bounds) = random_lp(seed, k, 12 - 2 * k);
        let a = seidel_lp(&lp, s2).unwrap();
        let b = seidel_lp(&lp, s2.wrapping_add(1)).unwrap();
        prop_assert_eq!(a.status, b.status);
        if a.status == LpStatus::Optimal {
            prop_assert!(a.tight_set.len() <= k);
            for (r, bd) in rows.iter().zip(&bounds) {
                prop_assert!(r.iter().zip(&a.witness).map(|(p, q)| p * q).sum::<f64>() <= bd + 1e-8);
            }
            for (x, y) in a.witness.iter().zip(&b.witness) {
                prop_assert!((x - y).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn fixed_rotation_is_equivariant(
        seed in 0..1000u64,
        th in 0.0..TAU,
        phi in 0.0..TAU,
        wx in -3.0..3.0f64,
        wy in -3.0..3.0f64,
        lambda in 0.2..5.0f64,
    ) {
        let k = random_polygon(4, seed);
        let p = random_container(7, seed + 1);
        let a = Rotation::planar(th);
        let base = beta_fixed_rotation(&k, &a, &p, 0).unwrap().value;
        let moved = beta_fixed_rotation(&k, &a, &p.translate(&Point::xy(wx, wy)), 0).unwrap().value;
        let scaled = beta_fixed_rotation(&k, &a, &p.dilate(lambda), 0).unwrap().value;
        let r = Rotation::planar(phi);
        let turned = beta_fixed_rotation(&k, &r.compose(&a), &p.rotate(&r), 0).unwrap().value;
        prop_assert!(close(base, moved, 1e-9));
        prop_assert!(close(base * lambda, scaled, 1e-9));
        prop_assert!(close(base, turned, 1e-9));
    }

    #[test]
    fn max_angle_grows_with_epsilon(e1 in 0.01..0.4f64, e2 in 0.01..0.4f64, m in 3usize..7) {
        let k = VPolytope::regular_polygon(m, 1.0, 0.3).unwrap();
        let (lo, hi) = if e1 <= e2 { (e1, e2) } else { (e2, e1) };
        prop_assert!(max_angle_2d(&k, lo, 1e-9).unwrap() <= max_angle_2d(&k, hi, 1e-9).unwrap() + 1e-8);
    }

    #[test]
    fn haar_rotations_are_orthogonal(d in 2usize..=4, seed in any::<u64>()) {
        let r = random_rotation::<f64>(d, seed).unwrap();
        prop_assert!((r.det() - 1.0).abs() < 1e-9);
        let rt = r.inverse().compose(&r);
        prop_assert!(rt.frobenius_distance(&Rotation::identity(d)) < 1e-9);
    }

    #[test]
    fn tangent_family_contains_unit_disk(s in 1usize..40, seed in any::<u64>(), a in 0.0..TAU) {
        let p = TangentFamily::<f64>::random(s, seed).unwrap().to_hpolytope().unwrap();
        prop_assert!(contains(&p, &Point::polar(a), 1e-12).unwrap());
        prop_assert!(contains(&p, &Point::origin(2), 0.0).unwrap());
    }

    #[test]
    fn schema_round_trips(seed in 0..1000u64, n in 3usize..10) {
        let k = random_polygon(5, seed);
        let back: VPolytope<f64> = schema::parse_vpolytope(&schema::vpolytope_to_json(&k).unwrap()).unwrap();
        prop_assert_eq!(&back, &k);
        let p = random_container(n, seed);
        let back = schema::parse_hpolytope::<f64>(&schema::hpolytope_to_json(&p).unwrap()).unwrap();
        prop_assert_eq!(back.len(), p.len());
        for (a, b) in back.halfspaces().iter().zip(p.halfspaces()) {
            prop_assert!(a.normal().distance(b.normal()) < 1e-12 && (a.offset() - b.offset()).abs() < 1e-12);
        }
        let net = angle_net(1 + n % 5, seed);
        let back = schema::parse_net::<f64>(&schema::net_to_json(&net).unwrap()).unwrap();
        prop_assert_eq!(&back, &net);
    }
}

proptest! {
    #![proptest_config(config(24))]

    #[test]
    fn solvers_agree_and_keep_their_basis(seed in 0..10_000u64, n in 3usize..14, t in 1usize..5, s2 in any::<u64>()) {
        let k = random_polygon(3 + (seed % 3) as usize, seed);
        let p = random_container(n, seed ^ 0xabc);
        let net = angle_net(t, seed);
        let d = beta_direct(&k, &net, &p, 0).unwrap();
        let m = beta_msw(&k, &net, &p, s2).unwrap();
        let m2 = beta_msw(&k, &net, &p, s2.wrapping_mul(31).wrapping_add(7)).unwrap();
        prop_assert!(close(d.beta, m.beta, 1e-9), "{} vs {}", d.beta, m.beta);
        prop_assert!(close(m.beta, m2.beta, 1e-9));
        for r in [&d, &m] {
            prop_assert!(r.basis.len() <= net.basis_bound());
            let again = beta_on_subset(&k, &net, &p, &r.basis, 0).unwrap();
            prop_assert!(close(again, r.beta, 1e-9), "basis {:?}: {again} vs {}", r.basis, r.beta);
            prop_assert!(r.placement.fits_in(&k, &p, 1e-8).unwrap());
        }
    }

    #[test]
    fn scaling_the_container_scales_beta(seed in 0..10_000u64, lambda in 0.1..10.0f64) {
        let k = random_polygon(4, seed);
        let p = random_container(8, seed + 5);
        let net = angle_net(3, seed);
        let a = beta_msw(&k, &net, &p, 1).unwrap();
        let b = beta_msw(&k, &net, &p.dilate(lambda), 1).unwrap();
        prop_assert!(close(a.beta * lambda, b.beta, 1e-9));
        prop_assert_eq!(a.rotation_index, b.rotation_index);
    }

    #[test]
    fn more_halfspaces_never_help(seed in 0..10_000u64, n in 4usize..9) {
        let k = random_polygon(3, seed);
        let p = random_container(n + 1, seed);
        let fewer = p.subset(&(0..n).collect::<Vec<_>>()).unwrap();
        let net = angle_net(2, seed);
        let all = beta_brute(&k, &net, &p).unwrap().beta;
        let some = beta_brute(&k, &net, &fewer).unwrap().beta;
        prop_assert!(all <= some + 1e-9 * some.max(1.0));
    }

    #[test]
    fn planar_net_certifies_its_angle(seed in 0..10_000u64, eps in 0.05..0.5f64) {
        let k = random_polygon(5, seed);
        let net = build_net_2d(&k, eps).unwrap();
        let alpha = max_angle_2d(&k, eps, 1e-9).unwrap();
        prop_assert!(net.len() as f64 * alpha >= PI - 1e-6);
    }
}
