use hellyfit::geometry::{HPolytope, Point, VPolytope};
use hellyfit::rotation_net::build_net_2d;
use hellyfit::solver::{beta_direct, beta_msw};
use hellyfit::{HPolytope32, VPolytope32};

#[test]
fn single_precision_square_fit() {
    let k: VPolytope32 =
        VPolytope::new(2, vec![Point::xy(0.0, 0.0), Point::xy(1.0, 0.0), Point::xy(1.0, 1.0), Point::xy(0.0, 1.0)]).unwrap();
    let p: HPolytope32 = HPolytope::aabb(&[0.0, 0.0], &[2.0, 2.0]).unwrap();
    let net = build_net_2d(&k, 0.1).unwrap();
    let d = beta_direct(&k, &net, &p, 0).unwrap();
    let m = beta_msw(&k, &net, &p, 3).unwrap();
    assert!((d.beta - 2.0).abs() < 1e-4, "{}", d.beta);
    assert!((d.beta - m.beta).abs() < 1e-4);
    assert!(d.basis.len() <= net.basis_bound());
}

#[test]
fn single_precision_triangle_in_tangent_family() {
    let k: VPolytope32 = VPolytope::regular_polygon(3, 1.0, 0.0).unwrap();
    let p = hellyfit::lab::TangentFamily::<f32>::random(200, 1).unwrap().to_hpolytope().unwrap();
    let net = build_net_2d(&k, 0.2).unwrap();
    let d = beta_direct(&k, &net, &p, 0).unwrap();
    let m = beta_msw(&k, &net, &p, 0).unwrap();
    assert!((d.beta - m.beta).abs() <= 1e-3 * d.beta.max(1.0), "{} vs {}", d.beta, m.beta);
    assert!(d.beta > 0.9);
}
