use std::f64::consts::{PI, TAU};
use std::sync::Arc;

use hilbert_lab::cantor::{ahlfors_exponent_fit, build_cantor_domain, derivative_measure, geometric_radii, CantorFunction};
use hilbert_lab::entropy::{circle_length, scaled_boundary_polyline};
use hilbert_lab::geometry::{regular_polygon, Interpolation, Radial};
use hilbert_lab::hilbert::{busemann_density, centro_projective_area, finsler_path_length, hilbert_distance, CurvatureProfile};
use hilbert_lab::{ConvexDomain, Point2};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const QUAD_TOL: f64 = 1e-9;

fn spline() -> ConvexDomain {
    let rho = |t: f64| 1.0 / ((t.cos() / 2.0).powi(2) + t.sin().powi(2)).sqrt();
    ConvexDomain::radial(Radial::from_fn(Point2::ORIGIN, 256, rho, Interpolation::CubicSpline).unwrap()).unwrap()
}

fn cantor(depth: u32) -> ConvexDomain {
    let cf = CantorFunction::new(3.0, depth).unwrap();
    ConvexDomain::cantor(Arc::new(build_cantor_domain(&cf).unwrap())).unwrap()
}

fn zoo() -> Vec<(&'static str, ConvexDomain)> {
    vec![
        ("disk", ConvexDomain::unit_disk()),
        ("square", ConvexDomain::square(1.0)),
        ("ellipse", ConvexDomain::ellipse(2.0, 1.0, Point2::new(0.5, -0.25)).unwrap()),
        ("hexagon", ConvexDomain::polygon(regular_polygon(6, 1.0, 0.3)).unwrap()),
        ("spline", spline()),
        ("cantor", cantor(10)),
    ]
}

fn random_inner(d: &ConvexDomain, rng: &mut ChaCha8Rng) -> Point2 {
    let c = d.basepoint();
    let s: f64 = rng.gen_range(0.0..0.95);
    c + (d.boundary_point(rng.gen_range(0.0..TAU)) - c) * s
}

#[test]
fn exits_add_up_to_the_chord() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for (name, d) in zoo() {
        for _ in 0..1000 {
            let x = random_inner(&d, &mut rng);
            let v = Point2::polar(1.0, rng.gen_range(0.0..TAU));
            let (fwd, t1) = d.ray_exit(x, v).unwrap();
            let (back, t2) = d.ray_exit(x, -v).unwrap();
            let chord = fwd.dist(back);
            assert!((t1 + t2 - chord).abs() <= 1e-9 * chord.max(1.0), "{name}: {} vs {chord}", t1 + t2);
        }
    }
}

#[test]
fn chords_do_not_depend_on_point_order() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for (name, d) in zoo() {
        for _ in 0..500 {
            let p = random_inner(&d, &mut rng);
            let q = random_inner(&d, &mut rng);
            let c1 = d.chord_through(p, q).unwrap();
            let c2 = d.chord_through(q, p).unwrap();
            assert!(c1.a.dist(c2.b) < 1e-9 && c1.b.dist(c2.a) < 1e-9, "{name}: {p:?} {q:?}");
        }
    }
}

#[test]
fn polygon_hits_lie_on_their_edge() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for (name, d) in zoo() {
        let Some(poly) = d.as_polygon() else { continue };
        for _ in 0..1000 {
            let x = random_inner(&d, &mut rng);
            let v = Point2::polar(1.0, rng.gen_range(0.0..TAU));
            let (t, k) = poly.exit(x, v);
            let r = poly.edge_residual(x + v * t, k);
            assert!(r < 1e-10, "{name}: residual {r:e} on edge {k}");
        }
    }
}

#[test]
fn convexity_audit_of_sampled_boundaries() {
    for (name, d) in zoo() {
        let defect = d.convexity_defect(1000);
        assert!(defect <= 1e-8, "{name}: defect {defect:e}");
    }
}

#[test]
fn density_at_the_center_is_pi_over_area() {
    for (name, d) in zoo() {
        if !d.is_centrally_symmetric() {
            continue;
        }
        let sigma = busemann_density(&d, d.basepoint(), QUAD_TOL).unwrap();
        let expect = PI / d.area();
        assert!((sigma / expect - 1.0).abs() <= QUAD_TOL * 10.0, "{name}: {sigma} vs {expect}");
    }
}

#[test]
fn disk_circle_length_is_two_pi_sinh() {
    let disk = ConvexDomain::unit_disk();
    for i in 0..=11 {
        let r = 0.5 + 0.5 * i as f64;
        let l = circle_length(&disk, r, QUAD_TOL).unwrap();
        let expect = TAU * r.sinh();
        assert!((l / expect - 1.0).abs() <= QUAD_TOL * 10.0, "R = {r}: {l} vs {expect}");
    }
}

#[test]
fn circle_length_matches_polyline_length() {
    let domains = [
        ("disk", ConvexDomain::unit_disk()),
        ("square", ConvexDomain::square(1.0)),
        ("ellipse", ConvexDomain::ellipse(2.0, 1.0, Point2::ORIGIN).unwrap()),
    ];
    for (name, d) in domains {
        for r in [0.5, 1.0, 2.0, 4.0] {
            let l = circle_length(&d, r, QUAD_TOL).unwrap();
            let poly = scaled_boundary_polyline(&d, r, 16384);
            let lp = finsler_path_length(&d, &poly, QUAD_TOL).unwrap();
            assert!((lp / l - 1.0).abs() <= 1e-4, "{name} R = {r}: {lp} vs {l}");
        }
    }
}

#[test]
fn ahlfors_constant_is_stable_in_depth() {
    let radii = geometric_radii(3f64.powi(-10), 0.25, 12);
    let mut fits = Vec::new();
    for n in [12, 14, 16, 18, 20] {
        let m = derivative_measure(&CantorFunction::new(3.0, n).unwrap());
        let centers: Vec<f64> = m.support_intervals(6).into_iter().map(|(lo, _)| lo).collect();
        fits.push(ahlfors_exponent_fit(&m, &radii, &centers).unwrap());
    }
    let c: Vec<f64> = fits.iter().map(|f| f.c_hi.max(1.0 / f.c_lo)).collect();
    assert!(c[0].is_finite());
    for &ci in &c[1..] {
        assert!((ci / c[0] - 1.0).abs() <= 0.1, "{c:?}");
    }
}

#[test]
fn measure_equals_increment_on_support_intervals() {
    for p in [2.5, 3.0, 5.0] {
        let cf = CantorFunction::new(p, 16).unwrap();
        let m = derivative_measure(&cf);
        for n in [1, 4, 8] {
            for (lo, hi) in m.support_intervals(n) {
                assert_eq!(m.mass(lo, hi), (cf.value(hi) - cf.value(lo)).abs());
            }
        }
    }
}

proptest! {
    #[test]
    fn centro_area_is_nonnegative(a in 0.2..5.0f64, b in 0.2..5.0f64, cx in -3.0..3.0f64, cy in -3.0..3.0f64,
                                  s in 0.0..0.9f64, th in 0.0..TAU) {
        let d = ConvexDomain::ellipse(a, b, Point2::new(cx, cy)).unwrap();
        let o = d.basepoint() + (d.boundary_point(th) - d.basepoint()) * s;
        let area = centro_projective_area(&d, &CurvatureProfile::for_domain(&d), o, 1e-8).unwrap();
        prop_assert!(area >= 0.0);
    }

    #[test]
    fn segment_length_is_hilbert_distance(i in 0usize..6, s1 in 0.0..0.95f64, t1 in 0.0..TAU, s2 in 0.0..0.95f64, t2 in 0.0..TAU) {
        let (_, d) = &zoo()[i];
        let c = d.basepoint();
        let p = c + (d.boundary_point(t1) - c) * s1;
        let q = c + (d.boundary_point(t2) - c) * s2;
        prop_assume!(p.dist(q) > 1e-6);
        let along = finsler_path_length(d, &[p, q], QUAD_TOL).unwrap();
        let direct = hilbert_distance(d, p, q).unwrap();
        prop_assert!((along - direct).abs() <= 1e-6 * direct.max(1.0), "{} vs {}", along, direct);
    }
}
