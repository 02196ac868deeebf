use std::f64::consts::PI;

use rayon::prelude::*;

use super::sphere::{check_radius, one_minus_tanh};
use crate::error::{Error, Result};
use crate::geometry::{ConvexDomain, Point2, Polygon, Shape};
use crate::hilbert::{busemann_density, polygon_unit_ball_area};
use crate::quadrature::{compensated_sum, AdaptiveSimpson};

/// Depth of the logarithmic cut-off towards each polygon vertex, in e-folds
/// beyond `log(1 - tanh R)`.
const VERTEX_CUTOFF: f64 = 30.0;

/// Busemann volume of `B(basepoint, R) = tanh(R)·Ω`.
pub fn ball_volume(domain: &ConvexDomain, radius: f64, quad_tol: f64) -> Result<f64> {
    if !domain.is_centrally_symmetric() {
        return Err(Error::NotSymmetric);
    }
    check_radius(domain, radius)?;
    if radius == 0.0 {
        return Ok(0.0);
    }
    match domain.shape() {
        Shape::Polygon(p) => polygon_ball_volume(p, domain.basepoint(), radius, quad_tol),
        _ => polar_ball_volume(domain, radius, quad_tol),
    }
}

/// `∫_0^{2π} ρ² ∫_0^λ σ(b + sρu) s ds dθ` with `s = 1 - e^{-w}`.
fn polar_ball_volume(domain: &ConvexDomain, radius: f64, quad_tol: f64) -> Result<f64> {
    let b = domain.basepoint();
    let w_max = -one_minus_tanh(radius).ln();
    let inner_tol = quad_tol * 0.1;
    let sigma_tol = quad_tol * 0.01;
    let outer = AdaptiveSimpson::new(quad_tol).with_panels(16);
    let inner = AdaptiveSimpson::new(inner_tol).with_panels(16);
    let half = outer.integrate_try(
        |theta| {
            let u = Point2::polar(1.0, theta);
            let rho = domain.exit_distance(b, u);
            let radial = inner.integrate_try(
                |w| {
                    let s = -(-w).exp_m1();
                    let sigma = busemann_density(domain, b + u * (s * rho), sigma_tol)?;
                    Ok(sigma * s * (-w).exp())
                },
                0.0,
                w_max,
            )?;
            Ok(rho * rho * radial)
        },
        0.0,
        PI,
    )?;
    Ok(2.0 * half)
}

/// Triangle fan over the edges, each edge split at its midpoint and
/// integrated in a frame where the nearer vertex is the origin and the edge
/// lies on the positive x-axis. Densities come from the closed-form unit
/// ball of the polygon.
fn polygon_ball_volume(poly: &Polygon, center: Point2, radius: f64, quad_tol: f64) -> Result<f64> {
    let n = poly.len();
    let mu = one_minus_tanh(radius);
    let halves: Vec<(usize, bool)> = (0..n).flat_map(|i| [(i, false), (i, true)]).collect();
    let parts: Result<Vec<f64>> = halves
        .par_iter()
        .map(|&(edge, reversed)| half_edge_volume(poly, center, edge, reversed, mu, quad_tol))
        .collect();
    Ok(compensated_sum(parts?))
}

fn half_edge_volume(poly: &Polygon, center: Point2, edge: usize, reversed: bool, mu: f64, quad_tol: f64) -> Result<f64> {
    let n = poly.len();
    let verts = poly.vertices();
    let (origin, other) = if reversed {
        (verts[(edge + 1) % n], verts[edge])
    } else {
        (verts[edge], verts[(edge + 1) % n])
    };
    let axis = (other - origin).normalized();
    let inward = poly.normal(edge) * -1.0;
    let to_local = |p: Point2| {
        let d = p - origin;
        Point2::new(d.dot(axis), d.dot(inward))
    };
    let len = (other - origin).norm();
    let mut local: Vec<Point2> = verts.iter().map(|&v| to_local(v)).collect();
    local[if reversed { (edge + 1) % n } else { edge }] = Point2::ORIGIN;
    local[if reversed { edge } else { (edge + 1) % n }] = Point2::new(len, 0.0);
    if reversed {
        // reflection reverses orientation
        local.reverse();
    }
    let base = to_local(center);
    let hb = base.y;
    let log_mu = mu.ln();
    let tau_hi = (0.5 * len).ln();
    let tau_lo = log_mu - VERTEX_CUTOFF + tau_hi;
    let outer = AdaptiveSimpson::new(quad_tol).with_panels(32);
    let inner = AdaptiveSimpson::new(quad_tol * 0.1).with_panels(32);
    outer.integrate_try(
        |tau| {
            let s = tau.exp();
            inner.integrate(
                |omega| {
                    let w = omega.exp();
                    let x = Point2::new(s * (1.0 - w) + w * base.x, w * hb);
                    let sigma = PI / polygon_unit_ball_area(&local, x);
                    sigma * (1.0 - w) * hb * s * w
                },
                log_mu,
                0.0,
            )
        },
        tau_lo,
        tau_hi,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::regular_polygon;

    #[test]
    fn disk_ball_closed_form() {
        let disk = ConvexDomain::unit_disk();
        let v = ball_volume(&disk, 1.0, 1e-8).unwrap();
        let exact = 2.0 * PI * (1f64.cosh() - 1.0);
        assert!((v - exact).abs() < 1e-6 * exact, "{v} vs {exact}");
    }

    #[test]
    fn small_radius_is_euclidean() {
        let disk = ConvexDomain::unit_disk();
        let r = 1e-3;
        let v = ball_volume(&disk, r, 1e-8).unwrap();
        assert!((v / (PI * r * r) - 1.0).abs() < 1e-5);
        let sq = ConvexDomain::square(1.0);
        let v = ball_volume(&sq, r, 1e-8).unwrap();
        // σ(0) = π/4 and the Euclidean ball is tanh(r)·square
        let expect = PI / 4.0 * 4.0 * r.tanh().powi(2);
        assert!((v / expect - 1.0).abs() < 1e-5, "{v} vs {expect}");
    }

    #[test]
    fn polygon_route_matches_polar_route() {
        let hex = ConvexDomain::polygon(regular_polygon(6, 1.0, 0.1)).unwrap();
        let r = 1.5;
        let exact = ball_volume(&hex, r, 1e-9).unwrap();
        let polar = polar_ball_volume(&hex, r, 1e-7).unwrap();
        assert!((exact - polar).abs() < 1e-5 * exact, "{exact} vs {polar}");
    }
}
