use std::f64::consts::TAU;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{ConvexDomain, Point2, Polygon};
use crate::quadrature::{compensated_sum, AdaptiveSimpson};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    Positive,
    Negative,
}

/// `1 - tanh R` without cancellation.
pub fn one_minus_tanh(radius: f64) -> f64 {
    2.0 / ((2.0 * radius).exp() + 1.0)
}

/// Radii for which `1 - tanh R` stays above `10·tol_geo`.
pub fn check_radius(domain: &ConvexDomain, radius: f64) -> Result<()> {
    if !(radius >= 0.0 && radius.is_finite()) {
        return Err(Error::InvalidParameter(format!("radius {radius} must be nonnegative")));
    }
    let gap = one_minus_tanh(radius);
    if gap <= 10.0 * domain.tol_geo() {
        return Err(Error::InvalidParameter(format!(
            "radius {radius} too large: 1 - tanh R = {gap:e} is below 10·tol_geo = {:e}",
            10.0 * domain.tol_geo()
        )));
    }
    Ok(())
}

/// Where the tangent line of `λ∂Ω` at `λγ(θ)` meets `∂Ω`.
///
/// The positive orientation follows the forward one-sided tangent, the
/// negative one the backward tangent reversed.
pub fn tangent_exit(domain: &ConvexDomain, theta: f64, lambda: f64, orientation: Orientation) -> Result<Point2> {
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Error::InvalidParameter(format!("lambda = {lambda} outside (0, 1)")));
    }
    let b = domain.basepoint();
    let tan = domain.one_sided_tangents(theta);
    let x = b + (tan.point - b) * lambda;
    let dir = match orientation {
        Orientation::Positive => tan.forward,
        Orientation::Negative => -tan.backward,
    };
    let t = domain.exit_distance(x, dir);
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::NoIntersection);
    }
    Ok(x + dir * t)
}

/// Hilbert length of the boundary of the ball `B(basepoint, R) = tanh(R)·Ω`.
///
/// Polygonal boundaries are summed edge by edge in closed form; smooth ones
/// are integrated in the polar angle around the basepoint.
pub fn circle_length(domain: &ConvexDomain, radius: f64, quad_tol: f64) -> Result<f64> {
    if !domain.is_centrally_symmetric() {
        return Err(Error::NotSymmetric);
    }
    check_radius(domain, radius)?;
    if radius == 0.0 {
        return Ok(0.0);
    }
    let lambda = radius.tanh();
    match domain.as_polygon() {
        Some(poly) => Ok(polygon_circle_length(poly, domain.basepoint(), lambda)),
        None => smooth_circle_length(domain, lambda, quad_tol),
    }
}

/// Sum over edges of `d(λV_i, λV_{i+1})`: scaled edges are geodesic segments.
pub fn polygon_circle_length(poly: &Polygon, center: Point2, lambda: f64) -> f64 {
    let verts = poly.vertices();
    let edges = poly.edges();
    let n = verts.len();
    let edge_length = |i: usize| {
        let e = edges[i];
        let len = e.norm();
        let u = e / len;
        let p = center + (verts[i] - center) * lambda;
        let q = center + (verts[(i + 1) % n] - center) * lambda;
        let l = lambda * len;
        let ahead = poly.exit(q, u).0;
        let behind = poly.exit(p, -u).0;
        0.5 * ((l / behind).ln_1p() + (l / ahead).ln_1p())
    };
    if n < 4096 {
        compensated_sum((0..n).map(edge_length))
    } else {
        let parts: Vec<f64> = (0..n)
            .collect::<Vec<_>>()
            .par_chunks(4096)
            .map(|chunk| compensated_sum(chunk.iter().map(|&i| edge_length(i))))
            .collect();
        compensated_sum(parts)
    }
}

fn smooth_circle_length(domain: &ConvexDomain, lambda: f64, quad_tol: f64) -> Result<f64> {
    let b = domain.basepoint();
    let half = AdaptiveSimpson::new(quad_tol).integrate(
        |theta| {
            let tan = domain.one_sided_tangents(theta);
            let u = Point2::polar(1.0, theta);
            let rho = (tan.point - b).norm();
            let speed = rho / u.cross(tan.forward);
            let x = b + (tan.point - b) * lambda;
            let ahead = domain.exit_distance(x, tan.forward);
            let behind = domain.exit_distance(x, -tan.forward);
            0.5 * lambda * speed * (1.0 / ahead + 1.0 / behind)
        },
        0.0,
        TAU / 2.0,
    )?;
    // central symmetry
    Ok(2.0 * half)
}

/// `n` points of `tanh(R)·∂Ω` at equal angles, closed.
pub fn scaled_boundary_polyline(domain: &ConvexDomain, radius: f64, n: usize) -> Vec<Point2> {
    let b = domain.basepoint();
    let lambda = radius.tanh();
    let mut pts: Vec<Point2> = domain.sample_boundary(n).into_iter().map(|p| b + (p - b) * lambda).collect();
    if let Some(&first) = pts.first() {
        pts.push(first);
    }
    pts
}
