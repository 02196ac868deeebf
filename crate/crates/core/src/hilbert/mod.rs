//! Hilbert distance, Finsler norm, Busemann density and the boundary
//! quantities built from them.

mod polygon_ball;

use std::f64::consts::{PI, SQRT_2, TAU};

use serde::Serialize;

pub use polygon_ball::{polygon_busemann_density, polygon_unit_ball_area};

use crate::error::{Error, Result};
use crate::geometry::{ConvexDomain, Ellipse, Point2, Radial, Shape};
use crate::quadrature::{AdaptiveSimpson, GaussLegendre};

pub const DEFAULT_QUAD_TOL: f64 = 1e-8;

/// Hilbert distance from the cross-ratio of the chord `a, p, q, b`.
pub fn hilbert_distance(domain: &ConvexDomain, p: Point2, q: Point2) -> Result<f64> {
    domain.require_interior(p)?;
    domain.require_interior(q)?;
    let len = p.dist(q);
    if len <= domain.tol_geo() {
        return Ok(0.0);
    }
    let d = (q - p) / len;
    let to_a = domain.exit_distance(p, -d);
    let to_b = domain.exit_distance(q, d);
    Ok(0.5 * ((len / to_a).ln_1p() + (len / to_b).ln_1p()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FinslerSample {
    pub x: Point2,
    pub v: Point2,
    pub t_plus: f64,
    pub t_minus: f64,
    pub norm_value: f64,
}

impl FinslerSample {
    /// Radius of the unit ball in direction `v`, `2 t₊ t₋ / (t₊ + t₋)`.
    pub fn unit_ball_radius(&self) -> f64 {
        2.0 * self.t_plus * self.t_minus / (self.t_plus + self.t_minus)
    }
}

/// Finsler data for a unit direction.
pub fn finsler_sample(domain: &ConvexDomain, x: Point2, v: Point2) -> Result<FinslerSample> {
    let (_, t_plus) = domain.ray_exit(x, v)?;
    let t_minus = domain.exit_distance(x, -v);
    Ok(FinslerSample { x, v, t_plus, t_minus, norm_value: 0.5 * (1.0 / t_plus + 1.0 / t_minus) })
}

/// `‖v‖_x`; positively homogeneous in `v`, zero only at `v = 0`.
pub fn finsler_norm(domain: &ConvexDomain, x: Point2, v: Point2) -> Result<f64> {
    let len = v.norm();
    if len == 0.0 {
        domain.require_interior(x)?;
        return Ok(0.0);
    }
    Ok(len * finsler_sample(domain, x, v / len)?.norm_value)
}

#[inline]
fn unit_ball_radius(domain: &ConvexDomain, x: Point2, u: Point2) -> f64 {
    let tp = domain.exit_distance(x, u);
    let tm = domain.exit_distance(x, -u);
    2.0 * tp * tm / (tp + tm)
}

/// Lebesgue area of the Finsler unit ball at `x`, `∫_0^π r(φ)² dφ`.
///
/// Polygonal domains use the closed form; other shapes are integrated.
pub fn unit_ball_area(domain: &ConvexDomain, x: Point2, quad_tol: f64) -> Result<f64> {
    domain.require_interior(x)?;
    match domain.as_polygon() {
        Some(poly) => Ok(polygon_unit_ball_area(poly.vertices(), x)),
        None => unit_ball_area_quadrature(domain, x, quad_tol),
    }
}

/// `∫_0^π r(φ)² dφ` by adaptive Simpson, split at the vertex directions of
/// polygonal domains where `r` has kinks.
pub fn unit_ball_area_quadrature(domain: &ConvexDomain, x: Point2, quad_tol: f64) -> Result<f64> {
    domain.require_interior(x)?;
    let mut cuts = vec![0.0, PI];
    if let Some(poly) = domain.as_polygon() {
        cuts.extend(poly.vertices().iter().map(|&v| (v - x).angle().rem_euclid(PI)));
        cuts.sort_by(f64::total_cmp);
        cuts.dedup_by(|a, b| *a - *b < 1e-15);
    }
    let rule = AdaptiveSimpson::new(quad_tol).with_panels((128 / cuts.len()).max(4));
    let mut total = 0.0;
    for w in cuts.windows(2) {
        total += rule.integrate(
            |phi| {
                let r = unit_ball_radius(domain, x, Point2::polar(1.0, phi));
                r * r
            },
            w[0],
            w[1],
        )?;
    }
    Ok(total)
}

/// Busemann density `σ(x) = π / Area(B_x)`.
pub fn busemann_density(domain: &ConvexDomain, x: Point2, quad_tol: f64) -> Result<f64> {
    Ok(PI / unit_ball_area(domain, x, quad_tol)?)
}

/// `σ(λp)(1-λ)^{3/2}` at the boundary point `p` in direction `theta` from the basepoint.
pub fn blowup_ratio(domain: &ConvexDomain, theta: f64, lambda: f64, quad_tol: f64) -> Result<f64> {
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Error::InvalidParameter(format!("lambda = {lambda} outside (0, 1)")));
    }
    let b = domain.basepoint();
    let p = domain.boundary_point(theta);
    let x = b + (p - b) * lambda;
    let sigma = busemann_density(domain, x, quad_tol)?;
    Ok(sigma * (1.0 - lambda).powf(1.5))
}

/// Limit of the blow-up ratio at a C² boundary point with curvature `k`
/// and support value `h = ⟨p - o, n(p)⟩`: `√k / (2√2 · h^{3/2})`.
pub fn blowup_limit(curvature: f64, support: f64) -> f64 {
    curvature.sqrt() / (2.0 * SQRT_2 * support.powf(1.5))
}

/// Boundary curvature, where the variant provides it pointwise.
#[derive(Debug, Clone)]
pub enum CurvatureProfile {
    Ellipse(Ellipse),
    Radial(Radial),
    /// Flat almost everywhere: polygons and Cantor domains.
    Zero,
}

impl CurvatureProfile {
    pub fn for_domain(domain: &ConvexDomain) -> Self {
        match domain.shape() {
            Shape::Ellipse(e) => CurvatureProfile::Ellipse(*e),
            Shape::Radial(r) if r.interpolation() == crate::geometry::Interpolation::CubicSpline => {
                CurvatureProfile::Radial(r.clone())
            }
            _ => CurvatureProfile::Zero,
        }
    }

    pub fn is_available(&self) -> bool {
        !matches!(self, CurvatureProfile::Zero)
    }

    /// Outward unit normal and curvature at a boundary point.
    pub fn at(&self, p: Point2) -> (Point2, f64) {
        match self {
            CurvatureProfile::Ellipse(e) => (e.outward_normal(p), e.curvature(p)),
            CurvatureProfile::Radial(r) => {
                let phi = (p - r.center()).angle();
                let t = r.tangent(phi).normalized();
                (Point2::new(t.y, -t.x), r.curvature(phi).max(0.0))
            }
            CurvatureProfile::Zero => (Point2::ORIGIN, 0.0),
        }
    }

    pub fn curvature(&self, p: Point2) -> f64 {
        self.at(p).1
    }
}

/// `∫ 2a√k / ((1+a)⟨n, x-o⟩)^{1/2} dℒ(x)` over the boundary.
pub fn centro_projective_area(
    domain: &ConvexDomain,
    curvature: &CurvatureProfile,
    origin: Point2,
    quad_tol: f64,
) -> Result<f64> {
    domain.require_interior(origin)?;
    if !curvature.is_available() {
        return Ok(0.0);
    }
    AdaptiveSimpson::new(quad_tol).integrate(
        |theta| {
            let u = Point2::polar(1.0, theta);
            let rho = domain.exit_distance(origin, u);
            let x = origin + u * rho;
            let a = domain.exit_distance(origin, -u) / rho;
            let (n, k) = curvature.at(x);
            let support = n.dot(x - origin);
            let dl = rho * rho / support;
            2.0 * a * k.sqrt() / ((1.0 + a) * support).sqrt() * dl
        },
        0.0,
        TAU,
    )
}

/// Finsler length of a polyline, segment by segment.
pub fn finsler_path_length(domain: &ConvexDomain, polyline: &[Point2], quad_tol: f64) -> Result<f64> {
    for &p in polyline {
        domain.require_interior(p)?;
    }
    let gl = GaussLegendre::new(10, quad_tol);
    let mut total = 0.0;
    for w in polyline.windows(2) {
        let (p, q) = (w[0], w[1]);
        let v = q - p;
        let len = v.norm();
        if len == 0.0 {
            continue;
        }
        let u = v / len;
        total += gl.integrate_try(
            |s| {
                let x = p + v * s;
                let tp = domain.exit_distance(x, u);
                let tm = domain.exit_distance(x, -u);
                Ok(0.5 * len * (1.0 / tp + 1.0 / tm))
            },
            0.0,
            1.0,
        )?;
    }
    Ok(total)
}
