//! Bounded convex planar domains with an interior basepoint.
//!
//! Every variant answers the same queries: ray exit, chords through two
//! points, one-sided tangents and the antipodal ratio. Boundary points are
//! parametrized by the polar angle around the basepoint.

mod ellipse;
mod point;
mod polygon;
mod radial;
pub mod spec_file;

use std::f64::consts::TAU;
use std::sync::Arc;

pub use ellipse::Ellipse;
pub use point::{Affine2, Mat2, Point2};
pub use polygon::{regular_polygon, Polygon};
pub use radial::{Interpolation, Radial};

use crate::cantor::CantorBoundary;
use crate::error::{Error, Result};

pub const DEFAULT_TOL_GEO: f64 = 1e-10;

/// Tolerance on `|v| = 1` for direction arguments.
pub const UNIT_TOL: f64 = 1e-12;

#[derive(Debug, Clone)]
pub enum Shape {
    Polygon(Polygon),
    Ellipse(Ellipse),
    Radial(Radial),
    Cantor(Arc<CantorBoundary>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShapeKind {
    Polygon,
    Ellipse,
    Radial,
    Cantor,
}

/// A bounded convex domain together with its interior basepoint.
#[derive(Debug, Clone)]
pub struct ConvexDomain {
    shape: Shape,
    basepoint: Point2,
    tol_geo: f64,
}

pub type ConvexBoundary2D = ConvexDomain;

/// Points `a, p, q, b` aligned in this order, `a` and `b` on the boundary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Chord {
    pub a: Point2,
    pub p: Point2,
    pub q: Point2,
    pub b: Point2,
}

/// One-sided tangents and the normal cone at a boundary point.
///
/// Both tangents are oriented counterclockwise; `backward` is the direction
/// in which the boundary arrives at the point. The normal cone is the arc
/// from `normal_from` to `normal_to` counterclockwise; at smooth points
/// the two coincide.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tangents {
    pub point: Point2,
    pub forward: Point2,
    pub backward: Point2,
    pub normal_from: Point2,
    pub normal_to: Point2,
}

impl Tangents {
    pub fn is_smooth(&self, tol: f64) -> bool {
        (self.forward - self.backward).norm() <= tol
    }
}

fn outward(t: Point2) -> Point2 {
    Point2::new(t.y, -t.x)
}

impl ConvexDomain {
    fn with_shape(shape: Shape, basepoint: Point2) -> Result<Self> {
        let d = Self { shape, basepoint, tol_geo: DEFAULT_TOL_GEO };
        d.check_basepoint()?;
        Ok(d)
    }

    fn check_basepoint(&self) -> Result<()> {
        let b = self.basepoint;
        if !b.is_finite() {
            return Err(Error::NotInterior(b));
        }
        // distance to the boundary is positive iff every exit distance is
        let min_t = (0..64)
            .map(|i| self.exit_distance(b, Point2::polar(1.0, TAU * i as f64 / 64.0)))
            .fold(f64::INFINITY, f64::min);
        let inside = match &self.shape {
            Shape::Polygon(p) => (0..p.len()).all(|i| p.normal(i).dot(p.vertices()[i] - b) > self.tol_geo),
            Shape::Cantor(c) => {
                let p = c.polygon();
                (0..p.len()).all(|i| p.normal(i).dot(p.vertices()[i] - b) > 0.0)
            }
            Shape::Ellipse(e) => e.to_disk(b).norm() < 1.0,
            Shape::Radial(r) => {
                let d = b - r.center();
                d.norm() == 0.0 || d.norm() < r.rho(d.angle()).0
            }
        };
        if inside && min_t > self.tol_geo {
            Ok(())
        } else {
            Err(Error::NotInterior(b))
        }
    }

    /// Polygon with basepoint at its centroid.
    pub fn polygon(vertices: Vec<Point2>) -> Result<Self> {
        let p = Polygon::new(vertices)?;
        let c = p.centroid();
        Self::with_shape(Shape::Polygon(p), c)
    }

    /// Axis-aligned square `(-h, h)²`.
    pub fn square(h: f64) -> Self {
        Self::polygon(vec![Point2::new(-h, -h), Point2::new(h, -h), Point2::new(h, h), Point2::new(-h, h)])
            .expect("square is convex")
    }

    pub fn ellipse(a: f64, b: f64, center: Point2) -> Result<Self> {
        Self::with_shape(Shape::Ellipse(Ellipse::new(a, b, center)?), center)
    }

    pub fn unit_disk() -> Self {
        Self::ellipse(1.0, 1.0, Point2::ORIGIN).expect("unit disk")
    }

    pub fn from_ellipse(e: Ellipse) -> Result<Self> {
        let c = e.center();
        Self::with_shape(Shape::Ellipse(e), c)
    }

    pub fn radial(r: Radial) -> Result<Self> {
        let c = r.center();
        Self::with_shape(Shape::Radial(r), c)
    }

    pub fn cantor(boundary: Arc<CantorBoundary>) -> Result<Self> {
        let c = boundary.center();
        Self::with_shape(Shape::Cantor(boundary), c)
    }

    pub fn with_basepoint(mut self, basepoint: Point2) -> Result<Self> {
        self.basepoint = basepoint;
        self.check_basepoint()?;
        Ok(self)
    }

    pub fn with_tol_geo(mut self, tol_geo: f64) -> Self {
        self.tol_geo = tol_geo;
        self
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn kind(&self) -> ShapeKind {
        match self.shape {
            Shape::Polygon(_) => ShapeKind::Polygon,
            Shape::Ellipse(_) => ShapeKind::Ellipse,
            Shape::Radial(_) => ShapeKind::Radial,
            Shape::Cantor(_) => ShapeKind::Cantor,
        }
    }

    pub fn basepoint(&self) -> Point2 {
        self.basepoint
    }

    pub fn tol_geo(&self) -> f64 {
        self.tol_geo
    }

    /// Polygonal boundary, for the polygon and Cantor variants.
    pub fn as_polygon(&self) -> Option<&Polygon> {
        match &self.shape {
            Shape::Polygon(p) => Some(p),
            Shape::Cantor(c) => Some(c.polygon()),
            _ => None,
        }
    }

    /// Exit distance along unit `v` with no interior check.
    #[inline]
    pub fn exit_distance(&self, x: Point2, v: Point2) -> f64 {
        match &self.shape {
            Shape::Polygon(p) => p.exit(x, v).0,
            Shape::Cantor(c) => c.polygon().exit(x, v).0,
            Shape::Ellipse(e) => e.exit(x, v),
            Shape::Radial(r) => r.exit(x, v),
        }
    }

    /// Strictly interior with margin `tol_geo` along the ray from the basepoint.
    pub fn is_interior(&self, x: Point2) -> bool {
        if !x.is_finite() {
            return false;
        }
        let d = x - self.basepoint;
        let r = d.norm();
        if r == 0.0 {
            return true;
        }
        let u = d / r;
        r < self.exit_distance(self.basepoint, u) - self.tol_geo
    }

    pub fn require_interior(&self, x: Point2) -> Result<()> {
        if self.is_interior(x) {
            Ok(())
        } else {
            Err(Error::NotInterior(x))
        }
    }

    pub fn ray_exit(&self, x: Point2, v: Point2) -> Result<(Point2, f64)> {
        let n = v.norm();
        if !((n - 1.0).abs() <= UNIT_TOL) {
            return Err(Error::NonUnitDirection(n));
        }
        self.require_interior(x)?;
        let t = self.exit_distance(x, v);
        Ok((x + v * t, t))
    }

    pub fn chord_through(&self, p: Point2, q: Point2) -> Result<Chord> {
        let len = p.dist(q);
        if !(len > self.tol_geo) {
            return Err(Error::CoincidentPoints(self.tol_geo));
        }
        self.require_interior(p)?;
        self.require_interior(q)?;
        let d = (q - p) / len;
        let ta = self.exit_distance(p, -d);
        let tb = self.exit_distance(q, d);
        Ok(Chord { a: p - d * ta, p, q, b: q + d * tb })
    }

    /// Boundary point in direction `theta` from the basepoint.
    pub fn boundary_point(&self, theta: f64) -> Point2 {
        let u = Point2::polar(1.0, theta);
        self.basepoint + u * self.exit_distance(self.basepoint, u)
    }

    pub fn one_sided_tangents(&self, theta: f64) -> Tangents {
        let u = Point2::polar(1.0, theta);
        let b = self.basepoint;
        match &self.shape {
            Shape::Polygon(_) | Shape::Cantor(_) => {
                let poly = self.as_polygon().unwrap();
                let (t, k) = poly.exit(b, u);
                let point = b + u * t;
                let n = poly.len();
                let dir = |i: usize| poly.edges()[i].normalized();
                let (fwd, bwd) = match poly.vertex_near(point, k, self.tol_geo) {
                    Some(v) => (dir(v), dir((v + n - 1) % n)),
                    None => (dir(k), dir(k)),
                };
                Tangents { point, forward: fwd, backward: bwd, normal_from: outward(bwd), normal_to: outward(fwd) }
            }
            Shape::Ellipse(e) => {
                let point = b + u * e.exit(b, u);
                let t = e.tangent(point);
                let nrm = e.outward_normal(point);
                Tangents { point, forward: t, backward: t, normal_from: nrm, normal_to: nrm }
            }
            Shape::Radial(r) => {
                let point = b + u * r.exit(b, u);
                let phi = (point - r.center()).angle();
                let t = r.tangent(phi).normalized();
                let nrm = outward(t);
                Tangents { point, forward: t, backward: t, normal_from: nrm, normal_to: nrm }
            }
        }
    }

    /// `a` such that `origin - a(p - origin)` lies on the boundary, `p = boundary_point(theta)`.
    pub fn antipodal_ratio(&self, theta: f64, origin: Point2) -> Result<f64> {
        self.require_interior(origin)?;
        let p = self.boundary_point(theta);
        let w = p - origin;
        let r = w.norm();
        let t = self.exit_distance(origin, -(w / r));
        Ok(t / r)
    }

    pub fn area(&self) -> f64 {
        match &self.shape {
            Shape::Polygon(p) => p.area(),
            Shape::Cantor(c) => c.polygon().area(),
            Shape::Ellipse(e) => e.area(),
            Shape::Radial(r) => r.area(),
        }
    }

    /// Central symmetry about the basepoint within `tol_geo`.
    pub fn is_centrally_symmetric(&self) -> bool {
        let tol = self.tol_geo.max(1e-12);
        match &self.shape {
            Shape::Polygon(p) => p.is_symmetric_about(self.basepoint, tol),
            Shape::Cantor(c) => c.polygon().is_symmetric_about(self.basepoint, tol.max(1e-9)),
            Shape::Ellipse(e) => e.center().dist(self.basepoint) <= tol,
            Shape::Radial(r) => r.center().dist(self.basepoint) <= tol && r.is_symmetric(tol),
        }
    }

    /// Image under an invertible affine map; the basepoint is carried along.
    pub fn map_affine(&self, f: &Affine2) -> Result<Self> {
        let shape = match &self.shape {
            Shape::Polygon(p) => Shape::Polygon(p.map(f)?),
            Shape::Cantor(c) => Shape::Polygon(c.polygon().map(f)?),
            Shape::Ellipse(e) => Shape::Ellipse(e.map(f)?),
            Shape::Radial(_) => {
                return Err(Error::InvalidParameter("affine images of radial profiles are not radial".into()))
            }
        };
        let mut d = Self::with_shape(shape, f.apply(self.basepoint))?;
        d.tol_geo = self.tol_geo;
        Ok(d)
    }

    /// `n` boundary points at equally spaced angles around the basepoint.
    pub fn sample_boundary(&self, n: usize) -> Vec<Point2> {
        (0..n).map(|i| self.boundary_point(TAU * i as f64 / n as f64)).collect()
    }

    /// Largest violation of the support-line condition over `n` samples.
    ///
    /// For each sampled point the forward tangent line is a support line;
    /// returns the maximum signed distance of any sample to the outside of it.
    pub fn convexity_defect(&self, n: usize) -> f64 {
        let tangents: Vec<Tangents> = (0..n).map(|i| self.one_sided_tangents(TAU * i as f64 / n as f64)).collect();
        let mut worst = f64::NEG_INFINITY;
        for t in &tangents {
            let nrm = t.normal_to;
            for s in &tangents {
                worst = worst.max(nrm.dot(s.point - t.point));
            }
        }
        worst
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Point2, b: Point2, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn ray_exit_examples() {
        let disk = ConvexDomain::unit_disk();
        let (hit, t) = disk.ray_exit(Point2::ORIGIN, Point2::new(1.0, 0.0)).unwrap();
        assert_eq!(t, 1.0);
        assert!(close(hit, Point2::new(1.0, 0.0), 1e-15));

        let e = ConvexDomain::ellipse(2.0, 1.0, Point2::ORIGIN).unwrap();
        assert_eq!(e.ray_exit(Point2::ORIGIN, Point2::new(1.0, 0.0)).unwrap().1, 2.0);

        let sq = ConvexDomain::square(1.0);
        assert_eq!(sq.ray_exit(Point2::new(0.5, 0.0), Point2::new(1.0, 0.0)).unwrap().1, 0.5);
    }

    #[test]
    fn ray_exit_errors() {
        let disk = ConvexDomain::unit_disk();
        assert!(matches!(disk.ray_exit(Point2::new(1.0, 0.0), Point2::new(1.0, 0.0)), Err(Error::NotInterior(_))));
        assert!(matches!(disk.ray_exit(Point2::new(2.0, 0.0), Point2::new(1.0, 0.0)), Err(Error::NotInterior(_))));
        assert!(matches!(disk.ray_exit(Point2::ORIGIN, Point2::new(1.0, 1.0)), Err(Error::NonUnitDirection(_))));
    }

    #[test]
    fn chord_examples() {
        let disk = ConvexDomain::unit_disk();
        let c = disk.chord_through(Point2::ORIGIN, Point2::new(0.5, 0.0)).unwrap();
        assert!(close(c.a, Point2::new(-1.0, 0.0), 1e-15) && close(c.b, Point2::new(1.0, 0.0), 1e-15));
        let sq = ConvexDomain::square(1.0);
        let c = sq.chord_through(Point2::ORIGIN, Point2::new(0.5, 0.0)).unwrap();
        assert!(close(c.a, Point2::new(-1.0, 0.0), 1e-15) && close(c.b, Point2::new(1.0, 0.0), 1e-15));
        let c = disk.chord_through(Point2::new(0.0, 0.3), Point2::new(0.0, -0.3)).unwrap();
        assert!(close(c.a, Point2::new(0.0, 1.0), 1e-15) && close(c.b, Point2::new(0.0, -1.0), 1e-15));
        assert!(matches!(
            disk.chord_through(Point2::ORIGIN, Point2::new(1e-12, 0.0)),
            Err(Error::CoincidentPoints(_))
        ));
    }

    #[test]
    fn tangents_examples() {
        let disk = ConvexDomain::unit_disk();
        let t = disk.one_sided_tangents(0.0);
        assert!(close(t.forward, Point2::new(0.0, 1.0), 1e-15) && t.is_smooth(1e-15));
        assert!(close(t.normal_from, Point2::new(1.0, 0.0), 1e-15));

        let sq = ConvexDomain::square(1.0);
        let t = sq.one_sided_tangents(std::f64::consts::FRAC_PI_4);
        assert!(close(t.point, Point2::new(1.0, 1.0), 1e-12));
        assert!(close(t.forward, Point2::new(-1.0, 0.0), 1e-15));
        assert!(close(t.backward, Point2::new(0.0, 1.0), 1e-15));
        assert!(close(t.normal_from, Point2::new(1.0, 0.0), 1e-15));
        assert!(close(t.normal_to, Point2::new(0.0, 1.0), 1e-15));

        let t = sq.one_sided_tangents(0.0);
        assert!(t.is_smooth(0.0));
        assert!(close(t.forward, Point2::new(0.0, 1.0), 1e-15));
        assert!(close(t.normal_to, Point2::new(1.0, 0.0), 1e-15));
    }

    #[test]
    fn antipodal_examples() {
        let disk = ConvexDomain::unit_disk();
        assert!((disk.antipodal_ratio(0.0, Point2::new(0.5, 0.0)).unwrap() - 3.0).abs() < 1e-14);
        for i in 0..20 {
            let th = i as f64 * 0.37;
            assert!((disk.antipodal_ratio(th, Point2::ORIGIN).unwrap() - 1.0).abs() < 1e-14);
        }
        let sq = ConvexDomain::square(1.0);
        let e = ConvexDomain::ellipse(2.0, 1.0, Point2::ORIGIN).unwrap();
        for i in 0..20 {
            let th = i as f64 * 0.37;
            assert!((sq.antipodal_ratio(th, Point2::ORIGIN).unwrap() - 1.0).abs() < 1e-14);
            assert!((e.antipodal_ratio(th, Point2::ORIGIN).unwrap() - 1.0).abs() < 1e-14);
        }
        assert!(disk.antipodal_ratio(0.0, Point2::new(3.0, 0.0)).is_err());
    }

    #[test]
    fn symmetry_detection() {
        assert!(ConvexDomain::unit_disk().is_centrally_symmetric());
        assert!(ConvexDomain::square(1.0).is_centrally_symmetric());
        let off = ConvexDomain::unit_disk().with_basepoint(Point2::new(0.2, 0.0)).unwrap();
        assert!(!off.is_centrally_symmetric());
        let tri = ConvexDomain::polygon(vec![Point2::new(0.0, 0.0), Point2::new(1.0, 0.0), Point2::new(0.0, 1.0)]).unwrap();
        assert!(!tri.is_centrally_symmetric());
    }

    #[test]
    fn basepoint_must_be_interior() {
        assert!(ConvexDomain::unit_disk().with_basepoint(Point2::new(1.0, 0.0)).is_err());
        assert!(ConvexDomain::square(1.0).with_basepoint(Point2::new(1.0, 0.5)).is_err());
    }

    #[test]
    fn radial_convexity_audit() {
        let rho = |t: f64| 1.0 / ((t.cos() / 2.0).powi(2) + t.sin().powi(2)).sqrt();
        let r = Radial::from_fn(Point2::ORIGIN, 256, rho, Interpolation::CubicSpline).unwrap();
        let d = ConvexDomain::radial(r).unwrap();
        assert!(d.convexity_defect(200) < 1e-8);
        assert!(d.is_centrally_symmetric());
    }
}
