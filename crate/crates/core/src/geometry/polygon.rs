use std::f64::consts::{PI, TAU};

use super::point::{Affine2, Point2};
use crate::error::{Error, Result};

/// Strictly convex polygon, vertices in counterclockwise order.
///
/// Edge vectors are stored separately from vertex differences so that
/// constructions with tiny edges can supply them analytically.
#[derive(Debug, Clone)]
pub struct Polygon {
    vertices: Vec<Point2>,
    edges: Vec<Point2>,
    /// Unwrapped edge direction angles, nondecreasing, spanning less than 2π.
    angles: Vec<f64>,
}

impl Polygon {
    /// Validates strict convexity; clockwise input is reversed.
    pub fn new(mut vertices: Vec<Point2>) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::InvalidSpec(format!("polygon needs at least 3 vertices, got {}", vertices.len())));
        }
        if let Some(bad) = vertices.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidSpec(format!("vertex {bad} is not finite")));
        }
        if signed_area(&vertices) < 0.0 {
            vertices.reverse();
        }
        let n = vertices.len();
        let edges: Vec<Point2> = (0..n).map(|i| vertices[(i + 1) % n] - vertices[i]).collect();
        Self::from_parts(vertices, edges)
    }

    /// Builds from counterclockwise vertices and matching edge vectors.
    pub fn from_parts(vertices: Vec<Point2>, edges: Vec<Point2>) -> Result<Self> {
        let n = vertices.len();
        assert_eq!(n, edges.len());
        for i in 0..n {
            let j = (i + 1) % n;
            if !(edges[i].cross(edges[j]) > 0.0) {
                return Err(Error::NonConvex(i, j, (j + 1) % n));
            }
        }
        let mut angles = Vec::with_capacity(n);
        let mut prev = edges[0].angle();
        angles.push(prev);
        for e in &edges[1..] {
            let mut a = e.angle();
            while a < prev {
                a += TAU;
            }
            angles.push(a);
            prev = a;
        }
        if angles[n - 1] - angles[0] >= TAU {
            // winds more than once
            return Err(Error::NonConvex(n - 1, 0, 1 % n));
        }
        Ok(Self { vertices, edges, angles })
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Point2] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn area(&self) -> f64 {
        signed_area(&self.vertices)
    }

    pub fn centroid(&self) -> Point2 {
        let n = self.vertices.len();
        let o = self.vertices[0];
        let (mut a, mut cx, mut cy) = (0.0, 0.0, 0.0);
        for i in 1..n - 1 {
            let p = self.vertices[i] - o;
            let q = self.vertices[i + 1] - o;
            let w = p.cross(q);
            a += w;
            cx += w * (p.x + q.x);
            cy += w * (p.y + q.y);
        }
        o + Point2::new(cx, cy) / (3.0 * a)
    }

    /// Outward unit normal of edge `i`.
    pub fn normal(&self, i: usize) -> Point2 {
        let e = self.edges[i];
        Point2::new(e.y, -e.x) / e.norm()
    }

    pub fn map(&self, f: &Affine2) -> Result<Self> {
        let vertices = self.vertices.iter().map(|&v| f.apply(v)).collect();
        Polygon::new(vertices)
    }

    /// First edge whose direction angle is at least `psi` (cyclically).
    fn first_edge_from(&self, psi: f64) -> usize {
        let a0 = self.angles[0];
        let s = (psi - a0).rem_euclid(TAU) + a0;
        let i = self.angles.partition_point(|&a| a < s);
        if i == self.angles.len() {
            0
        } else {
            i
        }
    }

    /// Distance from `x` to the boundary along unit direction `v`, and the edge hit.
    ///
    /// `x` must be interior; the result is unspecified otherwise.
    pub fn exit(&self, x: Point2, v: Point2) -> (f64, usize) {
        let n = self.vertices.len();
        let psi = v.angle();
        let lo = self.first_edge_from(psi);
        let hi = self.first_edge_from(psi + PI);
        let g = |i: usize| v.cross(self.vertices[i % n] - x);
        let span = (hi + n - lo) % n;
        let k = if g(lo) < 0.0 && g(hi) >= 0.0 && span > 0 {
            // g is nondecreasing on lo..=hi
            let (mut a, mut b) = (0usize, span);
            while b - a > 1 {
                let m = (a + b) / 2;
                if g(lo + m) < 0.0 {
                    a = m;
                } else {
                    b = m;
                }
            }
            (lo + a) % n
        } else {
            usize::MAX
        };
        let k = if k != usize::MAX && self.crossing_ok(x, v, k) { k } else { self.scan_exit(x, v) };
        let e = self.edges[k];
        let t = (self.vertices[k] - x).cross(e) / v.cross(e);
        (t, k)
    }

    fn crossing_ok(&self, x: Point2, v: Point2, k: usize) -> bool {
        let n = self.vertices.len();
        let g0 = v.cross(self.vertices[k] - x);
        let g1 = v.cross(self.vertices[(k + 1) % n] - x);
        g0 < 0.0 && g1 >= 0.0 && v.cross(self.edges[k]) > 0.0
    }

    fn scan_exit(&self, x: Point2, v: Point2) -> usize {
        let n = self.vertices.len();
        let mut best = 0;
        let mut best_t = f64::INFINITY;
        for k in 0..n {
            if self.crossing_ok(x, v, k) {
                return k;
            }
            // near-degenerate fallback: smallest positive exit parameter
            let e = self.edges[k];
            let c = v.cross(e);
            if c > 0.0 {
                let t = (self.vertices[k] - x).cross(e) / c;
                if t > 0.0 && t < best_t {
                    best_t = t;
                    best = k;
                }
            }
        }
        best
    }

    /// Vertex index if `p` coincides with a vertex within `tol`.
    pub fn vertex_near(&self, p: Point2, edge: usize, tol: f64) -> Option<usize> {
        let n = self.vertices.len();
        if p.dist(self.vertices[edge]) <= tol {
            Some(edge)
        } else if p.dist(self.vertices[(edge + 1) % n]) <= tol {
            Some((edge + 1) % n)
        } else {
            None
        }
    }

    /// Barycentric residual of `p` against edge `k`: distance to the segment.
    pub fn edge_residual(&self, p: Point2, k: usize) -> f64 {
        let a = self.vertices[k];
        let e = self.edges[k];
        let s = ((p - a).dot(e) / e.norm_sq()).clamp(0.0, 1.0);
        p.dist(a + e * s)
    }

    /// Central symmetry about `c` within `tol`.
    pub fn is_symmetric_about(&self, c: Point2, tol: f64) -> bool {
        let n = self.vertices.len();
        if n % 2 != 0 {
            return false;
        }
        let h = n / 2;
        (0..h).all(|i| (self.vertices[i] + self.vertices[i + h] - c * 2.0).norm() <= tol)
    }
}

pub(crate) fn signed_area(v: &[Point2]) -> f64 {
    let n = v.len();
    let o = v[0];
    let mut s = 0.0;
    for i in 1..n.saturating_sub(1) {
        s += (v[i] - o).cross(v[i + 1] - o);
    }
    0.5 * s
}

/// Regular polygon with `n` vertices on the circle of radius `r`.
pub fn regular_polygon(n: usize, r: f64, phase: f64) -> Vec<Point2> {
    (0..n).map(|i| Point2::polar(r, phase + TAU * i as f64 / n as f64)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> Polygon {
        Polygon::new(vec![
            Point2::new(-1.0, -1.0),
            Point2::new(1.0, -1.0),
            Point2::new(1.0, 1.0),
            Point2::new(-1.0, 1.0),
        ])
        .unwrap()
    }

    #[test]
    fn exit_axis_aligned() {
        let sq = square();
        let (t, k) = sq.exit(Point2::new(0.5, 0.0), Point2::new(1.0, 0.0));
        assert_eq!(t, 0.5);
        assert_eq!(k, 1);
        let (t, _) = sq.exit(Point2::new(0.5, 0.0), Point2::new(-1.0, 0.0));
        assert_eq!(t, 1.5);
    }

    #[test]
    fn exit_through_vertex() {
        let sq = square();
        let d = Point2::new(1.0, 1.0).normalized();
        let (t, _) = sq.exit(Point2::ORIGIN, d);
        assert!((t - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn exit_matches_scan_on_many_gon() {
        let p = Polygon::new(regular_polygon(257, 1.0, 0.1)).unwrap();
        let x = Point2::new(0.3, -0.2);
        for i in 0..1000 {
            let v = Point2::polar(1.0, i as f64 * 0.0137);
            let (t, k) = p.exit(x, v);
            let ks = p.scan_exit(x, v);
            assert_eq!(k, ks);
            assert!(p.edge_residual(x + v * t, k) < 1e-12);
        }
    }

    #[test]
    fn clockwise_input_is_reversed() {
        let mut v = square().vertices().to_vec();
        v.reverse();
        let p = Polygon::new(v).unwrap();
        assert!(p.area() > 0.0);
        assert_eq!(p.area(), 4.0);
    }

    #[test]
    fn nonconvex_rejected_with_triple() {
        let v = vec![
            Point2::new(0.0, 0.0),
            Point2::new(2.0, 0.0),
            Point2::new(1.0, 0.2),
            Point2::new(2.0, 2.0),
            Point2::new(0.0, 2.0),
        ];
        match Polygon::new(v) {
            Err(Error::NonConvex(a, b, c)) => assert_eq!((a, b, c), (1, 2, 3)),
            other => panic!("expected NonConvex, got {other:?}"),
        }
    }

    #[test]
    fn collinear_vertex_rejected() {
        let v = vec![Point2::new(0.0, 0.0), Point2::new(1.0, 0.0), Point2::new(2.0, 0.0), Point2::new(1.0, 1.0)];
        assert!(matches!(Polygon::new(v), Err(Error::NonConvex(..))));
    }

    #[test]
    fn centroid_and_symmetry() {
        let sq = square();
        assert!(sq.centroid().norm() < 1e-15);
        assert!(sq.is_symmetric_about(Point2::ORIGIN, 1e-12));
        let tri = Polygon::new(vec![Point2::new(0.0, 0.0), Point2::new(3.0, 0.0), Point2::new(0.0, 3.0)]).unwrap();
        assert!((tri.centroid() - Point2::new(1.0, 1.0)).norm() < 1e-15);
        assert!(!tri.is_symmetric_about(Point2::new(1.0, 1.0), 1e-12));
    }
}
