use super::point::{Affine2, Mat2, Point2};
use crate::error::{Error, Result};

/// Image of the closed unit disk under `u ↦ center + shape·u`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ellipse {
    center: Point2,
    shape: Mat2,
    inv: Mat2,
}

impl Ellipse {
    /// Axis-aligned ellipse with semi-axes `a` (along x) and `b`.
    pub fn new(a: f64, b: f64, center: Point2) -> Result<Self> {
        if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
            return Err(Error::InvalidSpec(format!("semi-axes must be positive, got ({a}, {b})")));
        }
        Self::from_matrix(Mat2::diag(a, b), center)
    }

    pub fn from_matrix(shape: Mat2, center: Point2) -> Result<Self> {
        let inv = shape
            .inverse()
            .ok_or_else(|| Error::InvalidSpec("degenerate ellipse matrix".into()))?;
        Ok(Self { center, shape, inv })
    }

    pub fn center(&self) -> Point2 {
        self.center
    }

    pub fn shape(&self) -> Mat2 {
        self.shape
    }

    pub fn area(&self) -> f64 {
        std::f64::consts::PI * self.shape.det().abs()
    }

    pub fn to_disk(&self, x: Point2) -> Point2 {
        self.inv.apply(x - self.center)
    }

    pub fn from_disk(&self, u: Point2) -> Point2 {
        self.center + self.shape.apply(u)
    }

    pub fn map(&self, f: &Affine2) -> Result<Self> {
        Self::from_matrix(f.linear.mul(&self.shape), f.apply(self.center))
    }

    /// Positive root of `|u0 + t w| = 1`.
    pub fn exit(&self, x: Point2, v: Point2) -> f64 {
        let u0 = self.to_disk(x);
        let w = self.inv.apply(v);
        let a = w.norm_sq();
        let b = u0.dot(w);
        let r = u0.norm();
        let slack = (1.0 - r) * (1.0 + r);
        let disc = (b * b + a * slack).max(0.0).sqrt();
        if b > 0.0 {
            slack / (b + disc)
        } else {
            (disc - b) / a
        }
    }

    /// Counterclockwise unit tangent at a boundary point.
    pub fn tangent(&self, p: Point2) -> Point2 {
        let u = self.to_disk(p).normalized();
        let t = self.shape.apply(u.perp());
        let t = t.normalized();
        if self.shape.det() < 0.0 {
            -t
        } else {
            t
        }
    }

    pub fn outward_normal(&self, p: Point2) -> Point2 {
        let u = self.to_disk(p).normalized();
        self.inv.transpose().apply(u).normalized()
    }

    /// Euclidean curvature at a boundary point.
    pub fn curvature(&self, p: Point2) -> f64 {
        let u = self.to_disk(p).normalized();
        let s = self.shape.apply(u.perp()).norm();
        self.shape.det().abs() / (s * s * s)
    }
}
