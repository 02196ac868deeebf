use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use super::point::Point2;
use super::polygon::Polygon;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Interpolation {
    /// Periodic C² cubic spline in θ.
    #[default]
    CubicSpline,
    /// Straight segments between samples.
    Linear,
}

/// Star-shaped curve `center + ρ(θ)(cos θ, sin θ)` sampled on a uniform grid.
#[derive(Debug, Clone)]
pub struct Radial {
    center: Point2,
    values: Vec<f64>,
    second: Vec<f64>,
    interp: Interpolation,
    samples: Polygon,
}

/// Relative cross product below which three samples count as collinear.
const COLLINEAR_TOL: f64 = 1e-12;

/// Removes samples lying on the segment between their neighbours, rejecting
/// reflex samples. Input is counterclockwise around the center.
fn drop_collinear(pts: Vec<Point2>) -> Result<Vec<Point2>> {
    let n = pts.len();
    let mut keep = Vec::with_capacity(n);
    for k in 0..n {
        let (a, b, c) = (pts[(k + n - 1) % n], pts[k], pts[(k + 1) % n]);
        let (e, f) = (b - a, c - b);
        let cross = e.cross(f);
        let scale = e.norm() * f.norm();
        if cross < -COLLINEAR_TOL * scale {
            return Err(Error::NonConvex((k + n - 1) % n, k, (k + 1) % n));
        }
        if cross > COLLINEAR_TOL * scale {
            keep.push(b);
        }
    }
    Ok(keep)
}

impl Radial {
    pub fn new(center: Point2, values: Vec<f64>, interp: Interpolation) -> Result<Self> {
        let n = values.len();
        if n < 8 {
            return Err(Error::InvalidSpec(format!("radial profile needs at least 8 samples, got {n}")));
        }
        if let Some(i) = values.iter().position(|r| !(*r > 0.0 && r.is_finite())) {
            return Err(Error::InvalidSpec(format!("rho[{i}] = {} is not positive", values[i])));
        }
        let h = TAU / n as f64;
        let pts: Vec<Point2> = values.iter().enumerate().map(|(i, &r)| center + Point2::polar(r, h * i as f64)).collect();
        let samples = Polygon::new(drop_collinear(pts)?)?;
        let second = match interp {
            Interpolation::CubicSpline => periodic_spline_second_derivatives(&values, h),
            Interpolation::Linear => vec![0.0; n],
        };
        let radial = Self { center, values, second, interp, samples };
        if interp == Interpolation::CubicSpline {
            let m = 8 * n;
            for i in 0..m {
                let th = TAU * i as f64 / m as f64;
                if radial.curvature(th) < -1e-9 {
                    let k = (i / 8) % n;
                    return Err(Error::NonConvex((k + n - 1) % n, k, (k + 1) % n));
                }
            }
        }
        Ok(radial)
    }

    pub fn from_fn(center: Point2, n: usize, rho: impl Fn(f64) -> f64, interp: Interpolation) -> Result<Self> {
        let values = (0..n).map(|i| rho(TAU * i as f64 / n as f64)).collect();
        Self::new(center, values, interp)
    }

    pub fn center(&self) -> Point2 {
        self.center
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn interpolation(&self) -> Interpolation {
        self.interp
    }

    pub fn sample_polygon(&self) -> &Polygon {
        &self.samples
    }

    fn step(&self) -> f64 {
        TAU / self.values.len() as f64
    }

    /// ρ, ρ' and ρ'' at angle `theta` about the center.
    pub fn rho(&self, theta: f64) -> (f64, f64, f64) {
        let n = self.values.len();
        let h = self.step();
        let th = theta.rem_euclid(TAU);
        let i = ((th / h).floor() as usize).min(n - 1);
        let j = (i + 1) % n;
        let s = th - h * i as f64;
        let (y0, y1) = (self.values[i], self.values[j]);
        match self.interp {
            Interpolation::Linear => {
                // linear in the plane, not in ρ
                let p0 = Point2::polar(y0, h * i as f64);
                let p1 = Point2::polar(y1, h * (i + 1) as f64);
                let u = Point2::polar(1.0, th);
                let e = p1 - p0;
                let r = p0.cross(e) / u.cross(e);
                let du = u.perp();
                let dr = -r * du.cross(e) / u.cross(e);
                (r, dr, f64::NAN)
            }
            Interpolation::CubicSpline => {
                let (m0, m1) = (self.second[i], self.second[j]);
                let a = h - s;
                let b = s;
                let r = m0 * a * a * a / (6.0 * h) + m1 * b * b * b / (6.0 * h) + (y0 / h - m0 * h / 6.0) * a + (y1 / h - m1 * h / 6.0) * b;
                let dr = -m0 * a * a / (2.0 * h) + m1 * b * b / (2.0 * h) - (y0 / h - m0 * h / 6.0) + (y1 / h - m1 * h / 6.0);
                let ddr = m0 * a / h + m1 * b / h;
                (r, dr, ddr)
            }
        }
    }

    pub fn point(&self, theta: f64) -> Point2 {
        self.center + Point2::polar(self.rho(theta).0, theta)
    }

    /// Counterclockwise tangent (unnormalized) at angle `theta`.
    pub fn tangent(&self, theta: f64) -> Point2 {
        let (r, dr, _) = self.rho(theta);
        let u = Point2::polar(1.0, theta);
        u * dr + u.perp() * r
    }

    pub fn curvature(&self, theta: f64) -> f64 {
        match self.interp {
            Interpolation::Linear => 0.0,
            Interpolation::CubicSpline => {
                let (r, dr, ddr) = self.rho(theta);
                let q = r * r + dr * dr;
                (r * r + 2.0 * dr * dr - r * ddr) / (q * q.sqrt())
            }
        }
    }

    pub fn exit(&self, x: Point2, v: Point2) -> f64 {
        if self.interp == Interpolation::Linear {
            return self.samples.exit(x, v).0;
        }
        let n = self.values.len();
        let h = self.step();
        let g = |th: f64| v.cross(self.point(th) - x);
        let (_, k) = self.samples.exit(x, v);
        let mut lo = h * (k as f64 - 1.0);
        let mut hi = h * (k as f64 + 2.0);
        if !(g(lo) < 0.0 && g(hi) >= 0.0) {
            let mut found = false;
            for i in 0..n {
                let a = h * i as f64;
                if g(a) < 0.0 && g(a + h) >= 0.0 && v.dot(self.point(a + h) - x) > 0.0 {
                    lo = a;
                    hi = a + h;
                    found = true;
                    break;
                }
            }
            if !found {
                return self.samples.exit(x, v).0;
            }
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi || hi - lo < 1e-15 {
                break;
            }
            if g(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let (glo, ghi) = (g(lo), g(hi));
        let p = if ghi != glo {
            let w = -glo / (ghi - glo);
            self.point(lo) * (1.0 - w) + self.point(hi) * w
        } else {
            self.point(hi)
        };
        (p - x).dot(v)
    }

    /// Enclosed area, `½∫ρ²`.
    pub fn area(&self) -> f64 {
        match self.interp {
            Interpolation::Linear => self.samples.area(),
            Interpolation::CubicSpline => {
                let n = self.values.len();
                let (xs, ws) = crate::quadrature::gauss_legendre(8);
                let h = self.step();
                let mut s = 0.0;
                for i in 0..n {
                    let c = h * (i as f64 + 0.5);
                    for (x, w) in xs.iter().zip(&ws) {
                        let r = self.rho(c + 0.5 * h * x).0;
                        s += w * r * r;
                    }
                }
                0.25 * h * s
            }
        }
    }

    /// Symmetry `ρ(θ+π) = ρ(θ)` on the grid.
    pub fn is_symmetric(&self, tol: f64) -> bool {
        let n = self.values.len();
        n % 2 == 0 && (0..n / 2).all(|i| (self.values[i] - self.values[i + n / 2]).abs() <= tol)
    }
}

/// Second derivatives of the periodic cubic spline through `y` with uniform step `h`.
fn periodic_spline_second_derivatives(y: &[f64], h: f64) -> Vec<f64> {
    let n = y.len();
    let rhs: Vec<f64> = (0..n)
        .map(|i| 6.0 * (y[(i + 1) % n] - 2.0 * y[i] + y[(i + n - 1) % n]) / (h * h))
        .collect();
    solve_cyclic(1.0, 4.0, 1.0, &rhs)
}

/// Solves the cyclic tridiagonal system with constant bands via Sherman-Morrison.
fn solve_cyclic(a: f64, b: f64, c: f64, d: &[f64]) -> Vec<f64> {
    let n = d.len();
    let gamma = -b;
    let mut diag = vec![b; n];
    diag[0] = b - gamma;
    diag[n - 1] = b - a * c / gamma;
    let x = solve_tridiagonal(a, &diag, c, d);
    let mut u = vec![0.0; n];
    u[0] = gamma;
    u[n - 1] = c;
    let z = solve_tridiagonal(a, &diag, c, &u);
    let fact = (x[0] + a * x[n - 1] / gamma) / (1.0 + z[0] + a * z[n - 1] / gamma);
    x.iter().zip(&z).map(|(x, z)| x - fact * z).collect()
}

fn solve_tridiagonal(a: f64, diag: &[f64], c: f64, d: &[f64]) -> Vec<f64> {
    let n = d.len();
    let mut cp = vec![0.0; n];
    let mut dp = vec![0.0; n];
    cp[0] = c / diag[0];
    dp[0] = d[0] / diag[0];
    for i in 1..n {
        let m = diag[i] - a * cp[i - 1];
        cp[i] = c / m;
        dp[i] = (d[i] - a * dp[i - 1]) / m;
    }
    let mut x = vec![0.0; n];
    x[n - 1] = dp[n - 1];
    for i in (0..n - 1).rev() {
        x[i] = dp[i] - cp[i] * x[i + 1];
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_profile_is_a_circle() {
        let r = Radial::new(Point2::ORIGIN, vec![1.0; 64], Interpolation::CubicSpline).unwrap();
        for i in 0..50 {
            let th = i as f64 * 0.31;
            let (rho, d, dd) = r.rho(th);
            assert!((rho - 1.0).abs() < 1e-14 && d.abs() < 1e-12 && dd.abs() < 1e-10);
            assert!((r.curvature(th) - 1.0).abs() < 1e-10);
        }
        assert!((r.area() - std::f64::consts::PI).abs() < 1e-12);
        let t = r.exit(Point2::new(0.5, 0.0), Point2::new(1.0, 0.0));
        assert!((t - 0.5).abs() < 1e-12);
    }

    #[test]
    fn flat_runs_are_accepted_and_dents_rejected() {
        let square = |t: f64| 1.0 / t.cos().abs().max(t.sin().abs());
        let r = Radial::from_fn(Point2::ORIGIN, 64, square, Interpolation::Linear).unwrap();
        assert_eq!(r.sample_polygon().len(), 4);
        assert!((r.area() - 4.0).abs() < 1e-12);
        let mut dented = vec![1.0; 16];
        dented[5] = 0.8;
        assert!(matches!(Radial::new(Point2::ORIGIN, dented, Interpolation::Linear), Err(Error::NonConvex(4, 5, 6))));
    }

    #[test]
    fn spline_reproduces_smooth_profile() {
        // ellipse a=2, b=1 in polar form
        let rho = |t: f64| 1.0 / ((t.cos() / 2.0).powi(2) + t.sin().powi(2)).sqrt();
        let r = Radial::from_fn(Point2::ORIGIN, 1024, rho, Interpolation::CubicSpline).unwrap();
        for i in 0..100 {
            let th = 0.0123 + i as f64 * 0.0617;
            assert!((r.rho(th).0 - rho(th)).abs() < 1e-8);
        }
        assert!((r.curvature(0.0) - 2.0).abs() < 1e-3);
        assert!((r.area() - 2.0 * std::f64::consts::PI).abs() < 1e-7);
        let t = r.exit(Point2::ORIGIN, Point2::new(1.0, 0.0));
        assert!((t - 2.0).abs() < 1e-10);
    }

    #[test]
    fn nonconvex_profile_rejected() {
        let rho = |t: f64| 1.0 + 0.3 * (5.0 * t).cos();
        assert!(Radial::from_fn(Point2::ORIGIN, 128, rho, Interpolation::CubicSpline).is_err());
        assert!(Radial::new(Point2::ORIGIN, vec![1.0, -1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0], Interpolation::Linear).is_err());
    }
}
