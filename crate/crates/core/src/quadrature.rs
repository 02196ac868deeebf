//! Numerical integration and small fitting helpers.
//!
//! Adaptive Simpson is the workhorse for angular and radial integrals;
//! Gauss-Legendre panels are used for path lengths where the integrand is
//! analytic on each segment.

use crate::error::{Error, Result};

/// Adaptive Simpson rule with a relative tolerance and a hard depth cap.
#[derive(Debug, Clone, Copy)]
pub struct AdaptiveSimpson {
    pub rel_tol: f64,
    pub max_depth: u32,
    pub initial_panels: usize,
}

impl Default for AdaptiveSimpson {
    fn default() -> Self {
        Self { rel_tol: 1e-8, max_depth: 24, initial_panels: 64 }
    }
}

impl AdaptiveSimpson {
    pub fn new(rel_tol: f64) -> Self {
        Self { rel_tol, ..Self::default() }
    }

    pub fn with_panels(mut self, panels: usize) -> Self {
        self.initial_panels = panels.max(1);
        self
    }

    pub fn integrate<F>(&self, f: F, a: f64, b: f64) -> Result<f64>
    where
        F: Fn(f64) -> f64,
    {
        self.integrate_try(|x| Ok(f(x)), a, b)
    }

    /// Same as [`integrate`](Self::integrate) for integrands that can fail.
    pub fn integrate_try<F>(&self, f: F, a: f64, b: f64) -> Result<f64>
    where
        F: Fn(f64) -> Result<f64>,
    {
        if a == b {
            return Ok(0.0);
        }
        let n = self.initial_panels;
        let h = (b - a) / n as f64;
        let mut nodes = Vec::with_capacity(2 * n + 1);
        for i in 0..=2 * n {
            let x = if i == 2 * n { b } else { a + 0.5 * h * i as f64 };
            nodes.push((x, f(x)?));
        }
        let mut panels = Vec::with_capacity(n);
        let mut coarse = 0.0;
        let mut scale = 0.0;
        for i in 0..n {
            let (x0, f0) = nodes[2 * i];
            let (_, f1) = nodes[2 * i + 1];
            let (x2, f2) = nodes[2 * i + 2];
            let s = (x2 - x0) / 6.0 * (f0 + 4.0 * f1 + f2);
            coarse += s;
            scale += (x2 - x0).abs() / 6.0 * (f0.abs() + 4.0 * f1.abs() + f2.abs());
            panels.push((x0, x2, f0, f1, f2, s));
        }
        let floor = f64::EPSILON * 16.0 * scale;
        let tol = (self.rel_tol * coarse.abs()).max(floor);
        if tol == 0.0 || !tol.is_finite() {
            return if coarse.is_finite() { Ok(coarse) } else { Err(Error::QuadratureNonConvergent { depth: 0 }) };
        }
        let panel_tol = tol / n as f64;
        let mut total = 0.0;
        let mut comp = 0.0;
        for (x0, x2, f0, f1, f2, s) in panels {
            let v = self.refine(&f, x0, x2, f0, f1, f2, s, panel_tol, 0)?;
            neumaier_add(&mut total, &mut comp, v);
        }
        Ok(total + comp)
    }

    #[allow(clippy::too_many_arguments)]
    fn refine<F>(&self, f: &F, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> Result<f64>
    where
        F: Fn(f64) -> Result<f64>,
    {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm)?;
        let frm = f(rm)?;
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if !delta.is_finite() {
            return Err(Error::QuadratureNonConvergent { depth });
        }
        if delta.abs() <= 15.0 * tol || lm <= a || rm >= b {
            return Ok(left + right + delta / 15.0);
        }
        if depth + 1 >= self.max_depth {
            return Err(Error::QuadratureNonConvergent { depth: depth + 1 });
        }
        let l = self.refine(f, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1)?;
        let r = self.refine(f, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1)?;
        Ok(l + r)
    }
}

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

/// Gauss-Legendre rule with adaptive bisection.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    pub rel_tol: f64,
    pub max_depth: u32,
}

impl GaussLegendre {
    pub fn new(points: usize, rel_tol: f64) -> Self {
        let (nodes, weights) = gauss_legendre(points);
        Self { nodes, weights, rel_tol, max_depth: 40 }
    }

    fn panel<F: Fn(f64) -> Result<f64>>(&self, f: &F, a: f64, b: f64) -> Result<f64> {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        let mut s = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            s += w * f(c + h * x)?;
        }
        Ok(s * h)
    }

    pub fn integrate_try<F: Fn(f64) -> Result<f64>>(&self, f: F, a: f64, b: f64) -> Result<f64> {
        if a == b {
            return Ok(0.0);
        }
        let whole = self.panel(&f, a, b)?;
        self.refine(&f, a, b, whole, self.rel_tol * whole.abs(), 0)
    }

    fn refine<F: Fn(f64) -> Result<f64>>(&self, f: &F, a: f64, b: f64, whole: f64, tol: f64, depth: u32) -> Result<f64> {
        let m = 0.5 * (a + b);
        let l = self.panel(f, a, m)?;
        let r = self.panel(f, m, b)?;
        let err = (l + r - whole).abs();
        if err <= tol.max(4.0 * f64::EPSILON * (l.abs() + r.abs())) || m <= a || m >= b {
            return Ok(l + r);
        }
        if depth + 1 >= self.max_depth {
            return Err(Error::QuadratureNonConvergent { depth: depth + 1 });
        }
        Ok(self.refine(f, a, m, l, 0.5 * tol, depth + 1)? + self.refine(f, m, b, r, 0.5 * tol, depth + 1)?)
    }
}

/// Compensated accumulation step (Neumaier).
#[inline]
pub fn neumaier_add(sum: &mut f64, comp: &mut f64, x: f64) {
    let t = *sum + x;
    if sum.abs() >= x.abs() {
        *comp += (*sum - t) + x;
    } else {
        *comp += (x - t) + *sum;
    }
    *sum = t;
}

/// Compensated sum of an iterator.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(iter: I) -> f64 {
    let (mut s, mut c) = (0.0, 0.0);
    for x in iter {
        neumaier_add(&mut s, &mut c, x);
    }
    s + c
}

/// Ordinary least squares; returns `(slope, intercept)`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Option<(f64, f64)> {
    let n = xs.len();
    if n < 2 || ys.len() != n {
        return None;
    }
    let mx = xs.iter().sum::<f64>() / n as f64;
    let my = ys.iter().sum::<f64>() / n as f64;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    Some((slope, my - slope * mx))
}

/// Forward differences `(y[i+1]-y[i])/(x[i+1]-x[i])`.
pub fn local_slopes(xs: &[f64], ys: &[f64]) -> Vec<f64> {
    xs.windows(2).zip(ys.windows(2)).map(|(x, y)| (y[1] - y[0]) / (x[1] - x[0])).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn simpson_polynomial_and_trig() {
        let q = AdaptiveSimpson::new(1e-12);
        let v = q.integrate(|x| x * x * x - 2.0 * x, 0.0, 2.0).unwrap();
        assert!((v - 0.0).abs() < 1e-12);
        let v = q.integrate(f64::sin, 0.0, PI).unwrap();
        assert!((v - 2.0).abs() < 1e-11);
    }

    #[test]
    fn simpson_kinked_integrand() {
        let q = AdaptiveSimpson::new(1e-10);
        let v = q.integrate(|x: f64| (x - 0.3).abs(), 0.0, 1.0).unwrap();
        assert!((v - (0.045 + 0.245)).abs() < 1e-10);
    }

    #[test]
    fn simpson_depth_cap_is_an_error() {
        let q = AdaptiveSimpson { rel_tol: 1e-14, max_depth: 3, initial_panels: 1 };
        let r = q.integrate(|x: f64| 1.0 / (x + 1e-9).sqrt(), 0.0, 1.0);
        assert!(matches!(r, Err(Error::QuadratureNonConvergent { .. })));
    }

    #[test]
    fn gauss_legendre_weights_and_exactness() {
        for n in [1, 2, 5, 10, 20] {
            let (x, w) = gauss_legendre(n);
            assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-13);
            // exact for degree 2n-1
            let deg = 2 * n - 1;
            let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg as i32 - 1)).sum();
            let exact = if (deg - 1) % 2 == 0 { 2.0 / deg as f64 } else { 0.0 };
            assert!((s - exact).abs() < 1e-12, "n={n}");
        }
    }

    #[test]
    fn adaptive_gauss_legendre_peaked() {
        let g = GaussLegendre::new(10, 1e-12);
        let v = g.integrate_try(|x| Ok(1.0 / (1.0 + 1e-4 - x)), 0.0, 1.0).unwrap();
        let exact = ((1.0f64 + 1e-4) / 1e-4).ln();
        assert!((v - exact).abs() < 1e-10 * exact);
    }

    #[test]
    fn fit_recovers_line() {
        let xs: Vec<f64> = (0..10).map(|i| i as f64).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 0.7 * x - 3.0).collect();
        let (m, c) = linear_fit(&xs, &ys).unwrap();
        assert!((m - 0.7).abs() < 1e-14 && (c + 3.0).abs() < 1e-13);
        assert_eq!(local_slopes(&xs, &ys).len(), 9);
    }

    #[test]
    fn compensated_sum_is_accurate() {
        let v = compensated_sum([1.0, 1e100, 1.0, -1e100]);
        assert_eq!(v, 2.0);
    }
}
