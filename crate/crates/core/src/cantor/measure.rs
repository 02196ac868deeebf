use rand::Rng;
use serde::Serialize;

use super::function::CantorFunction;
use crate::error::{Error, Result};
use crate::quadrature::linear_fit;

/// Derivative measure of a truncated Cantor-Lebesgue function: mass `2^-N`
/// spread uniformly on each of the `2^N` depth-`N` intervals.
#[derive(Debug, Clone, Copy)]
pub struct CantorMeasure {
    cf: CantorFunction,
}

pub fn derivative_measure(cf: &CantorFunction) -> CantorMeasure {
    CantorMeasure { cf: *cf }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AhlforsFit {
    pub alpha_hat: f64,
    pub c_lo: f64,
    pub c_hi: f64,
    pub pairs: usize,
}

impl AhlforsFit {
    /// Two-sided constant `max(c_hi, 1/c_lo)`.
    pub fn constant(&self) -> f64 {
        self.c_hi.max(1.0 / self.c_lo)
    }
}

impl CantorMeasure {
    pub fn function(&self) -> &CantorFunction {
        &self.cf
    }

    pub fn total_mass(&self) -> f64 {
        self.cf.value(1.0) - self.cf.value(0.0)
    }

    /// `μ([lo, hi])`, clipped to `[0, 1]`.
    pub fn mass(&self, lo: f64, hi: f64) -> f64 {
        if hi <= lo {
            return 0.0;
        }
        self.cf.value(hi) - self.cf.value(lo)
    }

    pub fn ball_mass(&self, x: f64, r: f64) -> f64 {
        self.mass(x - r, x + r)
    }

    /// Support interval at level `n` with binary address `index` (bit `n-1` first).
    pub fn interval(&self, n: u32, index: u64) -> (f64, f64) {
        let p = self.cf.p();
        let mut a = 0.0;
        let mut len = 1.0;
        for k in (0..n).rev() {
            len /= p;
            if (index >> k) & 1 == 1 {
                a += len * (p - 1.0);
            }
        }
        (a, a + len)
    }

    /// The `2^n` support intervals at level `n`, left to right.
    pub fn support_intervals(&self, n: u32) -> Vec<(f64, f64)> {
        assert!(n <= 26, "level {n} too deep to enumerate");
        (0..1u64 << n).map(|i| self.interval(n, i)).collect()
    }

    /// Left endpoint of a uniformly random depth-`N` support interval.
    pub fn random_point<R: Rng>(&self, rng: &mut R) -> f64 {
        let n = self.cf.depth();
        let bits = if n >= 64 { rng.gen::<u64>() } else { rng.gen::<u64>() & ((1u64 << n) - 1) };
        self.interval(n, bits).0
    }

    /// Valid radius window `[p^(2-N), 1/4]` for Ahlfors fits.
    pub fn radius_window(&self) -> (f64, f64) {
        (self.cf.p().powi(2 - self.cf.depth() as i32), 0.25)
    }
}

/// Least-squares exponent of `log μ(B(x,r))` against `log r`, pooled over centers.
pub fn ahlfors_exponent_fit(measure: &CantorMeasure, radii: &[f64], centers: &[f64]) -> Result<AhlforsFit> {
    let (rmin, rmax) = measure.radius_window();
    if let Some(&r) = radii.iter().find(|&&r| r < rmin * (1.0 - 1e-12) || r > rmax) {
        return Err(Error::InvalidParameter(format!("radius {r} outside [{rmin:e}, {rmax}]")));
    }
    let pairs = radii.len() * centers.len();
    if pairs < 8 {
        return Err(Error::InsufficientData { needed: 8, got: pairs });
    }
    let mut xs = Vec::with_capacity(pairs);
    let mut ys = Vec::with_capacity(pairs);
    let mut raw = Vec::with_capacity(pairs);
    for &c in centers {
        for &r in radii {
            let m = measure.ball_mass(c, r);
            xs.push(r.ln());
            ys.push(m.ln());
            raw.push((r, m));
        }
    }
    let (alpha_hat, _) = linear_fit(&xs, &ys).ok_or(Error::InsufficientData { needed: 2, got: radii.len() })?;
    let (mut c_lo, mut c_hi) = (f64::INFINITY, 0.0f64);
    for (r, m) in raw {
        let q = m / r.powf(alpha_hat);
        c_lo = c_lo.min(q);
        c_hi = c_hi.max(q);
    }
    Ok(AhlforsFit { alpha_hat, c_lo, c_hi, pairs })
}

/// `count` radii in geometric progression from `lo` to `hi`.
pub fn geometric_radii(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![lo];
    }
    let q = (hi / lo).ln() / (count - 1) as f64;
    (0..count)
        .map(|i| if i + 1 == count { hi } else { lo * (q * i as f64).exp() })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn masses_of_support_intervals() {
        let cf = CantorFunction::new(3.0, 12).unwrap();
        let mu = derivative_measure(&cf);
        assert!((mu.mass(0.0, 1.0 / 3.0) - 0.5).abs() < 1e-15);
        assert_eq!(mu.total_mass(), 1.0);
        for n in 0..=6 {
            for (a, b) in mu.support_intervals(n) {
                assert!((mu.mass(a, b) - 0.5f64.powi(n as i32)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn random_points_are_in_support() {
        let cf = CantorFunction::new(4.0, 10).unwrap();
        let mu = derivative_measure(&cf);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let x = mu.random_point(&mut rng);
            // left endpoint of a depth-10 interval: mass immediately to the right
            assert!(mu.mass(x, x + 4f64.powi(-10)) > 0.99 * 2f64.powi(-10));
        }
    }

    #[test]
    fn fit_rejects_small_or_bad_input() {
        let cf = CantorFunction::new(3.0, 12).unwrap();
        let mu = derivative_measure(&cf);
        assert!(matches!(ahlfors_exponent_fit(&mu, &[0.1, 0.2], &[0.0, 1.0]), Err(Error::InsufficientData { .. })));
        assert!(matches!(ahlfors_exponent_fit(&mu, &[0.5; 8], &[0.0]), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn radii_are_geometric() {
        let r = geometric_radii(1e-3, 1e-1, 5);
        assert_eq!(r.len(), 5);
        assert!((r[2] - 1e-2).abs() < 1e-16);
        assert_eq!(r[4], 1e-1);
    }
}
