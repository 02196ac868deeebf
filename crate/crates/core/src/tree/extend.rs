use serde::Serialize;

use crate::error::{Error, Result};

/// Piecewise-linear monotone map of `[0, 1]` through the given knots.
#[derive(Debug, Clone, Serialize)]
pub struct LinearExtension {
    knots: Vec<(f64, f64)>,
}

/// Extend a map known on a closed set to `[0, 1]`, linearly across each gap.
///
/// `map` holds samples `(x, f(x))` on the set; it must contain `0`, `1` and
/// both endpoints of every gap in `gaps`.
pub fn extend_linear(map: &[(f64, f64)], gaps: &[(f64, f64)]) -> Result<LinearExtension> {
    let mut knots = map.to_vec();
    knots.sort_by(|a, b| a.0.total_cmp(&b.0));
    knots.dedup_by(|a, b| a.0 == b.0 && a.1 == b.1);
    let has = |x: f64| knots.binary_search_by(|k| k.0.total_cmp(&x)).is_ok();
    for x in [0.0, 1.0] {
        if !has(x) {
            return Err(Error::InvalidParameter(format!("map must be given at {x}")));
        }
    }
    if let Some(&(a, b)) = gaps.iter().find(|&&(a, b)| !has(a) || !has(b)) {
        return Err(Error::InvalidParameter(format!("map must be given at both ends of the gap ({a}, {b})")));
    }
    if let Some(w) = knots.windows(2).find(|w| !(w[1].0 > w[0].0 && w[1].1 > w[0].1)) {
        return Err(Error::NotOrderPreserving(w[1].0));
    }
    Ok(LinearExtension { knots })
}

impl LinearExtension {
    pub fn knots(&self) -> &[(f64, f64)] {
        &self.knots
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::OutOfDomain(x));
        }
        let i = self.knots.partition_point(|k| k.0 < x);
        if i < self.knots.len() && self.knots[i].0 == x {
            return Ok(self.knots[i].1);
        }
        let (x0, y0) = self.knots[i - 1];
        let (x1, y1) = self.knots[i];
        Ok(y0 + (y1 - y0) * (x - x0) / (x1 - x0))
    }

    /// Extreme slopes between consecutive knots, `(min, max)`; these bound
    /// the bi-Lipschitz constants of the extension.
    pub fn slope_range(&self) -> (f64, f64) {
        self.knots
            .windows(2)
            .map(|w| (w[1].1 - w[0].1) / (w[1].0 - w[0].0))
            .fold((f64::INFINITY, 0.0), |(lo, hi), s| (lo.min(s), hi.max(s)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_extends_to_identity() {
        let pts = [0.0, 1.0 / 9.0, 2.0 / 9.0, 1.0 / 3.0, 2.0 / 3.0, 7.0 / 9.0, 8.0 / 9.0, 1.0];
        let map: Vec<(f64, f64)> = pts.iter().map(|&x| (x, x)).collect();
        let gaps = [(1.0 / 3.0, 2.0 / 3.0), (1.0 / 9.0, 2.0 / 9.0), (7.0 / 9.0, 8.0 / 9.0)];
        let e = extend_linear(&map, &gaps).unwrap();
        for i in 0..=100 {
            let x = i as f64 / 100.0;
            assert!((e.eval(x).unwrap() - x).abs() < 1e-15);
        }
        assert_eq!(e.slope_range(), (1.0, 1.0));
    }

    #[test]
    fn rejects_constant_and_incomplete_maps() {
        let gaps = [(1.0 / 3.0, 2.0 / 3.0)];
        let constant: Vec<(f64, f64)> = [0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0].iter().map(|&x| (x, 0.5)).collect();
        assert!(matches!(extend_linear(&constant, &gaps), Err(Error::NotOrderPreserving(_))));
        let partial = [(0.0, 0.0), (1.0, 1.0)];
        assert!(matches!(extend_linear(&partial, &gaps), Err(Error::InvalidParameter(_))));
    }
}
