//! Closed-form gap series for the length of Hilbert circles in Cantor
//! domains, and its explicit two-sided bounds.

use std::f64::consts::LN_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How many gaps a generation contributes to the series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GapCountRule {
    /// `2^{N-1}`, the count produced by the construction.
    Actual,
    /// `2^N`.
    Paper,
}

impl GapCountRule {
    pub fn count(self, generation: u32) -> f64 {
        match self {
            GapCountRule::Actual => 2f64.powi(generation as i32 - 1),
            GapCountRule::Paper => 2f64.powi(generation as i32),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesParams {
    pub p: f64,
    pub alpha: f64,
    pub beta: f64,
    pub rule: GapCountRule,
    /// Multiplies each gap length inside the logarithm.
    pub prefactor: f64,
    /// Count both tangent directions (doubles every term).
    pub two_sided: bool,
    /// Stop after this generation instead of at the roundoff tail.
    pub max_generation: Option<u32>,
}

impl SeriesParams {
    pub fn new(p: f64, rule: GapCountRule) -> Result<Self> {
        if !(p > 2.0 && p.is_finite()) {
            return Err(Error::InvalidParameter(format!("p = {p} must exceed 2")));
        }
        let lp = p.ln();
        let alpha = LN_2 / lp;
        Ok(Self {
            p,
            alpha,
            beta: 1.0 / ((alpha + 1.0) * lp),
            rule,
            prefactor: 1.0,
            two_sided: false,
            max_generation: None,
        })
    }

    pub fn with_prefactor(mut self, c: f64) -> Result<Self> {
        if !(c >= 1.0 && c.is_finite()) {
            return Err(Error::InvalidParameter(format!("prefactor {c} must be at least 1")));
        }
        self.prefactor = c;
        Ok(self)
    }

    pub fn two_sided(mut self, yes: bool) -> Self {
        self.two_sided = yes;
        self
    }

    pub fn truncated(mut self, generation: u32) -> Self {
        self.max_generation = Some(generation);
        self
    }

    /// Entropy predicted by the series, `2α / (α + 1)`.
    pub fn rate(&self) -> f64 {
        2.0 * self.alpha / (self.alpha + 1.0)
    }

    /// The exponent `x = 2Rβ`, so that `e^{2R/(α+1)} = p^x`.
    pub fn exponent(&self, radius: f64) -> f64 {
        2.0 * radius * self.beta
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesValue {
    pub value: f64,
    /// Last generation summed.
    pub last_generation: u32,
    /// Upper bound on the omitted tail.
    pub tail_bound: f64,
}

const REL_CUTOFF: f64 = 1e-16;

/// `Σ_N count(N) · log(1 + C(p-2) p^{x-N})` with `x = 2Rβ`.
pub fn cantor_series_length(params: &SeriesParams, radius: f64) -> SeriesValue {
    let SeriesParams { p, rule, prefactor, two_sided, max_generation, .. } = *params;
    let x = params.exponent(radius);
    let lp = p.ln();
    let sides = if two_sided { 2.0 } else { 1.0 };
    let mut sum = 0.0;
    let mut n = 1u32;
    loop {
        let y = prefactor * (p - 2.0) * ((x - n as f64) * lp).exp();
        let term = sides * rule.count(n) * y.ln_1p();
        sum += term;
        let next_linear = sides * rule.count(n + 1) * prefactor * (p - 2.0) * ((x - (n + 1) as f64) * lp).exp();
        let tail = next_linear / (1.0 - 2.0 / p);
        if let Some(m) = max_generation {
            if n >= m {
                return SeriesValue { value: sum, last_generation: n, tail_bound: tail };
            }
        } else if n as f64 > x && tail < REL_CUTOFF * sum {
            return SeriesValue { value: sum, last_generation: n, tail_bound: tail };
        }
        n += 1;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesBounds {
    pub lower: f64,
    pub upper: f64,
    /// Upper bound with the geometric tail summed in full and `log⁺(p-2)`.
    pub upper_corrected: f64,
}

/// Explicit bounds: `lower = 2^{x+2}/p²`,
/// `upper = (p-2)2^x + 2^{⌊x⌋+1}(1 + x log p + log(p-2))`.
pub fn series_bounds(params: &SeriesParams, radius: f64) -> SeriesBounds {
    let p = params.p;
    let x = params.exponent(radius);
    let lp = p.ln();
    let log_pm2 = (p - 2.0).ln();
    let head = 2f64.powf(x.floor() + 1.0);
    let lower = 2f64.powf(x + 2.0) / (p * p);
    let upper = (p - 2.0) * 2f64.powf(x) + head * (1.0 + x * lp + log_pm2);
    let n0 = x.ceil().max(1.0);
    let tail = (p - 2.0) * (x * lp).exp() * (2.0 / p).powf(n0) / (1.0 - 2.0 / p);
    let upper_corrected = tail + head * (1.0 + x * lp + log_pm2.max(0.0));
    SeriesBounds { lower, upper, upper_corrected }
}

/// `Σ_j log(1 + C ℓ_j e^{2R/(α+1)})` over gap lengths sorted in decreasing order.
pub fn general_gap_series(gap_lengths: &[f64], alpha: f64, radius: f64, prefactor: f64) -> Result<f64> {
    if !(prefactor >= 1.0) {
        return Err(Error::InvalidParameter(format!("prefactor {prefactor} must be at least 1")));
    }
    if gap_lengths.windows(2).any(|w| w[1] > w[0] * (1.0 + 1e-12)) {
        return Err(Error::InvalidParameter("gap lengths must be sorted in decreasing order".into()));
    }
    let scale = prefactor * (2.0 * radius / (alpha + 1.0)).exp();
    let mut remaining: f64 = gap_lengths.iter().sum();
    let mut sum = 0.0;
    for &len in gap_lengths {
        if scale * remaining < REL_CUTOFF * sum {
            break;
        }
        sum += (scale * len).ln_1p();
        remaining -= len;
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn beta_identity() {
        for p in [2.1, 2.5, 3.0, 4.0, 6.0, 10.0] {
            let s = SeriesParams::new(p, GapCountRule::Paper).unwrap();
            assert!((s.beta - 1.0 / (LN_2 + p.ln())).abs() < 1e-14);
        }
        assert!(SeriesParams::new(2.0, GapCountRule::Paper).is_err());
    }

    #[test]
    fn radius_zero_value() {
        let s = SeriesParams::new(3.0, GapCountRule::Paper).unwrap();
        let v = cantor_series_length(&s, 0.0).value;
        // direct: Σ 2^N log(1 + 3^{-N})
        let direct: f64 = (1..200).map(|n| 2f64.powi(n) * (3f64.powi(-n)).ln_1p()).sum();
        assert!((v - direct).abs() < 1e-13 * direct);
        let b = series_bounds(&s, 0.0);
        assert!((b.lower - 4.0 / 9.0).abs() < 1e-16);
        assert!(b.lower <= v);
    }

    #[test]
    fn actual_count_is_half_of_doubled_count() {
        let paper = SeriesParams::new(3.0, GapCountRule::Paper).unwrap();
        let actual = SeriesParams::new(3.0, GapCountRule::Actual).unwrap();
        for r in [0.0, 1.0, 5.0, 20.0] {
            let a = cantor_series_length(&actual, r).value;
            let b = cantor_series_length(&paper, r).value;
            assert!(a < b);
            assert!((2.0 * a - b).abs() < 1e-13 * b);
        }
    }

    #[test]
    fn lower_bound_at_r10() {
        let s = SeriesParams::new(3.0, GapCountRule::Paper).unwrap();
        let x = s.exponent(10.0);
        assert!((x - 11.162212531).abs() < 1e-8);
        let b = series_bounds(&s, 10.0);
        assert!((b.lower - 2f64.powf(x + 2.0) / 9.0).abs() < 1e-10);
        assert!((b.lower - 1018.5).abs() < 0.1);
        let v = cantor_series_length(&s, 10.0).value;
        assert!(b.lower <= v && v <= b.upper);
    }

    #[test]
    fn corrected_upper_holds_where_original_does_not() {
        let s = SeriesParams::new(2.5, GapCountRule::Paper).unwrap();
        let v = cantor_series_length(&s, 0.5).value;
        let b = series_bounds(&s, 0.5);
        assert!(v > b.upper);
        for i in 0..=600 {
            let r = i as f64 * 0.1;
            let v = cantor_series_length(&s, r).value;
            assert!(v <= series_bounds(&s, r).upper_corrected, "R = {r}");
        }
    }

    #[test]
    fn gap_series_prefactor_and_cutoff() {
        let lens: Vec<f64> = (1..=20).flat_map(|n| std::iter::repeat(3f64.powi(-n)).take(1 << (n - 1))).collect();
        let a = LN_2 / 3f64.ln();
        let v1 = general_gap_series(&lens, a, 3.0, 1.0).unwrap();
        let v5 = general_gap_series(&lens, a, 3.0, 5.0).unwrap();
        let active = lens.len() as f64;
        assert!(v5 >= v1 && v5 - v1 <= active * 5f64.ln());
        assert!(general_gap_series(&lens, a, 3.0, 0.5).is_err());
        let mut unsorted = lens.clone();
        unsorted.swap(0, 5);
        assert!(general_gap_series(&unsorted, a, 3.0, 1.0).is_err());
    }
}
