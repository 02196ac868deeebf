use serde::Serialize;

use crate::cantor::CantorFunction;
use crate::error::{Error, Result};

/// Resolution of sets given by floating-point gaps.
const FLOAT_TICKS_LOG2: i32 = 100;

/// Coordinates are integer ticks over a fixed denominator, so lengths and
/// comparisons are exact.
pub type Tick = u128;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TickGap {
    pub a: Tick,
    pub b: Tick,
}

impl TickGap {
    pub fn len(&self) -> Tick {
        self.b - self.a
    }

    pub fn is_empty(&self) -> bool {
        self.a == self.b
    }
}

/// A closed subset of `[0, 1]` containing both endpoints, given by its
/// removed open intervals in decreasing order of length.
#[derive(Debug, Clone, Serialize)]
pub struct OrderedRegularSet {
    denominator: Tick,
    gaps: Vec<TickGap>,
    /// `Some(p)` for the standard middle set with integer ratio `p`.
    standard: Option<u32>,
}

impl OrderedRegularSet {
    /// Standard Cantor set `C_p` truncated after `depth` generations.
    ///
    /// Integer `p` gives exact tick coordinates over `p^depth`; other values
    /// go through floating-point gaps.
    pub fn standard(p: f64, depth: u32) -> Result<Self> {
        if p.fract() == 0.0 && p >= 3.0 {
            let q = p as u32;
            if let Some(denominator) = (q as Tick).checked_pow(depth) {
                return Ok(Self::standard_exact(q, depth, denominator));
            }
        }
        let cf = CantorFunction::new(p, depth)?;
        let gaps: Vec<(f64, f64)> = cf.gap_list().iter().map(|g| (g.a, g.b)).collect();
        Self::from_gaps(&gaps)
    }

    fn standard_exact(q: u32, depth: u32, denominator: Tick) -> Self {
        let q = q as Tick;
        let mut level = vec![(0, denominator)];
        let mut gaps = Vec::new();
        for _ in 0..depth {
            let mut next = Vec::with_capacity(level.len() * 2);
            for &(lo, len) in &level {
                let part = len / q;
                gaps.push(TickGap { a: lo + part, b: lo + len - part });
                next.push((lo, part));
                next.push((lo + len - part, part));
            }
            level = next;
        }
        Self { denominator, gaps, standard: Some(q as u32) }
    }

    /// Set with the given gaps, sorted by decreasing length with ties broken
    /// by position. Lengths within a relative `1e-15` count as ties.
    pub fn from_gaps(gaps: &[(f64, f64)]) -> Result<Self> {
        let denominator: Tick = 1 << FLOAT_TICKS_LOG2;
        let scale = 2f64.powi(FLOAT_TICKS_LOG2);
        let mut ticks = Vec::with_capacity(gaps.len());
        for &(a, b) in gaps {
            if !(a > 0.0 && b < 1.0 && a < b) {
                return Err(Error::InvalidParameter(format!("gap ({a}, {b}) must satisfy 0 < a < b < 1")));
            }
            ticks.push((TickGap { a: (a * scale).round() as Tick, b: (b * scale).round() as Tick }, b - a));
        }
        let mut by_pos: Vec<TickGap> = ticks.iter().map(|t| t.0).collect();
        by_pos.sort_by_key(|g| g.a);
        if by_pos.windows(2).any(|w| w[1].a < w[0].b) {
            return Err(Error::InvalidParameter("gaps overlap".into()));
        }
        ticks.sort_by(|x, y| y.1.total_cmp(&x.1).then(x.0.a.cmp(&y.0.a)));
        let mut sorted = Vec::with_capacity(ticks.len());
        let mut i = 0;
        while i < ticks.len() {
            let lead = ticks[i].1;
            let mut j = i + 1;
            while j < ticks.len() && lead - ticks[j].1 <= 1e-15 * lead {
                j += 1;
            }
            let mut run: Vec<TickGap> = ticks[i..j].iter().map(|t| t.0).collect();
            run.sort_by_key(|g| g.a);
            sorted.extend(run);
            i = j;
        }
        Ok(Self { denominator, gaps: sorted, standard: None })
    }

    pub fn denominator(&self) -> Tick {
        self.denominator
    }

    pub fn gaps(&self) -> &[TickGap] {
        &self.gaps
    }

    pub fn standard_ratio(&self) -> Option<u32> {
        self.standard
    }

    pub fn to_real(&self, t: Tick) -> f64 {
        t as f64 / self.denominator as f64
    }

    /// Nearest tick; `None` outside `[0, 1]`.
    pub fn to_ticks(&self, x: f64) -> Option<Tick> {
        if !(0.0..=1.0).contains(&x) {
            return None;
        }
        Some(((x * self.denominator as f64).round() as Tick).min(self.denominator))
    }

    pub fn gap_real(&self, g: &TickGap) -> (f64, f64) {
        (self.to_real(g.a), self.to_real(g.b))
    }

    /// The `k + 1` closed intervals left after removing the first `k` gaps, in order.
    pub fn intervals(&self, k: usize) -> Result<Vec<(Tick, Tick)>> {
        if k > self.gaps.len() {
            return Err(Error::InsufficientGaps { needed: k, available: self.gaps.len() });
        }
        let mut removed: Vec<TickGap> = self.gaps[..k].to_vec();
        removed.sort_by_key(|g| g.a);
        let mut out = Vec::with_capacity(k + 1);
        let mut lo = 0;
        for g in removed {
            out.push((lo, g.a));
            lo = g.b;
        }
        out.push((lo, self.denominator));
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_c3_ticks() {
        let s = OrderedRegularSet::standard(3.0, 3).unwrap();
        assert_eq!(s.denominator(), 27);
        assert_eq!(s.gaps().len(), 7);
        assert_eq!(s.gaps()[0], TickGap { a: 9, b: 18 });
        assert_eq!(s.gaps()[1], TickGap { a: 3, b: 6 });
        assert_eq!(s.gaps()[2], TickGap { a: 21, b: 24 });
        let iv = s.intervals(3).unwrap();
        assert_eq!(iv, vec![(0, 3), (6, 9), (18, 21), (24, 27)]);
        assert!(matches!(s.intervals(8), Err(Error::InsufficientGaps { needed: 8, available: 7 })));
    }

    #[test]
    fn float_gaps_sorted_with_ties_by_position() {
        let s = OrderedRegularSet::from_gaps(&[(0.7, 0.8), (0.1, 0.2), (0.4, 0.6)]).unwrap();
        let g: Vec<(f64, f64)> = s.gaps().iter().map(|g| s.gap_real(g)).collect();
        assert!((g[0].0 - 0.4).abs() < 1e-15);
        assert!((g[1].0 - 0.1).abs() < 1e-15 && (g[2].0 - 0.7).abs() < 1e-15);
        assert!(OrderedRegularSet::from_gaps(&[(0.1, 0.5), (0.4, 0.6)]).is_err());
        assert!(OrderedRegularSet::from_gaps(&[(0.0, 0.5)]).is_err());
    }

    #[test]
    fn non_integer_ratio_uses_floats() {
        let s = OrderedRegularSet::standard(2.5, 4).unwrap();
        assert!(s.standard_ratio().is_none());
        assert_eq!(s.gaps().len(), 15);
        let (a, b) = s.gap_real(&s.gaps()[0]);
        assert!((a - 0.4).abs() < 1e-15 && (b - 0.6).abs() < 1e-15);
    }
}
