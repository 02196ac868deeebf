use serde::Serialize;

use crate::error::{Error, Result};

pub const MAX_DEPTH: u32 = 48;

/// Flat pieces are closed: arguments within this many units of roundoff of a
/// gap endpoint take the gap value.
const EDGE_EPS: f64 = 8.0 * f64::EPSILON;

/// Depth-`N` truncation of the generalized Cantor-Lebesgue function.
///
/// Each interval is cut into a left part of relative length `1/p`, an open
/// middle gap of relative length `(p-2)/p` and a right part of relative
/// length `1/p`. The function is constant on the gap, with the midpoint of
/// its values at the two ends, and linear on the depth-`N` intervals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CantorFunction {
    p: f64,
    depth: u32,
    alpha: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PieceKind {
    Flat { value: f64 },
    Slope { from: f64, to: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Piece {
    pub a: f64,
    pub b: f64,
    /// Generation of a flat piece; `depth` for slope pieces.
    pub generation: u32,
    #[serde(flatten)]
    pub kind: PieceKind,
}

impl Piece {
    pub fn len(&self) -> f64 {
        self.b - self.a
    }

    pub fn is_empty(&self) -> bool {
        self.b <= self.a
    }

    pub fn is_flat(&self) -> bool {
        matches!(self.kind, PieceKind::Flat { .. })
    }
}

/// A removed open interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Gap {
    pub a: f64,
    pub b: f64,
    pub generation: u32,
    pub value: f64,
}

impl Gap {
    pub fn len(&self) -> f64 {
        self.b - self.a
    }

    pub fn is_empty(&self) -> bool {
        self.b <= self.a
    }
}

impl CantorFunction {
    pub fn new(p: f64, depth: u32) -> Result<Self> {
        if !(p > 2.0 + 1e-9 && p.is_finite()) {
            return Err(Error::InvalidParameter(format!("p = {p} must exceed 2")));
        }
        if !(1..=MAX_DEPTH).contains(&depth) {
            return Err(Error::InvalidParameter(format!("depth {depth} outside 1..={MAX_DEPTH}")));
        }
        Ok(Self { p, depth, alpha: std::f64::consts::LN_2 / p.ln() })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    /// `log 2 / log p`.
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Uniform distance to the limit function.
    pub fn truncation_bound(&self) -> f64 {
        2f64.powi(1 - self.depth as i32) * (self.p - 2.0) / self.p
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::OutOfDomain(t));
        }
        Ok(self.value(t))
    }

    /// Evaluation with the argument clamped to `[0, 1]`.
    pub fn value(&self, t: f64) -> f64 {
        let p = self.p;
        let lo = 1.0 / p;
        let hi = (p - 1.0) / p;
        let mut u = t.clamp(0.0, 1.0);
        let mut base = 0.0;
        let mut scale = 1.0;
        for _ in 0..self.depth {
            scale *= 0.5;
            if u >= lo - EDGE_EPS && u <= hi + EDGE_EPS {
                return base + scale;
            }
            if u < lo {
                u *= p;
            } else {
                base += scale;
                u = u * p - (p - 1.0);
            }
            u = u.clamp(0.0, 1.0);
        }
        base + scale * u
    }

    /// Pieces in increasing order of position, generated lazily.
    pub fn pieces(&self) -> Pieces {
        Pieces { p: self.p, depth: self.depth, stack: vec![Frame::Node { a: 0.0, len: 1.0, base: 0.0, level: 0 }] }
    }

    pub fn piece_count(&self) -> u64 {
        (1u64 << (self.depth + 1)) - 1
    }

    /// Removed intervals ordered by decreasing length, then by position.
    pub fn gap_list(&self) -> Vec<Gap> {
        let p = self.p;
        let mut level: Vec<(f64, f64, f64)> = vec![(0.0, 1.0, 0.0)];
        let mut gaps = Vec::with_capacity((1usize << self.depth.min(30)) - 1);
        for n in 1..=self.depth {
            let half = 0.5f64.powi(n as i32);
            let mut next = Vec::with_capacity(level.len() * 2);
            for &(a, len, base) in &level {
                let l = len / p;
                let ga = a + l;
                let gb = a + len - l;
                gaps.push(Gap { a: ga, b: gb, generation: n, value: base + half });
                if n < self.depth {
                    next.push((a, l, base));
                    next.push((gb, l, base + half));
                }
            }
            level = next;
        }
        gaps
    }

    /// Length of a generation-`n` gap.
    pub fn gap_length(&self, generation: u32) -> f64 {
        (self.p - 2.0) * self.p.powi(-(generation as i32))
    }

    /// Number of gaps at generation `n`.
    pub fn gap_count(generation: u32) -> u64 {
        1u64 << (generation - 1)
    }

    /// Largest `|f(x)-f(y)| / |x-y|^alpha` over the given pairs.
    pub fn holder_constant(&self, pairs: &[(f64, f64)]) -> f64 {
        pairs
            .iter()
            .filter(|(x, y)| x != y)
            .map(|&(x, y)| (self.value(x) - self.value(y)).abs() / (x - y).abs().powf(self.alpha))
            .fold(0.0, f64::max)
    }
}

enum Frame {
    Node { a: f64, len: f64, base: f64, level: u32 },
    Leaf(Piece),
}

/// Depth-first iterator over the pieces of a [`CantorFunction`].
pub struct Pieces {
    p: f64,
    depth: u32,
    stack: Vec<Frame>,
}

impl Iterator for Pieces {
    type Item = Piece;

    fn next(&mut self) -> Option<Piece> {
        loop {
            match self.stack.pop()? {
                Frame::Leaf(piece) => return Some(piece),
                Frame::Node { a, len, base, level } => {
                    let width = 0.5f64.powi(level as i32);
                    if level == self.depth {
                        return Some(Piece {
                            a,
                            b: a + len,
                            generation: level,
                            kind: PieceKind::Slope { from: base, to: base + width },
                        });
                    }
                    let l = len / self.p;
                    let half = 0.5 * width;
                    let ga = a + l;
                    let gb = a + len - l;
                    self.stack.push(Frame::Node { a: gb, len: l, base: base + half, level: level + 1 });
                    self.stack.push(Frame::Leaf(Piece {
                        a: ga,
                        b: gb,
                        generation: level + 1,
                        kind: PieceKind::Flat { value: base + half },
                    }));
                    self.stack.push(Frame::Node { a, len: l, base, level: level + 1 });
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_parameters() {
        assert!(CantorFunction::new(2.0, 5).is_err());
        assert!(CantorFunction::new(3.0, 0).is_err());
        assert!(CantorFunction::new(3.0, 49).is_err());
        assert!(CantorFunction::new(f64::NAN, 5).is_err());
        assert!(CantorFunction::new(3.0, 48).is_ok());
    }

    #[test]
    fn gap_values_for_p3() {
        for n in 1..=12 {
            let f = CantorFunction::new(3.0, n).unwrap();
            assert_eq!(f.eval(1.0 / 3.0).unwrap(), 0.5);
            assert_eq!(f.eval(2.0 / 3.0).unwrap(), 0.5);
            if n >= 2 {
                assert_eq!(f.eval(1.0 / 9.0).unwrap(), 0.25);
            }
        }
    }

    #[test]
    fn endpoints_and_midpoint() {
        for p in [2.1, 2.5, 3.0, 4.0, 7.5] {
            for n in [1, 5, 20, 48] {
                let f = CantorFunction::new(p, n).unwrap();
                assert_eq!(f.eval(0.0).unwrap(), 0.0);
                assert_eq!(f.eval(1.0).unwrap(), 1.0);
                assert_eq!(f.eval(0.5).unwrap(), 0.5);
            }
        }
    }

    #[test]
    fn out_of_domain() {
        let f = CantorFunction::new(3.0, 4).unwrap();
        assert!(matches!(f.eval(-0.1), Err(Error::OutOfDomain(_))));
        assert!(matches!(f.eval(1.5), Err(Error::OutOfDomain(_))));
    }

    #[test]
    fn flat_piece_at_generation_two() {
        let f = CantorFunction::new(3.0, 10).unwrap();
        let v = f.eval(0.15).unwrap();
        assert!((v - 0.25).abs() <= 2f64.powi(-9));
        // 0.11 sits just left of 1/9, on the rising part below that flat
        let v = f.eval(0.11).unwrap();
        assert!((v - 61.0 / 256.0).abs() <= 2f64.powi(-9));
    }

    #[test]
    fn pieces_tile_the_unit_interval() {
        let f = CantorFunction::new(3.0, 6).unwrap();
        let pieces: Vec<Piece> = f.pieces().collect();
        assert_eq!(pieces.len() as u64, f.piece_count());
        assert_eq!(pieces[0].a, 0.0);
        assert!((pieces.last().unwrap().b - 1.0).abs() < 1e-15);
        let mut last_value = 0.0;
        for w in pieces.windows(2) {
            assert!((w[0].b - w[1].a).abs() < 1e-15);
        }
        for piece in &pieces {
            match piece.kind {
                PieceKind::Flat { value } => {
                    assert_eq!(value, last_value);
                    // odd dyadic numerator at its generation
                    let k = value * 2f64.powi(piece.generation as i32);
                    assert_eq!(k.fract(), 0.0);
                    assert_eq!(k as u64 % 2, 1);
                    assert!((piece.len() - f.gap_length(piece.generation)).abs() < 1e-15);
                }
                PieceKind::Slope { from, to } => {
                    assert_eq!(from, last_value);
                    assert_eq!(to - from, 2f64.powi(-6));
                    assert!((piece.len() - 3f64.powi(-6)).abs() < 1e-16);
                    last_value = to;
                }
            }
        }
        assert_eq!(last_value, 1.0);
    }

    #[test]
    fn gap_list_order_and_counts() {
        let f = CantorFunction::new(3.0, 2).unwrap();
        let g = f.gap_list();
        assert_eq!(g.len(), 3);
        assert!((g[0].a - 1.0 / 3.0).abs() < 1e-15 && (g[0].b - 2.0 / 3.0).abs() < 1e-15);
        assert!((g[1].a - 1.0 / 9.0).abs() < 1e-15 && (g[1].b - 2.0 / 9.0).abs() < 1e-15);
        assert!((g[2].a - 7.0 / 9.0).abs() < 1e-15 && (g[2].b - 8.0 / 9.0).abs() < 1e-15);

        let f = CantorFunction::new(4.0, 10).unwrap();
        let g = f.gap_list();
        for n in 1..=10 {
            let c = g.iter().filter(|x| x.generation == n).count() as u64;
            assert_eq!(c, CantorFunction::gap_count(n));
        }
        let total: f64 = g.iter().map(Gap::len).sum();
        assert!((total - (1.0 - 0.5f64.powi(10))).abs() < 1e-13);
        for w in g.windows(2) {
            assert!(w[0].len() >= w[1].len() - 1e-15);
            if w[0].generation == w[1].generation {
                assert!(w[0].b < w[1].a);
            }
        }
    }

    #[test]
    fn eval_matches_pieces() {
        let f = CantorFunction::new(2.7, 7).unwrap();
        for piece in f.pieces() {
            let m = 0.5 * (piece.a + piece.b);
            let expect = match piece.kind {
                PieceKind::Flat { value } => value,
                PieceKind::Slope { from, to } => 0.5 * (from + to),
            };
            assert!((f.value(m) - expect).abs() < 1e-12, "{piece:?}");
        }
    }
}
