use std::f64::consts::PI;

use super::function::{CantorFunction, PieceKind};
use crate::error::{Error, Result};
use crate::geometry::{Point2, Polygon};
use crate::quadrature::neumaier_add;

/// Deepest truncation for which the boundary polygon is materialized.
pub const MAX_DOMAIN_DEPTH: u32 = 22;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeInfo {
    /// Turning value `f` at the start of the edge, in `[0, 2)`.
    pub value: f64,
    /// Length of the parameter interval the edge replaces.
    pub param_len: f64,
    pub flat: bool,
}

/// Boundary of the convex domain whose unit-speed half-curve turns by
/// `π·f`, closed by its point reflection about the midpoint of the chord.
///
/// Flat pieces of `f` are exact straight segments; residual depth-`N`
/// intervals are replaced by the chord of the arc they generate.
#[derive(Debug, Clone)]
pub struct CantorBoundary {
    cf: CantorFunction,
    polygon: Polygon,
    info: Vec<EdgeInfo>,
    center: Point2,
    half_end: Point2,
}

impl CantorBoundary {
    pub fn function(&self) -> &CantorFunction {
        &self.cf
    }

    pub fn polygon(&self) -> &Polygon {
        &self.polygon
    }

    /// Symmetry center `(γ(0) + γ(1)) / 2`.
    pub fn center(&self) -> Point2 {
        self.center
    }

    /// `γ(1)` of the generated half-curve; `γ(0)` is the origin.
    pub fn half_curve_end(&self) -> Point2 {
        self.half_end
    }

    /// Per-edge data for the first half; the second half repeats it rotated by π.
    pub fn edge_info(&self, edge: usize) -> EdgeInfo {
        let h = self.info.len();
        if edge < h {
            self.info[edge]
        } else {
            let mut e = self.info[edge - h];
            e.value += 1.0;
            e
        }
    }

    pub fn half_edge_count(&self) -> usize {
        self.info.len()
    }

    /// Total length of the exact flat segments of one half.
    pub fn flat_length(&self) -> f64 {
        let edges = self.polygon.edges();
        self.info.iter().zip(edges).filter(|(i, _)| i.flat).map(|(_, e)| e.norm()).sum()
    }

    /// Total length of the residual chords of one half.
    pub fn chord_length(&self) -> f64 {
        let edges = self.polygon.edges();
        self.info.iter().zip(edges).filter(|(i, _)| !i.flat).map(|(_, e)| e.norm()).sum()
    }

    /// Parameter length covered by one half (1 up to roundoff).
    pub fn half_length(&self) -> f64 {
        self.info.iter().map(|i| i.param_len).sum()
    }
}

/// Edge replacing the arc `∫ e^{iπ(c + δs/ℓ)} ds` over a parameter interval of length `len`.
fn chord(len: f64, c: f64, delta: f64) -> Point2 {
    let x = PI * delta;
    let shrink = if x == 0.0 { 1.0 } else { 2.0 * (0.5 * x).sin() / x };
    Point2::polar(len * shrink, PI * (c + 0.5 * delta))
}

pub fn build_cantor_domain(cf: &CantorFunction) -> Result<CantorBoundary> {
    if cf.depth() > MAX_DOMAIN_DEPTH {
        return Err(Error::InvalidParameter(format!(
            "domain depth {} exceeds {MAX_DOMAIN_DEPTH}",
            cf.depth()
        )));
    }
    let m = cf.piece_count() as usize;
    let mut verts = Vec::with_capacity(2 * m);
    let mut edges = Vec::with_capacity(2 * m);
    let mut info = Vec::with_capacity(m);
    let (mut x, mut cx, mut y, mut cy) = (0.0, 0.0, 0.0, 0.0);
    for piece in cf.pieces() {
        let len = piece.len();
        let (e, value, flat) = match piece.kind {
            PieceKind::Flat { value } => (Point2::polar(len, PI * value), value, true),
            PieceKind::Slope { from, to } => (chord(len, from, to - from), from, false),
        };
        verts.push(Point2::new(x + cx, y + cy));
        edges.push(e);
        info.push(EdgeInfo { value, param_len: len, flat });
        neumaier_add(&mut x, &mut cx, e.x);
        neumaier_add(&mut y, &mut cy, e.y);
    }
    let half_end = Point2::new(x + cx, y + cy);
    let center = half_end * 0.5;
    for i in 0..m {
        verts.push(half_end - verts[i]);
        edges.push(-edges[i]);
    }
    let polygon = Polygon::from_parts(verts, edges).map_err(|e| match e {
        Error::NonConvex(i, _, _) => Error::NonConvexOutput(i),
        other => other,
    })?;
    Ok(CantorBoundary { cf: *cf, polygon, info, center, half_end })
}
