//! Closed-form Finsler unit balls inside convex polygons.
//!
//! For a direction `d` whose forward ray leaves through edge `j` and whose
//! backward ray leaves through edge `k`, the reciprocal unit-ball radius is
//! linear in `d`: `1/r(d) = ⟨w, d⟩` with `w = (n_j/h_j - n_k/h_k)/2`, where
//! `h` is the distance from the point to the edge line. Between consecutive
//! vertex directions the ball boundary is therefore a straight segment and
//! the ball is a polygon.

use std::cmp::Ordering;

use crate::geometry::Point2;

#[derive(Clone, Copy)]
struct Break {
    dir: Point2,
    vertex: usize,
    forward: bool,
}

fn upper(d: Point2) -> bool {
    d.y > 0.0 || (d.y == 0.0 && d.x > 0.0)
}

fn by_angle(a: &Point2, b: &Point2) -> Ordering {
    match (upper(*a), upper(*b)) {
        (true, false) => Ordering::Less,
        (false, true) => Ordering::Greater,
        _ => 0.0.partial_cmp(&a.cross(*b)).unwrap_or(Ordering::Equal),
    }
}

/// Area of the Finsler unit ball at `x` inside the counterclockwise convex polygon `verts`.
pub fn polygon_unit_ball_area(verts: &[Point2], x: Point2) -> f64 {
    let n = verts.len();
    let mut scaled = Vec::with_capacity(n);
    for j in 0..n {
        let e = verts[(j + 1) % n] - verts[j];
        let nrm = Point2::new(e.y, -e.x) / e.norm();
        let h = nrm.dot(verts[j] - x);
        scaled.push(nrm / h);
    }
    let mut breaks = Vec::with_capacity(2 * n);
    for (i, &v) in verts.iter().enumerate() {
        let d = v - x;
        breaks.push(Break { dir: d, vertex: i, forward: true });
        breaks.push(Break { dir: -d, vertex: i, forward: false });
    }
    breaks.sort_by(|a, b| by_angle(&a.dir, &b.dir));
    let (mut j, mut k) = (0, 0);
    for b in &breaks {
        if b.forward {
            j = b.vertex;
        } else {
            k = b.vertex;
        }
    }
    let m = breaks.len();
    let mut area = 0.0;
    for idx in 0..m {
        let b = breaks[idx];
        if b.forward {
            j = b.vertex;
        } else {
            k = b.vertex;
        }
        let d1 = b.dir;
        let d2 = breaks[(idx + 1) % m].dir;
        let c = d1.cross(d2);
        if c <= 0.0 {
            continue;
        }
        let w = (scaled[j] - scaled[k]) * 0.5;
        area += 0.5 * c / (w.dot(d1) * w.dot(d2));
    }
    area
}

/// Busemann density `π / Area(B_x)` inside a convex polygon.
pub fn polygon_busemann_density(verts: &[Point2], x: Point2) -> f64 {
    std::f64::consts::PI / polygon_unit_ball_area(verts, x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> Vec<Point2> {
        vec![Point2::new(-1.0, -1.0), Point2::new(1.0, -1.0), Point2::new(1.0, 1.0), Point2::new(-1.0, 1.0)]
    }

    #[test]
    fn center_of_square_ball_is_the_square() {
        assert!((polygon_unit_ball_area(&square(), Point2::ORIGIN) - 4.0).abs() < 1e-14);
    }

    #[test]
    fn hexagon_center() {
        let hex = crate::geometry::regular_polygon(6, 1.0, 0.3);
        let area = 1.5 * 3f64.sqrt();
        assert!((polygon_unit_ball_area(&hex, Point2::ORIGIN) - area).abs() < 1e-13);
    }

    #[test]
    fn off_center_matches_radial_integral() {
        let sq = square();
        let x = Point2::new(0.3, -0.55);
        let poly = crate::geometry::Polygon::new(sq.clone()).unwrap();
        // midpoint rule on the radial form ∫_0^π r(φ)² dφ
        let n = 200_000;
        let mut s = 0.0;
        for i in 0..n {
            let phi = std::f64::consts::PI * (i as f64 + 0.5) / n as f64;
            let d = Point2::polar(1.0, phi);
            let tp = poly.exit(x, d).0;
            let tm = poly.exit(x, -d).0;
            let r = 2.0 * tp * tm / (tp + tm);
            s += r * r;
        }
        s *= std::f64::consts::PI / n as f64;
        assert!((polygon_unit_ball_area(&sq, x) - s).abs() < 1e-8);
    }
}
