//! Exact planar overlap. With `n = 2` the exponent `1/(n-1)` is 1, so the
//! functional expands bilinearly into `Σ_{a,b} w_a w_b area(T_a ∩ T_b ∩ Q)`,
//! and every term is the area of a convex polygon.

use alloc::vec;
use alloc::vec::Vec;

use super::{check_families, Shape, TubeFamily};
use crate::error::{Error, Result};
use crate::geometry::{Cube, Line};

type Point = [f64; 2];

/// Keeps the part of a convex polygon with `normal · x <= offset`
/// (Sutherland-Hodgman against one half-plane).
fn clip_half_plane(poly: &[Point], normal: Point, offset: f64) -> Vec<Point> {
    let side = |p: &Point| normal[0] * p[0] + normal[1] * p[1] - offset;
    let mut out = Vec::with_capacity(poly.len() + 1);
    for i in 0..poly.len() {
        let cur = poly[i];
        let next = poly[(i + 1) % poly.len()];
        let (sc, sn) = (side(&cur), side(&next));
        if sc <= 0.0 {
            out.push(cur);
        }
        if (sc < 0.0 && sn > 0.0) || (sc > 0.0 && sn < 0.0) {
            let t = sc / (sc - sn);
            out.push([cur[0] + t * (next[0] - cur[0]), cur[1] + t * (next[1] - cur[1])]);
        }
    }
    out
}

/// Intersection of a convex polygon with the closed strip of half-width
/// `radius` about `line`.
fn clip_strip(poly: &[Point], line: &Line, radius: f64) -> Vec<Point> {
    let d = line.dir().as_slice();
    let a = line.anchor();
    let normal = [-d[1], d[0]];
    let c = normal[0] * a[0] + normal[1] * a[1];
    let upper = clip_half_plane(poly, normal, c + radius);
    clip_half_plane(&upper, [-normal[0], -normal[1]], -(c - radius))
}

/// Shoelace area.
fn area(poly: &[Point]) -> f64 {
    if poly.len() < 3 {
        return 0.0;
    }
    let mut s = 0.0;
    for i in 0..poly.len() {
        let p = poly[i];
        let q = poly[(i + 1) % poly.len()];
        s += p[0] * q[1] - q[0] * p[1];
    }
    0.5 * libm::fabs(s)
}

/// `∫_Q f_1 f_2` for planar straight-tube families, computed exactly as a
/// weighted sum of clipped-polygon areas.
pub fn exact_overlap_2d(families: &[TubeFamily], cube: &Cube) -> Result<f64> {
    let n = check_families(families)?;
    if n != 2 || cube.dim() != 2 {
        return Err(Error::invalid("the exact oracle is planar only"));
    }
    let lines = |f: &TubeFamily| -> Result<Vec<(Line, f64)>> {
        f.members()
            .iter()
            .map(|m| match &m.shape {
                Shape::Line(l) => Ok((l.clone(), m.weight)),
                Shape::Curve(_) => Err(Error::invalid("the exact oracle takes straight tubes only")),
            })
            .collect()
    };
    let first = lines(&families[0])?;
    let second = lines(&families[1])?;
    let lo = cube.min_corner();
    let s = cube.side();
    let square = vec![
        [lo[0], lo[1]],
        [lo[0] + s, lo[1]],
        [lo[0] + s, lo[1] + s],
        [lo[0], lo[1] + s],
    ];
    let r0 = families[0].radius();
    let r1 = families[1].radius();
    let mut total = 0.0;
    for (la, wa) in &first {
        let pa = clip_strip(&square, la, r0);
        if pa.len() < 3 {
            continue;
        }
        for (lb, wb) in &second {
            total += wa * wb * area(&clip_strip(&pa, lb, r1));
        }
    }
    Ok(total)
}
