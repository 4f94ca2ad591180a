use alloc::vec;
use alloc::vec::Vec;

use super::Direction;
use crate::error::{Error, Result};
use crate::math;

/// Spherical cap: unit vectors within `ang_radius` of `center`.
#[derive(Debug, Clone, PartialEq)]
pub struct Cap {
    center: Direction,
    ang_radius: f64,
}

impl Cap {
    pub fn new(center: Direction, ang_radius: f64) -> Result<Self> {
        if !(ang_radius > 0.0 && ang_radius <= math::PI) {
            return Err(Error::invalid("cap radius must lie in (0, pi]"));
        }
        Ok(Cap { center, ang_radius })
    }

    pub fn center(&self) -> &Direction {
        &self.center
    }

    pub fn ang_radius(&self) -> f64 {
        self.ang_radius
    }

    pub fn dim(&self) -> usize {
        self.center.dim()
    }

    /// Oriented containment, with `slack` added to the radius.
    pub fn contains_within(&self, dir: &Direction, slack: f64) -> bool {
        self.center.angle_to(dir) <= self.ang_radius + slack
    }

    pub fn contains(&self, dir: &Direction) -> bool {
        self.contains_within(dir, 0.0)
    }
}

/// Orthonormal basis of the tangent space `center^⊥`, by Gram-Schmidt over
/// the coordinate vectors with the one most aligned to `center` dropped.
fn tangent_basis(center: &Direction) -> Vec<Vec<f64>> {
    let c = center.as_slice();
    let n = c.len();
    let skip = (0..n)
        .max_by(|&a, &b| math::abs(c[a]).total_cmp(&math::abs(c[b])))
        .unwrap_or(0);
    let mut basis: Vec<Vec<f64>> = vec![c.to_vec()];
    for i in (0..n).filter(|&i| i != skip) {
        let mut v = vec![0.0; n];
        v[i] = 1.0;
        // Two passes of modified Gram-Schmidt keep the basis orthogonal to
        // rounding level.
        for _ in 0..2 {
            for b in &basis {
                let p = math::dot(&v, b);
                for (x, y) in v.iter_mut().zip(b) {
                    *x -= p * y;
                }
            }
        }
        let len = math::norm(&v);
        basis.push(v.into_iter().map(|x| x / len).collect());
    }
    basis.remove(0);
    basis
}

/// Cells of the uniform `k^{m}` grid on `[-half, half]^m`, keeping those
/// whose closed cell meets the ball of radius `keep_radius` (all cells when
/// `keep_radius` is infinite). Cell centres in lexicographic order.
fn grid_centres(m: usize, k: usize, half: f64, keep_radius: f64) -> Vec<Vec<f64>> {
    let h = 2.0 * half / k as f64;
    let total = k.pow(m as u32);
    let mut out = Vec::new();
    for mut idx in 0..total {
        let mut x = vec![0.0; m];
        let mut gap_sq = 0.0;
        for xi in x.iter_mut() {
            let i = idx % k;
            idx /= k;
            *xi = -half + (i as f64 + 0.5) * h;
            let g = (math::abs(*xi) - h / 2.0).max(0.0);
            gap_sq += g * g;
        }
        if gap_sq <= keep_radius * keep_radius {
            out.push(x);
        }
    }
    out
}

/// Bound `c_n` on the size of [`cap_cover`]: the net has at most
/// `c_n (R/ρ)^{n-1}` caps, with `c_n = 2n (4√(n-1)/π + 1)^{n-1}`.
///
/// For `R ≤ π/4` the net is one gnomonic grid of `k ≤ tan R·√(n-1)/ρ + 1`
/// cells per side and `tan R ≤ 4R/π`; for larger caps it is `2n` cube faces of
/// `k ≤ √(n-1)/ρ + 1` cells per side and `1 < 4R/π`. In both cases `1 ≤ R/ρ`
/// absorbs the `+1`.
pub fn cap_cover_constant(n: usize) -> f64 {
    let m = (n - 1) as f64;
    2.0 * n as f64 * math::powf(4.0 * math::sqrt(m) / math::PI + 1.0, m)
}

/// Covers `cap` by caps of angular radius `rho`.
///
/// The net is a gnomonic grid: cell centres of a cubical grid on a tangent
/// plane are projected radially to the sphere. Radial projection from a
/// tangent plane does not increase lengths, so a cell whose half-diagonal is
/// at most `rho` lies inside the cap of radius `rho` about its projected
/// centre. Caps up to π/4 use the tangent plane at the centre, restricted to
/// cells meeting the disc of radius `tan R`; larger caps use the `2n` faces of
/// the cube `[-1, 1]ⁿ`, keeping cells whose centre is within `R + rho` of the
/// cap centre. Output order is deterministic (face, then lexicographic cell).
pub fn cap_cover(cap: &Cap, rho: f64) -> Result<Vec<Cap>> {
    if !(rho > 0.0 && rho <= cap.ang_radius) {
        return Err(Error::invalid("cover radius must lie in (0, cap radius]"));
    }
    if rho == cap.ang_radius {
        return Ok(vec![cap.clone()]);
    }
    let n = cap.dim();
    let m = n - 1;
    let r = cap.ang_radius;
    let sqrt_m = math::sqrt(m as f64);
    let mut out = Vec::new();
    if r <= math::PI / 4.0 {
        let t = math::tan(r);
        let k = math::ceil(t * sqrt_m / rho).max(1.0) as usize;
        let basis = tangent_basis(&cap.center);
        for x in grid_centres(m, k, t, t) {
            let mut v = cap.center.as_slice().to_vec();
            for (coef, b) in x.iter().zip(&basis) {
                for (vi, bi) in v.iter_mut().zip(b) {
                    *vi += coef * bi;
                }
            }
            out.push(Cap::new(Direction::new(v)?, rho)?);
        }
    } else {
        let k = math::ceil(sqrt_m / rho).max(1.0) as usize;
        let cells = grid_centres(m, k, 1.0, f64::INFINITY);
        for axis in 0..n {
            for sign in [1.0, -1.0] {
                for x in &cells {
                    let mut v = Vec::with_capacity(n);
                    v.extend_from_slice(&x[..axis]);
                    v.push(sign);
                    v.extend_from_slice(&x[axis..]);
                    let d = Direction::new(v)?;
                    if cap.center.angle_to(&d) <= r + rho {
                        out.push(Cap::new(d, rho)?);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// The cap of the [`cap_cover`] net whose gnomonic cell holds `dir`, with
/// the cell's index in the full `k^{n-1}` grid; `None` if `dir` is outside
/// `cap`. Only nets built on a single tangent plane (`R ≤ π/4`) are
/// supported. This avoids enumerating nets that are far larger than the
/// data they partition.
pub fn cap_cover_locate(cap: &Cap, rho: f64, dir: &Direction) -> Result<Option<(usize, Cap)>> {
    if !(rho > 0.0 && rho <= cap.ang_radius) {
        return Err(Error::invalid("cover radius must lie in (0, cap radius]"));
    }
    if cap.ang_radius > math::PI / 4.0 {
        return Err(Error::invalid("cell location needs a cap radius of at most pi/4"));
    }
    if !cap.contains_within(dir, super::TOLERANCE * cap.ang_radius) {
        return Ok(None);
    }
    if rho == cap.ang_radius {
        return Ok(Some((0, cap.clone())));
    }
    let m = cap.dim() - 1;
    let t = math::tan(cap.ang_radius);
    let k = math::ceil(t * math::sqrt(m as f64) / rho).max(1.0) as usize;
    let h = 2.0 * t / k as f64;
    let c = cap.center.as_slice();
    let d = dir.as_slice();
    let along = math::dot(c, d);
    let basis = tangent_basis(&cap.center);
    let mut index = 0;
    let mut stride = 1;
    let mut v = c.to_vec();
    for b in &basis {
        let x = math::dot(b, d) / along;
        let i = (math::floor((x + t) / h).max(0.0) as usize).min(k - 1);
        index += i * stride;
        stride *= k;
        let centre = -t + (i as f64 + 0.5) * h;
        for (vi, bi) in v.iter_mut().zip(b) {
            *vi += centre * bi;
        }
    }
    Ok(Some((index, Cap::new(Direction::new(v)?, rho)?)))
}
