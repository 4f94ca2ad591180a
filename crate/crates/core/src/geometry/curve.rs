use alloc::format;
use alloc::vec::Vec;

use super::distance::{line_box_distance_sq, segment_distance_sq};
use super::{Cube, Line, TOLERANCE};
use crate::error::{Error, Result};
use crate::math;

/// The graph `x_{≠j} = g(x_j)` of a piecewise-linear `g : ℝ → ℝⁿ⁻¹`,
/// given by its values at increasing breakpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct LipschitzCurve {
    axis: usize,
    breakpoints: Vec<f64>,
    values: Vec<Vec<f64>>,
    lip: f64,
    segments: Vec<Segment>,
}

#[derive(Debug, Clone, PartialEq)]
struct Segment {
    line: Line,
    len: f64,
}

/// Inserts `t` at coordinate `axis` of `rest`.
fn embed(axis: usize, t: f64, rest: &[f64]) -> Vec<f64> {
    let mut p = Vec::with_capacity(rest.len() + 1);
    p.extend_from_slice(&rest[..axis]);
    p.push(t);
    p.extend_from_slice(&rest[axis..]);
    p
}

impl LipschitzCurve {
    /// Validates ordering, dimensions and the declared Lipschitz constant.
    pub fn new(axis: usize, breakpoints: Vec<f64>, values: Vec<Vec<f64>>, lip: f64) -> Result<Self> {
        if breakpoints.len() < 2 {
            return Err(Error::invalid("a curve needs at least two breakpoints"));
        }
        if breakpoints.len() != values.len() {
            return Err(Error::invalid("breakpoints and values differ in length"));
        }
        if !(lip >= 0.0 && lip.is_finite()) {
            return Err(Error::invalid("Lipschitz constant must be finite and non-negative"));
        }
        let m = values[0].len();
        if m == 0 || axis > m {
            return Err(Error::invalid("curve axis out of range"));
        }
        if values.iter().any(|v| v.len() != m) {
            return Err(Error::invalid("curve values have inconsistent dimension"));
        }
        if breakpoints
            .iter()
            .chain(values.iter().flatten())
            .any(|x| !x.is_finite())
        {
            return Err(Error::invalid("curve data is not finite"));
        }
        let mut segments = Vec::with_capacity(breakpoints.len() - 1);
        for i in 0..breakpoints.len() - 1 {
            let dt = breakpoints[i + 1] - breakpoints[i];
            if !(dt > 0.0) {
                return Err(Error::invalid("breakpoints must be strictly increasing"));
            }
            let rise = math::sqrt(math::dist_sq(&values[i], &values[i + 1]));
            if rise > lip * dt * (1.0 + TOLERANCE) {
                return Err(Error::invalid(format!(
                    "segment {i} has slope {} above the declared Lipschitz constant {lip}",
                    rise / dt
                )));
            }
            let p = embed(axis, breakpoints[i], &values[i]);
            let q = embed(axis, breakpoints[i + 1], &values[i + 1]);
            let len = math::sqrt(math::dist_sq(&p, &q));
            segments.push(Segment {
                line: Line::through(&p, &q)?,
                len,
            });
        }
        Ok(LipschitzCurve {
            axis,
            breakpoints,
            values,
            lip,
            segments,
        })
    }

    /// The affine curve `x_{≠j} = offset + t·slope` sampled at `breakpoints`.
    pub fn affine(axis: usize, breakpoints: Vec<f64>, offset: &[f64], slope: &[f64]) -> Result<Self> {
        let lip = math::norm(slope);
        let values = breakpoints
            .iter()
            .map(|t| offset.iter().zip(slope).map(|(o, s)| o + t * s).collect())
            .collect();
        LipschitzCurve::new(axis, breakpoints, values, lip)
    }

    pub fn axis(&self) -> usize {
        self.axis
    }

    pub fn dim(&self) -> usize {
        self.values[0].len() + 1
    }

    pub fn lip(&self) -> f64 {
        self.lip
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[Vec<f64>] {
        &self.values
    }

    pub fn span(&self) -> (f64, f64) {
        (self.breakpoints[0], self.breakpoints[self.breakpoints.len() - 1])
    }

    /// Largest slope actually realised by the polyline.
    pub fn max_slope(&self) -> f64 {
        (0..self.breakpoints.len() - 1)
            .map(|i| {
                math::sqrt(math::dist_sq(&self.values[i], &self.values[i + 1]))
                    / (self.breakpoints[i + 1] - self.breakpoints[i])
            })
            .fold(0.0, f64::max)
    }

    /// The line carrying segment `i`, anchored at its left breakpoint.
    pub fn segment_line(&self, i: usize) -> &Line {
        &self.segments[i].line
    }

    /// `g(t)` by linear interpolation, or `None` outside the span.
    pub fn value_at(&self, t: f64) -> Option<Vec<f64>> {
        let (a, b) = self.span();
        if !(t >= a && t <= b) {
            return None;
        }
        let i = self
            .breakpoints
            .partition_point(|&s| s <= t)
            .clamp(1, self.breakpoints.len() - 1)
            - 1;
        let (t0, t1) = (self.breakpoints[i], self.breakpoints[i + 1]);
        let u = (t - t0) / (t1 - t0);
        Some(
            self.values[i]
                .iter()
                .zip(&self.values[i + 1])
                .map(|(x, y)| x + u * (y - x))
                .collect(),
        )
    }

    /// Point of the graph above `x_j = t`.
    pub fn point_at(&self, t: f64) -> Option<Vec<f64>> {
        self.value_at(t).map(|v| embed(self.axis, t, &v))
    }

    /// Squared distance from `p` to the polyline.
    pub fn distance_sq(&self, p: &[f64]) -> f64 {
        self.segments
            .iter()
            .map(|s| segment_distance_sq(s.line.anchor(), s.line.dir().as_slice(), 0.0, s.len, p))
            .fold(f64::INFINITY, f64::min)
    }

    /// Whether `p` lies within `radius` of the polyline. Only segments whose
    /// `x_j` range meets `[p_j - radius, p_j + radius]` can be that close.
    #[inline]
    pub fn indicator(&self, radius: f64, p: &[f64]) -> bool {
        let tj = p[self.axis];
        let r2 = radius * radius;
        let first = self.breakpoints.partition_point(|&b| b < tj - radius).saturating_sub(1);
        for s in self.segments.iter().skip(first) {
            let start = s.line.anchor()[self.axis];
            if start > tj + radius {
                break;
            }
            if segment_distance_sq(s.line.anchor(), s.line.dir().as_slice(), 0.0, s.len, p) <= r2 {
                return true;
            }
        }
        false
    }

    /// Squared distance between the polyline and the box `[lo, hi]`.
    pub fn box_distance_sq(&self, lo: &[f64], hi: &[f64]) -> f64 {
        self.segments
            .iter()
            .map(|s| line_box_distance_sq(s.line.anchor(), s.line.dir().as_slice(), 0.0, s.len, lo, hi))
            .fold(f64::INFINITY, f64::min)
    }

    /// Fails unless the breakpoint span covers the cube's `x_j` extent.
    pub fn check_covers(&self, cube: &Cube) -> Result<()> {
        let (a, b) = self.span();
        let lo = cube.min_corner()[self.axis];
        let hi = lo + cube.side();
        if a <= lo && b >= hi {
            Ok(())
        } else {
            Err(Error::precondition(format!(
                "curve span [{a}, {b}] does not cover the cube extent [{lo}, {hi}] along axis {}",
                self.axis
            )))
        }
    }

    pub fn translated(&self, by: &[f64]) -> Result<Self> {
        let shift_t = by[self.axis];
        let rest: Vec<f64> = by
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != self.axis)
            .map(|(_, x)| *x)
            .collect();
        LipschitzCurve::new(
            self.axis,
            self.breakpoints.iter().map(|t| t + shift_t).collect(),
            self.values
                .iter()
                .map(|v| v.iter().zip(&rest).map(|(x, s)| x + s).collect())
                .collect(),
            self.lip,
        )
    }
}

/// 1 if `p` lies within `radius` of the curve, else 0.
#[inline]
pub fn curve_indicator(curve: &LipschitzCurve, radius: f64, p: &[f64]) -> u8 {
    curve.indicator(radius, p) as u8
}
