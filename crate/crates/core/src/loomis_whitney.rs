//! The Loomis-Whitney inequality
//! `∫ Π_j f_j(π_j x)^{1/(n-1)} ≤ Π_j ‖f_j‖₁^{1/(n-1)}`, where `π_j` forgets
//! coordinate `j`, checked on piecewise-constant grid functions.

use alloc::vec::Vec;

use crate::error::{check_dim, Error, Result};
use crate::evaluator::{midpoint_sum_box, reduce, GridSpec, Shape, TubeFamily};
use crate::math;

/// A nonnegative function on a box in ℝ^{n-1}, constant on each cell of a
/// regular grid (first axis fastest) and zero outside the box.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionFunction {
    lo: Vec<f64>,
    hi: Vec<f64>,
    cells: Vec<usize>,
    values: Vec<f64>,
}

impl ProjectionFunction {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>, cells: Vec<usize>, values: Vec<f64>) -> Result<Self> {
        let d = lo.len();
        check_dim(d, hi.len())?;
        check_dim(d, cells.len())?;
        if d == 0 {
            return Err(Error::invalid("projection functions live in dimension >= 1"));
        }
        if lo
            .iter()
            .zip(&hi)
            .any(|(a, b)| !(a.is_finite() && b.is_finite() && a < b))
        {
            return Err(Error::invalid("box bounds must be finite with lo < hi"));
        }
        let count = cells
            .iter()
            .try_fold(1usize, |acc, &c| if c == 0 { None } else { acc.checked_mul(c) })
            .ok_or_else(|| Error::invalid("cell counts must be positive"))?;
        if values.len() != count {
            return Err(Error::invalid(alloc::format!(
                "expected {count} grid values, got {}",
                values.len()
            )));
        }
        if values.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(Error::invalid("grid values must be finite and nonnegative"));
        }
        Ok(ProjectionFunction { lo, hi, cells, values })
    }

    /// Samples `f` at the cell centres.
    pub fn from_fn<F>(lo: Vec<f64>, hi: Vec<f64>, cells: Vec<usize>, f: F) -> Result<Self>
    where
        F: Fn(&[f64]) -> f64,
    {
        let d = lo.len();
        check_dim(d, hi.len())?;
        check_dim(d, cells.len())?;
        let count: usize = cells.iter().product();
        let mut p = alloc::vec![0.0; d];
        let values = (0..count)
            .map(|idx| {
                let mut rest = idx;
                for i in 0..d {
                    let k = rest % cells[i];
                    rest /= cells[i];
                    p[i] = lo[i] + (k as f64 + 0.5) * (hi[i] - lo[i]) / cells[i] as f64;
                }
                f(&p)
            })
            .collect();
        ProjectionFunction::new(lo, hi, cells, values)
    }

    /// The indicator of the box `[lo, hi]` itself, on a single cell.
    pub fn box_indicator(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        let d = lo.len();
        ProjectionFunction::new(lo, hi, alloc::vec![1; d], alloc::vec![1.0])
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn lo(&self) -> &[f64] {
        &self.lo
    }

    pub fn hi(&self) -> &[f64] {
        &self.hi
    }

    pub fn cells(&self) -> &[usize] {
        &self.cells
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn cell_volume(&self) -> f64 {
        (0..self.dim())
            .map(|i| (self.hi[i] - self.lo[i]) / self.cells[i] as f64)
            .product()
    }

    /// Grid L¹ norm: exact for the stored piecewise-constant function.
    pub fn l1_norm(&self) -> f64 {
        reduce::tree_sum(&self.values) * self.cell_volume()
    }

    pub fn scaled(&self, factor: f64) -> Result<Self> {
        let values = self.values.iter().map(|v| v * factor).collect();
        ProjectionFunction::new(self.lo.clone(), self.hi.clone(), self.cells.clone(), values)
    }

    /// Value at `y`, or zero outside the box. Points on a cell boundary go to
    /// the upper cell, except on the upper face of the box.
    pub fn value_at(&self, y: &[f64]) -> f64 {
        self.lookup((0..self.dim()).map(|i| y[i]))
    }

    /// Value at `π_j(p)` without materialising the projection.
    pub fn value_at_projection(&self, p: &[f64], j: usize) -> f64 {
        self.lookup(p.iter().enumerate().filter(|(i, _)| *i != j).map(|(_, x)| *x))
    }

    fn lookup<I: Iterator<Item = f64>>(&self, coords: I) -> f64 {
        let mut index = 0;
        let mut stride = 1;
        for (i, x) in coords.enumerate() {
            let (lo, hi, c) = (self.lo[i], self.hi[i], self.cells[i]);
            if !(x >= lo && x <= hi) {
                return 0.0;
            }
            let k = (math::floor((x - lo) / (hi - lo) * c as f64) as usize).min(c - 1);
            index += k * stride;
            stride *= c;
        }
        self.values[index]
    }

    fn contains_box(&self, lo: &[f64], hi: &[f64]) -> bool {
        (0..self.dim()).all(|i| lo[i] >= self.lo[i] && hi[i] <= self.hi[i])
    }
}

/// `Σ_a w_a χ_{B(y_a, r)}` on ℝ^d.
#[derive(Debug, Clone, PartialEq)]
pub struct BallSum {
    centers: Vec<Vec<f64>>,
    weights: Vec<f64>,
    radius: f64,
}

impl BallSum {
    pub fn new(centers: Vec<Vec<f64>>, weights: Vec<f64>, radius: f64) -> Result<Self> {
        check_dim(centers.len(), weights.len())?;
        if let Some(first) = centers.first() {
            if centers.iter().any(|c| c.len() != first.len()) {
                return Err(Error::invalid("ball centres must share a dimension"));
            }
        }
        if weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(Error::invalid("weights must be finite and nonnegative"));
        }
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::invalid("radius must be positive"));
        }
        Ok(BallSum {
            centers,
            weights,
            radius,
        })
    }

    /// The ball sum `f_j` of an axis-parallel family: the projections of its
    /// axes, weighted, at the family radius.
    pub fn from_axis_parallel(family: &TubeFamily) -> Result<Self> {
        let j = family.axis();
        let mut centers = Vec::with_capacity(family.len());
        let mut weights = Vec::with_capacity(family.len());
        for m in family.members() {
            let Shape::Line(l) = &m.shape else {
                return Err(Error::invalid("ball sums come from straight tubes"));
            };
            if l.dir().as_slice().iter().enumerate().any(|(i, x)| i != j && *x != 0.0) {
                return Err(Error::invalid("tube is not parallel to its family axis"));
            }
            centers.push(project(l.anchor(), j)?);
            weights.push(m.weight);
        }
        BallSum::new(centers, weights, family.radius())
    }

    pub fn centers(&self) -> &[Vec<f64>] {
        &self.centers
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn value_at(&self, y: &[f64]) -> f64 {
        let r2 = self.radius * self.radius;
        self.centers
            .iter()
            .zip(&self.weights)
            .filter(|(c, _)| math::dist_sq(c, y) <= r2)
            .map(|(_, w)| *w)
            .fold(0.0, |a, b| a + b)
    }
}

/// `π_j`: drops coordinate `j`.
pub fn project(p: &[f64], j: usize) -> Result<Vec<f64>> {
    if p.len() < 2 {
        return Err(Error::Dimension {
            expected: 2,
            got: p.len(),
        });
    }
    if j >= p.len() {
        return Err(Error::invalid("axis out of range"));
    }
    Ok(p.iter().enumerate().filter(|(i, _)| *i != j).map(|(_, x)| *x).collect())
}

fn check_lw_inputs(fs: &[ProjectionFunction], lo: &[f64], hi: &[f64]) -> Result<usize> {
    let n = fs.len();
    if n < 2 {
        return Err(Error::Dimension { expected: 2, got: n });
    }
    check_dim(n, lo.len())?;
    check_dim(n, hi.len())?;
    if lo
        .iter()
        .zip(hi)
        .any(|(a, b)| !(a.is_finite() && b.is_finite() && a < b))
    {
        return Err(Error::invalid("integration box must have finite lo < hi"));
    }
    for (j, f) in fs.iter().enumerate() {
        check_dim(n - 1, f.dim())?;
        let plo = project(lo, j)?;
        let phi = project(hi, j)?;
        if !f.contains_box(&plo, &phi) {
            return Err(Error::precondition(alloc::format!(
                "projection of the integration box leaves the box of f_{j}"
            )));
        }
    }
    Ok(n)
}

fn left_raw(fs: &[ProjectionFunction], lo: &[f64], hi: &[f64], grid: GridSpec) -> Result<f64> {
    let p = 1.0 / (fs.len() - 1) as f64;
    midpoint_sum_box(lo, hi, grid, |x| {
        let mut prod = 1.0;
        for (j, f) in fs.iter().enumerate() {
            let v = f.value_at_projection(x, j);
            if v == 0.0 {
                return 0.0;
            }
            prod *= if p == 1.0 { v } else { math::powf(v, p) };
        }
        prod
    })
}

/// Midpoint value of `∫_box Π_j f_j(π_j x)^{1/(n-1)}`.
pub fn lw_left(fs: &[ProjectionFunction], lo: &[f64], hi: &[f64], grid: GridSpec) -> Result<f64> {
    check_lw_inputs(fs, lo, hi)?;
    left_raw(fs, lo, hi, grid)
}

/// `Π_j ‖f_j‖₁^{1/(n-1)}`.
pub fn lw_right(fs: &[ProjectionFunction]) -> f64 {
    let p = 1.0 / (fs.len().max(2) - 1) as f64;
    fs.iter().map(|f| math::powf(f.l1_norm(), p)).product()
}

/// Outcome of [`verify_lw`]. `ratio` is `left / right`, or 0 with `vacuous`
/// set when both sides vanish.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LwReport {
    pub left: f64,
    pub right: f64,
    pub ratio: f64,
    /// Error of `ratio`: `|left(m) - left(m/2)| / right` plus a bound on the
    /// rounding of the blocked sum. `None` for odd `m`. When the grid is
    /// aligned with every function's cells the midpoint rule is exact and
    /// only the rounding term remains; unaligned grids can make the doubling
    /// difference a poor guide.
    pub error_estimate: Option<f64>,
    pub vacuous: bool,
}

/// Relative rounding allowance of a blocked sum: a block is summed
/// sequentially, and the tree over blocks has depth below 64.
fn rounding_allowance(n: usize) -> f64 {
    (reduce::BLOCK + 64 + 2 * n + 4) as f64 * f64::EPSILON
}

pub fn verify_lw(fs: &[ProjectionFunction], lo: &[f64], hi: &[f64], grid: GridSpec) -> Result<LwReport> {
    let n = check_lw_inputs(fs, lo, hi)?;
    let left = left_raw(fs, lo, hi, grid)?;
    let right = lw_right(fs);
    let m = grid.cells_per_side;
    let coarse = if m.is_multiple_of(2) {
        Some(left_raw(
            fs,
            lo,
            hi,
            GridSpec {
                cells_per_side: m / 2,
                ..grid
            },
        )?)
    } else {
        None
    };
    if right == 0.0 {
        // Some f_j vanishes on the grid, so the integrand is zero too.
        return Ok(LwReport {
            left,
            right,
            ratio: 0.0,
            error_estimate: coarse.map(|_| 0.0),
            vacuous: left == 0.0,
        });
    }
    let ratio = left / right;
    let error_estimate = coarse.map(|c| math::abs(left - c) / right + rounding_allowance(n) * ratio);
    Ok(LwReport {
        left,
        right,
        ratio,
        error_estimate,
        vacuous: false,
    })
}

/// `‖Σ_a w_a χ_{B(y_a, r)}‖₁ = ω_d r^d Σ_a w_a` on ℝ^d.
pub fn ball_sum_l1(b: &BallSum, d: usize) -> f64 {
    math::unit_ball_volume(d) * math::powi(b.radius, d as i32) * b.weights.iter().sum::<f64>()
}

/// The axis-parallel bound `Π_j ‖f_j‖₁^{1/(n-1)}` with `f_j` the ball sum of
/// family `j`; it dominates the overlap integral over any cube.
pub fn axis_parallel_bound(families: &[TubeFamily]) -> Result<f64> {
    let n = families.len();
    if n < 2 {
        return Err(Error::Dimension { expected: 2, got: n });
    }
    let p = 1.0 / (n - 1) as f64;
    families.iter().try_fold(1.0, |acc, f| {
        let b = BallSum::from_axis_parallel(f)?;
        Ok(acc * math::powf(ball_sum_l1(&b, n - 1), p))
    })
}
