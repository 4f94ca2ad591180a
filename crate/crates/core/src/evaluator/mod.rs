//! Weighted tube families and midpoint-rule quadrature of the overlap
//! functional `∫_Q Π_j f_j^{1/(n-1)}`, `f_j = Σ_a w_{j,a} T_{j,a}`.

mod exact2d;
pub mod reduce;

pub use exact2d::exact_overlap_2d;

use alloc::format;
use alloc::vec::Vec;

use crate::error::{check_dim, Error, Result};
use crate::geometry::{angle_from_axis, line_box_distance_sq, Cube, Direction, Line, LipschitzCurve, Tube};
use crate::math;

/// Default ceiling on `mⁿ` for one quadrature.
pub const DEFAULT_CELL_BUDGET: u64 = 100_000_000;

/// Core geometry of a family member.
#[derive(Debug, Clone, PartialEq)]
pub enum Shape {
    Line(Line),
    Curve(LipschitzCurve),
}

impl Shape {
    pub fn dim(&self) -> usize {
        match self {
            Shape::Line(l) => l.dim(),
            Shape::Curve(c) => c.dim(),
        }
    }

    #[inline]
    pub fn contains(&self, radius: f64, p: &[f64]) -> bool {
        match self {
            Shape::Line(l) => l.distance_sq(p) <= radius * radius,
            Shape::Curve(c) => c.indicator(radius, p),
        }
    }

    /// Whether the `radius`-neighbourhood meets the closed cube.
    pub fn meets_cube(&self, radius: f64, cube: &Cube) -> bool {
        let (lo, hi) = cube.bounds();
        let d2 = match self {
            Shape::Line(l) => line_box_distance_sq(
                l.anchor(),
                l.dir().as_slice(),
                f64::NEG_INFINITY,
                f64::INFINITY,
                &lo,
                &hi,
            ),
            Shape::Curve(c) => c.box_distance_sq(&lo, &hi),
        };
        d2 <= radius * radius
    }

    /// Tilt from axis `j`: the angle for a line, `atan` of the largest slope
    /// for a curve.
    pub fn tilt(&self, j: usize) -> f64 {
        match self {
            Shape::Line(l) => angle_from_axis(l.dir(), j),
            Shape::Curve(c) => math::atan(c.max_slope()),
        }
    }

    /// Declared slope bound: `tan(angle)` for a line, `lip` for a curve.
    pub fn slope_bound(&self, j: usize) -> f64 {
        match self {
            Shape::Line(l) => math::tan(angle_from_axis(l.dir(), j)),
            Shape::Curve(c) => c.lip(),
        }
    }

    pub fn translated(&self, by: &[f64]) -> Result<Self> {
        Ok(match self {
            Shape::Line(l) => Shape::Line(Line::new(
                l.anchor().iter().zip(by).map(|(a, b)| a + b).collect(),
                l.dir().clone(),
            )?),
            Shape::Curve(c) => Shape::Curve(c.translated(by)?),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Member {
    pub shape: Shape,
    pub weight: f64,
}

impl Member {
    pub fn line(line: Line) -> Self {
        Member {
            shape: Shape::Line(line),
            weight: 1.0,
        }
    }

    pub fn curve(curve: LipschitzCurve) -> Self {
        Member {
            shape: Shape::Curve(curve),
            weight: 1.0,
        }
    }

    pub fn weighted(self, weight: f64) -> Self {
        Member { weight, ..self }
    }
}

/// The members of one direction class `j`, all thickened to the same radius.
#[derive(Debug, Clone, PartialEq)]
pub struct TubeFamily {
    axis: usize,
    dim: usize,
    radius: f64,
    members: Vec<Member>,
}

impl TubeFamily {
    pub fn new(dim: usize, axis: usize, radius: f64, members: Vec<Member>) -> Result<Self> {
        if dim < 2 {
            return Err(Error::invalid("families live in R^n with n >= 2"));
        }
        if axis >= dim {
            return Err(Error::invalid(format!("axis {axis} out of range for n = {dim}")));
        }
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::invalid("family radius must be positive and finite"));
        }
        for (i, m) in members.iter().enumerate() {
            check_dim(dim, m.shape.dim())?;
            if !(m.weight >= 0.0 && m.weight.is_finite()) {
                return Err(Error::invalid(format!(
                    "member {i} has a negative or non-finite weight"
                )));
            }
            if let Shape::Curve(c) = &m.shape {
                if c.axis() != axis {
                    return Err(Error::invalid(format!(
                        "member {i} is a graph over axis {} in family {axis}",
                        c.axis()
                    )));
                }
            }
        }
        Ok(TubeFamily {
            axis,
            dim,
            radius,
            members,
        })
    }

    pub fn empty(dim: usize, axis: usize, radius: f64) -> Result<Self> {
        TubeFamily::new(dim, axis, radius, Vec::new())
    }

    pub fn axis(&self) -> usize {
        self.axis
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn members(&self) -> &[Member] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// `Σ_a w_a`; equals `N_j` for unit weights.
    pub fn total_weight(&self) -> f64 {
        self.members.iter().map(|m| m.weight).fold(0.0, |a, b| a + b)
    }

    pub fn has_curves(&self) -> bool {
        self.members.iter().any(|m| matches!(m.shape, Shape::Curve(_)))
    }

    /// Tube `a` as a geometric [`Tube`], if it is a straight member.
    pub fn tube(&self, a: usize) -> Option<Tube> {
        match &self.members[a].shape {
            Shape::Line(l) => Tube::new(l.clone(), self.radius).ok(),
            Shape::Curve(_) => None,
        }
    }

    /// Largest tilt of any member from the family axis.
    pub fn max_tilt(&self) -> f64 {
        self.members.iter().map(|m| m.shape.tilt(self.axis)).fold(0.0, f64::max)
    }

    /// Largest slope bound (see [`Shape::slope_bound`]).
    pub fn max_slope_bound(&self) -> f64 {
        self.members
            .iter()
            .map(|m| m.shape.slope_bound(self.axis))
            .fold(0.0, f64::max)
    }

    /// `f_j(p) = Σ_a w_a T_a(p)`.
    #[inline]
    pub fn value_at(&self, p: &[f64]) -> f64 {
        let mut s = 0.0;
        for m in &self.members {
            if m.shape.contains(self.radius, p) {
                s += m.weight;
            }
        }
        s
    }

    pub fn with_radius(&self, radius: f64) -> Result<Self> {
        TubeFamily::new(self.dim, self.axis, radius, self.members.clone())
    }

    pub fn with_members(&self, members: Vec<Member>) -> Result<Self> {
        TubeFamily::new(self.dim, self.axis, self.radius, members)
    }

    pub fn scaled_weights(&self, factor: f64) -> Result<Self> {
        self.with_members(
            self.members
                .iter()
                .map(|m| Member {
                    shape: m.shape.clone(),
                    weight: m.weight * factor,
                })
                .collect(),
        )
    }

    pub fn translated(&self, by: &[f64]) -> Result<Self> {
        check_dim(self.dim, by.len())?;
        let members = self
            .members
            .iter()
            .map(|m| {
                Ok(Member {
                    shape: m.shape.translated(by)?,
                    weight: m.weight,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        self.with_members(members)
    }

    pub fn push(&mut self, member: Member) -> Result<()> {
        check_dim(self.dim, member.shape.dim())?;
        if !(member.weight >= 0.0 && member.weight.is_finite()) {
            return Err(Error::invalid("negative or non-finite weight"));
        }
        self.members.push(member);
        Ok(())
    }
}

/// Checks that `families[j]` is the family of axis `j` in ℝⁿ, `n = families.len()`.
pub fn check_families(families: &[TubeFamily]) -> Result<usize> {
    let n = families.len();
    if n < 2 {
        return Err(Error::invalid("need one family per axis, n >= 2"));
    }
    for (j, f) in families.iter().enumerate() {
        if f.axis() != j {
            return Err(Error::invalid(format!("family {j} has axis {}", f.axis())));
        }
        check_dim(n, f.dim())?;
    }
    Ok(n)
}

/// `Π_j f_j(p)^{1/(n-1)}`, with `0^{1/(n-1)} = 0`.
#[inline]
pub fn overlap_integrand(families: &[TubeFamily], p: &[f64]) -> f64 {
    let n = families.len();
    if n == 2 {
        let a = families[0].value_at(p);
        if a == 0.0 {
            return 0.0;
        }
        return a * families[1].value_at(p);
    }
    let exponent = 1.0 / (n - 1) as f64;
    let mut prod = 1.0;
    for f in families {
        let v = f.value_at(p);
        if v == 0.0 {
            return 0.0;
        }
        prod *= math::powf(v, exponent);
    }
    prod
}

/// Midpoint-rule resolution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub cells_per_side: usize,
    pub cell_budget: u64,
}

impl GridSpec {
    pub fn new(cells_per_side: usize) -> Result<Self> {
        if cells_per_side == 0 {
            return Err(Error::invalid("cells_per_side must be at least 1"));
        }
        Ok(GridSpec {
            cells_per_side,
            cell_budget: DEFAULT_CELL_BUDGET,
        })
    }

    pub fn with_budget(self, cell_budget: u64) -> Self {
        GridSpec { cell_budget, ..self }
    }

    pub fn cell_count(&self, dim: usize) -> Result<usize> {
        let over = Error::CellBudget {
            cells_per_side: self.cells_per_side,
            dim,
            budget: self.cell_budget,
        };
        let total = (self.cells_per_side as u64)
            .checked_pow(dim as u32)
            .ok_or(over.clone())?;
        if total > self.cell_budget {
            return Err(over);
        }
        usize::try_from(total).map_err(|_| over)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Convergence {
    /// A single fixed grid; no refinement was attempted.
    Fixed,
    Converged,
    NotConverged,
}

/// A quadrature value. `error_estimate` is the difference to the next
/// coarser level, when one exists.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OverlapValue {
    pub value: f64,
    pub error_estimate: Option<f64>,
    pub cells_per_side: usize,
    pub convergence: Convergence,
}

impl OverlapValue {
    pub fn converged(&self) -> bool {
        self.convergence != Convergence::NotConverged
    }

    /// Error estimate, or `value` itself when none is available.
    pub fn error_or_value(&self) -> f64 {
        self.error_estimate.unwrap_or(self.value)
    }
}

/// Midpoint sum of any integrand over the `m^d` cells of `cube`, summed in
/// the fixed block order of [`reduce`].
pub fn midpoint_sum<F>(cube: &Cube, grid: GridSpec, integrand: F) -> Result<f64>
where
    F: Fn(&[f64]) -> f64 + Sync + Send,
{
    let (lo, hi) = cube.bounds();
    midpoint_sum_box(&lo, &hi, grid, integrand)
}

/// [`midpoint_sum`] over the box `[lo, hi]`, with `m` cells along every axis.
pub fn midpoint_sum_box<F>(lo: &[f64], hi: &[f64], grid: GridSpec, integrand: F) -> Result<f64>
where
    F: Fn(&[f64]) -> f64 + Sync + Send,
{
    let d = lo.len();
    check_dim(d, hi.len())?;
    let count = grid.cell_count(d)?;
    let m = grid.cells_per_side;
    let h: Vec<f64> = lo.iter().zip(hi).map(|(a, b)| (b - a) / m as f64).collect();
    let sum = reduce::blocked_sum(count, |range| {
        let mut p = alloc::vec![0.0; d];
        let mut s = 0.0;
        for idx in range {
            let mut rest = idx;
            for (i, x) in p.iter_mut().enumerate() {
                let k = rest % m;
                rest /= m;
                *x = lo[i] + (k as f64 + 0.5) * h[i];
            }
            s += integrand(&p);
        }
        s
    });
    Ok(sum * h.iter().product::<f64>())
}

fn check_overlap_inputs(families: &[TubeFamily], cube: &Cube) -> Result<usize> {
    let n = check_families(families)?;
    check_dim(n, cube.dim())?;
    for f in families {
        for m in f.members() {
            if let Shape::Curve(c) = &m.shape {
                c.check_covers(cube)?;
            }
        }
    }
    Ok(n)
}

fn raw_overlap(families: &[TubeFamily], cube: &Cube, grid: GridSpec) -> Result<f64> {
    midpoint_sum(cube, grid, |p| overlap_integrand(families, p))
}

/// Midpoint rule on an `mⁿ` grid. For even `m` the error estimate is
/// `|value(m) - value(m/2)|`.
pub fn evaluate_overlap(families: &[TubeFamily], cube: &Cube, grid: GridSpec) -> Result<OverlapValue> {
    check_overlap_inputs(families, cube)?;
    let value = raw_overlap(families, cube, grid)?;
    let m = grid.cells_per_side;
    let error_estimate = if m.is_multiple_of(2) {
        let coarse = raw_overlap(
            families,
            cube,
            GridSpec {
                cells_per_side: m / 2,
                ..grid
            },
        )?;
        Some(math::abs(value - coarse))
    } else {
        None
    };
    Ok(OverlapValue {
        value,
        error_estimate,
        cells_per_side: m,
        convergence: Convergence::Fixed,
    })
}

/// Parameters of [`evaluate_refined`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RefineSpec {
    pub start_cells: usize,
    pub tol: f64,
    pub max_doublings: u32,
    pub cell_budget: u64,
    /// Number of consecutive doublings that must agree to `tol`. Indicator
    /// integrands converge erratically, and a single agreement is often a
    /// coincidence of grid alignment.
    pub agreements: u32,
}

impl RefineSpec {
    pub fn new(tol: f64) -> Self {
        RefineSpec {
            tol,
            ..RefineSpec::default()
        }
    }

    pub fn with_start(self, start_cells: usize) -> Self {
        RefineSpec { start_cells, ..self }
    }

    pub fn with_max_doublings(self, max_doublings: u32) -> Self {
        RefineSpec { max_doublings, ..self }
    }

    pub fn with_budget(self, cell_budget: u64) -> Self {
        RefineSpec { cell_budget, ..self }
    }

    pub fn with_agreements(self, agreements: u32) -> Self {
        RefineSpec { agreements, ..self }
    }
}

impl Default for RefineSpec {
    fn default() -> Self {
        RefineSpec {
            start_cells: 16,
            tol: 1e-3,
            max_doublings: 6,
            cell_budget: DEFAULT_CELL_BUDGET,
            agreements: 2,
        }
    }
}

/// Doubles the grid until successive values agree to relative `tol`, for
/// `spec.agreements` doublings in a row.
///
/// Stops early, flagged as not converged, when `max_doublings` is reached or
/// the next grid would exceed the cell budget.
pub fn evaluate_refined(families: &[TubeFamily], cube: &Cube, spec: RefineSpec) -> Result<OverlapValue> {
    check_overlap_inputs(families, cube)?;
    refine_with(cube.dim(), spec, |grid| raw_overlap(families, cube, grid))
}

/// The doubling loop of [`evaluate_refined`] for an arbitrary level
/// function.
pub fn refine_with<F>(dim: usize, spec: RefineSpec, mut level: F) -> Result<OverlapValue>
where
    F: FnMut(GridSpec) -> Result<f64>,
{
    if !(spec.tol > 0.0) {
        return Err(Error::invalid("tolerance must be positive"));
    }
    let mut m = spec.start_cells.max(1);
    let mut prev = level(GridSpec::new(m)?.with_budget(spec.cell_budget))?;
    let mut last_diff = None;
    let mut streak = 0;
    for _ in 0..spec.max_doublings {
        let next = GridSpec::new(m * 2)?.with_budget(spec.cell_budget);
        if next.cell_count(dim).is_err() {
            break;
        }
        let value = level(next)?;
        let diff = math::abs(value - prev);
        m *= 2;
        prev = value;
        last_diff = Some(diff);
        if diff <= spec.tol * math::abs(value) {
            streak += 1;
        } else {
            streak = 0;
        }
        if streak >= spec.agreements.max(1) {
            return Ok(OverlapValue {
                value,
                error_estimate: Some(diff),
                cells_per_side: m,
                convergence: Convergence::Converged,
            });
        }
    }
    Ok(OverlapValue {
        value: prev,
        error_estimate: last_diff,
        cells_per_side: m,
        convergence: Convergence::NotConverged,
    })
}

/// `∮_Q = value / |Q|`.
pub fn average_integral(v: &OverlapValue, cube: &Cube) -> f64 {
    v.value / cube.volume()
}

/// The unit-radius tube families through `Direction::axis` lines, one per
/// axis, anchored at `center`; handy for known-value checks.
pub fn axis_parallel_cross(center: &[f64], radius: f64) -> Result<Vec<TubeFamily>> {
    let n = center.len();
    (0..n)
        .map(|j| {
            TubeFamily::new(
                n,
                j,
                radius,
                alloc::vec![Member::line(Line::new(center.to_vec(), Direction::axis(n, j))?)],
            )
        })
        .collect()
}

#[cfg(test)]
mod tests;
