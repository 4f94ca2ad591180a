//! Lines, tubes, cubes, caps, coordinate changes and Lipschitz polylines.
//!
//! Axes are 0-based throughout: family `j` is the one whose members run
//! roughly along `e_j`, and `j ∈ 0..n`.
//!
//! All neighbourhoods are closed: a point at distance exactly `W` from a line
//! lies in its `W`-tube.

mod cap;
mod curve;
mod distance;
mod linear;

pub use cap::{cap_cover, cap_cover_constant, cap_cover_locate, Cap};
pub use curve::{curve_indicator, LipschitzCurve};
pub use distance::{line_box_distance_sq, segment_distance_sq};
pub use linear::{frame_map, wedge_volume, LinearMap};

use alloc::vec::Vec;

use crate::error::{check_dim, Error, Result};
use crate::math;

/// Slack allowed when checking that a normalised vector has unit length and
/// when comparing against admissibility thresholds that were themselves
/// computed in floating point.
pub const TOLERANCE: f64 = 1e-12;

/// A unit vector in ℝⁿ.
#[derive(Debug, Clone, PartialEq)]
pub struct Direction(Vec<f64>);

impl Direction {
    /// Normalises `v`. Fails on zero, non-finite or sub-two-dimensional input.
    pub fn new(v: Vec<f64>) -> Result<Self> {
        if v.len() < 2 {
            return Err(Error::invalid("directions need n >= 2"));
        }
        if v.iter().any(|x| !x.is_finite()) {
            return Err(Error::invalid("direction has non-finite components"));
        }
        let len = math::norm(&v);
        if len == 0.0 {
            return Err(Error::invalid("zero direction"));
        }
        Ok(Direction(v.into_iter().map(|x| x / len).collect()))
    }

    /// Accepts `v` only if it is already unit within [`TOLERANCE`].
    pub fn from_unit(v: Vec<f64>) -> Result<Self> {
        if v.len() < 2 || v.iter().any(|x| !x.is_finite()) {
            return Err(Error::invalid("malformed direction"));
        }
        let len = math::norm(&v);
        if math::abs(len - 1.0) > TOLERANCE {
            return Err(Error::invalid("direction is not a unit vector"));
        }
        Ok(Direction(v))
    }

    /// The coordinate unit vector `e_j` in ℝⁿ.
    pub fn axis(n: usize, j: usize) -> Self {
        let mut v = alloc::vec![0.0; n];
        v[j] = 1.0;
        Direction(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn negated(&self) -> Self {
        Direction(self.0.iter().map(|x| -x).collect())
    }

    /// The same line direction, signed so that component `j` is non-negative.
    pub fn oriented_to(&self, j: usize) -> Self {
        if self.0[j] < 0.0 {
            self.negated()
        } else {
            self.clone()
        }
    }

    /// Angle between the two unit vectors, in `[0, π]`.
    pub fn angle_to(&self, other: &Direction) -> f64 {
        let c = math::dot(&self.0, &other.0);
        let s_sq: f64 = self
            .0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| {
                let r = a - c * b;
                r * r
            })
            .sum();
        math::atan2(math::sqrt(s_sq), c)
    }

    /// Angle between the lines spanned by the two vectors, in `[0, π/2]`.
    pub fn line_angle_to(&self, other: &Direction) -> f64 {
        let a = self.angle_to(other);
        a.min(math::PI - a)
    }
}

/// Angle between the line spanned by `dir` and the `x_j`-axis, in `[0, π/2]`.
///
/// Lines are unoriented, so `-e_j` is at angle zero from axis `j`.
pub fn angle_from_axis(dir: &Direction, j: usize) -> f64 {
    let d = dir.as_slice();
    let along = math::abs(d[j]);
    let across_sq: f64 = d.iter().enumerate().filter(|&(i, _)| i != j).map(|(_, x)| x * x).sum();
    math::atan2(math::sqrt(across_sq), along)
}

/// An infinite straight line `anchor + t·dir`.
#[derive(Debug, Clone, PartialEq)]
pub struct Line {
    anchor: Vec<f64>,
    dir: Direction,
}

impl Line {
    pub fn new(anchor: Vec<f64>, dir: Direction) -> Result<Self> {
        check_dim(dir.dim(), anchor.len())?;
        if anchor.iter().any(|x| !x.is_finite()) {
            return Err(Error::invalid("line anchor has non-finite components"));
        }
        Ok(Line { anchor, dir })
    }

    /// The line through `p` and `q`, anchored at `p`.
    pub fn through(p: &[f64], q: &[f64]) -> Result<Self> {
        check_dim(p.len(), q.len())?;
        let d: Vec<f64> = q.iter().zip(p).map(|(a, b)| a - b).collect();
        Line::new(p.to_vec(), Direction::new(d)?)
    }

    pub fn dim(&self) -> usize {
        self.anchor.len()
    }

    pub fn anchor(&self) -> &[f64] {
        &self.anchor
    }

    pub fn dir(&self) -> &Direction {
        &self.dir
    }

    /// Squared distance from `p` to the line.
    #[inline]
    pub fn distance_sq(&self, p: &[f64]) -> f64 {
        segment_distance_sq(&self.anchor, self.dir.as_slice(), f64::NEG_INFINITY, f64::INFINITY, p)
    }

    /// The point of the line with `x_j = value`, if the line is not
    /// orthogonal to the axis.
    pub fn point_at_coordinate(&self, j: usize, value: f64) -> Option<Vec<f64>> {
        let d = self.dir.as_slice();
        if d[j] == 0.0 {
            return None;
        }
        let s = (value - self.anchor[j]) / d[j];
        let mut q: Vec<f64> = self.anchor.iter().zip(d).map(|(a, di)| a + s * di).collect();
        q[j] = value;
        Some(q)
    }
}

/// The closed `radius`-neighbourhood of a line.
#[derive(Debug, Clone, PartialEq)]
pub struct Tube {
    pub line: Line,
    radius: f64,
}

impl Tube {
    pub fn new(line: Line, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::invalid("tube radius must be positive and finite"));
        }
        Ok(Tube { line, radius })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn with_radius(&self, radius: f64) -> Result<Self> {
        Tube::new(self.line.clone(), radius)
    }

    pub fn dim(&self) -> usize {
        self.line.dim()
    }
}

/// 1 if `p` lies in the closed tube, else 0.
#[inline]
pub fn tube_indicator(tube: &Tube, p: &[f64]) -> u8 {
    (tube.line.distance_sq(p) <= tube.radius * tube.radius) as u8
}

/// Whether the tube meets the closed cube, decided by the exact line-to-box
/// distance.
pub fn tube_intersects_cube(tube: &Tube, cube: &Cube) -> bool {
    let (lo, hi) = cube.bounds();
    let d2 = line_box_distance_sq(
        tube.line.anchor(),
        tube.line.dir().as_slice(),
        f64::NEG_INFINITY,
        f64::INFINITY,
        &lo,
        &hi,
    );
    d2 <= tube.radius * tube.radius
}

/// Axis-aligned cube `min_corner + [0, side]ⁿ`.
#[derive(Debug, Clone, PartialEq)]
pub struct Cube {
    min_corner: Vec<f64>,
    side: f64,
}

impl Cube {
    pub fn new(min_corner: Vec<f64>, side: f64) -> Result<Self> {
        if !(side > 0.0 && side.is_finite()) {
            return Err(Error::invalid("cube side must be positive and finite"));
        }
        if min_corner.is_empty() || min_corner.iter().any(|x| !x.is_finite()) {
            return Err(Error::invalid("malformed cube corner"));
        }
        Ok(Cube { min_corner, side })
    }

    /// The cube of side `side` centred at `center`.
    pub fn centered(center: &[f64], side: f64) -> Result<Self> {
        Cube::new(center.iter().map(|c| c - side / 2.0).collect(), side)
    }

    pub fn dim(&self) -> usize {
        self.min_corner.len()
    }

    pub fn min_corner(&self) -> &[f64] {
        &self.min_corner
    }

    pub fn side(&self) -> f64 {
        self.side
    }

    pub fn max_corner(&self) -> Vec<f64> {
        self.min_corner.iter().map(|c| c + self.side).collect()
    }

    pub fn bounds(&self) -> (Vec<f64>, Vec<f64>) {
        (self.min_corner.clone(), self.max_corner())
    }

    pub fn center(&self) -> Vec<f64> {
        self.min_corner.iter().map(|c| c + self.side / 2.0).collect()
    }

    pub fn volume(&self) -> f64 {
        math::powi(self.side, self.dim() as i32)
    }

    pub fn diameter(&self) -> f64 {
        self.side * math::sqrt(self.dim() as f64)
    }

    pub fn contains(&self, p: &[f64]) -> bool {
        p.iter()
            .zip(&self.min_corner)
            .all(|(x, c)| *x >= *c && *x <= c + self.side)
    }

    /// The 2ⁿ vertices, in binary order of the "upper" mask.
    pub fn corners(&self) -> impl Iterator<Item = Vec<f64>> + '_ {
        let n = self.dim();
        (0..1usize << n).map(move |mask| {
            (0..n)
                .map(|i| self.min_corner[i] + if mask >> i & 1 == 1 { self.side } else { 0.0 })
                .collect()
        })
    }

    pub fn translated(&self, by: &[f64]) -> Result<Self> {
        check_dim(self.dim(), by.len())?;
        Cube::new(self.min_corner.iter().zip(by).map(|(c, b)| c + b).collect(), self.side)
    }
}

/// Equal-subcube tiling of a cube chosen for one scale step.
#[derive(Debug, Clone, PartialEq)]
pub struct Subdivision {
    parent: Cube,
    per_side: usize,
    sub_side: f64,
}

impl Subdivision {
    pub fn per_side(&self) -> usize {
        self.per_side
    }

    pub fn sub_side(&self) -> f64 {
        self.sub_side
    }

    pub fn len(&self) -> usize {
        self.per_side.pow(self.parent.dim() as u32)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Subcube number `index`, with the first axis varying fastest.
    pub fn cube_at(&self, mut index: usize) -> Cube {
        let mut corner = self.parent.min_corner.clone();
        for c in corner.iter_mut() {
            let i = index % self.per_side;
            index /= self.per_side;
            *c += i as f64 * self.sub_side;
        }
        Cube {
            min_corner: corner,
            side: self.sub_side,
        }
    }

    pub fn cubes(&self) -> impl Iterator<Item = Cube> + '_ {
        (0..self.len()).map(|i| self.cube_at(i))
    }
}

/// Admissible subcube sides for one step at scale `w`:
/// `[δ⁻¹W/(20n), δ⁻¹W/(10n)]`.
pub fn admissible_subcube_range(n: usize, delta: f64, w: f64) -> (f64, f64) {
    let upper = w / (delta * 10.0 * n as f64);
    (upper / 2.0, upper)
}

/// Plans the tiling of `cube` into `kⁿ` equal subcubes whose side lies in
/// [`admissible_subcube_range`].
pub fn plan_subdivision(cube: &Cube, delta: f64, w: f64) -> Result<Subdivision> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::invalid("delta must lie in (0, 1)"));
    }
    if !(w > 0.0 && w.is_finite()) {
        return Err(Error::invalid("scale must be positive"));
    }
    let n = cube.dim();
    let (lower, upper) = admissible_subcube_range(n, delta, w);
    let side = cube.side;
    if side < lower * (1.0 - TOLERANCE) {
        return Err(Error::precondition(alloc::format!(
            "cube side {side} is below the smallest admissible subcube side {lower}"
        )));
    }
    let mut k = math::ceil(side / upper).max(1.0) as usize;
    if side / k as f64 > upper * (1.0 + TOLERANCE) {
        k += 1;
    }
    if side / (k as f64) < lower * (1.0 - TOLERANCE) {
        k -= 1;
    }
    let sub_side = side / k as f64;
    if k == 0 || sub_side < lower * (1.0 - TOLERANCE) || sub_side > upper * (1.0 + TOLERANCE) {
        return Err(Error::precondition("no admissible equal subdivision"));
    }
    Ok(Subdivision {
        parent: cube.clone(),
        per_side: k,
        sub_side,
    })
}

/// Partitions `cube` into equal subcubes of side in `[δ⁻¹W/(20n), δ⁻¹W/(10n)]`.
pub fn subdivide_cube(cube: &Cube, delta: f64, w: f64) -> Result<alloc::vec::Vec<Cube>> {
    Ok(plan_subdivision(cube, delta, w)?.cubes().collect())
}

/// Whether the fattening to radius `2W` is guaranteed for angle `δ` in ℝⁿ:
/// `tan δ · (1 + 1/(20nδ)) ≤ 1`.
///
/// A point of the cube within `W` of the line lies within
/// `W + tan δ · (W + side/2)` of the axis-parallel line through the cube's
/// central slice, and `side/2 ≤ δ⁻¹W/(20n)`.
pub fn fattening_admissible(n: usize, delta: f64) -> bool {
    delta > 0.0 && delta < 1.0 && math::tan(delta) * (1.0 + 1.0 / (20.0 * n as f64 * delta)) <= 1.0
}

/// The axis-parallel tube of radius `2W` dominating `tube` on `cube`.
///
/// It runs along `e_j` through the point where the tube's axis crosses the
/// hyperplane `x_j = centre_j` of the cube.
pub fn fatten_axis_parallel(tube: &Tube, j: usize, cube: &Cube, delta: f64) -> Result<Tube> {
    let n = tube.dim();
    check_dim(n, cube.dim())?;
    if j >= n {
        return Err(Error::invalid("axis out of range"));
    }
    if !fattening_admissible(n, delta) {
        return Err(Error::precondition(alloc::format!(
            "delta = {delta} is too large for the 2W fattening in dimension {n}"
        )));
    }
    let angle = angle_from_axis(tube.line.dir(), j);
    if angle > delta * (1.0 + TOLERANCE) {
        return Err(Error::precondition(alloc::format!(
            "tube angle {angle} exceeds delta {delta}"
        )));
    }
    let (_, upper) = admissible_subcube_range(n, delta, tube.radius);
    if cube.side > upper * (1.0 + TOLERANCE) {
        return Err(Error::precondition(alloc::format!(
            "cube side {} exceeds delta^-1 W / (10 n) = {upper}",
            cube.side
        )));
    }
    let center = cube.center();
    let foot = tube
        .line
        .point_at_coordinate(j, center[j])
        .ok_or_else(|| Error::precondition("tube is orthogonal to its axis"))?;
    Tube::new(Line::new(foot, Direction::axis(n, j))?, 2.0 * tube.radius)
}
