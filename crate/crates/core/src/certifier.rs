//! The multiscale argument as arithmetic.
//!
//! One step at scale `W` tiles the cube into subcubes of side between
//! `δ⁻¹W/(20n)` and `δ⁻¹W/(10n)`. On such a subcube `Q` every member whose
//! `W`-tube meets `Q` lies inside the axis-parallel tube of radius `2W`
//! through its crossing of the central slice (see
//! [`fattening_admissible`]), so Loomis-Whitney applied to balls of radius
//! `2W` gives
//!
//! ```text
//! ∫_Q Π_j f_{j,W}^{1/(n-1)} ≤ Π_j (ω_{n-1} (2W)^{n-1} N_j(Q))^{1/(n-1)}
//!                           = c_lw Wⁿ Π_j N_j(Q)^{1/(n-1)},
//! c_lw = ω_{n-1}^{n/(n-1)} 2ⁿ.
//! ```
//!
//! The same members have `δ⁻¹W`-tubes covering all of `Q` (the diameter of
//! `Q` is at most `δ⁻¹W/10`), so the right side is at most
//! `c_lw Wⁿ |Q|⁻¹ ∫_Q Π_j f_{j,δ⁻¹W}^{1/(n-1)}`, and `|Q| ≥ (δ⁻¹W/(20n))ⁿ`
//! turns `Wⁿ |Q|⁻¹` into at most `(20n)ⁿ δⁿ`. Summing over `Q`:
//!
//! ```text
//! ∫_{Q_S} Π_j f_{j,W}^{1/(n-1)} ≤ c_step δⁿ ∫_{Q_S} Π_j f_{j,δ⁻¹W}^{1/(n-1)},
//! c_step = c_lw (20n)ⁿ.
//! ```
//!
//! Iterating from `W = 1` to `W = δ^{-M} = S` and bounding
//! `f_{j,S} ≤ N_j` yields `c_step^M Π_j N_j^{1/(n-1)}`.

use alloc::vec::Vec;

use crate::error::{check_dim, Error, Result};
use crate::evaluator::{check_families, evaluate_refined, reduce, OverlapValue, RefineSpec, Shape, TubeFamily};
use crate::geometry::{
    admissible_subcube_range, angle_from_axis, plan_subdivision, Cube, Subdivision, Tube, TOLERANCE,
};
use crate::math;

/// Smallest `δ` accepted by [`delta_for_epsilon`].
pub const MIN_DELTA: f64 = 1e-300;

/// Step audits in a certificate are skipped above this many subcubes.
pub const AUDIT_LIMIT: usize = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constants {
    pub n: usize,
    /// `ω_{n-1}^{n/(n-1)} 2ⁿ`: one subcube, fattened radius `2W`.
    pub c_lw: f64,
    /// `c_lw (20n)ⁿ`: one full step.
    pub c_step: f64,
}

impl Constants {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::Dimension { expected: 2, got: n });
        }
        let omega = math::unit_ball_volume(n - 1);
        let c_lw = math::powf(omega, n as f64 / (n - 1) as f64) * math::powi(2.0, n as i32);
        let c_step = c_lw * math::powi(20.0 * n as f64, n as i32);
        Ok(Constants { n, c_lw, c_step })
    }

    pub fn ln_c_step(&self) -> f64 {
        math::ln(self.c_step)
    }

    /// `log c_step / log δ⁻¹`: the exponent of `S` paid by the chain.
    pub fn epsilon_exponent(&self, delta: f64) -> f64 {
        self.ln_c_step() / -math::ln(delta)
    }
}

fn check_delta(delta: f64) -> Result<()> {
    if delta > 0.0 && delta < 1.0 {
        Ok(())
    } else {
        Err(Error::invalid("delta must lie in (0, 1)"))
    }
}

/// Checks the small-angle hypothesis and returns the largest slope of any
/// member relative to its axis.
///
/// Lines must make angle at most `δ` with their axis and curves must have
/// slope at most `δ`. The `2W` fattening then needs
/// `slope · (1 + 1/(20nδ)) ≤ 1`.
pub fn check_small_angle(families: &[TubeFamily], delta: f64) -> Result<f64> {
    let n = check_families(families)?;
    check_delta(delta)?;
    let limit = delta * (1.0 + TOLERANCE);
    let mut slope: f64 = 0.0;
    for (j, f) in families.iter().enumerate() {
        for (a, m) in f.members().iter().enumerate() {
            let s = match &m.shape {
                Shape::Line(l) => {
                    let angle = angle_from_axis(l.dir(), j);
                    if angle > limit {
                        return Err(Error::precondition(alloc::format!(
                            "member {a} of family {j} has angle {angle} > delta = {delta}"
                        )));
                    }
                    math::tan(angle)
                }
                Shape::Curve(c) => {
                    let s = c.max_slope();
                    if s > limit {
                        return Err(Error::precondition(alloc::format!(
                            "member {a} of family {j} has slope {s} > delta = {delta}"
                        )));
                    }
                    s
                }
            };
            slope = slope.max(s);
        }
    }
    if slope * (1.0 + 1.0 / (20.0 * n as f64 * delta)) > 1.0 + TOLERANCE {
        return Err(Error::precondition(alloc::format!(
            "delta = {delta} is too large for the 2W fattening in dimension {n}"
        )));
    }
    Ok(slope)
}

/// Weighted count of members whose `w`-neighbourhood meets the closed cube.
pub fn weighted_count(family: &TubeFamily, cube: &Cube, w: f64) -> f64 {
    family
        .members()
        .iter()
        .filter(|m| m.shape.meets_cube(w, cube))
        .map(|m| m.weight)
        .fold(0.0, |a, b| a + b)
}

/// Number of members whose `w`-neighbourhood meets the closed cube.
pub fn count_intersections(family: &TubeFamily, cube: &Cube, w: f64) -> usize {
    family.members().iter().filter(|m| m.shape.meets_cube(w, cube)).count()
}

/// Result of [`identically_one_check`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OneCheck {
    /// The `δ⁻¹W`-tube contains the whole cube.
    pub holds: bool,
    /// The cube side is at most `δ⁻¹W/(10n)` and the `W`-tube meets it.
    pub admissible: bool,
}

/// Whether the tube of radius `δ⁻¹W` around `tube`'s axis contains all of
/// `cube`, with `W = tube.radius()`.
///
/// Distance to a line is convex, so its maximum over the cube sits at a
/// corner.
pub fn identically_one_check(tube: &Tube, cube: &Cube, delta: f64) -> Result<OneCheck> {
    check_dim(tube.dim(), cube.dim())?;
    check_delta(delta)?;
    let w = tube.radius();
    let n = cube.dim();
    let (_, upper) = admissible_subcube_range(n, delta, w);
    let admissible = cube.side() <= upper * (1.0 + TOLERANCE) && Shape::Line(tube.line.clone()).meets_cube(w, cube);
    let big = w / delta;
    let far = cube.corners().map(|c| tube.line.distance_sq(&c)).fold(0.0, f64::max);
    Ok(OneCheck {
        holds: far <= big * big,
        admissible,
    })
}

/// The explicit bound of one scale step.
#[derive(Debug, Clone, PartialEq)]
pub struct StepBound {
    pub w: f64,
    pub delta: f64,
    pub subdivision: Subdivision,
    /// `counts[q][j] = N_j(Q_q)`, subcubes in [`Subdivision::cube_at`] order.
    pub counts: Vec<Vec<f64>>,
    /// `Σ_Q c_lw Wⁿ Π_j N_j(Q)^{1/(n-1)}`.
    pub numeric_bound: f64,
}

impl StepBound {
    /// Per family, the distinct values of `N_j(Q)` with their frequencies,
    /// in increasing order.
    pub fn histograms(&self) -> Vec<Vec<(f64, usize)>> {
        let n = self.counts.first().map_or(0, |c| c.len());
        (0..n)
            .map(|j| {
                let mut values: Vec<f64> = self.counts.iter().map(|c| c[j]).collect();
                values.sort_by(f64::total_cmp);
                let mut hist: Vec<(f64, usize)> = Vec::new();
                for v in values {
                    match hist.last_mut() {
                        Some((last, k)) if *last == v => *k += 1,
                        _ => hist.push((v, 1)),
                    }
                }
                hist
            })
            .collect()
    }
}

fn common_radius(families: &[TubeFamily]) -> Result<f64> {
    let w = families[0].radius();
    if families.iter().any(|f| f.radius() != w) {
        return Err(Error::invalid("all families must share one radius"));
    }
    Ok(w)
}

fn step_on(families: &[TubeFamily], cube: &Cube, delta: f64, w: f64) -> Result<StepBound> {
    let n = families.len();
    let sub = plan_subdivision(cube, delta, w)?;
    let consts = Constants::new(n)?;
    let counts = reduce::ordered_map(sub.len(), |q| {
        let c = sub.cube_at(q);
        families.iter().map(|f| weighted_count(f, &c, w)).collect::<Vec<f64>>()
    });
    let p = 1.0 / (n - 1) as f64;
    let scale = consts.c_lw * math::powi(w, n as i32);
    let terms: Vec<f64> = counts
        .iter()
        .map(|c| {
            scale
                * c.iter()
                    .map(|&x| if p == 1.0 { x } else { math::powf(x, p) })
                    .product::<f64>()
        })
        .collect();
    Ok(StepBound {
        w,
        delta,
        subdivision: sub,
        counts,
        numeric_bound: reduce::tree_sum(&terms),
    })
}

/// One scale step at the families' common radius `W`.
pub fn step_bound(families: &[TubeFamily], cube: &Cube, delta: f64) -> Result<StepBound> {
    check_small_angle(families, delta)?;
    check_dim(families.len(), cube.dim())?;
    let w = common_radius(families)?;
    if cube.side() < w / delta * (1.0 - TOLERANCE) {
        return Err(Error::precondition(alloc::format!(
            "cube side {} is below delta^-1 W = {}",
            cube.side(),
            w / delta
        )));
    }
    step_on(families, cube, delta, w)
}

/// Both sides of the one-step inequality at scale `W`, from [`verify_step_inequality`].
#[derive(Debug, Clone, PartialEq)]
pub struct StepCheck {
    /// `∫ Π f_{j,W}^{1/(n-1)}`.
    pub lhs: OverlapValue,
    /// `∫ Π f_{j,δ⁻¹W}^{1/(n-1)}`.
    pub rhs: OverlapValue,
    /// `lhs / (c_step δⁿ rhs)`, or 0 when both sides vanish.
    pub ratio: f64,
    /// Error of `ratio` propagated from both quadrature estimates.
    pub tolerance: f64,
    pub vacuous: bool,
    /// Both quadratures met their tolerance.
    pub converged: bool,
}

pub fn verify_step_inequality(families: &[TubeFamily], cube: &Cube, delta: f64, spec: RefineSpec) -> Result<StepCheck> {
    let n = families.len();
    check_small_angle(families, delta)?;
    check_dim(n, cube.dim())?;
    let w = common_radius(families)?;
    if cube.side() < w / delta * (1.0 - TOLERANCE) {
        return Err(Error::precondition("cube side is below delta^-1 W"));
    }
    let lhs = evaluate_refined(families, cube, spec)?;
    let wide: Vec<TubeFamily> = families
        .iter()
        .map(|f| f.with_radius(w / delta))
        .collect::<Result<_>>()?;
    let rhs = evaluate_refined(&wide, cube, spec)?;
    let converged = lhs.converged() && rhs.converged();
    let consts = Constants::new(n)?;
    let scale = consts.c_step * math::powi(delta, n as i32);
    if rhs.value == 0.0 {
        return Ok(StepCheck {
            ratio: 0.0,
            tolerance: 0.0,
            vacuous: lhs.value == 0.0,
            lhs,
            rhs,
            converged,
        });
    }
    let denom = scale * rhs.value;
    let ratio = lhs.value / denom;
    let tolerance = lhs.error_or_value() / denom + ratio * rhs.error_or_value() / rhs.value;
    Ok(StepCheck {
        lhs,
        rhs,
        ratio,
        tolerance,
        vacuous: false,
        converged,
    })
}

/// Cubes of side `δ^{-M}` on a grid anchored at `Q_S`'s min corner.
#[derive(Debug, Clone, PartialEq)]
pub struct Cover {
    pub side: f64,
    pub per_side: usize,
    pub cubes: Vec<Cube>,
}

impl Cover {
    pub fn multiplicity(&self) -> usize {
        self.cubes.len()
    }
}

/// Covers `cube` by `⌈S/δ^{-M}⌉ⁿ` cubes of side `δ^{-M}`.
pub fn cover_for_arbitrary_s(cube: &Cube, delta: f64, m: u32) -> Result<Cover> {
    check_delta(delta)?;
    let side = math::powi(1.0 / delta, m as i32);
    if !side.is_finite() {
        return Err(Error::invalid("delta^-M overflows"));
    }
    let ratio = cube.side() / side;
    let per_side = (math::ceil(ratio * (1.0 - TOLERANCE)).max(1.0)) as usize;
    let n = cube.dim();
    let total = per_side
        .checked_pow(n as u32)
        .filter(|&t| t <= 1 << 24)
        .ok_or_else(|| Error::invalid("cover is too large to enumerate"))?;
    let lo = cube.min_corner();
    let cubes = (0..total)
        .map(|idx| {
            let mut rest = idx;
            let corner = (0..n)
                .map(|i| {
                    let k = rest % per_side;
                    rest /= per_side;
                    lo[i] + k as f64 * side
                })
                .collect();
            Cube::new(corner, side)
        })
        .collect::<Result<_>>()?;
    Ok(Cover { side, per_side, cubes })
}

/// Smallest `M ≥ 0` with `δ^{-M} ≥ S`, tolerant of rounding when `S` is an
/// exact power.
pub fn steps_for_scale(s: f64, delta: f64) -> Result<u32> {
    check_delta(delta)?;
    if !(s >= 1.0 && s.is_finite()) {
        return Err(Error::invalid("S must be at least 1"));
    }
    let inv = 1.0 / delta;
    let reach = |m: u32| math::powi(inv, m as i32) >= s * (1.0 - TOLERANCE);
    let mut m = math::ceil(math::ln(s) / math::ln(inv) - TOLERANCE).max(0.0) as u32;
    while !reach(m) {
        m += 1;
    }
    while m > 0 && reach(m - 1) {
        m -= 1;
    }
    Ok(m)
}

/// Summary of one step's subcube counts, kept in certificates for audit.
#[derive(Debug, Clone, PartialEq)]
pub struct StepAudit {
    pub w: f64,
    pub per_side: usize,
    pub sub_side: f64,
    pub numeric_bound: f64,
    pub histograms: Vec<Vec<(f64, usize)>>,
}

/// A machine-checkable bound on `∫_{Q_S} Π_j f_{j,1}^{1/(n-1)}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub n: usize,
    pub delta: f64,
    pub s: f64,
    pub m: u32,
    /// `W_k = δ^{-k}` for `k = 0..=M`.
    pub ladder: Vec<f64>,
    pub constants: Constants,
    /// `N_j`: total member weight of family `j`.
    pub counts: Vec<f64>,
    pub cover_side: f64,
    pub multiplicity: usize,
    pub epsilon_exponent: f64,
    /// `multiplicity · c_step^M · Π_j N_j^{1/(n-1)}`.
    pub final_bound: f64,
    /// The `W = 1` step on the first covering cube, when `M ≥ 1` and the
    /// subdivision is at most [`AUDIT_LIMIT`] subcubes.
    pub first_step: Option<StepAudit>,
}

impl Certificate {
    /// Recomputes `final_bound` from the recorded data.
    pub fn chain_value(&self) -> f64 {
        let p = 1.0 / (self.n - 1) as f64;
        self.multiplicity as f64
            * math::exp(self.m as f64 * self.constants.ln_c_step())
            * self.counts.iter().map(|&x| math::powf(x, p)).product::<f64>()
    }
}

/// Runs the chain from `W = 1` up to `δ^{-M} ≥ S` on unit-radius families.
pub fn certify_multiscale(families: &[TubeFamily], cube: &Cube, delta: f64) -> Result<Certificate> {
    check_small_angle(families, delta)?;
    let n = families.len();
    check_dim(n, cube.dim())?;
    let w = common_radius(families)?;
    if math::abs(w - 1.0) > TOLERANCE {
        return Err(Error::precondition("certification starts from unit radius"));
    }
    let s = cube.side();
    let m = steps_for_scale(s, delta)?;
    let constants = Constants::new(n)?;
    let cover = cover_for_arbitrary_s(cube, delta, m)?;
    let counts: Vec<f64> = families.iter().map(|f| f.total_weight()).collect();
    let ladder = (0..=m).map(|k| math::powi(1.0 / delta, k as i32)).collect();
    let mut cert = Certificate {
        n,
        delta,
        s,
        m,
        ladder,
        constants,
        counts,
        cover_side: cover.side,
        multiplicity: cover.multiplicity(),
        epsilon_exponent: constants.epsilon_exponent(delta),
        final_bound: 0.0,
        first_step: None,
    };
    cert.final_bound = cert.chain_value();
    if m >= 1 {
        let first = &cover.cubes[0];
        let sub = plan_subdivision(first, delta, 1.0)?;
        if sub.len() <= AUDIT_LIMIT {
            let step = step_on(families, first, delta, 1.0)?;
            cert.first_step = Some(StepAudit {
                w: 1.0,
                per_side: step.subdivision.per_side(),
                sub_side: step.subdivision.sub_side(),
                numeric_bound: step.numeric_bound,
                histograms: step.histograms(),
            });
        }
    }
    Ok(cert)
}

/// `δ = exp(-log c_step / ε)`, so that `log c_step / log δ⁻¹ = ε`.
pub fn delta_for_epsilon(eps: f64, consts: &Constants) -> Result<f64> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::invalid("epsilon must be positive"));
    }
    let delta = math::exp(-consts.ln_c_step() / eps);
    if !(delta >= MIN_DELTA) {
        return Err(Error::Underflow(alloc::format!(
            "delta = exp(-{} / {eps}) is below {MIN_DELTA:e}",
            consts.ln_c_step()
        )));
    }
    Ok(delta)
}
