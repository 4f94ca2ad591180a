//! Reduction of general and transversal configurations to the small-angle
//! case.
//!
//! Direction sets are split into caps, one subproblem per tuple of caps.
//! Since `1/(n-1) ≤ 1`, `(Σ_β x_β)^{1/(n-1)} ≤ Σ_β x_β^{1/(n-1)}` and the
//! integral of the full configuration is at most the sum over tuples. In
//! each tuple the frame map `A` sends the cap centres to the coordinate
//! axes. A unit tube maps into the tube of radius `σ_max(A)` about the image
//! line, and the change of variables costs `|det A|⁻¹`. Rescaling by
//! `1/σ_max` restores unit radius, so
//!
//! ```text
//! ∫_Q Π_j f_{j,β}^{1/(n-1)} ≤ (σ_maxⁿ / |det A|) ∫_{Q'} Π_j f'_{j,β}^{1/(n-1)},
//! ```
//!
//! where `Q'` is the rescaled bounding cube of `A(Q)` and `f'` are the
//! rescaled image families at unit radius. The factor `σ_maxⁿ/|det A|` is the
//! problem's `distortion_factor`; it is at least 1.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::certifier::{certify_multiscale, delta_for_epsilon, Certificate, Constants};
use crate::error::{Error, Result};
use crate::evaluator::{check_families, evaluate_overlap, reduce, GridSpec, Member, Shape, TubeFamily};
use crate::geometry::{
    angle_from_axis, cap_cover_locate, frame_map, wedge_volume, Cap, Cube, Direction, Line, LinearMap, TOLERANCE,
};
use crate::math;

/// Largest number of cap tuples a reduction will enumerate.
pub const MAX_TUPLES: usize = 1 << 20;

/// Attempts at halving the transversal cap radius before giving up.
const MAX_HALVINGS: u32 = 30;

/// One small-angle subproblem.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedProblem {
    /// Cap centre per family, oriented as the members assigned to it.
    pub centers: Vec<Direction>,
    /// Frame map sending each centre to its coordinate axis.
    pub map: LinearMap,
    /// Image families, rescaled to unit radius.
    pub families: Vec<TubeFamily>,
    /// Rescaled bounding cube of the image of the original cube.
    pub cube: Cube,
    /// `σ_max(A)ⁿ / |det A|`.
    pub distortion_factor: f64,
    /// Largest recomputed angle of an image member from its axis.
    pub max_angle: f64,
}

fn line_of(m: &Member, axis: usize, index: usize) -> Result<&Line> {
    match &m.shape {
        Shape::Line(l) => Ok(l),
        Shape::Curve(_) => Err(Error::invalid(alloc::format!(
            "member {index} of family {axis} is a curve; reductions take straight tubes"
        ))),
    }
}

/// Partitions a family by the first cap containing each member direction,
/// either orientation. Returns one subfamily per cap, possibly empty.
pub fn split_by_caps(family: &TubeFamily, caps: &[Cap]) -> Result<Vec<TubeFamily>> {
    let mut parts: Vec<Vec<Member>> = alloc::vec![Vec::new(); caps.len()];
    for (a, m) in family.members().iter().enumerate() {
        let d = line_of(m, family.axis(), a)?.dir();
        let neg = d.negated();
        let slot = caps
            .iter()
            .position(|c| c.contains_within(d, TOLERANCE) || c.contains_within(&neg, TOLERANCE))
            .ok_or(Error::Uncovered {
                axis: family.axis(),
                index: a,
            })?;
        parts[slot].push(m.clone());
    }
    parts.into_iter().map(|p| family.with_members(p)).collect()
}

/// Image of the members under `map`, scaled by `1/scale`.
fn transform_family(family: &TubeFamily, members: &[Member], map: &LinearMap, scale: f64) -> Result<TubeFamily> {
    let out = members
        .iter()
        .enumerate()
        .map(|(a, m)| {
            let l = line_of(m, family.axis(), a)?;
            let anchor: Vec<f64> = map.apply(l.anchor()).into_iter().map(|x| x / scale).collect();
            let dir = map.apply_direction(l.dir())?;
            Ok(Member {
                shape: Shape::Line(Line::new(anchor, dir)?),
                weight: m.weight,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    TubeFamily::new(family.dim(), family.axis(), 1.0, out)
}

/// Builds the subproblem for one tuple of caps. `groups[j]` holds the
/// members of family `j` assigned to cap `centers[j]`.
fn build_problem(
    families: &[TubeFamily],
    cube: &Cube,
    centers: Vec<Direction>,
    groups: &[&[Member]],
) -> Result<ReducedProblem> {
    let n = families.len();
    let map = frame_map(&centers)?;
    let (_, sigma_max) = map.length_distortion();
    let distortion_factor = math::powi(sigma_max, n as i32) / map.volume_distortion();
    let transformed = families
        .iter()
        .zip(groups)
        .map(|(f, g)| transform_family(f, g, &map, sigma_max))
        .collect::<Result<Vec<_>>>()?;
    let max_angle = transformed.iter().map(|f| f.max_tilt()).fold(0.0, f64::max);

    let mut lo = alloc::vec![f64::INFINITY; n];
    let mut hi = alloc::vec![f64::NEG_INFINITY; n];
    for c in cube.corners() {
        for (i, x) in map.apply(&c).into_iter().enumerate() {
            lo[i] = lo[i].min(x / sigma_max);
            hi[i] = hi[i].max(x / sigma_max);
        }
    }
    let side = lo.iter().zip(&hi).map(|(a, b)| b - a).fold(1.0, f64::max);
    Ok(ReducedProblem {
        centers,
        map,
        families: transformed,
        cube: Cube::new(lo, side)?,
        distortion_factor: distortion_factor.max(1.0),
        max_angle,
    })
}

fn check_unit_lines(families: &[TubeFamily]) -> Result<usize> {
    let n = check_families(families)?;
    for (j, f) in families.iter().enumerate() {
        if math::abs(f.radius() - 1.0) > TOLERANCE {
            return Err(Error::precondition("reductions start from unit radius"));
        }
        for (a, m) in f.members().iter().enumerate() {
            line_of(m, j, a)?;
        }
    }
    Ok(n)
}

/// Enumerates tuples of nonempty groups in lexicographic order (family 0
/// fastest) and builds each problem, in parallel with ordered output.
fn build_all<F>(
    families: &[TubeFamily],
    cube: &Cube,
    groups: &[Vec<(Direction, Vec<Member>)>],
    check: F,
) -> Result<Vec<ReducedProblem>>
where
    F: Fn(&[Direction]) -> Result<()> + Sync + Send,
{
    if groups.iter().any(|g| g.is_empty()) {
        return Ok(Vec::new());
    }
    let total = groups
        .iter()
        .try_fold(1usize, |acc, g| acc.checked_mul(g.len()))
        .filter(|&t| t <= MAX_TUPLES)
        .ok_or_else(|| Error::invalid("too many cap tuples to enumerate"))?;
    let results = reduce::ordered_map(total, |t| {
        let mut rest = t;
        let mut centers = Vec::with_capacity(groups.len());
        let mut members: Vec<&[Member]> = Vec::with_capacity(groups.len());
        for g in groups {
            let (c, ms) = &g[rest % g.len()];
            rest /= g.len();
            centers.push(c.clone());
            members.push(ms);
        }
        check(&centers)?;
        build_problem(families, cube, centers, &members)
    });
    results.into_iter().collect()
}

/// Checks that every problem's image members are within `delta` of their
/// axes.
fn check_angles(problems: &[ReducedProblem], delta: f64) -> Result<()> {
    for p in problems {
        if p.max_angle > delta * (1.0 + TOLERANCE) {
            return Err(Error::precondition(alloc::format!(
                "transformed angle {} exceeds delta = {delta}",
                p.max_angle
            )));
        }
    }
    Ok(())
}

/// [`reduce_general_to_small_angle`] at an explicit `δ`.
///
/// Members are assigned to the cells of the [`cap_cover`](crate::geometry::cap_cover)
/// net of radius `δ/10` over the cap of radius `(10n)⁻¹` about `e_j`, using
/// [`cap_cover_locate`]. Only cells holding a member produce problems.
pub fn reduce_with_delta(families: &[TubeFamily], cube: &Cube, delta: f64) -> Result<Vec<ReducedProblem>> {
    let n = check_unit_lines(families)?;
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::invalid("delta must lie in (0, 1)"));
    }
    let big = 1.0 / (10.0 * n as f64);
    let rho = (delta / 10.0).min(big);
    let mut groups = Vec::with_capacity(n);
    for (j, f) in families.iter().enumerate() {
        let cap = Cap::new(Direction::axis(n, j), big)?;
        let mut cells: BTreeMap<usize, (Direction, Vec<Member>)> = BTreeMap::new();
        for (a, m) in f.members().iter().enumerate() {
            let l = line_of(m, j, a)?;
            let d = l.dir().oriented_to(j);
            if angle_from_axis(&d, j) > big * (1.0 + TOLERANCE) {
                return Err(Error::precondition(alloc::format!(
                    "member {a} of family {j} is more than (10n)^-1 from its axis"
                )));
            }
            let (idx, cell) = cap_cover_locate(&cap, rho, &d)?.ok_or(Error::Uncovered { axis: j, index: a })?;
            let oriented = Line::new(l.anchor().to_vec(), d)?;
            cells
                .entry(idx)
                .or_insert_with(|| (cell.center().clone(), Vec::new()))
                .1
                .push(Member {
                    shape: Shape::Line(oriented),
                    weight: m.weight,
                });
        }
        groups.push(cells.into_values().collect::<Vec<_>>());
    }
    let problems = build_all(families, cube, &groups, |_| Ok(()))?;
    check_angles(&problems, delta)?;
    Ok(problems)
}

/// Splits families with angles at most `(10n)⁻¹` into small-angle problems
/// at `δ = delta_for_epsilon(ε)`.
pub fn reduce_general_to_small_angle(families: &[TubeFamily], cube: &Cube, eps: f64) -> Result<Vec<ReducedProblem>> {
    let n = check_families(families)?;
    let delta = delta_for_epsilon(eps, &Constants::new(n)?)?;
    reduce_with_delta(families, cube, delta)
}

/// Result of [`transversal_reduce`].
#[derive(Debug, Clone, PartialEq)]
pub struct TransversalReduction {
    /// Cap radius finally used, after any halvings.
    pub rho: f64,
    pub problems: Vec<ReducedProblem>,
}

/// Greedy clustering of a family's directions into caps of radius `rho`:
/// each member joins the first cap whose centre is within `rho` as an
/// unoriented line, otherwise it opens a cap centred on itself.
fn cluster(family: &TubeFamily, rho: f64) -> Result<Vec<(Direction, Vec<Member>)>> {
    let mut caps: Vec<(Direction, Vec<Member>)> = Vec::new();
    for (a, m) in family.members().iter().enumerate() {
        let l = line_of(m, family.axis(), a)?;
        let d = l.dir();
        let slot = caps.iter().position(|(c, _)| c.line_angle_to(d) <= rho);
        let (center, bucket) = match slot {
            Some(i) => {
                let (c, b) = &mut caps[i];
                (c.clone(), b)
            }
            None => {
                caps.push((d.clone(), Vec::new()));
                let (c, b) = caps.last_mut().expect("just pushed");
                (c.clone(), b)
            }
        };
        let oriented = if math::dot(center.as_slice(), d.as_slice()) < 0.0 {
            d.negated()
        } else {
            d.clone()
        };
        bucket.push(Member {
            shape: Shape::Line(Line::new(l.anchor().to_vec(), oriented)?),
            weight: m.weight,
        });
    }
    Ok(caps)
}

/// Reduction for direction sets `S_j` with `|v_1 ∧ … ∧ v_n| ≥ ν` on every
/// tuple of member directions.
///
/// Caps have radius `ρ = min(ν/(100n), δ/10)` with `δ = delta_for_epsilon(ε)`.
/// Replacing a unit column by one within angle `ρ` moves the determinant by
/// at most the chord `2 sin(ρ/2)`, so every tuple in a cap tuple has wedge at
/// least `wedge(centres) - 2n sin(ρ/2)`; cap tuples where this lower bound
/// falls below `ν/2` are rejected. When a recomputed image angle exceeds `δ`
/// the caps are rebuilt at half the radius.
pub fn transversal_reduce(families: &[TubeFamily], cube: &Cube, nu: f64, eps: f64) -> Result<TransversalReduction> {
    let n = check_families(families)?;
    let delta = delta_for_epsilon(eps, &Constants::new(n)?)?;
    transversal_reduce_with_delta(families, cube, nu, delta)
}

/// [`transversal_reduce`] at an explicit `δ`.
pub fn transversal_reduce_with_delta(
    families: &[TubeFamily],
    cube: &Cube,
    nu: f64,
    delta: f64,
) -> Result<TransversalReduction> {
    let n = check_unit_lines(families)?;
    if !(nu > 0.0 && nu <= 1.0) {
        return Err(Error::invalid("nu must lie in (0, 1]"));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::invalid("delta must lie in (0, 1)"));
    }
    let mut rho = (nu / (100.0 * n as f64)).min(delta / 10.0);
    for _ in 0..=MAX_HALVINGS {
        let groups = families.iter().map(|f| cluster(f, rho)).collect::<Result<Vec<_>>>()?;
        let slack = n as f64 * 2.0 * math::sin(rho / 2.0);
        let problems = build_all(families, cube, &groups, |centers| {
            let w = wedge_volume(centers)?;
            if w - slack < nu / 2.0 {
                return Err(Error::precondition(alloc::format!(
                    "cap tuple has wedge {w} - {slack} below nu/2 = {}",
                    nu / 2.0
                )));
            }
            Ok(())
        })?;
        if check_angles(&problems, delta).is_ok() {
            return Ok(TransversalReduction { rho, problems });
        }
        rho /= 2.0;
    }
    Err(Error::precondition(
        "transformed angles stay above delta after repeated cap halving",
    ))
}

/// `Σ_problems distortion_factor · final_bound` with each problem
/// certified at `delta`. Returns the total and the certificates in problem
/// order.
pub fn certify_reduced(problems: &[ReducedProblem], delta: f64) -> Result<(f64, Vec<Certificate>)> {
    let certs = reduce::ordered_map(problems.len(), |i| {
        certify_multiscale(&problems[i].families, &problems[i].cube, delta)
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let terms: Vec<f64> = problems
        .iter()
        .zip(&certs)
        .map(|(p, c)| p.distortion_factor * c.final_bound)
        .collect();
    Ok((reduce::tree_sum(&terms), certs))
}

fn integer_weight(w: f64) -> Option<usize> {
    (w >= 0.0 && w == math::round(w) && w < 1e9).then_some(w as usize)
}

/// Replaces each member of weight `w` by `w` unit-weight copies.
pub fn expand_integer_weights(families: &[TubeFamily]) -> Result<Vec<TubeFamily>> {
    families
        .iter()
        .map(|f| {
            let mut members = Vec::new();
            for (a, m) in f.members().iter().enumerate() {
                let k = integer_weight(m.weight).ok_or_else(|| {
                    Error::invalid(alloc::format!(
                        "member {a} of family {} has non-integer weight {}",
                        f.axis(),
                        m.weight
                    ))
                })?;
                members.extend(core::iter::repeat_n(m.clone().weighted(1.0), k));
            }
            f.with_members(members)
        })
        .collect()
}

/// Whether the weighted configuration and its multiplicity expansion give
/// bit-identical quadrature values on the same grid.
pub fn weighted_multiplicity_check(families: &[TubeFamily], cube: &Cube, grid: GridSpec) -> Result<bool> {
    let expanded = expand_integer_weights(families)?;
    let a = evaluate_overlap(families, cube, grid)?.value;
    let b = evaluate_overlap(&expanded, cube, grid)?.value;
    Ok(a.to_bits() == b.to_bits())
}

/// Both sides of the rational-weight comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RationalCheck {
    /// `q^{n/(n-1)}` times the value with the original weights.
    pub scaled: f64,
    /// Value after multiplying weights by `q` and expanding.
    pub expanded: f64,
    pub rel_diff: f64,
}

/// For weights that are multiples of `1/q`: scaling every weight by `q`
/// multiplies the functional by `q^{n/(n-1)}`, and the scaled weights are
/// integers that expand into copies.
pub fn rational_weight_check(families: &[TubeFamily], cube: &Cube, grid: GridSpec, q: u32) -> Result<RationalCheck> {
    let n = check_families(families)?;
    if q == 0 {
        return Err(Error::invalid("denominator must be positive"));
    }
    let qf = q as f64;
    let integral = families
        .iter()
        .map(|f| {
            let members = f
                .members()
                .iter()
                .map(|m| {
                    let w = math::round(m.weight * qf);
                    if math::abs(w - m.weight * qf) > 1e-9 * w.max(1.0) {
                        return Err(Error::invalid(alloc::format!(
                            "weight {} is not a multiple of 1/{q}",
                            m.weight
                        )));
                    }
                    Ok(m.clone().weighted(w))
                })
                .collect::<Result<Vec<_>>>()?;
            f.with_members(members)
        })
        .collect::<Result<Vec<_>>>()?;
    let expanded = evaluate_overlap(&expand_integer_weights(&integral)?, cube, grid)?.value;
    let base = evaluate_overlap(families, cube, grid)?.value;
    let scaled = math::powf(qf, n as f64 / (n - 1) as f64) * base;
    let rel_diff = if expanded == 0.0 && scaled == 0.0 {
        0.0
    } else {
        math::abs(scaled - expanded) / expanded.abs().max(scaled.abs())
    };
    Ok(RationalCheck {
        scaled,
        expanded,
        rel_diff,
    })
}
