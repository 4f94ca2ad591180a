//! Seeded random configurations.
//!
//! Every generator draws from `ChaCha8Rng::seed_from_u64(seed)` (the
//! `rand_chacha` crate) in a fixed order: family by family, member by
//! member, anchor coordinates before direction before weight. The output is
//! therefore a pure function of the spec.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::evaluator::{Member, TubeFamily};
use crate::geometry::{angle_from_axis, Cube, Direction, Line, LipschitzCurve, TOLERANCE};
use crate::math;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Regime {
    AxisParallel,
    /// Directions uniform in the cap of radius `delta` about `e_j`.
    SmallAngle {
        delta: f64,
    },
    /// Directions uniform in the cap of radius `(10n)⁻¹` about `e_j`.
    General,
    /// Polylines over `x_j` spanning the cube, `segments` pieces of slope at
    /// most `delta`.
    Lipschitz {
        delta: f64,
        segments: usize,
    },
    /// Small-angle lines with weights uniform in `[min_weight, max_weight]`,
    /// or uniform over the integers in that range when `integer` is set.
    Weighted {
        delta: f64,
        min_weight: f64,
        max_weight: f64,
        integer: bool,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenSpec {
    pub n: usize,
    pub counts: Vec<usize>,
    pub regime: Regime,
    pub cube: Cube,
    pub seed: u64,
}

impl GenSpec {
    pub fn new(n: usize, counts: Vec<usize>, regime: Regime, cube: Cube, seed: u64) -> Self {
        GenSpec {
            n,
            counts,
            regime,
            cube,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n;
        if n < 2 {
            return Err(Error::Dimension { expected: 2, got: n });
        }
        if self.counts.len() != n || self.cube.dim() != n {
            return Err(Error::invalid("counts and cube must match the dimension"));
        }
        let angle_ok = |d: f64| (0.0..math::PI / 2.0).contains(&d);
        match self.regime {
            Regime::AxisParallel | Regime::General => Ok(()),
            Regime::SmallAngle { delta } if angle_ok(delta) => Ok(()),
            Regime::Lipschitz { delta, segments } if delta >= 0.0 && delta.is_finite() && segments >= 1 => Ok(()),
            Regime::Weighted {
                delta,
                min_weight,
                max_weight,
                integer,
            } if angle_ok(delta)
                && min_weight >= 0.0
                && min_weight <= max_weight
                && max_weight.is_finite()
                && (!integer || math::ceil(min_weight) <= math::floor(max_weight)) =>
            {
                Ok(())
            }
            _ => Err(Error::invalid("regime parameters out of range")),
        }
    }

    /// Largest angle (or slope, for polylines) the regime may produce.
    pub fn angle_limit(&self) -> f64 {
        match self.regime {
            Regime::AxisParallel => 0.0,
            Regime::SmallAngle { delta } | Regime::Weighted { delta, .. } | Regime::Lipschitz { delta, .. } => delta,
            Regime::General => 1.0 / (10.0 * self.n as f64),
        }
    }
}

/// A direction uniform in the cap of angular radius `alpha` about `e_j`.
///
/// Points `x` of the tangent plane at `e_j` map to directions
/// `(e_j + x)/|e_j + x|`, which carries the ball of radius `tan α` onto the
/// cap; surface measure pulls back to `(1 + |x|²)^{-n/2} dx`. So `x` is drawn
/// uniform in the ball (rejection from the cube) and kept with probability
/// `(1 + |x|²)^{-n/2}`.
pub fn sample_cap_direction<R: Rng>(rng: &mut R, n: usize, j: usize, alpha: f64) -> Direction {
    if alpha <= 0.0 {
        return Direction::axis(n, j);
    }
    // Shrunk a hair so that rounding cannot push the angle past alpha.
    let t = math::tan(alpha) * (1.0 - 1e-12);
    let mut x = alloc::vec![0.0; n - 1];
    loop {
        for xi in x.iter_mut() {
            *xi = rng.gen_range(-t..=t);
        }
        let r2: f64 = x.iter().map(|v| v * v).sum();
        if r2 > t * t {
            continue;
        }
        let accept = math::powf(1.0 + r2, -(n as f64) / 2.0);
        if rng.gen::<f64>() < accept {
            break;
        }
    }
    let mut v = Vec::with_capacity(n);
    v.extend_from_slice(&x[..j]);
    v.push(1.0);
    v.extend_from_slice(&x[j..]);
    Direction::new(v).expect("nonzero by construction")
}

fn uniform_point<R: Rng>(rng: &mut R, cube: &Cube) -> Vec<f64> {
    let s = cube.side();
    cube.min_corner().iter().map(|&lo| lo + s * rng.gen::<f64>()).collect()
}

fn random_polyline<R: Rng>(rng: &mut R, cube: &Cube, j: usize, delta: f64, segments: usize) -> Result<LipschitzCurve> {
    let n = cube.dim();
    let lo = cube.min_corner()[j];
    let s = cube.side();
    // The last breakpoint is the cube's edge exactly, not a rounded multiple.
    let breakpoints: Vec<f64> = (0..=segments)
        .map(|i| {
            if i == segments {
                lo + s
            } else {
                lo + s * i as f64 / segments as f64
            }
        })
        .collect();
    let start = uniform_point(rng, cube);
    let mut current: Vec<f64> = start
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != j)
        .map(|(_, x)| *x)
        .collect();
    let mut values = Vec::with_capacity(segments + 1);
    values.push(current.clone());
    for w in breakpoints.windows(2) {
        let reach = delta * (w[1] - w[0]) * (1.0 - 1e-9);
        // A uniform point of the ball of radius `reach` in ℝ^{n-1}.
        let step: Vec<f64> = loop {
            let v: Vec<f64> = (0..n - 1).map(|_| rng.gen_range(-1.0..=1.0)).collect();
            if math::norm(&v) <= 1.0 {
                break v.into_iter().map(|x| x * reach).collect();
            }
        };
        for (c, d) in current.iter_mut().zip(&step) {
            *c += d;
        }
        values.push(current.clone());
    }
    LipschitzCurve::new(j, breakpoints, values, delta)
}

pub fn generate(spec: &GenSpec) -> Result<Vec<TubeFamily>> {
    spec.validate()?;
    let n = spec.n;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut families = Vec::with_capacity(n);
    for j in 0..n {
        let mut members = Vec::with_capacity(spec.counts[j]);
        for _ in 0..spec.counts[j] {
            let member = match spec.regime {
                Regime::Lipschitz { delta, segments } => {
                    Member::curve(random_polyline(&mut rng, &spec.cube, j, delta, segments)?)
                }
                _ => {
                    let anchor = uniform_point(&mut rng, &spec.cube);
                    let dir = sample_cap_direction(&mut rng, n, j, spec.angle_limit());
                    Member::line(Line::new(anchor, dir)?)
                }
            };
            let member = match spec.regime {
                Regime::Weighted {
                    min_weight,
                    max_weight,
                    integer: true,
                    ..
                } => {
                    let lo = math::ceil(min_weight) as u64;
                    let hi = math::floor(max_weight) as u64;
                    member.weighted(rng.gen_range(lo..=hi) as f64)
                }
                Regime::Weighted {
                    min_weight, max_weight, ..
                } => member.weighted(if min_weight == max_weight {
                    min_weight
                } else {
                    rng.gen_range(min_weight..max_weight)
                }),
                _ => member,
            };
            members.push(member);
        }
        families.push(TubeFamily::new(n, j, 1.0, members)?);
    }
    Ok(families)
}

/// Checks generated families against the regime's angle or slope limit.
pub fn validate_regime(spec: &GenSpec, families: &[TubeFamily]) -> bool {
    let limit = spec.angle_limit() * (1.0 + TOLERANCE);
    families.iter().enumerate().all(|(j, f)| {
        f.members().iter().all(|m| match &m.shape {
            crate::evaluator::Shape::Line(l) => angle_from_axis(l.dir(), j) <= limit,
            crate::evaluator::Shape::Curve(c) => c.max_slope() <= limit && c.lip() <= limit,
        })
    })
}

/// `k^{n-1}` unit tubes along each axis whose projections sit on the grid
/// `spacing · (i + 1/2)`, `i < k`, inside the cube `[0, k·spacing]ⁿ`.
pub fn enumerate_grid_axis_parallel(n: usize, k: usize, spacing: f64) -> Result<(Vec<TubeFamily>, Cube)> {
    if n < 2 {
        return Err(Error::Dimension { expected: 2, got: n });
    }
    if k == 0 {
        return Err(Error::invalid("k must be at least 1"));
    }
    if !(spacing > 0.0 && spacing.is_finite()) {
        return Err(Error::invalid("spacing must be positive"));
    }
    let count = k
        .checked_pow(n as u32 - 1)
        .ok_or_else(|| Error::invalid("grid is too large"))?;
    let families = (0..n)
        .map(|j| {
            let members = (0..count)
                .map(|idx| {
                    let mut rest = idx;
                    let mut anchor = alloc::vec![0.0; n];
                    for (i, x) in anchor.iter_mut().enumerate() {
                        if i == j {
                            continue;
                        }
                        *x = spacing * ((rest % k) as f64 + 0.5);
                        rest /= k;
                    }
                    Ok(Member::line(Line::new(anchor, Direction::axis(n, j))?))
                })
                .collect::<Result<Vec<_>>>()?;
            TubeFamily::new(n, j, 1.0, members)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((families, Cube::new(alloc::vec![0.0; n], k as f64 * spacing)?))
}
