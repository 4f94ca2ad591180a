//! Scale sweeps and extremal-configuration search.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::certifier::certify_multiscale;
use crate::error::{Error, Result};
use crate::evaluator::{
    evaluate_overlap, evaluate_refined, reduce, GridSpec, Member, OverlapValue, RefineSpec, Shape, TubeFamily,
};
use crate::generators::{generate, sample_cap_direction, GenSpec, Regime};
use crate::geometry::{Cube, Line};
use crate::math;

/// `Π_j N_j^{1/(n-1)}` with `N_j` the total weight of family `j`.
pub fn count_product(families: &[TubeFamily]) -> f64 {
    let n = families.len();
    if n < 2 {
        return 0.0;
    }
    let p = 1.0 / (n - 1) as f64;
    families.iter().map(|f| math::powf(f.total_weight(), p)).product()
}

/// `value / Π_j N_j^{1/(n-1)}`, or 0 when the product vanishes.
pub fn overlap_ratio(value: f64, families: &[TubeFamily]) -> f64 {
    let denom = count_product(families);
    if denom > 0.0 {
        value / denom
    } else {
        0.0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub s: f64,
    pub integral: OverlapValue,
    pub bound: f64,
    pub ratio: f64,
}

impl SweepRow {
    /// Soundness of the row: the integral does not exceed the certified
    /// bound beyond its quadrature error.
    pub fn sound(&self) -> bool {
        self.integral.value <= self.bound + self.integral.error_estimate.unwrap_or(0.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub rows: Vec<SweepRow>,
    /// Least-squares slope of `log ratio` against `log S` over converged rows
    /// with positive ratio; `None` with fewer than two such rows.
    pub slope: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepOptions {
    pub delta: f64,
    pub refine: RefineSpec,
    /// Generate once in the template cube and reuse the tubes at every `S`;
    /// otherwise regenerate in each `Q_S` from the same seed.
    pub fixed_tubes: bool,
}

/// Least-squares slope of `ys` on `xs`.
pub fn fit_slope(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let k = xs.len();
    if k < 2 || ys.len() != k {
        return None;
    }
    let mx = xs.iter().sum::<f64>() / k as f64;
    let my = ys.iter().sum::<f64>() / k as f64;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// For each `S`: the cube `Q_S` shares the template's min corner; the
/// configuration is evaluated by refinement and certified at `delta`.
pub fn sweep_scale(template: &GenSpec, s_values: &[f64], opts: SweepOptions) -> Result<Sweep> {
    if s_values.is_empty() {
        return Err(Error::invalid("no scales given"));
    }
    if s_values.iter().any(|s| !(*s >= 1.0 && s.is_finite())) || s_values.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid("scales must be at least 1 and increasing"));
    }
    let fixed = if opts.fixed_tubes {
        Some(generate(template)?)
    } else {
        None
    };
    let mut rows = Vec::with_capacity(s_values.len());
    for &s in s_values {
        let cube = Cube::new(template.cube.min_corner().to_vec(), s)?;
        let families = match &fixed {
            Some(f) => f.clone(),
            None => generate(&GenSpec {
                cube: cube.clone(),
                ..template.clone()
            })?,
        };
        let integral = evaluate_refined(&families, &cube, opts.refine)?;
        let bound = certify_multiscale(&families, &cube, opts.delta)?.final_bound;
        let ratio = overlap_ratio(integral.value, &families);
        rows.push(SweepRow {
            s,
            integral,
            bound,
            ratio,
        });
    }
    let (xs, ys): (Vec<f64>, Vec<f64>) = rows
        .iter()
        .filter(|r| r.integral.converged() && r.ratio > 0.0)
        .map(|r| (math::ln(r.s), math::ln(r.ratio)))
        .unzip();
    let slope = fit_slope(&xs, &ys);
    Ok(Sweep { rows, slope })
}

/// Simulated-annealing schedule: temperature decays linearly from
/// `initial` to zero over a restart's budget.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Anneal {
    pub initial: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchOptions {
    /// Angle limit of every member.
    pub delta: f64,
    /// Quadrature grid for the objective.
    pub grid: GridSpec,
    pub restarts: usize,
    /// Anchor moves are uniform in `[-step, step]ⁿ` times the cube side.
    pub step: f64,
    /// `None` for greedy hill climbing.
    pub anneal: Option<Anneal>,
}

impl SearchOptions {
    pub fn new(delta: f64, grid: GridSpec) -> Self {
        SearchOptions {
            delta,
            grid,
            restarts: 4,
            step: 0.1,
            anneal: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchState {
    pub families: Vec<TubeFamily>,
    pub ratio: f64,
    pub best: Vec<TubeFamily>,
    pub best_ratio: f64,
    pub iteration: usize,
    pub temperature: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceEntry {
    pub restart: usize,
    pub iteration: usize,
    /// Objective of the proposal evaluated at this iteration.
    pub proposed: f64,
    pub accepted: bool,
    /// Objective of the current state after the decision.
    pub current: f64,
    pub best: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchResult {
    pub best: Vec<TubeFamily>,
    pub best_ratio: f64,
    /// Restart that found `best` (lowest index on ties).
    pub best_restart: usize,
    /// All restarts' traces, concatenated in restart order.
    pub trace: Vec<TraceEntry>,
}

fn objective(families: &[TubeFamily], cube: &Cube, grid: GridSpec) -> Result<f64> {
    Ok(overlap_ratio(evaluate_overlap(families, cube, grid)?.value, families))
}

/// Moves one random member: either its anchor, clamped to the cube, or its
/// direction, resampled in the regime cap.
fn perturb<R: Rng>(rng: &mut R, families: &[TubeFamily], cube: &Cube, opts: &SearchOptions) -> Result<Vec<TubeFamily>> {
    let n = families.len();
    let nonempty: Vec<usize> = (0..n).filter(|&j| !families[j].is_empty()).collect();
    if nonempty.is_empty() {
        return Ok(families.to_vec());
    }
    let j = nonempty[rng.gen_range(0..nonempty.len())];
    let a = rng.gen_range(0..families[j].len());
    let member = &families[j].members()[a];
    let Shape::Line(line) = &member.shape else {
        return Err(Error::invalid("search moves straight tubes only"));
    };
    let moved = if rng.gen_bool(0.5) {
        let reach = opts.step * cube.side();
        let lo = cube.min_corner();
        let anchor = line
            .anchor()
            .iter()
            .enumerate()
            .map(|(i, x)| (x + rng.gen_range(-reach..=reach)).clamp(lo[i], lo[i] + cube.side()))
            .collect();
        Line::new(anchor, line.dir().clone())?
    } else {
        Line::new(line.anchor().to_vec(), sample_cap_direction(rng, n, j, opts.delta))?
    };
    let mut members = families[j].members().to_vec();
    members[a] = Member {
        shape: Shape::Line(moved),
        weight: member.weight,
    };
    let mut out = families.to_vec();
    out[j] = families[j].with_members(members)?;
    Ok(out)
}

fn run_restart(
    restart: usize,
    budget: usize,
    n: usize,
    counts: &[usize],
    cube: &Cube,
    seed: u64,
    opts: &SearchOptions,
) -> Result<(SearchState, Vec<TraceEntry>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(restart as u64);
    let spec = GenSpec::new(
        n,
        counts.to_vec(),
        Regime::SmallAngle { delta: opts.delta },
        cube.clone(),
        rng.gen(),
    );
    let start = generate(&spec)?;
    let ratio = objective(&start, cube, opts.grid)?;
    let initial_temp = opts.anneal.map_or(0.0, |a| a.initial);
    let mut state = SearchState {
        best: start.clone(),
        families: start,
        ratio,
        best_ratio: ratio,
        iteration: 0,
        temperature: initial_temp,
    };
    let mut trace = Vec::with_capacity(budget);
    trace.push(TraceEntry {
        restart,
        iteration: 0,
        proposed: ratio,
        accepted: true,
        current: ratio,
        best: ratio,
    });
    for it in 1..budget {
        state.iteration = it;
        state.temperature = initial_temp * (1.0 - it as f64 / budget as f64);
        let candidate = perturb(&mut rng, &state.families, cube, opts)?;
        let proposed = objective(&candidate, cube, opts.grid)?;
        let accepted = if proposed > state.ratio {
            true
        } else if state.temperature > 0.0 {
            let p = math::exp((proposed - state.ratio) / state.temperature);
            rng.gen::<f64>() < p
        } else {
            false
        };
        if accepted {
            state.families = candidate;
            state.ratio = proposed;
            if proposed > state.best_ratio {
                state.best_ratio = proposed;
                state.best = state.families.clone();
            }
        }
        trace.push(TraceEntry {
            restart,
            iteration: it,
            proposed,
            accepted,
            current: state.ratio,
            best: state.best_ratio,
        });
    }
    Ok((state, trace))
}

/// Multi-start local search for configurations with large
/// `∫_Q Π f_j^{1/(n-1)} / Π N_j^{1/(n-1)}`, with small-angle lines.
///
/// The budget counts objective evaluations and is split evenly across
/// restarts, earlier restarts taking the remainder; restarts left with no
/// budget are skipped. Restart `r` draws from stream `r` of
/// `ChaCha8Rng::seed_from_u64(seed)`, starts from a fresh random
/// configuration and proposes single-member moves, accepting strict
/// improvements (and, when annealing, worse states with probability
/// `exp(Δ/T)`).
pub fn extremal_search(
    n: usize,
    counts: &[usize],
    cube: &Cube,
    budget: usize,
    seed: u64,
    opts: &SearchOptions,
) -> Result<SearchResult> {
    if budget == 0 {
        return Err(Error::invalid("budget must be at least 1"));
    }
    if opts.restarts == 0 {
        return Err(Error::invalid("at least one restart is needed"));
    }
    if !(opts.step > 0.0 && opts.step.is_finite()) {
        return Err(Error::invalid("step must be positive"));
    }
    let restarts = opts.restarts.min(budget);
    let runs = reduce::ordered_map(restarts, |r| {
        let share = budget / restarts + usize::from(r < budget % restarts);
        run_restart(r, share, n, counts, cube, seed, opts)
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let mut best_restart = 0;
    for (r, (state, _)) in runs.iter().enumerate() {
        if state.best_ratio > runs[best_restart].0.best_ratio {
            best_restart = r;
        }
    }
    let best = runs[best_restart].0.best.clone();
    let best_ratio = runs[best_restart].0.best_ratio;
    let trace = runs.into_iter().flat_map(|(_, t)| t).collect();
    Ok(SearchResult {
        best,
        best_ratio,
        best_restart,
        trace,
    })
}
