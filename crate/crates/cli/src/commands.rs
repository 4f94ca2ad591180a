use std::path::PathBuf;

use kakeya_core::certifier::{certify_multiscale, delta_for_epsilon, verify_step_inequality, Constants};
use kakeya_core::evaluator::{evaluate_overlap, evaluate_refined, exact_overlap_2d, RefineSpec};
use kakeya_core::experiments::{extremal_search, sweep_scale, SearchOptions, SweepOptions};
use kakeya_core::generators::generate;
use kakeya_core::loomis_whitney::verify_lw;
use kakeya_core::reduction::{certify_reduced, reduce_with_delta, transversal_reduce_with_delta, ReducedProblem};
use kakeya_core::{GridSpec, TubeFamily};
use serde::Serialize;

use crate::error::CliError;
use crate::report::*;
use crate::schema::{parse, ConfigDoc, Configuration, CubeDoc, GenDoc, LwDoc, SearchDoc, SweepDoc};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Gen,
    Eval,
    Exact2d,
    Certify,
    VerifyLw,
    VerifyStep,
    Reduce,
    Sweep,
    Search,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, Default)]
pub struct Options {
    pub config: Option<PathBuf>,
    pub seed: Option<u64>,
    pub grid: Option<usize>,
    pub tol: Option<f64>,
    pub epsilon: Option<f64>,
    pub delta: Option<f64>,
    pub nu: Option<f64>,
    pub format: Format,
    pub cell_budget: Option<u64>,
    pub max_doublings: Option<u32>,
    pub check: bool,
}

/// How a completed command ended.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Status {
    Ok,
    Violation(String),
    NotConverged(String),
}

impl Status {
    pub fn exit_code(&self) -> u8 {
        match self {
            Status::Ok => 0,
            Status::Violation(_) => 2,
            Status::NotConverged(_) => 3,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub body: String,
    pub status: Status,
}

fn read_config<T: serde::de::DeserializeOwned>(opts: &Options) -> Result<T, CliError> {
    let path = opts
        .config
        .as_ref()
        .ok_or_else(|| CliError::Usage("--config is required".into()))?;
    let shown = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{shown}: {e}")))?;
    parse(&shown, &text)
}

fn configuration(opts: &Options) -> Result<Configuration, CliError> {
    read_config::<ConfigDoc>(opts)?.to_configuration()
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn to_csv<T: Serialize>(rows: &[T]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| CliError::Io(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

fn json_only(opts: &Options, command: &str) -> Result<(), CliError> {
    match opts.format {
        Format::Json => Ok(()),
        Format::Csv => Err(CliError::Usage(format!(
            "{command} has no CSV output; CSV is for sweep and search"
        ))),
    }
}

fn refine_spec(opts: &Options, default_tol: f64) -> RefineSpec {
    let mut spec = RefineSpec::new(opts.tol.unwrap_or(default_tol));
    if let Some(d) = opts.max_doublings {
        spec = spec.with_max_doublings(d);
    }
    if let Some(b) = opts.cell_budget {
        spec = spec.with_budget(b);
    }
    spec
}

fn grid(opts: &Options, m: usize) -> Result<GridSpec, CliError> {
    let g = GridSpec::new(m)?;
    Ok(match opts.cell_budget {
        Some(b) => g.with_budget(b),
        None => g,
    })
}

fn check_delta(delta: f64) -> Result<f64, CliError> {
    if delta > 0.0 && delta < 1.0 {
        Ok(delta)
    } else {
        Err(CliError::Usage(format!("--delta must lie in (0, 1), got {delta}")))
    }
}

/// `δ` from `--delta`, or from `--epsilon` through `log c_step / log δ⁻¹ = ε`.
fn resolve_delta(opts: &Options, n: usize) -> Result<f64, CliError> {
    match (opts.delta, opts.epsilon) {
        (Some(_), Some(_)) => Err(CliError::Usage("give --delta or --epsilon, not both".into())),
        (Some(d), None) => check_delta(d),
        (None, Some(eps)) => {
            if !(eps > 0.0) {
                return Err(CliError::Usage(format!("--epsilon must be positive, got {eps}")));
            }
            Ok(delta_for_epsilon(eps, &Constants::new(n)?)?)
        }
        (None, None) => Err(CliError::Usage("--delta or --epsilon is required".into())),
    }
}

fn all_straight(families: &[TubeFamily]) -> bool {
    families.iter().all(|f| !f.has_curves())
}

/// The functional for a soundness check: exact in the plane, refined
/// quadrature otherwise.
fn measure(cfg: &Configuration, opts: &Options, bound: f64) -> Result<CheckReport, CliError> {
    if cfg.families.len() == 2 && all_straight(&cfg.families) {
        let value = exact_overlap_2d(&cfg.families, &cfg.cube)?;
        return Ok(CheckReport {
            method: "exact2d",
            value,
            error_estimate: None,
            bound,
            sound: value <= bound,
        });
    }
    let v = evaluate_refined(&cfg.families, &cfg.cube, refine_spec(opts, 1e-2))?;
    Ok(CheckReport {
        method: "quadrature",
        value: v.value,
        error_estimate: v.error_estimate,
        bound,
        sound: v.value <= bound + v.error_estimate.unwrap_or(0.0),
    })
}

fn check_status(check: &Option<CheckReport>) -> Status {
    match check {
        Some(c) if !c.sound => Status::Violation(format!("value {} exceeds the bound {}", c.value, c.bound)),
        _ => Status::Ok,
    }
}

pub fn run(command: Command, opts: &Options) -> Result<Outcome, CliError> {
    match command {
        Command::Gen => gen(opts),
        Command::Eval => eval(opts),
        Command::Exact2d => exact2d(opts),
        Command::Certify => certify(opts),
        Command::VerifyLw => verify_lw_cmd(opts),
        Command::VerifyStep => verify_step(opts),
        Command::Reduce => reduce(opts),
        Command::Sweep => sweep(opts),
        Command::Search => search(opts),
    }
}

fn ok(body: String) -> Result<Outcome, CliError> {
    Ok(Outcome {
        body,
        status: Status::Ok,
    })
}

fn gen(opts: &Options) -> Result<Outcome, CliError> {
    json_only(opts, "gen")?;
    let spec = read_config::<GenDoc>(opts)?.to_spec(opts.seed)?;
    let families = generate(&spec)?;
    ok(to_json(&ConfigDoc::from_configuration(&Configuration {
        cube: spec.cube,
        families,
    })))
}

fn eval(opts: &Options) -> Result<Outcome, CliError> {
    json_only(opts, "eval")?;
    let cfg = configuration(opts)?;
    let v = match opts.grid {
        Some(m) => evaluate_overlap(&cfg.families, &cfg.cube, grid(opts, m)?)?,
        None => evaluate_refined(&cfg.families, &cfg.cube, refine_spec(opts, 1e-3))?,
    };
    let status = if v.converged() {
        Status::Ok
    } else {
        Status::NotConverged(format!(
            "quadrature did not reach the tolerance by {} cells per side",
            v.cells_per_side
        ))
    };
    Ok(Outcome {
        body: to_json(&ValueReport::from(&v)),
        status,
    })
}

fn exact2d(opts: &Options) -> Result<Outcome, CliError> {
    json_only(opts, "exact2d")?;
    let cfg = configuration(opts)?;
    ok(to_json(&ExactReport {
        value: exact_overlap_2d(&cfg.families, &cfg.cube)?,
    }))
}

fn certify(opts: &Options) -> Result<Outcome, CliError> {
    json_only(opts, "certify")?;
    let cfg = configuration(opts)?;
    let delta = resolve_delta(opts, cfg.families.len())?;
    let cert = certify_multiscale(&cfg.families, &cfg.cube, delta)?;
    let mut report = CertificateReport::from(&cert);
    if opts.check {
        report.check = Some(measure(&cfg, opts, cert.final_bound)?);
    }
    let status = check_status(&report.check);
    Ok(Outcome {
        body: to_json(&report),
        status,
    })
}

fn verify_lw_cmd(opts: &Options) -> Result<Outcome, CliError> {
    json_only(opts, "verify-lw")?;
    let doc: LwDoc = read_config(opts)?;
    let fs = doc.to_functions()?;
    let r = verify_lw(&fs, &doc.lo, &doc.hi, grid(opts, opts.grid.unwrap_or(32))?)?;
    let slack = 3.0 * r.error_estimate.unwrap_or(0.0);
    let holds = r.ratio <= 1.0 + slack;
    let out = LwReportOut {
        left: r.left,
        right: r.right,
        ratio: r.ratio,
        error_estimate: r.error_estimate,
        vacuous: r.vacuous,
        holds,
    };
    let status = if holds {
        Status::Ok
    } else {
        Status::Violation(format!("ratio {} exceeds 1 + {slack}", r.ratio))
    };
    Ok(Outcome {
        body: to_json(&out),
        status,
    })
}

fn verify_step(opts: &Options) -> Result<Outcome, CliError> {
    json_only(opts, "verify-step")?;
    let cfg = configuration(opts)?;
    let delta = resolve_delta(opts, cfg.families.len())?;
    let c = verify_step_inequality(&cfg.families, &cfg.cube, delta, refine_spec(opts, 1e-2))?;
    let holds = c.ratio <= 1.0 + c.tolerance;
    let out = StepReport {
        delta,
        c_step: Constants::new(cfg.families.len())?.c_step,
        lhs: (&c.lhs).into(),
        rhs: (&c.rhs).into(),
        ratio: c.ratio,
        tolerance: c.tolerance,
        vacuous: c.vacuous,
        converged: c.converged,
        holds,
    };
    let status = if !holds {
        Status::Violation(format!("step ratio {} exceeds 1 + {}", c.ratio, c.tolerance))
    } else if !c.converged {
        Status::NotConverged("step quadrature did not reach the tolerance".into())
    } else {
        Status::Ok
    };
    Ok(Outcome {
        body: to_json(&out),
        status,
    })
}

fn problem_report(p: &ReducedProblem, final_bound: f64) -> ProblemReport {
    let n = p.map.dim();
    ProblemReport {
        centers: p.centers.iter().map(|c| c.as_slice().to_vec()).collect(),
        map: p.map.matrix().as_row_major().chunks(n).map(<[f64]>::to_vec).collect(),
        distortion_factor: p.distortion_factor,
        max_angle: p.max_angle,
        cube: CubeDoc::from_cube(&p.cube),
        counts: p.families.iter().map(TubeFamily::total_weight).collect(),
        final_bound,
        contribution: p.distortion_factor * final_bound,
    }
}

fn reduce(opts: &Options) -> Result<Outcome, CliError> {
    json_only(opts, "reduce")?;
    let cfg = configuration(opts)?;
    let delta = resolve_delta(opts, cfg.families.len())?;
    let (rho, problems) = match opts.nu {
        Some(nu) => {
            let t = transversal_reduce_with_delta(&cfg.families, &cfg.cube, nu, delta)?;
            (Some(t.rho), t.problems)
        }
        None => (None, reduce_with_delta(&cfg.families, &cfg.cube, delta)?),
    };
    let (total, certs) = certify_reduced(&problems, delta)?;
    let mut report = ReduceReport {
        delta,
        rho,
        problems: problems
            .iter()
            .zip(&certs)
            .map(|(p, c)| problem_report(p, c.final_bound))
            .collect(),
        total_bound: total,
        check: None,
    };
    if opts.check {
        report.check = Some(measure(&cfg, opts, total)?);
    }
    let status = check_status(&report.check);
    Ok(Outcome {
        body: to_json(&report),
        status,
    })
}

fn sweep(opts: &Options) -> Result<Outcome, CliError> {
    let doc: SweepDoc = read_config(opts)?;
    let spec = doc.template.to_spec(opts.seed)?;
    let delta = check_delta(
        opts.delta
            .ok_or_else(|| CliError::Usage("--delta is required".into()))?,
    )?;
    let s = sweep_scale(
        &spec,
        &doc.scales,
        SweepOptions {
            delta,
            refine: refine_spec(opts, 1e-2),
            fixed_tubes: doc.fixed_tubes,
        },
    )?;
    let rows: Vec<SweepRowReport> = s
        .rows
        .iter()
        .map(|r| SweepRowReport {
            s: r.s,
            value: r.integral.value,
            error_estimate: r.integral.error_estimate,
            cells_per_side: r.integral.cells_per_side,
            convergence: convergence_name(r.integral.convergence),
            bound: r.bound,
            ratio: r.ratio,
            sound: r.sound(),
        })
        .collect();
    let status = match rows.iter().find(|r| !r.sound) {
        Some(r) => Status::Violation(format!(
            "at S = {} the value {} exceeds the bound {}",
            r.s, r.value, r.bound
        )),
        None => Status::Ok,
    };
    let body = match opts.format {
        Format::Csv => to_csv(&rows)?,
        Format::Json => to_json(&SweepReport {
            delta,
            seed: spec.seed,
            rows,
            slope: s.slope,
        }),
    };
    Ok(Outcome { body, status })
}

fn search(opts: &Options) -> Result<Outcome, CliError> {
    let doc: SearchDoc = read_config(opts)?;
    let cube = doc.cube.to_cube()?;
    let delta = check_delta(opts.delta.unwrap_or(0.1))?;
    let mut so = SearchOptions::new(delta, grid(opts, opts.grid.unwrap_or(32))?);
    if let Some(r) = doc.restarts {
        so.restarts = r;
    }
    if let Some(s) = doc.step {
        so.step = s;
    }
    so.anneal = doc.anneal.map(Into::into);
    let seed = opts.seed.unwrap_or(0);
    let r = extremal_search(doc.n, &doc.counts, &cube, doc.budget, seed, &so)?;
    let trace: Vec<TraceReport> = r
        .trace
        .iter()
        .map(|e| TraceReport {
            restart: e.restart,
            iteration: e.iteration,
            proposed: e.proposed,
            accepted: e.accepted,
            current: e.current,
            best: e.best,
        })
        .collect();
    let body = match opts.format {
        Format::Csv => to_csv(&trace)?,
        Format::Json => to_json(&SearchReport {
            seed,
            best_ratio: r.best_ratio,
            best_restart: r.best_restart,
            best: ConfigDoc::from_configuration(&Configuration { cube, families: r.best }),
            trace,
        }),
    };
    ok(body)
}
