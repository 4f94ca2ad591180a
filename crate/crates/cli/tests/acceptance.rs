//! Acceptance criteria, one pass/fail line each. Runs without the libtest
//! harness; the process fails if any criterion fails.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use kakeya_core::certifier::{
    certify_multiscale, delta_for_epsilon, steps_for_scale, verify_step_inequality, Constants,
};
use kakeya_core::evaluator::{axis_parallel_cross, evaluate_overlap, evaluate_refined, exact_overlap_2d, RefineSpec};
use kakeya_core::generators::{enumerate_grid_axis_parallel, generate, sample_cap_direction, GenSpec, Regime};
use kakeya_core::geometry::frame_map;
use kakeya_core::loomis_whitney::{verify_lw, ProjectionFunction};
use kakeya_core::reduction::{certify_reduced, rational_weight_check, reduce_with_delta, weighted_multiplicity_check};
use kakeya_core::{Cube, Direction, GridSpec, Line, LipschitzCurve, Member, Shape, TubeFamily};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, u64, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn cube(n: usize, side: f64) -> Cube {
    Cube::new(vec![0.0; n], side).unwrap()
}

fn lw_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst = 0.0f64;
    for n in 2..=4 {
        // Function cells divide the quadrature cells, so the midpoint rule
        // integrates the piecewise-constant integrand exactly.
        let m = [32, 16, 8][n - 2];
        for i in 0..100 {
            let fs: Vec<ProjectionFunction> = (0..n)
                .map(|_| {
                    let c = [2usize, 4][rng.gen_range(0..2)];
                    let values = (0..c.pow(n as u32 - 1))
                        .map(|_| {
                            if rng.gen_bool(0.3) {
                                0.0
                            } else {
                                rng.gen_range(0.0..3.0)
                            }
                        })
                        .collect();
                    ProjectionFunction::new(vec![0.0; n - 1], vec![1.0; n - 1], vec![c; n - 1], values).unwrap()
                })
                .collect();
            let r = verify_lw(&fs, &vec![0.0; n], &vec![1.0; n], GridSpec::new(m).unwrap()).map_err(err)?;
            let slack = 3.0 * r.error_estimate.unwrap_or(0.0);
            ensure(r.ratio <= 1.0 + slack, || {
                format!("n={n} instance {i}: ratio {} > 1 + {slack}", r.ratio)
            })?;
            worst = worst.max(r.ratio);
        }
        let f = ProjectionFunction::from_fn(vec![-0.5; n - 1], vec![1.5; n - 1], vec![4; n - 1], |y| {
            if y.iter().all(|&t| (0.0..=1.0).contains(&t)) {
                1.0
            } else {
                0.0
            }
        })
        .unwrap();
        let fs = vec![f; n];
        let r = verify_lw(&fs, &vec![-0.5; n], &vec![1.5; n], GridSpec::new(16).unwrap()).map_err(err)?;
        ensure((r.ratio - 1.0).abs() <= 0.01, || {
            format!("n={n} equality case ratio {}", r.ratio)
        })?;
    }
    Ok(format!(
        "300 instances, max ratio {worst:.6}; product indicators give 1"
    ))
}

fn axis_parallel_chain() -> Outcome {
    let omega = |d: usize| [2.0, std::f64::consts::PI][d - 1];
    let mut cases: Vec<(Vec<TubeFamily>, Cube)> = Vec::new();
    for n in 2..=3 {
        for k in 1..=3 {
            cases.push(enumerate_grid_axis_parallel(n, k, 4.0).map_err(err)?);
        }
    }
    for seed in 0..10 {
        let c = cube(2, 12.0);
        let spec = GenSpec::new(
            2,
            vec![1 + seed % 4, 2 + seed % 3],
            Regime::AxisParallel,
            c.clone(),
            seed as u64,
        );
        cases.push((generate(&spec).map_err(err)?, c));
    }
    let tol = 1e-3;
    let mut worst_rel = 0.0f64;
    for (i, (fams, q)) in cases.iter().enumerate() {
        let n = fams.len();
        let spec = RefineSpec::new(tol).with_max_doublings(if n == 2 { 6 } else { 4 });
        let v = evaluate_refined(fams, q, spec).map_err(err)?;
        let bound: f64 = fams
            .iter()
            .map(|f| (omega(n - 1) * f.len() as f64).powf(1.0 / (n - 1) as f64))
            .product();
        let slack = tol * bound + v.error_estimate.unwrap_or(0.0);
        ensure(v.value <= bound + slack, || format!("case {i}: {} > {bound}", v.value))?;
        if n == 2 {
            let exact = exact_overlap_2d(fams, q).map_err(err)?;
            let rel = if exact > 0.0 {
                (v.value - exact).abs() / exact
            } else {
                v.value
            };
            ensure(rel < 0.01, || {
                format!("case {i}: quadrature {} vs exact {exact}", v.value)
            })?;
            worst_rel = worst_rel.max(rel);
        }
    }
    Ok(format!(
        "{} configurations, worst planar relative error {worst_rel:.2e}",
        cases.len()
    ))
}

fn step_inequality() -> Outcome {
    let mut worst = 0.0f64;
    let mut unconverged = 0;
    for i in 0..30u64 {
        let n = if i % 2 == 0 { 2 } else { 3 };
        let delta = [0.1, 0.05][(i as usize / 2) % 2];
        let mut rng = ChaCha8Rng::seed_from_u64(100 + i);
        let counts: Vec<usize> = (0..n).map(|_| rng.gen_range(1..=4)).collect();
        let q = cube(n, 1.0 / delta);
        let fams = generate(&GenSpec::new(n, counts, Regime::SmallAngle { delta }, q.clone(), i)).map_err(err)?;
        let spec = RefineSpec::new(1e-2).with_max_doublings(if n == 2 { 6 } else { 3 });
        let c = verify_step_inequality(&fams, &q, delta, spec).map_err(err)?;
        ensure(c.ratio <= 1.0 + c.tolerance, || {
            format!("config {i}: ratio {} > 1 + {}", c.ratio, c.tolerance)
        })?;
        worst = worst.max(c.ratio);
        unconverged += usize::from(!c.converged);
    }
    Ok(format!(
        "30 configurations, 0 violations, max ratio {worst:.3e}, {unconverged} unconverged"
    ))
}

fn certificate_soundness() -> Outcome {
    let mut cases = Vec::new();
    for s in 0..20u64 {
        cases.push((2, Regime::SmallAngle { delta: 0.1 }, 0.1, 5.0 + 1.7 * s as f64, s));
    }
    for s in 0..10u64 {
        let regime = Regime::Weighted {
            delta: 0.1,
            min_weight: 0.5,
            max_weight: 3.0,
            integer: false,
        };
        cases.push((2, regime, 0.1, 8.0 + 2.0 * s as f64, 20 + s));
    }
    for s in 0..10u64 {
        let regime = Regime::Lipschitz {
            delta: 0.05,
            segments: 4,
        };
        cases.push((2, regime, 0.05, 10.0 + s as f64, 30 + s));
    }
    for s in 0..10u64 {
        cases.push((3, Regime::SmallAngle { delta: 0.1 }, 0.1, 6.0 + 0.5 * s as f64, 40 + s));
    }
    let mut tightest = 0.0f64;
    for (n, regime, delta, side, seed) in cases {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let counts: Vec<usize> = (0..n).map(|_| rng.gen_range(1..=4)).collect();
        let q = cube(n, side);
        let fams = generate(&GenSpec::new(n, counts, regime, q.clone(), seed)).map_err(err)?;
        let cert = certify_multiscale(&fams, &q, delta).map_err(err)?;
        let (value, slack) = if n == 2 && fams.iter().all(|f| !f.has_curves()) {
            (exact_overlap_2d(&fams, &q).map_err(err)?, 0.0)
        } else {
            let spec = RefineSpec::new(1e-2).with_max_doublings(if n == 2 { 5 } else { 3 });
            let v = evaluate_refined(&fams, &q, spec).map_err(err)?;
            (v.value, v.error_estimate.unwrap_or(0.0))
        };
        ensure(value <= cert.final_bound + slack, || {
            format!("seed {seed}: value {value} > bound {}", cert.final_bound)
        })?;
        tightest = tightest.max(value / cert.final_bound);
    }
    Ok(format!("50 configurations, largest value/bound {tightest:.3e}"))
}

fn epsilon_identity() -> Outcome {
    let mut worst = 0.0f64;
    for n in 2..=4 {
        let c = Constants::new(n).map_err(err)?;
        for delta in [0.1f64, 0.05, 0.01] {
            for m in 1..=5 {
                let s = delta.powi(-m);
                let lhs = c.c_step.powi(m);
                let rhs = (s.ln() * c.epsilon_exponent(delta)).exp();
                let rel = (lhs - rhs).abs() / lhs;
                ensure(rel <= 1e-12, || {
                    format!("n={n} delta={delta} M={m}: relative gap {rel:e}")
                })?;
                ensure(steps_for_scale(s, delta).map_err(err)? == m as u32, || {
                    format!("n={n} delta={delta}: S = delta^-{m} is not M = {m} steps")
                })?;
                worst = worst.max(rel);
            }
        }
        for eps in [0.25, 0.5, 1.0, 2.0, 5.0, 10.0] {
            let d = delta_for_epsilon(eps, &c).map_err(err)?;
            let got = c.epsilon_exponent(d);
            ensure((got - eps).abs() <= 1e-12 * eps, || {
                format!("n={n} eps={eps}: exponent {got}")
            })?;
        }
    }
    Ok(format!("max relative gap {worst:.1e}"))
}

fn reduction_end_to_end() -> Outcome {
    let mut problems_total = 0;
    for seed in 0..12u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(200 + seed);
        let counts = vec![rng.gen_range(1..=4), rng.gen_range(1..=4)];
        let q = cube(2, rng.gen_range(8.0..20.0));
        let delta = [0.05, 0.02][seed as usize % 2];
        let fams = generate(&GenSpec::new(2, counts, Regime::General, q.clone(), seed)).map_err(err)?;
        let problems = reduce_with_delta(&fams, &q, delta).map_err(err)?;
        for p in &problems {
            ensure(p.max_angle <= delta * (1.0 + 1e-12), || {
                format!("seed {seed}: angle {} > {delta}", p.max_angle)
            })?;
        }
        let (total, _) = certify_reduced(&problems, delta).map_err(err)?;
        let exact = exact_overlap_2d(&fams, &q).map_err(err)?;
        ensure(total >= exact, || {
            format!("seed {seed}: reassembled {total} < exact {exact}")
        })?;
        problems_total += problems.len();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for n in 2..=4 {
        let alpha = 1.0 / (10.0 * n as f64);
        for _ in 0..1000 {
            let centers: Vec<Direction> = (0..n).map(|j| sample_cap_direction(&mut rng, n, j, alpha)).collect();
            let a = frame_map(&centers).map_err(err)?;
            let (lo, hi) = a.length_distortion();
            let vol = a.volume_distortion();
            let bound = 2f64.powi(n as i32);
            ensure(lo >= 0.5 && hi <= 2.0, || format!("n={n}: singular values {lo}, {hi}"))?;
            ensure(vol <= bound && 1.0 / vol <= bound, || {
                format!("n={n}: volume factor {vol}")
            })?;
        }
    }
    Ok(format!(
        "12 configurations in {problems_total} subproblems; 3000 frames within bounds"
    ))
}

fn weighted_equivalence() -> Outcome {
    let mut worst = 0.0f64;
    for seed in 0..15u64 {
        let n = if seed < 10 { 2 } else { 3 };
        let q = cube(n, 8.0);
        let grid = GridSpec::new(if n == 2 { 96 } else { 24 }).unwrap();
        let regime = Regime::Weighted {
            delta: 0.1,
            min_weight: 0.0,
            max_weight: 4.0,
            integer: true,
        };
        let fams = generate(&GenSpec::new(n, vec![3; n], regime, q.clone(), seed)).map_err(err)?;
        ensure(weighted_multiplicity_check(&fams, &q, grid).map_err(err)?, || {
            format!("seed {seed}: integer weights differ from expansion")
        })?;
        let denom = 2 + (seed % 3) as u32;
        let rational: Vec<TubeFamily> = fams
            .iter()
            .map(|f| {
                let members = f
                    .members()
                    .iter()
                    .enumerate()
                    .map(|(a, m)| m.clone().weighted(((a as f64 + 1.0) * m.weight + 1.0) / denom as f64))
                    .collect();
                f.with_members(members).unwrap()
            })
            .collect();
        let r = rational_weight_check(&rational, &q, grid, denom).map_err(err)?;
        ensure(r.rel_diff <= 1e-12, || {
            format!("seed {seed}: rational weights differ by {:e}", r.rel_diff)
        })?;
        worst = worst.max(r.rel_diff);
    }
    Ok(format!(
        "15 integer configurations bit-identical; rational max relative gap {worst:.1e}"
    ))
}

fn as_affine_curve(line: &Line, axis: usize, span: (f64, f64)) -> LipschitzCurve {
    let d = line.dir().as_slice();
    let a = line.anchor();
    let (offset, slope): (Vec<f64>, Vec<f64>) = (0..d.len())
        .filter(|&i| i != axis)
        .map(|i| (a[i] - a[axis] * d[i] / d[axis], d[i] / d[axis]))
        .unzip();
    LipschitzCurve::affine(axis, vec![span.0, span.1], &offset, &slope).unwrap()
}

fn lipschitz_regime() -> Outcome {
    let delta = 0.05;
    let mut tightest = 0.0f64;
    for seed in 0..20u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(300 + seed);
        let counts = vec![rng.gen_range(1..=4), rng.gen_range(1..=4)];
        let segments = rng.gen_range(2..=6);
        let q = cube(2, rng.gen_range(10.0..30.0));
        let fams = generate(&GenSpec::new(
            2,
            counts,
            Regime::Lipschitz { delta, segments },
            q.clone(),
            seed,
        ))
        .map_err(err)?;
        let v = evaluate_refined(&fams, &q, RefineSpec::new(1e-2).with_max_doublings(5)).map_err(err)?;
        let cert = certify_multiscale(&fams, &q, delta).map_err(err)?;
        ensure(v.value <= cert.final_bound + v.error_estimate.unwrap_or(0.0), || {
            format!("seed {seed}: {} > {}", v.value, cert.final_bound)
        })?;
        tightest = tightest.max(v.value / cert.final_bound);
    }
    for seed in 0..10u64 {
        let q = cube(2, 12.0);
        let lines = generate(&GenSpec::new(
            2,
            vec![3, 3],
            Regime::SmallAngle { delta },
            q.clone(),
            400 + seed,
        ))
        .map_err(err)?;
        // The curve runs well past the cube so that its ends are never the
        // nearest points to a cell midpoint.
        let span = (-12.0, 24.0);
        let curves: Vec<TubeFamily> = lines
            .iter()
            .map(|f| {
                let members = f
                    .members()
                    .iter()
                    .map(|m| match &m.shape {
                        Shape::Line(l) => Member::curve(as_affine_curve(l, f.axis(), span)),
                        Shape::Curve(_) => unreachable!(),
                    })
                    .collect();
                f.with_members(members).unwrap()
            })
            .collect();
        let grid = GridSpec::new(128).unwrap();
        let a = evaluate_overlap(&lines, &q, grid).map_err(err)?.value;
        let b = evaluate_overlap(&curves, &q, grid).map_err(err)?.value;
        ensure(a == b, || format!("seed {seed}: straight {a} vs affine curve {b}"))?;
    }
    Ok(format!(
        "20 polyline configurations, largest value/bound {tightest:.3e}; 10 affine cases exact"
    ))
}

fn known_values() -> Outcome {
    let grid = GridSpec::new(200).unwrap();
    let strips = evaluate_overlap(
        &axis_parallel_cross(&[5.0, 5.0], 1.0).map_err(err)?,
        &cube(2, 10.0),
        grid,
    )
    .map_err(err)?;
    ensure((strips.value - 4.0).abs() <= 0.02 * 4.0, || {
        format!("perpendicular strips {}", strips.value)
    })?;
    let tri = evaluate_overlap(
        &axis_parallel_cross(&[5.0, 5.0, 5.0], 1.0).map_err(err)?,
        &cube(3, 10.0),
        grid,
    )
    .map_err(err)?;
    let steinmetz = 8.0 * (2.0 - 2f64.sqrt());
    ensure((tri.value - steinmetz).abs() <= 0.02 * steinmetz, || {
        format!("tricylinder {}", tri.value)
    })?;
    let theta = std::f64::consts::PI / 6.0;
    let q = Cube::centered(&[0.0, 0.0], 100.0).map_err(err)?;
    let fams = vec![
        TubeFamily::new(
            2,
            0,
            1.0,
            vec![Member::line(Line::new(vec![0.0, 0.0], Direction::axis(2, 0)).unwrap())],
        )
        .unwrap(),
        TubeFamily::new(
            2,
            1,
            1.0,
            vec![Member::line(
                Line::new(vec![0.0, 0.0], Direction::new(vec![theta.cos(), theta.sin()]).unwrap()).unwrap(),
            )],
        )
        .unwrap(),
    ];
    let exact = exact_overlap_2d(&fams, &q).map_err(err)?;
    ensure((exact - 4.0 / theta.sin()).abs() <= 1e-9, || {
        format!("oblique exact {exact}")
    })?;
    let v = evaluate_refined(&fams, &q, RefineSpec::new(1e-3).with_start(256).with_max_doublings(5)).map_err(err)?;
    ensure((v.value - exact).abs() <= 0.01 * exact, || {
        format!("oblique quadrature {} vs {exact}", v.value)
    })?;
    Ok(format!(
        "strips {:.4}, tricylinder {:.4} (exact {steinmetz:.4}), oblique {:.4} vs {exact:.4}",
        strips.value, tri.value, v.value
    ))
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn run_bin(args: &[String], threads: usize) -> Result<(Option<i32>, Vec<u8>), String> {
    let o = Command::new(env!("CARGO_BIN_EXE_kakeya"))
        .args(args)
        .env("KAKEYA_THREADS", threads.to_string())
        .output()
        .map_err(err)?;
    Ok((o.status.code(), o.stdout))
}

fn determinism() -> Outcome {
    let dir = std::env::temp_dir().join(format!("kakeya-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(err)?;
    let d = dir.as_path();
    let gen2 = write(
        d,
        "gen2.json",
        r#"{"n":2,"counts":[3,4],"regime":{"kind":"small_angle","delta":0.1},"cube":{"min_corner":[0,0],"side":10}}"#,
    );
    let gen3 = write(
        d,
        "gen3.json",
        r#"{"n":3,"counts":[2,3,2],"regime":{"kind":"small_angle","delta":0.1},"cube":{"min_corner":[0,0,0],"side":10}}"#,
    );
    let general = write(
        d,
        "general.json",
        r#"{"n":2,"counts":[3,3],"regime":{"kind":"general"},"cube":{"min_corner":[0,0],"side":10}}"#,
    );
    let cfg2 = d.join("cfg2.json").to_str().unwrap().to_string();
    let cfg3 = d.join("cfg3.json").to_str().unwrap().to_string();
    let cfg_general = d.join("general_cfg.json").to_str().unwrap().to_string();
    for (spec, out) in [(&gen2, &cfg2), (&gen3, &cfg3), (&general, &cfg_general)] {
        let (code, _) = run_bin(
            &[
                "gen".into(),
                "--config".into(),
                spec.clone(),
                "--seed".into(),
                "7".into(),
                "--out".into(),
                out.clone(),
            ],
            1,
        )?;
        ensure(code == Some(0), || format!("gen {spec} exited {code:?}"))?;
    }
    let lw = write(
        d,
        "lw.json",
        r#"{"lo":[0,0,0],"hi":[1,1,1],"functions":[
            {"lo":[0,0],"hi":[1,1],"cells":[2,2],"values":[1,2,0,3]},
            {"lo":[0,0],"hi":[1,1],"cells":[2,2],"values":[0.5,1,1,2]},
            {"lo":[0,0],"hi":[1,1],"cells":[2,2],"values":[2,2,1,0]}]}"#,
    );
    let sweep = write(
        d,
        "sweep.json",
        r#"{"template":{"n":2,"counts":[2,3],"regime":{"kind":"small_angle","delta":0.1},"cube":{"min_corner":[0,0],"side":10}},"scales":[10,20]}"#,
    );
    let search = write(
        d,
        "search.json",
        r#"{"n":2,"counts":[2,2],"cube":{"min_corner":[0,0],"side":8},"budget":12,"restarts":3}"#,
    );
    let commands: Vec<Vec<&str>> = vec![
        vec!["gen", "--config", &gen2, "--seed", "42"],
        vec!["eval", "--config", &cfg2, "--tol", "0.01"],
        vec!["eval", "--config", &cfg3, "--grid", "48"],
        vec!["exact2d", "--config", &cfg2],
        vec!["certify", "--config", &cfg2, "--delta", "0.1", "--check"],
        vec!["certify", "--config", &cfg3, "--epsilon", "8"],
        vec!["verify-lw", "--config", &lw, "--grid", "8"],
        vec![
            "verify-step",
            "--config",
            &cfg2,
            "--delta",
            "0.1",
            "--max-doublings",
            "4",
        ],
        vec!["reduce", "--config", &cfg_general, "--delta", "0.05", "--check"],
        vec!["sweep", "--config", &sweep, "--delta", "0.1", "--tol", "0.05"],
        vec![
            "sweep", "--config", &sweep, "--delta", "0.1", "--tol", "0.05", "--format", "csv",
        ],
        vec!["search", "--config", &search, "--seed", "3", "--grid", "16"],
        vec![
            "search", "--config", &search, "--seed", "3", "--grid", "16", "--format", "csv",
        ],
    ];
    for cmd in &commands {
        let args: Vec<String> = cmd.iter().map(|s| s.to_string()).collect();
        let first = run_bin(&args, 1)?;
        ensure(first.0 == Some(0), || format!("`{}` exited {:?}", cmd[0], first.0))?;
        ensure(!first.1.is_empty(), || format!("`{}` printed nothing", cmd[0]))?;
        for threads in [8, 8, 1] {
            let again = run_bin(&args, threads)?;
            ensure(again == first, || {
                format!("`{}` differs with {threads} workers", cmd.join(" "))
            })?;
        }
    }
    let _ = std::fs::remove_dir_all(d);
    Ok(format!(
        "{} invocations byte-identical over 1/8/8/1 workers",
        commands.len()
    ))
}

fn main() {
    let criteria: Vec<Criterion> = vec![
        ("Loomis-Whitney suite", 60, lw_suite),
        ("axis-parallel chain", 60, axis_parallel_chain),
        ("step inequality", 300, step_inequality),
        ("certificate soundness", 600, certificate_soundness),
        ("epsilon-exponent identity", 1, epsilon_identity),
        ("reduction end-to-end", 120, reduction_end_to_end),
        ("weighted equivalence", 30, weighted_equivalence),
        ("Lipschitz regime", 120, lipschitz_regime),
        ("known-value quadrature", 60, known_values),
        ("determinism", 60, determinism),
    ];
    let mut failed = 0;
    for (i, (name, limit, check)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let result = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let result = result.and_then(|detail| {
            if elapsed <= Duration::from_secs(limit) {
                Ok(detail)
            } else {
                Err(format!("{detail}; took {elapsed:.1?}, limit {limit}s"))
            }
        });
        match result {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} [{elapsed:.2?}]", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why} [{elapsed:.2?}]", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all criteria passed");
}
