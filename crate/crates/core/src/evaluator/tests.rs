use super::*;
use alloc::vec;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn line(anchor: Vec<f64>, dir: Vec<f64>) -> Line {
    Line::new(anchor, Direction::new(dir).unwrap()).unwrap()
}

fn random_planar(rng: &mut ChaCha8Rng, max_angle: f64) -> Vec<TubeFamily> {
    (0..2)
        .map(|j| {
            let count = rng.gen_range(1..5);
            let members = (0..count)
                .map(|_| {
                    let anchor = vec![rng.gen_range(3.0..7.0), rng.gen_range(3.0..7.0)];
                    let t = rng.gen_range(-max_angle..max_angle);
                    let mut dir = vec![libm::sin(t), libm::sin(t)];
                    dir[j] = libm::cos(t);
                    Member::line(line(anchor, dir))
                })
                .collect();
            TubeFamily::new(2, j, 1.0, members).unwrap()
        })
        .collect()
}

#[test]
fn integrand_examples() {
    let fams = axis_parallel_cross(&[0.0, 0.0], 1.0).unwrap();
    assert_eq!(overlap_integrand(&fams, &[0.2, -0.3]), 1.0);
    assert_eq!(overlap_integrand(&fams, &[5.0, 5.0]), 0.0);

    let mut fams3 = axis_parallel_cross(&[0.0, 0.0, 0.0], 1.0).unwrap();
    for _ in 0..3 {
        fams3[0]
            .push(Member::line(line(vec![0.0, 0.1, 0.0], vec![1.0, 0.0, 0.0])))
            .unwrap();
    }
    assert_eq!(overlap_integrand(&fams3, &[0.0, 0.0, 0.0]), 2.0);
    assert_eq!(overlap_integrand(&fams3, &[0.0, 0.0, 3.0]), 0.0);
}

#[test]
fn perpendicular_strips_quadrature() {
    let fams = axis_parallel_cross(&[5.0, 5.0], 1.0).unwrap();
    let cube = Cube::new(vec![0.0, 0.0], 10.0).unwrap();
    let v = evaluate_overlap(&fams, &cube, GridSpec::new(200).unwrap()).unwrap();
    assert!((v.value - 4.0).abs() <= 0.02 * 4.0, "{}", v.value);
    assert!(v.error_estimate.is_some());
}

#[test]
fn tricylinder_quadrature() {
    let fams = axis_parallel_cross(&[5.0, 5.0, 5.0], 1.0).unwrap();
    let cube = Cube::new(vec![0.0; 3], 10.0).unwrap();
    let exact = 8.0 * (2.0 - core::f64::consts::SQRT_2);
    let v = evaluate_overlap(&fams, &cube, GridSpec::new(160).unwrap()).unwrap();
    assert!((v.value - exact).abs() <= 0.02 * exact, "{}", v.value);
    let odd = evaluate_overlap(&fams, &cube, GridSpec::new(81).unwrap()).unwrap();
    assert!(odd.error_estimate.is_none());
}

#[test]
fn empty_families_vanish() {
    let fams: Vec<TubeFamily> = (0..3).map(|j| TubeFamily::empty(3, j, 1.0).unwrap()).collect();
    let cube = Cube::new(vec![0.0; 3], 4.0).unwrap();
    let v = evaluate_overlap(&fams, &cube, GridSpec::new(8).unwrap()).unwrap();
    assert_eq!(v.value, 0.0);
    let planar: Vec<TubeFamily> = (0..2).map(|j| TubeFamily::empty(2, j, 1.0).unwrap()).collect();
    let square = Cube::new(vec![0.0; 2], 1.0).unwrap();
    assert_eq!(exact_overlap_2d(&planar, &square).unwrap(), 0.0);
}

#[test]
fn cell_budget_guard() {
    let fams = axis_parallel_cross(&[0.0, 0.0, 0.0], 1.0).unwrap();
    let cube = Cube::new(vec![-1.0; 3], 2.0).unwrap();
    let grid = GridSpec::new(1000).unwrap();
    assert!(matches!(
        evaluate_overlap(&fams, &cube, grid),
        Err(Error::CellBudget { .. })
    ));
    let small = GridSpec::new(10).unwrap().with_budget(999);
    assert!(evaluate_overlap(&fams, &cube, small).is_err());
}

#[test]
fn wrong_family_order_rejected() {
    let mut fams = axis_parallel_cross(&[0.0, 0.0], 1.0).unwrap();
    fams.swap(0, 1);
    let cube = Cube::new(vec![0.0; 2], 1.0).unwrap();
    assert!(evaluate_overlap(&fams, &cube, GridSpec::new(4).unwrap()).is_err());
}

#[test]
fn refined_axis_parallel_converges_to_slab_value() {
    // Slabs of half-width 1 in a side-10 cube: the intersection is a square
    // of side 2 whatever the grid alignment, so the limit is 4.
    let fams = axis_parallel_cross(&[4.3, 5.1], 1.0).unwrap();
    let cube = Cube::new(vec![0.0, 0.0], 10.0).unwrap();
    let spec = RefineSpec::new(1e-3).with_max_doublings(12).with_budget(1 << 29);
    let v = evaluate_refined(&fams, &cube, spec).unwrap();
    assert_eq!(v.convergence, Convergence::Converged);
    assert!((v.value - 4.0).abs() < 1e-3 * 4.0, "{v:?}");
}

#[test]
fn refined_values_stay_in_range() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let cube = Cube::new(vec![0.0, 0.0], 10.0).unwrap();
    for _ in 0..5 {
        let fams = random_planar(&mut rng, 0.3);
        let upper = cube.volume() * fams.iter().map(|f| f.total_weight()).product::<f64>();
        let mut m = 4;
        while m <= 256 {
            let v = evaluate_overlap(&fams, &cube, GridSpec::new(m).unwrap()).unwrap();
            assert!(v.value >= 0.0 && v.value <= upper);
            m *= 2;
        }
    }
}

#[test]
fn planar_quadrature_matches_exact_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let cube = Cube::new(vec![0.0, 0.0], 10.0).unwrap();
    for _ in 0..50 {
        let fams = random_planar(&mut rng, 0.4);
        let exact = exact_overlap_2d(&fams, &cube).unwrap();
        let v = evaluate_refined(&fams, &cube, RefineSpec::new(1e-3).with_start(64).with_max_doublings(5)).unwrap();
        let rel = (v.value - exact).abs() / exact;
        assert!(rel < 0.01, "quadrature {} vs exact {exact}", v.value);
    }
}

#[test]
fn monotone_in_radius_and_family_growth() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let cube = Cube::new(vec![0.0, 0.0], 10.0).unwrap();
    let grid = GridSpec::new(64).unwrap();
    for _ in 0..10 {
        let fams = random_planar(&mut rng, 0.4);
        let base = evaluate_overlap(&fams, &cube, grid).unwrap().value;
        let wider: Vec<TubeFamily> = fams.iter().map(|f| f.with_radius(1.3).unwrap()).collect();
        assert!(evaluate_overlap(&wider, &cube, grid).unwrap().value >= base);
        let mut grown = fams.clone();
        grown[1]
            .push(Member::line(line(vec![5.0, 5.0], vec![0.1, 1.0])))
            .unwrap();
        assert!(evaluate_overlap(&grown, &cube, grid).unwrap().value >= base);
    }
}

#[test]
fn weight_scaling_is_exact_power() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let fams3: Vec<TubeFamily> = (0..3)
        .map(|j| {
            let members = (0..3)
                .map(|_| {
                    let anchor: Vec<f64> = (0..3).map(|_| rng.gen_range(1.5..2.5)).collect();
                    let mut dir: Vec<f64> = (0..3).map(|_| rng.gen_range(-0.1..0.1)).collect();
                    dir[j] = 1.0;
                    Member::line(line(anchor, dir)).weighted(rng.gen_range(0.5..2.0))
                })
                .collect();
            TubeFamily::new(3, j, 1.0, members).unwrap()
        })
        .collect();
    let cube = Cube::new(vec![0.0; 3], 4.0).unwrap();
    let grid = GridSpec::new(40).unwrap();
    let base = evaluate_overlap(&fams3, &cube, grid).unwrap().value;
    let lambda: f64 = 4.0;
    let mut scaled = fams3.clone();
    scaled[1] = scaled[1].scaled_weights(lambda).unwrap();
    let v = evaluate_overlap(&scaled, &cube, grid).unwrap().value;
    assert!((v - base * lambda.sqrt()).abs() <= 1e-12 * v);
}

#[test]
fn translation_invariance() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let cube = Cube::new(vec![0.0, 0.0], 10.0).unwrap();
    let shift = [8.0, -4.0];
    let grid = GridSpec::new(128).unwrap();
    for _ in 0..10 {
        let fams = random_planar(&mut rng, 0.4);
        let moved: Vec<TubeFamily> = fams.iter().map(|f| f.translated(&shift).unwrap()).collect();
        let a = evaluate_overlap(&fams, &cube, grid).unwrap().value;
        let b = evaluate_overlap(&moved, &cube.translated(&shift).unwrap(), grid)
            .unwrap()
            .value;
        assert!((a - b).abs() <= 1e-12 * a.max(1.0), "{a} vs {b}");
    }
}

#[test]
fn average_integral_examples() {
    let cube = Cube::new(vec![0.0, 0.0], 2.0).unwrap();
    let v = OverlapValue {
        value: 8.0,
        error_estimate: None,
        cells_per_side: 1,
        convergence: Convergence::Fixed,
    };
    assert_eq!(average_integral(&v, &cube), 2.0);
    assert_eq!(average_integral(&OverlapValue { value: 0.0, ..v }, &cube), 0.0);
}

#[test]
fn average_bounded_by_counts() {
    // A big radius saturates every tube over the cube, so f_j <= N_j bounds
    // the average by Π N_j^{1/(n-1)}.
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let fams = random_planar(&mut rng, 0.3);
    let big: Vec<TubeFamily> = fams.iter().map(|f| f.with_radius(100.0).unwrap()).collect();
    let cube = Cube::new(vec![0.0, 0.0], 10.0).unwrap();
    let v = evaluate_overlap(&big, &cube, GridSpec::new(32).unwrap()).unwrap();
    let bound: f64 = fams.iter().map(|f| f.len() as f64).product();
    assert!(average_integral(&v, &cube) <= bound * (1.0 + 1e-12));
    assert!((average_integral(&v, &cube) - bound).abs() < 1e-9);
}
