use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use cauchy_angles::cauchy::cdf;
use cauchy_angles::stats::{ks_test, median, Alpha};
use cauchy_angles::transform::{arctan_sum_params, uniform_angle_tangent};
use cauchy_angles::walk::{
    euclidean_walk, hyperbolic_angle, hyperbolic_triangle_area, hyperbolic_walk,
    walk_final_tangents, EuclideanStepSpec, HyperbolicStep,
};
use cauchy_angles::{CauchyParams, RngSeed};

const SEED: u64 = 31_415;

fn std_cdf(x: f64) -> f64 {
    cdf(&CauchyParams::STANDARD, x)
}

#[test]
fn single_hyperbolic_angle_is_uniform() {
    let angles: Vec<f64> = (0..20_000u64)
        .map(|i| {
            hyperbolic_walk(1, RngSeed::new(SEED, 0).substream(i))
                .unwrap()
                .angles[0]
        })
        .collect();
    assert!(angles.iter().all(|t| t.abs() < FRAC_PI_2));
    let r = ks_test(&angles, |t| (t + FRAC_PI_2) / PI, Alpha::P01).unwrap();
    assert!(r.passed, "{r:?}");
}

#[test]
fn standard_walk_tangent_stays_standard_cauchy() {
    for n in [1usize, 3, 10] {
        let steps = vec![EuclideanStepSpec::standard(); n];
        let t = walk_final_tangents(50_000, RngSeed::new(SEED, n as u64), |s| {
            euclidean_walk(&steps, s)
        })
        .unwrap();
        assert!(ks_test(&t, std_cdf, Alpha::P01).unwrap().passed, "n = {n}");
    }
}

#[test]
fn long_step_shrinks_the_angle_law() {
    let step = EuclideanStepSpec::new(2.0, 1.0, 0.0).unwrap();
    let law = step.angle_tangent_law().unwrap();
    assert_eq!((law.scale(), law.location()), (0.5, 0.0));
    let t = walk_final_tangents(50_000, RngSeed::new(SEED, 40), |s| {
        euclidean_walk(&[step], s)
    })
    .unwrap();
    assert!(ks_test(&t, |x| cdf(&law, x), Alpha::P01).unwrap().passed);
}

#[test]
fn three_scaled_steps_follow_the_folded_law() {
    let steps: Vec<_> = [2.0, 3.0, 0.5]
        .iter()
        .map(|&a| EuclideanStepSpec::new(1.0, a, 0.0).unwrap())
        .collect();
    let laws: Vec<_> = steps
        .iter()
        .map(|s| s.angle_tangent_law().unwrap())
        .collect();
    let law = arctan_sum_params(&laws).unwrap();
    let t = walk_final_tangents(50_000, RngSeed::new(SEED, 41), |s| {
        euclidean_walk(&steps, s)
    })
    .unwrap();
    assert!(ks_test(&t, |x| cdf(&law, x), Alpha::P01).unwrap().passed);
}

#[test]
fn walk_angles_are_independent_across_steps() {
    let path = hyperbolic_walk(2, RngSeed::new(SEED, 50)).unwrap();
    assert_ne!(path.angles[0], path.angles[1]);
    let m = 20_000;
    let pairs: Vec<(f64, f64)> = (0..m as u64)
        .map(|i| {
            let p = hyperbolic_walk(2, RngSeed::new(SEED, 51).substream(i)).unwrap();
            (p.angles[0], p.angles[1])
        })
        .collect();
    let mean = |f: &dyn Fn(&(f64, f64)) -> f64| pairs.iter().map(f).sum::<f64>() / m as f64;
    let corr = mean(&|p| p.0 * p.1) / mean(&|p| p.0 * p.0);
    assert!(corr.abs() < 0.03, "{corr}");
}

#[test]
fn uniform_angle_tangent_law() {
    let w = uniform_angle_tangent(RngSeed::new(SEED, 60), 1_000_000).unwrap();
    assert!(ks_test(&w, std_cdf, Alpha::P01).unwrap().passed);
    assert!(median(&w).unwrap().abs() < 0.01);
}

#[test]
fn hyperbolic_triangle_geometry() {
    let h = HyperbolicStep::new(1.0, 1.0).unwrap();
    let (t, th) = hyperbolic_angle(&h);
    assert!((t - (1.0 / 1f64.cosh()).atan()).abs() < 1e-15);
    assert_eq!(t, th);
    let arccot = (2.0 * (1f64 / 1f64.tanh()) / 1f64.sinh()).recip().atan();
    assert!((hyperbolic_triangle_area(&h) - arccot).abs() < 1e-15);
    assert!((hyperbolic_triangle_area(&h) - (FRAC_PI_2 - t - th)).abs() < 1e-12);

    let tiny = HyperbolicStep::new(1e-6, 1e-6).unwrap();
    assert!(hyperbolic_triangle_area(&tiny) < 1e-9);
    let huge = HyperbolicStep::new(30.0, 30.0).unwrap();
    assert!((hyperbolic_triangle_area(&huge) - FRAC_PI_2).abs() < 1e-9);
    let flat = HyperbolicStep::new(1.0, 1e-9).unwrap();
    assert!(hyperbolic_angle(&flat).0 < 1e-8);
    for eta in [1e-3, 0.5, 1.0, 5.0, 40.0] {
        let (t, _) = hyperbolic_angle(&HyperbolicStep::isosceles(eta).unwrap());
        assert!(t > 0.0 && t <= FRAC_PI_4);
    }
}
