use cauchy_angles::cauchy::{cdf, char_fn, density, quantile, sample, sample_brownian_hitting};
use cauchy_angles::stats::{ecf_distance, ks_test, median, Alpha};
use cauchy_angles::{CauchyParams, RngSeed};

const SEED: u64 = 20_240_917;

fn std_cdf(x: f64) -> f64 {
    cdf(&CauchyParams::STANDARD, x)
}

/// Adaptive Simpson, used only as an oracle here. `fs` holds the integrand
/// at `a`, the midpoint and `b`.
fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    fn step<F: Fn(f64) -> f64>(
        f: &F,
        (a, b): (f64, f64),
        fs: [f64; 3],
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let [fa, fm, fb] = fs;
        let m = 0.5 * (a + b);
        let (flm, frm) = (f(0.5 * (a + m)), f(0.5 * (m + b)));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        step(f, (a, m), [fa, flm, fm], left, tol / 2.0, depth - 1)
            + step(f, (m, b), [fm, frm, fb], right, tol / 2.0, depth - 1)
    }
    let fs = [f(a), f(0.5 * (a + b)), f(b)];
    let whole = (b - a) / 6.0 * (fs[0] + 4.0 * fs[1] + fs[2]);
    step(f, (a, b), fs, whole, tol, 60)
}

#[test]
fn density_integrates_to_one_with_tail_correction() {
    for (a, b) in [(1.0, 0.0), (0.5, 0.5), (2.0, 3.0), (0.01, -4.0)] {
        let p = CauchyParams::new(a, b).unwrap();
        let cut = 1e6 * a;
        let f = |x: f64| density(&p, x).unwrap();
        // split at the mode so the peak is resolved on both sides
        let body = simpson(&f, b - cut, b, 1e-13) + simpson(&f, b, b + cut, 1e-13);
        let tails = 2.0 * (0.5 - (cdf(&p, b + cut) - 0.5));
        assert!(
            (body + tails - 1.0).abs() < 1e-9,
            "({a}, {b}): {}",
            body + tails
        );
    }
}

#[test]
fn quantile_inverts_cdf_on_a_grid() {
    let p = CauchyParams::new(2.0, 3.0).unwrap();
    let mut worst = 0.0f64;
    for k in 0..10_000 {
        let x = -50.0 + 100.0 * k as f64 / 9_999.0;
        let back = quantile(&p, cdf(&p, x)).unwrap();
        worst = worst.max((back - x).abs() / x.abs().max(1.0));
    }
    assert!(worst < 1e-10, "{worst}");
}

#[test]
fn inverse_cdf_sampler_passes_ks_at_one_million() {
    let xs = sample(&CauchyParams::STANDARD, RngSeed::new(SEED, 0), 1_000_000).unwrap();
    let r = ks_test(&xs, std_cdf, Alpha::P01).unwrap();
    assert!((r.threshold - 1.63e-3).abs() < 1e-15);
    assert!(r.passed, "{r:?}");
}

#[test]
fn sample_median_tracks_location() {
    let p = CauchyParams::new(2.0, 3.0).unwrap();
    let xs = sample(&p, RngSeed::new(SEED, 1), 1_000_000).unwrap();
    let m = median(&xs).unwrap();
    assert!((m - 3.0).abs() < 0.02, "{m}");
}

#[test]
fn reciprocal_of_standard_cauchy_is_standard_cauchy() {
    let xs = sample(&CauchyParams::STANDARD, RngSeed::new(SEED, 2), 100_000).unwrap();
    let inv: Vec<f64> = xs.iter().map(|x| 1.0 / x).collect();
    assert!(ks_test(&xs, std_cdf, Alpha::P01).unwrap().passed);
    assert!(ks_test(&inv, std_cdf, Alpha::P01).unwrap().passed);
}

#[test]
fn gaussian_ratio_oracle_agrees_with_closed_form() {
    let ys = sample_brownian_hitting(0.0, 1.0, RngSeed::new(SEED, 3), 1_000_000).unwrap();
    let r = ks_test(&ys, std_cdf, Alpha::P01).unwrap();
    assert!(r.passed, "{r:?}");

    let p = CauchyParams::new(2.0, 3.0).unwrap();
    let shifted = sample_brownian_hitting(3.0, 2.0, RngSeed::new(SEED, 4), 100_000).unwrap();
    assert!(
        ks_test(&shifted, |x| cdf(&p, x), Alpha::P01)
            .unwrap()
            .passed
    );
    assert!((median(&shifted).unwrap() - 3.0).abs() < 0.05);
}

#[test]
fn gaussian_ratio_scale_matches_tangent_of_angle() {
    let a = 0.3;
    let ys = sample_brownian_hitting(0.0, a, RngSeed::new(SEED, 5), 100_000).unwrap();
    let p = CauchyParams::new(a, 0.0).unwrap();
    assert!(ks_test(&ys, |x| cdf(&p, x), Alpha::P01).unwrap().passed);
}

#[test]
fn empirical_characteristic_function_matches() {
    let n = 200_000;
    let grid: Vec<f64> = (-5..=5).map(f64::from).collect();
    for (i, (a, b)) in [(1.0, 0.0), (0.5, 2.0)].into_iter().enumerate() {
        let p = CauchyParams::new(a, b).unwrap();
        let xs = sample(&p, RngSeed::new(SEED, 10 + i as u64), n).unwrap();
        let d = ecf_distance(&xs, &p, &grid).unwrap();
        assert!(d < 3.0 / (n as f64).sqrt(), "({a}, {b}): {d}");
    }
    assert_eq!(char_fn(&CauchyParams::STANDARD, 0.0).re, 1.0);
}

#[test]
fn sampler_is_deterministic_per_seed_and_stream() {
    let p = CauchyParams::STANDARD;
    let a = sample(&p, RngSeed::new(1, 0), 1000).unwrap();
    assert_eq!(a, sample(&p, RngSeed::new(1, 0), 1000).unwrap());
    assert_ne!(a, sample(&p, RngSeed::new(1, 1), 1000).unwrap());
    assert_ne!(a, sample(&p, RngSeed::new(2, 0), 1000).unwrap());
}
