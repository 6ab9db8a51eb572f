use cauchy_angles::cauchy::cdf;
use cauchy_angles::chain::{
    fibonacci, rational_to_f64, sample_u_chain, sample_v_chain, sample_w_chain, scaled_arcsine_cdf,
    u_chain_cdf, u_chain_density, u_chain_support_f64, v_chain_params, w_chain_step,
    ChainStepCoeffs, RationalPair, RationalStepCoeffs, PHI,
};
use cauchy_angles::stats::{integrate_singular, ks_test, median, Alpha};
use cauchy_angles::{CauchyParams, RngSeed};
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

const SEED: u64 = 4_181;

fn ln_biguint(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 60 {
        return (x.iter_u64_digits().next().unwrap_or(0) as f64).ln();
    }
    let top = (x >> (bits - 60) as usize)
        .iter_u64_digits()
        .next()
        .unwrap() as f64;
    top.ln() + (bits - 60) as f64 * std::f64::consts::LN_2
}

fn ln_abs(r: &BigRational) -> f64 {
    ln_biguint(r.numer().magnitude()) - ln_biguint(r.denom().magnitude())
}

#[test]
fn binet_rounding_reproduces_fibonacci() {
    let sqrt5 = 5f64.sqrt();
    for k in 2..=70u64 {
        let binet = (PHI.powf(k as f64) / sqrt5).round();
        assert_eq!(BigUint::from(binet as u64), fibonacci(k), "k = {k}");
    }
}

#[test]
fn b_n_approaches_the_limit_faster_than_the_binet_rate() {
    // F_m / F_{m+1} at m = 2000 equals φ − 1 far below every bound tested
    let limit = BigRational::new(fibonacci(2000).into(), fibonacci(2001).into());
    for n in 1..=200u64 {
        let err = (v_chain_params(n).unwrap().b - &limit).abs();
        assert!(!err.is_zero());
        let bound = (2.0 - 4.0 * n as f64) * PHI.ln();
        assert!(ln_abs(&err) < bound, "n = {n}: {} vs {bound}", ln_abs(&err));
    }
}

#[test]
fn v_chain_samples_follow_the_closed_form() {
    for n in [1u64, 2, 3, 5, 10] {
        let law = v_chain_params(n).unwrap().to_params().unwrap();
        let pf = sample_v_chain(n, RngSeed::new(SEED, n), 100_000).unwrap();
        let r = ks_test(&pf.values, |x| cdf(&law, x), Alpha::P01)
            .unwrap()
            .with_pole_discards(pf.pole_discards);
        assert!(r.passed, "n = {n}: {r:?}");
    }
}

#[test]
fn w_chain_with_c2_d1_from_standard() {
    let step = RationalStepCoeffs::from_integers(2, 1);
    let w1 = w_chain_step(
        &RationalPair::new(BigRational::one(), BigRational::zero(), 0).unwrap(),
        &step,
    )
    .unwrap();
    assert_eq!(rational_to_f64(&w1.a), 0.2);
    assert_eq!(rational_to_f64(&w1.b), 0.4);
    let law = w1.to_params().unwrap();
    let pf = sample_w_chain(
        &CauchyParams::STANDARD,
        &[ChainStepCoeffs { c: 2.0, d: 1.0 }],
        RngSeed::new(SEED, 50),
        100_000,
    )
    .unwrap();
    assert!(
        ks_test(&pf.values, |x| cdf(&law, x), Alpha::P01)
            .unwrap()
            .passed
    );
}

#[test]
fn arcsine_chain_samples_follow_the_density() {
    let u1 = sample_u_chain(1, RngSeed::new(SEED, 60), 100_000).unwrap();
    let closed = |u: f64| 2.0 / std::f64::consts::PI * u.sqrt().asin();
    assert!(ks_test(&u1, closed, Alpha::P01).unwrap().passed);
    for n in 2..=4 {
        let xs = sample_u_chain(n, RngSeed::new(SEED, 60 + n), 20_000).unwrap();
        let r = ks_test(&xs, |u| u_chain_cdf(n, u).unwrap(), Alpha::P01).unwrap();
        assert!(r.passed, "n = {n}: {r:?}");
    }
}

#[test]
fn scaled_arcsine_for_t_two() {
    let t = 2.0;
    let xs: Vec<f64> = sample_u_chain(1, RngSeed::new(SEED, 70), 100_000)
        .unwrap()
        .into_iter()
        .map(|u| t * u)
        .collect();
    assert!(
        ks_test(&xs, |s| scaled_arcsine_cdf(t, s), Alpha::P01)
            .unwrap()
            .passed
    );
}

#[test]
fn one_plus_v_concentrates_at_phi() {
    let pf = sample_v_chain(20, RngSeed::new(SEED, 80), 100_000).unwrap();
    let shifted: Vec<f64> = pf.values.iter().map(|v| 1.0 + v).collect();
    assert!((median(&shifted).unwrap() - PHI).abs() < 0.01);
}

#[test]
fn fourth_density_integrates_to_one() {
    let (lo, hi) = u_chain_support_f64(4).unwrap();
    assert_eq!((lo, hi), (0.6, 2.0 / 3.0));
    let r = integrate_singular(|u| u_chain_density(4, u).unwrap(), lo, hi, 1e-10, 1 << 16).unwrap();
    assert!((r.value - 1.0).abs() < 1e-6, "{r:?}");
}
