//! Cauchy continued-fraction chains.
//!
//! * `V₁ = 1/(1 + C)`, `Vₙ₊₁ = 1/(1 + Vₙ)`: every `Vₙ` is Cauchy with
//!   scale `1/F₂ₙ₊₁` and location `F₂ₙ/F₂ₙ₊₁`, tracked here exactly.
//! * `Wₙ₊₁ = 1/(cₙ₊₁ + dₙ₊₁Wₙ)` from a Cauchy seed `W₀`: still Cauchy.
//! * `U₁ = 1/(1 + C²)`, `Uₙ₊₁ = 1/(1 + Uₙ)`: arcsine-type laws on
//!   shrinking intervals with Fibonacci-ratio endpoints.
//!
//! All of them collapse onto `φ − 1`.

use std::f64::consts::PI;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::cauchy::{sample, CauchyParams};
use crate::error::{Error, Result};
use crate::rng::RngSeed;
use crate::stats::{integrate_singular, QuadratureResult};
use crate::transform::PushForward;

/// Golden ratio `(1 + √5)/2`.
pub const PHI: f64 = 1.618_033_988_749_895;

/// `F_k` with `F₀ = 0`, `F₁ = 1` (fast doubling).
pub fn fibonacci(k: u64) -> BigUint {
    fib_pair(k).0
}

// (F_k, F_{k+1})
fn fib_pair(k: u64) -> (BigUint, BigUint) {
    if k == 0 {
        return (BigUint::zero(), BigUint::one());
    }
    let (a, b) = fib_pair(k / 2);
    // F_2m = F_m (2F_{m+1} − F_m), F_2m+1 = F_m² + F_{m+1}²
    let c = &a * (&b + &b - &a);
    let d = &a * &a + &b * &b;
    if k.is_multiple_of(2) {
        (c, d)
    } else {
        let e = &c + &d;
        (d, e)
    }
}

/// Formats a rational as `numerator/denominator`, always with both parts.
pub fn format_rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Nearest `f64` to an exact rational, robust to numerators and
/// denominators far outside the `f64` range.
pub fn rational_to_f64(r: &BigRational) -> f64 {
    if let Some(v) = r.to_f64() {
        if v.is_finite() && (v != 0.0 || r.is_zero()) {
            return v;
        }
    }
    let (n, d) = (r.numer(), r.denom());
    let shift = n.bits() as i64 - d.bits() as i64;
    // scale to roughly 2^60 · 2^shift, then divide exactly in integers
    let (num, den) = if shift > 60 {
        (n.clone(), d << (shift - 60) as usize)
    } else {
        (n << (60 - shift) as usize, d.clone())
    };
    let q = num.div_floor(&den).to_f64().unwrap_or(f64::NAN);
    // split the power so neither factor underflows on its own
    let e = (shift - 60) as i32;
    q * 2f64.powi(e / 2) * 2f64.powi(e - e / 2)
}

/// Exact Cauchy parameters of step `n` of a chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalPair {
    pub a: BigRational,
    pub b: BigRational,
    pub n: u64,
}

impl RationalPair {
    pub fn new(a: BigRational, b: BigRational, n: u64) -> Result<Self> {
        if !a.is_positive() {
            return Err(Error::InvalidScale(rational_to_f64(&a)));
        }
        Ok(Self { a, b, n })
    }

    pub fn to_params(&self) -> Result<CauchyParams> {
        CauchyParams::new(rational_to_f64(&self.a), rational_to_f64(&self.b))
    }
}

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// `aₙ₊₁ = aₙ/((1 + bₙ)² + aₙ²)`, `bₙ₊₁ = (bₙ + 1)/((1 + bₙ)² + aₙ²)`.
pub fn v_chain_step(s: &RationalPair) -> Result<RationalPair> {
    let shifted = &s.b + BigRational::one();
    let den = &shifted * &shifted + &s.a * &s.a;
    if den.is_zero() {
        return Err(Error::ZeroDenominator("(1 + b)^2 + a^2"));
    }
    RationalPair::new(&s.a / &den, shifted / den, s.n + 1)
}

/// `(aₙ, bₙ) = (1/F₂ₙ₊₁, F₂ₙ/F₂ₙ₊₁)`.
pub fn v_chain_params(n: u64) -> Result<RationalPair> {
    if n == 0 {
        return Err(Error::InvalidIndex { min: 1, got: 0 });
    }
    let (f2n, f2n1) = fib_pair(2 * n);
    let den = BigInt::from(f2n1);
    RationalPair::new(
        BigRational::new(BigInt::one(), den.clone()),
        BigRational::new(BigInt::from(f2n), den),
        n,
    )
}

/// Law of `V₁ = 1/(1 + C)`: `(1/2, 1/2)`.
pub fn v_chain_start() -> RationalPair {
    RationalPair {
        a: ratio(1, 2),
        b: ratio(1, 2),
        n: 1,
    }
}

/// Coefficients `(c, d)` of one step `W ↦ 1/(c + dW)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainStepCoeffs {
    pub c: f64,
    pub d: f64,
}

/// Exact-rational counterpart of [`ChainStepCoeffs`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalStepCoeffs {
    pub c: BigRational,
    pub d: BigRational,
}

impl RationalStepCoeffs {
    pub fn from_integers(c: i64, d: i64) -> Self {
        Self {
            c: BigRational::from_integer(c.into()),
            d: BigRational::from_integer(d.into()),
        }
    }
}

/// One exact step of the generalized chain:
/// `a' = d·a/((c + d·b)² + d²a²)`, `b' = (c + d·b)/((c + d·b)² + d²a²)`.
pub fn w_chain_step(s: &RationalPair, k: &RationalStepCoeffs) -> Result<RationalPair> {
    let shifted = &k.c + &k.d * &s.b;
    let da = &k.d * &s.a;
    let den = &shifted * &shifted + &da * &da;
    if den.is_zero() {
        return Err(Error::ZeroDenominator("(c + d b)^2 + d^2 a^2"));
    }
    // a negative d mirrors the law; the scale stays positive
    RationalPair::new(da.abs() / &den, shifted / den, s.n + 1)
}

/// Floating-point step of the generalized chain, for irrational `c`, `d`.
pub fn w_chain_step_f64(s: &CauchyParams, k: &ChainStepCoeffs) -> Result<CauchyParams> {
    let shifted = k.c + k.d * s.location();
    let da = k.d * s.scale();
    let den = shifted * shifted + da * da;
    if den == 0.0 || !den.is_finite() {
        return Err(Error::ZeroDenominator("(c + d b)^2 + d^2 a^2"));
    }
    CauchyParams::new(da.abs() / den, shifted / den)
}

/// Integer coefficients `(αₙ, βₙ)` of the `Uₙ` law.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArcsineChainCoeffs {
    pub alpha: BigInt,
    pub beta: BigInt,
    pub n: u64,
}

/// `(α₁, β₁) = (1, 0)`, `αₙ = βₙ₋₁`, `βₙ = αₙ₋₁ + βₙ₋₁`.
pub fn u_chain_coeffs(n: u64) -> Result<ArcsineChainCoeffs> {
    if n == 0 {
        return Err(Error::InvalidIndex { min: 1, got: 0 });
    }
    let (mut alpha, mut beta) = (BigInt::one(), BigInt::zero());
    for _ in 1..n {
        let next = &alpha + &beta;
        alpha = std::mem::replace(&mut beta, next);
    }
    Ok(ArcsineChainCoeffs { alpha, beta, n })
}

/// Open support `(lo, hi)` of `Uₙ`: the endpoints are `βₙ/(αₙ + βₙ)` and
/// `(αₙ + βₙ)/(αₙ + 2βₙ)`, ordered according to the parity of `n`.
pub fn u_chain_support(n: u64) -> Result<(BigRational, BigRational)> {
    let k = u_chain_coeffs(n)?;
    let s = &k.alpha + &k.beta;
    let near = BigRational::new(k.beta.clone(), s.clone());
    let far = BigRational::new(s, &k.alpha + &k.beta + &k.beta);
    Ok(if n.is_multiple_of(2) {
        (far, near)
    } else {
        (near, far)
    })
}

/// `(lo, hi)` of [`u_chain_support`] as floats.
pub fn u_chain_support_f64(n: u64) -> Result<(f64, f64)> {
    let (lo, hi) = u_chain_support(n)?;
    Ok((rational_to_f64(&lo), rational_to_f64(&hi)))
}

/// Density of `Uₙ`:
///
/// ```text
/// 1 / ( π [(−1)ⁿ⁺¹αₙ + (−1)ⁿβₙu]
///         √[(−1)ⁿβₙ + (−1)ⁿ⁺¹(αₙ + βₙ)u]
///         √[(−1)ⁿ⁺¹(αₙ + βₙ) + (−1)ⁿ(αₙ + 2βₙ)u] )
/// ```
///
/// on the open support; endpoints and points outside are errors.
pub fn u_chain_density(n: u64, u: f64) -> Result<f64> {
    let d = UDensity::new(n)?;
    let hi = d.lo + d.len;
    if !(u > d.lo && u < hi) {
        return Err(Error::OutsideSupport {
            value: u,
            lo: d.lo,
            hi,
        });
    }
    Ok(d.at_offset(u - d.lo, hi - u))
}

/// Root factors are evaluated as scaled distances to the two endpoints,
/// measured from `lo` so that their precision follows the support width
/// rather than the magnitude of `u`.
struct UDensity {
    beta: f64,
    sign: f64,
    lead_at_lo: f64,
    lo: f64,
    len: f64,
    lo_factor: f64,
    hi_factor: f64,
}

impl UDensity {
    fn new(n: u64) -> Result<Self> {
        let k = u_chain_coeffs(n)?;
        let (lo, hi) = u_chain_support(n)?;
        let alpha = k.alpha.to_f64().unwrap_or(f64::INFINITY);
        let beta = k.beta.to_f64().unwrap_or(f64::INFINITY);
        let (near_factor, far_factor) = (alpha + beta, alpha + 2.0 * beta);
        let (lo_factor, hi_factor) = if n.is_multiple_of(2) {
            (far_factor, near_factor)
        } else {
            (near_factor, far_factor)
        };
        let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
        let lead_at_lo =
            rational_to_f64(&(BigRational::from_integer(k.beta.clone()) * &lo - &k.alpha));
        Ok(Self {
            beta,
            sign,
            lead_at_lo: sign * lead_at_lo,
            lo: rational_to_f64(&lo),
            len: rational_to_f64(&(&hi - &lo)),
            lo_factor,
            hi_factor,
        })
    }

    /// Density at the point `below` above `lo` and `above` below `hi`.
    fn at_offset(&self, below: f64, above: f64) -> f64 {
        let lead = self.lead_at_lo + self.sign * self.beta * below;
        1.0 / (PI * lead * (self.lo_factor * below).sqrt() * (self.hi_factor * above).sqrt())
    }

    fn integrate(&self, from: f64, to: f64, tol: f64, budget: usize) -> Result<QuadratureResult> {
        integrate_singular(|x| self.at_offset(x, self.len - x), from, to, tol, budget)
    }
}

/// Total mass of the `Uₙ` density by endpoint-singular quadrature.
pub fn u_chain_mass(n: u64, tol: f64, budget: usize) -> Result<QuadratureResult> {
    let d = UDensity::new(n)?;
    d.integrate(0.0, d.len, tol, budget)
}

/// `Pr{Uₙ ≤ u}` by endpoint-singular quadrature of [`u_chain_density`].
pub fn u_chain_cdf(n: u64, u: f64) -> Result<f64> {
    if u.is_nan() {
        return Err(Error::NonFinite(u));
    }
    let d = UDensity::new(n)?;
    let x = u - d.lo;
    if x <= 0.0 {
        return Ok(0.0);
    }
    if x >= d.len {
        return Ok(1.0);
    }
    // integrate whichever side is shorter; both carry one singular endpoint
    let p = if x <= d.len - x {
        d.integrate(0.0, x, 1e-12, 1 << 14)?.value
    } else {
        1.0 - d.integrate(x, d.len, 1e-12, 1 << 14)?.value
    };
    Ok(p.clamp(0.0, 1.0))
}

/// Density of `t·U₁`: `1/(π√(s(t − s)))` on `(0, t)`.
pub fn scaled_arcsine_density(t: f64, s: f64) -> Result<f64> {
    if !(t.is_finite() && t > 0.0) {
        return Err(Error::InvalidScale(t));
    }
    if !(s > 0.0 && s < t) {
        return Err(Error::OutsideSupport {
            value: s,
            lo: 0.0,
            hi: t,
        });
    }
    Ok(1.0 / (PI * (s * (t - s)).sqrt()))
}

/// Distribution function of `t·U₁`: `(2/π) arcsin √(s/t)`.
pub fn scaled_arcsine_cdf(t: f64, s: f64) -> f64 {
    if s <= 0.0 {
        0.0
    } else if s >= t {
        1.0
    } else {
        2.0 / PI * (s / t).sqrt().asin()
    }
}

/// `m` draws of `Vₙ`, built by pushing standard Cauchy draws through `n`
/// reciprocal steps. Draws hitting `1 + V = 0` are discarded and counted.
pub fn sample_v_chain(n: u64, seed: RngSeed, m: usize) -> Result<PushForward> {
    if n == 0 {
        return Err(Error::InvalidIndex { min: 1, got: 0 });
    }
    let steps = vec![ChainStepCoeffs { c: 1.0, d: 1.0 }; n as usize];
    sample_w_chain(&CauchyParams::STANDARD, &steps, seed, m)
}

/// `m` draws of `W_k` after applying `steps` to `W₀ ~ initial`.
pub fn sample_w_chain(
    initial: &CauchyParams,
    steps: &[ChainStepCoeffs],
    seed: RngSeed,
    m: usize,
) -> Result<PushForward> {
    let seeds = sample(initial, seed, m)?;
    let mut values = Vec::with_capacity(m);
    let mut pole_discards = 0;
    'draw: for mut w in seeds {
        for k in steps {
            let den = k.c + k.d * w;
            if den == 0.0 {
                pole_discards += 1;
                continue 'draw;
            }
            w = 1.0 / den;
        }
        if w.is_finite() {
            values.push(w);
        } else {
            pole_discards += 1;
        }
    }
    Ok(PushForward {
        values,
        pole_discards,
    })
}

/// `m` draws of `Uₙ`, each strictly inside the support. Floating-point
/// draws that round onto an endpoint are redrawn.
pub fn sample_u_chain(n: u64, seed: RngSeed, m: usize) -> Result<Vec<f64>> {
    if m == 0 {
        return Err(Error::TooFewSamples { min: 1, got: 0 });
    }
    let (lo, hi) = u_chain_support_f64(n)?;
    let mut out = Vec::with_capacity(m);
    let mut round = 0u64;
    while out.len() < m {
        let need = m - out.len();
        let cs = sample(&CauchyParams::STANDARD, seed.substream(round), need)?;
        round += 1;
        for c in cs {
            let mut u = 1.0 / (1.0 + c * c);
            for _ in 1..n {
                u = 1.0 / (1.0 + u);
            }
            if u > lo && u < hi {
                out.push(u);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        ratio(n, d)
    }

    #[test]
    fn fibonacci_values() {
        assert_eq!(fibonacci(0), BigUint::zero());
        assert_eq!(fibonacci(1), BigUint::one());
        assert_eq!(fibonacci(10), BigUint::from(55u32));
        // iterate the recurrence independently
        let (mut a, mut b) = (BigUint::zero(), BigUint::one());
        for k in 0..300 {
            assert_eq!(fibonacci(k), a, "k = {k}");
            let next = &a + &b;
            a = std::mem::replace(&mut b, next);
        }
    }

    #[test]
    fn binet_rounding_up_to_70() {
        let sqrt5 = 5f64.sqrt();
        for k in 2..=70u64 {
            let binet = (PHI.powf(k as f64) / sqrt5).round();
            assert_eq!(binet, fibonacci(k).to_f64().unwrap(), "k = {k}");
        }
    }

    #[test]
    fn v_step_examples() {
        let s2 = v_chain_step(&v_chain_start()).unwrap();
        assert_eq!((s2.a.clone(), s2.b.clone(), s2.n), (r(1, 5), r(3, 5), 2));
        let s3 = v_chain_step(&s2).unwrap();
        assert_eq!((s3.a, s3.b, s3.n), (r(1, 13), r(8, 13), 3));
    }

    #[test]
    fn limit_fixed_point() {
        let h = PHI - 1.0;
        assert!((h - 1.0 / (h + 1.0)).abs() < 1e-15);
        // (L, H) = (0, φ − 1) is a fixed point of the scale/location update
        let den = (1.0 + h).powi(2);
        assert!(((h + 1.0) / den - h).abs() < 1e-15);
    }

    #[test]
    fn v_params_examples() {
        assert_eq!(v_chain_params(1).unwrap(), v_chain_start());
        let p3 = v_chain_params(3).unwrap();
        assert_eq!((p3.a, p3.b), (r(1, 13), r(8, 13)));
        assert!(v_chain_params(0).is_err());
        let p100 = v_chain_params(100).unwrap();
        assert!((rational_to_f64(&p100.b) - 0.618034).abs() < 5e-7);
        // exact a_100 = 1/F_201; the three-digit value 5.77e-42 is a_99 = 1/F_199
        let a100 = rational_to_f64(&p100.a);
        assert!(
            (a100 / 2.2027708055609592e-42 - 1.0).abs() < 1e-12,
            "{a100:e}"
        );
        let a99 = rational_to_f64(&v_chain_params(99).unwrap().a);
        assert!((a99 / 5.77e-42 - 1.0).abs() < 1e-3, "{a99:e}");
    }

    #[test]
    fn rational_to_f64_extremes() {
        let tiny = BigRational::new(BigInt::one(), BigInt::from(fibonacci(1500)));
        let v = rational_to_f64(&tiny);
        assert!(v > 0.0 && v < 1e-300, "{v:e}");
        let big = BigRational::new(BigInt::from(fibonacci(1500)), BigInt::from(fibonacci(1499)));
        assert!((rational_to_f64(&big) - PHI).abs() < 1e-15);
        assert_eq!(rational_to_f64(&r(-3, 4)), -0.75);
        assert_eq!(format_rational(&r(4, 2)), "2/1");
        assert_eq!(format_rational(&r(-8, 13)), "-8/13");
    }

    #[test]
    fn w_step_examples() {
        let one = RationalStepCoeffs::from_integers(1, 1);
        assert_eq!(
            w_chain_step(&v_chain_start(), &one).unwrap(),
            v_chain_step(&v_chain_start()).unwrap()
        );
        let w0 = RationalPair::new(r(1, 1), r(0, 1), 0).unwrap();
        let w1 = w_chain_step(&w0, &one).unwrap();
        assert_eq!((w1.a, w1.b, w1.n), (r(1, 2), r(1, 2), 1));
        let w1 = w_chain_step(&w0, &RationalStepCoeffs::from_integers(2, 1)).unwrap();
        assert_eq!((w1.a, w1.b), (r(1, 5), r(2, 5)));
        let f =
            w_chain_step_f64(&CauchyParams::STANDARD, &ChainStepCoeffs { c: 2.0, d: 1.0 }).unwrap();
        assert!((f.scale() - 0.2).abs() < 1e-16 && (f.location() - 0.4).abs() < 1e-16);
        // a zero step collapses the law
        let zero = RationalStepCoeffs::from_integers(0, 0);
        assert!(w_chain_step(&w0, &zero).is_err());
    }

    #[test]
    fn u_coeffs_examples() {
        let pairs: Vec<(i64, i64)> = (1..=5)
            .map(|n| {
                let k = u_chain_coeffs(n).unwrap();
                (k.alpha.to_i64().unwrap(), k.beta.to_i64().unwrap())
            })
            .collect();
        assert_eq!(pairs, vec![(1, 0), (0, 1), (1, 1), (1, 2), (2, 3)]);
        assert!(u_chain_coeffs(0).is_err());
        let k = u_chain_coeffs(60).unwrap();
        let ratio = k.alpha.to_f64().unwrap() / k.beta.to_f64().unwrap();
        assert!((ratio - (PHI - 1.0)).abs() < 1e-15);
    }

    #[test]
    fn u_support_examples() {
        assert_eq!(u_chain_support(1).unwrap(), (r(0, 1), r(1, 1)));
        assert_eq!(u_chain_support(2).unwrap(), (r(1, 2), r(1, 1)));
        assert_eq!(u_chain_support(3).unwrap(), (r(1, 2), r(2, 3)));
        assert_eq!(u_chain_support(4).unwrap(), (r(3, 5), r(2, 3)));
        for n in 1..=40 {
            let (lo, hi) = u_chain_support(n).unwrap();
            assert!(lo < hi, "n = {n}");
        }
    }

    #[test]
    fn u_density_examples() {
        assert!((u_chain_density(1, 0.5).unwrap() - 2.0 / PI).abs() < 1e-15);
        let u = 0.75;
        let expected = 1.0 / (PI * u * ((1.0 - u) * (2.0 * u - 1.0)).sqrt());
        assert!((u_chain_density(2, u).unwrap() - expected).abs() < 1e-14);
        let u = 0.63;
        let expected = 1.0 / (PI * (2.0 * u - 1.0) * ((2.0 - 3.0 * u) * (5.0 * u - 3.0)).sqrt());
        let got = u_chain_density(4, u).unwrap();
        assert!(
            (got - expected).abs() <= 1e-12 * expected,
            "{got} vs {expected}"
        );
        for bad in [0.6, 2.0 / 3.0, 0.5, 0.7] {
            assert!(u_chain_density(4, bad).is_err());
        }
        assert!(u_chain_density(1, 0.0).is_err());
    }

    #[test]
    fn u_cdf_matches_arcsine() {
        for u in [0.01, 0.2, 0.5, 0.77, 0.999] {
            let got = u_chain_cdf(1, u).unwrap();
            assert!((got - scaled_arcsine_cdf(1.0, u)).abs() < 1e-10, "u = {u}");
        }
        assert_eq!(u_chain_cdf(4, 0.1).unwrap(), 0.0);
        assert_eq!(u_chain_cdf(4, 0.9).unwrap(), 1.0);
    }

    #[test]
    fn scaled_arcsine() {
        assert!((scaled_arcsine_density(2.0, 1.0).unwrap() - 1.0 / PI).abs() < 1e-15);
        assert!(scaled_arcsine_density(2.0, 2.0).is_err());
        assert!(scaled_arcsine_density(0.0, 0.5).is_err());
        assert!((scaled_arcsine_cdf(2.0, 1.0) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn samplers_validate() {
        let s = RngSeed::new(1, 1);
        assert!(sample_v_chain(0, s, 10).is_err());
        assert!(sample_u_chain(0, s, 10).is_err());
        assert!(sample_u_chain(3, s, 0).is_err());
        let us = sample_u_chain(6, s, 5_000).unwrap();
        let (lo, hi) = u_chain_support_f64(6).unwrap();
        assert_eq!(us.len(), 5_000);
        assert!(us.iter().all(|&u| u > lo && u < hi));
    }
}
