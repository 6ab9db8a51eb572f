//! Cauchy laws: closed-form density, distribution function, quantile and
//! characteristic function, plus two independent samplers.

use std::f64::consts::{FRAC_1_PI, FRAC_PI_2, PI};

use num_complex::Complex64;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::rng::{open01, RngSeed};

/// Scale and location of a Cauchy law `C(scale, location)` with density
/// `scale / (π[(x − location)² + scale²])`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CauchyParams {
    scale: f64,
    location: f64,
}

impl CauchyParams {
    /// The standard law `C(1, 0)`.
    pub const STANDARD: CauchyParams = CauchyParams {
        scale: 1.0,
        location: 0.0,
    };

    pub fn new(scale: f64, location: f64) -> Result<Self> {
        if !(scale.is_finite() && scale > 0.0) {
            return Err(Error::InvalidScale(scale));
        }
        if !location.is_finite() {
            return Err(Error::InvalidLocation(location));
        }
        Ok(Self { scale, location })
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn location(&self) -> f64 {
        self.location
    }

    pub fn density(&self, x: f64) -> Result<f64> {
        density(self, x)
    }

    pub fn cdf(&self, x: f64) -> f64 {
        cdf(self, x)
    }

    pub fn quantile(&self, q: f64) -> Result<f64> {
        quantile(self, q)
    }
}

pub fn density(p: &CauchyParams, x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::NonFinite(x));
    }
    let z = x - p.location;
    Ok(p.scale * FRAC_1_PI / (z * z + p.scale * p.scale))
}

/// `1/2 + arctan((x − b)/a)/π`. Infinite arguments map to 0 and 1.
pub fn cdf(p: &CauchyParams, x: f64) -> f64 {
    0.5 + ((x - p.location) / p.scale).atan() * FRAC_1_PI
}

/// Inverse of [`cdf`]: `b + a·tan(π(q − 1/2))`.
pub fn quantile(p: &CauchyParams, q: f64) -> Result<f64> {
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::InvalidProbability(q));
    }
    Ok(p.location + p.scale * tan_half_turn(q))
}

// tan(π(q − 1/2)) with the argument kept one epsilon away from ±π/2.
#[inline]
fn tan_half_turn(q: f64) -> f64 {
    if q == 0.5 {
        return 0.0;
    }
    let limit = FRAC_PI_2 - f64::EPSILON;
    (PI * (q - 0.5)).clamp(-limit, limit).tan()
}

/// `E[e^{itX}] = e^{ibt − a|t|}`.
pub fn char_fn(p: &CauchyParams, t: f64) -> Complex64 {
    Complex64::from_polar((-p.scale * t.abs()).exp(), p.location * t)
}

/// Inverse-CDF sampler.
pub fn sample(p: &CauchyParams, seed: RngSeed, n: usize) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::TooFewSamples { min: 1, got: 0 });
    }
    let mut rng = seed.rng();
    Ok((0..n)
        .map(|_| p.location + p.scale * tan_half_turn(open01(&mut rng)))
        .collect())
}

/// Hitting position on the real axis of a planar Brownian motion started at
/// `(x, y)`, simulated as `x + y·G₁/G₂` with independent standard Gaussians.
/// Its law is `C(y, x)`; this is an independent oracle for [`sample`].
pub fn sample_brownian_hitting(x: f64, y: f64, seed: RngSeed, n: usize) -> Result<Vec<f64>> {
    if !(y.is_finite() && y > 0.0) {
        return Err(Error::InvalidScale(y));
    }
    if !x.is_finite() {
        return Err(Error::InvalidLocation(x));
    }
    if n == 0 {
        return Err(Error::TooFewSamples { min: 1, got: 0 });
    }
    let mut rng = seed.rng();
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let g1: f64 = StandardNormal.sample(&mut rng);
        let g2: f64 = StandardNormal.sample(&mut rng);
        if g2 != 0.0 {
            out.push(x + y * (g1 / g2));
        }
    }
    Ok(out)
}
