//! Parameter algebra of Cauchy-preserving transformations of two
//! independent Cauchy variables, and the matching pointwise maps used for
//! Monte Carlo checks.

use crate::cauchy::{sample, CauchyParams};
use crate::error::{Error, Result};
use crate::rng::{open01, RngSeed};

/// Coefficients of `U = (γC₁ + δC₂)/(α − βC₁C₂)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MobiusCoeffs {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
}

impl MobiusCoeffs {
    /// Validates the closure domain: all coefficients finite, `α ≥ 0`,
    /// `β, γ, δ ≥ 0`, `α + β ≠ 0` and `γ + δ > 0`. A negative `γ` or `δ`
    /// reduces to this case through `C ↦ −C`. For `α < 0` the output is not
    /// the closed-form Cauchy law, so it is rejected.
    pub fn new(alpha: f64, beta: f64, gamma: f64, delta: f64) -> Result<Self> {
        let all = [alpha, beta, gamma, delta];
        if all.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidCoefficients("non-finite coefficient".into()));
        }
        if alpha < 0.0 || beta < 0.0 || gamma < 0.0 || delta < 0.0 {
            return Err(Error::InvalidCoefficients(format!(
                "coefficients must be nonnegative, got ({alpha}, {beta}, {gamma}, {delta})"
            )));
        }
        if alpha + beta == 0.0 {
            return Err(Error::InvalidCoefficients("alpha + beta = 0".into()));
        }
        if gamma + delta == 0.0 {
            return Err(Error::InvalidCoefficients(
                "gamma and delta both zero".into(),
            ));
        }
        Ok(Self {
            alpha,
            beta,
            gamma,
            delta,
        })
    }

    /// The tangent-addition coefficients `(1, 1, 1, 1)`.
    pub fn tangent_sum() -> Self {
        Self {
            alpha: 1.0,
            beta: 1.0,
            gamma: 1.0,
            delta: 1.0,
        }
    }
}

/// The four standard-Cauchy-preserving maps of a pair `(C₁, C₂)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TransformKind {
    /// `(C₁ + C₂)/(1 − C₁C₂)`
    U,
    /// `(C₁C₂ + 1)/(C₁ − C₂)`
    Z1,
    /// `(1 − C₁C₂)/(C₁ + C₂)`
    Z2,
    /// `(C₁ + C₂)/(C₁C₂ − 1)`
    Z3,
}

impl TransformKind {
    pub const ALL: [TransformKind; 4] = [Self::U, Self::Z1, Self::Z2, Self::Z3];

    pub fn name(self) -> &'static str {
        match self {
            Self::U => "U",
            Self::Z1 => "Z1",
            Self::Z2 => "Z2",
            Self::Z3 => "Z3",
        }
    }
}

/// Value of a pointwise map, or a floating-point hit on its pole.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MapValue {
    Value(f64),
    Pole,
}

impl MapValue {
    pub fn value(self) -> Option<f64> {
        match self {
            MapValue::Value(v) => Some(v),
            MapValue::Pole => None,
        }
    }
}

#[inline]
fn ratio(num: f64, den: f64) -> MapValue {
    if den == 0.0 {
        MapValue::Pole
    } else {
        let v = num / den;
        if v.is_finite() {
            MapValue::Value(v)
        } else {
            MapValue::Pole
        }
    }
}

/// Law of `U` for standard `C₁, C₂`: `C(|(γ + δ)/(α + β)|, 0)`.
pub fn centered_params(m: &MobiusCoeffs) -> Result<CauchyParams> {
    let m = MobiusCoeffs::new(m.alpha, m.beta, m.gamma, m.delta)?;
    CauchyParams::new(((m.gamma + m.delta) / (m.alpha + m.beta)).abs(), 0.0)
}

/// Law of `U` for `C₁ ~ C(a₁, 0)`, `C₂ ~ C(a₂, 0)`:
/// `C(|(γa₁ + δa₂)/(α + βa₁a₂)|, 0)`.
pub fn scaled_centered_params(m: &MobiusCoeffs, a1: f64, a2: f64) -> Result<CauchyParams> {
    let m = MobiusCoeffs::new(m.alpha, m.beta, m.gamma, m.delta)?;
    for a in [a1, a2] {
        if !(a.is_finite() && a > 0.0) {
            return Err(Error::InvalidScale(a));
        }
    }
    let den = m.alpha + m.beta * a1 * a2;
    if den == 0.0 {
        return Err(Error::ZeroDenominator("alpha + beta*a1*a2"));
    }
    CauchyParams::new(((m.gamma * a1 + m.delta * a2) / den).abs(), 0.0)
}

/// Law of `(C₁ + C₂)/(1 − C₁C₂)` for independent `C₁ ~ p1`, `C₂ ~ p2`.
///
/// With `P = 1 + a₁a₂ − b₁b₂`, `Q = a₁b₂ + a₂b₁` and `D = P² + Q²`:
///
/// * scale `a_U = [(a₁ + a₂)P + (b₁ + b₂)Q] / D`
/// * location `b_U = [(b₁ + b₂)P − (a₁ + a₂)Q] / D`
///
/// Equivalently, writing each law as `z = b + ia`, `z_U = (z₁ + z₂)/(1 − z₁z₂)`.
/// The location is the median of `U`; note it has the opposite sign of
/// `b` when both inputs are `C(1, b)`.
pub fn noncentered_params(p1: &CauchyParams, p2: &CauchyParams) -> Result<CauchyParams> {
    let (a1, b1, a2, b2) = (p1.scale(), p1.location(), p2.scale(), p2.location());
    let p = 1.0 + a1 * a2 - b1 * b2;
    let q = a1 * b2 + a2 * b1;
    let d = p * p + q * q;
    if d == 0.0 || !d.is_finite() {
        return Err(Error::ZeroDenominator(
            "(1 + a1 a2 - b1 b2)^2 + (a1 b2 + a2 b1)^2",
        ));
    }
    let (sa, sb) = (a1 + a2, b1 + b2);
    // Smith-style division by whichever of P, Q is larger; with Q = 0 this
    // reduces exactly to (a1 + a2)/(1 + a1 a2)
    let (scale, location) = if p.abs() >= q.abs() {
        let r = q / p;
        let den = p + q * r;
        ((sa + sb * r) / den, (sb - sa * r) / den)
    } else {
        let r = p / q;
        let den = p * r + q;
        ((sa * r + sb) / den, (sb * r - sa) / den)
    };
    CauchyParams::new(scale.abs(), location)
}

/// Law of `tan(Σ arctan Cⱼ)`, folding [`noncentered_params`] left to right.
pub fn arctan_sum_params(ps: &[CauchyParams]) -> Result<CauchyParams> {
    let (first, rest) = ps.split_first().ok_or(Error::Empty("params"))?;
    rest.iter()
        .try_fold(*first, |acc, p| noncentered_params(&acc, p))
}

pub fn eval_transform(kind: TransformKind, c1: f64, c2: f64) -> MapValue {
    match kind {
        TransformKind::U => ratio(c1 + c2, 1.0 - c1 * c2),
        TransformKind::Z1 => ratio(c1 * c2 + 1.0, c1 - c2),
        TransformKind::Z2 => ratio(1.0 - c1 * c2, c1 + c2),
        TransformKind::Z3 => ratio(c1 + c2, c1 * c2 - 1.0),
    }
}

pub fn eval_general(m: &MobiusCoeffs, c1: f64, c2: f64) -> MapValue {
    ratio(m.gamma * c1 + m.delta * c2, m.alpha - m.beta * c1 * c2)
}

/// Monte Carlo output of a pushed-forward sample, with pole hits removed.
#[derive(Debug, Clone, PartialEq)]
pub struct PushForward {
    pub values: Vec<f64>,
    pub pole_discards: usize,
}

impl PushForward {
    fn collect(it: impl Iterator<Item = MapValue>, n: usize) -> Self {
        let mut values = Vec::with_capacity(n);
        let mut pole_discards = 0;
        for v in it {
            match v {
                MapValue::Value(x) => values.push(x),
                MapValue::Pole => pole_discards += 1,
            }
        }
        Self {
            values,
            pole_discards,
        }
    }
}

/// Draws `n` pairs with `C₁ ~ p1` (stream 0 of `seed`) and `C₂ ~ p2`
/// (stream 1) and applies `f` to each pair.
pub fn push_pairs<F>(
    p1: &CauchyParams,
    p2: &CauchyParams,
    seed: RngSeed,
    n: usize,
    f: F,
) -> Result<PushForward>
where
    F: Fn(f64, f64) -> MapValue,
{
    let xs = sample(p1, seed.substream(0), n)?;
    let ys = sample(p2, seed.substream(1), n)?;
    Ok(PushForward::collect(
        xs.iter().zip(&ys).map(|(&x, &y)| f(x, y)),
        n,
    ))
}

/// `n` draws of `kind` applied to standard Cauchy pairs.
pub fn sample_transform(kind: TransformKind, seed: RngSeed, n: usize) -> Result<PushForward> {
    let s = CauchyParams::STANDARD;
    push_pairs(&s, &s, seed, n, |x, y| eval_transform(kind, x, y))
}

/// `n` draws of the general map applied to standard Cauchy pairs.
pub fn sample_general(m: &MobiusCoeffs, seed: RngSeed, n: usize) -> Result<PushForward> {
    let s = CauchyParams::STANDARD;
    push_pairs(&s, &s, seed, n, |x, y| eval_general(m, x, y))
}

/// `tan(Θ₁ + Θ₂)` for `(Θ₁, Θ₂)` uniform on `(−π/2, π/2)²`.
pub fn uniform_angle_tangent(seed: RngSeed, m: usize) -> Result<Vec<f64>> {
    if m == 0 {
        return Err(Error::TooFewSamples { min: 1, got: 0 });
    }
    let mut rng = seed.rng();
    let half = std::f64::consts::FRAC_PI_2;
    Ok((0..m)
        .map(|_| {
            let t1 = (2.0 * open01(&mut rng) - 1.0) * half;
            let t2 = (2.0 * open01(&mut rng) - 1.0) * half;
            (t1 + t2).tan()
        })
        .collect())
}
