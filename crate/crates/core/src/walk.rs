//! Angular random walks in the Euclidean plane and right-triangle geometry
//! in the Poincaré half-plane.

use std::f64::consts::FRAC_PI_2;

use crate::cauchy::{sample, CauchyParams};
use crate::error::{Error, Result};
use crate::rng::RngSeed;

/// One Euclidean step: a deterministic leg of length `d` followed by an
/// orthogonal `C(a, b)` leg, so `tan Θ ~ C(a/d, b/d)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EuclideanStepSpec {
    pub d: f64,
    pub a: f64,
    pub b: f64,
}

impl EuclideanStepSpec {
    pub fn new(d: f64, a: f64, b: f64) -> Result<Self> {
        if !(d.is_finite() && d > 0.0) {
            return Err(Error::InvalidScale(d));
        }
        if !(a.is_finite() && a > 0.0) {
            return Err(Error::InvalidScale(a));
        }
        if !b.is_finite() {
            return Err(Error::InvalidLocation(b));
        }
        Ok(Self { d, a, b })
    }

    pub const fn standard() -> Self {
        Self {
            d: 1.0,
            a: 1.0,
            b: 0.0,
        }
    }

    /// Law of `tan Θ` for this step.
    pub fn angle_tangent_law(&self) -> Result<CauchyParams> {
        CauchyParams::new(self.a / self.d, self.b / self.d)
    }
}

/// Hyperbolic leg lengths of a right triangle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HyperbolicStep {
    pub eta: f64,
    pub eta_hat: f64,
}

impl HyperbolicStep {
    pub fn new(eta: f64, eta_hat: f64) -> Result<Self> {
        for v in [eta, eta_hat] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidScale(v));
            }
        }
        Ok(Self { eta, eta_hat })
    }

    pub fn isosceles(eta: f64) -> Result<Self> {
        Self::new(eta, eta)
    }
}

/// Angles `Θⱼ`, partial sums `Sⱼ` (unwrapped) and `tan Sⱼ`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct WalkPath {
    pub angles: Vec<f64>,
    pub partial_sums: Vec<f64>,
    pub tangents: Vec<f64>,
}

impl WalkPath {
    fn from_angles(angles: Vec<f64>) -> Self {
        let partial_sums: Vec<f64> = angles
            .iter()
            .scan(0.0, |s, &t| {
                *s += t;
                Some(*s)
            })
            .collect();
        let tangents = partial_sums.iter().map(|s| s.tan()).collect();
        Self {
            angles,
            partial_sums,
            tangents,
        }
    }

    pub fn final_tangent(&self) -> Option<f64> {
        self.tangents.last().copied()
    }
}

/// Simulates `Θⱼ = arctan Cⱼ` with `Cⱼ ~ C(aⱼ/dⱼ, bⱼ/dⱼ)`. Step `j` draws
/// from sub-stream `j` of `seed`.
pub fn euclidean_walk(steps: &[EuclideanStepSpec], seed: RngSeed) -> Result<WalkPath> {
    if steps.is_empty() {
        return Err(Error::Empty("steps"));
    }
    let angles = steps
        .iter()
        .enumerate()
        .map(|(j, s)| Ok(sample(&s.angle_tangent_law()?, seed.substream(j as u64), 1)?[0].atan()))
        .collect::<Result<Vec<f64>>>()?;
    Ok(WalkPath::from_angles(angles))
}

/// Angles `(Θ, Θ̂)` of the right triangle with legs `(η, η̂)`:
/// `tan Θ = tanh η̂ / sinh η` and `tan Θ̂ = tanh η / sinh η̂`.
pub fn hyperbolic_angle(h: &HyperbolicStep) -> (f64, f64) {
    let theta = (h.eta_hat.tanh() / h.eta.sinh()).atan();
    let theta_hat = (h.eta.tanh() / h.eta_hat.sinh()).atan();
    (theta, theta_hat)
}

/// `Θ` from its sine and cosine:
/// `sin Θ = sinh η̂ / √(cosh²η cosh²η̂ − 1)`,
/// `cos Θ = sinh η cosh η̂ / √(cosh²η cosh²η̂ − 1)`.
pub fn hyperbolic_angle_sin_cos(h: &HyperbolicStep) -> (f64, f64) {
    let (ce, ch) = (h.eta.cosh(), h.eta_hat.cosh());
    let r = (ce * ce * ch * ch - 1.0).sqrt();
    (h.eta_hat.sinh() / r, h.eta.sinh() * ch / r)
}

/// Area (angular defect) of the triangle in closed form:
/// `arccot(coth η / sinh η̂ + coth η̂ / sinh η)`.
pub fn hyperbolic_triangle_area(h: &HyperbolicStep) -> f64 {
    let x = 1.0 / (h.eta.tanh() * h.eta_hat.sinh()) + 1.0 / (h.eta_hat.tanh() * h.eta.sinh());
    (1.0 / x).atan()
}

/// `π/2 − Θ − Θ̂`.
pub fn hyperbolic_angle_defect(h: &HyperbolicStep) -> f64 {
    let (t, th) = hyperbolic_angle(h);
    FRAC_PI_2 - t - th
}

/// Angular walk with `Θⱼ = arctan Cⱼ`, `Cⱼ` standard Cauchy, drawn directly
/// rather than through leg lengths (no joint law of `(η, η̂)` makes
/// `tanh η̂ / sinh η` standard Cauchy). Step `j` uses sub-stream `j`.
pub fn hyperbolic_walk(n: usize, angle_seed: RngSeed) -> Result<WalkPath> {
    if n == 0 {
        return Err(Error::TooFewSamples { min: 1, got: 0 });
    }
    euclidean_walk(&vec![EuclideanStepSpec::standard(); n], angle_seed)
}

/// Final `tan Sₙ` of `m` independent walks (walk `i` on sub-stream `i`).
pub fn walk_final_tangents<F>(m: usize, seed: RngSeed, walk: F) -> Result<Vec<f64>>
where
    F: Fn(RngSeed) -> Result<WalkPath>,
{
    if m == 0 {
        return Err(Error::TooFewSamples { min: 1, got: 0 });
    }
    (0..m as u64)
        .map(|i| {
            walk(seed.substream(i))?
                .final_tangent()
                .ok_or(Error::Empty("walk"))
        })
        .collect()
}
