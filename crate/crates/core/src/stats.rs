//! Verification harness: Kolmogorov–Smirnov goodness of fit, empirical
//! characteristic functions, endpoint-singular quadrature and sample
//! quantiles.

use std::f64::consts::FRAC_PI_2;
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::cauchy::{char_fn, CauchyParams};
use crate::error::{Error, Result};

/// Largest tolerated fraction of pole discards in a Monte Carlo run.
pub const MAX_POLE_RATE: f64 = 1e-5;

/// Minimum sample size accepted by [`ks_test`].
pub const KS_MIN_SAMPLES: usize = 100;

/// Significance level of a KS test, with its asymptotic critical constant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Alpha {
    P05,
    P01,
}

impl Alpha {
    pub fn critical_constant(self) -> f64 {
        match self {
            Alpha::P05 => 1.36,
            Alpha::P01 => 1.63,
        }
    }

    pub fn level(self) -> f64 {
        match self {
            Alpha::P05 => 0.05,
            Alpha::P01 => 0.01,
        }
    }

    /// `c(α)/√n`.
    pub fn threshold(self, n: usize) -> f64 {
        self.critical_constant() / (n as f64).sqrt()
    }
}

/// Outcome of a goodness-of-fit test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GoFReport {
    pub statistic: f64,
    pub threshold: f64,
    pub n: usize,
    pub passed: bool,
    pub pole_discards: usize,
}

impl GoFReport {
    fn new(statistic: f64, threshold: f64, n: usize, pole_discards: usize) -> Self {
        let mut r = Self {
            statistic,
            threshold,
            n,
            passed: false,
            pole_discards,
        };
        r.passed = r.statistic < r.threshold && r.pole_rate() < MAX_POLE_RATE;
        r
    }

    /// Attaches the number of samples discarded at poles before the test;
    /// exceeding [`MAX_POLE_RATE`] fails the report.
    pub fn with_pole_discards(self, discards: usize) -> Self {
        Self::new(self.statistic, self.threshold, self.n, discards)
    }

    pub fn pole_rate(&self) -> f64 {
        let total = self.n + self.pole_discards;
        if total == 0 {
            0.0
        } else {
            self.pole_discards as f64 / total as f64
        }
    }
}

/// Supremum distance between the empirical CDF of `samples` and `cdf`.
pub fn ks_statistic<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::Empty("samples"));
    }
    if samples.iter().any(|x| x.is_nan()) {
        return Err(Error::NanSample);
    }
    let mut sorted = samples.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in sorted.iter().enumerate() {
        let f = cdf(x);
        let above = (i + 1) as f64 / n - f;
        let below = f - i as f64 / n;
        d = d.max(above).max(below);
    }
    Ok(d)
}

/// One-sample Kolmogorov–Smirnov test with asymptotic critical values.
pub fn ks_test<F: Fn(f64) -> f64>(samples: &[f64], cdf: F, alpha: Alpha) -> Result<GoFReport> {
    if samples.len() < KS_MIN_SAMPLES {
        return Err(Error::TooFewSamples {
            min: KS_MIN_SAMPLES,
            got: samples.len(),
        });
    }
    let d = ks_statistic(samples, cdf)?;
    Ok(GoFReport::new(
        d,
        alpha.threshold(samples.len()),
        samples.len(),
        0,
    ))
}

/// `(1/n) Σ e^{itX_k}`.
pub fn empirical_char_fn(samples: &[f64], t: f64) -> Complex64 {
    let (mut re, mut im) = (0.0, 0.0);
    for &x in samples {
        let (s, c) = (t * x).sin_cos();
        re += c;
        im += s;
    }
    let n = samples.len() as f64;
    Complex64::new(re / n, im / n)
}

/// Largest modulus gap between the empirical and the closed-form
/// characteristic function over `t_grid`.
pub fn ecf_distance(samples: &[f64], params: &CauchyParams, t_grid: &[f64]) -> Result<f64> {
    if t_grid.is_empty() {
        return Err(Error::Empty("t_grid"));
    }
    if samples.is_empty() {
        return Err(Error::Empty("samples"));
    }
    Ok(t_grid
        .iter()
        .map(|&t| (empirical_char_fn(samples, t) - char_fn(params, t)).norm())
        .fold(0.0, f64::max))
}

/// Result of [`integrate_singular`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    pub abs_error_estimate: f64,
    pub evaluations: usize,
    /// False when the budget ran out (or the integrand went non-finite)
    /// before the requested tolerance was met.
    pub converged: bool,
}

const GL_ORDER: usize = 8;

fn gauss_legendre() -> &'static [(f64, f64); GL_ORDER] {
    static RULE: OnceLock<[(f64, f64); GL_ORDER]> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = GL_ORDER;
        let mut rule = [(0.0, 0.0); GL_ORDER];
        for (i, slot) in rule.iter_mut().enumerate() {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let k = k as f64;
                    let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            *slot = (x, 2.0 / ((1.0 - x * x) * dp * dp));
        }
        rule
    })
}

/// Integrates `f` over `(lo, hi)` where `f` may carry inverse-square-root
/// singularities at either endpoint.
///
/// The substitution `u = lo + (hi − lo)·sin²θ` turns the integral into
/// `∫₀^{π/2} f(u(θ))·(hi − lo)·sin 2θ dθ`, whose integrand is smooth for
/// such `f`. The θ-interval is then covered by composite Gauss–Legendre
/// panels, doubled until successive estimates agree to `tol` (relative to
/// `max(1, |I|)`) or `budget` evaluations are spent.
pub fn integrate_singular<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    tol: f64,
    budget: usize,
) -> Result<QuadratureResult> {
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::InvalidInterval { lo, hi });
    }
    let width = hi - lo;
    let (inner_lo, inner_hi) = if lo.next_up() <= hi.next_down() {
        (lo.next_up(), hi.next_down())
    } else {
        (lo, hi)
    };
    let g = |theta: f64| {
        let s = theta.sin();
        let u = (lo + width * s * s).clamp(inner_lo, inner_hi);
        f(u) * width * (2.0 * theta).sin()
    };
    let rule = gauss_legendre();
    let composite = |panels: usize| {
        let h = FRAC_PI_2 / panels as f64;
        let mut sum = 0.0;
        for k in 0..panels {
            let mid = (k as f64 + 0.5) * h;
            for &(x, w) in rule {
                sum += w * g(mid + 0.5 * h * x);
            }
        }
        sum * 0.5 * h
    };

    let mut panels = 1;
    let mut evaluations = GL_ORDER;
    let mut value = composite(panels);
    let mut abs_error_estimate = f64::INFINITY;
    while evaluations + 2 * panels * GL_ORDER <= budget {
        panels *= 2;
        evaluations += panels * GL_ORDER;
        let refined = composite(panels);
        abs_error_estimate = (refined - value).abs();
        value = refined;
        if !value.is_finite() {
            break;
        }
        if abs_error_estimate <= tol * value.abs().max(1.0) {
            return Ok(QuadratureResult {
                value,
                abs_error_estimate,
                evaluations,
                converged: true,
            });
        }
    }
    Ok(QuadratureResult {
        value,
        abs_error_estimate,
        evaluations,
        converged: false,
    })
}

/// Order-statistic quantiles with linear interpolation between adjacent
/// order statistics (position `(n − 1)·p`).
pub fn quantile_table(samples: &[f64], probs: &[f64]) -> Result<Vec<f64>> {
    if samples.is_empty() {
        return Err(Error::Empty("samples"));
    }
    if samples.iter().any(|x| x.is_nan()) {
        return Err(Error::NanSample);
    }
    if let Some(&bad) = probs.iter().find(|&&p| !(p > 0.0 && p < 1.0)) {
        return Err(Error::InvalidProbability(bad));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    let last = sorted.len() - 1;
    Ok(probs
        .iter()
        .map(|&p| {
            let pos = p * last as f64;
            let i = pos.floor() as usize;
            let frac = pos - i as f64;
            if i >= last {
                sorted[last]
            } else {
                sorted[i] + frac * (sorted[i + 1] - sorted[i])
            }
        })
        .collect())
}

/// Median via [`quantile_table`].
pub fn median(samples: &[f64]) -> Result<f64> {
    Ok(quantile_table(samples, &[0.5])?[0])
}
