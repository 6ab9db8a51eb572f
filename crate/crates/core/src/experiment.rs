//! Named experiments: configuration, dispatch and report assembly.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;

use crate::cauchy::{cdf, density, CauchyParams};
use crate::chain::{
    rational_to_f64, sample_u_chain, sample_v_chain, sample_w_chain, scaled_arcsine_cdf,
    u_chain_cdf, u_chain_coeffs, u_chain_density, u_chain_mass, u_chain_support,
    u_chain_support_f64, v_chain_params, v_chain_start, v_chain_step, w_chain_step,
    w_chain_step_f64, ChainStepCoeffs, RationalPair, RationalStepCoeffs, PHI,
};
use crate::error::{Error, Result};
use crate::report::{ExperimentReport, Verdict};
use crate::rng::RngSeed;
use crate::stats::{ecf_distance, ks_test, median, quantile_table, Alpha};
use crate::transform::{
    arctan_sum_params, centered_params, eval_transform, noncentered_params, push_pairs,
    sample_general, sample_transform, scaled_centered_params, MobiusCoeffs, TransformKind,
};
use crate::verify;
use crate::walk::{
    euclidean_walk, hyperbolic_angle, hyperbolic_angle_defect, hyperbolic_triangle_area,
    hyperbolic_walk, walk_final_tangents, EuclideanStepSpec, HyperbolicStep,
};

pub const DEFAULT_SEED: u64 = 0x5eed;
pub const DEFAULT_SAMPLE_COUNT: usize = 100_000;
pub const DEFAULT_DEPTH: u64 = 10;
pub const DEFAULT_GOLDEN_DEPTH: u64 = 40;
pub const DEFAULT_POINTS: usize = 256;
pub const MIN_SAMPLE_COUNT: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransformMode {
    Centered,
    Noncentered,
    Scaled,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChainKind {
    V,
    W,
    U,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WalkKind {
    Euclid,
    Hyperbolic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    TransformVerify(TransformMode),
    Chain(ChainKind),
    Walk(WalkKind),
    Golden,
    VerifyAll,
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Experiment::TransformVerify(TransformMode::Centered) => "transform-verify centered",
            Experiment::TransformVerify(TransformMode::Noncentered) => {
                "transform-verify noncentered"
            }
            Experiment::TransformVerify(TransformMode::Scaled) => "transform-verify scaled",
            Experiment::Chain(ChainKind::V) => "chain v",
            Experiment::Chain(ChainKind::W) => "chain w",
            Experiment::Chain(ChainKind::U) => "chain u",
            Experiment::Walk(WalkKind::Euclid) => "walk euclid",
            Experiment::Walk(WalkKind::Hyperbolic) => "walk hyperbolic",
            Experiment::Golden => "golden",
            Experiment::VerifyAll => "verify-all",
        };
        f.write_str(s)
    }
}

impl FromStr for Experiment {
    type Err = Error;

    /// Accepts `"chain v"`, `"chain-v"` or `"chain.v"` style names.
    fn from_str(s: &str) -> Result<Self> {
        let norm: String = s
            .trim()
            .chars()
            .map(|c| {
                if c == ' ' || c == '.' || c == '_' {
                    '-'
                } else {
                    c.to_ascii_lowercase()
                }
            })
            .collect();
        Ok(match norm.as_str() {
            "transform-verify-centered" | "transform-verify" => {
                Experiment::TransformVerify(TransformMode::Centered)
            }
            "transform-verify-noncentered" => {
                Experiment::TransformVerify(TransformMode::Noncentered)
            }
            "transform-verify-scaled" => Experiment::TransformVerify(TransformMode::Scaled),
            "chain-v" => Experiment::Chain(ChainKind::V),
            "chain-w" => Experiment::Chain(ChainKind::W),
            "chain-u" => Experiment::Chain(ChainKind::U),
            "walk-euclid" => Experiment::Walk(WalkKind::Euclid),
            "walk-hyperbolic" => Experiment::Walk(WalkKind::Hyperbolic),
            "golden" => Experiment::Golden,
            "verify-all" => Experiment::VerifyAll,
            _ => return Err(Error::Config(format!("unknown experiment '{s}'"))),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(Error::Config(format!("unknown output format '{other}'"))),
        }
    }
}

/// Fully resolved configuration of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub seed: RngSeed,
    pub sample_count: usize,
    pub chain_depth: u64,
    pub output_format: OutputFormat,
    /// `None` writes to standard output.
    pub output_path: Option<PathBuf>,
    /// Threshold overrides keyed by verdict name.
    pub tolerances: BTreeMap<String, f64>,
    pub emit_density: bool,
    pub emit_params: bool,
    pub points: usize,
    /// Euclidean walk steps.
    pub steps: Vec<EuclideanStepSpec>,
    /// Constant `(c, d)` of every W-chain step.
    pub w_step: (BigRational, BigRational),
    /// Law `(a₀, b₀)` of the W-chain seed.
    pub w_initial: (BigRational, BigRational),
}

impl ExperimentConfig {
    pub fn new(experiment: Experiment) -> Self {
        Self {
            experiment,
            seed: RngSeed::new(DEFAULT_SEED, 0),
            sample_count: DEFAULT_SAMPLE_COUNT,
            chain_depth: match experiment {
                Experiment::Golden => DEFAULT_GOLDEN_DEPTH,
                _ => DEFAULT_DEPTH,
            },
            output_format: OutputFormat::Csv,
            output_path: None,
            tolerances: BTreeMap::new(),
            emit_density: false,
            emit_params: false,
            points: DEFAULT_POINTS,
            steps: vec![EuclideanStepSpec::standard(); 2],
            w_step: (BigRational::from_integer(2.into()), BigRational::one()),
            w_initial: (BigRational::one(), BigRational::zero()),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.sample_count < MIN_SAMPLE_COUNT {
            return Err(Error::Config(format!(
                "sample_count must be at least {MIN_SAMPLE_COUNT}, got {}",
                self.sample_count
            )));
        }
        if self.chain_depth < 1 {
            return Err(Error::Config("chain_depth must be at least 1".into()));
        }
        if self.points < 2 {
            return Err(Error::Config("points must be at least 2".into()));
        }
        if self.steps.is_empty() {
            return Err(Error::Config("walk needs at least one step".into()));
        }
        if self.w_initial.0 <= BigRational::zero() {
            return Err(Error::Config("a0 must be positive".into()));
        }
        Ok(())
    }

    fn parameters(&self) -> BTreeMap<String, String> {
        let mut p = BTreeMap::new();
        p.insert("sample_count".into(), self.sample_count.to_string());
        p.insert("chain_depth".into(), self.chain_depth.to_string());
        match self.experiment {
            Experiment::Chain(ChainKind::W) => {
                p.insert("c".into(), crate::chain::format_rational(&self.w_step.0));
                p.insert("d".into(), crate::chain::format_rational(&self.w_step.1));
                p.insert(
                    "a0".into(),
                    crate::chain::format_rational(&self.w_initial.0),
                );
                p.insert(
                    "b0".into(),
                    crate::chain::format_rational(&self.w_initial.1),
                );
            }
            Experiment::Walk(WalkKind::Euclid) => {
                p.insert("steps".into(), format_steps(&self.steps));
            }
            _ => {}
        }
        if self.emit_density {
            p.insert("points".into(), self.points.to_string());
        }
        for (k, v) in &self.tolerances {
            p.insert(format!("tolerance.{k}"), crate::report::format_float(*v));
        }
        p
    }
}

/// Parses `"d,a,b;d,a,b;…"`.
pub fn parse_steps(spec: &str) -> Result<Vec<EuclideanStepSpec>> {
    spec.split(';')
        .filter(|s| !s.trim().is_empty())
        .map(|s| {
            let parts: Vec<f64> = s
                .split(',')
                .map(|t| {
                    t.trim()
                        .parse::<f64>()
                        .map_err(|_| Error::Config(format!("bad step component '{t}'")))
                })
                .collect::<Result<_>>()?;
            match parts[..] {
                [d, a, b] => EuclideanStepSpec::new(d, a, b),
                _ => Err(Error::Config(format!("step '{s}' must be d,a,b"))),
            }
        })
        .collect()
}

pub fn format_steps(steps: &[EuclideanStepSpec]) -> String {
    steps
        .iter()
        .map(|s| format!("{},{},{}", s.d, s.a, s.b))
        .collect::<Vec<_>>()
        .join(";")
}

/// Parses an exact rational from `p/q`, an integer, or a finite decimal.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Config(format!("not a rational number: '{s}'"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (int, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if frac.chars().any(|c| !c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits: BigInt = format!("{int}{frac}").parse().map_err(|_| bad())?;
    let scale = exp - frac.len() as i32;
    let ten = BigInt::from(10);
    Ok(if scale >= 0 {
        BigRational::from_integer(digits * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(digits, num_traits::pow(ten, (-scale) as usize))
    })
}

/// Runs the configured experiment. Verification failures are reported in
/// the verdicts, not as errors.
pub fn run(config: &ExperimentConfig) -> Result<ExperimentReport> {
    config.validate()?;
    let mut report = match config.experiment {
        Experiment::TransformVerify(mode) => transform_verify(config, mode)?,
        Experiment::Chain(ChainKind::V) => chain_v(config)?,
        Experiment::Chain(ChainKind::W) => chain_w(config)?,
        Experiment::Chain(ChainKind::U) => chain_u(config)?,
        Experiment::Walk(WalkKind::Euclid) => walk_euclid(config)?,
        Experiment::Walk(WalkKind::Hyperbolic) => walk_hyperbolic(config)?,
        Experiment::Golden => golden(config)?,
        Experiment::VerifyAll => verify::verify_all(config.seed)?,
    };
    report.experiment = config.experiment.to_string();
    report.parameters = config.parameters();
    report.apply_overrides(&config.tolerances);
    Ok(report)
}

fn ks(name: &str, samples: &[f64], law: &CauchyParams, poles: usize) -> Result<Verdict> {
    let r = ks_test(samples, |x| cdf(law, x), Alpha::P01)?.with_pole_discards(poles);
    Ok(Verdict::from_gof(name, &r))
}

fn quartile_rows(
    report: &mut ExperimentReport,
    label: &str,
    x: u64,
    samples: &[f64],
) -> Result<()> {
    let q = quantile_table(samples, &[0.25, 0.5, 0.75])?;
    for (name, v) in ["q25", "q50", "q75"].iter().zip(q) {
        report.row(format!("{label}.{name}"), x, v);
    }
    Ok(())
}

fn transform_verify(cfg: &ExperimentConfig, mode: TransformMode) -> Result<ExperimentReport> {
    let mut r = ExperimentReport::new("", cfg.seed);
    let n = cfg.sample_count;
    match mode {
        TransformMode::Centered => {
            for (i, kind) in TransformKind::ALL.into_iter().enumerate() {
                let pf = sample_transform(kind, cfg.seed.substream(i as u64), n)?;
                quartile_rows(&mut r, kind.name(), 0, &pf.values)?;
                r.verdict(ks(
                    &format!("ks_{}", kind.name()),
                    &pf.values,
                    &CauchyParams::STANDARD,
                    pf.pole_discards,
                )?);
            }
            for (i, &(a, b, g, d)) in [
                (1.0, 1.0, 1.0, 1.0),
                (2.0, 0.0, 3.0, 1.0),
                (1.0, 2.0, 2.0, 5.0),
            ]
            .iter()
            .enumerate()
            {
                let m = MobiusCoeffs::new(a, b, g, d)?;
                let law = centered_params(&m)?;
                let label = format!("general_({a},{b},{g},{d})");
                r.row(format!("{label}.scale"), 0u64, law.scale());
                let pf = sample_general(&m, cfg.seed.substream(10 + i as u64), n)?;
                r.verdict(ks(
                    &format!("ks_{label}"),
                    &pf.values,
                    &law,
                    pf.pole_discards,
                )?);
            }
        }
        TransformMode::Noncentered => {
            let mut rng = cfg.seed.substream(1000).rng();
            for i in 0..20u64 {
                let p1 =
                    CauchyParams::new(rng.random_range(0.2..=5.0), rng.random_range(-3.0..=3.0))?;
                let p2 =
                    CauchyParams::new(rng.random_range(0.2..=5.0), rng.random_range(-3.0..=3.0))?;
                let law = noncentered_params(&p1, &p2)?;
                for (name, v) in [
                    ("a1", p1.scale()),
                    ("b1", p1.location()),
                    ("a2", p2.scale()),
                    ("b2", p2.location()),
                    ("a_U", law.scale()),
                    ("b_U", law.location()),
                ] {
                    r.row(name, i, v);
                }
                let pf = push_pairs(&p1, &p2, cfg.seed.substream(i), n, |x, y| {
                    eval_transform(TransformKind::U, x, y)
                })?;
                r.verdict(ks(
                    &format!("ks_pair{i:02}"),
                    &pf.values,
                    &law,
                    pf.pole_discards,
                )?);
            }
        }
        TransformMode::Scaled => {
            let tangent = MobiusCoeffs::tangent_sum();
            for (i, &(a1, a2)) in [(2.0, 3.0), (0.5, 0.5), (1.0, 4.0), (0.2, 5.0)]
                .iter()
                .enumerate()
            {
                let law = scaled_centered_params(&tangent, a1, a2)?;
                let label = format!("scaled_({a1},{a2})");
                r.row(format!("{label}.scale"), i as u64, law.scale());
                let pf = push_pairs(
                    &CauchyParams::new(a1, 0.0)?,
                    &CauchyParams::new(a2, 0.0)?,
                    cfg.seed.substream(i as u64),
                    n,
                    |x, y| eval_transform(TransformKind::U, x, y),
                )?;
                r.verdict(ks(
                    &format!("ks_{label}"),
                    &pf.values,
                    &law,
                    pf.pole_discards,
                )?);
                let grid: Vec<f64> = (-5..=5).map(f64::from).collect();
                let d = ecf_distance(&pf.values, &law, &grid)?;
                r.verdict(Verdict::check(
                    format!("ecf_{label}"),
                    d,
                    3.0 / (pf.values.len() as f64).sqrt(),
                    pf.values.len(),
                ));
            }
        }
    }
    Ok(r)
}

const V_KS_DEPTHS: [u64; 5] = [1, 2, 3, 5, 10];

fn chain_v(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let mut r = ExperimentReport::new("", cfg.seed);
    let mut state = v_chain_start();
    let mut mismatches = 0;
    for n in 1..=cfg.chain_depth {
        let closed = v_chain_params(n)?;
        mismatches += usize::from(closed != state);
        r.row("a_n", n, closed.a.clone());
        r.row("b_n", n, closed.b.clone());
        r.row("a_n.f64", n, rational_to_f64(&closed.a));
        r.row("b_n.f64", n, rational_to_f64(&closed.b));
        state = v_chain_step(&state)?;
    }
    r.verdict(Verdict::holds(
        "closed_form_eq_recursion",
        mismatches,
        cfg.chain_depth as usize,
    ));
    if cfg.emit_density {
        for n in 1..=cfg.chain_depth.min(4) {
            let law = v_chain_params(n)?.to_params()?;
            for k in 0..cfg.points {
                let x = -1.0 + 3.0 * k as f64 / (cfg.points - 1) as f64;
                r.row(format!("density.V{n}"), x, density(&law, x)?);
            }
        }
    }
    for (i, &n) in V_KS_DEPTHS
        .iter()
        .filter(|&&n| n <= cfg.chain_depth)
        .enumerate()
    {
        let law = v_chain_params(n)?.to_params()?;
        let pf = sample_v_chain(n, cfg.seed.substream(i as u64), cfg.sample_count)?;
        r.verdict(ks(&format!("ks_V{n}"), &pf.values, &law, pf.pole_discards)?);
    }
    Ok(r)
}

fn chain_w(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let mut r = ExperimentReport::new("", cfg.seed);
    let step = RationalStepCoeffs {
        c: cfg.w_step.0.clone(),
        d: cfg.w_step.1.clone(),
    };
    let fstep = ChainStepCoeffs {
        c: rational_to_f64(&step.c),
        d: rational_to_f64(&step.d),
    };
    let mut exact = RationalPair::new(cfg.w_initial.0.clone(), cfg.w_initial.1.clone(), 0)?;
    let initial = exact.to_params()?;
    let mut float = initial;
    let mut worst = 0.0f64;
    for n in 1..=cfg.chain_depth {
        exact = w_chain_step(&exact, &step)?;
        float = w_chain_step_f64(&float, &fstep)?;
        let (a, b) = (rational_to_f64(&exact.a), rational_to_f64(&exact.b));
        worst = worst
            .max((float.scale() - a).abs() / a)
            .max((float.location() - b).abs() / b.abs().max(a));
        if cfg.emit_params {
            r.row("a_n", n, exact.a.clone());
            r.row("b_n", n, exact.b.clone());
        }
        r.row("a_n.f64", n, a);
        r.row("b_n.f64", n, b);
    }
    r.verdict(Verdict::check(
        "exact_vs_float_rel_err",
        worst,
        1e-9,
        cfg.chain_depth as usize,
    ));
    let n = cfg.chain_depth.min(5);
    let mut check = RationalPair::new(cfg.w_initial.0.clone(), cfg.w_initial.1.clone(), 0)?;
    for _ in 0..n {
        check = w_chain_step(&check, &step)?;
    }
    let pf = sample_w_chain(
        &initial,
        &vec![fstep; n as usize],
        cfg.seed,
        cfg.sample_count,
    )?;
    r.verdict(ks(
        &format!("ks_W{n}"),
        &pf.values,
        &check.to_params()?,
        pf.pole_discards,
    )?);
    Ok(r)
}

fn chain_u(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let mut r = ExperimentReport::new("", cfg.seed);
    let mut worst_mass = 0.0f64;
    let mut outside = 0;
    for n in 1..=cfg.chain_depth {
        let k = u_chain_coeffs(n)?;
        let (lo, hi) = u_chain_support(n)?;
        if cfg.emit_params || !cfg.emit_density {
            r.row(
                "alpha_n",
                n,
                crate::report::Value::Text(k.alpha.to_string()),
            );
            r.row("beta_n", n, crate::report::Value::Text(k.beta.to_string()));
            r.row("support.lo", n, lo.clone());
            r.row("support.hi", n, hi.clone());
        }
        let (flo, fhi) = (rational_to_f64(&lo), rational_to_f64(&hi));
        let q = u_chain_mass(n, 1e-10, 1 << 16)?;
        worst_mass = worst_mass.max((q.value - 1.0).abs());
        if cfg.emit_density {
            for j in 0..cfg.points {
                let u = flo + (fhi - flo) * (j as f64 + 0.5) / cfg.points as f64;
                r.row(format!("density.U{n}"), u, u_chain_density(n, u)?);
            }
        }
        if n <= 4 {
            let samples = sample_u_chain(n, cfg.seed.substream(n), cfg.sample_count)?;
            outside += samples.iter().filter(|&&u| !(u > flo && u < fhi)).count();
            let rep = if n == 1 {
                ks_test(&samples, |u| scaled_arcsine_cdf(1.0, u), Alpha::P01)?
            } else {
                ks_test(
                    &samples,
                    |u| u_chain_cdf(n, u).unwrap_or(f64::NAN),
                    Alpha::P01,
                )?
            };
            r.verdict(Verdict::from_gof(format!("ks_U{n}"), &rep));
        }
    }
    r.verdict(Verdict::check(
        "mass_max_abs_err",
        worst_mass,
        1e-6,
        cfg.chain_depth as usize,
    ));
    r.verdict(Verdict::holds(
        "samples_inside_support",
        outside,
        cfg.sample_count,
    ));
    // t·U₁ against the scaled arcsine law
    let t = 2.0;
    let scaled: Vec<f64> = sample_u_chain(1, cfg.seed.substream(1000), cfg.sample_count)?
        .into_iter()
        .map(|u| t * u)
        .collect();
    let rep = ks_test(&scaled, |s| scaled_arcsine_cdf(t, s), Alpha::P01)?;
    r.verdict(Verdict::from_gof("ks_scaled_arcsine_t2", &rep));
    Ok(r)
}

fn walk_euclid(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let mut r = ExperimentReport::new("", cfg.seed);
    let laws = cfg
        .steps
        .iter()
        .map(EuclideanStepSpec::angle_tangent_law)
        .collect::<Result<Vec<_>>>()?;
    let law = arctan_sum_params(&laws)?;
    r.row("tan_S.scale", cfg.steps.len(), law.scale());
    r.row("tan_S.location", cfg.steps.len(), law.location());
    let tans = walk_final_tangents(cfg.sample_count, cfg.seed, |s| {
        euclidean_walk(&cfg.steps, s)
    })?;
    quartile_rows(&mut r, "tan_S", cfg.steps.len() as u64, &tans)?;
    r.verdict(ks("ks_tan_S", &tans, &law, 0)?);
    Ok(r)
}

fn walk_hyperbolic(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let mut r = ExperimentReport::new("", cfg.seed);
    let n = cfg.chain_depth as usize;
    let tans = walk_final_tangents(cfg.sample_count, cfg.seed, |s| hyperbolic_walk(n, s))?;
    quartile_rows(&mut r, "tan_S", n as u64, &tans)?;
    r.verdict(ks(
        &format!("ks_tan_S{n}"),
        &tans,
        &CauchyParams::STANDARD,
        0,
    )?);

    let mut rng = cfg.seed.substream(1).rng();
    let mut worst = 0.0f64;
    for i in 0..cfg.sample_count.min(10_000) {
        let h = HyperbolicStep::new(
            rng.random_range(-3.0f64..=3.0).exp(),
            rng.random_range(-3.0f64..=3.0).exp(),
        )?;
        let area = hyperbolic_triangle_area(&h);
        worst = worst.max((area - hyperbolic_angle_defect(&h)).abs());
        if i < 32 {
            let (t, th) = hyperbolic_angle(&h);
            r.row("triangle.eta", i, h.eta);
            r.row("triangle.eta_hat", i, h.eta_hat);
            r.row("triangle.theta", i, t);
            r.row("triangle.theta_hat", i, th);
            r.row("triangle.area", i, area);
        }
    }
    r.verdict(Verdict::check(
        "area_identity_max_abs_err",
        worst,
        1e-12,
        cfg.sample_count.min(10_000),
    ));
    Ok(r)
}

fn golden(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let mut r = ExperimentReport::new("", cfg.seed);
    let target = PHI - 1.0;
    let mut worst_tail = 0.0f64;
    let mut length_failures = 0;
    for n in 1..=cfg.chain_depth {
        let p = v_chain_params(n)?;
        let err = (rational_to_f64(&p.b) - target).abs();
        if n >= 16 {
            worst_tail = worst_tail.max(err);
        }
        r.row("b_n_minus_limit_abs", n, err);
        r.row("a_n", n, rational_to_f64(&p.a));
        let (lo, hi) = u_chain_support(n)?;
        let k = u_chain_coeffs(n)?;
        let s = &k.alpha + &k.beta;
        let expected = BigRational::new(BigInt::one(), &s * (&s + &k.beta));
        length_failures += usize::from(&hi - &lo != expected);
        r.row("support.lo", n, rational_to_f64(&lo));
        r.row("support.hi", n, rational_to_f64(&hi));
    }
    if cfg.chain_depth >= 16 {
        r.verdict(Verdict::check(
            "b_n_limit_err_n_ge_16",
            worst_tail,
            1e-12,
            (cfg.chain_depth - 15) as usize,
        ));
    }
    r.verdict(Verdict::holds(
        "support_length_exact",
        length_failures,
        cfg.chain_depth as usize,
    ));
    let n = cfg.chain_depth.min(20);
    let (lo, hi) = u_chain_support_f64(n)?;
    if n == 20 {
        r.verdict(Verdict::check(
            "u_support_n20_endpoint_err",
            (lo - target).abs().max((hi - target).abs()),
            1e-6,
            2,
        ));
    }
    let pf = sample_v_chain(n, cfg.seed, cfg.sample_count)?;
    let shifted: Vec<f64> = pf.values.iter().map(|v| 1.0 + v).collect();
    let med = median(&shifted)?;
    r.row("median_1_plus_V", n, med);
    if n == 20 {
        r.verdict(Verdict::check(
            "median_1_plus_V20_minus_phi",
            (med - PHI).abs(),
            0.01,
            shifted.len(),
        ));
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn experiment_names_round_trip() {
        for e in [
            Experiment::TransformVerify(TransformMode::Centered),
            Experiment::TransformVerify(TransformMode::Noncentered),
            Experiment::TransformVerify(TransformMode::Scaled),
            Experiment::Chain(ChainKind::V),
            Experiment::Chain(ChainKind::W),
            Experiment::Chain(ChainKind::U),
            Experiment::Walk(WalkKind::Euclid),
            Experiment::Walk(WalkKind::Hyperbolic),
            Experiment::Golden,
            Experiment::VerifyAll,
        ] {
            assert_eq!(e.to_string().parse::<Experiment>().unwrap(), e);
        }
        assert!("chain x".parse::<Experiment>().is_err());
        assert_eq!(
            "chain_v".parse::<Experiment>().unwrap(),
            Experiment::Chain(ChainKind::V)
        );
    }

    #[test]
    fn rational_parsing() {
        let r = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        assert_eq!(parse_rational("3/4").unwrap(), r(3, 4));
        assert_eq!(parse_rational("-2").unwrap(), r(-2, 1));
        assert_eq!(parse_rational("2.5").unwrap(), r(5, 2));
        assert_eq!(parse_rational("1.25e2").unwrap(), r(125, 1));
        assert_eq!(parse_rational("5e-3").unwrap(), r(1, 200));
        for bad in ["1/0", "abc", "1.2.3", ""] {
            assert!(parse_rational(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn step_parsing() {
        let steps = parse_steps("1,2,0; 1,3,-0.5").unwrap();
        assert_eq!(steps.len(), 2);
        assert_eq!(steps[1], EuclideanStepSpec::new(1.0, 3.0, -0.5).unwrap());
        assert_eq!(parse_steps(&format_steps(&steps)).unwrap(), steps);
        assert!(parse_steps("1,2").is_err());
        assert!(parse_steps("0,1,0").is_err());
    }

    #[test]
    fn config_validation() {
        let mut c = ExperimentConfig::new(Experiment::Golden);
        c.sample_count = 99;
        assert!(run(&c).is_err());
        c.sample_count = 100;
        c.chain_depth = 0;
        assert!(run(&c).is_err());
    }

    #[test]
    fn chain_v_report_rows() {
        let mut c = ExperimentConfig::new(Experiment::Chain(ChainKind::V));
        c.chain_depth = 3;
        c.sample_count = 2_000;
        let r = run(&c).unwrap();
        assert!(r.passed(), "{:?}", r.failures().collect::<Vec<_>>());
        let csv = r.to_csv();
        assert!(csv.contains("row,a_n,3,1/13,"));
        assert!(csv.contains("row,b_n,3,8/13,"));
    }

    #[test]
    fn small_runs_are_deterministic_and_pass() {
        for e in [
            Experiment::TransformVerify(TransformMode::Centered),
            Experiment::TransformVerify(TransformMode::Scaled),
            Experiment::Chain(ChainKind::W),
            Experiment::Chain(ChainKind::U),
            Experiment::Walk(WalkKind::Euclid),
            Experiment::Walk(WalkKind::Hyperbolic),
            Experiment::Golden,
        ] {
            let mut c = ExperimentConfig::new(e);
            c.sample_count = 5_000;
            c.chain_depth = 5;
            c.emit_density = true;
            c.points = 8;
            let a = run(&c).unwrap();
            assert!(a.passed(), "{e}: {:?}", a.failures().collect::<Vec<_>>());
            assert_eq!(a.to_json(), run(&c).unwrap().to_json());
        }
    }
}
