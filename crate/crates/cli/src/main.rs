use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use cauchy_angles::experiment::{
    parse_rational, parse_steps, run, ChainKind, Experiment, ExperimentConfig, OutputFormat,
    TransformMode, WalkKind,
};
use cauchy_angles::{Error, RngSeed};
use clap::{Args, Parser, Subcommand, ValueEnum};

mod config;

use config::{apply_file, fallback_seed, parse_tolerance, tolerance_map, ConfigFile, SEED_ENV};

const EXIT_VERIFICATION_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;

/// Cauchy-preserving transformations, angular walks and Cauchy continued
/// fractions: simulation and verification experiments.
#[derive(Parser, Debug)]
#[command(name = "cauchy-angles", version)]
struct Cli {
    #[command(flatten)]
    common: CommonArgs,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct CommonArgs {
    /// Flat key = value config file; flags override its keys.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Master seed (falls back to CAUCHY_ANGLES_SEED, then a fixed default).
    #[arg(long, global = true, value_parser = parse_seed)]
    seed: Option<u64>,

    /// Stream index under the master seed.
    #[arg(long, global = true, value_parser = parse_seed)]
    stream: Option<u64>,

    /// Monte Carlo sample count (at least 100).
    #[arg(long = "n", short = 'n', visible_alias = "samples", global = true)]
    sample_count: Option<usize>,

    #[arg(long, global = true, value_enum)]
    format: Option<FormatArg>,

    /// Report destination; standard output when absent.
    #[arg(long, short = 'o', global = true)]
    output: Option<PathBuf>,

    /// Threshold override for a named verdict, as name=value. Repeatable.
    #[arg(long = "tolerance", global = true, value_parser = parse_tolerance)]
    tolerances: Vec<(String, f64)>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// KS checks of the centered, non-centered or scaled pair transforms.
    TransformVerify(TransformArgs),
    /// V, W and U continued-fraction chains.
    Chain(ChainArgs),
    /// Euclidean or hyperbolic angular random walks.
    Walk(WalkArgs),
    /// Convergence of the V and U chains towards the golden ratio.
    Golden(DepthArgs),
    /// The full acceptance suite.
    VerifyAll,
    /// Runs the experiment named by the `experiment` config key (or given here).
    Run { experiment: Option<String> },
}

#[derive(Args, Debug)]
#[group(multiple = false)]
struct TransformArgs {
    #[arg(long)]
    centered: bool,
    #[arg(long)]
    noncentered: bool,
    #[arg(long)]
    scaled: bool,
    /// Mode as a positional word instead of a flag.
    #[arg(value_enum)]
    mode: Option<ModeArg>,
}

#[derive(Args, Debug)]
struct DepthArgs {
    #[arg(long)]
    depth: Option<u64>,
}

#[derive(Args, Debug)]
struct ChainArgs {
    #[arg(value_enum)]
    kind: ChainArg,
    #[arg(long)]
    depth: Option<u64>,
    /// Emit density curves sampled at --points abscissae.
    #[arg(long)]
    emit_density: bool,
    /// Emit exact chain parameters as p/q rows.
    #[arg(long)]
    emit_params: bool,
    #[arg(long)]
    points: Option<usize>,
    /// W-chain step constant c (p/q or decimal).
    #[arg(long, allow_hyphen_values = true)]
    c: Option<String>,
    /// W-chain step constant d.
    #[arg(long, allow_hyphen_values = true)]
    d: Option<String>,
    /// W-chain initial scale.
    #[arg(long)]
    a0: Option<String>,
    /// W-chain initial location.
    #[arg(long, allow_hyphen_values = true)]
    b0: Option<String>,
}

#[derive(Args, Debug)]
struct WalkArgs {
    #[arg(value_enum)]
    kind: WalkArg,
    /// Euclidean steps as "d,a,b;d,a,b;...".
    #[arg(long, allow_hyphen_values = true)]
    steps: Option<String>,
    /// Number of hyperbolic steps.
    #[arg(long)]
    depth: Option<u64>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum ModeArg {
    Centered,
    Noncentered,
    Scaled,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum ChainArg {
    V,
    W,
    U,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum WalkArg {
    Euclid,
    Hyperbolic,
}

fn parse_seed(s: &str) -> Result<u64, String> {
    config::parse_u64(s).map_err(|e| e.to_string())
}

fn experiment_of(command: &Command, file: &ConfigFile) -> Result<Experiment, Error> {
    Ok(match command {
        Command::TransformVerify(t) => {
            let mode = match (t.centered, t.noncentered, t.scaled, t.mode) {
                (_, true, _, _) | (_, _, _, Some(ModeArg::Noncentered)) => {
                    TransformMode::Noncentered
                }
                (_, _, true, _) | (_, _, _, Some(ModeArg::Scaled)) => TransformMode::Scaled,
                _ => TransformMode::Centered,
            };
            Experiment::TransformVerify(mode)
        }
        Command::Chain(c) => Experiment::Chain(match c.kind {
            ChainArg::V => ChainKind::V,
            ChainArg::W => ChainKind::W,
            ChainArg::U => ChainKind::U,
        }),
        Command::Walk(w) => Experiment::Walk(match w.kind {
            WalkArg::Euclid => WalkKind::Euclid,
            WalkArg::Hyperbolic => WalkKind::Hyperbolic,
        }),
        Command::Golden(_) => Experiment::Golden,
        Command::VerifyAll => Experiment::VerifyAll,
        Command::Run { experiment } => match experiment.as_deref().or(file.get("experiment")) {
            Some(name) => name.parse()?,
            None => return Err(Error::Config("no experiment named".into())),
        },
    })
}

fn resolve(cli: &Cli) -> Result<ExperimentConfig, Error> {
    let file = match &cli.common.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            ConfigFile::parse(&text)?
        }
        None => ConfigFile::default(),
    };
    let mut cfg = ExperimentConfig::new(experiment_of(&cli.command, &file)?);
    let env = std::env::var(SEED_ENV).ok();
    cfg.seed = RngSeed::new(fallback_seed(env.as_deref())?, 0);
    apply_file(&mut cfg, &file)?;

    let c = &cli.common;
    if let Some(seed) = c.seed {
        cfg.seed = RngSeed::new(seed, cfg.seed.stream);
    }
    if let Some(stream) = c.stream {
        cfg.seed = RngSeed::new(cfg.seed.seed, stream);
    }
    if let Some(n) = c.sample_count {
        cfg.sample_count = n;
    }
    if let Some(f) = c.format {
        cfg.output_format = match f {
            FormatArg::Csv => OutputFormat::Csv,
            FormatArg::Json => OutputFormat::Json,
        };
    }
    if let Some(p) = &c.output {
        cfg.output_path = Some(p.clone());
    }
    cfg.tolerances.extend(tolerance_map(&c.tolerances));

    match &cli.command {
        Command::Chain(a) => {
            if let Some(d) = a.depth {
                cfg.chain_depth = d;
            }
            cfg.emit_density |= a.emit_density;
            cfg.emit_params |= a.emit_params;
            if let Some(p) = a.points {
                cfg.points = p;
            }
            if let Some(v) = &a.c {
                cfg.w_step.0 = parse_rational(v)?;
            }
            if let Some(v) = &a.d {
                cfg.w_step.1 = parse_rational(v)?;
            }
            if let Some(v) = &a.a0 {
                cfg.w_initial.0 = parse_rational(v)?;
            }
            if let Some(v) = &a.b0 {
                cfg.w_initial.1 = parse_rational(v)?;
            }
        }
        Command::Walk(a) => {
            if let Some(s) = &a.steps {
                cfg.steps = parse_steps(s)?;
            }
            if let Some(d) = a.depth {
                cfg.chain_depth = d;
            }
        }
        Command::Golden(a) => {
            if let Some(d) = a.depth {
                cfg.chain_depth = d;
            }
        }
        _ => {}
    }
    cfg.validate()?;
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match resolve(&cli) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };

    let started = Instant::now();
    let report = match run(&cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let body = match cfg.output_format {
        OutputFormat::Csv => report.to_csv(),
        OutputFormat::Json => report.to_json(),
    };
    let written = match &cfg.output_path {
        Some(path) => fs::write(path, &body),
        None => std::io::stdout().lock().write_all(body.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: writing report: {e}");
        return ExitCode::from(EXIT_USAGE);
    }
    eprintln!(
        "{}: wall time {:.3}s",
        cfg.experiment,
        started.elapsed().as_secs_f64()
    );

    if report.passed() {
        ExitCode::SUCCESS
    } else {
        for v in report.failures() {
            eprintln!(
                "FAILED {}: statistic {} >= threshold {} (n = {}, pole discards = {})",
                v.name, v.statistic, v.threshold, v.n, v.pole_discards
            );
        }
        ExitCode::from(EXIT_VERIFICATION_FAILED)
    }
}
