//! Flat `key = value` configuration files and seed resolution.

use std::collections::BTreeMap;
use std::path::PathBuf;

use cauchy_angles::experiment::{
    parse_rational, parse_steps, ExperimentConfig, OutputFormat, DEFAULT_SEED,
};
use cauchy_angles::{Error, Result, RngSeed};

pub const SEED_ENV: &str = "CAUCHY_ANGLES_SEED";

/// Key/value pairs of a config file, in file order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigFile {
    pub entries: Vec<(String, String)>,
}

impl ConfigFile {
    /// Blank lines and lines starting with `#` are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", i + 1)))?;
            entries.push((k.trim().to_owned(), v.trim().to_owned()));
        }
        Ok(Self { entries })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .rev()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }
}

/// Accepts decimal or `0x`-prefixed hexadecimal.
pub fn parse_u64(s: &str) -> Result<u64> {
    let s = s.trim();
    let parsed = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => s.parse(),
    };
    parsed.map_err(|_| Error::Config(format!("not an unsigned integer: '{s}'")))
}

fn parse_bool(s: &str) -> Result<bool> {
    match s.trim().to_ascii_lowercase().as_str() {
        "true" | "yes" | "on" | "1" => Ok(true),
        "false" | "no" | "off" | "0" => Ok(false),
        other => Err(Error::Config(format!("not a boolean: '{other}'"))),
    }
}

fn parse_f64(s: &str) -> Result<f64> {
    s.trim()
        .parse()
        .map_err(|_| Error::Config(format!("not a number: '{s}'")))
}

/// Seed used when neither a flag nor a config key sets one.
pub fn fallback_seed(env: Option<&str>) -> Result<u64> {
    match env {
        Some(v) if !v.trim().is_empty() => parse_u64(v)
            .map_err(|_| Error::Config(format!("{SEED_ENV} is not an unsigned integer: '{v}'"))),
        _ => Ok(DEFAULT_SEED),
    }
}

/// Writes one config key into `cfg`. The `experiment` key is handled by
/// the caller.
pub fn apply_key(cfg: &mut ExperimentConfig, key: &str, value: &str) -> Result<()> {
    match key {
        "experiment" => {}
        "seed" => cfg.seed = RngSeed::new(parse_u64(value)?, cfg.seed.stream),
        "stream" => cfg.seed = RngSeed::new(cfg.seed.seed, parse_u64(value)?),
        "sample_count" | "n" => cfg.sample_count = parse_u64(value)? as usize,
        "chain_depth" | "depth" => cfg.chain_depth = parse_u64(value)?,
        "output_format" | "format" => cfg.output_format = value.parse::<OutputFormat>()?,
        "output_path" | "output" => cfg.output_path = Some(PathBuf::from(value)),
        "points" => cfg.points = parse_u64(value)? as usize,
        "emit_density" => cfg.emit_density = parse_bool(value)?,
        "emit_params" => cfg.emit_params = parse_bool(value)?,
        "steps" => cfg.steps = parse_steps(value)?,
        "c" => cfg.w_step.0 = parse_rational(value)?,
        "d" => cfg.w_step.1 = parse_rational(value)?,
        "a0" => cfg.w_initial.0 = parse_rational(value)?,
        "b0" => cfg.w_initial.1 = parse_rational(value)?,
        _ => match key.strip_prefix("tolerance.") {
            Some(name) if !name.is_empty() => {
                cfg.tolerances.insert(name.to_owned(), parse_f64(value)?);
            }
            _ => return Err(Error::Config(format!("unknown config key '{key}'"))),
        },
    }
    Ok(())
}

pub fn apply_file(cfg: &mut ExperimentConfig, file: &ConfigFile) -> Result<()> {
    for (k, v) in &file.entries {
        apply_key(cfg, k, v)?;
    }
    Ok(())
}

/// Parses a `name=value` tolerance override.
pub fn parse_tolerance(s: &str) -> std::result::Result<(String, f64), String> {
    let (k, v) = s
        .split_once('=')
        .ok_or_else(|| format!("expected name=value, got '{s}'"))?;
    let v = v.trim().parse::<f64>().map_err(|e| e.to_string())?;
    Ok((k.trim().to_owned(), v))
}

pub fn tolerance_map(pairs: &[(String, f64)]) -> BTreeMap<String, f64> {
    pairs.iter().cloned().collect()
}
