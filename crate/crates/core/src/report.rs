//! Experiment reports and their CSV / JSON renderings.
//!
//! Both renderings are deterministic functions of the report: floats are
//! printed with 17 significant digits (CSV) or shortest round-trip form
//! (JSON), rationals as exact `p/q` strings, and JSON object keys sorted.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use serde_json::{json, Map, Value as Json};

use crate::chain::format_rational;
use crate::rng::RngSeed;
use crate::stats::GoFReport;

/// A cell of a report row.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Int(i64),
    Float(f64),
    Rational(BigRational),
    Text(String),
}

impl Value {
    fn to_json(&self) -> Json {
        match self {
            Value::Int(i) => json!(i),
            Value::Float(f) => float_json(*f),
            Value::Rational(r) => Json::String(format_rational(r)),
            Value::Text(s) => Json::String(s.clone()),
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(i) => write!(f, "{i}"),
            Value::Float(x) => f.write_str(&format_float(*x)),
            Value::Rational(r) => f.write_str(&format_rational(r)),
            Value::Text(s) => f.write_str(s),
        }
    }
}

impl From<i64> for Value {
    fn from(v: i64) -> Self {
        Value::Int(v)
    }
}

impl From<u64> for Value {
    fn from(v: u64) -> Self {
        Value::Int(v as i64)
    }
}

impl From<usize> for Value {
    fn from(v: usize) -> Self {
        Value::Int(v as i64)
    }
}

impl From<f64> for Value {
    fn from(v: f64) -> Self {
        Value::Float(v)
    }
}

impl From<BigRational> for Value {
    fn from(v: BigRational) -> Self {
        Value::Rational(v)
    }
}

impl From<&str> for Value {
    fn from(v: &str) -> Self {
        Value::Text(v.to_owned())
    }
}

/// 17 significant digits, `.` decimal separator, no grouping.
pub fn format_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "NaN".to_owned()
    } else if x > 0.0 {
        "inf".to_owned()
    } else {
        "-inf".to_owned()
    }
}

// Key order must not depend on serde_json's `preserve_order` feature.
fn sort_keys(v: Json) -> Json {
    match v {
        Json::Object(map) => {
            let mut entries: Vec<(String, Json)> = map.into_iter().collect();
            entries.sort_by(|a, b| a.0.cmp(&b.0));
            Json::Object(
                entries
                    .into_iter()
                    .map(|(k, v)| (k, sort_keys(v)))
                    .collect(),
            )
        }
        Json::Array(items) => Json::Array(items.into_iter().map(sort_keys).collect()),
        other => other,
    }
}

fn float_json(x: f64) -> Json {
    serde_json::Number::from_f64(x)
        .map(Json::Number)
        .unwrap_or_else(|| Json::String(format_float(x)))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub label: String,
    pub x: Value,
    pub value: Value,
}

impl Row {
    pub fn new(label: impl Into<String>, x: impl Into<Value>, value: impl Into<Value>) -> Self {
        Self {
            label: label.into(),
            x: x.into(),
            value: value.into(),
        }
    }
}

/// Named pass/fail check: `passed ⇔ statistic < threshold` (plus the pole
/// cap for Monte Carlo checks).
#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub name: String,
    pub statistic: f64,
    pub threshold: f64,
    pub n: usize,
    pub passed: bool,
    pub pole_discards: usize,
}

impl Verdict {
    pub fn from_gof(name: impl Into<String>, r: &GoFReport) -> Self {
        Self {
            name: name.into(),
            statistic: r.statistic,
            threshold: r.threshold,
            n: r.n,
            passed: r.passed,
            pole_discards: r.pole_discards,
        }
    }

    /// A deterministic check of `statistic < threshold` over `n` cases.
    pub fn check(name: impl Into<String>, statistic: f64, threshold: f64, n: usize) -> Self {
        Self {
            name: name.into(),
            statistic,
            threshold,
            n,
            passed: statistic < threshold,
            pole_discards: 0,
        }
    }

    /// A boolean property over `n` cases, as `failures < 1`.
    pub fn holds(name: impl Into<String>, failures: usize, n: usize) -> Self {
        Self::check(name, failures as f64, 1.0, n)
    }

    pub fn with_threshold(mut self, threshold: f64) -> Self {
        self.threshold = threshold;
        self.passed = self.statistic < threshold
            && (self.pole_discards == 0
                || (self.pole_discards as f64 / (self.n + self.pole_discards) as f64)
                    < crate::stats::MAX_POLE_RATE);
        self
    }

    fn to_json(&self) -> Json {
        json!({
            "name": self.name,
            "statistic": float_json(self.statistic),
            "threshold": float_json(self.threshold),
            "n": self.n,
            "passed": self.passed,
            "pole_discards": self.pole_discards,
        })
    }
}

/// Output of one experiment run.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub experiment: String,
    pub seed: RngSeed,
    pub version: String,
    /// Echo of the resolved configuration, sorted by key.
    pub parameters: BTreeMap<String, String>,
    pub rows: Vec<Row>,
    pub verdicts: Vec<Verdict>,
}

pub const CSV_HEADER: [&str; 8] = [
    "kind",
    "label",
    "x",
    "value",
    "threshold",
    "n",
    "passed",
    "pole_discards",
];

impl ExperimentReport {
    pub fn new(experiment: impl Into<String>, seed: RngSeed) -> Self {
        Self {
            experiment: experiment.into(),
            seed,
            version: env!("CARGO_PKG_VERSION").to_owned(),
            parameters: BTreeMap::new(),
            rows: Vec::new(),
            verdicts: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Verdict> {
        self.verdicts.iter().filter(|v| !v.passed)
    }

    pub fn row(&mut self, label: impl Into<String>, x: impl Into<Value>, value: impl Into<Value>) {
        self.rows.push(Row::new(label, x, value));
    }

    pub fn verdict(&mut self, v: Verdict) {
        self.verdicts.push(v);
    }

    /// Overrides thresholds of verdicts by exact name.
    pub fn apply_overrides(&mut self, overrides: &BTreeMap<String, f64>) {
        for v in &mut self.verdicts {
            if let Some(&t) = overrides.get(&v.name) {
                *v = v.clone().with_threshold(t);
            }
        }
    }

    /// Single-table CSV: `meta`, `row` and `verdict` records under one header.
    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        let write = |w: &mut csv::Writer<Vec<u8>>, rec: [String; 8]| {
            w.write_record(&rec).expect("writing to memory");
        };
        write(&mut w, CSV_HEADER.map(str::to_owned));
        let meta = |label: &str, value: String| {
            [
                "meta".into(),
                label.into(),
                String::new(),
                value,
                String::new(),
                String::new(),
                String::new(),
                String::new(),
            ]
        };
        write(&mut w, meta("experiment", self.experiment.clone()));
        write(&mut w, meta("seed", self.seed.seed.to_string()));
        write(&mut w, meta("stream", self.seed.stream.to_string()));
        write(&mut w, meta("version", self.version.clone()));
        for (k, v) in &self.parameters {
            write(&mut w, meta(&format!("param.{k}"), v.clone()));
        }
        write(&mut w, meta("passed", self.passed().to_string()));
        for r in &self.rows {
            write(
                &mut w,
                [
                    "row".into(),
                    r.label.clone(),
                    r.x.to_string(),
                    r.value.to_string(),
                    String::new(),
                    String::new(),
                    String::new(),
                    String::new(),
                ],
            );
        }
        for v in &self.verdicts {
            write(
                &mut w,
                [
                    "verdict".into(),
                    v.name.clone(),
                    String::new(),
                    format_float(v.statistic),
                    format_float(v.threshold),
                    v.n.to_string(),
                    v.passed.to_string(),
                    v.pole_discards.to_string(),
                ],
            );
        }
        String::from_utf8(w.into_inner().expect("flush to memory")).expect("utf-8 csv")
    }

    pub fn to_json_value(&self) -> Json {
        let mut meta = Map::new();
        meta.insert("seed".into(), json!(self.seed.seed));
        meta.insert("stream".into(), json!(self.seed.stream));
        meta.insert("version".into(), json!(self.version));
        meta.insert(
            "parameters".into(),
            Json::Object(
                self.parameters
                    .iter()
                    .map(|(k, v)| (k.clone(), Json::String(v.clone())))
                    .collect(),
            ),
        );
        json!({
            "experiment": self.experiment,
            "metadata": Json::Object(meta),
            "passed": self.passed(),
            "rows": self.rows.iter().map(|r| json!({
                "label": r.label,
                "x": r.x.to_json(),
                "value": r.value.to_json(),
            })).collect::<Vec<_>>(),
            "verdicts": self.verdicts.iter().map(Verdict::to_json).collect::<Vec<_>>(),
        })
    }

    /// Pretty-printed UTF-8 JSON with sorted keys and a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&sort_keys(self.to_json_value())).expect("json");
        s.push('\n');
        s
    }
}
