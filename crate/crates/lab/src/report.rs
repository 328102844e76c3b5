//! Run reports and their CSV / JSON renderings.
//!
//! CSV floats use 17 significant digits in scientific notation so that two
//! runs with the same inputs produce the same bytes.

use serde::{Deserialize, Serialize};

use crate::LabError;

pub const REPORT_SCHEMA_VERSION: u32 = 1;

/// `x` with 17 significant digits; empty for missing values.
pub fn fmt_f64(x: Option<f64>) -> String {
    match x {
        None => String::new(),
        Some(v) if v.is_nan() => "NaN".into(),
        Some(v) if v.is_infinite() => if v > 0.0 { "inf" } else { "-inf" }.into(),
        Some(v) => format!("{v:.16e}"),
    }
}

fn fmt_opt<T: ToString>(x: &Option<T>) -> String {
    x.as_ref().map(ToString::to_string).unwrap_or_default()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    /// The model could not be built from the configuration.
    ModelError,
    /// The eigensolver or an estimate failed numerically.
    SolverError,
}

impl Verdict {
    pub fn label(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::ModelError => "model-error",
            Verdict::SolverError => "solver-error",
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Pass => 0,
            Verdict::Fail => 1,
            Verdict::ModelError => 2,
            Verdict::SolverError => 3,
        }
    }
}

/// One manifold instance. Every field is reproducible from the inputs at the front.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct InstanceRow {
    pub family: String,
    pub manifold: String,
    pub n: usize,
    pub epsilon: Option<f64>,
    pub grid: usize,
    pub lambda: Option<f64>,
    pub lambda_error: Option<f64>,
    pub mode: Option<usize>,
    pub k_eff: Option<f64>,
    pub diameter: Option<f64>,
    pub bound_lichnerowicz: Option<f64>,
    pub margin_lichnerowicz: Option<f64>,
    pub bound_ling: Option<f64>,
    pub margin_ling: Option<f64>,
    pub a: Option<f64>,
    pub delta: Option<f64>,
    pub case: Option<String>,
    pub mu: Option<f64>,
    pub bound_case: Option<f64>,
    pub margin_case: Option<f64>,
    pub gradient_ratio: Option<f64>,
    pub gradient_bound: Option<f64>,
    pub gradient_margin: Option<f64>,
    pub dominance_margin: Option<f64>,
    pub gamma: Option<f64>,
    pub potential_shift: Option<f64>,
    pub soliton_residual: Option<f64>,
    pub identity_bianchi: Option<f64>,
    pub identity_constancy: Option<f64>,
    pub identity_trace: Option<f64>,
    pub eigen_residual: Option<f64>,
    pub eigen_membership: Option<bool>,
    pub gap_verdict: Option<String>,
    pub verdict: Option<Verdict>,
    pub message: String,
}

pub const INSTANCE_HEADER: [&str; 36] = [
    "family",
    "manifold",
    "n",
    "epsilon",
    "grid",
    "lambda",
    "lambda_error",
    "mode",
    "k_eff",
    "diameter",
    "bound_lichnerowicz",
    "margin_lichnerowicz",
    "bound_ling",
    "margin_ling",
    "a",
    "delta",
    "case",
    "mu",
    "bound_case",
    "margin_case",
    "gradient_ratio",
    "gradient_bound",
    "gradient_margin",
    "dominance_margin",
    "gamma",
    "potential_shift",
    "soliton_residual",
    "identity_bianchi",
    "identity_constancy",
    "identity_trace",
    "eigen_residual",
    "eigen_membership",
    "gap_verdict",
    "verdict",
    "message",
    "schema_version",
];

impl InstanceRow {
    fn record(&self) -> Vec<String> {
        let f = |x: Option<f64>| fmt_f64(x);
        vec![
            self.family.clone(),
            self.manifold.clone(),
            self.n.to_string(),
            f(self.epsilon),
            self.grid.to_string(),
            f(self.lambda),
            f(self.lambda_error),
            fmt_opt(&self.mode),
            f(self.k_eff),
            f(self.diameter),
            f(self.bound_lichnerowicz),
            f(self.margin_lichnerowicz),
            f(self.bound_ling),
            f(self.margin_ling),
            f(self.a),
            f(self.delta),
            fmt_opt(&self.case),
            f(self.mu),
            f(self.bound_case),
            f(self.margin_case),
            f(self.gradient_ratio),
            f(self.gradient_bound),
            f(self.gradient_margin),
            f(self.dominance_margin),
            f(self.gamma),
            f(self.potential_shift),
            f(self.soliton_residual),
            f(self.identity_bianchi),
            f(self.identity_constancy),
            f(self.identity_trace),
            f(self.eigen_residual),
            fmt_opt(&self.eigen_membership),
            fmt_opt(&self.gap_verdict),
            self.verdict.map(Verdict::label).unwrap_or_default().to_string(),
            self.message.clone(),
            REPORT_SCHEMA_VERSION.to_string(),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Environment {
    pub version: String,
    pub grid: usize,
    pub b: f64,
    pub bins: usize,
    pub tolerance_profile: String,
    pub checks: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct Summary {
    pub instances: usize,
    pub passed: usize,
    pub failed: usize,
    pub errors: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub command: String,
    pub environment: Environment,
    pub summary: Summary,
    pub rows: Vec<InstanceRow>,
}

impl RunReport {
    pub fn new(command: &str, environment: Environment, rows: Vec<InstanceRow>) -> Self {
        let mut summary = Summary { instances: rows.len(), ..Summary::default() };
        for r in &rows {
            match r.verdict {
                Some(Verdict::Pass) => summary.passed += 1,
                Some(Verdict::Fail) => summary.failed += 1,
                _ => summary.errors += 1,
            }
        }
        Self { schema_version: REPORT_SCHEMA_VERSION, command: command.into(), environment, summary, rows }
    }

    pub fn exit_code(&self) -> i32 {
        self.rows.iter().map(|r| r.verdict.map_or(3, Verdict::exit_code)).max().unwrap_or(0)
    }

    pub fn to_csv(&self) -> Result<String, LabError> {
        write_csv(&INSTANCE_HEADER, self.rows.iter().map(InstanceRow::record))
    }

    pub fn to_json(&self) -> Result<String, LabError> {
        serde_json::to_string_pretty(self).map_err(|e| LabError::Io(e.to_string()))
    }
}

pub fn write_csv<I: IntoIterator<Item = Vec<String>>>(header: &[&str], records: I) -> Result<String, LabError> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    let io = |e: csv::Error| LabError::Io(e.to_string());
    w.write_record(header).map_err(io)?;
    for r in records {
        w.write_record(&r).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| LabError::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| LabError::Io(e.to_string()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}
