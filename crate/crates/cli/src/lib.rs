//! Command-line driver: file ingestion, dispatch to the library, and report
//! rendering.

pub mod commands;
pub mod files;
mod render;

use serde::Serialize;
use std::path::PathBuf;
use thiserror::Error;

/// Exit status for a successful run.
pub const EXIT_OK: i32 = 0;
/// Exit status when a checked identity fails.
pub const EXIT_MISMATCH: i32 = 1;
/// Exit status for unreadable, malformed, or out-of-range input.
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Io(String),
    #[error("invalid input file: {0}")]
    Schema(String),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] iwagraph::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_verification_failure() => EXIT_MISMATCH,
            _ => EXIT_INPUT,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Validate,
    Cover,
    Kappa,
    Charelem,
    Tower,
    Kida,
    Qwalk,
    ProductCheck,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub command: Command,
    pub graph: PathBuf,
    pub beta: Option<PathBuf>,
    pub prime: Option<u64>,
    pub dims: Option<usize>,
    pub nmax: u32,
    pub box_bound: u32,
    /// Evaluation point for `qwalk`, as a rational string.
    pub a: Option<String>,
    pub format: Format,
    pub jobs: Option<usize>,
    pub force_size: bool,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(command: Command, graph: impl Into<PathBuf>) -> Self {
        RunConfig {
            command,
            graph: graph.into(),
            beta: None,
            prime: None,
            dims: None,
            nmax: 2,
            box_bound: iwagraph::invariants::DEFAULT_BOX,
            a: None,
            format: Format::Json,
            jobs: None,
            force_size: false,
            out: None,
        }
    }
}

/// Outcome of a command before rendering.
#[derive(Debug, Clone)]
pub struct Report {
    pub json: serde_json::Value,
    pub text: String,
    /// Header and rows for CSV output.
    pub csv: (Vec<String>, Vec<Vec<String>>),
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    /// A checked identity failed; the message names it and both values.
    Mismatch(String),
    /// The input was read but does not meet the requirements.
    Invalid(String),
}

impl Report {
    pub fn new(value: &impl Serialize, text: String) -> Self {
        Report {
            json: serde_json::to_value(value).expect("reports serialize"),
            text,
            csv: (Vec::new(), Vec::new()),
            verdict: Verdict::Pass,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunOutput {
    pub exit_code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&report.json).expect("json");
            s.push('\n');
            s
        }
        Format::Text => report.text.clone(),
        Format::Csv => {
            let (header, rows) = &report.csv;
            let mut w = csv::Writer::from_writer(Vec::new());
            if header.is_empty() {
                w.write_record(["field", "value"]).expect("in-memory csv");
                if let Some(obj) = report.json.as_object() {
                    for (k, v) in obj {
                        let v = match v {
                            serde_json::Value::String(s) => s.clone(),
                            other => other.to_string(),
                        };
                        w.write_record([k.as_str(), v.as_str()]).expect("in-memory csv");
                    }
                }
            } else {
                w.write_record(header).expect("in-memory csv");
                for r in rows {
                    w.write_record(r).expect("in-memory csv");
                }
            }
            String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf-8")
        }
    }
}

/// Runs one command and returns its exit status and output.
pub fn run(config: &RunConfig) -> RunOutput {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(j) = config.jobs {
        builder = builder.num_threads(j.max(1));
    }
    let result = match builder.build() {
        Ok(pool) => pool.install(|| commands::dispatch(config)),
        Err(e) => Err(CliError::Usage(format!("cannot start worker pool: {e}"))),
    };
    let (exit_code, stdout, stderr) = match result {
        Err(e) => (e.exit_code(), String::new(), format!("error: {e}\n")),
        Ok(report) => {
            let body = render(&report, config.format);
            match &report.verdict {
                Verdict::Pass => (EXIT_OK, body, String::new()),
                Verdict::Mismatch(m) => (EXIT_MISMATCH, body, format!("mismatch: {m}\n")),
                Verdict::Invalid(m) => (EXIT_INPUT, body, format!("invalid: {m}\n")),
            }
        }
    };
    match &config.out {
        Some(path) if !stdout.is_empty() => match std::fs::write(path, &stdout) {
            Ok(()) => RunOutput {
                exit_code,
                stdout: String::new(),
                stderr,
            },
            Err(e) => RunOutput {
                exit_code: EXIT_INPUT,
                stdout: String::new(),
                stderr: format!("error: {}: {e}\n", path.display()),
            },
        },
        _ => RunOutput {
            exit_code,
            stdout,
            stderr,
        },
    }
}
