use std::fmt;
use std::fs::{self, File, OpenOptions};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::{Format, Output};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Any failure that ends a run with the usage exit code.
#[derive(Debug)]
pub struct CliError(pub String);

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl<E: std::error::Error> From<E> for CliError {
    fn from(e: E) -> Self {
        CliError(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// `F_q` with `q = p^n`, echoed in every config.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, serde::Deserialize)]
pub struct FieldEcho {
    pub q: u64,
    pub p: u64,
    pub n: usize,
}

impl FieldEcho {
    pub fn of(field: &excmap_core::Field) -> FieldEcho {
        FieldEcho { q: field.order(), p: field.characteristic(), n: field.degree() }
    }
}

/// Everything that determines a run's results.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, serde::Deserialize)]
pub struct RunConfig {
    pub subcommand: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub field: Option<FieldEcho>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub normalization: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window_override: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub strict_bound: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub precision: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q_list: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cap: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub census_cap: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    pub format: Format,
}

impl RunConfig {
    pub fn new(subcommand: &str, output: &Output) -> RunConfig {
        RunConfig {
            subcommand: subcommand.to_string(),
            out: output.out.clone(),
            format: output.format,
            ..RunConfig::default()
        }
    }
}

pub fn timestamp() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true)
}

#[derive(Serialize)]
pub struct ReportEnvelope<'a, P: Serialize> {
    pub record: &'static str,
    pub tool_version: &'static str,
    pub config: &'a RunConfig,
    pub timestamp: String,
    pub payload: P,
    pub summary: String,
}

impl<'a, P: Serialize> ReportEnvelope<'a, P> {
    pub fn new(record: &'static str, config: &'a RunConfig, payload: P, summary: String) -> Self {
        ReportEnvelope { record, tool_version: TOOL_VERSION, config, timestamp: timestamp(), payload, summary }
    }
}

/// Destination of one run's records: stdout in JSON mode, and an
/// append-only JSONL file under `--out`.
pub struct Sink {
    format: Format,
    file: Option<BufWriter<File>>,
}

impl Sink {
    pub fn open(output: &Output, name: &str) -> CliResult<Sink> {
        let file = match &output.out {
            Some(dir) => Some(BufWriter::new(open_append(&dir.join(format!("{name}.jsonl")))?)),
            None => None,
        };
        Ok(Sink { format: output.format, file })
    }

    /// A sink writing to an already opened file.
    pub fn with_file(format: Format, file: File) -> Sink {
        Sink { format, file: Some(BufWriter::new(file)) }
    }

    pub fn record<T: Serialize>(&mut self, value: &T) -> CliResult<()> {
        let line = serde_json::to_string(value)?;
        if self.format == Format::Json {
            let mut out = io::stdout().lock();
            writeln!(out, "{line}")?;
        }
        if let Some(f) = &mut self.file {
            writeln!(f, "{line}")?;
        }
        Ok(())
    }

    /// Human-readable line, shown only in text mode.
    pub fn text(&self, line: impl fmt::Display) {
        if self.format == Format::Text {
            println!("{line}");
        }
    }

    pub fn flush(&mut self) -> CliResult<()> {
        if let Some(f) = &mut self.file {
            f.flush()?;
            f.get_ref().sync_data()?;
        }
        Ok(())
    }
}

pub fn open_append(path: &Path) -> CliResult<File> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    Ok(OpenOptions::new().create(true).append(true).open(path)?)
}
