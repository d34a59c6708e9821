//! Resumable census scans.
//!
//! The report `scan_q{q}_n{n}.jsonl` holds a header envelope, one
//! `candidate` row per polynomial in census order, and a closing summary
//! envelope. After every flushed chunk the cursor file records how many
//! candidates and bytes are durable; `--resume` cuts any torn tail back to
//! that offset and continues from there.

use std::fs::{self, OpenOptions};
use std::io::{BufRead, BufReader};
use std::path::{Path, PathBuf};

use excmap_core::exceptional::{
    census_decider, census_row, core_degrees, CandidateRow, Census, Normalization, Violation, Window,
};
use excmap_core::field::{field_of_order, Field};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::commands::{decide_config, decide_options};
use crate::report::{CliError, CliResult, FieldEcho, ReportEnvelope, RunConfig, Sink};
use crate::{Format, ScanArgs, Status};

#[derive(Serialize)]
struct Header {
    q: u64,
    p: u64,
    n: usize,
    normalization: Normalization,
    total_candidates: u64,
    windows: Vec<Window>,
    cap: u64,
    census_cap: u64,
}

#[derive(Serialize)]
struct Row<'a> {
    record: &'static str,
    #[serde(flatten)]
    row: &'a CandidateRow,
    violation: Option<String>,
}

#[derive(Serialize)]
struct Summary {
    total_candidates: u64,
    exceptional_count: usize,
    exceptional: Vec<String>,
    inconclusive: usize,
    violations: Vec<Violation>,
}

#[derive(Serialize, Deserialize)]
struct Cursor {
    next_index: u64,
    byte_offset: u64,
    complete: bool,
    config: RunConfig,
}

#[derive(Default)]
struct Tally {
    exceptional: Vec<String>,
    inconclusive: usize,
    violations: Vec<Violation>,
}

impl Tally {
    fn add(&mut self, index: u64, poly: &str, verdict: &str, violation: Option<String>) {
        match verdict {
            "exceptional" => self.exceptional.push(poly.to_string()),
            "inconclusive" => self.inconclusive += 1,
            _ => {}
        }
        if let Some(reason) = violation {
            self.violations.push(Violation { index, poly: poly.to_string(), reason });
        }
    }
}

fn scan_field(a: &ScanArgs) -> CliResult<Field> {
    let q = match (a.q, a.p) {
        (Some(q), None) => q,
        (None, Some(p)) if excmap_core::field::is_prime(p) => p,
        (None, Some(p)) => return Err(CliError(format!("--p {p} is not prime"))),
        _ => return Err(CliError("give --q or --p".into())),
    };
    Ok(field_of_order(q)?)
}

fn paths(dir: &Path, q: u64, n: usize, norm: Normalization) -> (PathBuf, PathBuf) {
    let stem = match norm {
        Normalization::MonicZeroConstant => format!("scan_q{q}_n{n}"),
        Normalization::Full => format!("scan_q{q}_n{n}_full"),
    };
    (dir.join(format!("{stem}.jsonl")), dir.join(format!("{stem}.cursor.json")))
}

fn write_cursor(path: &Path, cursor: &Cursor) -> CliResult<()> {
    let tmp = path.with_extension("json.tmp");
    fs::write(&tmp, serde_json::to_vec(cursor)?)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

/// Cuts the report back to the cursor and re-reads the finished rows.
fn restore(report: &Path, cursor: &Cursor) -> CliResult<Tally> {
    let file = OpenOptions::new().write(true).open(report)?;
    file.set_len(cursor.byte_offset)?;
    drop(file);
    let mut tally = Tally::default();
    let mut expected = 0;
    for line in BufReader::new(fs::File::open(report)?).lines() {
        let v: serde_json::Value = serde_json::from_str(&line?)?;
        if v["record"] != "candidate" {
            continue;
        }
        let index = v["index"].as_u64().ok_or_else(|| CliError("row without index".into()))?;
        if index != expected {
            return Err(CliError(format!("report rows out of order at index {index}")));
        }
        expected += 1;
        let violation = v["violation"].as_str().map(str::to_string);
        tally.add(index, v["poly"].as_str().unwrap_or(""), v["verdict"].as_str().unwrap_or(""), violation);
    }
    if expected != cursor.next_index {
        return Err(CliError(format!("report has {expected} rows, cursor says {}", cursor.next_index)));
    }
    Ok(tally)
}

pub fn run(a: &ScanArgs) -> CliResult<Status> {
    let field = scan_field(a)?;
    let norm = if a.full { Normalization::Full } else { Normalization::MonicZeroConstant };
    let census = Census::new(&field, a.n, norm, a.census_cap)?;
    let opts = decide_options(&a.decide);
    let decider = census_decider(&field, a.n, &opts)?;
    let windows = core_degrees(field.characteristic(), a.n)
        .into_iter()
        .map(|d| decider.window(d))
        .collect::<Result<Vec<_>, _>>()?;

    let mut config = RunConfig::new("scan", &a.output);
    config.field = Some(FieldEcho::of(&field));
    config.degree = Some(a.n as u64);
    config.normalization = Some(norm.describe().to_string());
    config.census_cap = Some(a.census_cap);
    decide_config(&mut config, &a.decide);
    // stdout format does not affect the report, so resume ignores it
    let mut persisted = config.clone();
    persisted.format = Format::default();

    let mut tally = Tally::default();
    let mut start = 0;
    let (mut sink, cursor_path) = match &a.output.out {
        None => (Sink::open(&a.output, "")?, None),
        Some(dir) => {
            fs::create_dir_all(dir)?;
            let (report, cursor_path) = paths(dir, field.order(), a.n, norm);
            if a.resume {
                let cursor: Cursor = serde_json::from_slice(
                    &fs::read(&cursor_path).map_err(|e| CliError(format!("{}: {e}", cursor_path.display())))?,
                )?;
                if cursor.config != persisted {
                    return Err(CliError("cursor was written by a run with a different configuration".into()));
                }
                if cursor.complete {
                    return Err(CliError(format!("{} is already complete", report.display())));
                }
                tally = restore(&report, &cursor)?;
                start = cursor.next_index;
            } else if report.exists() {
                return Err(CliError(format!("{} exists; pass --resume or pick another --out", report.display())));
            }
            let file = OpenOptions::new().create(true).append(true).open(&report)?;
            (Sink::with_file(a.output.format, file), Some((cursor_path, report)))
        }
    };

    if start == 0 {
        let header = Header {
            q: field.order(),
            p: field.characteristic(),
            n: a.n,
            normalization: norm,
            total_candidates: census.len(),
            windows,
            cap: a.decide.cap,
            census_cap: a.census_cap,
        };
        let line = format!(
            "scan of {} candidates over GF({}), degree {} ({})",
            census.len(),
            field.order(),
            a.n,
            norm.describe()
        );
        sink.text(&line);
        sink.record(&ReportEnvelope::new("header", &config, header, line))?;
    }

    let save = |sink: &mut Sink, next_index: u64, complete: bool| -> CliResult<()> {
        sink.flush()?;
        if let Some((cursor_path, report)) = &cursor_path {
            let byte_offset = fs::metadata(report)?.len();
            write_cursor(cursor_path, &Cursor { next_index, byte_offset, complete, config: persisted.clone() })?;
        }
        Ok(())
    };
    save(&mut sink, start, false)?;

    let mut lo = start;
    while lo < census.len() {
        let hi = (lo + a.chunk).min(census.len());
        let rows = (lo..hi)
            .into_par_iter()
            .map(|i| census_row(&decider, i, &census.candidate(i)))
            .collect::<Result<Vec<_>, _>>()?;
        for row in &rows {
            let violation = row.violation();
            tally.add(row.index, &row.poly, row.decision.verdict.label(), violation.clone());
            if row.is_exceptional() || violation.is_some() {
                sink.text(format_args!(
                    "{:>8}  {}  {}{}",
                    row.index,
                    row.poly,
                    row.decision.verdict.label(),
                    violation.as_deref().map(|v| format!("  VIOLATION: {v}")).unwrap_or_default()
                ));
            }
            sink.record(&Row { record: "candidate", row, violation })?;
        }
        save(&mut sink, hi, false)?;
        lo = hi;
    }

    let summary = Summary {
        total_candidates: census.len(),
        exceptional_count: tally.exceptional.len(),
        exceptional: tally.exceptional,
        inconclusive: tally.inconclusive,
        violations: tally.violations,
    };
    let line = format!(
        "{} candidates, {} exceptional, {} inconclusive, {} violations",
        summary.total_candidates,
        summary.exceptional_count,
        summary.inconclusive,
        summary.violations.len()
    );
    sink.text(&line);
    let status = if !summary.violations.is_empty() {
        Status::Violation
    } else if summary.inconclusive > 0 {
        Status::Inconclusive
    } else {
        Status::Ok
    };
    sink.record(&ReportEnvelope::new("summary", &config, summary, line))?;
    save(&mut sink, census.len(), true)?;
    Ok(status)
}
