//! `excmap`: decide exceptionality of maps over finite fields, run censuses,
//! and evaluate the monodromy-triple and tame-extension batteries.
//!
//! Exit codes: 0 decided or all checks agree, 1 a check disagreed or a
//! census found a violation, 2 usage or input error, 3 inconclusive.

mod commands;
mod report;
mod scan;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Parser, Debug)]
#[command(name = "excmap", version, about = "Exceptional maps over finite fields and tame local extensions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide whether a map is exceptional, with a certificate.
    Exceptional(MapArgs),
    /// Classify every normalized polynomial of one degree.
    Scan(ScanArgs),
    /// Ramification profile of a map and the coprimality checks.
    Ramify(MapArgs),
    /// Evaluate the equivalence batteries on a triple file.
    Triple(TripleArgs),
    /// Coprime battery and triple battery of one tame model.
    Tame(TameArgs),
    /// Tame batteries and sub-extension checks over ranges of n and q.
    Sweep(SweepArgs),
    /// m-th root of a 1-unit Laurent series.
    Root(RootArgs),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Args, Debug, Clone)]
pub struct Output {
    /// Output format on stdout.
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Directory receiving append-only JSONL reports.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads (default: available parallelism).
    #[arg(long)]
    pub jobs: Option<usize>,
}

#[derive(Args, Debug, Clone)]
pub struct DecideArgs {
    /// Scan this many extension degrees instead of the sound window.
    #[arg(long)]
    pub window: Option<u32>,
    /// Require q^k > d^4 rather than q^k >= d^4.
    #[arg(long)]
    pub strict_bound: bool,
    /// Largest extension field enumerated.
    #[arg(long, default_value_t = excmap_core::field::ENUMERATION_CAP)]
    pub cap: u64,
}

#[derive(Args, Debug, Clone)]
pub struct MapArgs {
    /// Map literal, e.g. "x^3+x over GF(3)" or "(2*x+1)/(x+1)".
    pub map: String,
    /// Field order, when the literal has no "over GF(q)".
    #[arg(long)]
    pub q: Option<u64>,
    /// Characteristic, with --n, when the literal has no "over GF(q)".
    #[arg(long)]
    pub p: Option<u64>,
    /// Extension degree of the field over F_p, with --p.
    #[arg(long)]
    pub n: Option<u32>,
    #[command(flatten)]
    pub decide: DecideArgs,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug, Clone)]
pub struct ScanArgs {
    /// Field order.
    #[arg(long, required_unless_present = "p")]
    pub q: Option<u64>,
    /// Prime field order, instead of --q.
    #[arg(long, conflicts_with = "q")]
    pub p: Option<u64>,
    /// Polynomial degree.
    #[arg(long, visible_alias = "degree")]
    pub n: usize,
    /// Enumerate every polynomial instead of the monic, constant-free ones.
    #[arg(long)]
    pub full: bool,
    /// Continue an interrupted scan from its cursor file (needs --out).
    #[arg(long, requires = "out")]
    pub resume: bool,
    /// Largest number of candidates.
    #[arg(long, default_value_t = excmap_core::exceptional::CENSUS_CAP)]
    pub census_cap: u64,
    /// Candidates per durable chunk.
    #[arg(long, hide = true, default_value_t = 4096, value_parser = clap::value_parser!(u64).range(1..))]
    pub chunk: u64,
    #[command(flatten)]
    pub decide: DecideArgs,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug, Clone)]
pub struct TripleArgs {
    /// JSON file {"n", "gens_A", "gens_G", "frob", "base"}.
    pub file: PathBuf,
    /// Largest group order enumerated.
    #[arg(long, default_value_t = excmap_core::group::GROUP_CAP)]
    pub cap: usize,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug, Clone)]
pub struct TameArgs {
    #[arg(long)]
    pub n: u64,
    #[arg(long)]
    pub q: u64,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug, Clone)]
pub struct SweepArgs {
    /// Largest extension degree.
    #[arg(long, default_value_t = 12)]
    pub n: u64,
    /// Residue field orders.
    #[arg(long, value_delimiter = ',', default_values_t = [2, 3, 4, 5, 7, 8, 9, 11, 13])]
    pub q: Vec<u64>,
    /// Largest group order enumerated.
    #[arg(long, default_value_t = excmap_core::group::GROUP_CAP)]
    pub cap: usize,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug, Clone)]
pub struct RootArgs {
    /// Series literal, e.g. "1 + t over GF(3) prec 64".
    pub series: String,
    /// Root order m, prime to the characteristic.
    #[arg(long, visible_alias = "m")]
    pub degree: u64,
    /// Working precision, overriding the literal's.
    #[arg(long)]
    pub prec: Option<usize>,
    #[command(flatten)]
    pub output: Output,
}

/// Result class of a run, mapped to the exit code.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    Violation,
    Usage,
    Inconclusive,
}

impl Status {
    fn code(self) -> u8 {
        match self {
            Status::Ok => 0,
            Status::Violation => 1,
            Status::Usage => 2,
            Status::Inconclusive => 3,
        }
    }

    pub fn worst(self, other: Status) -> Status {
        let rank = |s: Status| match s {
            Status::Ok => 0,
            Status::Inconclusive => 1,
            Status::Violation => 2,
            Status::Usage => 3,
        };
        if rank(other) > rank(self) {
            other
        } else {
            self
        }
    }
}

fn set_jobs(output: &Output) {
    if let Some(j) = output.jobs.filter(|&j| j > 0) {
        // fails only if a pool already exists, which is harmless
        let _ = rayon::ThreadPoolBuilder::new().num_threads(j).build_global();
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Exceptional(a) => {
            set_jobs(&a.output);
            commands::exceptional(a)
        }
        Command::Scan(a) => {
            set_jobs(&a.output);
            scan::run(a)
        }
        Command::Ramify(a) => {
            set_jobs(&a.output);
            commands::ramify(a)
        }
        Command::Triple(a) => commands::triple(a),
        Command::Tame(a) => commands::tame(a),
        Command::Sweep(a) => {
            set_jobs(&a.output);
            commands::sweep(a)
        }
        Command::Root(a) => commands::root(a),
    };
    let status = result.unwrap_or_else(|e| {
        eprintln!("excmap: {e}");
        Status::Usage
    });
    ExitCode::from(status.code())
}
