//! The `freeset-lab` command line: every construction and oracle of
//! `freeset-core` behind a subcommand, JSON in and out, and seeded batch runs.
//!
//! Each subcommand builds its answer with the core library and then
//! re-derives the verdict with the direct scans in [`verify`]. The report's
//! `ok` field is true exactly when that second pass finds no violations.

pub mod batch;
pub mod commands;
pub mod input;
pub mod verify;

use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::Value;

use crate::batch::BatchOp;
use crate::input::InputError;

/// Version of the report layout.
pub const SCHEMA: u32 = 1;

#[derive(Debug, Parser)]
#[command(name = "freeset-lab", version, about = "Free sets of fixed-point-free functions on finite windows")]
pub struct Cli {
    /// Also write the report to this file.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Exact,
    Greedy,
}

impl From<Mode> for freeset_core::freesets::SearchMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Exact => Self::Exact,
            Mode::Greedy => Self::Greedy,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Orbit decomposition of an injective function.
    Orbits {
        #[arg(long = "fn")]
        func: String,
    },
    /// Largest free set for a family of functions, or a check of a given set.
    Free {
        #[arg(long = "fn", required = true)]
        funcs: Vec<String>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, value_enum, default_value = "exact")]
        mode: Mode,
        /// Check this set instead of searching.
        #[arg(long)]
        set: Option<String>,
        /// Allowed size of each `f[A] ∩ A` when checking a set.
        #[arg(long, default_value_t = 0)]
        threshold: usize,
    },
    /// Three-colouring with no monochromatic edge.
    Katetov {
        #[arg(long = "fn")]
        func: String,
    },
    /// Involution covers of injections.
    Involutions {
        #[command(subcommand)]
        op: InvolutionsOp,
    },
    /// Fragmenting sets of nonnegative matrices.
    Rosenthal {
        #[command(subcommand)]
        op: RosenthalOp,
    },
    /// Interval partitions and partition functions.
    Partition {
        #[command(subcommand)]
        op: PartitionOp,
    },
    /// Counts blocks of `--i` holding no complete block of `--j`.
    Dominates {
        #[arg(long)]
        i: String,
        #[arg(long)]
        j: String,
        #[arg(long)]
        n: Option<usize>,
        /// Allowed number of undominated blocks.
        #[arg(long, default_value_t = 0)]
        threshold: usize,
    },
    /// Coded block systems of a growth function.
    Blocks {
        #[command(subcommand)]
        op: BlocksOp,
    },
    /// Measured blocks, bad sets and level membership.
    Ed {
        #[command(subcommand)]
        op: EdOp,
    },
    /// Exhaustive reference searches on small windows.
    Oracle {
        #[command(subcommand)]
        op: OracleOp,
    },
    /// Seeded instances checked in parallel.
    Batch {
        #[arg(long, value_enum)]
        op: BatchOp,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long, default_value = "2")]
        g: String,
        /// Selectors drawn per function for `ed-selector`.
        #[arg(long, default_value_t = 100)]
        selectors: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum InvolutionsOp {
    /// Four involutions covering the in-window edges of an injection.
    Decompose {
        #[arg(long = "fn")]
        func: String,
    },
    /// Glue four involutions along odd blocks.
    Combine {
        /// JSON array of four involutions.
        #[arg(long)]
        parts: String,
        #[arg(long)]
        blocks: String,
        /// JSON array with one part index per block.
        #[arg(long)]
        colors: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum RosenthalOp {
    /// Whether `--set` ε-fragments the matrix.
    Check {
        #[arg(long)]
        matrix: String,
        #[arg(long)]
        set: String,
        #[arg(long, default_value = "1/1")]
        eps: String,
    },
    /// Search for a large fragmenting set.
    Search {
        #[arg(long)]
        matrix: String,
        #[arg(long, default_value = "1/1")]
        eps: String,
        #[arg(long, default_value_t = 0)]
        min_size: usize,
        #[arg(long, value_enum, default_value = "exact")]
        mode: Mode,
    },
}

#[derive(Debug, Subcommand)]
pub enum PartitionOp {
    /// The function of a partition into parts.
    Fp {
        #[arg(long)]
        parts: String,
    },
    /// Escape intervals of a function.
    Escape {
        #[arg(long = "fn")]
        func: String,
    },
    /// Restrict a function to the blocks cut out by a set.
    Localize {
        #[arg(long = "fn")]
        func: String,
        #[arg(long)]
        set: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum BlocksOp {
    /// Endpoints and block sizes.
    Build {
        #[arg(long, default_value = "2")]
        g: String,
        #[arg(long)]
        depth: usize,
    },
    /// Check both claims for one coded set, or for all of them.
    Verify {
        #[arg(long, default_value = "2")]
        g: String,
        #[arg(long)]
        depth: usize,
        #[arg(long = "fn")]
        func: String,
        /// JSON array `h` over the I-positions; all `h` when omitted.
        #[arg(long)]
        h: Option<String>,
    },
}

#[derive(Debug, Subcommand)]
pub enum EdOp {
    /// Block sizes and singleton measures.
    Build {
        #[arg(long)]
        depth: usize,
        /// Blocks of size n with counting measure.
        #[arg(long)]
        fin: bool,
    },
    /// Bad set of a function in every block, with its measure.
    Badset {
        #[arg(long)]
        depth: usize,
        #[arg(long = "fn")]
        func: String,
    },
    /// Whether a set has measure at most the threshold in every block.
    Member {
        #[arg(long)]
        depth: usize,
        #[arg(long)]
        set: String,
        /// Level k as `p/q`.
        #[arg(long, default_value = "1")]
        threshold: String,
        #[arg(long)]
        fin: bool,
    },
}

#[derive(Debug, Subcommand)]
pub enum OracleOp {
    /// Exhaustive maximum free set; with `--set`, also checks that set.
    Freeset {
        #[arg(long = "fn", required = true)]
        funcs: Vec<String>,
        #[arg(long)]
        set: Option<String>,
    },
    /// Largest set monochromatic in every colouring.
    Unsplit {
        /// JSON array of colourings.
        #[arg(long)]
        colorings: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 1)]
        min_size: usize,
    },
}

/// A result plus whatever the verifier pass objected to.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub result: Value,
    pub violations: Vec<Value>,
}

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub schema: u32,
    pub command: Vec<String>,
    pub ok: bool,
    pub result: Value,
    pub violations: Vec<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub elapsed_ms: u64,
}

#[derive(Debug)]
pub struct RunOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// The argument list minus the program name and `--out`.
fn echo(args: &[String]) -> Vec<String> {
    let mut out = Vec::new();
    let mut skip = false;
    for a in args.iter().skip(1) {
        if skip {
            skip = false;
        } else if a == "--out" {
            skip = true;
        } else if !a.starts_with("--out=") {
            out.push(a.clone());
        }
    }
    out
}

fn render(report: &RunReport) -> String {
    serde_json::to_string_pretty(report).expect("report serialises") + "\n"
}

/// Parses `args` (program name first), runs the command, and renders the
/// report. Exit codes: 0 ok, 1 property violation, 2 malformed input.
pub fn run(args: Vec<String>) -> RunOutput {
    let start = Instant::now();
    let command = echo(&args);
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return RunOutput { code: 0, stdout: e.to_string(), stderr: String::new() };
            }
            let report = RunReport {
                schema: SCHEMA,
                command,
                ok: false,
                result: Value::Null,
                violations: Vec::new(),
                error: Some(e.kind().to_string()),
                elapsed_ms: start.elapsed().as_millis() as u64,
            };
            return RunOutput { code: 2, stdout: render(&report), stderr: e.render().to_string() };
        }
    };

    let (code, report) = match commands::dispatch(&cli.command) {
        Ok(outcome) => {
            let ok = outcome.violations.is_empty();
            let report = RunReport {
                schema: SCHEMA,
                command,
                ok,
                result: outcome.result,
                violations: outcome.violations,
                error: None,
                elapsed_ms: start.elapsed().as_millis() as u64,
            };
            (if ok { 0 } else { 1 }, report)
        }
        Err(InputError(msg)) => {
            let report = RunReport {
                schema: SCHEMA,
                command,
                ok: false,
                result: Value::Null,
                violations: Vec::new(),
                error: Some(msg),
                elapsed_ms: start.elapsed().as_millis() as u64,
            };
            (2, report)
        }
    };
    let text = render(&report);
    let mut stderr = report.error.clone().map(|e| format!("error: {e}\n")).unwrap_or_default();
    if let Some(path) = cli.out {
        if let Err(e) = std::fs::write(&path, &text) {
            stderr.push_str(&format!("error: cannot write {}: {e}\n", path.display()));
            return RunOutput { code: 2, stdout: text, stderr };
        }
    }
    RunOutput { code, stdout: text, stderr }
}

/// Drops the `elapsed_ms` field so two reports can be compared byte for byte.
pub fn without_timing(report: &str) -> String {
    report.lines().filter(|l| !l.trim_start().starts_with("\"elapsed_ms\"")).collect::<Vec<_>>().join("\n")
}
