//! Command-line verifier: runs the suite, dumps canonical fan JSON, and
//! validates the component tables.
//!
//! Exit codes: 0 when every check passes, 1 when any check fails, 2 on an
//! internal or I/O error.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use burniat_core::cases::{build_case_fan, CaseId};
use burniat_core::degenerations::{builtin_tables_json, load_tables, validate_tables};
use burniat_core::verify::{run_verification, to_markdown};

#[derive(Parser)]
#[command(
    name = "burniat",
    about = "Exact verification of the lattice, group, fan and degeneration \
             data behind the four Burniat-surface moduli compactifications",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Md,
}

#[derive(Subcommand)]
enum Command {
    /// Run the verification suite and emit a report.
    Verify {
        /// Restrict the per-case sections to one case (3, 4a, 4b or 5).
        #[arg(long)]
        case: Option<CaseId>,
        /// Report format.
        #[arg(long, value_enum, default_value = "md")]
        format: Format,
        /// Write the report to a file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Use a tables file instead of the built-in one.
        #[arg(long)]
        tables: Option<PathBuf>,
    },
    /// Write the canonical fan of a case as JSON.
    DumpFan {
        /// Case to dump (3, 4a, 4b or 5).
        #[arg(long)]
        case: CaseId,
        /// Output path.
        #[arg(long)]
        out: PathBuf,
    },
    /// Operate on the component tables.
    Tables {
        /// Validate every table row.
        #[arg(long)]
        validate: bool,
        /// Use a tables file instead of the built-in one.
        #[arg(long)]
        file: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Verify { case, format, out, tables } => {
            let override_json = tables
                .map(|p| {
                    fs::read_to_string(&p)
                        .map_err(|e| format!("cannot read tables file {}: {e}", p.display()))
                })
                .transpose()?;
            let report = run_verification(case, override_json.as_deref())
                .map_err(|e| e.to_string())?;
            let rendered = match format {
                Format::Json => serde_json::to_string_pretty(&report)
                    .map_err(|e| e.to_string())?
                    + "\n",
                Format::Md => to_markdown(&report),
            };
            emit(&rendered, out.as_deref())?;
            if report.has_failures() {
                for check in report
                    .global
                    .iter()
                    .chain(report.cases.iter().flat_map(|c| c.checks.iter()))
                    .filter(|c| c.status == burniat_core::verify::Status::Fail)
                {
                    eprintln!("failed: {}", check.check_id);
                }
                Ok(ExitCode::from(1))
            } else {
                Ok(ExitCode::SUCCESS)
            }
        }
        Command::DumpFan { case, out } => {
            let fan = build_case_fan(case).map_err(|e| e.to_string())?;
            let json = serde_json::to_string_pretty(&fan.canonical())
                .map_err(|e| e.to_string())?
                + "\n";
            fs::write(&out, json)
                .map_err(|e| format!("cannot write {}: {e}", out.display()))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Tables { validate, file } => {
            let json = match &file {
                Some(p) => fs::read_to_string(p)
                    .map_err(|e| format!("cannot read tables file {}: {e}", p.display()))?,
                None => builtin_tables_json().to_string(),
            };
            let tables = load_tables(&json).map_err(|e| e.to_string())?;
            if !validate {
                println!(
                    "{} tables, {} rows",
                    tables.tables.len(),
                    tables.tables.iter().map(|t| t.rows.len()).sum::<usize>()
                );
                return Ok(ExitCode::SUCCESS);
            }
            let validation = validate_tables(&tables);
            for row in &validation.rows {
                let status = if row.pass { "pass" } else { "FAIL" };
                print!(
                    "{} {} {}: volumes sum to {} (expected {})",
                    status, row.table, row.case, row.volume_sum, row.expected_sum
                );
                if row.notes.is_empty() {
                    println!();
                } else {
                    println!(" — {}", row.notes.join("; "));
                }
            }
            if validation.all_pass {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(1))
            }
        }
    }
}

fn emit(text: &str, out: Option<&std::path::Path>) -> Result<(), String> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
