//! Argument parsing and dispatch.

use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde_json::json;

use crate::commands::{self, Report};
use crate::error::{CliError, Result, EXIT_INPUT};
use crate::fixture::PaperFixture;
use crate::input::{parse_coeff_list, parse_input, read_input, Input};
use crate::lfunction;
use crate::record::render;
use crate::verify::{self, VerifyOptions};

#[derive(Debug, Parser)]
#[command(name = "expsum", version, about = "Newton polytopes, Hodge data and exact L-functions of toric exponential sums")]
pub struct Cli {
    /// Emit a machine record (JSON) instead of a table.
    #[arg(long, global = true)]
    pub json: bool,
    /// Input document; `verify-paper` ignores it.
    #[arg(long, global = true, value_name = "FILE")]
    pub input: Option<PathBuf>,
    #[arg(long, global = true, value_name = "P")]
    pub prime: Option<u64>,
    #[arg(long, global = true, value_name = "K")]
    pub kmax: Option<u32>,
    /// Use the Kloosterman-table path (g only).
    #[arg(long, global = true)]
    pub fast: bool,
    /// Comma-separated coefficients: one per term, or a1..a6 for g.
    #[arg(long, global = true, value_name = "LIST", allow_hyphen_values = true)]
    pub coeffs: Option<String>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Vertices, facets and the face lattice.
    Polytope,
    /// D, W(k), H(k), the Hodge polygon and P(Δ).
    Hodge,
    /// Facial ordinariness verdict at --prime.
    Ordinary,
    /// The conjectural weight counts, against the reference ledger for g.
    Conjecture {
        #[arg(long)]
        k: Option<usize>,
    },
    /// Exact sums and L-polynomials at --prime.
    Lfunction,
    /// Reproduces every expected value for g.
    VerifyPaper {
        /// Replacement expected-values record.
        #[arg(long, value_name = "FILE")]
        expected: Option<PathBuf>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Polytope => "polytope",
            Command::Hodge => "hodge",
            Command::Ordinary => "ordinary",
            Command::Conjecture { .. } => "conjecture",
            Command::Lfunction => "lfunction",
            Command::VerifyPaper { .. } => "verify-paper",
        }
    }
}

fn load(cli: &Cli) -> Result<Input> {
    let mut input = match &cli.input {
        Some(path) => read_input(path)?,
        None => return Err(CliError::Input(format!("{} needs --input FILE", cli.command.name()))),
    };
    if let Some(list) = &cli.coeffs {
        input.spec = commands::apply_coeffs(&input.spec, &parse_coeff_list(list)?)?;
    }
    Ok(input)
}

fn dispatch(cli: &Cli) -> Result<Report> {
    match &cli.command {
        Command::VerifyPaper { expected } => {
            let fixture = match expected {
                Some(path) => PaperFixture::load(path)?,
                None => PaperFixture::builtin(),
            };
            let mut opts = VerifyOptions::default();
            if let Some(p) = cli.prime {
                opts.p = expsum_core::exact::require_prime(p)?;
            }
            if let Some(k) = cli.kmax {
                opts.kmax = k;
            }
            if let Some(list) = &cli.coeffs {
                let a = parse_coeff_list(list)?;
                opts.a = a
                    .try_into()
                    .map_err(|a: Vec<i64>| CliError::Input(format!("--coeffs needs a1..a6, got {} values", a.len())))?;
            }
            verify::report(&fixture, &opts)
        }
        Command::Polytope => commands::polytope(&load(cli)?.spec),
        Command::Hodge => commands::hodge(&load(cli)?.spec, cli.kmax),
        Command::Ordinary => {
            let input = load(cli)?;
            let p = commands::resolve_prime(cli.prime, input.p, "ordinary")?;
            commands::ordinary(&input.spec, p)
        }
        Command::Conjecture { k } => commands::conjecture(&load(cli)?.spec, *k, &PaperFixture::builtin()),
        Command::Lfunction => {
            let input = load(cli)?;
            let p = commands::resolve_prime(cli.prime, input.p, "lfunction")?;
            lfunction::lfunction(&input.spec, p, cli.kmax, cli.fast)
        }
    }
}

/// What the process prints and returns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub exit: i32,
}

pub fn run(cli: &Cli) -> Outcome {
    let report = match dispatch(cli) {
        Ok(r) => r,
        Err(CliError::Core(expsum_core::Error::Unsupported(reason))) => Report::unsupported(cli.command.name(), &reason),
        Err(e) => {
            let exit = e.exit_code();
            let stdout = if cli.json {
                render(&json!({ "command": cli.command.name(), "status": "error", "exit": exit, "message": e.to_string() }))
            } else {
                String::new()
            };
            return Outcome { stdout, stderr: format!("error: {e}\n"), exit };
        }
    };
    let stdout = if cli.json { render(&report.record) } else { report.text };
    Outcome { stdout, stderr: String::new(), exit: report.exit }
}

/// Parses `args` (including the program name) and runs; clap errors map to exit 2.
pub fn run_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let exit = if e.use_stderr() { EXIT_INPUT } else { 0 };
            let text = e.render().to_string();
            if e.use_stderr() {
                Outcome { stdout: String::new(), stderr: text, exit }
            } else {
                Outcome { stdout: text, stderr: String::new(), exit }
            }
        }
    }
}

/// Parses an inline document, for callers that do not go through files.
pub fn parse_document(text: &str) -> Result<Input> {
    parse_input(text)
}
