//! The `jdirac` command-line tool.
//!
//! Exit status: 0 when every check passes, 1 when a verification verdict
//! fails (including refusals on unverified input), 2 on input or parse errors.

mod commands;
pub mod format;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::Error;
use crate::report::CheckReport;

pub use format::{parse, DistributionBlock, StructureFile};

#[derive(Parser, Debug)]
#[command(
    name = "jdirac",
    version,
    about = "Exact checks for Jacobi structures, Dirac structures and Jacobi reduction"
)]
pub struct Cli {
    /// Emit one JSON document instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Verify [Λ,Λ] + 2E∧Λ = 0 and [E,Λ] = 0 for the [jacobi] block.
    CheckJacobi { file: PathBuf },
    /// Check that D ⊕ graph(Ω^#|D⊥) is a Dirac structure.
    CheckDirac {
        file: PathBuf,
        /// Distribution block to use as D (default: D = 0).
        #[arg(long)]
        distribution: Option<String>,
        /// Use the [omega] block as Ω (default: Ω = 0).
        #[arg(long)]
        omega: bool,
    },
    /// Bracket of two functions.
    Bracket {
        file: PathBuf,
        #[arg(long = "f")]
        f: String,
        #[arg(long = "g")]
        g: String,
        #[arg(long, value_enum, default_value = "crJ")]
        mode: BracketArg,
        /// Distribution block for --mode L.
        #[arg(long)]
        distribution: Option<String>,
        /// Use the [omega] block for --mode L.
        #[arg(long)]
        omega: bool,
    },
    /// Run the Courant algebroid axiom suite on random sections.
    CourantAxioms {
        file: PathBuf,
        #[arg(long, default_value_t = 50)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Reduce by a distribution, optionally after restricting to the [submanifold] block.
    Reduce {
        file: PathBuf,
        #[arg(long)]
        distribution: Option<String>,
        /// Use the [omega] block as Ω.
        #[arg(long)]
        omega: bool,
        /// Restrict to the [submanifold] block first.
        #[arg(long)]
        submanifold: bool,
    },
    /// Build the Dirac structure inducing the [quotient] structure.
    BuildL {
        file: PathBuf,
        #[arg(long)]
        distribution: Option<String>,
    },
    /// Reduce by the fundamental fields listed in a distribution block.
    SymmetryReduce {
        file: PathBuf,
        /// Distribution block holding the fundamental vector fields.
        #[arg(long)]
        fields: String,
        #[arg(long)]
        submanifold: bool,
    },
    /// Check the submanifold conditions for the [submanifold] block.
    CheckSubmanifold {
        file: PathBuf,
        #[arg(long, value_enum)]
        case: CaseArg,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BracketArg {
    /// Λ(δf,δg) + fE(g) − gE(f)
    #[value(name = "crJ")]
    CrJ,
    /// ⟨d^φ f, d_*^W g⟩
    #[value(name = "J")]
    J,
    /// Bracket of admissible functions of a Dirac structure
    #[value(name = "L")]
    L,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CaseArg {
    First,
    Second,
}

/// A named value produced by a command.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Entry {
    pub key: String,
    pub value: String,
}

/// Everything a command prints.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Output {
    pub command: String,
    pub reports: Vec<CheckReport>,
    pub results: Vec<Entry>,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub exit: i32,
}

impl Output {
    fn render_text(&self) -> String {
        let mut s = String::new();
        for r in &self.reports {
            s.push_str(&r.to_string());
            s.push('\n');
        }
        if !self.results.is_empty() {
            s.push_str("results\n");
            for e in &self.results {
                s.push_str(&format!("  {} = {}\n", e.key, e.value));
            }
        }
        if self.error.is_none() {
            s.push_str(if self.passed {
                "result: PASS\n"
            } else {
                "result: FAIL\n"
            });
        }
        s
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::StructureNotVerified(_)
        | Error::NotCocycle(_)
        | Error::Inadmissible(_)
        | Error::Refused(_) => 1,
        _ => 2,
    }
}

/// Run a parsed command line. Returns the exit status, standard output and
/// standard error.
pub fn run(cli: &Cli, echo: &str) -> (i32, String, String) {
    let mut out = Output {
        command: echo.to_string(),
        reports: Vec::new(),
        results: Vec::new(),
        passed: true,
        error: None,
        exit: 0,
    };
    let mut stderr = String::new();
    match commands::dispatch(&cli.command, &mut out) {
        Ok(()) => {
            out.passed = out.reports.iter().all(|r| r.passed()) && out.passed;
            out.exit = if out.passed { 0 } else { 1 };
        }
        Err(e) => {
            out.passed = false;
            out.exit = exit_code(&e);
            out.error = Some(e.to_string());
            stderr = format!("error: {e}\n");
        }
    }
    let stdout = if cli.json {
        serde_json::to_string_pretty(&out).expect("serializable") + "\n"
    } else {
        out.render_text()
    };
    (out.exit, stdout, stderr)
}

/// Entry point of the binary.
pub fn main() -> i32 {
    let args: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let (code, stdout, stderr) = run(&cli, &args[1..].join(" "));
    print!("{stdout}");
    eprint!("{stderr}");
    code
}
