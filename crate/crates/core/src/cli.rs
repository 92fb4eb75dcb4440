//! Command-line front end. The binary is a thin wrapper around [`main_with`].
//!
//! Exit codes: 0 success, 1 I/O, usage or parse error, 2 failed check or uncompilable
//! input, 3 step cap reached with probability left over.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::json;

use crate::compiler::{compile, Stage};
use crate::document::{parse_document, to_document, AnyAutomaton};
use crate::evolution::{default_step_cap, run, run_deterministic, Decision, RunOutcome, StepTrace};
use crate::automaton::expand_simple;
use crate::wellformed::{check_dense_unitarity, check_general, check_reversible, check_simple_unitarity, DEFAULT_TOLERANCE};
use crate::zoo;

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_FAILED: i32 = 2;
pub const EXIT_CAP: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "q1ca", version, about = "Two-way quantum one-counter automata toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check well-formedness of an automaton document.
    Check {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tol: f64,
        /// Also check the evolution operator on this input and the local conditions.
        #[arg(long)]
        input: Option<String>,
        #[arg(long, default_value_t = 4)]
        counter_bound: i64,
    },
    /// Run an automaton on one input.
    Run {
        file: PathBuf,
        #[arg(long)]
        input: String,
        #[arg(long)]
        cap: Option<usize>,
        /// Write one JSON line per step to this file.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Run an automaton on every line of a file.
    Table {
        file: PathBuf,
        #[arg(long)]
        inputs: PathBuf,
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Compile a deterministic automaton.
    Compile {
        file: PathBuf,
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
        #[arg(long, value_enum, default_value_t = StageArg::Reversible)]
        stage: StageArg,
    },
    /// Export a built-in automaton.
    Zoo {
        name: ZooName,
        #[arg(long = "N", default_value_t = 2)]
        branches: usize,
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum StageArg {
    Simple,
    Reversible,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ZooName {
    Square,
    Prod,
    Power2,
    Power,
    Balanced,
}

struct Failure {
    code: i32,
    message: String,
}

fn error(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_ERROR, message: message.into() }
}

type Outcome = Result<i32, Failure>;

/// Result line `accept=<p> reject=<p> residual=<p> steps=<k> halted=<0|1>`.
pub fn outcome_line(o: &RunOutcome) -> String {
    format!(
        "accept={:.9} reject={:.9} residual={:.9} steps={} halted={}",
        o.p_accept, o.p_reject, o.p_residual, o.steps, o.halted as u8
    )
}

fn deterministic_outcome(decision: Decision, steps: usize) -> RunOutcome {
    let (a, r, rest) = match decision {
        Decision::Accept => (1.0, 0.0, 0.0),
        Decision::Reject => (0.0, 1.0, 0.0),
        Decision::Timeout => (0.0, 0.0, 1.0),
    };
    RunOutcome { p_accept: a, p_reject: r, p_residual: rest, steps, halted: decision != Decision::Timeout }
}

fn load(path: &Path) -> Result<AnyAutomaton, Failure> {
    let text = fs::read_to_string(path).map_err(|e| error(format!("{}: {e}", path.display())))?;
    parse_document(&text).map_err(|e| error(format!("{}: {e}", path.display())))
}

fn write_output(path: &Path, text: &str, out: &mut dyn Write) -> Result<(), Failure> {
    if path == Path::new("-") {
        writeln!(out, "{text}").map_err(|e| error(e.to_string()))
    } else {
        fs::write(path, format!("{text}\n")).map_err(|e| error(format!("{}: {e}", path.display())))
    }
}

fn run_one(automaton: &AnyAutomaton, input: &str, cap: Option<usize>, trace: bool) -> Result<(RunOutcome, Option<StepTrace>), String> {
    let cap = cap.unwrap_or_else(|| default_step_cap(input.chars().count()));
    match automaton {
        AnyAutomaton::Simple(m) => run(m, input, cap, trace).map_err(|e| e.to_string()),
        AnyAutomaton::Deterministic(m) => run_deterministic(m, input, cap)
            .map(|(d, steps)| (deterministic_outcome(d, steps), None))
            .map_err(|e| e.to_string()),
    }
}

fn trace_lines(automaton: &AnyAutomaton, trace: &StepTrace) -> String {
    let control = automaton.control();
    let mut text = String::new();
    for (k, step) in trace.steps.iter().enumerate() {
        let terms: Vec<_> = step
            .snapshot
            .iter()
            .map(|(c, a)| json!([control.name(c.state), c.counter, c.head, a.re, a.im]))
            .collect();
        let line = json!({"step": k + 1, "accept": step.accept, "reject": step.reject, "terms": terms});
        text.push_str(&line.to_string());
        text.push('\n');
    }
    text
}

fn cmd_check(file: &Path, tol: f64, input: Option<&str>, bound: i64, out: &mut dyn Write) -> Outcome {
    let automaton = load(file)?;
    let mut passed = true;
    let mut report = String::new();
    match &automaton {
        AnyAutomaton::Deterministic(_) => {
            report.push_str("delta: PASS (total on non-halting states)\n");
        }
        AnyAutomaton::Simple(m) => {
            let unitary = check_simple_unitarity(m, tol);
            passed &= unitary.passed();
            report.push_str(&format!("matrices: {unitary}"));
            report.push_str(&format!("reversible: {}\n", if check_reversible(m).passed() { "yes" } else { "no" }));
            if let Some(word) = input {
                let general = check_general(&expand_simple(m), m.alphabet(), tol);
                passed &= general.passed();
                report.push_str(&format!("local conditions: {general}"));
                let dense = check_dense_unitarity(m, word, bound, tol).map_err(|e| error(e.to_string()))?;
                passed &= dense.passed();
                report.push_str(&format!("operator on {word:?}: {dense}"));
            }
        }
    }
    write!(out, "{report}").map_err(|e| error(e.to_string()))?;
    Ok(if passed { EXIT_OK } else { EXIT_FAILED })
}

fn cmd_run(file: &Path, input: &str, cap: Option<usize>, trace: Option<&Path>, out: &mut dyn Write) -> Outcome {
    let automaton = load(file)?;
    if trace.is_some() && matches!(automaton, AnyAutomaton::Deterministic(_)) {
        return Err(error("--trace requires a simple-2q1ca document"));
    }
    let (outcome, steps) = run_one(&automaton, input, cap, trace.is_some()).map_err(error)?;
    if let (Some(path), Some(steps)) = (trace, steps) {
        fs::write(path, trace_lines(&automaton, &steps)).map_err(|e| error(format!("{}: {e}", path.display())))?;
    }
    writeln!(out, "{}", outcome_line(&outcome)).map_err(|e| error(e.to_string()))?;
    Ok(if outcome.halted { EXIT_OK } else { EXIT_CAP })
}

fn cmd_table(file: &Path, inputs: &Path, cap: Option<usize>, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let automaton = load(file)?;
    let text = fs::read_to_string(inputs).map_err(|e| error(format!("{}: {e}", inputs.display())))?;
    let words: Vec<&str> = text.lines().collect();
    let rows: Vec<_> = words.par_iter().map(|w| run_one(&automaton, w, cap, false)).collect();
    let mut code = EXIT_OK;
    for (word, row) in words.iter().zip(rows) {
        let line = match row {
            Ok((o, _)) => {
                if !o.halted && code == EXIT_OK {
                    code = EXIT_CAP;
                }
                format!("input={word} {}", outcome_line(&o))
            }
            Err(e) => {
                code = EXIT_ERROR;
                let _ = writeln!(err, "input {word:?}: {e}");
                format!("input={word} error")
            }
        };
        writeln!(out, "{line}").map_err(|e| error(e.to_string()))?;
    }
    Ok(code)
}

fn cmd_compile(file: &Path, output: &Path, stage: StageArg, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let AnyAutomaton::Deterministic(source) = load(file)? else {
        return Err(Failure { code: EXIT_FAILED, message: "only 2d1ca documents can be compiled".into() });
    };
    let stage = match stage {
        StageArg::Simple => Stage::Simple,
        StageArg::Reversible => Stage::Reversible,
    };
    // The reversible stage is verified inside `compile`. The intermediate stage is only
    // reversible when the source already is, so it is reported rather than enforced.
    let compiled = compile(&source, stage).map_err(|e| Failure { code: EXIT_FAILED, message: e.to_string() })?;
    if stage == Stage::Simple && !check_reversible(&compiled).passed() {
        let _ = writeln!(err, "note: simple stage output is not reversible; compile with --stage reversible for a unitary machine");
    }
    write_output(output, &to_document(&AnyAutomaton::Simple(compiled)), out)?;
    Ok(EXIT_OK)
}

fn cmd_zoo(name: ZooName, branches: usize, output: &Path, out: &mut dyn Write) -> Outcome {
    let built = match name {
        ZooName::Square => zoo::build_square(branches).map(AnyAutomaton::Simple),
        ZooName::Prod => zoo::build_prod(branches).map(AnyAutomaton::Simple),
        ZooName::Power2 => zoo::build_power_of_two().map(AnyAutomaton::Simple),
        ZooName::Power => zoo::build_power(branches).map(AnyAutomaton::Simple),
        ZooName::Balanced => Ok(AnyAutomaton::Deterministic(zoo::build_balanced_2d1ca())),
    };
    let automaton = built.map_err(|e| error(e.to_string()))?;
    write_output(output, &to_document(&automaton), out)?;
    Ok(EXIT_OK)
}

/// Parses `args` (including the program name), runs the command and returns the exit
/// code. Results go to `out`, diagnostics to `err`.
pub fn main_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                EXIT_ERROR
            } else {
                let _ = write!(out, "{text}");
                EXIT_OK
            };
        }
    };
    let result = match &cli.command {
        Command::Check { file, tol, input, counter_bound } => cmd_check(file, *tol, input.as_deref(), *counter_bound, out),
        Command::Run { file, input, cap, trace } => cmd_run(file, input, *cap, trace.as_deref(), out),
        Command::Table { file, inputs, cap } => cmd_table(file, inputs, *cap, out, err),
        Command::Compile { file, output, stage } => cmd_compile(file, output, *stage, out, err),
        Command::Zoo { name, branches, output } => cmd_zoo(*name, *branches, output, out),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}
