//! Command dispatch for the `dfacons` binary.
//!
//! Each command writes to caller-supplied streams and returns the process
//! exit code, so the whole surface is testable in-process.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::mpsc;
use std::thread;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::automata::{is_consistent, to_dot, Verdict};
use crate::cnf::{parse_dimacs, Assignment};
use crate::counterexamples::run_all;
use crate::formats::{parse_dfa, parse_sample, write_dfa, write_sample};
use crate::reduction::{dlh_reduce_with_bound, extract_assignment, gold_reduce, witness_dfa, DlhBound};
use crate::solver::{find_consistent_dfa_with, SolverOptions};

pub const EXIT_OK: i32 = 0;
/// `check` found a misclassified word; `verify-paper` had a failure.
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
/// Unreadable or malformed input, or a violated precondition.
pub const EXIT_INPUT: i32 = 3;
pub const EXIT_UNSAT: i32 = 20;
pub const EXIT_UNKNOWN: i32 = 30;

pub const DEFAULT_BUDGET_SECONDS: u64 = 60;

#[derive(Debug, Parser)]
#[command(name = "dfacons", version, about = "DFA consistency: reductions, exact solving, and published counterexamples")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConstructionArg {
    Gold,
    Dlh,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BoundArg {
    /// n states
    N,
    /// n + 1 states
    #[value(name = "n+1")]
    NPlusOne,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Reduce a pure CNF (DIMACS) to a DFA-consistency sample file.
    Reduce {
        cnf: PathBuf,
        #[arg(long, value_enum, default_value = "gold")]
        construction: ConstructionArg,
        /// State bound reported for the dlh construction.
        #[arg(long, value_enum, default_value = "n")]
        dlh_bound: BoundArg,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Decide whether a DFA with at most k states is consistent with a sample.
    Solve {
        sample: PathBuf,
        #[arg(long)]
        k: usize,
        /// Wall-clock budget in seconds.
        #[arg(long, default_value_t = DEFAULT_BUDGET_SECONDS)]
        budget: u64,
        /// Also print the automaton as DOT.
        #[arg(long)]
        dot: bool,
        /// Search top-level branches in parallel.
        #[arg(long)]
        parallel: bool,
        /// Emit a JSON record instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Check a DFA file against a sample file.
    Check { sample: PathBuf, dfa: PathBuf },
    /// Build the witness DFA of the cycle reduction from an assignment such as 011.
    Witness {
        cnf: PathBuf,
        assignment: String,
        /// DFA file to write; standard output when omitted.
        #[arg(short, long)]
        out: Option<PathBuf>,
        /// DOT file to write.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Read a satisfying assignment off a consistent DFA of the cycle reduction.
    Extract { cnf: PathBuf, dfa: PathBuf },
    /// Re-run every published counterexample and the reduction sanity check.
    VerifyPaper {
        /// One JSON record per report.
        #[arg(long)]
        json: bool,
    },
}

fn read(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))
}

fn write_file(path: &Path, contents: &str) -> Result<(), String> {
    fs::write(path, contents).map_err(|e| format!("cannot write {}: {e}", path.display()))
}

/// Runs `body`, turning an `Err` message into a diagnostic and [`EXIT_INPUT`].
fn guarded(err: &mut dyn Write, body: impl FnOnce() -> Result<i32, String>) -> i32 {
    match body() {
        Ok(code) => code,
        Err(message) => {
            let _ = writeln!(err, "error: {message}");
            EXIT_INPUT
        }
    }
}

pub fn cmd_reduce(
    cnf_path: &Path,
    construction: ConstructionArg,
    bound: BoundArg,
    out_path: &Path,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    guarded(err, || {
        let cnf = parse_dimacs(&read(cnf_path)?).map_err(|e| e.to_string())?;
        let instance = match construction {
            ConstructionArg::Gold => gold_reduce(&cnf),
            ConstructionArg::Dlh => dlh_reduce_with_bound(
                &cnf,
                match bound {
                    BoundArg::N => DlhBound::Variables,
                    BoundArg::NPlusOne => DlhBound::VariablesPlusOne,
                },
            ),
        };
        write_file(out_path, &write_sample(&instance.sample))?;
        let _ = writeln!(
            out,
            "k={} |P|={} |N|={}",
            instance.k,
            instance.sample.positives().len(),
            instance.sample.negatives().len()
        );
        Ok(EXIT_OK)
    })
}

pub struct SolveArgs<'a> {
    pub sample: &'a Path,
    pub k: usize,
    pub budget: Duration,
    pub dot: bool,
    pub parallel: bool,
    pub json: bool,
}

pub fn cmd_solve(args: SolveArgs<'_>, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    if args.k == 0 {
        let _ = writeln!(err, "error: --k must be at least 1");
        return EXIT_USAGE;
    }
    guarded(err, || {
        let sample = parse_sample(&read(args.sample)?).map_err(|e| e.to_string())?;
        let (sender, receiver) = mpsc::channel();
        let (k, options) = (args.k, SolverOptions { parallel: args.parallel });
        let worker_sample = sample.clone();
        thread::spawn(move || {
            let _ = sender.send(find_consistent_dfa_with(&worker_sample, k, options));
        });
        let outcome = receiver.recv_timeout(args.budget);
        let (status, code, dfa) = match outcome {
            Ok(Some(dfa)) => ("SAT", EXIT_OK, Some(dfa)),
            Ok(None) => ("UNSAT", EXIT_UNSAT, None),
            Err(mpsc::RecvTimeoutError::Timeout) => ("UNKNOWN", EXIT_UNKNOWN, None),
            Err(mpsc::RecvTimeoutError::Disconnected) => return Err("solver thread panicked".into()),
        };
        if args.json {
            let record = json!({
                "result": status,
                "k": k,
                "states": dfa.as_ref().map(|d| d.state_count()),
                "dfa": dfa.as_ref().map(write_dfa),
                "dot": dfa.as_ref().filter(|_| args.dot).map(|d| to_dot(d, None)),
            });
            let _ = writeln!(out, "{record}");
        } else {
            let _ = writeln!(out, "{status}");
            if let Some(dfa) = &dfa {
                let _ = write!(out, "{}", write_dfa(dfa));
                if args.dot {
                    let _ = write!(out, "{}", to_dot(dfa, None));
                }
            }
        }
        Ok(code)
    })
}

pub fn cmd_check(sample_path: &Path, dfa_path: &Path, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    guarded(err, || {
        let sample = parse_sample(&read(sample_path)?).map_err(|e| e.to_string())?;
        let dfa = parse_dfa(&read(dfa_path)?, sample.alphabet()).map_err(|e| e.to_string())?;
        match is_consistent(&dfa, &sample).map_err(|e| e.to_string())? {
            Verdict::Consistent => {
                let _ = writeln!(out, "CONSISTENT");
                Ok(EXIT_OK)
            }
            Verdict::Violation { word, label } => {
                let _ = writeln!(out, "VIOLATION {} {label}", sample.alphabet().render(&word));
                Ok(EXIT_FAILED)
            }
        }
    })
}

pub fn cmd_witness(
    cnf_path: &Path,
    assignment: &str,
    out_path: Option<&Path>,
    dot_path: Option<&Path>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    guarded(err, || {
        let cnf = parse_dimacs(&read(cnf_path)?).map_err(|e| e.to_string())?;
        let beta = Assignment::parse_bits(assignment)
            .ok_or_else(|| format!("assignment '{assignment}' must consist of 0 and 1"))?;
        let dfa = witness_dfa(&cnf, &beta).map_err(|e| e.to_string())?;
        let table = write_dfa(&dfa);
        match out_path {
            Some(path) => write_file(path, &table)?,
            None => {
                let _ = write!(out, "{table}");
            }
        }
        if let Some(path) = dot_path {
            write_file(path, &to_dot(&dfa, None))?;
        }
        Ok(EXIT_OK)
    })
}

pub fn cmd_extract(cnf_path: &Path, dfa_path: &Path, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    guarded(err, || {
        let cnf = parse_dimacs(&read(cnf_path)?).map_err(|e| e.to_string())?;
        let dfa = parse_dfa(&read(dfa_path)?, &crate::automata::Alphabet::binary())
            .map_err(|e| e.to_string())?;
        let beta = extract_assignment(&cnf, &dfa).map_err(|e| e.to_string())?;
        let verdict = if cnf.evaluate(&beta).map_err(|e| e.to_string())? {
            "SATISFIES"
        } else {
            "FALSIFIES"
        };
        let _ = writeln!(out, "{beta} {verdict}");
        Ok(EXIT_OK)
    })
}

pub fn cmd_verify_paper(json: bool, out: &mut dyn Write) -> i32 {
    let mut all_passed = true;
    for (name, result, elapsed) in run_all() {
        let millis = elapsed.as_secs_f64() * 1000.0;
        match result {
            Ok(report) => {
                if json {
                    let record = json!({ "status": "PASS", "millis": millis, "report": report });
                    let _ = writeln!(out, "{record}");
                } else {
                    let _ = writeln!(out, "{name:<16} {:<22} PASS  {millis:8.1} ms", report.outcome);
                }
            }
            Err(e) => {
                all_passed = false;
                if json {
                    let record = json!({ "name": name, "status": "FAIL", "millis": millis, "error": e.to_string() });
                    let _ = writeln!(out, "{record}");
                } else {
                    let _ = writeln!(out, "{name:<16} {:<22} FAIL  {millis:8.1} ms  {e}", "-");
                }
            }
        }
    }
    if all_passed {
        EXIT_OK
    } else {
        EXIT_FAILED
    }
}

pub fn dispatch(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match cli.command {
        Command::Reduce {
            cnf,
            construction,
            dlh_bound,
            out: out_path,
        } => cmd_reduce(&cnf, construction, dlh_bound, &out_path, out, err),
        Command::Solve {
            sample,
            k,
            budget,
            dot,
            parallel,
            json,
        } => cmd_solve(
            SolveArgs {
                sample: &sample,
                k,
                budget: Duration::from_secs(budget),
                dot,
                parallel,
                json,
            },
            out,
            err,
        ),
        Command::Check { sample, dfa } => cmd_check(&sample, &dfa, out, err),
        Command::Witness {
            cnf,
            assignment,
            out: out_path,
            dot,
        } => cmd_witness(&cnf, &assignment, out_path.as_deref(), dot.as_deref(), out, err),
        Command::Extract { cnf, dfa } => cmd_extract(&cnf, &dfa, out, err),
        Command::VerifyPaper { json } => cmd_verify_paper(json, out),
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => dispatch(cli, out, err),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{rendered}");
            } else {
                let _ = write!(out, "{rendered}");
            }
            code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let mut full = vec!["dfacons"];
        full.extend_from_slice(args);
        let code = run(full, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn zero_k_is_a_usage_error() {
        let (code, _, err) = run_capture(&["solve", "missing.txt", "--k", "0"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("--k"));
    }

    #[test]
    fn unknown_subcommand() {
        let (code, _, _) = run_capture(&["frobnicate"]);
        assert_eq!(code, EXIT_USAGE);
    }

    #[test]
    fn missing_file_is_input_error() {
        let (code, _, err) = run_capture(&["check", "/nonexistent/s.txt", "/nonexistent/d.txt"]);
        assert_eq!(code, EXIT_INPUT);
        assert!(err.contains("cannot read"));
    }
}
