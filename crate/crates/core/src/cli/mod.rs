//! The `daghilb` command line: audits, decompositions, lattice tables and
//! finite Hermitian-space reports, all emitted as JSON.

pub mod audit;
pub mod lattice;
pub mod soler;

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::parse_matrix;
use crate::tolerance::ToleranceProfile;
use crate::unidecomp::{decompose, DecomposeOptions, DecompositionJson};

pub use audit::{parse_dims, parse_fields, run_audit, AuditConfig, AuditReport};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "daghilb", version, about = "Dagger-category audits of finite-dimensional Hilbert spaces over ℝ, ℂ and ℍ")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Output {
    /// Tolerance overrides, e.g. `residual=1e-9,unitary=1e-11`.
    #[arg(long, default_value = "")]
    pub tol: String,
    /// Write the JSON report here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Suppress the human-readable summary.
    #[arg(long)]
    pub json_only: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the seeded conformance audit.
    Audit {
        /// `r`, `c`, `h`, a comma list of them, or `all`.
        #[arg(long, default_value = "all")]
        field: String,
        #[arg(long, default_value = "1,2,3,4")]
        dims: String,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long, env = "DAGHILB_SEED", default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Decompose a square matrix into a combination of unitaries.
    Decompose {
        /// Matrix JSON file, or `-` for standard input.
        input: PathBuf,
        /// Pad odd real or quaternionic dimensions with a zero row and column.
        #[arg(long)]
        pad: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Tabulate order, meets, joins and complements of a list of subspaces.
    Lattice {
        input: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Check a finite Hermitian space against the hypotheses it can witness.
    Soler {
        input: PathBuf,
        #[command(flatten)]
        output: Output,
    },
}

fn read_input(path: &Path) -> Result<String> {
    let mut text = String::new();
    let res = if path == Path::new("-") {
        std::io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        std::fs::read_to_string(path).map(|t| text = t)
    };
    res.map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    Ok(text)
}

fn emit<T: Serialize>(
    report: &T,
    summary: &str,
    output: &Output,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<()> {
    let mut json = serde_json::to_string_pretty(report)?;
    json.push('\n');
    let io = |e: std::io::Error| Error::Config(format!("write failed: {e}"));
    match &output.out {
        Some(path) => {
            std::fs::write(path, &json).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
            if !output.json_only {
                stdout.write_all(summary.as_bytes()).map_err(io)?;
            }
        }
        None => {
            stdout.write_all(json.as_bytes()).map_err(io)?;
            if !output.json_only {
                stderr.write_all(summary.as_bytes()).map_err(io)?;
            }
        }
    }
    Ok(())
}

fn verdict(pass: bool) -> i32 {
    if pass {
        EXIT_PASS
    } else {
        EXIT_FAIL
    }
}

fn execute(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    match cli.command {
        Command::Audit { field, dims, trials, seed, output } => {
            let config = AuditConfig {
                fields: parse_fields(&field)?,
                dims: parse_dims(&dims)?,
                trials,
                seed,
                tolerances: ToleranceProfile::default().with_overrides(&output.tol)?,
            };
            let report = run_audit(&config)?;
            emit(&report, &report.human_summary(), &output, stdout, stderr)?;
            Ok(verdict(report.pass()))
        }
        Command::Decompose { input, pad, output } => {
            let tol = ToleranceProfile::default().with_overrides(&output.tol)?;
            let t = parse_matrix(&read_input(&input)?)?;
            let d = decompose(&t, &tol, DecomposeOptions { pad })?;
            let json = DecompositionJson::new(&t, &d);
            let defect = d.max_factor_defect();
            let linear = d.max_quaternionic_linearity_defect();
            let pass = json.residual <= tol.reconstruct && defect <= tol.unitary && linear <= tol.reconstruct;
            let summary = format!(
                "{}: {} terms (bound {}), residual {:.3e}, max factor unitary defect {:.3e}\n",
                if pass { "PASS" } else { "FAIL" },
                json.term_count,
                d.bound(),
                json.residual,
                defect
            );
            emit(&json, &summary, &output, stdout, stderr)?;
            Ok(verdict(pass))
        }
        Command::Lattice { input, output } => {
            let tol = ToleranceProfile::default().with_overrides(&output.tol)?;
            let subs = lattice::parse_lattice(&read_input(&input)?, &tol)?;
            let report = lattice::lattice_report(&subs, &tol)?;
            emit(&report, &report.human_summary(), &output, stdout, stderr)?;
            Ok(verdict(report.pass))
        }
        Command::Soler { input, output } => {
            let tol = ToleranceProfile::default().with_overrides(&output.tol)?;
            let inst = soler::parse_instance(&read_input(&input)?)?;
            let report = soler::soler_report(&inst, &tol)?;
            emit(&report, &report.human_summary(), &output, stdout, stderr)?;
            Ok(verdict(report.pass))
        }
    }
}

/// Parses `args` (program name first) and runs the command, returning the
/// exit code: 0 pass, 1 check failure, 2 usage, I/O or parse error.
pub fn run_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 { stdout.write_all(text.as_bytes()) } else { stderr.write_all(text.as_bytes()) };
            return if code == 0 { EXIT_PASS } else { EXIT_USAGE };
        }
    };
    match execute(cli, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_USAGE
        }
    }
}

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(args, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run_with(std::iter::once("daghilb").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(call(&[]).0, EXIT_USAGE);
        assert_eq!(call(&["audit", "--trials", "0"]).0, EXIT_USAGE);
        assert_eq!(call(&["audit", "--field", "q"]).0, EXIT_USAGE);
        assert_eq!(call(&["audit", "--tol", "bogus=1"]).0, EXIT_USAGE);
        assert_eq!(call(&["decompose", "/nonexistent/file.json"]).0, EXIT_USAGE);
    }

    #[test]
    fn summary_goes_to_stderr_without_out() {
        let (code, out, err) = call(&["audit", "--field", "r", "--dims", "2", "--trials", "2"]);
        assert_eq!(code, EXIT_PASS, "{err}");
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["schema_version"], audit::AUDIT_SCHEMA_VERSION);
        assert!(err.contains("PASS"));
        let (_, _, quiet) = call(&["audit", "--field", "r", "--dims", "2", "--trials", "2", "--json-only"]);
        assert!(quiet.is_empty());
    }
}
