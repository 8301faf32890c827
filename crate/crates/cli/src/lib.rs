//! `qcl3`: evaluate logic expressions over qutrit states, reconstruct states
//! from probe data, inspect gates and run the self-verification suite.
//!
//! Exit codes: 0 success, 1 usage or parse error, 2 unphysical
//! reconstruction, 3 verification failure.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;

use clap::{error::ErrorKind, Parser, Subcommand};
use serde_json::json;

use qcl_core::conformance::{run_suite, Bound, Report, SuiteConfig, DEFAULT_SEED};
use qcl_core::gates::{catalog_names, lookup, GateSpec};
use qcl_core::gellmann::decompose;
use qcl_core::lang::{evaluate, Value};
use qcl_core::states::DensityJson;
use qcl_core::tomography::{reconstruct_with_tolerance, ProbeVector};
use qcl_core::{ComplexMatrix, C64, DEFAULT_TOL};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_UNPHYSICAL: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "qcl3",
    version,
    about = "Three-valued quantum computational logic toolkit"
)]
pub struct Cli {
    /// Local dimension of kets in expressions.
    #[arg(long, global = true, default_value_t = 3, value_parser = clap::value_parser!(u8).range(2..=3))]
    pub dim: u8,

    /// Tolerance override, in (0, 1e-3].
    #[arg(long, global = true, value_parser = parse_tolerance)]
    pub tolerance: Option<f64>,

    /// Seed for the verification suite.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,

    /// Emit machine-readable JSON.
    #[arg(long, global = true)]
    pub json: bool,

    /// Write the result to a file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate an expression, e.g. `prob_true(H3(|0>))`.
    Eval { expr: String },
    /// Reconstruct a qutrit state from a JSON array of eight probe values
    /// (`-` reads stdin).
    Reconstruct { probes: PathBuf },
    /// Run the identity suite.
    Verify,
    /// Gate inspection.
    Gate {
        #[command(subcommand)]
        action: GateCommand,
    },
}

#[derive(Debug, Subcommand)]
pub enum GateCommand {
    /// Print a gate matrix with round-trippable entries.
    Dump { name: String },
}

fn parse_tolerance(text: &str) -> Result<f64, String> {
    let tol: f64 = text.parse().map_err(|e| format!("{e}"))?;
    if tol > 0.0 && tol <= 1e-3 {
        Ok(tol)
    } else {
        Err(format!("tolerance must lie in (0, 1e-3], got {text}"))
    }
}

/// A failed command: exit code plus diagnostic. `output` is still written
/// to stdout (or `--out`) when present.
#[derive(Debug, Clone, PartialEq)]
pub struct Failure {
    pub code: i32,
    pub message: String,
    pub output: Option<String>,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
            output: None,
        }
    }
}

/// Fixed six-decimal rendering with trailing zeros removed.
pub fn fmt6(x: f64) -> String {
    let s = format!("{x:.6}");
    let s = if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    };
    if s == "-0" {
        "0".into()
    } else {
        s
    }
}

fn fmt6_complex(z: C64) -> String {
    let re = fmt6(z.re);
    let im = fmt6(z.im);
    if im == "0" {
        re
    } else if let Some(mag) = im.strip_prefix('-') {
        format!("{re}-{mag}i")
    } else {
        format!("{re}+{im}i")
    }
}

/// `%.17g`-style rendering: 17 significant digits, trailing zeros removed.
pub fn fmt_g17(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..17).contains(&exp) {
        let decimals = (16 - exp).max(0) as usize;
        let fixed = format!("{x:.decimals$}");
        if fixed.contains('.') {
            fixed
                .trim_end_matches('0')
                .trim_end_matches('.')
                .to_string()
        } else {
            fixed
        }
    } else {
        let mantissa = if mantissa.contains('.') {
            mantissa.trim_end_matches('0').trim_end_matches('.')
        } else {
            mantissa
        };
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    }
}

fn fmt_g17_complex(z: C64) -> String {
    let sign = if z.im.is_sign_negative() && z.im != 0.0 {
        '-'
    } else {
        '+'
    };
    format!("{}{sign}{}i", fmt_g17(z.re), fmt_g17(z.im.abs()))
}

fn matrix_lines(m: &ComplexMatrix, entry: fn(C64) -> String) -> String {
    (0..m.rows())
        .map(|i| {
            let row: Vec<String> = (0..m.cols()).map(|j| entry(m.get(i, j))).collect();
            format!("[{}]", row.join(", "))
        })
        .collect::<Vec<_>>()
        .join("\n")
}

pub fn render_human(value: &Value) -> String {
    match value {
        Value::Probability(x) | Value::Real(x) => fmt6(*x),
        Value::Probabilities(ps) => ps
            .iter()
            .map(|(tv, p)| format!("{tv}: {}", fmt6(*p)))
            .collect::<Vec<_>>()
            .join(", "),
        Value::Bloch(r) => {
            let parts: Vec<String> = r.0.iter().map(|x| fmt6(*x)).collect();
            format!("({})", parts.join(", "))
        }
        Value::Density(rho) => matrix_lines(rho.matrix(), fmt6_complex),
        Value::Quadrant(q) => q.to_string(),
    }
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON values serialize")
}

pub fn cmd_eval(expr: &str, cli: &Cli) -> Result<String, Failure> {
    let value = evaluate(expr, usize::from(cli.dim)).map_err(|e| {
        let span = e.span();
        let marker = format!(
            "{}{}",
            " ".repeat(span.start),
            "^".repeat((span.end - span.start).max(1))
        );
        Failure::usage(format!("{e}\n  {expr}\n  {marker}"))
    })?;
    Ok(if cli.json {
        pretty(&value.to_json())
    } else {
        render_human(&value)
    })
}

fn read_input(path: &PathBuf) -> Result<String, Failure> {
    if path.as_os_str() == "-" {
        let mut text = String::new();
        io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| Failure::usage(format!("cannot read stdin: {e}")))?;
        Ok(text)
    } else {
        fs::read_to_string(path)
            .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))
    }
}

/// Parses probe data and reconstructs the state. The result document is
/// always JSON: `{valid, density, bloch}` on success and
/// `{valid, bloch, eigenvalues}` when the probes describe no state.
pub fn cmd_reconstruct_text(text: &str, cli: &Cli) -> Result<String, Failure> {
    let probes = ProbeVector::from_json_str(text)
        .map_err(|e| Failure::usage(format!("malformed probe file: {e}")))?;
    let tol = cli.tolerance.unwrap_or(DEFAULT_TOL);
    match reconstruct_with_tolerance(&probes, tol) {
        Ok(rho) => {
            let bloch = decompose(&rho).expect("qutrit state");
            Ok(pretty(&json!({
                "valid": true,
                "density": DensityJson::from(&rho),
                "bloch": bloch.0,
            })))
        }
        Err(failure) => Err(Failure {
            code: EXIT_UNPHYSICAL,
            message: failure.to_string(),
            output: Some(pretty(&json!({
                "valid": false,
                "bloch": failure.bloch.0,
                "eigenvalues": failure.eigenvalues,
            }))),
        }),
    }
}

pub fn cmd_reconstruct(path: &PathBuf, cli: &Cli) -> Result<String, Failure> {
    cmd_reconstruct_text(&read_input(path)?, cli)
}

fn report_json(report: &Report) -> serde_json::Value {
    let checks: Vec<_> = report
        .checks
        .iter()
        .map(|c| {
            let (relation, bound) = match c.bound {
                Bound::AtMost(t) => ("at_most", Some(t)),
                Bound::AtLeast(t) => ("at_least", Some(t)),
                Bound::Holds => ("holds", None),
            };
            json!({
                "name": c.name,
                "passed": c.passed,
                "value": c.value,
                "relation": relation,
                "bound": bound,
            })
        })
        .collect();
    json!({
        "seed": report.seed,
        "passed": report.all_passed(),
        "checks": checks,
        "notes": report.notes,
    })
}

pub fn cmd_verify(cli: &Cli) -> Result<String, Failure> {
    let report = run_suite(&SuiteConfig {
        seed: cli.seed,
        tolerance: cli.tolerance,
        ..SuiteConfig::default()
    });
    let text = if cli.json {
        pretty(&report_json(&report))
    } else {
        report.to_string()
    };
    if report.all_passed() {
        Ok(text)
    } else {
        Err(Failure {
            code: EXIT_VERIFY,
            message: format!("{} identity checks failed", report.failures().count()),
            output: Some(text),
        })
    }
}

fn gate_json(g: &GateSpec) -> serde_json::Value {
    let m = g.matrix();
    let part = |f: fn(&C64) -> f64| -> Vec<Vec<f64>> {
        (0..m.rows())
            .map(|i| (0..m.cols()).map(|j| f(&m.get(i, j))).collect())
            .collect()
    };
    json!({
        "name": g.name(),
        "d": g.d(),
        "n": g.n(),
        "kind": g.kind(),
        "re": part(|z| z.re),
        "im": part(|z| z.im),
    })
}

pub fn cmd_gate_dump(name: &str, cli: &Cli) -> Result<String, Failure> {
    let gate = lookup(name, 1).map_err(|_| {
        Failure::usage(format!(
            "unknown gate `{name}`; known gates: {}",
            catalog_names().join(", ")
        ))
    })?;
    Ok(if cli.json {
        pretty(&gate_json(&gate))
    } else {
        format!(
            "{} (d={}, n={}, {})\n{}",
            gate.name(),
            gate.d(),
            gate.n(),
            gate.kind(),
            matrix_lines(gate.matrix(), fmt_g17_complex)
        )
    })
}

fn emit(text: &str, cli: &Cli, stdout: &mut dyn Write) -> Result<(), Failure> {
    match &cli.out {
        Some(path) => fs::write(path, format!("{text}\n"))
            .map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display()))),
        None => writeln!(stdout, "{text}").map_err(|e| Failure::usage(format!("stdout: {e}"))),
    }
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{e}");
                    return EXIT_OK;
                }
                _ => EXIT_USAGE,
            };
            let _ = write!(stderr, "{e}");
            return code;
        }
    };
    let result = match &cli.command {
        Command::Eval { expr } => cmd_eval(expr, &cli),
        Command::Reconstruct { probes } => cmd_reconstruct(probes, &cli),
        Command::Verify => cmd_verify(&cli),
        Command::Gate {
            action: GateCommand::Dump { name },
        } => cmd_gate_dump(name, &cli),
    };
    let outcome = match result {
        Ok(text) => emit(&text, &cli, stdout),
        Err(failure) => {
            if let Some(text) = &failure.output {
                if let Err(e) = emit(text, &cli, stdout) {
                    let _ = writeln!(stderr, "error: {}", e.message);
                }
            }
            Err(failure)
        }
    };
    match outcome {
        Ok(()) => EXIT_OK,
        Err(failure) => {
            let _ = writeln!(stderr, "error: {}", failure.message);
            failure.code
        }
    }
}
