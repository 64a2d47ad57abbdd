//! The `q2fourier` command line.
//!
//! Exit codes: 0 success, 1 usage or I/O error, 2 numerical failure,
//! 3 verification suite failed.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{QError, Result};
use crate::gridio::{format_grid, read_grid, write_grid, GridFormat};
use crate::hyperseries::{phi_rs, q_bessel, PhiSpec};
use crate::numeric::C64;
use crate::qcalculus::{q_derivative_alpha, DerivativeForm, GridFunction, GridWindow};
use crate::qcore::{q_gamma, QParams};
use crate::qfourier::{
    forward_transform, inverse_transform, make_plan_with, solve_q, suggested_output_window, VerifyReport,
};
use crate::qtrig::{cos_alpha, exp_alpha, sin_alpha};
use crate::series::SeriesControl;
use crate::verify::{run_suite, Suite, VerifyOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;
pub const EXIT_VERIFY_FAILED: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "q2fourier", version, about = "Generalized q²-trigonometric functions and the q²-Fourier transform")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate a special function at one point.
    Eval(EvalArgs),
    /// Forward transform of a grid file.
    Transform(TransformArgs),
    /// Inverse transform of a grid file.
    Invert(TransformArgs),
    /// Apply the q-difference operator to a grid file.
    Derivative(DerivativeArgs),
    /// Run a verification suite and print its JSON report.
    Verify(VerifyArgs),
    /// Grid-compatible q with 1 - q = q^(2m).
    SolveQ(SolveArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum FnName {
    Cos,
    Sin,
    Exp,
    Bessel,
    Qgamma,
    Phi,
}

#[derive(Args, Debug)]
struct SeriesArgs {
    /// Maximum number of series terms.
    #[arg(long)]
    terms: Option<usize>,
    /// Relative stopping tolerance.
    #[arg(long)]
    tol: Option<f64>,
    /// Ceiling for working precision in bits.
    #[arg(long)]
    bits: Option<u32>,
}

impl SeriesArgs {
    fn control(&self) -> Result<SeriesControl> {
        let mut c = SeriesControl::default();
        if let Some(t) = self.terms {
            c = c.terms(t);
        }
        if let Some(t) = self.tol {
            c = c.tolerance(t);
        }
        if let Some(b) = self.bits {
            c = c.max_precision(b);
        }
        c.validate()?;
        Ok(c)
    }
}

#[derive(Args, Debug)]
struct EvalArgs {
    #[arg(long = "fn", value_enum)]
    function: FnName,
    /// Base q in (0, 1).
    #[arg(long, allow_hyphen_values = true)]
    q: Option<f64>,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    alpha: f64,
    /// Bessel order.
    #[arg(long, allow_hyphen_values = true)]
    nu: Option<f64>,
    /// Argument, "re" or "re,im".
    #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
    x: C64,
    /// phi: a numerator parameter "re[,im]", repeatable.
    #[arg(long = "num", allow_hyphen_values = true, value_parser = parse_complex)]
    numerator: Vec<C64>,
    /// phi: a denominator parameter "re[,im]", repeatable.
    #[arg(long = "den", allow_hyphen_values = true, value_parser = parse_complex)]
    denominator: Vec<C64>,
    /// phi: series base (defaults to --q).
    #[arg(long)]
    base: Option<f64>,
    #[command(flatten)]
    series: SeriesArgs,
}

#[derive(Args, Debug)]
struct GridArgs {
    /// Grid file (CSV, or JSON by extension).
    #[arg(long)]
    input: PathBuf,
    /// Required for CSV input; JSON input carries its own.
    #[arg(long)]
    q: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<f64>,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Format for stdout output.
    #[arg(long, value_enum, default_value = "csv")]
    format: OutFormat,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum OutFormat {
    Csv,
    Json,
}

#[derive(Args, Debug)]
struct TransformArgs {
    #[command(flatten)]
    grid: GridArgs,
    /// Output exponent window "nmin:nmax"; a window sized for double
    /// precision accuracy is chosen when absent.
    #[arg(long, allow_hyphen_values = true)]
    out_window: Option<GridWindow>,
    /// Reject q unless ln(1-q)/ln(q) is an even integer.
    #[arg(long)]
    strict_grid: bool,
    #[arg(long)]
    bits: Option<u32>,
}

#[derive(Args, Debug)]
struct DerivativeArgs {
    #[command(flatten)]
    grid: GridArgs,
    /// Operator form: eigen or as-written.
    #[arg(long, default_value = "eigen")]
    form: DerivativeForm,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// identities, two-path, limits, eigen, orthogonality, inversion,
    /// plancherel, isometry, solve-q or bessel-relation.
    #[arg(long)]
    suite: Suite,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Number of randomized cases.
    #[arg(long)]
    cases: Option<usize>,
    #[arg(long)]
    q: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<f64>,
    /// Suite window "nmin:nmax" (evaluation, output or summation range).
    #[arg(long, allow_hyphen_values = true)]
    window: Option<GridWindow>,
    /// Orthogonality index range "nmin:nmax".
    #[arg(long, allow_hyphen_values = true)]
    index_range: Option<GridWindow>,
    #[arg(long)]
    bits: Option<u32>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[arg(long)]
    m: u32,
}

fn parse_complex(s: &str) -> std::result::Result<C64, String> {
    let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}"));
    match s.split_once(',') {
        Some((re, im)) => Ok(C64::new(num(re)?, num(im)?)),
        None => Ok(C64::new(num(s)?, 0.0)),
    }
}

/// Shortest round-trip decimal, always with a fractional part or exponent.
pub fn format_f64(v: f64) -> String {
    format!("{v:?}")
}

fn format_complex(z: C64) -> String {
    if z.im == 0.0 {
        format_f64(z.re)
    } else {
        format!("{},{}", format_f64(z.re), format_f64(z.im))
    }
}

enum Failure {
    Usage(String),
    Error(QError),
    VerifyFailed,
}

impl From<QError> for Failure {
    fn from(e: QError) -> Self {
        Failure::Error(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Error(e.into())
    }
}

type Outcome = std::result::Result<(), Failure>;

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                EXIT_USAGE
            } else {
                let _ = write!(stdout, "{text}");
                EXIT_OK
            };
        }
    };
    match dispatch(cli.command, stdout, stderr) {
        Ok(()) => EXIT_OK,
        Err(Failure::VerifyFailed) => EXIT_VERIFY_FAILED,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Error(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            if e.is_numerical() {
                EXIT_NUMERICAL
            } else {
                EXIT_USAGE
            }
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    match cmd {
        Command::Eval(a) => eval(a, out),
        Command::Transform(a) => transform(a, false, out, err),
        Command::Invert(a) => transform(a, true, out, err),
        Command::Derivative(a) => derivative(a, out, err),
        Command::Verify(a) => verify(a, out, err),
        Command::SolveQ(a) => {
            writeln!(out, "{}", format_f64(solve_q(a.m)?))?;
            Ok(())
        }
    }
}

fn eval(a: EvalArgs, out: &mut dyn Write) -> Outcome {
    let ctrl = a.series.control()?;
    let need_q = || a.q.ok_or_else(|| Failure::Usage(format!("--fn {:?} needs --q", a.function).to_lowercase()));
    let v = match a.function {
        FnName::Cos | FnName::Sin | FnName::Exp => {
            let p = QParams::new(need_q()?, a.alpha)?;
            match a.function {
                FnName::Cos => cos_alpha(a.x, &p, &ctrl)?,
                FnName::Sin => sin_alpha(a.x, &p, &ctrl)?,
                _ => exp_alpha(a.x, &p, &ctrl)?,
            }
        }
        FnName::Bessel => {
            let nu = a.nu.ok_or_else(|| Failure::Usage("--fn bessel needs --nu".into()))?;
            q_bessel(nu, a.x, need_q()?, &ctrl)?
        }
        FnName::Qgamma => {
            if a.x.im != 0.0 {
                return Err(Failure::Usage("--fn qgamma takes a real --x".into()));
            }
            C64::new(q_gamma(&a.x.re, &need_q()?, &ctrl)?, 0.0)
        }
        FnName::Phi => {
            let base = match a.base {
                Some(b) => b,
                None => need_q()?,
            };
            let spec = PhiSpec::new(a.numerator, a.denominator, base, a.x)?;
            phi_rs(&spec, &ctrl)?
        }
    };
    writeln!(out, "{}", format_complex(v))?;
    Ok(())
}

fn load(g: &GridArgs) -> Result<GridFunction, Failure> {
    let params = match (g.q, g.alpha) {
        (Some(q), Some(a)) => Some(QParams::new(q, a)?),
        (Some(q), None) => Some(QParams::new(q, 0.0)?),
        (None, Some(_)) => return Err(Failure::Usage("--alpha given without --q".into())),
        (None, None) => None,
    };
    Ok(read_grid(&g.input, params)?)
}

fn emit(g: &GridArgs, f: &GridFunction, out: &mut dyn Write) -> Outcome {
    match &g.out {
        Some(path) => write_grid(path, f)?,
        None => {
            let fmt = match g.format {
                OutFormat::Csv => GridFormat::Csv,
                OutFormat::Json => GridFormat::Json,
            };
            out.write_all(format_grid(f, fmt)?.as_bytes())?;
        }
    }
    Ok(())
}

fn describe(path: &Option<PathBuf>) -> String {
    path.as_deref().map_or_else(|| "stdout".to_string(), |p: &Path| p.display().to_string())
}

fn transform(a: TransformArgs, inverse: bool, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let f = load(&a.grid)?;
    let params = *f.params();
    let out_window = a.out_window.unwrap_or_else(|| suggested_output_window(&params, f.window()));
    let mut ctrl = SeriesControl::default();
    if let Some(b) = a.bits {
        ctrl = ctrl.max_precision(b);
    }
    let g = if inverse {
        let plan = make_plan_with(params, out_window, f.window(), ctrl, a.strict_grid)?;
        inverse_transform(&f, &plan)?
    } else {
        let plan = make_plan_with(params, f.window(), out_window, ctrl, a.strict_grid)?;
        forward_transform(&f, &plan)?
    };
    emit(&a.grid, &g, out)?;
    writeln!(
        err,
        "{} q={} alpha={} input {} -> output {} ({})",
        if inverse { "inverse" } else { "forward" },
        params.q(),
        params.alpha(),
        f.window(),
        out_window,
        describe(&a.grid.out)
    )?;
    Ok(())
}

fn derivative(a: DerivativeArgs, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let f = load(&a.grid)?;
    let d = q_derivative_alpha(&f, a.form)?;
    emit(&a.grid, &d, out)?;
    writeln!(err, "derivative on {} -> {} ({})", f.window(), d.window(), describe(&a.grid.out))?;
    Ok(())
}

fn verify(a: VerifyArgs, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let opts = VerifyOptions {
        seed: a.seed,
        cases: a.cases,
        q: a.q,
        alpha: a.alpha,
        window: a.window,
        index_range: a.index_range,
        bits: a.bits,
    };
    let report: VerifyReport = run_suite(a.suite, &opts)?;
    let mut json = serde_json::to_string_pretty(&report).map_err(|e| QError::Io(e.to_string()))?;
    json.push('\n');
    match &a.out {
        Some(p) => std::fs::write(p, &json).map_err(|e| QError::Io(format!("{}: {e}", p.display())))?,
        None => out.write_all(json.as_bytes())?,
    }
    let judged = report.cases.iter().filter(|c| !c.informational).count();
    writeln!(
        err,
        "{}: {} ({} cases, max error {:.3e}, tolerance {:.1e})",
        report.suite,
        if report.passed { "PASS" } else { "FAIL" },
        judged,
        report.max_error,
        report.tolerance
    )?;
    if report.passed {
        Ok(())
    } else {
        Err(Failure::VerifyFailed)
    }
}
