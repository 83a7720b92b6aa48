//! Command-line front end: reads equation and map files, runs the
//! computations and verification suites, and renders reports.

pub mod report;

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use odeinv::compare::{self, CheckOptions};
use odeinv::expr::{parse, Expr, RatFunc, Value};
use odeinv::ode::{parse_map_file, parse_ode_file, pullback, Ode, PointTransformation};
use odeinv::{sd, Plain, Rational};
use rayon::prelude::*;

pub use report::{render_text, OdeText, Provenance, RunReport, ScalarEntry, TrialSummary, VerdictReport};

#[derive(Parser, Debug)]
#[command(name = "odeinv", version, about = "Point invariants of y'' = P + 3Q y' + 3R y'^2 + S y'^3")]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Relative tolerance of numeric comparisons.
    #[arg(long, global = true, default_value_t = 1e-9, value_parser = parse_tolerance)]
    pub tolerance: f64,
    /// Record wall-clock time in the report. Off by default so that reports
    /// are reproducible byte for byte.
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Scheme {
    Sd,
    Bgd,
    Both,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Decide general position, maximal degeneration or neither.
    Classify {
        ode: PathBuf,
        #[arg(long, value_parser = parse_point)]
        point: Option<(Rational, Rational)>,
    },
    /// Print the scalar invariants, symbolically or at a point.
    Invariants {
        ode: PathBuf,
        #[arg(long, value_enum, default_value_t = Scheme::Both)]
        scheme: Scheme,
        #[arg(long, value_parser = parse_point)]
        point: Option<(Rational, Rational)>,
    },
    /// Run the full identity suite.
    Compare { ode: PathBuf },
    /// Print the equation in the new coordinates.
    Transform { ode: PathBuf, map: PathBuf },
    /// Check the transformation laws of the invariants under a map.
    CheckWeights {
        ode: PathBuf,
        map: PathBuf,
        #[arg(long, default_value_t = 100)]
        points: usize,
    },
    /// Verify the identities in special coordinates.
    SpecialVerify,
    /// Run the identity suite on random polynomial equations.
    Fuzz {
        #[arg(long, default_value_t = 25)]
        trials: usize,
        #[arg(long, default_value_t = 2)]
        degree: u32,
    },
}

/// What a run prints and how it exits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Output {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

/// A rational written as an integer, `p/q`, or a decimal.
fn parse_rational(s: &str) -> Result<Rational, String> {
    let e = parse(s.trim()).map_err(|e| format!("{s:?}: {e}"))?;
    let r = e.normalize().map_err(|e| format!("{s:?}: {e}"))?;
    r.as_rational().ok_or_else(|| format!("{s:?} is not a number"))
}

fn parse_tolerance(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(t) if t.is_finite() && t >= 0.0 => Ok(t),
        _ => Err(format!("expected a finite nonnegative number but got {s:?}")),
    }
}

pub fn parse_point(s: &str) -> Result<(Rational, Rational), String> {
    let (x, y) = s.split_once(',').ok_or_else(|| format!("expected X,Y but got {s:?}"))?;
    Ok((parse_rational(x)?, parse_rational(y)?))
}

enum Failure {
    /// Bad input: exit 2.
    Input(String),
    /// The computation itself broke down: exit 1.
    Compute(String),
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_ode(path: &Path) -> Result<Ode<RatFunc>, Failure> {
    parse_ode_file(&read(path)?)
        .map(|f| f.ode)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_map(path: &Path, seed: u64) -> Result<PointTransformation, Failure> {
    parse_map_file(&read(path)?, seed).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn compute<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Compute(e.to_string())
}

fn verdict(ode: &Ode<RatFunc>, point: Option<(Rational, Rational)>, opts: &CheckOptions) -> Result<VerdictReport, Failure> {
    let at_user_point = point.is_some();
    compare::classify(ode, point, opts)
        .map(|c| VerdictReport::from(&c))
        .map_err(|e| if at_user_point { Failure::Input(format!("at the given point: {e}")) } else { compute(e) })
}

fn value_entry(name: &str, v: &Value) -> ScalarEntry {
    ScalarEntry {
        name: name.into(),
        value: v.to_string(),
        provenance: match v {
            Value::Exact(_) => Provenance::Exact,
            Value::Float(_) => Provenance::Numeric,
        },
    }
}

fn symbolic_entry(name: &str, v: impl std::fmt::Display) -> ScalarEntry {
    ScalarEntry {
        name: name.into(),
        value: v.to_string(),
        provenance: Provenance::Symbolic,
    }
}

fn invariants(
    ode: &Ode<RatFunc>,
    scheme: Scheme,
    point: Option<(Rational, Rational)>,
    opts: &CheckOptions,
) -> Result<RunReport, Failure> {
    let mut out = RunReport::empty();
    out.verdict = Some(verdict(ode, point.clone(), opts)?);
    let (want_sd, want_bgd) = (scheme != Scheme::Bgd, scheme != Scheme::Sd);
    match point {
        Some((x, y)) => {
            let v = compare::values_at(ode, &x, &y).map_err(|e| Failure::Input(format!("at the given point: {e}")))?;
            if want_sd {
                let mut list = vec![value_entry("F5", &v.f5)];
                if let Some(s) = &v.sd {
                    list.extend(s.named().iter().map(|(n, e)| value_entry(n, e)));
                }
                out.scalars_sd = Some(list);
            }
            if want_bgd {
                let mut list = vec![value_entry("J0", &neg(&v.f5))];
                if let Some(b) = &v.bgd {
                    list.extend(b.named().iter().map(|(n, e)| value_entry(n, e)));
                }
                out.scalars_bgd = Some(list);
            }
        }
        None => {
            let f5 = sd::core(&Plain, ode).f5;
            let (s, b) = compare::symbolic_scalars(ode);
            if want_sd {
                let mut list = vec![symbolic_entry("F5", Expr::from(&f5))];
                if let Some(s) = &s {
                    list.extend(s.named().iter().map(|(n, e)| symbolic_entry(n, e)));
                }
                out.scalars_sd = Some(list);
            }
            if want_bgd {
                let mut list = vec![symbolic_entry("J0", Expr::from(&-f5.clone()))];
                if let Some(b) = &b {
                    list.extend(b.named().iter().map(|(n, e)| symbolic_entry(n, e)));
                }
                out.scalars_bgd = Some(list);
            }
        }
    }
    Ok(out)
}

fn neg(v: &Value) -> Value {
    match v {
        Value::Exact(r) => Value::Exact(-r.clone()),
        Value::Float(f) => Value::Float(-f),
    }
}

fn compare_one(ode: &Ode<RatFunc>, opts: &CheckOptions) -> Result<RunReport, Failure> {
    let mut out = RunReport::empty();
    out.verdict = Some(verdict(ode, None, opts)?);
    out.identities = compare::verify_identities(ode, opts);
    Ok(out)
}

fn fuzz(trials: usize, degree: u32, opts: &CheckOptions) -> Result<RunReport, Failure> {
    let corpus: Vec<_> = compare::corpus(opts.seed, trials, degree).into_iter().take(trials).collect();
    let runs: Vec<Result<(TrialSummary, RunReport), Failure>> = corpus
        .par_iter()
        .enumerate()
        .map(|(index, member)| {
            let r = compare_one(&member.ode, opts)?;
            let summary = TrialSummary {
                index,
                ode: OdeText::from(&member.ode),
                verdict: r.verdict.clone().expect("compare sets a verdict"),
                checked: r.identities.len(),
                failed: r.failures(),
            };
            Ok((summary, r))
        })
        .collect();
    let mut out = RunReport::empty();
    for (run, member) in runs.into_iter().zip(&corpus) {
        let (summary, r) = run?;
        out.trials.push(summary);
        out.identities.extend(r.identities.into_iter().map(|mut i| {
            i.name = format!("{}: {}", member.name, i.name);
            i
        }));
    }
    Ok(out)
}

fn execute(cli: &Cli) -> Result<RunReport, Failure> {
    let mut opts = CheckOptions {
        seed: cli.seed,
        tolerance: cli.tolerance,
        ..CheckOptions::default()
    };
    match &cli.command {
        Command::Classify { ode, point } => {
            let ode = load_ode(ode)?;
            let mut out = RunReport::empty();
            out.verdict = Some(verdict(&ode, point.clone(), &opts)?);
            Ok(out)
        }
        Command::Invariants { ode, scheme, point } => invariants(&load_ode(ode)?, *scheme, point.clone(), &opts),
        Command::Compare { ode } => compare_one(&load_ode(ode)?, &opts),
        Command::Transform { ode, map } => {
            let (ode, t) = (load_ode(ode)?, load_map(map, cli.seed)?);
            let pulled = pullback(&ode, &t).map_err(|e| Failure::Input(e.to_string()))?;
            let mut out = RunReport::empty();
            out.transformed = Some(OdeText::from(&pulled));
            Ok(out)
        }
        Command::CheckWeights { ode, map, points } => {
            let (ode, t) = (load_ode(ode)?, load_map(map, cli.seed)?);
            opts.points = *points;
            let mut out = RunReport::empty();
            out.verdict = Some(verdict(&ode, None, &opts)?);
            out.identities = compare::check_weights(&ode, &t, &opts).map_err(|e| Failure::Input(e.to_string()))?;
            Ok(out)
        }
        Command::SpecialVerify => {
            let mut out = RunReport::empty();
            out.identities = odeinv::special::verify_all().map_err(compute)?;
            Ok(out)
        }
        Command::Fuzz { trials, degree } => fuzz(*trials, *degree, &opts),
    }
}

/// Render a report in the requested format.
pub fn render(r: &RunReport, format: Format) -> String {
    match format {
        Format::Text => render_text(r),
        Format::Json => {
            let mut s = serde_json::to_string_pretty(r).expect("reports serialize");
            s.push('\n');
            s
        }
    }
}

/// 1 if any check failed, else 0.
pub fn exit_code(r: &RunReport) -> u8 {
    u8::from(r.failures() > 0)
}

/// Run one command line. Exit code 0 when every check passes, 1 on a
/// failed check, 2 on a usage or input error.
pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if e.use_stderr() {
                Output { code, stdout: String::new(), stderr: text }
            } else {
                Output { code, stdout: text, stderr: String::new() }
            };
        }
    };
    let start = Instant::now();
    match execute(&cli) {
        Ok(mut r) => {
            if cli.timing {
                r.timing_ms = Some(start.elapsed().as_millis() as u64);
            }
            Output {
                code: exit_code(&r),
                stdout: render(&r, cli.format),
                stderr: String::new(),
            }
        }
        Err(Failure::Input(msg)) => Output {
            code: 2,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        },
        Err(Failure::Compute(msg)) => Output {
            code: 1,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        },
    }
}
