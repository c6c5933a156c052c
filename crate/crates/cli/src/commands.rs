//! Experiment commands and the reports they produce.

use std::ops::RangeInclusive;
use std::path::PathBuf;

use bassline_core::asympt::{
    base_change_check, default_s_max, detect_stabilization, fit_eventual_polynomial, Extension, Invariant, Lab,
    SeriesValue,
};
use bassline_core::homalg::{normalized, periodicity_certificate, resolve, FreeResolution};
use bassline_core::localinv::{bass_number, betti_number, depth_at, id_at, pd_at, DimensionValue, PrimeIdeal};
use bassline_core::modpres::PresentedModule;
use bassline_core::{Error as CoreError, Ideal};
use clap::{Parser, ValueEnum};

use crate::report::{key_segment, Format, Report, Value};
use crate::session::{Overrides, Session, SessionError};

pub const DEFAULT_WINDOW: (u32, u32) = (1, 6);
pub const DEFAULT_RESOLUTION_LENGTH: usize = 4;
pub const DEFAULT_MAX_DEGREE: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CommandKind {
    Series,
    Fit,
    Stabilize,
    Loci,
    Resolution,
    Invariants,
    BaseChangeCheck,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Table,
    Structured,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Format {
        match f {
            FormatArg::Table => Format::Table,
            FormatArg::Structured => Format::Structured,
        }
    }
}

/// Compute homological invariants of M/I^nM over quotients of polynomial rings.
#[derive(Debug, Clone, Parser)]
#[command(name = "bassline", version, about)]
pub struct Cli {
    /// What to compute.
    #[arg(value_enum)]
    pub command: CommandKind,
    /// Session file (`-` for standard input).
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Coefficient field: `Q` or a prime, replacing the session's.
    #[arg(long = "char")]
    pub characteristic: Option<String>,
    /// Monomial order: grevlex or lex.
    #[arg(long)]
    pub order: Option<String>,
    /// Window of powers, `A..B`.
    #[arg(long = "n")]
    pub window: Option<String>,
    /// Homological index for bass/betti; resolution length for `resolution`.
    #[arg(long)]
    pub i: Option<usize>,
    /// Largest homological index examined.
    #[arg(long)]
    pub smax: Option<usize>,
    /// Worker threads.
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Aligned table or the dotted-key structured report.
    #[arg(long, value_enum, default_value = "table")]
    pub format: FormatArg,
    /// Structured report of expected values; mismatches exit with status 2.
    #[arg(long)]
    pub expect: Option<PathBuf>,
    /// bass, betti, pd, id, depth or grade.
    #[arg(long)]
    pub invariant: Option<String>,
    /// Module name; defaults to the first declared module.
    #[arg(long)]
    pub module: Option<String>,
    /// Ideal I of the powers; defaults to the first declared ideal.
    #[arg(long)]
    pub ideal: Option<String>,
    /// Prime name; repeat for `loci` and `invariants`.
    #[arg(long)]
    pub prime: Vec<String>,
    /// The ideal J for `--invariant grade`.
    #[arg(long = "grade-ideal")]
    pub grade_ideal: Option<String>,
    /// Highest polynomial degree tried by `fit`.
    #[arg(long = "max-degree")]
    pub max_degree: Option<usize>,
    /// identity, poly-t (q = pS + (t)) or poly-flat (q = pS).
    #[arg(long)]
    pub extension: Option<String>,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Session(#[from] SessionError),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Core(#[from] CoreError),
    #[error("{0}")]
    Report(#[from] crate::report::ReportError),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

impl Cli {
    pub fn overrides(&self) -> Result<Overrides, CliError> {
        let characteristic = match self.characteristic.as_deref() {
            None => None,
            Some("Q") | Some("0") => Some(0),
            Some(s) => Some(s.parse().map_err(|_| usage(format!("--char expects Q or a prime, got {s:?}")))?),
        };
        let order = match self.order.as_deref() {
            None => None,
            Some(s) => Some(crate::session::parse_order(s).ok_or_else(|| usage("--order expects grevlex or lex"))?),
        };
        Ok(Overrides { characteristic, order })
    }

    /// The command with its flags in a fixed order, for the report header.
    pub fn echo(&self) -> String {
        let mut parts = vec![self.command.to_possible_value().unwrap().get_name().to_string()];
        let mut flag = |name: &str, v: Option<String>| {
            if let Some(v) = v {
                parts.push(format!("--{name} {v}"));
            }
        };
        flag("invariant", self.invariant.clone());
        flag("i", self.i.map(|v| v.to_string()));
        flag("module", self.module.clone());
        flag("ideal", self.ideal.clone());
        for p in &self.prime {
            flag("prime", Some(p.clone()));
        }
        flag("grade-ideal", self.grade_ideal.clone());
        flag("n", self.window.clone());
        flag("smax", self.smax.map(|v| v.to_string()));
        flag("max-degree", self.max_degree.map(|v| v.to_string()));
        flag("extension", self.extension.clone());
        flag("char", self.characteristic.clone());
        flag("order", self.order.clone());
        parts.join(" ")
    }
}

fn parse_window(s: &str) -> Result<(u32, u32), CliError> {
    let bad = || usage(format!("--n expects A..B with 1 <= A <= B, got {s:?}"));
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    let a: u32 = a.trim().parse().map_err(|_| bad())?;
    let b: u32 = b.trim().parse().map_err(|_| bad())?;
    if a < 1 || b < a {
        return Err(bad());
    }
    Ok((a, b))
}

fn parse_invariant(cli: &Cli, session: &Session) -> Result<Invariant, CliError> {
    let name = cli.invariant.as_deref().ok_or_else(|| usage("--invariant is required"))?;
    let index = cli.i.unwrap_or(0);
    Ok(match name {
        "bass" => Invariant::Bass(index),
        "betti" => Invariant::Betti(index),
        "pd" => Invariant::Pd,
        "id" => Invariant::Id,
        "depth" => Invariant::Depth,
        "grade" => {
            let j = cli.grade_ideal.as_deref().ok_or_else(|| usage("--invariant grade needs --grade-ideal"))?;
            Invariant::Grade(lookup_ideal(session, j)?.clone())
        }
        other => return Err(usage(format!("unknown invariant {other:?}"))),
    })
}

fn lookup_ideal<'s>(session: &'s Session, name: &str) -> Result<&'s Ideal, CliError> {
    session
        .ideal(name)
        .or_else(|| session.prime(name).map(|p| p.ideal()))
        .ok_or_else(|| usage(format!("no ideal named {name:?}")))
}

fn pick<'s>(flag: Option<&'s str>, declared: Vec<&'s str>, what: &str) -> Result<&'s str, CliError> {
    match flag {
        Some(n) => Ok(n),
        None => declared.first().copied().ok_or_else(|| usage(format!("the session declares no {what}"))),
    }
}

struct Context<'s> {
    session: &'s Session,
    module_name: &'s str,
    module: &'s PresentedModule,
    window: (u32, u32),
    s_max: usize,
}

impl<'s> Context<'s> {
    fn new(cli: &'s Cli, session: &'s Session) -> Result<Context<'s>, CliError> {
        let module_name = pick(cli.module.as_deref(), session.module_names(), "module")?;
        let module = session.module(module_name).ok_or_else(|| usage(format!("no module named {module_name:?}")))?;
        let window = match &cli.window {
            Some(w) => parse_window(w)?,
            None => session.window.unwrap_or(DEFAULT_WINDOW),
        };
        let s_max = cli.smax.or(session.s_max).unwrap_or_else(|| default_s_max(&session.ring));
        Ok(Context { session, module_name, module, window, s_max })
    }

    fn range(&self) -> RangeInclusive<u32> {
        self.window.0..=self.window.1
    }

    fn ideal(&self, cli: &'s Cli) -> Result<(&'s str, &'s Ideal), CliError> {
        let name = pick(cli.ideal.as_deref(), self.session.ideal_names(), "ideal")?;
        Ok((name, lookup_ideal(self.session, name)?))
    }

    fn primes(&self, cli: &'s Cli) -> Result<Vec<(&'s str, &'s PrimeIdeal)>, CliError> {
        let names: Vec<&str> = if cli.prime.is_empty() {
            self.session.prime_names()
        } else {
            cli.prime.iter().map(String::as_str).collect()
        };
        if names.is_empty() {
            return Err(usage("the session declares no prime"));
        }
        names
            .into_iter()
            .map(|n| self.session.prime(n).map(|p| (n, p)).ok_or_else(|| usage(format!("no prime named {n:?}"))))
            .collect()
    }

    fn lab(&self, ideal: &Ideal) -> Result<Lab, CliError> {
        Ok(Lab::new(self.module.clone(), ideal.clone())?.with_s_max(self.s_max))
    }

    fn header(&self, cli: &Cli, report: &mut Report) {
        let d = &self.session.descriptor;
        report.push("command", cli.echo());
        report.push("provenance.tool", concat!("bassline ", env!("CARGO_PKG_VERSION")));
        report.push("provenance.characteristic", d.characteristic as i64);
        report.push("provenance.order", d.order.name());
        report.push("provenance.window", format!("{}..{}", self.window.0, self.window.1));
        report.push("provenance.smax", self.s_max);
        report.push("module", self.module_name);
    }
}

pub fn dimension_value(d: DimensionValue) -> Value {
    match d {
        DimensionValue::Finite(v) => Value::from(v),
        other => Value::Str(other.to_string()),
    }
}

fn series_value(v: SeriesValue) -> Value {
    match v {
        SeriesValue::Count(c) => Value::from(c),
        SeriesValue::Dim(d) => dimension_value(d),
    }
}

fn rational(r: &bassline_core::asympt::Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn run_command(session: &Session, cli: &Cli) -> Result<Report, CliError> {
    let ctx = Context::new(cli, session)?;
    let mut report = Report::new();
    ctx.header(cli, &mut report);
    match cli.command {
        CommandKind::Series | CommandKind::Fit | CommandKind::Stabilize => {
            let invariant = parse_invariant(cli, session)?;
            let (ideal_name, ideal) = ctx.ideal(cli)?;
            let prime = match invariant {
                Invariant::Grade(_) => None,
                _ => Some(ctx.primes(cli)?[0]),
            };
            if cli.command == CommandKind::Fit {
                let max_degree = cli.max_degree.unwrap_or(DEFAULT_MAX_DEGREE);
                let len = (ctx.window.1 - ctx.window.0 + 1) as usize;
                if len < max_degree + 3 {
                    return Err(usage(format!(
                        "window too small for fit: {len} values, degree {max_degree} needs at least {}",
                        max_degree + 3
                    )));
                }
            }
            let series = ctx.lab(ideal)?.series(&invariant, prime.map(|p| p.1), ctx.range())?;
            report.push("invariant", invariant.to_string());
            report.push("ideal", ideal_name);
            if let Some((name, p)) = prime {
                report.push("prime", name);
                report.push("prime_ideal", p.display());
            }
            report.push("window", format!("{}..{}", ctx.window.0, ctx.window.1));
            for (n, v) in series.iter() {
                report.push(format!("values.{n}"), series_value(v));
            }
            match cli.command {
                CommandKind::Fit => {
                    let max_degree = cli.max_degree.unwrap_or(DEFAULT_MAX_DEGREE);
                    match fit_eventual_polynomial(&series, max_degree)? {
                        Some(fit) => {
                            report.push("fit.status", "fit");
                            report.push("fit.polynomial", fit.display());
                            report.push("fit.coefficients", fit.coefficients.iter().map(rational).collect::<Vec<_>>());
                            report.push("fit.degree", fit.degree());
                            report.push("fit.onset", fit.onset);
                            report.push("fit.validated_through", fit.validated_through);
                        }
                        None => report.push("fit.status", "no-fit"),
                    }
                    report.push("fit.max_degree", max_degree);
                }
                CommandKind::Stabilize => {
                    let st = detect_stabilization(&series);
                    match (st.stable_index, st.stable_value) {
                        (Some(k), Some(v)) => {
                            report.push("stabilization.status", "stable-on-window");
                            report.push("stabilization.k", k);
                            report.push("stabilization.value", series_value(v));
                        }
                        _ => report.push("stabilization.status", "none-on-window"),
                    }
                }
                _ => {}
            }
        }
        CommandKind::Loci => {
            let (ideal_name, ideal) = ctx.ideal(cli)?;
            let primes = ctx.primes(cli)?;
            let lab = ctx.lab(ideal)?;
            report.push("ideal", ideal_name);
            report.push("window", format!("{}..{}", ctx.window.0, ctx.window.1));
            report.push("sampled", true);
            let just: Vec<PrimeIdeal> = primes.iter().map(|(_, p)| (*p).clone()).collect();
            for (name, p) in &primes {
                report.push(format!("primes.{}", key_segment(name)), p.display());
            }
            for n in ctx.range() {
                let loci = lab.loci(&just, n)?;
                for ((name, _), l) in primes.iter().zip(loci) {
                    report.push(format!("loci.{}.{n}", key_segment(name)), l.to_string());
                }
            }
        }
        CommandKind::Resolution => {
            let length = cli.i.unwrap_or(DEFAULT_RESOLUTION_LENGTH);
            let targets: Vec<(String, PresentedModule)> = if cli.window.is_some() || cli.ideal.is_some() {
                let (ideal_name, ideal) = ctx.ideal(cli)?;
                report.push("ideal", ideal_name);
                let lab = ctx.lab(ideal)?;
                ctx.range().map(|n| Ok((format!("n{n}"), lab.power_quotient(n)?))).collect::<Result<_, CliError>>()?
            } else {
                vec![(key_segment(ctx.module_name), ctx.module.clone())]
            };
            report.push("length", length);
            use rayon::prelude::*;
            let resolutions: Vec<FreeResolution> = targets.par_iter().map(|(_, m)| resolve(m, length)).collect();
            for ((label, _), res) in targets.iter().zip(&resolutions) {
                push_resolution(&mut report, label, res);
            }
        }
        CommandKind::Invariants => {
            for (name, p) in ctx.primes(cli)? {
                let key = format!("invariants.{}", key_segment(name));
                let m = ctx.module;
                let bass = (0..=ctx.s_max).map(|i| bass_number(i, p, m)).collect::<Result<Vec<_>, _>>()?;
                let betti = (0..=ctx.s_max).map(|i| betti_number(i, p, m)).collect::<Result<Vec<_>, _>>()?;
                report.push(format!("{key}.prime_ideal"), p.display());
                report.push(format!("{key}.height_upper"), p.height_upper());
                report.push(format!("{key}.bass"), bass);
                report.push(format!("{key}.betti"), betti);
                report.push(format!("{key}.depth"), dimension_value(depth_at(p, m)?));
                report.push(format!("{key}.pd"), dimension_value(pd_at(p, m, ctx.s_max)?));
                report.push(format!("{key}.id"), dimension_value(id_at(p, m)?));
            }
        }
        CommandKind::BaseChangeCheck => {
            let (name, p) = ctx.primes(cli)?[0];
            let ext_name = cli.extension.as_deref().unwrap_or("poly-t");
            let extension = match ext_name {
                "identity" => Extension::Identity,
                "poly-t" => Extension::Polynomial { variable: fresh_variable(session), with_variable: true },
                "poly-flat" => Extension::Polynomial { variable: fresh_variable(session), with_variable: false },
                other => return Err(usage(format!("unsupported extension {other:?}"))),
            };
            let rep = base_change_check(ctx.module, p, &extension, cli.smax.or(session.s_max))?;
            report.push("prime", name);
            report.push("prime_ideal", p.display());
            report.push("extension", ext_name);
            report.push("lhs", rep.lhs);
            report.push("rhs", rep.rhs);
            report.push("holds", rep.holds);
        }
    }
    Ok(report)
}

/// `t`, or `t1`, `t2`, ... if taken.
fn fresh_variable(session: &Session) -> String {
    let vars = &session.descriptor.vars;
    std::iter::once("t".to_string())
        .chain((1..).map(|k| format!("t{k}")))
        .find(|v| !vars.contains(v))
        .unwrap()
}

fn push_resolution(report: &mut Report, label: &str, res: &FreeResolution) {
    let ring = res.ring();
    let key = format!("resolution.{label}");
    report.push(format!("{key}.ranks"), res.ranks());
    report.push(format!("{key}.minimal"), res.minimal);
    match periodicity_certificate(res) {
        Some(k) => report.push(format!("{key}.periodic_from"), k),
        None => report.push(format!("{key}.periodic_from"), "none"),
    }
    for (i, d) in res.differentials.iter().enumerate() {
        let shown = normalized(ring, d);
        let rows: Vec<Vec<String>> = shown.rows().iter().map(|r| r.iter().map(|p| ring.format(p)).collect()).collect();
        report.push(format!("{key}.d{}", i + 1), rows);
    }
}

/// Read the session named by `--input`.
pub fn load_session(cli: &Cli) -> Result<Session, CliError> {
    let path = cli.input.as_ref().ok_or_else(|| usage("--input FILE is required"))?;
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::Read::read_to_string(&mut std::io::stdin(), &mut s)
            .map_err(|source| CliError::Io { path: "<stdin>".into(), source })?;
        s
    } else {
        std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })?
    };
    Ok(crate::session::parse_session_with(&text, cli.overrides()?)?)
}

/// Outcome of a full invocation: output text and exit status.
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

pub fn execute(cli: &Cli) -> Outcome {
    let run = || -> Result<(Report, Vec<String>), CliError> {
        let session = load_session(cli)?;
        let report = run_command(&session, cli)?;
        let mismatches = match &cli.expect {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
                report.mismatches(&crate::report::parse_report(&text)?)
            }
            None => Vec::new(),
        };
        Ok((report, mismatches))
    };
    let result = match cli.jobs {
        Some(0) => Err(usage("--jobs must be at least 1")),
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(run),
            Err(e) => Err(usage(format!("cannot start {n} workers: {e}"))),
        },
        None => run(),
    };
    match result {
        Ok((report, mismatches)) => {
            let stdout = report.emit(cli.format.into());
            if mismatches.is_empty() {
                Outcome { stdout, stderr: String::new(), code: 0 }
            } else {
                let stderr = mismatches.iter().map(|m| format!("mismatch: {m}\n")).collect();
                Outcome { stdout, stderr, code: 2 }
            }
        }
        Err(e) => Outcome { stdout: String::new(), stderr: format!("error: {e}\n"), code: 1 },
    }
}
