//! Command-line front end: parse a formula, run any operation of the
//! library at a point, and emit a human-readable table or CSV.
//!
//! Every report begins with a `#`-prefixed header echoing the fully
//! resolved configuration, so a CSV file regenerates itself: paste the
//! header back on a shell prompt (minus the `#`) and the same bytes come
//! out. Exit codes: `0` when every requested limit converged, `2` when a
//! limit refused to settle (the report still carries the last estimate and
//! its diagnosis), `1` for usage, parse, and domain errors.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::diffops::Direction;
use crate::error::{Error, Result};
use crate::expansion::{compound_power_coeffs, error_curve, frac_taylor_coeffs, log_grid};
use crate::exprlang::RealFn;
use crate::ito::{ito_derivative, Compound2Fn};
use crate::limits::{EpsSchedule, LimitEstimate, DEFAULT_TOL};
use crate::regularize::regularized_with_kernel;
use crate::velocity::{fractional_velocity, holder_exponent, mixed_velocity, Route};

/// Default extrapolation schedule for pointwise limits.
const POINT_DEFAULTS: (f64, f64, usize) = (0.125, 0.5, 16);
/// Default probe schedule for expansion coefficients: a gentler ratio keeps
/// the first-pass quotients well conditioned; the refinement pass chooses
/// its own depth regardless.
const SERIES_DEFAULTS: (f64, f64, usize) = (0.5, 0.7, 10);

#[derive(Parser)]
#[command(
    name = "holderkit",
    about = "Fractional velocities, expansions, and regularized derivatives of Hölder functions",
    version
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Fractional (or mixed-order) velocity at a point.
    Velocity(VelocityArgs),
    /// Fractional Taylor coefficients around a point.
    Expand(ExpandArgs),
    /// Absolute error of a truncated expansion over a step grid.
    Errorcurve(CurveArgs),
    /// Regularized derivative of a given grade.
    Regularize(RegularizeArgs),
    /// Estimate the Hölder exponent at a point.
    Exponent(ExponentArgs),
    /// Compound derivative of f(x, w(x)) for a half-rough signal w.
    Ito(ItoArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DirArg {
    Fwd,
    Bwd,
    Both,
}

impl DirArg {
    fn flag(self) -> &'static str {
        match self {
            DirArg::Fwd => "fwd",
            DirArg::Bwd => "bwd",
            DirArg::Both => "both",
        }
    }

    /// Directions to run, with the row-name prefix used when both run.
    fn runs(self) -> Vec<(Direction, &'static str)> {
        match self {
            DirArg::Fwd => vec![(Direction::Forward, "")],
            DirArg::Bwd => vec![(Direction::Backward, "")],
            DirArg::Both => vec![
                (Direction::Forward, "forward_"),
                (Direction::Backward, "backward_"),
            ],
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum RouteArg {
    Definition,
    Modular,
    Continuous,
}

impl From<RouteArg> for Route {
    fn from(r: RouteArg) -> Route {
        match r {
            RouteArg::Definition => Route::Definition,
            RouteArg::Modular => Route::Modular,
            RouteArg::Continuous => Route::Continuous,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputKind {
    Table,
    Csv,
}

#[derive(Args)]
struct ScheduleArgs {
    /// Largest step of the extrapolation schedule [default: 0.125; expand
    /// and errorcurve: 0.5]
    #[arg(long)]
    eps0: Option<f64>,
    /// Ratio between consecutive steps, in (0, 1) [default: 0.5; expand and
    /// errorcurve: 0.7]
    #[arg(long)]
    ratio: Option<f64>,
    /// Number of steps in the schedule [default: 16; expand and
    /// errorcurve: 10]
    #[arg(long)]
    steps: Option<usize>,
    /// Convergence tolerance [default: env HOLDERKIT_TOL, else 1e-7]
    #[arg(long)]
    tol: Option<f64>,
}

impl ScheduleArgs {
    fn resolve(&self, defaults: (f64, f64, usize)) -> Result<(EpsSchedule, f64)> {
        let eps0 = self.eps0.unwrap_or(defaults.0);
        let ratio = self.ratio.unwrap_or(defaults.1);
        let steps = self.steps.unwrap_or(defaults.2);
        let schedule = EpsSchedule::new(eps0, ratio, steps)?;
        let tol = match self.tol.or(tol_from_env()?) {
            Some(t) if t.is_finite() && t > 0.0 => t,
            Some(t) => {
                return Err(Error::Precondition(format!(
                    "tolerance must be positive and finite, got {t}"
                )))
            }
            None => DEFAULT_TOL,
        };
        Ok((schedule, tol))
    }
}

fn tol_from_env() -> Result<Option<f64>> {
    match std::env::var("HOLDERKIT_TOL") {
        Ok(raw) => {
            let v: f64 = raw.trim().parse().map_err(|_| {
                Error::Precondition(format!("HOLDERKIT_TOL is not a number: {raw:?}"))
            })?;
            Ok(Some(v))
        }
        Err(_) => Ok(None),
    }
}

/// Canonical echo of a resolved schedule for the report header.
fn schedule_echo(schedule: &EpsSchedule, tol: f64) -> String {
    format!(
        "--eps0 {} --ratio {} --steps {} --tol {}",
        schedule.eps0, schedule.ratio, schedule.count, tol
    )
}

#[derive(Args)]
struct OutputArgs {
    /// Output format [default: table; errorcurve: csv]
    #[arg(long, value_enum)]
    output: Option<OutputKind>,
    /// Write the report to a file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VelocityArgs {
    /// Formula in x.
    #[arg(long)]
    expr: String,
    /// Base point.
    #[arg(long, default_value_t = 0.0)]
    at: f64,
    /// Fractional order in (0, 1].
    #[arg(long)]
    beta: f64,
    /// Integer part of a mixed order n + beta.
    #[arg(long, default_value_t = 0)]
    n: usize,
    /// Direction of the one-sided limit.
    #[arg(long, value_enum, default_value_t = DirArg::Fwd)]
    dir: DirArg,
    /// Evaluation route for mixed orders.
    #[arg(long, value_enum, default_value_t = RouteArg::Definition)]
    route: RouteArg,
    #[command(flatten)]
    sched: ScheduleArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct ExpandSource {
    /// Formula in x to expand directly.
    #[arg(long)]
    expr: Option<String>,
    /// Outer smooth function g, expanding the compound g(x^alpha);
    /// accepts a name (`cos`) or a formula in x.
    #[arg(long)]
    compound: Option<String>,
}

#[derive(Args)]
struct ExpandArgs {
    #[command(flatten)]
    source: ExpandSource,
    /// Base point.
    #[arg(long, default_value_t = 0.0)]
    at: f64,
    /// Fractional grade of the expansion ladder, in (0, 1].
    #[arg(long)]
    alpha: f64,
    /// Highest ladder index; n + 1 coefficients are produced.
    #[arg(long, default_value_t = 4)]
    n: usize,
    /// Direction of the expansion.
    #[arg(long, value_enum, default_value_t = DirArg::Fwd)]
    dir: DirArg,
    #[command(flatten)]
    sched: ScheduleArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct CurveArgs {
    /// Formula in x.
    #[arg(long)]
    expr: String,
    /// Base point.
    #[arg(long, default_value_t = 0.0)]
    at: f64,
    /// Fractional grade of the expansion ladder, in (0, 1].
    #[arg(long)]
    alpha: f64,
    /// Highest ladder index of the truncated series.
    #[arg(long, default_value_t = 4)]
    n: usize,
    /// Direction of the expansion.
    #[arg(long, value_enum, default_value_t = DirArg::Fwd)]
    dir: DirArg,
    /// Smallest grid step.
    #[arg(long, default_value_t = 1e-4)]
    grid_min: f64,
    /// Largest grid step.
    #[arg(long, default_value_t = 1e-1)]
    grid_max: f64,
    /// Number of grid points, logarithmically spaced.
    #[arg(long, default_value_t = 64)]
    grid_points: usize,
    #[command(flatten)]
    sched: ScheduleArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct RegularizeArgs {
    /// Formula in x.
    #[arg(long)]
    expr: String,
    /// Base point.
    #[arg(long, default_value_t = 0.0)]
    at: f64,
    /// Grade of the kernel term, in (0, 1).
    #[arg(long)]
    beta: f64,
    /// Direction of the one-sided limit.
    #[arg(long, value_enum, default_value_t = DirArg::Fwd)]
    dir: DirArg,
    #[command(flatten)]
    sched: ScheduleArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct ExponentArgs {
    /// Formula in x.
    #[arg(long)]
    expr: String,
    /// Base point.
    #[arg(long, default_value_t = 0.0)]
    at: f64,
    /// Direction of the one-sided probe.
    #[arg(long, value_enum, default_value_t = DirArg::Fwd)]
    dir: DirArg,
    #[command(flatten)]
    sched: ScheduleArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct ItoArgs {
    /// Two-variable formula f(x, w).
    #[arg(long)]
    f: String,
    /// Formula in x for the driving signal w.
    #[arg(long)]
    w: String,
    /// Base point.
    #[arg(long, default_value_t = 0.0)]
    at: f64,
    /// Direction of the one-sided limits.
    #[arg(long, value_enum, default_value_t = DirArg::Fwd)]
    dir: DirArg,
    #[command(flatten)]
    sched: ScheduleArgs,
    #[command(flatten)]
    output: OutputArgs,
}

/// One `quantity,value,status,residual` row.
struct QRow {
    name: String,
    value: f64,
    status: String,
    residual: Option<f64>,
}

fn limit_row(name: impl Into<String>, value: f64, estimate: &LimitEstimate) -> QRow {
    QRow {
        name: name.into(),
        value,
        status: estimate.status.to_string(),
        residual: Some(estimate.residual_gamma),
    }
}

fn exact_row(name: impl Into<String>, value: f64) -> QRow {
    QRow {
        name: name.into(),
        value,
        status: "exact".into(),
        residual: None,
    }
}

/// One `k,exponent,coefficient,status` row.
struct CRow {
    k: usize,
    exponent: f64,
    coefficient: f64,
    status: String,
}

enum Report {
    Quantities(Vec<QRow>),
    Coefficients(Vec<CRow>),
    Curve(Vec<(f64, f64)>),
}

struct Rendered {
    text: String,
    out_path: Option<PathBuf>,
    code: i32,
}

/// Run the command line. `args` is the full argument vector including the
/// program name; reports go to `out`, diagnostics to `err`. Returns the
/// process exit code and never panics on user input.
pub fn run<I, O, E>(args: I, out: &mut O, err: &mut E) -> i32
where
    I: IntoIterator,
    I::Item: Into<OsString> + Clone,
    O: Write,
    E: Write,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(rendered.as_bytes());
                    0
                }
                _ => {
                    let _ = err.write_all(rendered.as_bytes());
                    1
                }
            };
        }
    };

    let mut notes = Vec::new();
    let outcome = match cli.cmd {
        Cmd::Velocity(a) => cmd_velocity(a, &mut notes),
        Cmd::Expand(a) => cmd_expand(a, &mut notes),
        Cmd::Errorcurve(a) => cmd_errorcurve(a, &mut notes),
        Cmd::Regularize(a) => cmd_regularize(a, &mut notes),
        Cmd::Exponent(a) => cmd_exponent(a, &mut notes),
        Cmd::Ito(a) => cmd_ito(a, &mut notes),
    };
    for note in &notes {
        let _ = writeln!(err, "holderkit: {note}");
    }
    match outcome {
        Ok(rendered) => match rendered.out_path {
            Some(path) => match std::fs::write(&path, rendered.text) {
                Ok(()) => rendered.code,
                Err(io) => {
                    let _ = writeln!(err, "holderkit: cannot write {}: {io}", path.display());
                    1
                }
            },
            None => {
                let _ = out.write_all(rendered.text.as_bytes());
                rendered.code
            }
        },
        Err(e) => {
            let _ = writeln!(err, "holderkit: {e}");
            match e {
                Error::NonConvergent { .. } | Error::RouteDisagreement { .. } => 2,
                _ => 1,
            }
        }
    }
}

fn cmd_velocity(a: VelocityArgs, notes: &mut Vec<String>) -> Result<Rendered> {
    let f = RealFn::parse(&a.expr)?;
    let (schedule, tol) = a.sched.resolve(POINT_DEFAULTS)?;
    let header = format!(
        "# holderkit velocity --expr \"{}\" --at {} --beta {} --n {} --route {} --dir {} {}",
        a.expr,
        a.at,
        a.beta,
        a.n,
        Route::from(a.route),
        a.dir.flag(),
        schedule_echo(&schedule, tol),
    );

    let mut rows = Vec::new();
    let mut code = 0;
    let mut settled = Vec::new();
    for (dir, prefix) in a.dir.runs() {
        let outcome = if a.n == 0 {
            fractional_velocity(&f, a.at, a.beta, dir, &schedule, tol)
        } else {
            mixed_velocity(&f, a.at, a.n, a.beta, dir, a.route.into(), &schedule, tol)
        };
        match outcome {
            Ok(v) => {
                rows.push(limit_row(format!("{prefix}velocity"), v.value, &v.estimate));
                settled.push(v.value);
            }
            Err(e @ Error::NonConvergent { .. }) => {
                notes.push(e.to_string());
                if let Error::NonConvergent { estimate, .. } = e {
                    rows.push(limit_row(
                        format!("{prefix}velocity"),
                        estimate.value,
                        &estimate,
                    ));
                }
                code = 2;
            }
            Err(e) => return Err(e),
        }
    }
    if settled.len() == 2 {
        rows.push(exact_row("agreement_delta", (settled[0] - settled[1]).abs()));
    }
    Ok(render(
        &header,
        &Report::Quantities(rows),
        &a.output,
        OutputKind::Table,
        code,
    ))
}

fn cmd_expand(a: ExpandArgs, _notes: &mut Vec<String>) -> Result<Rendered> {
    let (schedule, tol) = a.sched.resolve(SERIES_DEFAULTS)?;
    let dir_runs = a.dir.runs();
    if dir_runs.len() != 1 {
        return Err(Error::Precondition(
            "expand runs one direction at a time; pass --dir fwd or --dir bwd".into(),
        ));
    }
    let dir = dir_runs[0].0;

    let (source_echo, series) = match (&a.source.expr, &a.source.compound) {
        (Some(expr), None) => {
            let f = RealFn::parse(expr)?;
            (
                format!("--expr \"{expr}\""),
                frac_taylor_coeffs(&f, a.at, a.alpha, a.n, dir, &schedule, tol)?,
            )
        }
        (None, Some(outer)) => {
            let g = parse_outer(outer)?;
            (
                format!("--compound \"{outer}\""),
                compound_power_coeffs(&g, a.at, a.alpha, a.n, dir)?,
            )
        }
        _ => unreachable!("clap enforces exactly one source"),
    };
    let header = format!(
        "# holderkit expand {source_echo} --at {} --alpha {} --n {} --dir {} {}",
        a.at,
        a.alpha,
        a.n,
        a.dir.flag(),
        schedule_echo(&schedule, tol),
    );

    let mut rows = Vec::new();
    let mut code = 0;
    for (k, (&c, est)) in series.coeffs.iter().zip(&series.estimates).enumerate() {
        if !est.converged() {
            code = 2;
        }
        rows.push(CRow {
            k,
            exponent: series.exponent(k),
            coefficient: c,
            status: est.status.to_string(),
        });
    }
    Ok(render(
        &header,
        &Report::Coefficients(rows),
        &a.output,
        OutputKind::Table,
        code,
    ))
}

fn cmd_errorcurve(a: CurveArgs, notes: &mut Vec<String>) -> Result<Rendered> {
    let f = RealFn::parse(&a.expr)?;
    let (schedule, tol) = a.sched.resolve(SERIES_DEFAULTS)?;
    let dir_runs = a.dir.runs();
    if dir_runs.len() != 1 {
        return Err(Error::Precondition(
            "errorcurve runs one direction at a time; pass --dir fwd or --dir bwd".into(),
        ));
    }
    let dir = dir_runs[0].0;
    let grid = log_grid(a.grid_min, a.grid_max, a.grid_points)?;
    let series = frac_taylor_coeffs(&f, a.at, a.alpha, a.n, dir, &schedule, tol)?;
    let curve = error_curve(&f, &series, &grid)?;
    if curve.skipped > 0 {
        notes.push(format!(
            "{} grid step(s) left the domain and were dropped",
            curve.skipped
        ));
    }
    let header = format!(
        "# holderkit errorcurve --expr \"{}\" --at {} --alpha {} --n {} --dir {} --grid-min {} --grid-max {} --grid-points {} {}",
        a.expr,
        a.at,
        a.alpha,
        a.n,
        a.dir.flag(),
        a.grid_min,
        a.grid_max,
        a.grid_points,
        schedule_echo(&schedule, tol),
    );
    Ok(render(
        &header,
        &Report::Curve(curve.points),
        &a.output,
        OutputKind::Csv,
        0,
    ))
}

fn cmd_regularize(a: RegularizeArgs, notes: &mut Vec<String>) -> Result<Rendered> {
    let f = RealFn::parse(&a.expr)?;
    let (schedule, tol) = a.sched.resolve(POINT_DEFAULTS)?;
    let header = format!(
        "# holderkit regularize --expr \"{}\" --at {} --beta {} --dir {} {}",
        a.expr,
        a.at,
        a.beta,
        a.dir.flag(),
        schedule_echo(&schedule, tol),
    );
    if !(a.beta > 0.0 && a.beta < 1.0) {
        return Err(Error::UnsupportedExponent { beta: a.beta });
    }

    let mut rows = Vec::new();
    let mut code = 0;
    let mut settled = Vec::new();
    for (dir, prefix) in a.dir.runs() {
        match fractional_velocity(&f, a.at, a.beta, dir, &schedule, tol) {
            Ok(v) => {
                rows.push(limit_row(format!("{prefix}kernel"), v.value, &v.estimate));
                let est = regularized_with_kernel(&f, a.at, a.beta, v.value, dir, &schedule, tol)?;
                rows.push(limit_row(format!("{prefix}regularized"), est.value, &est));
                if est.converged() {
                    settled.push(est.value);
                } else {
                    notes.push(format!(
                        "{dir} regularized quotient did not converge (status {})",
                        est.status
                    ));
                    code = 2;
                }
            }
            Err(e @ Error::NonConvergent { .. }) => {
                notes.push(e.to_string());
                if let Error::NonConvergent { estimate, .. } = e {
                    rows.push(limit_row(format!("{prefix}kernel"), estimate.value, &estimate));
                }
                code = 2;
            }
            Err(e) => return Err(e),
        }
    }
    if settled.len() == 2 {
        rows.push(exact_row("agreement_delta", (settled[0] - settled[1]).abs()));
    }
    Ok(render(
        &header,
        &Report::Quantities(rows),
        &a.output,
        OutputKind::Table,
        code,
    ))
}

fn cmd_exponent(a: ExponentArgs, _notes: &mut Vec<String>) -> Result<Rendered> {
    let f = RealFn::parse(&a.expr)?;
    let (schedule, tol) = a.sched.resolve(POINT_DEFAULTS)?;
    let header = format!(
        "# holderkit exponent --expr \"{}\" --at {} --dir {} {}",
        a.expr,
        a.at,
        a.dir.flag(),
        schedule_echo(&schedule, tol),
    );
    let mut rows = Vec::new();
    for (dir, prefix) in a.dir.runs() {
        let report = holder_exponent(&f, a.at, dir, &schedule, tol)?;
        rows.push(QRow {
            name: format!("{prefix}alpha_hat"),
            value: report.alpha_hat,
            status: if report.degenerate {
                "degenerate".into()
            } else {
                "fit".into()
            },
            residual: Some(report.fit_residual),
        });
        rows.push(limit_row(
            format!("{prefix}velocity"),
            report.velocity.value,
            &report.velocity,
        ));
    }
    Ok(render(
        &header,
        &Report::Quantities(rows),
        &a.output,
        OutputKind::Table,
        0,
    ))
}

fn cmd_ito(a: ItoArgs, notes: &mut Vec<String>) -> Result<Rendered> {
    let f = Compound2Fn::parse(&a.f)?;
    let w = RealFn::parse(&a.w)?;
    let (schedule, tol) = a.sched.resolve(POINT_DEFAULTS)?;
    let header = format!(
        "# holderkit ito --f \"{}\" --w \"{}\" --at {} --dir {} {}",
        a.f,
        a.w,
        a.at,
        a.dir.flag(),
        schedule_echo(&schedule, tol),
    );
    let mut rows = Vec::new();
    let mut code = 0;
    let mut settled = Vec::new();
    for (dir, prefix) in a.dir.runs() {
        match ito_derivative(&f, &w, a.at, dir, &schedule, tol) {
            Ok(d) => {
                rows.push(QRow {
                    name: format!("{prefix}assembled"),
                    value: d.value,
                    status: "converged".into(),
                    residual: None,
                });
                rows.push(limit_row(format!("{prefix}direct"), d.direct, &d.estimate));
                rows.push(exact_row(format!("{prefix}partial_x"), d.partial_x));
                rows.push(QRow {
                    name: format!("{prefix}w_term"),
                    value: d.w_term,
                    status: "converged".into(),
                    residual: None,
                });
                rows.push(QRow {
                    name: format!("{prefix}covariation_term"),
                    value: d.covariation_term,
                    status: "converged".into(),
                    residual: None,
                });
                settled.push(d.value);
            }
            Err(e @ (Error::NonConvergent { .. } | Error::RouteDisagreement { .. })) => {
                notes.push(e.to_string());
                code = 2;
            }
            Err(e) => return Err(e),
        }
    }
    if settled.len() == 2 {
        rows.push(exact_row("agreement_delta", (settled[0] - settled[1]).abs()));
    }
    Ok(render(
        &header,
        &Report::Quantities(rows),
        &a.output,
        OutputKind::Table,
        code,
    ))
}

/// Accept an outer function by name (`cos`) or as a formula in x.
fn parse_outer(src: &str) -> Result<RealFn> {
    match RealFn::parse(src) {
        Ok(f) => Ok(f),
        Err(first) => RealFn::parse(&format!("{src}(x)")).map_err(|_| first),
    }
}

fn render(
    header: &str,
    report: &Report,
    output: &OutputArgs,
    default_kind: OutputKind,
    code: i32,
) -> Rendered {
    let kind = output.output.unwrap_or(default_kind);
    let mut text = String::new();
    let _ = writeln!(text, "{header}");
    match (report, kind) {
        (Report::Quantities(rows), OutputKind::Csv) => {
            let _ = writeln!(text, "quantity,value,status,residual");
            for r in rows {
                let residual = r
                    .residual
                    .map(|g| format!("{g:.16e}"))
                    .unwrap_or_default();
                let _ = writeln!(text, "{},{:.16e},{},{}", r.name, r.value, r.status, residual);
            }
        }
        (Report::Quantities(rows), OutputKind::Table) => {
            let _ = writeln!(
                text,
                "{:<26} {:<24} {:<13} {}",
                "quantity", "value", "status", "residual"
            );
            for r in rows {
                let residual = r.residual.map(|g| format!("{g:e}")).unwrap_or("-".into());
                let _ = writeln!(
                    text,
                    "{:<26} {:<24} {:<13} {}",
                    r.name, r.value, r.status, residual
                );
            }
        }
        (Report::Coefficients(rows), OutputKind::Csv) => {
            let _ = writeln!(text, "k,exponent,coefficient,status");
            for r in rows {
                let _ = writeln!(
                    text,
                    "{},{:.16e},{:.16e},{}",
                    r.k, r.exponent, r.coefficient, r.status
                );
            }
        }
        (Report::Coefficients(rows), OutputKind::Table) => {
            let _ = writeln!(
                text,
                "{:<4} {:<10} {:<24} {}",
                "k", "exponent", "coefficient", "status"
            );
            for r in rows {
                let _ = writeln!(
                    text,
                    "{:<4} {:<10} {:<24} {}",
                    r.k, r.exponent, r.coefficient, r.status
                );
            }
        }
        (Report::Curve(points), OutputKind::Csv) => {
            let _ = writeln!(text, "x,abs_error");
            for (x, e) in points {
                let _ = writeln!(text, "{x:.16e},{e:.16e}");
            }
        }
        (Report::Curve(points), OutputKind::Table) => {
            let _ = writeln!(text, "{:<24} {}", "x", "abs_error");
            for (x, e) in points {
                let _ = writeln!(text, "{:<24} {}", x, e);
            }
        }
    }
    Rendered {
        text,
        out_path: output.out.clone(),
        code,
    }
}
