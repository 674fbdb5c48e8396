use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use tempus::verify::{run_suite, CheckKind, SuiteConfig};
use tempus::{
    caputo_derivative_detailed, frac_integral_detailed, parse, rl_derivative_detailed, Error,
    Execution, Expr, FracOptions, FracOrder, Generator, KernelVariant, Labelled, QuadratureConfig,
    ScaleSpec, TimeScale, ZeroPowerPolicy,
};

const TOL_ENV: &str = "TEMPUS_FRAC_TOL";

#[derive(Parser)]
#[command(
    name = "tempus",
    version,
    about = "Delta and fractional calculus on time scales"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Describe a time scale and tabulate sigma, rho and mu.
    ScaleInfo(ScaleInfoArgs),
    /// Fractional integral I^alpha f(t).
    FracInt(FracIntArgs),
    /// Riemann-Liouville or Caputo fractional derivative.
    FracDer(FracDerArgs),
    /// Run the verification suite.
    Verify(VerifyArgs),
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct ScaleSource {
    /// Compact generator, e.g. "integers(0,5)" or "q_scale(0.5,0,3)".
    #[arg(long)]
    generator: Option<String>,
    /// JSON list of closed pieces, e.g. "[[0,1],[2,2]]".
    #[arg(long)]
    pieces: Option<String>,
    /// JSON scale document with a "pieces" or "generator" field.
    #[arg(long, value_name = "PATH")]
    scale_file: Option<PathBuf>,
}

#[derive(Args)]
struct ScaleInfoArgs {
    #[command(flatten)]
    scale: ScaleSource,
    /// Points at which to tabulate; defaults to piece endpoints.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    at: Vec<f64>,
    /// Emit the table as CSV.
    #[arg(long)]
    csv: bool,
}

#[derive(Args)]
struct Tolerances {
    /// Absolute quadrature tolerance (default 1e-10 or $TEMPUS_FRAC_TOL).
    #[arg(long)]
    abs_tol: Option<f64>,
    /// Relative quadrature tolerance (default 1e-10 or $TEMPUS_FRAC_TOL).
    #[arg(long)]
    rel_tol: Option<f64>,
    /// Maximum bisection depth.
    #[arg(long)]
    max_depth: Option<u32>,
}

#[derive(Args)]
struct OperatorArgs {
    #[command(flatten)]
    scale: ScaleSource,
    /// Expression in t, e.g. "t^2" or "sin(t)".
    #[arg(short = 'f', long = "function")]
    function: String,
    /// Lower limit.
    #[arg(short = 'a', allow_negative_numbers = true)]
    a: f64,
    /// Evaluation point.
    #[arg(short = 't', allow_negative_numbers = true)]
    t: f64,
    /// Order alpha > 0.
    #[arg(long)]
    alpha: f64,
    /// Handling of 0^(alpha-1) terms at right-scattered points.
    #[arg(long, value_enum, default_value_t = Policy::Zero)]
    policy: Policy,
    #[command(flatten)]
    tolerances: Tolerances,
}

#[derive(Args)]
struct FracIntArgs {
    #[command(flatten)]
    op: OperatorArgs,
    #[arg(long, value_enum, default_value_t = Kernel::Sigma)]
    kernel: Kernel,
    /// Evaluate both kernels.
    #[arg(long)]
    both: bool,
    /// Evaluate at every scale point in [a, t] and emit CSV.
    #[arg(long)]
    sweep_t: bool,
    /// Interior points per continuous piece for --sweep-t.
    #[arg(long, default_value_t = 8)]
    samples: usize,
    /// Write CSV rows to this file instead of stdout.
    #[arg(long, value_name = "PATH")]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct FracDerArgs {
    #[command(flatten)]
    op: OperatorArgs,
    #[arg(long = "type", value_enum)]
    kind: DerivativeType,
}

#[derive(Args)]
struct VerifyArgs {
    /// JSON suite config; omitted fields take the defaults.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Run a single family of checks.
    #[arg(long, value_parser = parse_check)]
    only: Option<CheckKind>,
    /// Write the report table as CSV.
    #[arg(long, value_name = "PATH")]
    csv: Option<PathBuf>,
    /// Run checks on one thread.
    #[arg(long)]
    sequential: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kernel {
    Sigma,
    Legacy,
}

impl Kernel {
    fn variant(self) -> KernelVariant {
        match self {
            Kernel::Sigma => KernelVariant::Sigma,
            Kernel::Legacy => KernelVariant::Plain,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Kernel::Sigma => "sigma",
            Kernel::Legacy => "legacy",
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Policy {
    Zero,
    Strict,
}

#[derive(Clone, Copy, ValueEnum)]
enum DerivativeType {
    Rl,
    Caputo,
}

fn parse_check(s: &str) -> Result<CheckKind, String> {
    CheckKind::from_name(s).ok_or_else(|| {
        let names: Vec<&str> = CheckKind::ALL.iter().map(|k| k.name()).collect();
        format!(
            "unknown check '{s}' (expected one of: {})",
            names.join(", ")
        )
    })
}

enum CliError {
    Usage(String),
    Compute(Error),
    VerifyFailed(usize),
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Compute(_) => 2,
            CliError::VerifyFailed(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Io(m) => f.write_str(m),
            CliError::Compute(e) => {
                write!(f, "{e}")?;
                if matches!(e, Error::SingularTerm { .. }) {
                    write!(
                        f,
                        "\nhint: rerun with --policy zero to drop the divergent term at right-scattered points"
                    )?;
                }
                Ok(())
            }
            CliError::VerifyFailed(n) => write!(f, "{n} check(s) failed"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Compute(e)
    }
}

fn io_error(path: &Path, e: io::Error) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

fn stdout_error(e: io::Error) -> CliError {
    CliError::Io(format!("stdout: {e}"))
}

/// Formats with 12 significant digits.
fn num(x: f64) -> String {
    if !x.is_finite() || x == 0.0 {
        return format!("{x}");
    }
    let rounded: f64 = format!("{x:.11e}").parse().expect("formatted float parses");
    let exp = rounded.abs().log10().floor();
    if (-5.0..16.0).contains(&exp) {
        format!("{rounded}")
    } else {
        format!("{rounded:e}")
    }
}

fn resolve_scale(src: &ScaleSource) -> Result<TimeScale, CliError> {
    let spec = if let Some(g) = &src.generator {
        let g: Generator = g.parse().map_err(|e| {
            CliError::Usage(format!(
                "--generator: {e}\n  {g}\n  {}^",
                " ".repeat(column_pad(&e))
            ))
        })?;
        ScaleSpec::Generator(g)
    } else if let Some(p) = &src.pieces {
        let pieces: Vec<[f64; 2]> =
            serde_json::from_str(p).map_err(|e| CliError::Usage(format!("--pieces: {e}")))?;
        ScaleSpec::Pieces(pieces)
    } else if let Some(path) = &src.scale_file {
        let text = fs::read_to_string(path).map_err(|e| io_error(path, e))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?
    } else {
        unreachable!("clap requires one scale source")
    };
    Ok(spec.build()?)
}

fn column_pad(e: &tempus::timescale::GeneratorSyntaxError) -> usize {
    e.column.saturating_sub(1)
}

fn parse_function(src: &str) -> Result<Labelled<Expr>, CliError> {
    let func = parse(src).map_err(|e| {
        let pad = src[..e.offset().min(src.len())].chars().count();
        CliError::Usage(format!("-f: {e}\n  {src}\n  {}^", " ".repeat(pad)))
    })?;
    Ok(Labelled {
        label: src.to_string(),
        func,
    })
}

fn env_tolerance() -> Result<Option<f64>, CliError> {
    match std::env::var(TOL_ENV) {
        Ok(v) => match v.trim().parse::<f64>() {
            Ok(tol) if tol > 0.0 && tol.is_finite() => Ok(Some(tol)),
            _ => Err(CliError::Usage(format!(
                "{TOL_ENV}={v:?} is not a positive number"
            ))),
        },
        Err(_) => Ok(None),
    }
}

fn quadrature(t: &Tolerances) -> Result<QuadratureConfig, CliError> {
    let mut cfg = QuadratureConfig::default();
    if let Some(tol) = env_tolerance()? {
        cfg = cfg.with_tolerance(tol);
    }
    if let Some(v) = t.abs_tol {
        cfg.abs_tol = v;
    }
    if let Some(v) = t.rel_tol {
        cfg.rel_tol = v;
    }
    if let Some(v) = t.max_depth {
        cfg.max_depth = v;
    }
    cfg.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(cfg)
}

struct Resolved {
    ts: TimeScale,
    f: Labelled<Expr>,
    order: FracOrder,
    policy: ZeroPowerPolicy,
    quadrature: QuadratureConfig,
}

fn resolve_operator(op: &OperatorArgs) -> Result<Resolved, CliError> {
    let ts = resolve_scale(&op.scale)?;
    let f = parse_function(&op.function)?;
    let order = FracOrder::new(op.alpha).map_err(|e| CliError::Usage(format!("--alpha: {e}")))?;
    for (flag, v) in [("-a", op.a), ("-t", op.t)] {
        if !ts.contains(v) {
            return Err(CliError::Usage(format!(
                "{flag} {v} is not a point of {ts}"
            )));
        }
    }
    Ok(Resolved {
        ts,
        f,
        order,
        policy: match op.policy {
            Policy::Zero => ZeroPowerPolicy::ZeroConvention,
            Policy::Strict => ZeroPowerPolicy::StrictError,
        },
        quadrature: quadrature(&op.tolerances)?,
    })
}

fn scale_info(args: &ScaleInfoArgs, out: &mut impl Write) -> Result<(), CliError> {
    let ts = resolve_scale(&args.scale)?;
    let intervals = ts.pieces().iter().filter(|(l, r)| r > l).count();
    let points = if args.at.is_empty() {
        ts.sample_points(ts.min(), ts.max(), 0)?
    } else {
        args.at.clone()
    };
    let mut rows = Vec::with_capacity(points.len());
    for &p in &points {
        rows.push((
            p,
            ts.sigma(p)?,
            ts.rho(p)?,
            ts.graininess(p)?,
            ts.classify(p)?,
        ));
    }
    let w = |r: io::Result<()>| r.map_err(stdout_error);
    if args.csv {
        w(writeln!(out, "t,sigma,rho,mu,class"))?;
        for (p, s, r, m, c) in rows {
            w(writeln!(out, "{p},{s},{r},{m},\"{c}\""))?;
        }
        return Ok(());
    }
    w(writeln!(out, "scale: {ts}"))?;
    w(writeln!(out, "pieces: {}", ts.pieces().len()))?;
    w(writeln!(out, "intervals: {intervals}"))?;
    w(writeln!(
        out,
        "isolated_points: {}",
        ts.isolated_point_count()
    ))?;
    w(writeln!(out, "min: {}", num(ts.min())))?;
    w(writeln!(out, "max: {}", num(ts.max())))?;
    for (p, s, r, m, c) in rows {
        w(writeln!(
            out,
            "t={} sigma={} rho={} mu={} class=\"{c}\"",
            num(p),
            num(s),
            num(r),
            num(m)
        ))?;
    }
    Ok(())
}

fn frac_int(args: &FracIntArgs, out: &mut impl Write) -> Result<(), CliError> {
    let r = resolve_operator(&args.op)?;
    let kernels: Vec<Kernel> = if args.both {
        vec![Kernel::Sigma, Kernel::Legacy]
    } else {
        vec![args.kernel]
    };
    let options = |k: Kernel| FracOptions {
        kernel: k.variant(),
        zero_power: r.policy,
        quadrature: r.quadrature,
    };
    let (a, t) = (args.op.a, args.op.t);

    if args.sweep_t || args.csv.is_some() {
        let points = if args.sweep_t {
            r.ts.sample_points(a, t, args.samples)?
        } else {
            vec![r.ts.snap(t)?]
        };
        let mut columns = Vec::new();
        for &k in &kernels {
            let values = tempus::frac_integral_sweep(
                &r.f,
                &r.ts,
                a,
                &points,
                r.order,
                &options(k),
                Execution::Parallel,
            );
            columns.push(
                values
                    .into_iter()
                    .map(|v| v.map(|v| v.value))
                    .collect::<Result<Vec<_>, _>>()?,
            );
        }
        let mut text = String::from("t");
        for k in &kernels {
            text.push(',');
            text.push_str(k.name());
        }
        text.push('\n');
        for (i, p) in points.iter().enumerate() {
            text.push_str(&p.to_string());
            for col in &columns {
                text.push(',');
                text.push_str(&col[i].to_string());
            }
            text.push('\n');
        }
        return match &args.csv {
            Some(path) => fs::write(path, text).map_err(|e| io_error(path, e)),
            None => out.write_all(text.as_bytes()).map_err(stdout_error),
        };
    }

    let mut fields = Vec::new();
    let mut zero_power = false;
    for &k in &kernels {
        let v = frac_integral_detailed(&r.f, &r.ts, a, t, r.order, &options(k))?;
        zero_power |= v.zero_power_applied;
        fields.push(format!("{}={}", k.name(), num(v.value)));
    }
    fields.push(format!("zero_power_applied={zero_power}"));
    writeln!(out, "{}", fields.join(" ")).map_err(stdout_error)
}

fn frac_der(args: &FracDerArgs, out: &mut impl Write) -> Result<(), CliError> {
    let r = resolve_operator(&args.op)?;
    let (a, t) = (args.op.a, args.op.t);
    let (name, v) = match args.kind {
        DerivativeType::Rl => (
            "rl",
            rl_derivative_detailed(&r.f, &r.ts, a, t, r.order, r.policy, &r.quadrature)?,
        ),
        DerivativeType::Caputo => (
            "caputo",
            caputo_derivative_detailed(&r.f, &r.ts, a, t, r.order, r.policy, &r.quadrature)?,
        ),
    };
    writeln!(
        out,
        "{name}={} zero_power_applied={}",
        num(v.value),
        v.zero_power_applied
    )
    .map_err(stdout_error)
}

fn load_suite(path: Option<&Path>) -> Result<SuiteConfig, CliError> {
    let (mut cfg, has_quadrature) = match path {
        None => (SuiteConfig::default(), false),
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| io_error(path, e))?;
            let value: serde_json::Value = serde_json::from_str(&text)
                .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
            let has_quadrature = value.get("quadrature").is_some();
            let cfg = serde_json::from_value(value)
                .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
            (cfg, has_quadrature)
        }
    };
    if !has_quadrature {
        if let Some(tol) = env_tolerance()? {
            cfg.quadrature = cfg.quadrature.with_tolerance(tol);
        }
    }
    Ok(cfg)
}

fn verify(args: &VerifyArgs, out: &mut impl Write) -> Result<(), CliError> {
    let mut cfg = load_suite(args.config.as_deref())?;
    if let Some(kind) = args.only {
        cfg = cfg.only(kind);
    }
    if args.sequential {
        cfg.execution = Execution::Sequential;
    }
    let report = run_suite(&cfg)?;
    out.write_all(report.to_text().as_bytes())
        .map_err(stdout_error)?;
    if let Some(path) = &args.csv {
        let file = fs::File::create(path).map_err(|e| io_error(path, e))?;
        report.write_csv(file).map_err(|e| io_error(path, e))?;
    }
    if report.all_passed() {
        Ok(())
    } else {
        Err(CliError::VerifyFailed(report.failed))
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let result = match &cli.command {
        Command::ScaleInfo(args) => scale_info(args, &mut out),
        Command::FracInt(args) => frac_int(args, &mut out),
        Command::FracDer(args) => frac_der(args, &mut out),
        Command::Verify(args) => verify(args, &mut out),
    };
    let _ = out.flush();
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
