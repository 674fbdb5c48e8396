//! Executable checks of the repeated-integration identities, their failure
//! for order 3 on the integers, and the reductions of the fractional
//! operators.
//!
//! Every check produces a [`Report`]. A report with [`Expectation::Match`]
//! passes when `abs_err <= tol` or `rel_err <= tol`; one with
//! [`Expectation::Mismatch`] passes when neither holds, i.e. when the
//! discrepancy it looks for is exhibited.

use std::fmt::Write as _;
use std::io;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::delta_calc::{
    delta_derivative, delta_integral, repeated_integral, Labelled, ScaleFunction,
};
use crate::error::{Error, Result};
use crate::expr::{parse, Expr};
use crate::fractional::{
    alternating_coefficient, binomial_expanded_g, frac_integral, gamma, FracOptions, FracOrder,
    KernelVariant,
};
use crate::parallel::{map_slice, Execution};
use crate::quadrature::QuadratureConfig;
use crate::timescale::{Generator, ScaleSpec, Segment, TimeScale};

pub const CSV_HEADER: [&str; 9] = [
    "check", "scale", "f", "order", "lhs", "rhs", "abs_err", "rel_err", "pass",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Expectation {
    Match,
    Mismatch,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub check: String,
    pub scale: String,
    pub f: String,
    pub order: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub abs_err: f64,
    pub rel_err: f64,
    pub tolerance: f64,
    pub expect: Expectation,
    pub pass: bool,
    pub runtime_ms: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl Report {
    #[allow(clippy::too_many_arguments)]
    pub fn compare(
        check: &str,
        scale: impl Into<String>,
        f: impl Into<String>,
        order: f64,
        lhs: f64,
        rhs: f64,
        tolerance: f64,
        expect: Expectation,
    ) -> Report {
        let abs_err = (lhs - rhs).abs();
        let rel_err = abs_err / rhs.abs().max(1.0);
        let agree = abs_err <= tolerance || rel_err <= tolerance;
        Report {
            check: check.to_string(),
            scale: scale.into(),
            f: f.into(),
            order,
            lhs,
            rhs,
            abs_err,
            rel_err,
            tolerance,
            expect,
            pass: match expect {
                Expectation::Match => agree,
                Expectation::Mismatch => !agree,
            },
            runtime_ms: 0.0,
            error: None,
        }
    }

    /// A failed report for a check that raised an error.
    pub fn errored(
        check: &str,
        scale: impl Into<String>,
        f: impl Into<String>,
        order: f64,
        tolerance: f64,
        err: &Error,
    ) -> Report {
        Report {
            check: check.to_string(),
            scale: scale.into(),
            f: f.into(),
            order,
            lhs: f64::NAN,
            rhs: f64::NAN,
            abs_err: f64::NAN,
            rel_err: f64::NAN,
            tolerance,
            expect: Expectation::Match,
            pass: false,
            runtime_ms: 0.0,
            error: Some(err.to_string()),
        }
    }

    fn timed(mut self, start: Instant) -> Report {
        self.runtime_ms = start.elapsed().as_secs_f64() * 1e3;
        self
    }

    fn with_scale(mut self, scale: &str) -> Report {
        self.scale = scale.to_string();
        self
    }
}

/// Repeated integration against the sigma-kernel integral of order `n`.
#[allow(clippy::too_many_arguments)]
pub fn check_cauchy(
    f: &dyn ScaleFunction,
    ts: &TimeScale,
    a: f64,
    t: f64,
    n: u32,
    tol: f64,
    cfg: &QuadratureConfig,
) -> Result<Report> {
    check_kernel_coherence(f, ts, a, t, n, KernelVariant::Sigma, tol, cfg).map(|mut r| {
        r.check = "cauchy".into();
        if n > 2 {
            r.expect = Expectation::Match;
        }
        r
    })
}

/// Repeated integration against the fractional integral with `kernel`.
///
/// The sigma kernel is expected to agree; the plain kernel is expected to
/// disagree.
#[allow(clippy::too_many_arguments)]
pub fn check_kernel_coherence(
    f: &dyn ScaleFunction,
    ts: &TimeScale,
    a: f64,
    t: f64,
    n: u32,
    kernel: KernelVariant,
    tol: f64,
    cfg: &QuadratureConfig,
) -> Result<Report> {
    let start = Instant::now();
    let lhs = repeated_integral(f, ts, a, t, n, cfg)?;
    let opts = FracOptions {
        kernel,
        quadrature: *cfg,
        ..FracOptions::default()
    };
    let rhs = frac_integral(f, ts, a, t, FracOrder::new(f64::from(n))?, &opts)?;
    let (check, expect) = match kernel {
        KernelVariant::Sigma => ("kernel_sigma_coherent", Expectation::Match),
        KernelVariant::Plain => ("kernel_legacy_incoherent", Expectation::Mismatch),
    };
    Ok(Report::compare(
        check,
        ts.to_string(),
        f.label(),
        f64::from(n),
        lhs,
        rhs,
        tol,
        expect,
    )
    .timed(start))
}

/// `sum_{t_{n-1} < t} ... sum_{t_0 < t_1} 1` on the nonnegative integers.
fn nested_integer_sum(n: u32, upper: u64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    (0..upper).map(|s| nested_integer_sum(n - 1, s)).sum()
}

/// Order-`n` repeated summation of `f = 1` on `{0, ..., t}` by brute force,
/// against the sigma-kernel formula. Passes when the two differ.
pub fn counterexample(t: u32, n: u32, tol: f64) -> Result<Report> {
    if t < 1 {
        return Err(Error::InvalidGenerator(format!(
            "counterexample needs t >= 1, got {t}"
        )));
    }
    let start = Instant::now();
    let generator = Generator::Integers {
        a: 0,
        b: i64::from(t),
    };
    let ts = TimeScale::generate(&generator)?;
    let lhs = nested_integer_sum(n, u64::from(t));
    let one = |_: f64| 1.0;
    let rhs = frac_integral(
        &one,
        &ts,
        0.0,
        f64::from(t),
        FracOrder::new(f64::from(n))?,
        &FracOptions::default(),
    )?;
    Ok(Report::compare(
        "counterexample",
        generator.to_string(),
        "1",
        f64::from(n),
        lhs,
        rhs,
        tol,
        Expectation::Mismatch,
    )
    .timed(start))
}

/// Order-3 counterexample at `t` on the integer window `{0, ..., t}`.
pub fn counterexample_n3(t: u32, tol: f64) -> Result<Report> {
    counterexample(t, 3, tol)
}

/// Sigma-kernel integral of `1` on `[0, t]` against `t^alpha / Gamma(alpha + 1)`.
pub fn check_real_reduction(
    alpha: f64,
    t: f64,
    tol: f64,
    cfg: &QuadratureConfig,
) -> Result<Report> {
    let start = Instant::now();
    if t.is_nan() || t <= 0.0 {
        return Err(Error::ReversedBounds { a: 0.0, b: t });
    }
    let ts = TimeScale::interval(0.0, t)?;
    let opts = FracOptions {
        quadrature: *cfg,
        ..FracOptions::default()
    };
    let one = |_: f64| 1.0;
    let lhs = frac_integral(&one, &ts, 0.0, t, FracOrder::new(alpha)?, &opts)?;
    let rhs = t.powf(alpha) / gamma(alpha + 1.0)?;
    Ok(Report::compare(
        "real_reduction",
        ts.to_string(),
        "1",
        alpha,
        lhs,
        rhs,
        tol,
        Expectation::Match,
    )
    .timed(start))
}

/// Integer-order sigma-kernel integral against its binomial expansion.
#[allow(clippy::too_many_arguments)]
pub fn check_expansion_equivalence(
    f: &dyn ScaleFunction,
    ts: &TimeScale,
    a: f64,
    t: f64,
    n: u32,
    tol: f64,
    cfg: &QuadratureConfig,
) -> Result<Report> {
    let start = Instant::now();
    let opts = FracOptions {
        quadrature: *cfg,
        ..FracOptions::default()
    };
    let lhs = frac_integral(f, ts, a, t, FracOrder::new(f64::from(n))?, &opts)?;
    let rhs = binomial_expanded_g(f, ts, a, t, n, cfg)?;
    Ok(Report::compare(
        "expansion",
        ts.to_string(),
        f.label(),
        f64::from(n),
        lhs,
        rhs,
        tol,
        Expectation::Match,
    )
    .timed(start))
}

/// `(t^2)^Δ = t + sigma(t)` at every point of `points`; reports the worst.
pub fn check_sigma_square(ts: &TimeScale, points: &[f64], tol: f64) -> Result<Report> {
    let start = Instant::now();
    let sq = |t: f64| t * t;
    let mut worst: Option<(f64, f64, f64)> = None;
    for &p in points {
        let lhs = delta_derivative(&sq, ts, p)?;
        let rhs = p + ts.sigma(p)?;
        let err = (lhs - rhs).abs();
        if worst.is_none_or(|(_, _, e)| err > e) {
            worst = Some((lhs, rhs, err));
        }
    }
    let (lhs, rhs, _) = worst.unwrap_or((0.0, 0.0, 0.0));
    Ok(Report::compare(
        "sigma_square",
        ts.to_string(),
        "t^2",
        1.0,
        lhs,
        rhs,
        tol,
        Expectation::Match,
    )
    .timed(start))
}

/// `∫_a^t (s + sigma(s)) Δs = t^2 - a^2`.
pub fn check_sum_identity(
    ts: &TimeScale,
    a: f64,
    t: f64,
    tol: f64,
    cfg: &QuadratureConfig,
) -> Result<Report> {
    let start = Instant::now();
    let f = crate::delta_calc::Fallible(|s: f64| -> Result<f64> { Ok(s + ts.sigma(s)?) });
    let lhs = delta_integral(&f, ts, a, t, cfg)?;
    let (a, t) = (ts.snap(a)?, ts.snap(t)?);
    let rhs = t * t - a * a;
    Ok(Report::compare(
        "sum_identity",
        ts.to_string(),
        "t+sigma(t)",
        1.0,
        lhs,
        rhs,
        tol,
        Expectation::Match,
    )
    .timed(start))
}

/// `sum_{k<n} (-1)^k / (k! (n-1-k)!) = 0`.
pub fn check_alternating_sum(n: u32, tol: f64) -> Report {
    let start = Instant::now();
    let lhs: f64 = (0..n).map(|k| alternating_coefficient(n, k)).sum();
    Report::compare(
        "alternating_sum",
        "-",
        "-",
        f64::from(n),
        lhs,
        0.0,
        tol,
        Expectation::Match,
    )
    .timed(start)
}

/// Families of checks selectable in a suite config.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    Cauchy,
    Counterexample,
    RealReduction,
    Expansion,
    KernelDivergence,
    SigmaSquare,
    SumIdentity,
    AlternatingSum,
}

impl CheckKind {
    pub const ALL: [CheckKind; 8] = [
        CheckKind::Cauchy,
        CheckKind::Counterexample,
        CheckKind::RealReduction,
        CheckKind::Expansion,
        CheckKind::KernelDivergence,
        CheckKind::SigmaSquare,
        CheckKind::SumIdentity,
        CheckKind::AlternatingSum,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckKind::Cauchy => "cauchy",
            CheckKind::Counterexample => "counterexample",
            CheckKind::RealReduction => "real_reduction",
            CheckKind::Expansion => "expansion",
            CheckKind::KernelDivergence => "kernel_divergence",
            CheckKind::SigmaSquare => "sigma_square",
            CheckKind::SumIdentity => "sum_identity",
            CheckKind::AlternatingSum => "alternating_sum",
        }
    }

    pub fn from_name(name: &str) -> Option<CheckKind> {
        CheckKind::ALL.into_iter().find(|k| k.name() == name)
    }
}

/// A named scale with the integration window used by the suite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteScale {
    pub name: String,
    pub scale: ScaleSpec,
    pub a: f64,
    pub t: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub cauchy: f64,
    pub counterexample: f64,
    pub real_reduction: f64,
    pub expansion: f64,
    pub kernel: f64,
    pub sigma_square: f64,
    pub sum_identity: f64,
    pub alternating_sum: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            cauchy: 1e-7,
            counterexample: 1e-9,
            real_reduction: 1e-6,
            expansion: 1e-7,
            kernel: 1e-7,
            sigma_square: 1e-6,
            sum_identity: 1e-8,
            alternating_sum: 1e-15,
        }
    }
}

/// Suite description. Every field has a default, so `{}` is the full
/// default suite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SuiteConfig {
    pub scales: Vec<SuiteScale>,
    pub functions: Vec<String>,
    pub checks: Vec<CheckKind>,
    pub cauchy_orders: Vec<u32>,
    pub expansion_orders: Vec<u32>,
    pub counterexample_points: Vec<u32>,
    pub reduction_alphas: Vec<f64>,
    pub reduction_points: Vec<f64>,
    pub alternating_orders: Vec<u32>,
    pub tolerances: Tolerances,
    pub quadrature: QuadratureConfig,
    pub execution: Execution,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        let gen = |g: Generator| ScaleSpec::Generator(g);
        SuiteConfig {
            scales: vec![
                SuiteScale {
                    name: "integers(0,5)".into(),
                    scale: gen(Generator::Integers { a: 0, b: 5 }),
                    a: 0.0,
                    t: 3.0,
                },
                SuiteScale {
                    name: "real_interval(0,1)".into(),
                    scale: gen(Generator::RealInterval { a: 0.0, b: 1.0 }),
                    a: 0.0,
                    t: 1.0,
                },
                SuiteScale {
                    name: "q_scale(0.5,0,6)".into(),
                    scale: gen(Generator::QScale {
                        q: 0.5,
                        kmin: 0,
                        kmax: 6,
                    }),
                    a: 0.015625,
                    t: 1.0,
                },
                SuiteScale {
                    name: "union(real_interval(0,1),integers(2,3))".into(),
                    scale: gen(Generator::Union {
                        parts: vec![
                            Generator::RealInterval { a: 0.0, b: 1.0 },
                            Generator::Integers { a: 2, b: 3 },
                        ],
                    }),
                    a: 0.0,
                    t: 3.0,
                },
            ],
            functions: ["1", "t", "t^2", "sin(t)"].map(String::from).to_vec(),
            checks: CheckKind::ALL.to_vec(),
            cauchy_orders: vec![1, 2],
            expansion_orders: vec![1, 2, 3, 4, 5],
            counterexample_points: (3..=8).collect(),
            reduction_alphas: vec![0.5, 1.5, 2.5],
            reduction_points: vec![0.5, 1.0, 2.0],
            alternating_orders: (2..=6).collect(),
            tolerances: Tolerances::default(),
            quadrature: QuadratureConfig::default(),
            execution: Execution::default(),
        }
    }
}

impl SuiteConfig {
    /// Keeps only the checks of one family.
    pub fn only(mut self, kind: CheckKind) -> Self {
        self.checks = vec![kind];
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub reports: Vec<Report>,
    pub passed: usize,
    pub failed: usize,
}

impl SuiteReport {
    pub fn new(reports: Vec<Report>) -> Self {
        let passed = reports.iter().filter(|r| r.pass).count();
        SuiteReport {
            failed: reports.len() - passed,
            passed,
            reports,
        }
    }

    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }

    /// CSV with header `check,scale,f,order,lhs,rhs,abs_err,rel_err,pass`.
    /// Numbers use shortest round-trip formatting.
    pub fn write_csv<W: io::Write>(&self, out: W) -> io::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(CSV_HEADER)?;
        for r in &self.reports {
            w.write_record([
                r.check.clone(),
                r.scale.clone(),
                r.f.clone(),
                r.order.to_string(),
                r.lhs.to_string(),
                r.rhs.to_string(),
                r.abs_err.to_string(),
                r.rel_err.to_string(),
                r.pass.to_string(),
            ])?;
        }
        w.flush()
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)
            .expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("csv output is UTF-8")
    }

    /// One `key=value` line per report followed by a summary line.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for r in &self.reports {
            let _ = write!(
                s,
                "check={} scale={:?} f={:?} order={} lhs={} rhs={} abs_err={} rel_err={} tol={} expect={} pass={} runtime_ms={:.3}",
                r.check,
                r.scale,
                r.f,
                g(r.order),
                g(r.lhs),
                g(r.rhs),
                g(r.abs_err),
                g(r.rel_err),
                g(r.tolerance),
                match r.expect {
                    Expectation::Match => "match",
                    Expectation::Mismatch => "mismatch",
                },
                r.pass,
                r.runtime_ms,
            );
            if let Some(e) = &r.error {
                let _ = write!(s, " error={e:?}");
            }
            s.push('\n');
        }
        let _ = writeln!(s, "summary passed={} failed={}", self.passed, self.failed);
        s
    }
}

/// Shortest round-trip rendering, switching to exponent form for very small
/// or very large magnitudes.
fn g(x: f64) -> String {
    let m = x.abs();
    if x != 0.0 && m.is_finite() && !(1e-4..1e16).contains(&m) {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}

type Job<'a> = Box<dyn Fn() -> Report + Send + Sync + 'a>;

struct PreparedScale {
    name: String,
    ts: TimeScale,
    a: f64,
    t: f64,
}

/// Runs every selected check over the configured cross product.
///
/// Per-check errors become failed reports. Report order depends only on
/// the config, not on scheduling.
pub fn run_suite(cfg: &SuiteConfig) -> Result<SuiteReport> {
    cfg.quadrature.validate()?;
    let scales = cfg
        .scales
        .iter()
        .map(|s| {
            let ts = s.scale.build()?;
            let a = ts.snap(s.a)?;
            let t = ts.snap(s.t)?;
            if a > t {
                return Err(Error::ReversedBounds { a: s.a, b: s.t });
            }
            Ok(PreparedScale {
                name: s.name.clone(),
                ts,
                a,
                t,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let functions = cfg
        .functions
        .iter()
        .map(|src| {
            let func =
                parse(src).map_err(|e| Error::InvalidSuite(format!("function {src:?}: {e}")))?;
            Ok(Labelled {
                label: src.clone(),
                func,
            })
        })
        .collect::<Result<Vec<Labelled<Expr>>>>()?;
    let one = Labelled {
        label: "1".to_string(),
        func: parse("1").expect("constant parses"),
    };

    let tol = cfg.tolerances;
    let quad = &cfg.quadrature;
    let mut jobs: Vec<Job<'_>> = Vec::new();
    let with_fallback = |check: &'static str,
                         scale: String,
                         f: String,
                         order: f64,
                         tol: f64,
                         r: Result<Report>|
     -> Report {
        r.unwrap_or_else(|e| Report::errored(check, scale, f, order, tol, &e))
    };

    for kind in &cfg.checks {
        match kind {
            CheckKind::Cauchy => {
                for s in &scales {
                    for f in &functions {
                        for &n in &cfg.cauchy_orders {
                            jobs.push(Box::new(move || {
                                let r = check_cauchy(f, &s.ts, s.a, s.t, n, tol.cauchy, quad)
                                    .map(|r| r.with_scale(&s.name));
                                with_fallback(
                                    "cauchy",
                                    s.name.clone(),
                                    f.label(),
                                    n.into(),
                                    tol.cauchy,
                                    r,
                                )
                            }));
                        }
                    }
                }
            }
            CheckKind::Counterexample => {
                for &t in &cfg.counterexample_points {
                    jobs.push(Box::new(move || {
                        let r = counterexample_n3(t, tol.counterexample);
                        with_fallback(
                            "counterexample",
                            format!("integers(0,{t})"),
                            "1".into(),
                            3.0,
                            tol.counterexample,
                            r,
                        )
                    }));
                }
                // On an interval the classical formula holds for every order.
                let one = &one;
                jobs.push(Box::new(move || {
                    let r = TimeScale::interval(0.0, 1.0)
                        .and_then(|ts| check_cauchy(one, &ts, 0.0, 1.0, 3, tol.cauchy, quad));
                    let r = r.map(|mut r| {
                        r.check = "cauchy_n3_real".into();
                        r
                    });
                    with_fallback(
                        "cauchy_n3_real",
                        "[0,1]".into(),
                        "1".into(),
                        3.0,
                        tol.cauchy,
                        r,
                    )
                }));
            }
            CheckKind::RealReduction => {
                for &alpha in &cfg.reduction_alphas {
                    for &t in &cfg.reduction_points {
                        jobs.push(Box::new(move || {
                            let r = check_real_reduction(alpha, t, tol.real_reduction, quad);
                            with_fallback(
                                "real_reduction",
                                format!("[0,{t}]"),
                                "1".into(),
                                alpha,
                                tol.real_reduction,
                                r,
                            )
                        }));
                    }
                }
            }
            CheckKind::Expansion => {
                for s in &scales {
                    for f in &functions {
                        for &n in &cfg.expansion_orders {
                            jobs.push(Box::new(move || {
                                let r = check_expansion_equivalence(
                                    f,
                                    &s.ts,
                                    s.a,
                                    s.t,
                                    n,
                                    tol.expansion,
                                    quad,
                                )
                                .map(|r| r.with_scale(&s.name));
                                with_fallback(
                                    "expansion",
                                    s.name.clone(),
                                    f.label(),
                                    n.into(),
                                    tol.expansion,
                                    r,
                                )
                            }));
                        }
                    }
                }
            }
            CheckKind::KernelDivergence => {
                let one = &one;
                for s in scales.iter().filter(|s| has_scattered(&s.ts, s.a, s.t)) {
                    for kernel in [KernelVariant::Sigma, KernelVariant::Plain] {
                        jobs.push(Box::new(move || {
                            let r = check_kernel_coherence(
                                one, &s.ts, s.a, s.t, 2, kernel, tol.kernel, quad,
                            )
                            .map(|r| r.with_scale(&s.name));
                            with_fallback(
                                "kernel_divergence",
                                s.name.clone(),
                                "1".into(),
                                2.0,
                                tol.kernel,
                                r,
                            )
                        }));
                    }
                }
            }
            CheckKind::SigmaSquare => {
                for s in &scales {
                    jobs.push(Box::new(move || {
                        let r = sigma_square_points(&s.ts)
                            .and_then(|pts| check_sigma_square(&s.ts, &pts, tol.sigma_square))
                            .map(|r| r.with_scale(&s.name));
                        with_fallback(
                            "sigma_square",
                            s.name.clone(),
                            "t^2".into(),
                            1.0,
                            tol.sigma_square,
                            r,
                        )
                    }));
                }
            }
            CheckKind::SumIdentity => {
                for s in &scales {
                    jobs.push(Box::new(move || {
                        let r = check_sum_identity(&s.ts, s.a, s.t, tol.sum_identity, quad)
                            .map(|r| r.with_scale(&s.name));
                        with_fallback(
                            "sum_identity",
                            s.name.clone(),
                            "t+sigma(t)".into(),
                            1.0,
                            tol.sum_identity,
                            r,
                        )
                    }));
                }
            }
            CheckKind::AlternatingSum => {
                for &n in &cfg.alternating_orders {
                    jobs.push(Box::new(move || {
                        check_alternating_sum(n, tol.alternating_sum)
                    }));
                }
            }
        }
    }

    let reports = map_slice(cfg.execution, &jobs, |job| job());
    Ok(SuiteReport::new(reports))
}

fn has_scattered(ts: &TimeScale, a: f64, t: f64) -> bool {
    ts.decompose(a, t)
        .map(|segs| segs.iter().any(|s| matches!(s, Segment::Scattered { .. })))
        .unwrap_or(false)
}

/// Sample points of the whole scale where a delta derivative exists.
fn sigma_square_points(ts: &TimeScale) -> Result<Vec<f64>> {
    let mut pts = ts.sample_points(ts.min(), ts.max(), 5)?;
    let (l, r) = *ts.pieces().last().expect("scales are non-empty");
    if l == r {
        pts.pop();
    }
    Ok(pts)
}
