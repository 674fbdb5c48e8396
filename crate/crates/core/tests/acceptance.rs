//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use tempus::expr::ParseError;
use tempus::fractional::alternating_coefficient;
use tempus::verify::{
    check_cauchy, check_expansion_equivalence, counterexample_n3, run_suite, CheckKind, SuiteConfig,
};
use tempus::{
    caputo_derivative, delta_derivative, delta_integral, frac_integral, parse, repeated_integral,
    rl_derivative, Expr, FracOptions, FracOrder, KernelVariant, Labelled, QuadratureConfig,
    TimeScale, ZeroPowerPolicy,
};

const GAMMA_1_5: f64 = 0.886_226_925_452_758;
const GAMMA_2_5: f64 = 1.329_340_388_179_137;
const GAMMA_3_5: f64 = 3.323_350_970_447_842_6;
const SQRT_PI: f64 = 1.772_453_850_905_516;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

struct SuiteScale {
    name: String,
    ts: TimeScale,
    a: f64,
    t: f64,
}

fn scales() -> Vec<SuiteScale> {
    SuiteConfig::default()
        .scales
        .into_iter()
        .map(|s| SuiteScale {
            ts: s.scale.build().unwrap(),
            name: s.name,
            a: s.a,
            t: s.t,
        })
        .collect()
}

fn functions() -> Vec<Labelled<Expr>> {
    SuiteConfig::default()
        .functions
        .into_iter()
        .map(|src| Labelled {
            func: parse(&src).unwrap(),
            label: src,
        })
        .collect()
}

fn quad() -> QuadratureConfig {
    QuadratureConfig::default()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut failures = Vec::new();
    for s in scales() {
        for f in functions() {
            let limit = if s.ts.is_discrete() { 1e-12 } else { 1e-7 };
            match check_cauchy(&f, &s.ts, s.a, s.t, 2, limit, &quad()) {
                Ok(r) => {
                    worst = worst.max(r.abs_err);
                    if r.abs_err > limit {
                        failures.push(format!("{} {}: {:e}", s.name, f.label, r.abs_err));
                    }
                }
                Err(e) => failures.push(format!("{} {}: {e}", s.name, f.label)),
            }
        }
    }
    let elapsed = start.elapsed();
    Outcome {
        pass: failures.is_empty() && elapsed < Duration::from_secs(10),
        detail: format!(
            "16 cases, max |lhs-rhs| = {worst:e}, {:.3} s{}",
            elapsed.as_secs_f64(),
            join_failures(&failures)
        ),
    }
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    // Independent oracles: explicit triple loop and the three-term kernel sum.
    let mut triple = 0u32;
    for t2 in 0..3 {
        for t1 in 0..t2 {
            for _t0 in 0..t1 {
                triple += 1;
            }
        }
    }
    let kernel: f64 = (0..3).map(|s| f64::from(3 - (s + 1)).powi(2) / 2.0).sum();
    let r = counterexample_n3(3, 1e-9).unwrap();
    let elapsed = start.elapsed();
    Outcome {
        pass: r.lhs == 1.0
            && r.rhs == 2.5
            && f64::from(triple) == r.lhs
            && kernel == r.rhs
            && r.abs_err >= 1.0
            && r.pass
            && elapsed < Duration::from_secs(1),
        detail: format!(
            "triple sum = {}, kernel form = {}, discrepancy = {}, {:.4} s",
            r.lhs,
            r.rhs,
            r.abs_err,
            elapsed.as_secs_f64()
        ),
    }
}

fn criterion_3() -> Outcome {
    let one = |_: f64| 1.0;
    let mut worst = 0.0f64;
    let mut failures = Vec::new();
    for (alpha, g) in [(0.5, GAMMA_1_5), (1.5, GAMMA_2_5), (2.5, GAMMA_3_5)] {
        for t in [0.5, 1.0, 2.0] {
            let ts = TimeScale::interval(0.0, t).unwrap();
            let got = frac_integral(
                &one,
                &ts,
                0.0,
                t,
                FracOrder::new(alpha).unwrap(),
                &FracOptions::default(),
            );
            let want = t.powf(alpha) / g;
            match got {
                Ok(v) => {
                    let err = (v - want).abs();
                    worst = worst.max(err);
                    if err > 1e-6 {
                        failures.push(format!("alpha={alpha} t={t}: {v} vs {want}"));
                    }
                }
                Err(e) => failures.push(format!("alpha={alpha} t={t}: {e}")),
            }
        }
    }
    Outcome {
        pass: failures.is_empty(),
        detail: format!("9 cases, max error = {worst:e}{}", join_failures(&failures)),
    }
}

fn criterion_4() -> Outcome {
    let one = |_: f64| 1.0;
    let z = TimeScale::integers(0, 5).unwrap();
    let order = FracOrder::new(2.0).unwrap();
    let sigma = frac_integral(&one, &z, 0.0, 3.0, order, &FracOptions::default()).unwrap();
    let legacy = frac_integral(
        &one,
        &z,
        0.0,
        3.0,
        order,
        &FracOptions {
            kernel: KernelVariant::Plain,
            ..FracOptions::default()
        },
    )
    .unwrap();
    let repeated = repeated_integral(&one, &z, 0.0, 3.0, 2, &quad()).unwrap();
    let suite = run_suite(&SuiteConfig::default().only(CheckKind::KernelDivergence)).unwrap();
    let coherent = suite
        .reports
        .iter()
        .any(|r| r.check == "kernel_sigma_coherent" && r.scale == "integers(0,5)" && r.pass);
    let incoherent = suite
        .reports
        .iter()
        .any(|r| r.check == "kernel_legacy_incoherent" && r.scale == "integers(0,5)" && r.pass);
    Outcome {
        pass: sigma == 3.0
            && legacy == 6.0
            && repeated == 3.0
            && coherent
            && incoherent
            && suite.all_passed(),
        detail: format!(
            "sigma = {sigma}, legacy = {legacy}, repeated = {repeated}, suite {}/{} pass",
            suite.passed,
            suite.reports.len()
        ),
    }
}

fn criterion_5() -> Outcome {
    let sq = |t: f64| t * t;
    let mut failures = Vec::new();
    let mut worst_deriv = 0.0f64;
    let mut worst_int = 0.0f64;
    for s in scales() {
        let ts = &s.ts;
        let mut points = ts.sample_points(ts.min(), ts.max(), 5).unwrap();
        let (l, r) = *ts.pieces().last().unwrap();
        if l == r {
            points.pop();
        }
        for p in points {
            let d = delta_derivative(&sq, ts, p).unwrap();
            let err = (d - (p + ts.sigma(p).unwrap())).abs();
            worst_deriv = worst_deriv.max(err);
            if err > 1e-6 {
                failures.push(format!("{} t={p}: {d}", s.name));
            }
        }
        let f = tempus::Fallible(|x: f64| -> tempus::Result<f64> { Ok(x + ts.sigma(x)?) });
        let v = delta_integral(&f, ts, s.a, s.t, &quad()).unwrap();
        let err = (v - (s.t * s.t - s.a * s.a)).abs();
        worst_int = worst_int.max(err);
        if err > 1e-8 {
            failures.push(format!("{} integral: {v}", s.name));
        }
    }
    let z = TimeScale::integers(0, 5).unwrap();
    for t in 0..5 {
        let t = f64::from(t);
        let d = delta_derivative(&sq, &z, t).unwrap();
        if d != 2.0 * t + 1.0 {
            failures.push(format!("Z t={t}: {d} != {}", 2.0 * t + 1.0));
        }
    }
    Outcome {
        pass: failures.is_empty(),
        detail: format!(
            "max |(t^2)^D - (t+sigma)| = {worst_deriv:e}, max integral error = {worst_int:e}, Z exact{}",
            join_failures(&failures)
        ),
    }
}

fn criterion_6() -> Outcome {
    let mut failures = Vec::new();
    let mut worst = 0.0f64;
    let mut cases = 0;
    for s in scales() {
        for f in functions() {
            for n in 1..=5 {
                cases += 1;
                match check_expansion_equivalence(&f, &s.ts, s.a, s.t, n, 1e-7, &quad()) {
                    Ok(r) => {
                        worst = worst.max(r.abs_err.min(r.rel_err));
                        if !r.pass {
                            failures.push(format!("{} {} n={n}: {:e}", s.name, f.label, r.abs_err));
                        }
                    }
                    Err(e) => failures.push(format!("{} {} n={n}: {e}", s.name, f.label)),
                }
            }
        }
    }
    let mut worst_alt = 0.0f64;
    for n in 2..=6u32 {
        let sum: f64 = (0..n).map(|k| alternating_coefficient(n, k)).sum();
        worst_alt = worst_alt.max(sum.abs());
        if sum.abs() > 1e-15 {
            failures.push(format!("alternating n={n}: {sum:e}"));
        }
    }
    Outcome {
        pass: failures.is_empty(),
        detail: format!(
            "{cases} expansion cases, max error = {worst:e}; alternating sums max = {worst_alt:e}{}",
            join_failures(&failures)
        ),
    }
}

/// `(1/sqrt(pi)) ∫_0^t (t-s)^{-1/2} g(s) ds` by the midpoint rule after
/// `s = t - u^2`, which removes the endpoint singularity.
fn abel_half(g: impl Fn(f64) -> f64, t: f64) -> f64 {
    let n = 200_000;
    let top = t.sqrt();
    let h = top / n as f64;
    let sum: f64 = (0..n)
        .map(|j| {
            let u = (j as f64 + 0.5) * h;
            g(t - u * u)
        })
        .sum();
    2.0 * sum * h / SQRT_PI
}

fn criterion_7() -> Outcome {
    let mut failures = Vec::new();
    let policy = ZeroPowerPolicy::ZeroConvention;

    for s in scales() {
        for f in functions() {
            let di = delta_integral(&f, &s.ts, s.a, s.t, &quad()).unwrap();
            for kernel in [KernelVariant::Sigma, KernelVariant::Plain] {
                let opts = FracOptions {
                    kernel,
                    ..FracOptions::default()
                };
                let v = frac_integral(&f, &s.ts, s.a, s.t, FracOrder::new(1.0).unwrap(), &opts)
                    .unwrap();
                if (v - di).abs() > 1e-9 {
                    failures.push(format!(
                        "alpha=1 {kernel:?} {} {}: {v} vs {di}",
                        s.name, f.label
                    ));
                }
            }
        }
    }

    let constant = |_: f64| 2.5;
    for s in scales() {
        for alpha in [0.5, 1.5] {
            let v = caputo_derivative(
                &constant,
                &s.ts,
                s.a,
                s.t,
                FracOrder::new(alpha).unwrap(),
                policy,
                &quad(),
            )
            .unwrap();
            if v.abs() > 1e-6 {
                failures.push(format!("caputo const {} alpha={alpha}: {v}", s.name));
            }
        }
    }

    // Dense-grid oracle, then the closed form t^{1/2} / Gamma(3/2).
    let ts = TimeScale::interval(0.0, 2.0).unwrap();
    let id = |s: f64| s;
    let half = FracOrder::new(0.5).unwrap();
    let h = 1e-3;
    let oracle_rl = (abel_half(id, 1.0 + h) - abel_half(id, 1.0 - h)) / (2.0 * h);
    let oracle_caputo = abel_half(|_| 1.0, 1.0);
    let closed = 1.0 / GAMMA_1_5;
    let rl = rl_derivative(&id, &ts, 0.0, 1.0, half, policy, &quad()).unwrap();
    let caputo = caputo_derivative(&id, &ts, 0.0, 1.0, half, policy, &quad()).unwrap();
    for (name, got, oracle) in [("rl", rl, oracle_rl), ("caputo", caputo, oracle_caputo)] {
        if (oracle - closed).abs() > 1e-6 {
            failures.push(format!(
                "{name} oracle {oracle} disagrees with closed form {closed}"
            ));
        }
        if (got - closed).abs() > 1e-4 {
            failures.push(format!("{name}: {got} vs {closed}"));
        }
    }
    Outcome {
        pass: failures.is_empty(),
        detail: format!(
            "rl = {rl}, caputo = {caputo}, closed form = {closed}, oracle = ({oracle_rl}, {oracle_caputo}){}",
            join_failures(&failures)
        ),
    }
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + b.abs())
}

fn criterion_8() -> Outcome {
    let mut failures = Vec::new();
    let f = |t: f64| (0.7 * t).sin() + 0.25 * t * t;
    let g = |t: f64| (0.3 * t).exp();
    let cfg = quad();

    for s in scales() {
        let ts = &s.ts;
        let points = ts.sample_points(ts.min(), ts.max(), 3).unwrap();
        // sigma, rho, mu axioms.
        for &p in &points {
            let (sg, rh, mu) = (
                ts.sigma(p).unwrap(),
                ts.rho(p).unwrap(),
                ts.graininess(p).unwrap(),
            );
            if !(sg >= p && rh <= p && ts.contains(sg) && ts.contains(rh) && mu == sg - p) {
                failures.push(format!("{} axioms at {p}", s.name));
            }
        }
        let interior: Vec<f64> = points
            .iter()
            .copied()
            .filter(|&p| p < ts.max() || ts.pieces().last().is_some_and(|&(l, r)| l < r))
            .collect();
        let (a, b) = (s.a, s.t);
        let mid = points
            .iter()
            .copied()
            .find(|&p| p > a && p < b)
            .unwrap_or(a);
        // Linearity and additivity.
        let lin = delta_integral(&|t: f64| 2.0 * f(t) - 3.0 * g(t), ts, a, b, &cfg).unwrap();
        let fi = delta_integral(&f, ts, a, b, &cfg).unwrap();
        let gi = delta_integral(&g, ts, a, b, &cfg).unwrap();
        if !close(lin, 2.0 * fi - 3.0 * gi, 1e-9) {
            failures.push(format!("{} linearity", s.name));
        }
        let split = delta_integral(&f, ts, a, mid, &cfg).unwrap()
            + delta_integral(&f, ts, mid, b, &cfg).unwrap();
        if !close(split, fi, 1e-9) {
            failures.push(format!("{} additivity", s.name));
        }
        // FTC: integral of a delta derivative.
        let fd = tempus::Fallible(|t: f64| delta_derivative(&f, ts, t));
        let ftc = delta_integral(
            &fd,
            ts,
            a,
            b,
            &QuadratureConfig::default().with_tolerance(1e-8),
        );
        match ftc {
            Ok(v) if close(v, f(b) - f(a), 1e-5) => {}
            other => failures.push(format!("{} FTC: {other:?}", s.name)),
        }
        // Product rule.
        for &p in &interior {
            let lhs = delta_derivative(&|t: f64| f(t) * g(t), ts, p).unwrap();
            let rhs = delta_derivative(&f, ts, p).unwrap() * g(p)
                + f(ts.sigma(p).unwrap()) * delta_derivative(&g, ts, p).unwrap();
            if !close(lhs, rhs, 1e-6) {
                failures.push(format!("{} product rule at {p}: {lhs} vs {rhs}", s.name));
            }
        }
    }

    for (src, want) in [
        ("2+3*4^2", 50.0),
        ("-2^2", -4.0),
        ("2^3^2", 512.0),
        ("2^-1", 0.5),
        ("(2+3)*4", 20.0),
        ("8/4/2", 1.0),
        ("8-4-2", 2.0),
        ("-t*2", -6.0),
    ] {
        if parse(src).map(|e| e.evaluate(3.0)) != Ok(Ok(want)) {
            failures.push(format!("precedence {src}"));
        }
    }
    for (src, offset) in [
        ("2t", 1),
        ("t +", 3),
        ("(t", 2),
        ("sin t", 4),
        ("foo(t)", 0),
    ] {
        match parse(src) {
            Err(e @ (ParseError::Syntax { .. } | ParseError::UnknownFunction { .. }))
                if e.offset() == offset => {}
            other => failures.push(format!("diagnostic for {src:?}: {other:?}")),
        }
    }
    Outcome {
        pass: failures.is_empty(),
        detail: format!(
            "axioms, linearity, additivity, FTC, product rule, parser{}",
            join_failures(&failures)
        ),
    }
}

fn join_failures(failures: &[String]) -> String {
    if failures.is_empty() {
        String::new()
    } else {
        format!("; failures: {}", failures.join(" | "))
    }
}

fn main() -> ExitCode {
    let start = Instant::now();
    let criteria: [Criterion; 8] = [
        ("cauchy identity, n = 2", criterion_1),
        ("n = 3 counterexample on Z", criterion_2),
        ("reduction on R", criterion_3),
        ("kernel divergence", criterion_4),
        ("motivating identities", criterion_5),
        ("expansion equivalence", criterion_6),
        ("operator reductions", criterion_7),
        ("property spot checks", criterion_8),
    ];
    let mut all = true;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        all &= o.pass;
        println!(
            "criterion {} [{name}]: {} ({})",
            i + 1,
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
    }
    let suite = run_suite(&SuiteConfig::default()).unwrap();
    let elapsed = start.elapsed();
    let pass9 = suite.all_passed() && elapsed < Duration::from_secs(60);
    all &= pass9;
    println!(
        "criterion 9 [desk-scale reproducibility]: {} (default suite {}/{} pass, total {:.2} s)",
        if pass9 { "PASS" } else { "FAIL" },
        suite.passed,
        suite.reports.len(),
        elapsed.as_secs_f64()
    );
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
