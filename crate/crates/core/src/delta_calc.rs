//! Delta derivative, delta integral and repeated delta integration.

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::quadrature::{integrate, QuadratureConfig};
use crate::timescale::{Segment, TimeScale};

/// A real function evaluated at points of a time scale.
pub trait ScaleFunction {
    fn eval(&self, t: f64) -> Result<f64>;

    /// Short description used in reports.
    fn label(&self) -> String {
        "f".to_string()
    }
}

impl<F> ScaleFunction for F
where
    F: Fn(f64) -> f64,
{
    fn eval(&self, t: f64) -> Result<f64> {
        Ok(self(t))
    }
}

impl ScaleFunction for Expr {
    fn eval(&self, t: f64) -> Result<f64> {
        Ok(self.evaluate(t)?)
    }

    fn label(&self) -> String {
        self.to_string()
    }
}

/// Wraps a host closure that can fail.
pub struct Fallible<F>(pub F);

impl<F> ScaleFunction for Fallible<F>
where
    F: Fn(f64) -> Result<f64>,
{
    fn eval(&self, t: f64) -> Result<f64> {
        (self.0)(t)
    }
}

/// A scale function with an explicit report label.
pub struct Labelled<F> {
    pub label: String,
    pub func: F,
}

impl<F: ScaleFunction> ScaleFunction for Labelled<F> {
    fn eval(&self, t: f64) -> Result<f64> {
        self.func.eval(t)
    }

    fn label(&self) -> String {
        self.label.clone()
    }
}

/// Sums `g(s, sigma(s))` over the decomposition of `[a, b)`.
///
/// Continuous pieces are integrated with `sigma(s) = s`; a scattered point
/// contributes `mu * g(s, sigma(s))`.
pub(crate) fn integrate_segments(
    ts: &TimeScale,
    a: f64,
    b: f64,
    cfg: &QuadratureConfig,
    g: &dyn Fn(f64, f64) -> Result<f64>,
) -> Result<f64> {
    cfg.validate()?;
    let mut sum = 0.0;
    for seg in ts.decompose(a, b)? {
        match seg {
            Segment::Continuous { a, b } => {
                sum += integrate(&|s: f64| g(s, s), a, b, cfg)?;
            }
            Segment::Scattered { point, mu } => {
                sum += mu * g(point, ts.sigma(point)?)?;
            }
        }
    }
    Ok(sum)
}

pub fn delta_integral<F>(
    f: &F,
    ts: &TimeScale,
    a: f64,
    b: f64,
    cfg: &QuadratureConfig,
) -> Result<f64>
where
    F: ScaleFunction + ?Sized,
{
    integrate_segments(ts, a, b, cfg, &|s, _| f.eval(s))
}

/// `n`-fold nested delta integral `∫_a^t ∫_a^{t_{n-1}} ... f(t_0) Δt_0 ... Δt_{n-1}`.
///
/// Inner integrals are recomputed at every outer node, so the cost grows
/// geometrically with `n`.
pub fn repeated_integral<F>(
    f: &F,
    ts: &TimeScale,
    a: f64,
    t: f64,
    n: u32,
    cfg: &QuadratureConfig,
) -> Result<f64>
where
    F: ScaleFunction + ?Sized,
{
    if n == 0 {
        return Err(Error::InvalidRepetition(n));
    }
    let a = ts.snap(a)?;
    nested(&|s| f.eval(s), ts, a, t, n, cfg)
}

fn nested(
    f: &dyn Fn(f64) -> Result<f64>,
    ts: &TimeScale,
    a: f64,
    t: f64,
    n: u32,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    if n == 1 {
        return integrate_segments(ts, a, t, cfg, &|s, _| f(s));
    }
    integrate_segments(ts, a, t, cfg, &|s, _| nested(f, ts, a, s, n - 1, cfg))
}

pub fn delta_derivative<F>(f: &F, ts: &TimeScale, t: f64) -> Result<f64>
where
    F: ScaleFunction + ?Sized,
{
    derivative_above(&|s| f.eval(s), ts, t, f64::NEG_INFINITY)
}

/// Delta derivative whose finite differences never sample below `floor`.
///
/// Right-scattered points use the exact quotient `(f(sigma(t)) - f(t)) / mu(t)`.
/// Right-dense points difference along the continuous piece holding `t`:
/// central when both sides have room, one-sided otherwise, with step
/// `cbrt(eps) * max(1, |t|)` and one Richardson extrapolation.
pub(crate) fn derivative_above(
    f: &dyn Fn(f64) -> Result<f64>,
    ts: &TimeScale,
    t: f64,
    floor: f64,
) -> Result<f64> {
    let (i, t) = ts.locate(t).ok_or(Error::NotInScale(t))?;
    let sigma = ts.sigma(t)?;
    if sigma > t {
        return Ok((f(sigma)? - f(t)?) / (sigma - t));
    }
    let (l, r) = ts.pieces()[i];
    if l == r {
        // An isolated maximum has no direction to take a limit along.
        return Err(Error::BoundaryDerivative(t));
    }
    dense_difference(f, t, l.max(floor), r)
}

fn dense_difference(f: &dyn Fn(f64) -> Result<f64>, t: f64, lo: f64, hi: f64) -> Result<f64> {
    let h0 = f64::EPSILON.cbrt() * t.abs().max(1.0);
    let room_right = hi - t;
    let room_left = t - lo;
    if room_right >= h0 && room_left >= h0 {
        let central = |h: f64| -> Result<f64> {
            let (xm, xp) = (t - h, t + h);
            Ok((f(xp)? - f(xm)?) / (xp - xm))
        };
        let coarse = central(h0)?;
        let fine = central(0.5 * h0)?;
        return Ok((4.0 * fine - coarse) / 3.0);
    }
    let (dir, room) = if room_right >= room_left {
        (1.0, room_right)
    } else {
        (-1.0, room_left)
    };
    let h = h0.min(room);
    if h.is_nan() || h <= 0.0 {
        return Err(Error::BoundaryDerivative(t));
    }
    let ft = f(t)?;
    let one_sided = |h: f64| -> Result<f64> {
        let x = t + dir * h;
        Ok((f(x)? - ft) / (x - t))
    };
    let coarse = one_sided(h)?;
    let fine = one_sided(0.5 * h)?;
    Ok(2.0 * fine - coarse)
}

/// `n`-fold delta derivative with differences restricted to `s >= floor`.
pub(crate) fn iterated_above(
    f: &dyn Fn(f64) -> Result<f64>,
    ts: &TimeScale,
    t: f64,
    n: u32,
    floor: f64,
) -> Result<f64> {
    if n == 0 {
        return f(t);
    }
    derivative_above(&|s| iterated_above(f, ts, s, n - 1, floor), ts, t, floor)
}
