//! Time scales as finite unions of disjoint closed intervals.
//!
//! A [`TimeScale`] stores its pieces sorted and separated by gaps; an
//! isolated point is a degenerate piece `[p, p]`. Queries snap points that
//! land within `1e-12 * max(1, |t|)` of a piece boundary onto that boundary,
//! so quadrature nodes and generator output computed in floating point stay
//! members of the scale.

mod generator;

use std::fmt;

pub use generator::{Generator, GeneratorSyntaxError, ScaleSpec};

use crate::error::{Error, Result};

/// Absolute snap tolerance used by membership and jump-operator queries.
pub fn snap_tolerance(t: f64) -> f64 {
    1e-12 * t.abs().max(1.0)
}

/// An ordered finite union of disjoint closed intervals.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeScale {
    pieces: Vec<(f64, f64)>,
}

/// Local structure of a point: whether it is isolated from the right or left.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PointClass {
    pub right_scattered: bool,
    pub left_scattered: bool,
    pub is_max: bool,
    pub is_min: bool,
}

impl PointClass {
    pub fn right_dense(&self) -> bool {
        !self.right_scattered
    }

    pub fn left_dense(&self) -> bool {
        !self.left_scattered
    }

    pub fn is_isolated(&self) -> bool {
        self.right_scattered && self.left_scattered
    }

    pub fn is_dense(&self) -> bool {
        !self.right_scattered && !self.left_scattered
    }
}

impl fmt::Display for PointClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = |scattered: bool| if scattered { "scattered" } else { "dense" };
        write!(
            f,
            "left-{}, right-{}",
            side(self.left_scattered),
            side(self.right_scattered)
        )?;
        if self.is_min {
            f.write_str(", min")?;
        }
        if self.is_max {
            f.write_str(", max")?;
        }
        Ok(())
    }
}

/// One element of the decomposition of `[a, b) ∩ T` used for delta integrals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Segment {
    /// A sub-interval `[a, b]` of the scale with `a < b`.
    Continuous { a: f64, b: f64 },
    /// A right-scattered point `s` with graininess `mu`, so `sigma(s) = s + mu`.
    Scattered { point: f64, mu: f64 },
}

impl Segment {
    /// Lebesgue length for continuous pieces, graininess for scattered points.
    pub fn measure(&self) -> f64 {
        match *self {
            Segment::Continuous { a, b } => b - a,
            Segment::Scattered { mu, .. } => mu,
        }
    }
}

impl TimeScale {
    /// Builds a canonical scale from arbitrary closed intervals.
    ///
    /// Pieces are sorted; overlapping or touching pieces are merged.
    pub fn from_pieces<I>(pieces: I) -> Result<Self>
    where
        I: IntoIterator<Item = (f64, f64)>,
    {
        let mut raw: Vec<(f64, f64)> = pieces.into_iter().collect();
        if raw.is_empty() {
            return Err(Error::EmptyScale);
        }
        for &(l, r) in &raw {
            if !l.is_finite() {
                return Err(Error::NonFinite(l));
            }
            if !r.is_finite() {
                return Err(Error::NonFinite(r));
            }
            if l > r {
                return Err(Error::InvalidPiece { left: l, right: r });
            }
        }
        raw.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.total_cmp(&y.1)));

        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(raw.len());
        for (l, r) in raw {
            match merged.last_mut() {
                Some(last) if l <= last.1 + snap_tolerance(last.1) => {
                    last.1 = last.1.max(r);
                }
                _ => merged.push((l, r)),
            }
        }
        Ok(TimeScale { pieces: merged })
    }

    pub fn generate(generator: &Generator) -> Result<Self> {
        Self::from_pieces(generator.pieces()?)
    }

    /// A single closed interval `[a, b]`.
    pub fn interval(a: f64, b: f64) -> Result<Self> {
        Self::from_pieces([(a, b)])
    }

    /// The integer window `{a, a+1, ..., b}`.
    pub fn integers(a: i64, b: i64) -> Result<Self> {
        Self::generate(&Generator::Integers { a, b })
    }

    pub fn pieces(&self) -> &[(f64, f64)] {
        &self.pieces
    }

    pub fn min(&self) -> f64 {
        self.pieces[0].0
    }

    pub fn max(&self) -> f64 {
        self.pieces[self.pieces.len() - 1].1
    }

    /// True when every piece is a single point.
    pub fn is_discrete(&self) -> bool {
        self.pieces.iter().all(|&(l, r)| l == r)
    }

    pub fn isolated_point_count(&self) -> usize {
        self.pieces.iter().filter(|&&(l, r)| l == r).count()
    }

    /// Index of the piece holding `t` and the snapped value of `t`.
    pub fn locate(&self, t: f64) -> Option<(usize, f64)> {
        if !t.is_finite() {
            return None;
        }
        let eps = snap_tolerance(t);
        let i = self.pieces.partition_point(|&(_, r)| r < t - eps);
        let &(l, r) = self.pieces.get(i)?;
        if t < l - eps {
            return None;
        }
        let dl = (t - l).abs();
        let dr = (t - r).abs();
        let snapped = if dl <= eps && dl <= dr {
            l
        } else if dr <= eps {
            r
        } else {
            t
        };
        Some((i, snapped))
    }

    pub fn contains(&self, t: f64) -> bool {
        self.locate(t).is_some()
    }

    /// Snaps `t` onto the scale, failing when it is not a member.
    pub fn snap(&self, t: f64) -> Result<f64> {
        self.locate(t).map(|(_, s)| s).ok_or(Error::NotInScale(t))
    }

    fn member(&self, t: f64) -> Result<(usize, f64)> {
        self.locate(t).ok_or(Error::NotInScale(t))
    }

    /// Forward jump: the next point of the scale, or `t` itself at the maximum.
    pub fn sigma(&self, t: f64) -> Result<f64> {
        let (i, t) = self.member(t)?;
        let r = self.pieces[i].1;
        if t < r {
            return Ok(t);
        }
        Ok(self.pieces.get(i + 1).map_or(t, |next| next.0))
    }

    /// Backward jump: the previous point of the scale, or `t` itself at the minimum.
    pub fn rho(&self, t: f64) -> Result<f64> {
        let (i, t) = self.member(t)?;
        let l = self.pieces[i].0;
        if t > l || i == 0 {
            return Ok(t);
        }
        Ok(self.pieces[i - 1].1)
    }

    /// Graininess `mu(t) = sigma(t) - t`.
    pub fn graininess(&self, t: f64) -> Result<f64> {
        let t = self.snap(t)?;
        Ok(self.sigma(t)? - t)
    }

    pub fn classify(&self, t: f64) -> Result<PointClass> {
        let t = self.snap(t)?;
        Ok(PointClass {
            right_scattered: self.sigma(t)? > t,
            left_scattered: self.rho(t)? < t,
            is_max: t == self.max(),
            is_min: t == self.min(),
        })
    }

    /// Splits `[a, b) ∩ T` into continuous pieces and right-scattered points.
    ///
    /// The upper limit `b` never contributes a segment, and `a == b` yields an
    /// empty list.
    pub fn decompose(&self, a: f64, b: f64) -> Result<Vec<Segment>> {
        let (ia, a_s) = self.member(a)?;
        let (ib, b_s) = self.member(b)?;
        if a_s > b_s {
            return Err(Error::ReversedBounds { a, b });
        }
        let mut segments = Vec::new();
        for k in ia..=ib {
            let (l, r) = self.pieces[k];
            let lo = if k == ia { a_s } else { l };
            let hi = if k == ib { b_s } else { r };
            if hi > lo {
                segments.push(Segment::Continuous { a: lo, b: hi });
            }
            if k < ib {
                segments.push(Segment::Scattered {
                    point: r,
                    mu: self.pieces[k + 1].0 - r,
                });
            }
        }
        Ok(segments)
    }

    /// Total length of the gaps between `a` and `b`.
    pub fn gap_length(&self, a: f64, b: f64) -> Result<f64> {
        let (ia, _) = self.member(a)?;
        let (ib, _) = self.member(b)?;
        Ok((ia..ib)
            .map(|k| self.pieces[k + 1].0 - self.pieces[k].1)
            .sum())
    }

    /// Representative points of `[a, b] ∩ T`: every piece endpoint and
    /// isolated point, plus `per_piece` evenly spaced interior points on each
    /// continuous part.
    pub fn sample_points(&self, a: f64, b: f64, per_piece: usize) -> Result<Vec<f64>> {
        let (ia, a_s) = self.member(a)?;
        let (ib, b_s) = self.member(b)?;
        if a_s > b_s {
            return Err(Error::ReversedBounds { a, b });
        }
        let mut out = Vec::new();
        for k in ia..=ib {
            let (l, r) = self.pieces[k];
            let lo = if k == ia { a_s } else { l };
            let hi = if k == ib { b_s } else { r };
            out.push(lo);
            if hi > lo {
                let step = (hi - lo) / (per_piece + 1) as f64;
                out.extend((1..=per_piece).map(|j| lo + step * j as f64));
                out.push(hi);
            }
        }
        Ok(out)
    }
}

impl fmt::Display for TimeScale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        let mut points: Vec<f64> = Vec::new();
        let flush = |f: &mut fmt::Formatter<'_>, points: &mut Vec<f64>, first: &mut bool| {
            if points.is_empty() {
                return Ok(());
            }
            if !*first {
                f.write_str(" U ")?;
            }
            *first = false;
            let body: Vec<String> = points.iter().map(|p| p.to_string()).collect();
            points.clear();
            write!(f, "{{{}}}", body.join(","))
        };
        for &(l, r) in &self.pieces {
            if l == r {
                points.push(l);
                continue;
            }
            flush(f, &mut points, &mut first)?;
            if !first {
                f.write_str(" U ")?;
            }
            first = false;
            write!(f, "[{l},{r}]")?;
        }
        flush(f, &mut points, &mut first)
    }
}
