use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::TimeScale;
use crate::error::{Error, Result};

/// Recipe for a common family of time scales.
///
/// Serialized as `{"kind": "...", "params": {...}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "snake_case")]
pub enum Generator {
    /// `{a, a+1, ..., b}`.
    Integers {
        a: i64,
        b: i64,
    },
    /// The closed interval `[a, b]`, `a < b`.
    RealInterval {
        a: f64,
        b: f64,
    },
    /// `{q^k : kmin <= k <= kmax}` with `0 < q < 1`.
    QScale {
        q: f64,
        kmin: i32,
        kmax: i32,
    },
    Union {
        parts: Vec<Generator>,
    },
}

impl Generator {
    pub(crate) fn pieces(&self) -> Result<Vec<(f64, f64)>> {
        match *self {
            Generator::Integers { a, b } => {
                if a > b {
                    return Err(Error::InvalidGenerator(format!(
                        "integers({a},{b}): lower bound exceeds upper"
                    )));
                }
                Ok((a..=b).map(|k| (k as f64, k as f64)).collect())
            }
            Generator::RealInterval { a, b } => {
                if a.is_nan() || b.is_nan() || a >= b {
                    return Err(Error::InvalidGenerator(format!(
                        "real_interval({a},{b}): expected a < b"
                    )));
                }
                Ok(vec![(a, b)])
            }
            Generator::QScale { q, kmin, kmax } => {
                if !(q > 0.0 && q < 1.0) {
                    return Err(Error::InvalidGenerator(format!(
                        "q_scale: q = {q} is outside (0, 1)"
                    )));
                }
                if kmin > kmax {
                    return Err(Error::InvalidGenerator(format!(
                        "q_scale: kmin = {kmin} exceeds kmax = {kmax}"
                    )));
                }
                Ok((kmin..=kmax)
                    .map(|k| {
                        let p = q.powi(k);
                        (p, p)
                    })
                    .collect())
            }
            Generator::Union { ref parts } => {
                if parts.is_empty() {
                    return Err(Error::InvalidGenerator("union of nothing".into()));
                }
                let mut out = Vec::new();
                for part in parts {
                    out.extend(part.pieces()?);
                }
                Ok(out)
            }
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Integers { a, b } => write!(f, "integers({a},{b})"),
            Generator::RealInterval { a, b } => write!(f, "real_interval({a},{b})"),
            Generator::QScale { q, kmin, kmax } => write!(f, "q_scale({q},{kmin},{kmax})"),
            Generator::Union { parts } => {
                f.write_str("union(")?;
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{p}")?;
                }
                f.write_str(")")
            }
        }
    }
}

/// Parse failure in the compact generator syntax, with a 1-based column.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorSyntaxError {
    pub column: usize,
    pub message: String,
}

impl fmt::Display for GeneratorSyntaxError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "column {}: {}", self.column, self.message)
    }
}

impl std::error::Error for GeneratorSyntaxError {}

/// Parses the compact form used on the command line, e.g.
/// `union(real_interval(0,1), integers(2,4))`.
impl FromStr for Generator {
    type Err = GeneratorSyntaxError;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let mut p = GenParser { src: s, pos: 0 };
        let g = p.generator()?;
        p.skip_ws();
        if p.pos < s.len() {
            return Err(p.error("trailing input"));
        }
        Ok(g)
    }
}

struct GenParser<'a> {
    src: &'a str,
    pos: usize,
}

impl GenParser<'_> {
    fn error(&self, message: impl Into<String>) -> GeneratorSyntaxError {
        GeneratorSyntaxError {
            column: self.src[..self.pos].chars().count() + 1,
            message: message.into(),
        }
    }

    fn rest(&self) -> &str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn expect(&mut self, c: char) -> std::result::Result<(), GeneratorSyntaxError> {
        self.skip_ws();
        if self.rest().starts_with(c) {
            self.pos += c.len_utf8();
            Ok(())
        } else {
            Err(self.error(format!("expected '{c}'")))
        }
    }

    fn ident(&mut self) -> std::result::Result<&str, GeneratorSyntaxError> {
        self.skip_ws();
        let start = self.pos;
        let len = self
            .rest()
            .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
            .unwrap_or(self.rest().len());
        if len == 0 {
            return Err(self.error("expected generator name"));
        }
        self.pos += len;
        Ok(&self.src[start..self.pos])
    }

    fn number(&mut self) -> std::result::Result<f64, GeneratorSyntaxError> {
        self.skip_ws();
        let len = self
            .rest()
            .find(|c: char| !(c.is_ascii_digit() || matches!(c, '.' | '-' | '+' | 'e' | 'E')))
            .unwrap_or(self.rest().len());
        let text = &self.rest()[..len];
        let value = text
            .parse::<f64>()
            .map_err(|_| self.error("expected a number"))?;
        self.pos += len;
        Ok(value)
    }

    fn integer(&mut self) -> std::result::Result<i64, GeneratorSyntaxError> {
        let before = self.pos;
        let v = self.number()?;
        if v.fract() != 0.0 || v.abs() > 9.0e15 {
            self.pos = before;
            self.skip_ws();
            return Err(self.error("expected an integer"));
        }
        Ok(v as i64)
    }

    fn generator(&mut self) -> std::result::Result<Generator, GeneratorSyntaxError> {
        let name_pos = {
            self.skip_ws();
            self.pos
        };
        let name = self.ident()?.to_string();
        self.expect('(')?;
        let g = match name.as_str() {
            "integers" => {
                let a = self.integer()?;
                self.expect(',')?;
                let b = self.integer()?;
                Generator::Integers { a, b }
            }
            "real_interval" => {
                let a = self.number()?;
                self.expect(',')?;
                let b = self.number()?;
                Generator::RealInterval { a, b }
            }
            "q_scale" => {
                let q = self.number()?;
                self.expect(',')?;
                let kmin = self.integer()?;
                self.expect(',')?;
                let kmax = self.integer()?;
                let to_i32 = |k: i64, p: &Self| {
                    i32::try_from(k).map_err(|_| p.error("exponent out of range"))
                };
                Generator::QScale {
                    q,
                    kmin: to_i32(kmin, self)?,
                    kmax: to_i32(kmax, self)?,
                }
            }
            "union" => {
                let mut parts = vec![self.generator()?];
                loop {
                    self.skip_ws();
                    if self.rest().starts_with(',') {
                        self.pos += 1;
                        parts.push(self.generator()?);
                    } else {
                        break;
                    }
                }
                Generator::Union { parts }
            }
            _ => {
                self.pos = name_pos;
                return Err(self.error(format!("unknown generator '{name}'")));
            }
        };
        self.expect(')')?;
        Ok(g)
    }
}

/// JSON scale document: `{"pieces": [[l, r], ...]}` or `{"generator": {...}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ScaleSpec {
    Pieces(Vec<[f64; 2]>),
    Generator(Generator),
}

impl ScaleSpec {
    pub fn build(&self) -> Result<TimeScale> {
        match self {
            ScaleSpec::Pieces(p) => TimeScale::from_pieces(p.iter().map(|&[l, r]| (l, r))),
            ScaleSpec::Generator(g) => TimeScale::generate(g),
        }
    }
}

impl fmt::Display for ScaleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScaleSpec::Generator(g) => write!(f, "{g}"),
            ScaleSpec::Pieces(p) => {
                let body: Vec<String> = p.iter().map(|[l, r]| format!("[{l},{r}]")).collect();
                write!(f, "pieces[{}]", body.join(","))
            }
        }
    }
}
