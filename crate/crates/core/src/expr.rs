//! Real-valued expressions in one variable `t`.
//!
//! Grammar, lowest precedence first:
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' unary)?
//! atom   := number | 't' | 'pi' | ident '(' expr ')' | '(' expr ')'
//! ```
//!
//! `^` is right-associative and binds tighter than unary minus, so `-2^2`
//! is `-4` and `2^-1` is `0.5`. There is no implicit multiplication.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Byte range of a sub-expression in the source text.
pub type Span = (usize, usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
            BinOp::Pow => '^',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Log,
    Sqrt,
    Abs,
}

impl Func {
    const ALL: [Func; 6] = [
        Func::Sin,
        Func::Cos,
        Func::Exp,
        Func::Log,
        Func::Sqrt,
        Func::Abs,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
            Func::Abs => "abs",
        }
    }

    fn lookup(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == name)
    }
}

#[derive(Debug, Clone)]
pub enum ExprKind {
    Num(f64),
    Var,
    Pi,
    Neg(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

/// A parsed expression node. Equality ignores source spans.
#[derive(Debug, Clone)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: Span,
}

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        use ExprKind::*;
        match (&self.kind, &other.kind) {
            (Num(a), Num(b)) => a.to_bits() == b.to_bits(),
            (Var, Var) | (Pi, Pi) => true,
            (Neg(a), Neg(b)) => a == b,
            (Binary(o1, l1, r1), Binary(o2, l2, r2)) => o1 == o2 && l1 == l2 && r1 == r2,
            (Call(f1, a1), Call(f2, a2)) => f1 == f2 && a1 == a2,
            _ => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("syntax error at byte {offset}: expected {}", expected.join(" or "))]
    Syntax {
        offset: usize,
        expected: Vec<&'static str>,
    },
    #[error("unknown function '{name}' at byte {offset}")]
    UnknownFunction { name: String, offset: usize },
}

impl ParseError {
    pub fn offset(&self) -> usize {
        match self {
            ParseError::Syntax { offset, .. } | ParseError::UnknownFunction { offset, .. } => {
                *offset
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalErrorKind {
    LogDomain,
    SqrtDomain,
    ZeroToNegativePower,
    NegativeBaseFractionalPower,
    DivisionByZero,
    NonFinite,
}

impl fmt::Display for EvalErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EvalErrorKind::LogDomain => "log of a non-positive number",
            EvalErrorKind::SqrtDomain => "sqrt of a negative number",
            EvalErrorKind::ZeroToNegativePower => "zero raised to a negative power",
            EvalErrorKind::NegativeBaseFractionalPower => {
                "negative base raised to a non-integer power"
            }
            EvalErrorKind::DivisionByZero => "division by zero",
            EvalErrorKind::NonFinite => "non-finite result",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("{kind} at bytes {}..{}", span.0, span.1)]
pub struct EvalError {
    pub kind: EvalErrorKind,
    pub span: Span,
}

pub fn parse(text: &str) -> Result<Expr, ParseError> {
    let mut p = Parser { src: text, pos: 0 };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < text.len() {
        return Err(p.syntax(&["operator", "end of input"]));
    }
    Ok(e)
}

impl FromStr for Expr {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn syntax(&self, expected: &[&'static str]) -> ParseError {
        ParseError::Syntax {
            offset: self.pos,
            expected: expected.to_vec(),
        }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek_raw() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn peek_raw(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.peek_raw()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn node(kind: ExprKind, start: usize, end: usize) -> Expr {
        Expr {
            kind,
            span: (start, end),
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Some('+') => BinOp::Add,
                Some('-') => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            let rhs = self.term()?;
            let span = (lhs.span.0, rhs.span.1);
            lhs = Self::node(
                ExprKind::Binary(op, Box::new(lhs), Box::new(rhs)),
                span.0,
                span.1,
            );
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Some('*') => BinOp::Mul,
                Some('/') => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            let rhs = self.unary()?;
            let span = (lhs.span.0, rhs.span.1);
            lhs = Self::node(
                ExprKind::Binary(op, Box::new(lhs), Box::new(rhs)),
                span.0,
                span.1,
            );
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.peek() == Some('-') {
            let start = self.pos;
            self.pos += 1;
            let inner = self.unary()?;
            let end = inner.span.1;
            return Ok(Self::node(ExprKind::Neg(Box::new(inner)), start, end));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.eat('^') {
            let exponent = self.unary()?;
            let span = (base.span.0, exponent.span.1);
            return Ok(Self::node(
                ExprKind::Binary(BinOp::Pow, Box::new(base), Box::new(exponent)),
                span.0,
                span.1,
            ));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        const ATOM: &[&str] = &["number", "'t'", "'pi'", "function call", "'('"];
        let start = self.pos_after_ws();
        match self.peek_raw() {
            Some(c) if c.is_ascii_digit() || c == '.' => self.number(start),
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {
                let len = self.src[start..]
                    .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
                    .unwrap_or(self.src.len() - start);
                let name = &self.src[start..start + len];
                self.pos = start + len;
                match name {
                    "t" => Ok(Self::node(ExprKind::Var, start, self.pos)),
                    "pi" => Ok(Self::node(ExprKind::Pi, start, self.pos)),
                    _ => {
                        let func =
                            Func::lookup(name).ok_or_else(|| ParseError::UnknownFunction {
                                name: name.to_string(),
                                offset: start,
                            })?;
                        if !self.eat('(') {
                            return Err(self.syntax(&["'('"]));
                        }
                        let arg = self.expr()?;
                        if !self.eat(')') {
                            return Err(self.syntax(&["')'"]));
                        }
                        Ok(Self::node(
                            ExprKind::Call(func, Box::new(arg)),
                            start,
                            self.pos,
                        ))
                    }
                }
            }
            Some('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(')') {
                    return Err(self.syntax(&["')'"]));
                }
                // Parentheses do not get their own node.
                Ok(Expr {
                    kind: inner.kind,
                    span: (start, self.pos),
                })
            }
            _ => Err(self.syntax(ATOM)),
        }
    }

    fn pos_after_ws(&mut self) -> usize {
        self.skip_ws();
        self.pos
    }

    fn number(&mut self, start: usize) -> Result<Expr, ParseError> {
        let bytes = self.src.as_bytes();
        let mut i = start;
        let digits = |i: &mut usize| {
            let s = *i;
            while *i < bytes.len() && bytes[*i].is_ascii_digit() {
                *i += 1;
            }
            *i - s
        };
        let int_digits = digits(&mut i);
        let mut frac_digits = 0;
        if i < bytes.len() && bytes[i] == b'.' {
            i += 1;
            frac_digits = digits(&mut i);
        }
        if int_digits + frac_digits == 0 {
            self.pos = start;
            return Err(self.syntax(&["digit"]));
        }
        if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
            let mut j = i + 1;
            if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                j += 1;
            }
            if digits(&mut j) == 0 {
                self.pos = j;
                return Err(self.syntax(&["exponent digits"]));
            }
            i = j;
        }
        let value: f64 = self.src[start..i]
            .parse()
            .expect("number literal already validated");
        self.pos = i;
        Ok(Self::node(ExprKind::Num(value), start, i))
    }
}

impl Expr {
    pub fn evaluate(&self, t: f64) -> Result<f64, EvalError> {
        let fail = |kind| EvalError {
            kind,
            span: self.span,
        };
        let value = match &self.kind {
            ExprKind::Num(v) => *v,
            ExprKind::Var => t,
            ExprKind::Pi => std::f64::consts::PI,
            ExprKind::Neg(e) => -e.evaluate(t)?,
            ExprKind::Binary(op, l, r) => {
                let x = l.evaluate(t)?;
                let y = r.evaluate(t)?;
                match op {
                    BinOp::Add => x + y,
                    BinOp::Sub => x - y,
                    BinOp::Mul => x * y,
                    BinOp::Div => {
                        if y == 0.0 {
                            return Err(fail(EvalErrorKind::DivisionByZero));
                        }
                        x / y
                    }
                    BinOp::Pow => pow(x, y).map_err(fail)?,
                }
            }
            ExprKind::Call(func, arg) => {
                let x = arg.evaluate(t)?;
                match func {
                    Func::Sin => x.sin(),
                    Func::Cos => x.cos(),
                    Func::Exp => x.exp(),
                    Func::Log => {
                        if x <= 0.0 {
                            return Err(fail(EvalErrorKind::LogDomain));
                        }
                        x.ln()
                    }
                    Func::Sqrt => {
                        if x < 0.0 {
                            return Err(fail(EvalErrorKind::SqrtDomain));
                        }
                        x.sqrt()
                    }
                    Func::Abs => x.abs(),
                }
            }
        };
        if value.is_finite() {
            Ok(value)
        } else {
            Err(fail(EvalErrorKind::NonFinite))
        }
    }
}

fn pow(base: f64, exponent: f64) -> Result<f64, EvalErrorKind> {
    if base == 0.0 && exponent < 0.0 {
        return Err(EvalErrorKind::ZeroToNegativePower);
    }
    if base < 0.0 && exponent.fract() != 0.0 {
        return Err(EvalErrorKind::NegativeBaseFractionalPower);
    }
    if exponent.fract() == 0.0 && exponent.abs() <= i32::MAX as f64 {
        Ok(base.powi(exponent as i32))
    } else {
        Ok(base.powf(exponent))
    }
}

/// Prints with enough parentheses that reparsing gives the same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ExprKind::Num(v) => write!(f, "{v}"),
            ExprKind::Var => f.write_str("t"),
            ExprKind::Pi => f.write_str("pi"),
            ExprKind::Neg(e) => write!(f, "(-{e})"),
            ExprKind::Binary(op, l, r) => write!(f, "({l} {} {r})", op.symbol()),
            ExprKind::Call(func, arg) => write!(f, "{}({arg})", func.name()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn num(v: f64) -> Expr {
        Expr {
            kind: ExprKind::Num(v),
            span: (0, 0),
        }
    }

    fn var() -> Expr {
        Expr {
            kind: ExprKind::Var,
            span: (0, 0),
        }
    }

    fn bin(op: BinOp, l: Expr, r: Expr) -> Expr {
        Expr {
            kind: ExprKind::Binary(op, Box::new(l), Box::new(r)),
            span: (0, 0),
        }
    }

    fn eval(s: &str, t: f64) -> f64 {
        parse(s).unwrap().evaluate(t).unwrap()
    }

    #[test]
    fn parse_examples() {
        assert_eq!(parse("t^2").unwrap(), bin(BinOp::Pow, var(), num(2.0)));
        assert_eq!(
            parse("2*t + 1").unwrap(),
            bin(BinOp::Add, bin(BinOp::Mul, num(2.0), var()), num(1.0))
        );
        let pi = Expr {
            kind: ExprKind::Pi,
            span: (0, 0),
        };
        let call = Expr {
            kind: ExprKind::Call(Func::Sin, Box::new(bin(BinOp::Mul, pi, var()))),
            span: (0, 0),
        };
        assert_eq!(parse("sin(pi*t)/t").unwrap(), bin(BinOp::Div, call, var()));
    }

    #[test]
    fn evaluate_examples() {
        assert_eq!(eval("t^2", 3.0), 9.0);
        assert_eq!(eval("sqrt(t)", 4.0), 2.0);
        let err = parse("log(t)").unwrap().evaluate(0.0).unwrap_err();
        assert_eq!(err.kind, EvalErrorKind::LogDomain);
        assert_eq!(err.span, (0, 6));
    }

    #[test]
    fn precedence_table() {
        let cases = [
            ("2+3*4^2", 50.0),
            ("-2^2", -4.0),
            ("2^3^2", 512.0),
            ("2^-1", 0.5),
            ("(2+3)*4", 20.0),
            ("8/4/2", 1.0),
            ("8-4-2", 2.0),
            ("--3", 3.0),
            ("-t*2", -6.0),
            ("2*-t", -6.0),
            ("1.5e1 + .5", 15.5),
            ("abs(-t) + exp(0) + cos(0)", 5.0),
        ];
        for (src, want) in cases {
            assert_eq!(eval(src, 3.0), want, "{src}");
        }
    }

    #[test]
    fn domain_errors() {
        let kind = |s: &str, t: f64| parse(s).unwrap().evaluate(t).unwrap_err().kind;
        assert_eq!(kind("0^(-1)", 0.0), EvalErrorKind::ZeroToNegativePower);
        assert_eq!(
            kind("t^0.5", -1.0),
            EvalErrorKind::NegativeBaseFractionalPower
        );
        assert_eq!(kind("sqrt(t)", -1.0), EvalErrorKind::SqrtDomain);
        assert_eq!(kind("1/t", 0.0), EvalErrorKind::DivisionByZero);
        assert_eq!(kind("exp(t)", 1000.0), EvalErrorKind::NonFinite);
        assert_eq!(eval("t^3", -2.0), -8.0);
    }

    #[test]
    fn eval_error_points_at_subexpression() {
        let err = parse("1 + log(t - 1)").unwrap().evaluate(1.0).unwrap_err();
        assert_eq!(err.span, (4, 14));
    }

    #[test]
    fn malformed_input_is_positioned() {
        let syntax_at = |s: &str| match parse(s).unwrap_err() {
            ParseError::Syntax { offset, .. } => offset,
            other => panic!("unexpected {other:?}"),
        };
        assert_eq!(syntax_at("2t"), 1);
        assert_eq!(syntax_at("t +"), 3);
        assert_eq!(syntax_at("(t"), 2);
        assert_eq!(syntax_at(""), 0);
        assert_eq!(syntax_at("1e"), 2);
        assert_eq!(syntax_at("sin t"), 4);
        assert_eq!(syntax_at("t * * 2"), 4);
        assert_eq!(
            parse("foo(t)").unwrap_err(),
            ParseError::UnknownFunction {
                name: "foo".into(),
                offset: 0
            }
        );
        assert_eq!(parse("x + 1").unwrap_err().offset(), 0);
    }

    #[test]
    fn print_reparse_fixpoint() {
        for src in [
            "t^2",
            "-2^2",
            "2^3^2",
            "sin(pi*t)/t",
            "-(t-1)*-(t+1)",
            "1e-7*t",
            "2^-t",
        ] {
            let e = parse(src).unwrap();
            let printed = e.to_string();
            assert_eq!(parse(&printed).unwrap(), e, "{src} -> {printed}");
        }
    }
}
