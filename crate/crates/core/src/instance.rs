//! The line-oriented instance format.
//!
//! ```text
//! # irrational rotation
//! n 2
//! A 3/5 -4/5
//! A 4/5 3/5
//! x 1 0
//! y 2 0
//! delta 1/2
//! norm euclidean
//! ```
//!
//! `n` comes first; the `n` rows of `A` are consecutive. `norm` is optional.

use crate::arith::rational::{fmt_rational, parse_rational};
use crate::arith::{Rational, RationalMatrix};
use crate::norm::Norm;
use num_traits::Signed;
use std::fmt;
use std::str::FromStr;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProblemInstance {
    pub a: RationalMatrix,
    pub x: Vec<Rational>,
    pub y: Vec<Rational>,
    pub delta: Rational,
    pub norm: Norm,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    /// 1-based; one past the last line for missing items.
    pub line: usize,
    pub message: String,
}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { line, message: message.into() })
}

fn rationals(line: usize, fields: &[&str], n: usize, what: &str) -> Result<Vec<Rational>, ParseError> {
    if fields.len() != n {
        return err(line, format!("{what} needs {n} entries, found {}", fields.len()));
    }
    fields
        .iter()
        .map(|f| parse_rational(f).or_else(|e| err(line, e.to_string())))
        .collect()
}

impl ProblemInstance {
    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut n: Option<usize> = None;
        let mut rows: Vec<Vec<Rational>> = Vec::new();
        let mut rows_closed = false;
        let mut x = None;
        let mut y = None;
        let mut delta = None;
        let mut norm = None;
        let mut last = 0;
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            last = line;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let mut parts = content.split_whitespace();
            let key = parts.next().unwrap();
            let fields: Vec<&str> = parts.collect();
            if key != "n" && n.is_none() {
                return err(line, format!("`{key}` before the dimension line `n`"));
            }
            let dim = n.unwrap_or(0);
            if key != "A" && !rows.is_empty() && rows.len() < dim {
                return err(line, format!("expected {dim} rows of A, found {} before `{key}`", rows.len()));
            }
            if key != "A" && !rows.is_empty() {
                rows_closed = true;
            }
            match key {
                "n" => {
                    if n.is_some() {
                        return err(line, "duplicate `n`");
                    }
                    let v = match fields.as_slice() {
                        [v] => v.parse::<usize>().ok().filter(|&v| v > 0),
                        _ => None,
                    };
                    match v {
                        Some(v) => n = Some(v),
                        None => return err(line, "`n` takes one positive integer"),
                    }
                }
                "A" => {
                    if rows_closed || rows.len() == dim {
                        return err(line, format!("A has more than {dim} rows or its rows are not consecutive"));
                    }
                    rows.push(rationals(line, &fields, dim, "row of A")?);
                }
                "x" | "y" => {
                    let slot = if key == "x" { &mut x } else { &mut y };
                    if slot.is_some() {
                        return err(line, format!("duplicate `{key}`"));
                    }
                    *slot = Some(rationals(line, &fields, dim, key)?);
                }
                "delta" => {
                    if delta.is_some() {
                        return err(line, "duplicate `delta`");
                    }
                    let v = rationals(line, &fields, 1, "delta")?.remove(0);
                    if !v.is_positive() {
                        return err(line, format!("delta must be positive, got {}", fmt_rational(&v)));
                    }
                    delta = Some(v);
                }
                "norm" => {
                    if norm.is_some() {
                        return err(line, "duplicate `norm`");
                    }
                    match fields.as_slice() {
                        [v] => norm = Some(Norm::from_str(v).or_else(|e| err(line, e))?),
                        _ => return err(line, "`norm` takes one of euclidean, max"),
                    }
                }
                other => return err(line, format!("unknown key `{other}`")),
            }
        }
        let end = last + 1;
        let Some(n) = n else { return err(end, "missing `n`") };
        if rows.len() < n {
            return err(end, format!("expected {n} rows of A, found {}", rows.len()));
        }
        let a = RationalMatrix::from_rows(rows).or_else(|e| err(end, e.to_string()))?;
        let Some(x) = x else { return err(end, "missing `x`") };
        let Some(y) = y else { return err(end, "missing `y`") };
        let Some(delta) = delta else { return err(end, "missing `delta`") };
        Ok(ProblemInstance { a, x, y, delta, norm: norm.unwrap_or_default() })
    }

    /// Canonical text: no comments, single spaces, reduced rationals.
    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl FromStr for ProblemInstance {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, ParseError> {
        ProblemInstance::parse(s)
    }
}

impl fmt::Display for ProblemInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[Rational]| v.iter().map(fmt_rational).collect::<Vec<_>>().join(" ");
        writeln!(f, "n {}", self.n())?;
        for row in self.a.to_rows() {
            writeln!(f, "A {}", join(&row))?;
        }
        writeln!(f, "x {}", join(&self.x))?;
        writeln!(f, "y {}", join(&self.y))?;
        writeln!(f, "delta {}", fmt_rational(&self.delta))?;
        writeln!(f, "norm {}", self.norm)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::{int, rat};

    #[test]
    fn parses_examples() {
        let p = ProblemInstance::parse("n 1\nA 2\nx 1\ny 4\ndelta 1/2").unwrap();
        assert_eq!(p.a, RationalMatrix::from_ints(&[&[2]]));
        assert_eq!((p.x, p.y, p.delta, p.norm), (vec![int(1)], vec![int(4)], rat(1, 2), Norm::Euclidean));
        let r = ProblemInstance::parse("n 2\nA 3/5 -4/5\nA 4/5 3/5\nx 1 0\ny 2 0\ndelta 1/2").unwrap();
        assert_eq!(r.a[(1, 0)], rat(4, 5));
        let c = ProblemInstance::parse("# c\n\nn 1 # dim\nA 6/4\nx 1\ny 0\ndelta 1\nnorm max\n").unwrap();
        assert_eq!((c.a[(0, 0)].clone(), c.norm), (rat(3, 2), Norm::Max));
    }

    #[test]
    fn errors_name_the_line() {
        let e = ProblemInstance::parse("n 2\nA 1 0\nx 1 0\ny 0 0\ndelta 1").unwrap_err();
        assert_eq!(e.line, 3);
        assert!(e.message.contains("rows of A"));
        assert_eq!(ProblemInstance::parse("n 1\nA 1/0\nx 1\ny 1\ndelta 1").unwrap_err().line, 2);
        assert_eq!(ProblemInstance::parse("n 1\nA 1\nx 1 2\ny 1\ndelta 1").unwrap_err().line, 3);
        assert_eq!(ProblemInstance::parse("n 1\nA 1\nx 1\ny 1\ndelta -1").unwrap_err().line, 5);
        assert_eq!(ProblemInstance::parse("n 1\nA 1\nx 1\ny 1\ndelta 0").unwrap_err().line, 5);
        assert_eq!(ProblemInstance::parse("n 1\nA 1\nx 1\ny 1").unwrap_err().line, 5);
        assert_eq!(ProblemInstance::parse("A 1").unwrap_err().line, 1);
        assert_eq!(ProblemInstance::parse("n 1\nA 1\nx 1\ny 1\ndelta 1\nnorm l3").unwrap_err().line, 6);
        assert_eq!(ProblemInstance::parse("n 2\nA 1 0\nx 1 0\nA 0 1\ny 0 0\ndelta 1").unwrap_err().line, 3);
    }

    #[test]
    fn round_trip() {
        let text = "n 2\nA 3/5 -4/5\nA 4/5 3/5\nx 1 0\ny 2 0\ndelta 1/2\nnorm euclidean\n";
        let p = ProblemInstance::parse(text).unwrap();
        assert_eq!(p.to_text(), text);
        assert_eq!(ProblemInstance::parse(&p.to_text()).unwrap(), p);
    }
}
