//! Boolean expressions for local transition functions.
//!
//! Concrete syntax: `0`, `1`, `x<i>`, `!e`, `e & e`, `e | e` and parentheses,
//! whitespace-insensitive. `!` binds tightest, then `&`, then `|`.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::configuration::Configuration;
use crate::error::{Error, Result};
use crate::limits;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Expr {
    Const(bool),
    Var(usize),
    Not(Box<Expr>),
    And(Vec<Expr>),
    Or(Vec<Expr>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unexpected character '{0}'")]
    UnexpectedChar(char),
    #[error("unexpected end of expression")]
    UnexpectedEnd,
    #[error("expected ')'")]
    UnclosedParen,
    #[error("trailing input after expression")]
    TrailingInput,
    #[error("missing index after 'x'")]
    MissingIndex,
    #[error("variable x{index} out of range for a network of size {n}")]
    VariableOutOfRange { index: usize, n: usize },
}

/// Syntax error with a 0-based character position into the source text.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("at column {}: {kind}", .position + 1)]
pub struct ParseError {
    pub position: usize,
    pub kind: ParseErrorKind,
}

impl Expr {
    pub fn var(i: usize) -> Expr {
        Expr::Var(i)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(e: Expr) -> Expr {
        Expr::Not(Box::new(e))
    }

    /// Evaluates on a raw configuration bit mask (`x_i` is bit `i`).
    pub fn eval_bits(&self, bits: u64) -> bool {
        match self {
            Expr::Const(b) => *b,
            Expr::Var(i) => (bits >> i) & 1 == 1,
            Expr::Not(e) => !e.eval_bits(bits),
            Expr::And(es) => es.iter().all(|e| e.eval_bits(bits)),
            Expr::Or(es) => es.iter().any(|e| e.eval_bits(bits)),
        }
    }

    pub fn evaluate(&self, x: Configuration) -> bool {
        self.eval_bits(x.bits())
    }

    /// Largest variable index mentioned, if any.
    pub fn max_var(&self) -> Option<usize> {
        match self {
            Expr::Const(_) => None,
            Expr::Var(i) => Some(*i),
            Expr::Not(e) => e.max_var(),
            Expr::And(es) | Expr::Or(es) => es.iter().filter_map(Expr::max_var).max(),
        }
    }

    /// Truth table indexed by the integer rendering of configurations.
    pub fn truth_table(&self, n: usize) -> Result<Vec<bool>> {
        limits::check_exhaustive(n)?;
        Ok((0..1u64 << n).map(|b| self.eval_bits(b)).collect())
    }

    /// Semantic dependency on automaton `j`: returns the smallest configuration
    /// `x` with `e(x) != e(flip(x, {j}))`, or `None` if `e` ignores `x_j`.
    pub fn depends_on(&self, j: usize, n: usize) -> Result<Option<Configuration>> {
        if j >= n {
            return Err(Error::IndexOutOfRange { index: j, n });
        }
        limits::check_exhaustive(n)?;
        let bit = 1u64 << j;
        for b in 0..1u64 << n {
            if b & bit == 0 && self.eval_bits(b) != self.eval_bits(b | bit) {
                return Ok(Some(Configuration::new(b, n)));
            }
        }
        Ok(None)
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Or(es) if es.len() > 1 => 0,
            Expr::And(es) if es.len() > 1 => 1,
            _ => 2,
        }
    }

    fn fmt_child(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.precedence() < min {
            write!(f, "({self})")
        } else {
            write!(f, "{self}")
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(b) => f.write_str(if *b { "1" } else { "0" }),
            Expr::Var(i) => write!(f, "x{i}"),
            Expr::Not(e) => {
                f.write_str("!")?;
                e.fmt_child(f, 2)
            }
            // Empty conjunction/disjunction are the neutral constants.
            Expr::And(es) if es.is_empty() => f.write_str("1"),
            Expr::Or(es) if es.is_empty() => f.write_str("0"),
            Expr::And(es) => {
                for (k, e) in es.iter().enumerate() {
                    if k > 0 {
                        f.write_str(" & ")?;
                    }
                    e.fmt_child(f, 2)?;
                }
                Ok(())
            }
            Expr::Or(es) => {
                for (k, e) in es.iter().enumerate() {
                    if k > 0 {
                        f.write_str(" | ")?;
                    }
                    e.fmt_child(f, 1)?;
                }
                Ok(())
            }
        }
    }
}

/// Parses `text` as a local transition function of a network of size `n`.
pub fn parse_expression(text: &str, n: usize) -> std::result::Result<Expr, ParseError> {
    let mut parser = Parser {
        chars: text.chars().collect(),
        pos: 0,
        n,
    };
    let e = parser.disjunction()?;
    parser.skip_ws();
    if parser.pos < parser.chars.len() {
        return Err(parser.error(ParseErrorKind::TrailingInput));
    }
    Ok(e)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
    n: usize,
}

impl Parser {
    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn error(&self, kind: ParseErrorKind) -> ParseError {
        ParseError {
            position: self.pos,
            kind,
        }
    }

    fn disjunction(&mut self) -> std::result::Result<Expr, ParseError> {
        let mut terms = vec![self.conjunction()?];
        while self.peek() == Some('|') {
            self.pos += 1;
            terms.push(self.conjunction()?);
        }
        Ok(if terms.len() == 1 {
            terms.pop().unwrap()
        } else {
            Expr::Or(terms)
        })
    }

    fn conjunction(&mut self) -> std::result::Result<Expr, ParseError> {
        let mut factors = vec![self.factor()?];
        while self.peek() == Some('&') {
            self.pos += 1;
            factors.push(self.factor()?);
        }
        Ok(if factors.len() == 1 {
            factors.pop().unwrap()
        } else {
            Expr::And(factors)
        })
    }

    fn factor(&mut self) -> std::result::Result<Expr, ParseError> {
        match self.peek() {
            None => Err(self.error(ParseErrorKind::UnexpectedEnd)),
            Some('!') => {
                self.pos += 1;
                Ok(Expr::not(self.factor()?))
            }
            Some('(') => {
                self.pos += 1;
                let e = self.disjunction()?;
                if self.peek() != Some(')') {
                    return Err(self.error(ParseErrorKind::UnclosedParen));
                }
                self.pos += 1;
                Ok(e)
            }
            Some('0') => {
                self.pos += 1;
                Ok(Expr::Const(false))
            }
            Some('1') => {
                self.pos += 1;
                Ok(Expr::Const(true))
            }
            Some('x') => {
                let start = self.pos;
                self.pos += 1;
                let digits_start = self.pos;
                while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                if self.pos == digits_start {
                    return Err(self.error(ParseErrorKind::MissingIndex));
                }
                let digits: String = self.chars[digits_start..self.pos].iter().collect();
                let index = digits.parse::<usize>().unwrap_or(usize::MAX);
                if index >= self.n {
                    return Err(ParseError {
                        position: start,
                        kind: ParseErrorKind::VariableOutOfRange { index, n: self.n },
                    });
                }
                Ok(Expr::Var(index))
            }
            Some(c) => Err(self.error(ParseErrorKind::UnexpectedChar(c))),
        }
    }
}
