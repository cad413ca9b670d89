//! Text formats: network files, observation files and truth-table exports.
//!
//! A network file:
//!
//! ```text
//! # comments run to the end of the line
//! n = 2
//! f0 = 1
//! f1 = !x0 | x1
//! delay_up 0 = 1.0
//! delay_down 1 = 2.5
//! delay_signal 0 1 = 0.1
//! ```
//!
//! An observation file holds one transition per line, `10 -> 11` or
//! `10 -> 11 W={1}`; a comment after a transition becomes its note.

use std::fmt::Write as _;

use crate::configuration::{AutomataSet, Configuration};
use crate::delay::DelayedNetwork;
use crate::error::{Error, Result};
use crate::expr::{parse_expression, Expr};
use crate::infer::{ObservedTransition, ObservedTransitionGraph};
use crate::limits::MAX_AUTOMATA;
use crate::network::Network;

fn split_comment(line: &str) -> (&str, Option<&str>) {
    match line.split_once('#') {
        Some((body, comment)) => (body.trim(), Some(comment.trim())),
        None => (line.trim(), None),
    }
}

fn parse_index(s: &str, file: &str, line: usize, what: &str) -> Result<usize> {
    s.trim()
        .parse()
        .map_err(|_| Error::format(file, line, format!("invalid {what} '{}'", s.trim())))
}

fn parse_value(s: &str, file: &str, line: usize) -> Result<f64> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| Error::format(file, line, format!("invalid delay value '{}'", s.trim())))?;
    if !(v.is_finite() && v > 0.0) {
        return Err(Error::format(file, line, format!("delays must be positive, got {v}")));
    }
    Ok(v)
}

enum DelayLine {
    Up(usize, f64),
    Down(usize, f64),
    Signal(usize, usize, f64),
}

/// Parses a network file. `file` only names the source in error messages.
pub fn parse_network_file(text: &str, file: &str) -> Result<DelayedNetwork> {
    let mut n: Option<(usize, usize)> = None;
    let mut ltfs: Vec<Option<(Expr, usize)>> = Vec::new();
    let mut delays: Vec<(DelayLine, usize)> = Vec::new();

    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let (body, _) = split_comment(raw);
        if body.is_empty() {
            continue;
        }
        let Some((lhs, rhs)) = body.split_once('=') else {
            return Err(Error::format(file, line, format!("expected '<name> = <value>', got '{body}'")));
        };
        let lhs = lhs.trim();
        let rhs = rhs.trim();

        if lhs == "n" {
            if let Some((_, first)) = n {
                return Err(Error::format(file, line, format!("size already declared on line {first}")));
            }
            let size = parse_index(rhs, file, line, "size")?;
            if size == 0 || size > MAX_AUTOMATA {
                return Err(Error::format(
                    file,
                    line,
                    format!("size must lie in 1..={MAX_AUTOMATA}, got {size}"),
                ));
            }
            n = Some((size, line));
            ltfs = vec![None; size];
            continue;
        }
        let Some((size, _)) = n else {
            return Err(Error::format(file, line, "the size line 'n = <int>' must come first"));
        };

        let words: Vec<&str> = lhs.split_whitespace().collect();
        match words.as_slice() {
            [name] if name.starts_with('f') => {
                let i = parse_index(&name[1..], file, line, "function name")?;
                if i >= size {
                    return Err(Error::format(file, line, format!("f{i} out of range for n = {size}")));
                }
                if let Some((_, first)) = ltfs[i] {
                    return Err(Error::format(file, line, format!("f{i} already defined on line {first}")));
                }
                let expr = parse_expression(rhs, size)
                    .map_err(|e| Error::format(file, line, format!("in f{i}: {e}")))?;
                ltfs[i] = Some((expr, line));
            }
            ["delay_up", i] | ["delay_down", i] => {
                let i = parse_index(i, file, line, "automaton index")?;
                if i >= size {
                    return Err(Error::format(file, line, format!("automaton {i} out of range for n = {size}")));
                }
                let v = parse_value(rhs, file, line)?;
                let d = if words[0] == "delay_up" {
                    DelayLine::Up(i, v)
                } else {
                    DelayLine::Down(i, v)
                };
                delays.push((d, line));
            }
            ["delay_signal", i, j] => {
                let i = parse_index(i, file, line, "automaton index")?;
                let j = parse_index(j, file, line, "automaton index")?;
                if i >= size || j >= size {
                    return Err(Error::format(file, line, format!("arc ({i},{j}) out of range for n = {size}")));
                }
                delays.push((DelayLine::Signal(i, j, parse_value(rhs, file, line)?), line));
            }
            _ => {
                return Err(Error::format(file, line, format!("unknown entry '{lhs}'")));
            }
        }
    }

    let Some((size, header)) = n else {
        return Err(Error::format(file, 0, "missing size line 'n = <int>'"));
    };
    let mut exprs = Vec::with_capacity(size);
    for (i, slot) in ltfs.into_iter().enumerate() {
        match slot {
            Some((e, _)) => exprs.push(e),
            None => return Err(Error::format(file, header, format!("f{i} is never defined"))),
        }
    }
    let mut dnet = DelayedNetwork::new(Network::new(exprs)?);
    let mut seen = std::collections::BTreeMap::new();
    for (d, line) in delays {
        let key = match d {
            DelayLine::Up(i, _) => format!("delay_up {i}"),
            DelayLine::Down(i, _) => format!("delay_down {i}"),
            DelayLine::Signal(i, j, _) => format!("delay_signal {i} {j}"),
        };
        if let Some(first) = seen.insert(key.clone(), line) {
            return Err(Error::format(file, line, format!("{key} already set on line {first}")));
        }
        let res = match d {
            DelayLine::Up(i, v) => dnet.set_up(i, v),
            DelayLine::Down(i, v) => dnet.set_down(i, v),
            DelayLine::Signal(i, j, v) => dnet.set_response(i, j, v),
        };
        res.map_err(|e| Error::format(file, line, e.to_string()))?;
    }
    Ok(dnet)
}

/// Network-file text; parsing it back gives the same network and delays.
pub fn write_network_file(dnet: &DelayedNetwork) -> String {
    let net = dnet.base();
    let mut out = format!("n = {}\n", net.n());
    for (i, e) in net.ltfs().iter().enumerate() {
        let _ = writeln!(out, "f{i} = {e}");
    }
    for i in 0..net.n() {
        if let Some(v) = dnet.up(i) {
            let _ = writeln!(out, "delay_up {i} = {v}");
        }
        if let Some(v) = dnet.down(i) {
            let _ = writeln!(out, "delay_down {i} = {v}");
        }
    }
    for (&(i, j), v) in dnet.responses() {
        let _ = writeln!(out, "delay_signal {i} {j} = {v}");
    }
    out
}

/// Parses observations in the line format, or in JSON when the text starts with `{`.
pub fn parse_observed(text: &str, file: &str) -> Result<ObservedTransitionGraph> {
    if text.trim_start().starts_with('{') {
        let raw: ObservedTransitionGraph =
            serde_json::from_str(text).map_err(|e| Error::format(file, e.line(), e.to_string()))?;
        return ObservedTransitionGraph::from_transitions(raw.n, raw.transitions().to_vec());
    }

    let mut n: Option<usize> = None;
    let mut transitions = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let (body, comment) = split_comment(raw);
        if body.is_empty() {
            continue;
        }
        if let Some(rest) = body.strip_prefix("n =").or_else(|| body.strip_prefix("n=")) {
            if n.is_some() || !transitions.is_empty() {
                return Err(Error::format(file, line, "the size line must come first and only once"));
            }
            n = Some(parse_index(rest, file, line, "size")?);
            continue;
        }
        let Some((src, rest)) = body.split_once("->") else {
            return Err(Error::format(file, line, format!("expected '<src> -> <dst>', got '{body}'")));
        };
        let mut parts = rest.split_whitespace();
        let dst = parts.next().unwrap_or("");
        let label = match parts.next() {
            None => None,
            Some(w) => {
                let set = w
                    .strip_prefix("W=")
                    .ok_or_else(|| Error::format(file, line, format!("expected 'W={{..}}', got '{w}'")))?;
                Some(
                    set.parse::<AutomataSet>()
                        .map_err(|e| Error::format(file, line, e))?,
                )
            }
        };
        if let Some(extra) = parts.next() {
            return Err(Error::format(file, line, format!("unexpected '{extra}'")));
        }
        let parse_config = |s: &str| {
            s.trim()
                .parse::<Configuration>()
                .map_err(|e| Error::format(file, line, format!("invalid configuration '{}': {e}", s.trim())))
        };
        let source = parse_config(src)?;
        let target = parse_config(dst)?;
        let size = *n.get_or_insert(source.len());
        for c in [source, target] {
            if c.len() != size {
                return Err(Error::format(
                    file,
                    line,
                    format!("configuration {c} has length {}, expected {size}", c.len()),
                ));
            }
        }
        if let Some(i) = label.and_then(AutomataSet::max_index) {
            if i >= size {
                return Err(Error::format(file, line, format!("automaton {i} out of range for n = {size}")));
            }
        }
        transitions.push(ObservedTransition {
            source,
            target,
            label,
            note: comment.filter(|c| !c.is_empty()).map(str::to_string),
        });
    }
    let Some(size) = n else {
        return Err(Error::format(file, 0, "no transitions and no size line"));
    };
    ObservedTransitionGraph::from_transitions(size, transitions)
}

pub fn write_observed(t: &ObservedTransitionGraph) -> String {
    let mut out = format!("n = {}\n", t.n);
    for o in t.transitions() {
        let _ = write!(out, "{o}");
        if let Some(note) = &o.note {
            let _ = write!(out, "  # {note}");
        }
        out.push('\n');
    }
    out
}

/// `{"schema": 1, "n": .., "tables": [[f_i(x) for x in integer order] for i]}`.
pub fn truth_tables_json(net: &Network) -> Result<serde_json::Value> {
    let tables: Vec<Vec<u8>> = net
        .truth_tables()?
        .into_iter()
        .map(|t| t.into_iter().map(u8::from).collect())
        .collect();
    Ok(serde_json::json!({ "schema": 1, "n": net.n(), "tables": tables }))
}
