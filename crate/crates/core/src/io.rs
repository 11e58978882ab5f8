//! Plain-text graph and divisor files.
//!
//! A graph file starts with `n m`, followed by `m` lines `u w [len]` with
//! 0-based endpoints and an optional positive length (default 1). A divisor
//! file is one line of space-separated integers.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::{Divisor, Graph};
use crate::metric::EdgeLengths;

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn numbers<T: std::str::FromStr>(line_no: usize, line: &str) -> Result<Vec<T>> {
    line.split_whitespace()
        .map(|tok| {
            tok.parse::<T>()
                .map_err(|_| parse_err(line_no, format!("bad number `{tok}`")))
        })
        .collect()
}

/// Non-empty lines with their 1-based line numbers. Blank lines are only
/// tolerated at the end.
fn content_lines(text: &str) -> Result<Vec<(usize, &str)>> {
    let lines: Vec<(usize, &str)> = text.lines().enumerate().map(|(i, l)| (i + 1, l)).collect();
    let last = lines
        .iter()
        .rposition(|(_, l)| !l.trim().is_empty())
        .map_or(0, |i| i + 1);
    let lines = &lines[..last];
    if let Some(&(n, _)) = lines.iter().find(|(_, l)| l.trim().is_empty()) {
        return Err(parse_err(n, "blank line"));
    }
    Ok(lines.to_vec())
}

/// Parses a graph file; lengths are all 1 when the column is absent.
pub fn parse_graph(text: &str) -> Result<(Graph, EdgeLengths)> {
    let lines = content_lines(text)?;
    let &(first, header) = lines
        .first()
        .ok_or_else(|| parse_err(1, "empty graph file"))?;
    let head: Vec<usize> = numbers(first, header)?;
    let [n, m] = head[..] else {
        return Err(parse_err(first, "expected `n m`"));
    };
    if lines.len() != m + 1 {
        let at = lines.last().map_or(1, |&(k, _)| k);
        return Err(parse_err(
            at,
            format!("expected {m} edge lines, found {}", lines.len() - 1),
        ));
    }
    let mut edges = Vec::with_capacity(m);
    let mut lengths = Vec::with_capacity(m);
    for &(no, line) in &lines[1..] {
        let fields: Vec<u64> = numbers(no, line)?;
        let (u, w, len) = match fields[..] {
            [u, w] => (u, w, 1),
            [u, w, len] => (u, w, len),
            _ => return Err(parse_err(no, "expected `u w [len]`")),
        };
        if u as usize >= n || w as usize >= n {
            return Err(parse_err(no, format!("endpoint out of range 0..{n}")));
        }
        if u == w {
            return Err(parse_err(no, "loops are not allowed"));
        }
        if len == 0 {
            return Err(parse_err(no, "edge length must be positive"));
        }
        edges.push((u as usize, w as usize));
        lengths.push(len);
    }
    Ok((Graph::new(n, edges)?, EdgeLengths::new(lengths)?))
}

/// Parses a divisor file and checks it against `n` vertices, if given.
pub fn parse_divisor(text: &str, n: Option<usize>) -> Result<Divisor> {
    let lines = content_lines(text)?;
    let [(no, line)] = lines[..] else {
        return Err(parse_err(
            lines.get(1).map_or(1, |l| l.0),
            "expected a single line",
        ));
    };
    let coeffs: Vec<i64> = numbers(no, line)?;
    if let Some(n) = n {
        if coeffs.len() != n {
            return Err(Error::Dimension {
                expected: n,
                got: coeffs.len(),
            });
        }
    }
    Ok(Divisor::new(coeffs))
}

/// Writes a graph file. The length column appears only if some length is
/// not 1.
pub fn format_graph(g: &Graph, lengths: Option<&EdgeLengths>) -> String {
    let with_len = lengths.filter(|l| !l.is_unit());
    let mut out = format!("{} {}\n", g.n_vertices(), g.n_edges());
    for (i, &(u, w)) in g.edges().iter().enumerate() {
        match with_len {
            Some(l) => writeln!(out, "{u} {w} {}", l.lengths()[i]),
            None => writeln!(out, "{u} {w}"),
        }
        .expect("writing to a String");
    }
    out
}

pub fn format_divisor(d: &Divisor) -> String {
    format!("{d}\n")
}
