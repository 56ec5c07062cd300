//! The canonical edge-list text format.
//!
//! ```text
//! n m
//! u v
//! ...
//! ```
//!
//! ASCII decimal, one space between fields, LF line endings, 0-indexed, one
//! `u v` line per edge `u -> v`. The writer always emits a trailing LF; the
//! reader accepts a missing final LF and nothing else that deviates.

use thiserror::Error;

use crate::graph::{Digraph, GraphError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct ParseError {
    /// 1-based line number.
    pub line: usize,
    pub message: String,
}

fn parse_pair(line: &str, lineno: usize) -> Result<(usize, usize), ParseError> {
    let err = |message: String| ParseError { line: lineno, message };
    if line.contains('\r') {
        return Err(err("carriage return found; line endings must be LF".into()));
    }
    let mut parts = line.split(' ');
    let (a, b) = match (parts.next(), parts.next(), parts.next()) {
        (Some(a), Some(b), None) => (a, b),
        _ => return Err(err(format!("expected two fields separated by one space, got {line:?}"))),
    };
    let num = |s: &str| -> Result<usize, ParseError> {
        if s.is_empty() || !s.bytes().all(|c| c.is_ascii_digit()) {
            return Err(err(format!("not a decimal integer: {s:?}")));
        }
        s.parse().map_err(|e| err(format!("{s:?}: {e}")))
    };
    Ok((num(a)?, num(b)?))
}

pub fn parse_edge_list(text: &str) -> Result<Digraph, ParseError> {
    let body = text.strip_suffix('\n').unwrap_or(text);
    if body.is_empty() {
        return Err(ParseError { line: 1, message: "missing header \"n m\"".into() });
    }
    let lines: Vec<&str> = body.split('\n').collect();
    let (n, m) = parse_pair(lines[0], 1)?;
    if lines.len() - 1 != m {
        return Err(ParseError {
            line: lines.len().min(m + 1) + 1,
            message: format!("header declares {m} edges but {} edge lines follow", lines.len() - 1),
        });
    }
    let mut pairs = Vec::with_capacity(m);
    for (i, line) in lines[1..].iter().enumerate() {
        pairs.push(parse_pair(line, i + 2)?);
    }
    Digraph::from_edges(n, pairs.iter().copied()).map_err(|e| {
        let offending = match &e {
            GraphError::Loop(u) => (*u, *u),
            GraphError::Antiparallel(u, v) | GraphError::Duplicate(u, v) => (*u, *v),
            GraphError::VertexOutOfRange { u, v, .. } => (*u, *v),
            GraphError::InvalidOrdering { .. } => unreachable!(),
        };
        // The first line carrying the offending pair that is not also a prior valid edge.
        let idx = match e {
            GraphError::Duplicate(..) | GraphError::Antiparallel(..) => {
                pairs.iter().rposition(|&p| p == offending)
            }
            _ => pairs.iter().position(|&p| p == offending),
        }
        .unwrap_or(0);
        ParseError { line: idx + 2, message: e.to_string() }
    })
}

pub fn write_edge_list(g: &Digraph) -> String {
    let mut out = String::with_capacity(8 * (g.m() + 1));
    out.push_str(&format!("{} {}\n", g.n(), g.m()));
    for &(u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_byte_exact() {
        let text = "3 3\n0 1\n1 2\n2 0\n";
        let g = parse_edge_list(text).unwrap();
        assert_eq!(g.m(), 3);
        assert_eq!(write_edge_list(&g), text);
        assert_eq!(parse_edge_list("3 3\n0 1\n1 2\n2 0").unwrap(), g);
    }

    #[test]
    fn rejects_with_line_numbers() {
        assert_eq!(parse_edge_list("2 2\n0 1\n1 0\n").unwrap_err().line, 3);
        assert_eq!(parse_edge_list("2 1\n0  1\n").unwrap_err().line, 2);
        assert_eq!(parse_edge_list("2 1\r\n0 1\n").unwrap_err().line, 1);
        assert_eq!(parse_edge_list("2 1\n0 5\n").unwrap_err().line, 2);
        assert_eq!(parse_edge_list("3 2\n0 1\n").unwrap_err().line, 3);
        assert_eq!(parse_edge_list("3 1\n0 1\n1 2\n").unwrap_err().line, 3);
        assert_eq!(parse_edge_list("3 1\n0 -1\n").unwrap_err().line, 2);
        assert_eq!(parse_edge_list("").unwrap_err().line, 1);
    }

    #[test]
    fn empty_graph() {
        let g = parse_edge_list("4 0\n").unwrap();
        assert_eq!((g.n(), g.m()), (4, 0));
        assert_eq!(write_edge_list(&g), "4 0\n");
    }
}
