//! Plain-text edge-list format.
//!
//! ```text
//! n m directed|undirected
//! tail head
//! ...
//! ```
//!
//! Vertices are 0-based, one arc (or edge) per line, repeated lines are
//! parallel arcs. Blank lines and lines starting with `#` are ignored.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::{Digraph, Graph};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParsedGraph {
    Directed(Digraph),
    Undirected(Graph),
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

fn parse_count(tok: &str, line: usize, what: &str) -> Result<usize> {
    tok.parse::<usize>()
        .map_err(|_| parse_err(line, format!("{what} {tok:?} is not a non-negative integer")))
}

pub fn parse_edge_list(text: &str) -> Result<ParsedGraph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (hline, header) = lines.next().ok_or_else(|| parse_err(1, "missing header"))?;
    let toks: Vec<&str> = header.split_whitespace().collect();
    if toks.len() != 3 {
        return Err(parse_err(hline, "header must be `n m directed|undirected`"));
    }
    let n = parse_count(toks[0], hline, "vertex count")?;
    let m = parse_count(toks[1], hline, "edge count")?;
    let directed = match toks[2] {
        "directed" => true,
        "undirected" => false,
        other => return Err(parse_err(hline, format!("expected directed or undirected, got {other:?}"))),
    };

    let mut pairs = Vec::with_capacity(m);
    let mut last = hline;
    for (lno, l) in lines {
        last = lno;
        if pairs.len() == m {
            return Err(parse_err(lno, format!("more than the declared {m} lines")));
        }
        let toks: Vec<&str> = l.split_whitespace().collect();
        if toks.len() != 2 {
            return Err(parse_err(lno, "expected `tail head`"));
        }
        let tail = parse_count(toks[0], lno, "vertex")?;
        let head = parse_count(toks[1], lno, "vertex")?;
        if tail >= n || head >= n {
            return Err(parse_err(lno, format!("vertex out of range 0..{n}")));
        }
        if tail == head {
            return Err(parse_err(lno, format!("loop at vertex {tail}: loops are not allowed")));
        }
        pairs.push((tail, head));
    }
    if pairs.len() < m {
        return Err(parse_err(last, format!("declared {m} lines but found {}", pairs.len())));
    }
    if directed {
        Ok(ParsedGraph::Directed(Digraph::new(n, &pairs).map_err(|e| parse_err(hline, e.to_string()))?))
    } else {
        Ok(ParsedGraph::Undirected(Graph::new(n, &pairs).map_err(|e| parse_err(hline, e.to_string()))?))
    }
}

/// Arcs are written in id order; ids themselves are not recorded.
pub fn write_digraph(d: &Digraph) -> String {
    let mut out = format!("{} {} directed\n", d.n(), d.arc_count());
    for a in d.arcs() {
        let _ = writeln!(out, "{} {}", a.tail, a.head);
    }
    out
}

pub fn write_graph(g: &Graph) -> String {
    let mut out = format!("{} {} undirected\n", g.n(), g.edge_count());
    for e in g.edges() {
        let _ = writeln!(out, "{} {}", e.u, e.v);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_two_cycle() {
        let parsed = parse_edge_list("2 2 directed\n0 1\n1 0").unwrap();
        assert_eq!(parsed, ParsedGraph::Directed(Digraph::new(2, &[(0, 1), (1, 0)]).unwrap()));
    }

    #[test]
    fn parses_triangle() {
        let parsed = parse_edge_list("3 3 undirected\n0 1\n1 2\n0 2\n").unwrap();
        assert_eq!(
            parsed,
            ParsedGraph::Undirected(Graph::new(3, &[(0, 1), (1, 2), (0, 2)]).unwrap())
        );
    }

    #[test]
    fn rejects_loop_with_line_number() {
        let err = parse_edge_list("2 1 directed\n0 0").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, ref message } if message.contains("loop")));
    }

    #[test]
    fn malformed_lines() {
        assert!(matches!(parse_edge_list(""), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_edge_list("2 1 sideways\n0 1"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_edge_list("2 1 directed\n0 x"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_edge_list("2 1 directed\n0 5"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_edge_list("2 2 directed\n0 1"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(
            parse_edge_list("2 1 directed\n0 1\n1 0"),
            Err(Error::Parse { line: 3, .. })
        ));
    }

    #[test]
    fn comments_and_blank_lines_ignored() {
        let parsed = parse_edge_list("# a comment\n\n2 1 directed\n\n0 1\n").unwrap();
        assert_eq!(parsed, ParsedGraph::Directed(Digraph::new(2, &[(0, 1)]).unwrap()));
    }

    #[test]
    fn write_then_parse() {
        let d = Digraph::new(3, &[(0, 1), (1, 2), (1, 2), (2, 0)]).unwrap();
        assert_eq!(parse_edge_list(&write_digraph(&d)).unwrap(), ParsedGraph::Directed(d));
        let g = Graph::new(3, &[(0, 1), (0, 1)]).unwrap();
        assert_eq!(parse_edge_list(&write_graph(&g)).unwrap(), ParsedGraph::Undirected(g));
    }
}
