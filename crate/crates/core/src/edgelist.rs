//! Plain-text edge lists: a header line `n m`, then one `u v` line per edge. `#` starts a comment.

use crate::error::{Error, Result};
use crate::graph::Graph;

fn parse_pair(line: usize, text: &str) -> Result<(usize, usize)> {
    let bad = |msg: String| Error::Parse { line, msg };
    let mut it = text.split_whitespace();
    let (Some(a), Some(b), None) = (it.next(), it.next(), it.next()) else {
        return Err(bad(format!("expected two integers, got {text:?}")));
    };
    let num = |s: &str| s.parse::<usize>().map_err(|_| bad(format!("{s:?} is not a non-negative integer")));
    Ok((num(a)?, num(b)?))
}

pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    let mut seen = std::collections::HashSet::new();
    let mut last_line = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        last_line = line;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let (a, b) = parse_pair(line, body)?;
        let Some((n, m)) = header else {
            header = Some((a, b));
            continue;
        };
        let err = |msg: String| Error::Parse { line, msg };
        if a >= n || b >= n {
            return Err(err(format!("vertex {} out of range for n = {n}", a.max(b))));
        }
        if a == b {
            return Err(err(format!("self-loop at vertex {a}")));
        }
        if !seen.insert((a.min(b), a.max(b))) {
            return Err(err(format!("duplicate edge {a}-{b}")));
        }
        if edges.len() == m {
            return Err(err(format!("more than the declared {m} edges")));
        }
        edges.push((a, b));
    }
    let (n, m) = header.ok_or(Error::Parse { line: last_line.max(1), msg: "missing `n m` header".into() })?;
    if edges.len() != m {
        return Err(Error::Parse { line: last_line, msg: format!("declared {m} edges, found {}", edges.len()) });
    }
    Graph::from_edges(n, edges)
}

pub fn write_edge_list(g: &Graph) -> String {
    let mut out = format!("{} {}\n", g.n(), g.m());
    for e in g.edges() {
        out.push_str(&format!("{} {}\n", e.u, e.v));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::petersen;

    #[test]
    fn examples() {
        let k2 = parse_edge_list("2 1\n0 1").unwrap();
        assert_eq!((k2.n(), k2.m()), (2, 1));
        let tri = parse_edge_list("3 3\n0 1\n1 2\n2 0").unwrap();
        assert_eq!(tri.regular_degree(), Some(2));
        assert_eq!(
            parse_edge_list("2 1\n0 0").unwrap_err(),
            Error::Parse { line: 2, msg: "self-loop at vertex 0".into() }
        );
    }

    #[test]
    fn errors_carry_lines() {
        let line = |t: &str| match parse_edge_list(t) {
            Err(Error::Parse { line, .. }) => line,
            other => panic!("{other:?}"),
        };
        assert_eq!(line("# c\n3 2\n0 1\n1 x\n"), 4);
        assert_eq!(line("3 2\n0 1\n1 0\n"), 3);
        assert_eq!(line("3 2\n0 5\n"), 2);
        assert_eq!(line("3 2\n0 1\n"), 2);
        assert_eq!(line("3 1\n0 1\n1 2\n"), 3);
        assert_eq!(line(""), 1);
    }

    #[test]
    fn round_trip_with_comments() {
        let g = petersen();
        let text = format!("# petersen\n{}", write_edge_list(&g).replace('\n', "  # edge\n"));
        assert_eq!(parse_edge_list(&text).unwrap(), g);
    }
}
