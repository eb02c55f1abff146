//! graph6 encoding of simple undirected graphs.

use std::io::BufRead;

use ipcg_core::graph::{GraphError, LabeledGraph, MAX_VERTICES};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum Graph6Error {
    #[error("empty graph6 record")]
    Empty,
    #[error("malformed length prefix")]
    BadLength,
    #[error("illegal character {0:?}")]
    IllegalChar(char),
    #[error("record has {found} data bytes, expected {expected}")]
    WrongSize { expected: usize, found: usize },
    #[error("padding bits are not zero")]
    TrailingBits,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

fn sextet(c: u8) -> Result<u8, Graph6Error> {
    if (63..=126).contains(&c) {
        Ok(c - 63)
    } else {
        Err(Graph6Error::IllegalChar(c as char))
    }
}

pub fn parse_graph6(text: &str) -> Result<LabeledGraph, Graph6Error> {
    let bytes = text.trim_end_matches(['\n', '\r']).as_bytes();
    let (n, body) = match bytes {
        [] => return Err(Graph6Error::Empty),
        [126, 126, rest @ ..] => {
            if rest.len() < 6 {
                return Err(Graph6Error::BadLength);
            }
            let mut n = 0usize;
            for &c in &rest[..6] {
                n = n << 6 | sextet(c)? as usize;
            }
            if n <= 258_047 {
                return Err(Graph6Error::BadLength);
            }
            (n, &rest[6..])
        }
        [126, rest @ ..] => {
            if rest.len() < 3 {
                return Err(Graph6Error::BadLength);
            }
            let mut n = 0usize;
            for &c in &rest[..3] {
                n = n << 6 | sextet(c)? as usize;
            }
            if n < 63 {
                return Err(Graph6Error::BadLength);
            }
            (n, &rest[3..])
        }
        [c, rest @ ..] => (sextet(*c)? as usize, rest),
    };
    if n == 0 {
        return Err(GraphError::NoVertices.into());
    }
    if n > MAX_VERTICES {
        return Err(GraphError::TooManyVertices(n).into());
    }
    let bits = n * (n - 1) / 2;
    let expected = bits.div_ceil(6);
    if body.len() != expected {
        return Err(Graph6Error::WrongSize { expected, found: body.len() });
    }
    let data: Vec<u8> = body.iter().map(|&c| sextet(c)).collect::<Result<_, _>>()?;
    let bit = |k: usize| data[k / 6] >> (5 - k % 6) & 1 == 1;
    for k in bits..expected * 6 {
        if bit(k) {
            return Err(Graph6Error::TrailingBits);
        }
    }
    let mut pairs = Vec::new();
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            if bit(k) {
                pairs.push((i + 1, j + 1));
            }
            k += 1;
        }
    }
    Ok(LabeledGraph::from_edge_list(n, &pairs)?)
}

pub fn write_graph6(g: &LabeledGraph) -> String {
    let n = g.n();
    let mut out = String::new();
    if n <= 62 {
        out.push((n as u8 + 63) as char);
    } else {
        out.push('~');
        for shift in [12, 6, 0] {
            out.push(((n >> shift & 63) as u8 + 63) as char);
        }
    }
    let mut acc = 0u8;
    let mut filled = 0;
    for j in 1..n {
        for i in 0..j {
            acc = acc << 1 | g.has_edge(i, j) as u8;
            filled += 1;
            if filled == 6 {
                out.push((acc + 63) as char);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push(((acc << (6 - filled)) + 63) as char);
    }
    out
}

/// Reads one graph per line, skipping blank lines and an optional
/// `>>graph6<<` header. Errors carry the 1-based line number.
pub fn read_graph6<R: BufRead>(reader: R) -> anyhow::Result<Vec<LabeledGraph>> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        let line = line.strip_prefix(">>graph6<<").unwrap_or(line);
        if line.is_empty() {
            continue;
        }
        let g = parse_graph6(line).map_err(|e| anyhow::anyhow!("line {}: {e}", i + 1))?;
        out.push(g);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: usize, e: &[(usize, usize)]) -> LabeledGraph {
        LabeledGraph::from_edge_list(n, e).unwrap()
    }

    // reference strings produced by an independent graph6 encoder
    #[test]
    fn reference_records() {
        let cases = [
            ("A_", g(2, &[(1, 2)])),
            ("D??", g(5, &[])),
            ("DQc", g(5, &[(1, 3), (1, 5), (2, 4), (4, 5)])),
            ("@", g(1, &[])),
            ("FhCKG", g(7, &[(1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (1, 7)])),
            ("I????_?_G", g(10, &[(1, 10), (4, 8), (9, 10)])),
        ];
        for (text, graph) in cases {
            assert_eq!(parse_graph6(text).unwrap(), graph, "{text}");
            assert_eq!(write_graph6(&graph), text);
        }
        let k8: Vec<(usize, usize)> = (1..=8).flat_map(|u| (u + 1..=8).map(move |v| (u, v))).collect();
        assert_eq!(write_graph6(&g(8, &k8)), "G~~~~{");
    }

    #[test]
    fn long_length_prefix() {
        let text = format!("~??~{}O{}", "?".repeat(315), "?".repeat(10));
        assert_eq!(parse_graph6(&text).unwrap(), g(63, &[(1, 63)]));
        assert_eq!(write_graph6(&g(63, &[(1, 63)])), text);
        let text = format!("~?@{}G{}C{}", "?".repeat(4), "?".repeat(321), "?".repeat(10));
        let big = g(64, &[(1, 64), (6, 7)]);
        assert_eq!(parse_graph6(&text).unwrap(), big);
        assert_eq!(write_graph6(&big), text);
    }

    #[test]
    fn malformed() {
        assert_eq!(parse_graph6(""), Err(Graph6Error::Empty));
        assert_eq!(parse_graph6("A`"), Err(Graph6Error::TrailingBits));
        assert_eq!(parse_graph6("D?"), Err(Graph6Error::WrongSize { expected: 2, found: 1 }));
        assert_eq!(parse_graph6("A "), Err(Graph6Error::IllegalChar(' ')));
        assert_eq!(parse_graph6("~?"), Err(Graph6Error::BadLength));
        assert!(matches!(parse_graph6("?"), Err(Graph6Error::Graph(_))));
    }

    #[test]
    fn reader_skips_header_and_blanks() {
        let text = ">>graph6<<A_\n\nD??\n";
        let gs = read_graph6(text.as_bytes()).unwrap();
        assert_eq!(gs, vec![g(2, &[(1, 2)]), g(5, &[])]);
        let err = read_graph6("A_\nA!\n".as_bytes()).unwrap_err();
        assert!(err.to_string().starts_with("line 2"));
    }
}
