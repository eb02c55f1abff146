//! Newick serialization of weighted witness trees.
//!
//! Leaves are named by their 1-based labels and every branch carries an
//! integer length. Trees are written rooted at the neighbor of leaf 1.

use ipcg_core::weights::{WeightError, WeightedTree};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NewickError {
    #[error("unexpected end of input")]
    Eof,
    #[error("unexpected {found:?} at byte {at}")]
    Unexpected { found: char, at: usize },
    #[error("branch length {0:?} is not a non-negative integer")]
    BadLength(String),
    #[error("node label {0:?} is not a positive integer")]
    BadLabel(String),
    #[error("branch without a length")]
    MissingLength,
    #[error("trailing input after ';'")]
    Trailing,
    #[error(transparent)]
    Tree(#[from] WeightError),
}

pub fn write_newick(t: &WeightedTree) -> String {
    let adj = t.adjacency();
    let leaf1 = t.leaf_vertex(1).expect("trees have a leaf 1");
    let root = adj[leaf1][0].0;
    let mut out = String::new();
    write_node(t, &adj, root, usize::MAX, &mut out);
    out.push(';');
    out
}

fn write_node(t: &WeightedTree, adj: &[Vec<(usize, usize)>], v: usize, parent: usize, out: &mut String) {
    let kids: Vec<(usize, usize)> = adj[v].iter().copied().filter(|&(u, _)| u != parent).collect();
    if !kids.is_empty() {
        out.push('(');
        for (i, &(u, e)) in kids.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            write_node(t, adj, u, v, out);
            out.push(':');
            out.push_str(&t.edges()[e].2.to_string());
        }
        out.push(')');
    }
    if let Some(l) = t.labels()[v] {
        out.push_str(&l.to_string());
    }
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    edges: Vec<(usize, usize, u64)>,
    labels: Vec<Option<usize>>,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn token(&mut self) -> String {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && !b"(),:;".contains(&self.s[self.pos]) {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.s[start..self.pos]).trim().to_string()
    }

    fn node(&mut self) -> Result<usize, NewickError> {
        let v = self.labels.len();
        self.labels.push(None);
        if self.peek() == Some(b'(') {
            self.pos += 1;
            loop {
                let child = self.node()?;
                if self.peek() != Some(b':') {
                    return Err(NewickError::MissingLength);
                }
                self.pos += 1;
                let text = self.token();
                let w = text.parse::<u64>().map_err(|_| NewickError::BadLength(text))?;
                self.edges.push((v, child, w));
                match self.peek() {
                    Some(b',') => self.pos += 1,
                    Some(b')') => {
                        self.pos += 1;
                        break;
                    }
                    Some(c) => return Err(NewickError::Unexpected { found: c as char, at: self.pos }),
                    None => return Err(NewickError::Eof),
                }
            }
        }
        let label = self.token();
        if !label.is_empty() {
            let l = label.parse::<usize>().ok().filter(|&l| l > 0).ok_or(NewickError::BadLabel(label))?;
            self.labels[v] = Some(l);
        }
        Ok(v)
    }
}

pub fn parse_newick(text: &str) -> Result<WeightedTree, NewickError> {
    let mut p = Parser { s: text.as_bytes(), pos: 0, edges: Vec::new(), labels: Vec::new() };
    p.node()?;
    if p.peek() == Some(b':') {
        // a root branch length carries no edge
        p.pos += 1;
        let text = p.token();
        text.parse::<u64>().map_err(|_| NewickError::BadLength(text))?;
    }
    match p.peek() {
        Some(b';') => p.pos += 1,
        Some(c) => return Err(NewickError::Unexpected { found: c as char, at: p.pos }),
        None => return Err(NewickError::Eof),
    }
    if p.peek().is_some() {
        return Err(NewickError::Trailing);
    }
    Ok(WeightedTree::new(p.labels.len(), p.edges, p.labels)?)
}
