//! Rooted labeled trees and their canonical strings.
//!
//! A tree is written as its root label followed by the parenthesized,
//! comma-separated list of children, each prefixed by the bond multiplicity
//! to its parent: `C(1H,1H,2O)`. The canonical form sorts the child strings,
//! so two trees are isomorphic as rooted trees preserving element labels and
//! bond multiplicities exactly when their canonical strings are equal.

use std::fmt;

use thiserror::Error;

use crate::graph::ChemicalGraph;
use crate::layers::TwoLayerDecomposition;

pub const MAX_TREE_DEPTH: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("tree {text:?} at byte {at}: {message}")]
pub struct TreeParseError {
    pub text: String,
    pub at: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootedTree {
    pub label: String,
    pub children: Vec<(u8, RootedTree)>,
}

impl RootedTree {
    pub fn leaf(label: &str) -> Self {
        RootedTree { label: label.to_string(), children: Vec::new() }
    }

    pub fn canonical(&self) -> String {
        let mut parts: Vec<String> = self.children.iter().map(|(m, c)| format!("{m}{}", c.canonical())).collect();
        if parts.is_empty() {
            return self.label.clone();
        }
        parts.sort();
        format!("{}({})", self.label, parts.join(","))
    }

    pub fn size(&self) -> usize {
        1 + self.children.iter().map(|(_, c)| c.size()).sum::<usize>()
    }

    pub fn height(&self) -> usize {
        self.children.iter().map(|(_, c)| 1 + c.height()).max().unwrap_or(0)
    }

    pub fn parse(text: &str) -> Result<RootedTree, TreeParseError> {
        let mut p = Parser { text, bytes: text.as_bytes(), pos: 0 };
        let t = p.tree(0)?;
        if p.pos != p.bytes.len() {
            return Err(p.error("trailing input"));
        }
        Ok(t)
    }
}

impl fmt::Display for RootedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical())
    }
}

struct Parser<'a> {
    text: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> TreeParseError {
        TreeParseError { text: self.text.to_string(), at: self.pos, message: message.to_string() }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn label(&mut self) -> Result<String, TreeParseError> {
        let start = self.pos;
        if !self.peek().is_some_and(|c| c.is_ascii_uppercase()) {
            return Err(self.error("expected an element symbol"));
        }
        self.pos += 1;
        while self.peek().is_some_and(|c| c.is_ascii_lowercase()) {
            self.pos += 1;
        }
        if self.peek() == Some(b'_') {
            self.pos += 1;
            let digits = self.pos;
            while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                self.pos += 1;
            }
            if self.pos == digits {
                return Err(self.error("expected a valence after '_'"));
            }
        }
        Ok(self.text[start..self.pos].to_string())
    }

    fn tree(&mut self, depth: usize) -> Result<RootedTree, TreeParseError> {
        if depth > MAX_TREE_DEPTH {
            return Err(self.error("tree too deep"));
        }
        let label = self.label()?;
        let mut children = Vec::new();
        if self.peek() == Some(b'(') {
            self.pos += 1;
            loop {
                let m = match self.peek() {
                    Some(c @ b'1'..=b'3') => c - b'0',
                    _ => return Err(self.error("expected a bond multiplicity 1, 2 or 3")),
                };
                self.pos += 1;
                children.push((m, self.tree(depth + 1)?));
                match self.peek() {
                    Some(b',') => self.pos += 1,
                    Some(b')') => {
                        self.pos += 1;
                        break;
                    }
                    _ => return Err(self.error("expected ',' or ')'")),
                }
            }
        }
        Ok(RootedTree { label, children })
    }
}

/// The fringe tree hanging from interior atom `root`.
pub fn fringe_tree(g: &ChemicalGraph, dec: &TwoLayerDecomposition, root: usize) -> RootedTree {
    fn build(g: &ChemicalGraph, dec: &TwoLayerDecomposition, v: usize, parent: usize, root: usize) -> RootedTree {
        let children = g
            .neighbors(v)
            .iter()
            .filter(|&&(u, _)| u != parent && !dec.is_interior(u) && dec.root_of[u] == root)
            .map(|&(u, k)| (g.bonds()[k].multiplicity, build(g, dec, u, v, root)))
            .collect();
        RootedTree { label: g.element(v).label(), children }
    }
    build(g, dec, root, usize::MAX, root)
}

pub fn canonical_fringe(g: &ChemicalGraph, dec: &TwoLayerDecomposition, root: usize) -> String {
    fringe_tree(g, dec, root).canonical()
}
