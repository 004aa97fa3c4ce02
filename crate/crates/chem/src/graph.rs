//! Hydrogen-explicit chemical graphs and their line-based text format.
//!
//! ```text
//! # ethanol
//! G ethanol
//! V c1 C
//! V o1 O
//! V h1 H
//! E c1 o1 1
//! E o1 h1 1
//! ---
//! ```
//!
//! `V <id> <element>[_<valence>]` declares an atom, `E <id1> <id2> <multiplicity>`
//! a bond between declared atoms, `G <name>` an optional graph name. `#` starts a
//! comment and `---` separates graphs.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use thiserror::Error;

use crate::element::{Element, ElementError, ValenceTable};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("{0}")]
    Element(#[from] ElementError),
    #[error("invalid atom id {0:?}")]
    BadId(String),
    #[error("invalid graph name {0:?}")]
    BadName(String),
    #[error("duplicate atom id {0:?}")]
    DuplicateAtom(String),
    #[error("unknown atom id {0:?}")]
    UnknownAtom(String),
    #[error("bond from atom {0:?} to itself")]
    SelfLoop(String),
    #[error("second bond between {0:?} and {1:?}")]
    DuplicateBond(String, String),
    #[error("bond multiplicity {0} outside [1, 3]")]
    Multiplicity(String),
    #[error("valence exceeded at atom {id:?} ({element}): bonds sum to {used}, valence is {allowed}")]
    Valence { id: String, element: String, used: u32, allowed: u8 },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    Structure { line: usize, source: StructureError },
    #[error("no graph in input")]
    Empty,
    #[error("expected one graph, found {0}")]
    Multiple(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Atom {
    pub id: String,
    pub element: Element,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bond {
    pub a: usize,
    pub b: usize,
    pub multiplicity: u8,
}

impl Bond {
    pub fn other(&self, v: usize) -> usize {
        if self.a == v {
            self.b
        } else {
            self.a
        }
    }
}

/// Atoms, bonds and per-atom adjacency. At most one bond joins any pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChemicalGraph {
    name: Option<String>,
    atoms: Vec<Atom>,
    bonds: Vec<Bond>,
    /// `(neighbor, bond index)` per atom, in bond order.
    adjacency: Vec<Vec<(usize, usize)>>,
    index: HashMap<String, usize>,
}

fn valid_token(s: &str) -> bool {
    !s.is_empty() && !s.starts_with('#') && !s.chars().any(char::is_whitespace)
}

impl ChemicalGraph {
    pub fn new(name: Option<String>, atoms: Vec<Atom>, bonds: Vec<Bond>) -> Result<Self, StructureError> {
        Self::with_table(name, atoms, bonds, &ValenceTable::default())
    }

    pub fn with_table(
        name: Option<String>,
        atoms: Vec<Atom>,
        bonds: Vec<Bond>,
        table: &ValenceTable,
    ) -> Result<Self, StructureError> {
        if let Some(n) = &name {
            if n.trim().is_empty() || n.trim() != n || n.contains(['\n', '\r', '#']) {
                return Err(StructureError::BadName(n.clone()));
            }
        }
        let mut index = HashMap::with_capacity(atoms.len());
        for (i, a) in atoms.iter().enumerate() {
            if !valid_token(&a.id) {
                return Err(StructureError::BadId(a.id.clone()));
            }
            if index.insert(a.id.clone(), i).is_some() {
                return Err(StructureError::DuplicateAtom(a.id.clone()));
            }
        }
        let mut adjacency = vec![Vec::new(); atoms.len()];
        for (k, b) in bonds.iter().enumerate() {
            if b.a >= atoms.len() || b.b >= atoms.len() {
                return Err(StructureError::UnknownAtom(format!("#{}", b.a.max(b.b))));
            }
            if b.a == b.b {
                return Err(StructureError::SelfLoop(atoms[b.a].id.clone()));
            }
            if !(1..=3).contains(&b.multiplicity) {
                return Err(StructureError::Multiplicity(b.multiplicity.to_string()));
            }
            if adjacency[b.a].iter().any(|&(n, _)| n == b.b) {
                return Err(StructureError::DuplicateBond(atoms[b.a].id.clone(), atoms[b.b].id.clone()));
            }
            adjacency[b.a].push((b.b, k));
            adjacency[b.b].push((b.a, k));
        }
        let g = ChemicalGraph { name, atoms, bonds, adjacency, index };
        for i in 0..g.atoms.len() {
            let used = g.bond_order_sum(i);
            let element = &g.atoms[i].element;
            let allowed = element
                .valence(table)
                .ok_or_else(|| ElementError::Unknown(element.label()))?;
            if used > allowed as u32 {
                return Err(StructureError::Valence {
                    id: g.atoms[i].id.clone(),
                    element: element.label(),
                    used,
                    allowed,
                });
            }
        }
        Ok(g)
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn bonds(&self) -> &[Bond] {
        &self.bonds
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn atom(&self, i: usize) -> &Atom {
        &self.atoms[i]
    }

    pub fn element(&self, i: usize) -> &Element {
        &self.atoms[i].element
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    /// `(neighbor, bond index)` pairs of atom `i`.
    pub fn neighbors(&self, i: usize) -> &[(usize, usize)] {
        &self.adjacency[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adjacency[i].len()
    }

    pub fn is_heavy(&self, i: usize) -> bool {
        !self.atoms[i].element.is_hydrogen()
    }

    /// Number of non-hydrogen neighbors.
    pub fn heavy_degree(&self, i: usize) -> usize {
        self.adjacency[i].iter().filter(|&&(n, _)| self.is_heavy(n)).count()
    }

    pub fn heavy_count(&self) -> usize {
        (0..self.len()).filter(|&i| self.is_heavy(i)).count()
    }

    pub fn bond_order_sum(&self, i: usize) -> u32 {
        self.adjacency[i].iter().map(|&(_, k)| self.bonds[k].multiplicity as u32).sum()
    }

    pub fn bond_between(&self, a: usize, b: usize) -> Option<usize> {
        self.adjacency[a].iter().find(|&&(n, _)| n == b).map(|&(_, k)| k)
    }

    /// Connected components as sorted atom lists, ordered by smallest atom.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for s in 0..self.len() {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut head = 0;
            while head < comp.len() {
                let v = comp[head];
                head += 1;
                for &(n, _) in &self.adjacency[v] {
                    if !seen[n] {
                        seen[n] = true;
                        comp.push(n);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }
}

/// Incremental construction with optional hydrogen filling.
#[derive(Debug, Clone, Default)]
pub struct GraphBuilder {
    name: Option<String>,
    atoms: Vec<Atom>,
    bonds: Vec<Bond>,
    table: ValenceTable,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn name(mut self, name: &str) -> Self {
        self.name = Some(name.to_string());
        self
    }

    /// Adds an atom and returns its index. Panics on an unknown element.
    pub fn atom(&mut self, id: &str, element: &str) -> usize {
        let element = Element::parse(element, &self.table).unwrap_or_else(|e| panic!("{e}"));
        self.atoms.push(Atom { id: id.to_string(), element });
        self.atoms.len() - 1
    }

    pub fn bond(&mut self, a: usize, b: usize, multiplicity: u8) -> usize {
        self.bonds.push(Bond { a, b, multiplicity });
        self.bonds.len() - 1
    }

    /// Saturates every heavy atom with hydrogens named `<id>h<k>`.
    pub fn fill_hydrogens(&mut self) -> &mut Self {
        let n = self.atoms.len();
        let mut used = vec![0u32; n];
        for b in &self.bonds {
            used[b.a] += b.multiplicity as u32;
            used[b.b] += b.multiplicity as u32;
        }
        for i in 0..n {
            if self.atoms[i].element.is_hydrogen() {
                continue;
            }
            let val = self.atoms[i].element.valence(&self.table).unwrap_or(0) as u32;
            for k in 0..val.saturating_sub(used[i]) {
                let id = format!("{}h{}", self.atoms[i].id, k + 1);
                let h = self.atom(&id, "H");
                self.bond(i, h, 1);
            }
        }
        self
    }

    pub fn build(&self) -> Result<ChemicalGraph, StructureError> {
        ChemicalGraph::with_table(self.name.clone(), self.atoms.clone(), self.bonds.clone(), &self.table)
    }
}

/// Parses exactly one graph.
pub fn parse_graph(text: &str) -> Result<ChemicalGraph, GraphError> {
    let mut graphs = parse_graphs(text)?;
    match graphs.len() {
        0 => Err(GraphError::Empty),
        1 => Ok(graphs.pop().unwrap()),
        n => Err(GraphError::Multiple(n)),
    }
}

/// Parses every `---`-separated graph; blocks without records are skipped.
pub fn parse_graphs(text: &str) -> Result<Vec<ChemicalGraph>, GraphError> {
    parse_graphs_with(text, &ValenceTable::default())
}

struct Block {
    name: Option<String>,
    atoms: Vec<Atom>,
    atom_lines: Vec<usize>,
    bonds: Vec<Bond>,
    index: HashMap<String, usize>,
    pairs: HashSet<(usize, usize)>,
    records: usize,
}

impl Block {
    fn new() -> Self {
        Block { name: None, atoms: Vec::new(), atom_lines: Vec::new(), bonds: Vec::new(), index: HashMap::new(), pairs: HashSet::new(), records: 0 }
    }

    fn finish(self, table: &ValenceTable, end_line: usize) -> Result<Option<ChemicalGraph>, GraphError> {
        if self.records == 0 {
            return Ok(None);
        }
        ChemicalGraph::with_table(self.name, self.atoms, self.bonds, table).map(Some).map_err(|source| {
            let line = match &source {
                StructureError::Valence { id, .. } => {
                    self.index.get(id).map(|&i| self.atom_lines[i]).unwrap_or(end_line)
                }
                _ => end_line,
            };
            GraphError::Structure { line, source }
        })
    }
}

pub fn parse_graphs_with(text: &str, table: &ValenceTable) -> Result<Vec<ChemicalGraph>, GraphError> {
    let mut out = Vec::new();
    let mut block = Block::new();
    let mut last_line = 0;
    for (no, raw) in text.lines().enumerate() {
        let line = no + 1;
        last_line = line;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if content == "---" {
            let done = std::mem::replace(&mut block, Block::new());
            out.extend(done.finish(table, line)?);
            continue;
        }
        let syntax = |message: String| GraphError::Syntax { line, message };
        let structure = |source: StructureError| GraphError::Structure { line, source };
        let mut tokens = content.split_whitespace();
        let tag = tokens.next().unwrap_or("");
        let rest: Vec<&str> = tokens.collect();
        match tag {
            "G" => {
                if block.name.is_some() {
                    return Err(syntax("second G record in one graph".into()));
                }
                if rest.is_empty() {
                    return Err(syntax("G record needs a name".into()));
                }
                block.name = Some(rest.join(" "));
            }
            "V" => {
                let [id, element] = rest[..] else {
                    return Err(syntax(format!("V record needs 2 fields, found {}", rest.len())));
                };
                let element = Element::parse(element, table).map_err(|e| structure(e.into()))?;
                if block.index.insert(id.to_string(), block.atoms.len()).is_some() {
                    return Err(structure(StructureError::DuplicateAtom(id.to_string())));
                }
                block.atoms.push(Atom { id: id.to_string(), element });
                block.atom_lines.push(line);
            }
            "E" => {
                let [a, b, m] = rest[..] else {
                    return Err(syntax(format!("E record needs 3 fields, found {}", rest.len())));
                };
                let find = |id: &str| {
                    block
                        .index
                        .get(id)
                        .copied()
                        .ok_or_else(|| structure(StructureError::UnknownAtom(id.to_string())))
                };
                let (ia, ib) = (find(a)?, find(b)?);
                let multiplicity = match m.parse::<u8>() {
                    Ok(v @ 1..=3) => v,
                    _ => return Err(structure(StructureError::Multiplicity(m.to_string()))),
                };
                if ia == ib {
                    return Err(structure(StructureError::SelfLoop(a.to_string())));
                }
                if !block.pairs.insert((ia.min(ib), ia.max(ib))) {
                    return Err(structure(StructureError::DuplicateBond(a.to_string(), b.to_string())));
                }
                block.bonds.push(Bond { a: ia, b: ib, multiplicity });
            }
            other => return Err(syntax(format!("unknown record type {other:?}"))),
        }
        block.records += 1;
    }
    out.extend(block.finish(table, last_line)?);
    Ok(out)
}

pub fn serialize_graph(g: &ChemicalGraph) -> String {
    let mut s = String::new();
    if let Some(n) = g.name() {
        let _ = writeln!(s, "G {n}");
    }
    for a in g.atoms() {
        let _ = writeln!(s, "V {} {}", a.id, a.element);
    }
    for b in g.bonds() {
        let _ = writeln!(s, "E {} {} {}", g.atoms[b.a].id, g.atoms[b.b].id, b.multiplicity);
    }
    s
}

pub fn serialize_graphs(graphs: &[ChemicalGraph]) -> String {
    graphs.iter().map(serialize_graph).collect::<Vec<_>>().join("---\n")
}

#[cfg(test)]
mod tests {
    use super::*;

    const METHANE: &str = "G methane\nV c C\nV h1 H\nV h2 H\nV h3 H\nV h4 H\nE c h1 1\nE c h2 1\nE c h3 1\nE c h4 1\n";

    #[test]
    fn methane_has_five_atoms_and_four_bonds() {
        let g = parse_graph(METHANE).unwrap();
        assert_eq!(g.len(), 5);
        assert_eq!(g.bonds().len(), 4);
        assert_eq!(g.name(), Some("methane"));
        assert_eq!(g.heavy_count(), 1);
        assert_eq!(g.degree(0), 4);
        assert_eq!(g.heavy_degree(0), 0);
    }

    #[test]
    fn fifth_bond_on_carbon_names_the_atom() {
        let text = format!("{METHANE}V h5 H\nE c h5 1\n");
        let err = parse_graph(&text).unwrap_err();
        match err {
            GraphError::Structure { line, source: StructureError::Valence { id, used, allowed, .. } } => {
                assert_eq!((id.as_str(), used, allowed, line), ("c", 5, 4, 2));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn round_trip_is_byte_stable() {
        let g = parse_graph(METHANE).unwrap();
        let s = serialize_graph(&g);
        assert_eq!(s, METHANE);
        assert_eq!(parse_graph(&s).unwrap(), g);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let cases = [
            ("V a C\nV a C\n", 2),
            ("V a C\nE a b 1\n", 2),
            ("V a C\nV b C\nE a b 4\n", 3),
            ("V a C\nE a a 1\n", 2),
            ("V a C\nV b C\nE a b 1\nE b a 1\n", 4),
            ("V a Xx\n", 1),
            ("# c\nQ a\n", 2),
            ("V a\n", 1),
        ];
        for (text, want) in cases {
            let err = parse_graphs(text).unwrap_err();
            let line = match &err {
                GraphError::Syntax { line, .. } | GraphError::Structure { line, .. } => *line,
                _ => 0,
            };
            assert_eq!(line, want, "{text:?}: {err}");
        }
    }

    #[test]
    fn separators_and_comments() {
        let text = "# two graphs\nV a C # carbon\n---\n\n---\nG second one\nV b O\n---\n";
        let gs = parse_graphs(text).unwrap();
        assert_eq!(gs.len(), 2);
        assert_eq!(gs[1].name(), Some("second one"));
        assert_eq!(parse_graph(text).unwrap_err(), GraphError::Multiple(2));
        assert_eq!(parse_graph("# nothing\n").unwrap_err(), GraphError::Empty);
        let again = parse_graphs(&serialize_graphs(&gs)).unwrap();
        assert_eq!(again, gs);
    }

    #[test]
    fn builder_fills_hydrogens() {
        let mut b = GraphBuilder::new();
        let c = b.atom("c", "C");
        let o = b.atom("o", "O");
        b.bond(c, o, 2);
        let g = b.fill_hydrogens().build().unwrap();
        assert_eq!(g.len(), 4);
        assert_eq!(g.bond_order_sum(c), 4);
        assert_eq!(g.bond_order_sum(o), 2);
    }
}
