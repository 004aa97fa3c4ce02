//! Extension witnesses and the rule checker.
//!
//! A witness maps seed vertices to atoms, gives the atom sequence realizing
//! each seed edge (`null` when a `0/1` edge is discarded) and the leaf paths
//! keyed by their root atom. Fringe trees are not stored; they follow from
//! the decomposition of the graph.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fringe::canonical_fringe;
use crate::graph::ChemicalGraph;
use crate::layers::{
    adjacency_configuration, chemical_symbol, decompose_two_layer, edge_configuration, leaf_bonds,
    TwoLayerDecomposition,
};

use super::{BoundTable, Bounds, EdgeClass, TargetSpec};

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtensionWitness {
    pub vertex_map: BTreeMap<String, String>,
    pub paths: BTreeMap<String, Option<Vec<String>>>,
    #[serde(default)]
    pub leaf_paths: BTreeMap<String, Vec<String>>,
}

impl ExtensionWitness {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("witness serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WitnessError {
    #[error("seed vertex {0} has no image")]
    MissingSeedVertex(String),
    #[error("{0} is not a seed vertex or edge")]
    UnknownSeedItem(String),
    #[error("atom {0} is not in the graph")]
    UnknownAtom(String),
    #[error("atom {0} is not an interior atom")]
    NotInterior(String),
    #[error("atom {0} is used more than once")]
    Reused(String),
    #[error("seed edge {0} has no path entry")]
    MissingPath(String),
    #[error("path of edge {edge} does not join the images of its end vertices")]
    PathEnds { edge: String },
    #[error("atoms {0} and {1} are not bonded")]
    NotBonded(String, String),
    #[error("leaf path at {0} is malformed: {1}")]
    LeafPath(String, String),
    #[error("interior atom {0} is on no path")]
    UncoveredAtom(String),
    #[error("interior bond {0}-{1} is on no path")]
    UncoveredBond(String, String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    DiscardedEdge,
    PathLength,
    EdgeLeafCount,
    EdgeLeafLength,
    VertexLeafCount,
    VertexLeafLength,
    BondMultiplicity,
    InteriorSize,
    Size,
    SeedElement,
    FringeTree,
    ElementSet,
    InteriorElementSet,
    SymbolSet,
    EdgeConfigSet,
    ElementCount,
    InteriorElementCount,
    SymbolCount,
    AdjacencyCount,
    EdgeConfigCount,
    FringeCount,
    LeafAdjacencyCount,
}

impl Rule {
    pub fn name(self) -> &'static str {
        match self {
            Rule::DiscardedEdge => "discarded-edge",
            Rule::PathLength => "path-length",
            Rule::EdgeLeafCount => "edge-leaf-count",
            Rule::EdgeLeafLength => "edge-leaf-length",
            Rule::VertexLeafCount => "vertex-leaf-count",
            Rule::VertexLeafLength => "vertex-leaf-length",
            Rule::BondMultiplicity => "bond-multiplicity",
            Rule::InteriorSize => "interior-size",
            Rule::Size => "size",
            Rule::SeedElement => "seed-element",
            Rule::FringeTree => "fringe-tree",
            Rule::ElementSet => "element-set",
            Rule::InteriorElementSet => "interior-element-set",
            Rule::SymbolSet => "symbol-set",
            Rule::EdgeConfigSet => "edge-config-set",
            Rule::ElementCount => "element-count",
            Rule::InteriorElementCount => "interior-element-count",
            Rule::SymbolCount => "symbol-count",
            Rule::AdjacencyCount => "adjacency-count",
            Rule::EdgeConfigCount => "edge-config-count",
            Rule::FringeCount => "fringe-count",
            Rule::LeafAdjacencyCount => "leaf-adjacency-count",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub rule: Rule,
    pub subject: String,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{}]: {}", self.rule, self.subject, self.detail)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtensionReport {
    pub interior_atoms: usize,
    pub heavy_atoms: usize,
    pub violations: Vec<Violation>,
}

impl ExtensionReport {
    pub fn is_confirmed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn rules(&self) -> BTreeSet<Rule> {
        self.violations.iter().map(|v| v.rule).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

impl fmt::Display for ExtensionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_confirmed() {
            return writeln!(f, "extension confirmed");
        }
        for v in &self.violations {
            writeln!(f, "{v}")?;
        }
        Ok(())
    }
}

fn bound_detail(observed: usize, b: &Bounds) -> Option<String> {
    if observed < b.lb {
        Some(format!("observed {observed}, below lower bound {}", b.lb))
    } else if b.ub.is_some_and(|u| observed > u) {
        Some(format!("observed {observed}, above upper bound {}", b.ub.unwrap()))
    } else {
        None
    }
}

struct Checker {
    violations: Vec<Violation>,
}

impl Checker {
    fn bound(&mut self, rule: Rule, subject: impl Into<String>, observed: usize, b: Bounds) {
        if let Some(detail) = bound_detail(observed, &b) {
            self.violations.push(Violation { rule, subject: subject.into(), detail });
        }
    }

    fn member(&mut self, rule: Rule, subject: impl Into<String>, value: &str, allowed: Option<&Vec<String>>) {
        if let Some(allowed) = allowed {
            if !allowed.iter().any(|a| a == value) {
                self.violations.push(Violation { rule, subject: subject.into(), detail: format!("{value} is not allowed") });
            }
        }
    }

    fn table(&mut self, rule: Rule, table: &BoundTable, observed: &BTreeMap<String, usize>) {
        if table.is_empty() {
            return;
        }
        let keys: BTreeSet<&String> = table.entries.keys().chain(observed.keys()).collect();
        for k in keys {
            if let Some(b) = table.get(k) {
                self.bound(rule, k.clone(), observed.get(k).copied().unwrap_or(0), b);
            }
        }
    }
}

/// Indices of a witness resolved against a graph.
pub(crate) struct Resolved {
    /// Atom path per seed edge in `u -> v` orientation; `None` if discarded.
    pub paths: Vec<Option<Vec<usize>>>,
    pub images: Vec<usize>,
    /// Leaf paths as atom sequences from their root.
    pub leaves: Vec<Vec<usize>>,
}

fn resolve(
    g: &ChemicalGraph,
    dec: &TwoLayerDecomposition,
    spec: &TargetSpec,
    w: &ExtensionWitness,
) -> Result<Resolved, WitnessError> {
    let atom = |id: &str| -> Result<usize, WitnessError> {
        let i = g.index_of(id).ok_or_else(|| WitnessError::UnknownAtom(id.to_string()))?;
        if !dec.is_interior(i) {
            return Err(WitnessError::NotInterior(id.to_string()));
        }
        Ok(i)
    };
    let name = |i: usize| g.atom(i).id.clone();
    for k in w.vertex_map.keys() {
        if spec.seed.vertex_index(k).is_none() {
            return Err(WitnessError::UnknownSeedItem(k.clone()));
        }
    }
    for k in w.paths.keys() {
        if spec.seed.edge(k).is_none() {
            return Err(WitnessError::UnknownSeedItem(k.clone()));
        }
    }
    // 0 = free, 1 = on the subdivision, 2 = on a leaf path.
    let mut used = vec![0u8; g.len()];
    let mut bond_used = vec![false; g.bonds().len()];
    let mut images = Vec::with_capacity(spec.seed.vertices.len());
    for v in &spec.seed.vertices {
        let id = w.vertex_map.get(v).ok_or_else(|| WitnessError::MissingSeedVertex(v.clone()))?;
        let i = atom(id)?;
        if used[i] != 0 {
            return Err(WitnessError::Reused(id.clone()));
        }
        used[i] = 1;
        images.push(i);
    }
    let take_bond = |a: usize, b: usize, bond_used: &mut Vec<bool>| -> Result<(), WitnessError> {
        let k = g.bond_between(a, b).ok_or_else(|| WitnessError::NotBonded(name(a), name(b)))?;
        if bond_used[k] {
            return Err(WitnessError::Reused(format!("{}-{}", name(a), name(b))));
        }
        bond_used[k] = true;
        Ok(())
    };
    let mut paths = Vec::with_capacity(spec.seed.edges.len());
    for e in &spec.seed.edges {
        let entry = w.paths.get(&e.id).ok_or_else(|| WitnessError::MissingPath(e.id.clone()))?;
        let Some(ids) = entry else {
            paths.push(None);
            continue;
        };
        let mut seq = ids.iter().map(|s| atom(s)).collect::<Result<Vec<_>, _>>()?;
        let (iu, iv) = (images[spec.seed.vertex_index(&e.u).unwrap()], images[spec.seed.vertex_index(&e.v).unwrap()]);
        if seq.len() < 2 {
            return Err(WitnessError::PathEnds { edge: e.id.clone() });
        }
        if seq[0] == iv && seq[seq.len() - 1] == iu {
            seq.reverse();
        }
        if seq[0] != iu || seq[seq.len() - 1] != iv {
            return Err(WitnessError::PathEnds { edge: e.id.clone() });
        }
        for &x in &seq[1..seq.len() - 1] {
            if used[x] != 0 {
                return Err(WitnessError::Reused(name(x)));
            }
            used[x] = 1;
        }
        for pair in seq.windows(2) {
            take_bond(pair[0], pair[1], &mut bond_used)?;
        }
        paths.push(Some(seq));
    }
    let mut leaves = Vec::new();
    for (root_id, ids) in &w.leaf_paths {
        let seq = ids.iter().map(|s| atom(s)).collect::<Result<Vec<_>, _>>()?;
        let bad = |m: &str| WitnessError::LeafPath(root_id.clone(), m.to_string());
        if seq.first().map(|&r| name(r)).as_deref() != Some(root_id.as_str()) {
            return Err(bad("sequence must start at its root"));
        }
        if used[seq[0]] != 1 {
            return Err(bad("root is not on the subdivision"));
        }
        if seq.len() < 2 {
            continue;
        }
        for (k, &x) in seq.iter().enumerate().skip(1) {
            if used[x] != 0 {
                return Err(WitnessError::Reused(name(x)));
            }
            used[x] = 2;
            let want = if k + 1 == seq.len() { 1 } else { 2 };
            if dec.interior_degree(g, x) != want {
                return Err(bad("inner atoms need interior degree 2 and the end atom degree 1"));
            }
        }
        for pair in seq.windows(2) {
            take_bond(pair[0], pair[1], &mut bond_used)?;
        }
        leaves.push(seq);
    }
    for &v in &dec.interior {
        if used[v] == 0 {
            return Err(WitnessError::UncoveredAtom(name(v)));
        }
    }
    for &k in &dec.interior_bonds {
        if !bond_used[k] {
            let b = g.bonds()[k];
            return Err(WitnessError::UncoveredBond(name(b.a), name(b.b)));
        }
    }
    Ok(Resolved { paths, images, leaves })
}

fn count<I: IntoIterator<Item = String>>(items: I) -> BTreeMap<String, usize> {
    let mut m = BTreeMap::new();
    for k in items {
        *m.entry(k).or_insert(0) += 1;
    }
    m
}

/// Checks every rule of `spec` against `g` under the given witness.
pub fn check_extension(
    g: &ChemicalGraph,
    spec: &TargetSpec,
    witness: &ExtensionWitness,
) -> Result<ExtensionReport, WitnessError> {
    let dec = decompose_two_layer(g, spec.chemical.rho);
    let r = resolve(g, &dec, spec, witness)?;
    Ok(check_resolved(g, &dec, spec, &r))
}

pub(crate) fn check_resolved(
    g: &ChemicalGraph,
    dec: &TwoLayerDecomposition,
    spec: &TargetSpec,
    r: &Resolved,
) -> ExtensionReport {
    let mut ck = Checker { violations: Vec::new() };
    let int = &spec.interior;
    let chem = &spec.chemical;

    // Where each subdivision atom sits: seed vertex k or inner atom of edge k.
    let mut seed_at = vec![None; g.len()];
    for (k, &i) in r.images.iter().enumerate() {
        seed_at[i] = Some(k);
    }
    let mut edge_at = vec![None; g.len()];
    for (k, p) in r.paths.iter().enumerate() {
        if let Some(p) = p {
            for &x in &p[1..p.len() - 1] {
                edge_at[x] = Some(k);
            }
        }
    }
    let mut edge_leaves: Vec<Vec<usize>> = vec![Vec::new(); spec.seed.edges.len()];
    let mut vertex_leaf: Vec<Option<usize>> = vec![None; spec.seed.vertices.len()];
    for q in &r.leaves {
        let len = q.len() - 1;
        if let Some(k) = seed_at[q[0]] {
            vertex_leaf[k] = Some(len);
        } else if let Some(k) = edge_at[q[0]] {
            edge_leaves[k].push(len);
        }
    }

    for (k, e) in spec.seed.edges.iter().enumerate() {
        match &r.paths[k] {
            None if e.class != EdgeClass::ZeroOrOne => ck.violations.push(Violation {
                rule: Rule::DiscardedEdge,
                subject: e.id.clone(),
                detail: format!("edge of class {} cannot be discarded", e.class.token()),
            }),
            None => {}
            Some(p) => ck.bound(Rule::PathLength, e.id.clone(), p.len() - 1, int.length_bounds(e)),
        }
        ck.bound(Rule::EdgeLeafCount, e.id.clone(), edge_leaves[k].len(), int.edge_leaf_count_bounds(e));
        let longest = edge_leaves[k].iter().copied().max().unwrap_or(0);
        ck.bound(Rule::EdgeLeafLength, e.id.clone(), longest, int.edge_leaf_length_bounds(e));
    }
    for (k, v) in spec.seed.vertices.iter().enumerate() {
        ck.bound(Rule::VertexLeafCount, v.clone(), vertex_leaf[k].is_some() as usize, int.vertex_leaf_count_bounds(v));
        ck.bound(Rule::VertexLeafLength, v.clone(), vertex_leaf[k].unwrap_or(0), int.vertex_leaf_length_bounds(v));
    }
    for (k, e) in spec.seed.edges.iter().enumerate() {
        for m in [2u8, 3] {
            let observed = r.paths[k].as_ref().map_or(0, |p| {
                p.windows(2)
                    .filter(|w| g.bonds()[g.bond_between(w[0], w[1]).unwrap()].multiplicity == m)
                    .count()
            });
            ck.bound(Rule::BondMultiplicity, format!("{} m={m}", e.id), observed, int.bond_bounds(m, &e.id));
        }
    }
    if let Some(b) = int.n_int {
        ck.bound(Rule::InteriorSize, "n_int", dec.interior.len(), b);
    }
    if let Some(b) = chem.n {
        ck.bound(Rule::Size, "n", g.heavy_count(), b);
    }

    for (k, v) in spec.seed.vertices.iter().enumerate() {
        let label = g.element(r.images[k]).label();
        ck.member(Rule::SeedElement, v.clone(), &label, chem.seed_elements.get(v));
    }
    let fringe: Vec<(usize, String)> = dec.interior.iter().map(|&v| (v, canonical_fringe(g, dec, v))).collect();
    for (v, tree) in &fringe {
        let allowed = match seed_at[*v] {
            Some(k) => chem.seed_fringe.get(&spec.seed.vertices[k]),
            None => chem.other_fringe.as_ref(),
        };
        ck.member(Rule::FringeTree, g.atom(*v).id.clone(), tree, allowed);
    }

    let all_elements = count((0..g.len()).map(|v| g.element(v).label()));
    let int_elements = count(dec.interior.iter().map(|&v| g.element(v).label()));
    let symbols = count(dec.interior.iter().map(|&v| chemical_symbol(g, v)));
    let int_ac = count(dec.interior_bonds.iter().map(|&k| adjacency_configuration(g, k)));
    let int_ec = count(dec.interior_bonds.iter().map(|&k| edge_configuration(g, k)));
    let fc = count(fringe.iter().map(|(_, t)| t.clone()));
    let lf = count(leaf_bonds(g).into_iter().map(|k| adjacency_configuration(g, k)));

    for e in all_elements.keys() {
        ck.member(Rule::ElementSet, e.clone(), e, chem.elements.as_ref());
    }
    for e in int_elements.keys() {
        ck.member(Rule::InteriorElementSet, e.clone(), e, chem.interior_elements.as_ref());
    }
    for s in symbols.keys() {
        ck.member(Rule::SymbolSet, s.clone(), s, chem.symbols.as_ref());
    }
    for c in int_ec.keys() {
        ck.member(Rule::EdgeConfigSet, c.clone(), c, chem.edge_configs.as_ref());
    }
    ck.table(Rule::ElementCount, &chem.na, &all_elements);
    ck.table(Rule::InteriorElementCount, &chem.na_int, &int_elements);
    ck.table(Rule::SymbolCount, &chem.ns_int, &symbols);
    ck.table(Rule::AdjacencyCount, &chem.ac_int, &int_ac);
    ck.table(Rule::EdgeConfigCount, &chem.ec_int, &int_ec);
    ck.table(Rule::FringeCount, &chem.fc, &fc);
    ck.table(Rule::LeafAdjacencyCount, &chem.ac_leaf, &lf);

    ExtensionReport { interior_atoms: dec.interior.len(), heavy_atoms: g.heavy_count(), violations: ck.violations }
}

/// Resolves and checks in one step for callers holding a decomposition.
pub(crate) fn check_with(
    g: &ChemicalGraph,
    dec: &TwoLayerDecomposition,
    spec: &TargetSpec,
    w: &ExtensionWitness,
) -> Result<ExtensionReport, WitnessError> {
    let r = resolve(g, dec, spec, w)?;
    Ok(check_resolved(g, dec, spec, &r))
}
