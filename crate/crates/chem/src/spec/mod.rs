//! Target specifications: a seed graph, interior bounds and chemical bounds.
//!
//! The text format has three sections, one record per line, `#` comments:
//!
//! ```text
//! [SEED]
//! vertex u1 u2 u3
//! edge a1 u1 u2 >=2        # classes: >=2, >=1, 0/1, =1
//! edge a2 u2 u3 =1
//! edge a3 u1 u3 >=1
//! [INTERIOR]
//! n_int 4 9                # bounds are "<lb> <ub>", ub may be '*'
//! length a1 2 3            # required for every >=2 and >=1 edge
//! length a3 1 2
//! bl a1 0 1                # leaf paths on inner vertices of an edge path,
//! ch a1 0 2                # and their maximum length
//! bl u1 0 1                # leaf path at a seed vertex (at most one)
//! ch u1 0 1
//! bd2 a1 0 1               # bonds of multiplicity 2 (bd3: 3) along a path
//! [CHEMICAL]
//! rho 2
//! n 6 20                   # non-hydrogen atoms
//! elements H C N O         # allowed elements
//! elements_int C N         # allowed interior elements
//! symbols C:2 C:3 N:2      # allowed interior chemical symbols
//! edge_config C:2 C:3 1    # allowed interior edge configuration (repeatable)
//! seed_elements u1 C N     # allowed elements at a seed vertex
//! fringe u1 C(1H) C(1H,1H) # allowed fringe trees at a seed vertex; '*' for the rest
//! na C 4 12                # element counts; na_int for interior atoms
//! ns_int C:3 0 4
//! ac_int C C 2 0 3         # interior bonds per adjacency configuration
//! ec_int C:2 C:3 1 0 4
//! fc C(1H) 0 6             # interior atoms per fringe tree
//! ac_leaf * 0 8            # '*' sets the default for unlisted keys
//! ```
//!
//! Bounds not stated are unconstrained, except path lengths: `0/1` edges
//! have length 0 or 1, `=1` edges exactly 1, and a seed vertex carries at
//! most one leaf path.

mod embed;
mod validate;
mod witness;

pub use embed::{find_embedding, EmbedError, MAX_INTERIOR_VERTICES, MAX_SEED_VERTICES};
pub use validate::{validate_specification, SpecViolation};
pub use witness::{check_extension, ExtensionReport, ExtensionWitness, Rule, Violation, WitnessError};

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt::{self, Write as _};
use std::str::FromStr;

use thiserror::Error;

use crate::element::{Element, ValenceTable};
use crate::fringe::RootedTree;
use crate::layers::config_key;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpecError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: duplicate entry for {what}")]
    Duplicate { line: usize, what: String },
    #[error("line {line}: unknown {what}")]
    Unknown { line: usize, what: String },
    #[error("line {line}: lower bound {lb} exceeds upper bound {ub} for {what}")]
    Inverted { line: usize, what: String, lb: usize, ub: usize },
    #[error("missing bound: {0}")]
    Missing(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EdgeClass {
    /// Replaced by a path of length at least 2.
    AtLeastTwo,
    /// Replaced by a path of length at least 1.
    AtLeastOne,
    /// Used directly or discarded.
    ZeroOrOne,
    /// Always used directly.
    ExactlyOne,
}

impl EdgeClass {
    pub fn token(self) -> &'static str {
        match self {
            EdgeClass::AtLeastTwo => ">=2",
            EdgeClass::AtLeastOne => ">=1",
            EdgeClass::ZeroOrOne => "0/1",
            EdgeClass::ExactlyOne => "=1",
        }
    }

    /// Whether the edge is replaced by a pure path with its own bounds.
    pub fn is_subdivided(self) -> bool {
        matches!(self, EdgeClass::AtLeastTwo | EdgeClass::AtLeastOne)
    }

    pub fn min_length(self) -> usize {
        match self {
            EdgeClass::AtLeastTwo => 2,
            EdgeClass::AtLeastOne | EdgeClass::ExactlyOne => 1,
            EdgeClass::ZeroOrOne => 0,
        }
    }
}

impl FromStr for EdgeClass {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        [EdgeClass::AtLeastTwo, EdgeClass::AtLeastOne, EdgeClass::ZeroOrOne, EdgeClass::ExactlyOne]
            .into_iter()
            .find(|c| c.token() == s)
            .ok_or_else(|| format!("unknown edge class {s:?} (expected >=2, >=1, 0/1 or =1)"))
    }
}

/// Inclusive bounds; `ub == None` means unbounded above.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bounds {
    pub lb: usize,
    pub ub: Option<usize>,
}

impl Bounds {
    pub const ANY: Bounds = Bounds { lb: 0, ub: None };

    pub fn new(lb: usize, ub: usize) -> Self {
        Bounds { lb, ub: Some(ub) }
    }

    pub fn exactly(v: usize) -> Self {
        Bounds::new(v, v)
    }

    pub fn contains(&self, v: usize) -> bool {
        v >= self.lb && self.ub.is_none_or(|u| v <= u)
    }

    pub fn is_inverted(&self) -> bool {
        self.ub.is_some_and(|u| u < self.lb)
    }
}

impl fmt::Display for Bounds {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.ub {
            Some(u) => write!(f, "{} {}", self.lb, u),
            None => write!(f, "{} *", self.lb),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeedEdge {
    pub id: String,
    pub u: String,
    pub v: String,
    pub class: EdgeClass,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SeedGraph {
    pub vertices: Vec<String>,
    pub edges: Vec<SeedEdge>,
}

impl SeedGraph {
    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == id)
    }

    pub fn edge(&self, id: &str) -> Option<&SeedEdge> {
        self.edges.iter().find(|e| e.id == id)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct InteriorSpec {
    pub n_int: Option<Bounds>,
    pub length: BTreeMap<String, Bounds>,
    pub edge_leaf_count: BTreeMap<String, Bounds>,
    pub edge_leaf_length: BTreeMap<String, Bounds>,
    pub vertex_leaf_count: BTreeMap<String, Bounds>,
    pub vertex_leaf_length: BTreeMap<String, Bounds>,
    pub bond2: BTreeMap<String, Bounds>,
    pub bond3: BTreeMap<String, Bounds>,
}

impl InteriorSpec {
    pub fn length_bounds(&self, e: &SeedEdge) -> Bounds {
        match e.class {
            EdgeClass::ZeroOrOne => Bounds::new(0, 1),
            EdgeClass::ExactlyOne => Bounds::exactly(1),
            _ => self.length.get(&e.id).copied().unwrap_or(Bounds { lb: e.class.min_length(), ub: None }),
        }
    }

    /// Leaf paths are only allowed on inner vertices of subdivided edges.
    pub fn edge_leaf_count_bounds(&self, e: &SeedEdge) -> Bounds {
        if e.class.is_subdivided() {
            self.edge_leaf_count.get(&e.id).copied().unwrap_or(Bounds::ANY)
        } else {
            Bounds::exactly(0)
        }
    }

    pub fn edge_leaf_length_bounds(&self, e: &SeedEdge) -> Bounds {
        if e.class.is_subdivided() {
            self.edge_leaf_length.get(&e.id).copied().unwrap_or(Bounds::ANY)
        } else {
            Bounds::exactly(0)
        }
    }

    pub fn vertex_leaf_count_bounds(&self, v: &str) -> Bounds {
        self.vertex_leaf_count.get(v).copied().unwrap_or(Bounds::new(0, 1))
    }

    pub fn vertex_leaf_length_bounds(&self, v: &str) -> Bounds {
        self.vertex_leaf_length.get(v).copied().unwrap_or(Bounds::ANY)
    }

    pub fn bond_bounds(&self, m: u8, e: &str) -> Bounds {
        let map = if m == 2 { &self.bond2 } else { &self.bond3 };
        map.get(e).copied().unwrap_or(Bounds::ANY)
    }
}

/// Bounds keyed by label, with an optional default for unlisted labels.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BoundTable {
    pub entries: BTreeMap<String, Bounds>,
    pub default: Option<Bounds>,
}

impl BoundTable {
    pub fn get(&self, key: &str) -> Option<Bounds> {
        self.entries.get(key).copied().or(self.default)
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty() && self.default.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChemicalSpec {
    pub rho: usize,
    pub n: Option<Bounds>,
    /// Allowed elements over all atoms.
    pub elements: Option<Vec<String>>,
    pub interior_elements: Option<Vec<String>>,
    pub symbols: Option<Vec<String>>,
    /// Allowed interior edge configurations, canonical keys.
    pub edge_configs: Option<Vec<String>>,
    pub seed_elements: BTreeMap<String, Vec<String>>,
    /// Allowed canonical fringe trees per seed vertex.
    pub seed_fringe: BTreeMap<String, Vec<String>>,
    /// Allowed canonical fringe trees at the other interior atoms.
    pub other_fringe: Option<Vec<String>>,
    pub na: BoundTable,
    pub na_int: BoundTable,
    pub ns_int: BoundTable,
    pub ac_int: BoundTable,
    pub ec_int: BoundTable,
    pub fc: BoundTable,
    pub ac_leaf: BoundTable,
}

impl Default for ChemicalSpec {
    fn default() -> Self {
        ChemicalSpec {
            rho: crate::features::DEFAULT_RHO,
            n: None,
            elements: None,
            interior_elements: None,
            symbols: None,
            edge_configs: None,
            seed_elements: BTreeMap::new(),
            seed_fringe: BTreeMap::new(),
            other_fringe: None,
            na: BoundTable::default(),
            na_int: BoundTable::default(),
            ns_int: BoundTable::default(),
            ac_int: BoundTable::default(),
            ec_int: BoundTable::default(),
            fc: BoundTable::default(),
            ac_leaf: BoundTable::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TargetSpec {
    pub seed: SeedGraph,
    pub interior: InteriorSpec,
    pub chemical: ChemicalSpec,
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Section {
    None,
    Seed,
    Interior,
    Chemical,
}

struct Ctx<'a> {
    line: usize,
    table: &'a ValenceTable,
}

impl Ctx<'_> {
    fn syntax(&self, message: impl Into<String>) -> SpecError {
        SpecError::Syntax { line: self.line, message: message.into() }
    }

    fn count(&self, t: &str) -> Result<usize, SpecError> {
        t.parse().map_err(|_| self.syntax(format!("expected a non-negative integer, found {t:?}")))
    }

    fn bounds(&self, lb: &str, ub: &str, what: &str) -> Result<Bounds, SpecError> {
        let lb = self.count(lb)?;
        let ub = if ub == "*" { None } else { Some(self.count(ub)?) };
        let b = Bounds { lb, ub };
        if let Some(u) = ub {
            if u < lb {
                return Err(SpecError::Inverted { line: self.line, what: what.to_string(), lb, ub: u });
            }
        }
        Ok(b)
    }

    fn element(&self, t: &str) -> Result<String, SpecError> {
        Element::parse(t, self.table).map(|e| e.label()).map_err(|e| self.syntax(e.to_string()))
    }

    fn symbol(&self, t: &str) -> Result<String, SpecError> {
        let (e, d) = t.rsplit_once(':').ok_or_else(|| self.syntax(format!("chemical symbol {t:?} must be <element>:<degree>")))?;
        let d: usize = self.count(d)?;
        if !(1..=4).contains(&d) {
            return Err(self.syntax(format!("chemical symbol {t:?}: degree must be in [1, 4]")));
        }
        Ok(format!("{}:{d}", self.element(e)?))
    }

    fn multiplicity(&self, t: &str) -> Result<u8, SpecError> {
        match t.parse::<u8>() {
            Ok(m @ 1..=3) => Ok(m),
            _ => Err(self.syntax(format!("bond multiplicity {t:?} outside [1, 3]"))),
        }
    }

    fn tree(&self, t: &str) -> Result<String, SpecError> {
        let tree = RootedTree::parse(t).map_err(|e| self.syntax(e.to_string()))?;
        Ok(tree.canonical())
    }

    fn insert<V>(&self, map: &mut BTreeMap<String, V>, key: String, value: V, what: &str) -> Result<(), SpecError> {
        if map.contains_key(&key) {
            return Err(SpecError::Duplicate { line: self.line, what: format!("{what} {key}") });
        }
        map.insert(key, value);
        Ok(())
    }

    fn set_once<V>(&self, slot: &mut Option<V>, value: V, what: &str) -> Result<(), SpecError> {
        if slot.is_some() {
            return Err(SpecError::Duplicate { line: self.line, what: what.to_string() });
        }
        *slot = Some(value);
        Ok(())
    }

    fn table_entry(&self, table: &mut BoundTable, key: Option<String>, b: Bounds, what: &str) -> Result<(), SpecError> {
        match key {
            None => self.set_once(&mut table.default, b, &format!("{what} default")),
            Some(k) => self.insert(&mut table.entries, k, b, what),
        }
    }

    fn list(&self, items: &[&str], f: impl Fn(&str) -> Result<String, SpecError>) -> Result<Vec<String>, SpecError> {
        if items.is_empty() {
            return Err(self.syntax("expected at least one item"));
        }
        let mut out: Vec<String> = Vec::new();
        for t in items {
            let v = f(t)?;
            if out.contains(&v) {
                return Err(SpecError::Duplicate { line: self.line, what: format!("list item {v}") });
            }
            out.push(v);
        }
        Ok(out)
    }
}

fn expect_len(ctx: &Ctx, key: &str, args: &[&str], n: usize) -> Result<(), SpecError> {
    if args.len() != n {
        return Err(ctx.syntax(format!("{key} takes {n} fields, found {}", args.len())));
    }
    Ok(())
}

pub fn parse_specification(text: &str) -> Result<TargetSpec, SpecError> {
    parse_specification_with(text, &ValenceTable::default())
}

pub fn parse_specification_with(text: &str, table: &ValenceTable) -> Result<TargetSpec, SpecError> {
    let mut spec = TargetSpec::default();
    let mut section = Section::None;
    let mut vertex_set: HashSet<String> = HashSet::new();
    let mut edge_index: HashMap<String, usize> = HashMap::new();
    let mut edge_configs: Vec<String> = Vec::new();
    let mut seen_edge_configs = false;
    let mut rho_set = false;
    for (no, raw) in text.lines().enumerate() {
        let ctx = Ctx { line: no + 1, table };
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if content.starts_with('[') {
            let next = match content {
                "[SEED]" => Section::Seed,
                "[INTERIOR]" => Section::Interior,
                "[CHEMICAL]" => Section::Chemical,
                other => return Err(ctx.syntax(format!("unknown section {other}"))),
            };
            if next <= section {
                return Err(ctx.syntax(format!("section {content} out of order or repeated")));
            }
            section = next;
            continue;
        }
        let tokens: Vec<&str> = content.split_whitespace().collect();
        let (key, args) = (tokens[0], &tokens[1..]);
        let edge_of = |id: &str| -> Result<&SeedEdge, SpecError> {
            edge_index
                .get(id)
                .map(|&i| &spec.seed.edges[i])
                .ok_or_else(|| SpecError::Unknown { line: ctx.line, what: format!("seed edge {id:?}") })
        };
        match (section, key) {
            (Section::None, _) => return Err(ctx.syntax("record before the first section")),
            (Section::Seed, "vertex") => {
                if args.is_empty() {
                    return Err(ctx.syntax("vertex needs at least one id"));
                }
                for v in args {
                    if !vertex_set.insert(v.to_string()) || edge_index.contains_key(*v) {
                        return Err(SpecError::Duplicate { line: ctx.line, what: format!("seed id {v}") });
                    }
                    spec.seed.vertices.push(v.to_string());
                }
            }
            (Section::Seed, "edge") => {
                expect_len(&ctx, key, args, 4)?;
                let [id, u, v, class] = [args[0], args[1], args[2], args[3]];
                if edge_index.contains_key(id) || vertex_set.contains(id) {
                    return Err(SpecError::Duplicate { line: ctx.line, what: format!("seed id {id}") });
                }
                for end in [u, v] {
                    if !vertex_set.contains(end) {
                        return Err(SpecError::Unknown { line: ctx.line, what: format!("seed vertex {end:?}") });
                    }
                }
                if u == v {
                    return Err(ctx.syntax(format!("seed edge {id} is a loop")));
                }
                let class: EdgeClass = class.parse().map_err(|m: String| ctx.syntax(m))?;
                edge_index.insert(id.to_string(), spec.seed.edges.len());
                spec.seed.edges.push(SeedEdge { id: id.into(), u: u.into(), v: v.into(), class });
            }
            (Section::Interior, "n_int") => {
                expect_len(&ctx, key, args, 2)?;
                let b = ctx.bounds(args[0], args[1], "n_int")?;
                ctx.set_once(&mut spec.interior.n_int, b, "n_int")?;
            }
            (Section::Interior, "length" | "bd2" | "bd3") => {
                expect_len(&ctx, key, args, 3)?;
                let e = edge_of(args[0])?;
                let what = format!("{key} of edge {}", e.id);
                let b = ctx.bounds(args[1], args[2], &what)?;
                let map = match key {
                    "length" => {
                        if !e.class.is_subdivided() {
                            return Err(ctx.syntax(format!(
                                "length of edge {} is fixed by its class {}",
                                e.id,
                                e.class.token()
                            )));
                        }
                        &mut spec.interior.length
                    }
                    "bd2" => &mut spec.interior.bond2,
                    _ => &mut spec.interior.bond3,
                };
                let id = e.id.clone();
                ctx.insert(map, id, b, key)?;
            }
            (Section::Interior, "bl" | "ch") => {
                expect_len(&ctx, key, args, 3)?;
                let id = args[0];
                let what = format!("{key} of {id}");
                let b = ctx.bounds(args[1], args[2], &what)?;
                let map = if vertex_set.contains(id) {
                    if key == "bl" {
                        &mut spec.interior.vertex_leaf_count
                    } else {
                        &mut spec.interior.vertex_leaf_length
                    }
                } else {
                    let e = edge_of(id)?;
                    if !e.class.is_subdivided() {
                        return Err(ctx.syntax(format!(
                            "{key} of edge {id}: leaf paths only attach to edges of class >=2 or >=1"
                        )));
                    }
                    if key == "bl" {
                        &mut spec.interior.edge_leaf_count
                    } else {
                        &mut spec.interior.edge_leaf_length
                    }
                };
                ctx.insert(map, id.to_string(), b, key)?;
            }
            (Section::Chemical, "rho") => {
                expect_len(&ctx, key, args, 1)?;
                if rho_set {
                    return Err(SpecError::Duplicate { line: ctx.line, what: "rho".into() });
                }
                rho_set = true;
                spec.chemical.rho = ctx.count(args[0])?;
            }
            (Section::Chemical, "n") => {
                expect_len(&ctx, key, args, 2)?;
                let b = ctx.bounds(args[0], args[1], "n")?;
                ctx.set_once(&mut spec.chemical.n, b, "n")?;
            }
            (Section::Chemical, "elements") => {
                let l = ctx.list(args, |t| ctx.element(t))?;
                ctx.set_once(&mut spec.chemical.elements, l, "elements")?;
            }
            (Section::Chemical, "elements_int") => {
                let l = ctx.list(args, |t| ctx.element(t))?;
                ctx.set_once(&mut spec.chemical.interior_elements, l, "elements_int")?;
            }
            (Section::Chemical, "symbols") => {
                let l = ctx.list(args, |t| ctx.symbol(t))?;
                ctx.set_once(&mut spec.chemical.symbols, l, "symbols")?;
            }
            (Section::Chemical, "edge_config") => {
                expect_len(&ctx, key, args, 3)?;
                let k = config_key(&ctx.symbol(args[0])?, &ctx.symbol(args[1])?, ctx.multiplicity(args[2])?);
                if edge_configs.contains(&k) {
                    return Err(SpecError::Duplicate { line: ctx.line, what: format!("edge_config {k}") });
                }
                edge_configs.push(k);
                seen_edge_configs = true;
            }
            (Section::Chemical, "seed_elements" | "fringe") => {
                let Some((&target, items)) = args.split_first() else {
                    return Err(ctx.syntax(format!("{key} needs a seed vertex")));
                };
                let l = if key == "fringe" {
                    ctx.list(items, |t| ctx.tree(t))?
                } else {
                    ctx.list(items, |t| ctx.element(t))?
                };
                if key == "fringe" && target == "*" {
                    ctx.set_once(&mut spec.chemical.other_fringe, l, "fringe *")?;
                    continue;
                }
                if !vertex_set.contains(target) {
                    return Err(SpecError::Unknown { line: ctx.line, what: format!("seed vertex {target:?}") });
                }
                let map = if key == "fringe" { &mut spec.chemical.seed_fringe } else { &mut spec.chemical.seed_elements };
                ctx.insert(map, target.to_string(), l, key)?;
            }
            (Section::Chemical, "na" | "na_int" | "ns_int" | "fc") => {
                expect_len(&ctx, key, args, 3)?;
                let label = if args[0] == "*" {
                    None
                } else {
                    Some(match key {
                        "ns_int" => ctx.symbol(args[0])?,
                        "fc" => ctx.tree(args[0])?,
                        _ => ctx.element(args[0])?,
                    })
                };
                let what = format!("{key} {}", args[0]);
                let b = ctx.bounds(args[1], args[2], &what)?;
                let table = match key {
                    "na" => &mut spec.chemical.na,
                    "na_int" => &mut spec.chemical.na_int,
                    "ns_int" => &mut spec.chemical.ns_int,
                    _ => &mut spec.chemical.fc,
                };
                ctx.table_entry(table, label, b, key)?;
            }
            (Section::Chemical, "ac_int" | "ec_int" | "ac_leaf") => {
                let (label, rest) = if args.first() == Some(&"*") {
                    (None, &args[1..])
                } else {
                    if args.len() < 3 {
                        return Err(ctx.syntax(format!("{key} takes a configuration and two bounds")));
                    }
                    let m = ctx.multiplicity(args[2])?;
                    let k = if key == "ec_int" {
                        config_key(&ctx.symbol(args[0])?, &ctx.symbol(args[1])?, m)
                    } else {
                        config_key(&ctx.element(args[0])?, &ctx.element(args[1])?, m)
                    };
                    (Some(k), &args[3..])
                };
                expect_len(&ctx, key, rest, 2)?;
                let what = format!("{key} {}", label.as_deref().unwrap_or("*"));
                let b = ctx.bounds(rest[0], rest[1], &what)?;
                let table = match key {
                    "ac_int" => &mut spec.chemical.ac_int,
                    "ec_int" => &mut spec.chemical.ec_int,
                    _ => &mut spec.chemical.ac_leaf,
                };
                ctx.table_entry(table, label, b, key)?;
            }
            (_, other) => return Err(ctx.syntax(format!("unknown record {other:?} in this section"))),
        }
    }
    if seen_edge_configs {
        spec.chemical.edge_configs = Some(edge_configs);
    }
    for e in &spec.seed.edges {
        if e.class.is_subdivided() && !spec.interior.length.contains_key(&e.id) {
            return Err(SpecError::Missing(format!("length of edge {} (class {})", e.id, e.class.token())));
        }
    }
    Ok(spec)
}

fn write_table(s: &mut String, key: &str, t: &BoundTable) {
    for (k, b) in &t.entries {
        let _ = writeln!(s, "{key} {k} {b}");
    }
    if let Some(b) = t.default {
        let _ = writeln!(s, "{key} * {b}");
    }
}

/// Canonical text of a specification; parsing it yields an equal value.
pub fn serialize_specification(spec: &TargetSpec) -> String {
    let mut s = String::from("[SEED]\n");
    if !spec.seed.vertices.is_empty() {
        let _ = writeln!(s, "vertex {}", spec.seed.vertices.join(" "));
    }
    for e in &spec.seed.edges {
        let _ = writeln!(s, "edge {} {} {} {}", e.id, e.u, e.v, e.class.token());
    }
    s.push_str("[INTERIOR]\n");
    let i = &spec.interior;
    if let Some(b) = i.n_int {
        let _ = writeln!(s, "n_int {b}");
    }
    let edges: Vec<&str> = spec.seed.edges.iter().map(|e| e.id.as_str()).collect();
    let verts: Vec<&str> = spec.seed.vertices.iter().map(|v| v.as_str()).collect();
    for (key, map, ids) in [
        ("length", &i.length, &edges),
        ("bl", &i.edge_leaf_count, &edges),
        ("ch", &i.edge_leaf_length, &edges),
        ("bl", &i.vertex_leaf_count, &verts),
        ("ch", &i.vertex_leaf_length, &verts),
        ("bd2", &i.bond2, &edges),
        ("bd3", &i.bond3, &edges),
    ] {
        for id in ids.iter() {
            if let Some(b) = map.get(*id) {
                let _ = writeln!(s, "{key} {id} {b}");
            }
        }
    }
    s.push_str("[CHEMICAL]\n");
    let c = &spec.chemical;
    let _ = writeln!(s, "rho {}", c.rho);
    if let Some(b) = c.n {
        let _ = writeln!(s, "n {b}");
    }
    for (key, list) in [("elements", &c.elements), ("elements_int", &c.interior_elements), ("symbols", &c.symbols)] {
        if let Some(l) = list {
            let _ = writeln!(s, "{key} {}", l.join(" "));
        }
    }
    for k in c.edge_configs.iter().flatten() {
        let _ = writeln!(s, "edge_config {k}");
    }
    for v in &spec.seed.vertices {
        if let Some(l) = c.seed_elements.get(v) {
            let _ = writeln!(s, "seed_elements {v} {}", l.join(" "));
        }
    }
    for v in &spec.seed.vertices {
        if let Some(l) = c.seed_fringe.get(v) {
            let _ = writeln!(s, "fringe {v} {}", l.join(" "));
        }
    }
    if let Some(l) = &c.other_fringe {
        let _ = writeln!(s, "fringe * {}", l.join(" "));
    }
    for (key, t) in [
        ("na", &c.na),
        ("na_int", &c.na_int),
        ("ns_int", &c.ns_int),
        ("ac_int", &c.ac_int),
        ("ec_int", &c.ec_int),
        ("fc", &c.fc),
        ("ac_leaf", &c.ac_leaf),
    ] {
        write_table(&mut s, key, t);
    }
    s
}
