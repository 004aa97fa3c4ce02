//! Shared fixtures: the reference specification and a small hand-built
//! extension with single-rule mutations.
#![allow(dead_code)]

pub mod skeleton;

use std::collections::BTreeMap;

use hps_chem::graph::{ChemicalGraph, GraphBuilder};
use hps_chem::spec::{ExtensionWitness, Rule};

pub const REFERENCE_SPEC: &str = include_str!("../data/reference.spec");

/// Four seed vertices, six seed edges of every class.
pub const MUTATION_SPEC: &str = "\
[SEED]
vertex u1 u2 u3 u4
edge a1 u1 u2 >=2
edge a2 u2 u3 >=1
edge a3 u3 u4 =1
edge a4 u4 u1 >=2
edge a5 u1 u3 0/1
edge a6 u2 u4 =1
[INTERIOR]
n_int 10 14
length a1 2 4
length a2 1 3
length a4 3 4
bl a1 0 1
ch a1 0 2
bl a2 0 1
ch a2 0 2
bl a4 0 1
ch a4 0 2
bl u1 0 0
bl u3 0 0
bl u4 0 0
bl u2 0 1
ch u2 0 1
bd2 a1 0 1
[CHEMICAL]
rho 2
n 12 22
seed_elements u3 N
fringe u4 C(1H)
na O 0 1
ec_int C:3 N:3 1 0 2
";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mutation {
    ShortenPath,
    ForeignFringe,
    ExtraOxygen,
    ExtraBranch,
    DiscardFixedEdge,
    ExtraDoubleBond,
    WrongSeedElement,
    LongLeafPath,
}

impl Mutation {
    pub const ALL: [Mutation; 8] = [
        Mutation::ShortenPath,
        Mutation::ForeignFringe,
        Mutation::ExtraOxygen,
        Mutation::ExtraBranch,
        Mutation::DiscardFixedEdge,
        Mutation::ExtraDoubleBond,
        Mutation::WrongSeedElement,
        Mutation::LongLeafPath,
    ];

    pub fn rule(self) -> Rule {
        match self {
            Mutation::ShortenPath => Rule::PathLength,
            Mutation::ForeignFringe => Rule::FringeTree,
            Mutation::ExtraOxygen => Rule::ElementCount,
            Mutation::ExtraBranch => Rule::EdgeConfigCount,
            Mutation::DiscardFixedEdge => Rule::DiscardedEdge,
            Mutation::ExtraDoubleBond => Rule::BondMultiplicity,
            Mutation::WrongSeedElement => Rule::SeedElement,
            Mutation::LongLeafPath => Rule::EdgeLeafLength,
        }
    }
}

fn ids(list: &[&str]) -> Vec<String> {
    list.iter().map(|s| s.to_string()).collect()
}

/// The extension and its witness, optionally with one mutation applied.
pub fn mutation_instance(m: Option<Mutation>) -> (ChemicalGraph, ExtensionWitness) {
    let mut b = GraphBuilder::new().name("hand-extension");
    let mut at = BTreeMap::new();
    let u3_element = if m == Some(Mutation::WrongSeedElement) { "C" } else { "N" };
    for (id, e) in [
        ("u1", "C"),
        ("u2", "C"),
        ("u3", u3_element),
        ("u4", "C"),
        ("v5", "C"),
        ("v6", "C"),
        ("v7", "C"),
        ("v8", "C"),
        ("v10", "C"),
        ("v11", "C"),
        ("v12", "C"),
        ("x1", "C"),
        ("x2", "C"),
        ("y1", "C"),
        ("y2", "C"),
    ] {
        at.insert(id, b.atom(id, e));
    }
    let shorten = m == Some(Mutation::ShortenPath);
    if !shorten {
        at.insert("v9", b.atom("v9", "C"));
        at.insert("o9", b.atom("o9", "O"));
    }
    let long_leaf = m == Some(Mutation::LongLeafPath);
    if long_leaf {
        at.insert("v13", b.atom("v13", "C"));
    }
    let a = |k: &str| at[k];
    let mut bond = |x: &str, y: &str, mult: u8| {
        b.bond(a(x), a(y), mult);
    };
    let v5v6 = 2;
    let u1v5 = if m == Some(Mutation::ExtraDoubleBond) { 2 } else { 1 };
    bond("u1", "v5", u1v5);
    bond("v5", "v6", v5v6);
    bond("v6", "u2", 1);
    bond("u2", "v7", 1);
    bond("v7", "u3", 1);
    bond("u3", "u4", 1);
    let discard = m == Some(Mutation::DiscardFixedEdge);
    bond("u4", "v8", if discard { 2 } else { 1 });
    if shorten {
        bond("v8", "u1", 1);
    } else {
        bond("v8", "v9", 1);
        bond("v9", "u1", 1);
        bond("v9", "o9", 2);
    }
    bond("u1", "u3", 1);
    if !discard {
        bond("u2", "u4", 1);
    }
    bond("u2", "v10", 1);
    bond("v10", "x1", 1);
    bond("x1", "x2", 1);
    bond("v8", "v11", 1);
    bond("v11", "v12", 1);
    if long_leaf {
        bond("v12", "v13", 1);
        bond("v13", "y1", 1);
    } else {
        bond("v12", "y1", 1);
    }
    bond("y1", "y2", 1);
    drop(bond);

    match m {
        Some(Mutation::ForeignFringe) => {
            let cl = b.atom("cl4", "Cl");
            b.bond(at["u4"], cl, 1);
        }
        Some(Mutation::ExtraOxygen) => {
            let o = b.atom("o11", "O");
            b.bond(at["v11"], o, 1);
        }
        Some(Mutation::ExtraBranch) => {
            let c = b.atom("m7", "C");
            b.bond(at["v7"], c, 1);
        }
        _ => {}
    }
    let g = b.fill_hydrogens().build().expect("fixture is a valid graph");

    let mut w = ExtensionWitness::default();
    for v in ["u1", "u2", "u3", "u4"] {
        w.vertex_map.insert(v.into(), v.into());
    }
    w.paths.insert("a1".into(), Some(ids(&["u1", "v5", "v6", "u2"])));
    w.paths.insert("a2".into(), Some(ids(&["u2", "v7", "u3"])));
    w.paths.insert("a3".into(), Some(ids(&["u3", "u4"])));
    let a4: &[&str] = if shorten { &["u4", "v8", "u1"] } else { &["u4", "v8", "v9", "u1"] };
    w.paths.insert("a4".into(), Some(ids(a4)));
    w.paths.insert("a5".into(), Some(ids(&["u1", "u3"])));
    w.paths.insert("a6".into(), if discard { None } else { Some(ids(&["u2", "u4"])) });
    w.leaf_paths.insert("u2".into(), ids(&["u2", "v10"]));
    let leaf: &[&str] = if long_leaf { &["v8", "v11", "v12", "v13"] } else { &["v8", "v11", "v12"] };
    w.leaf_paths.insert("v8".into(), ids(leaf));
    (g, w)
}
