//! Internal consistency checks on a parsed specification.

use std::fmt;

use serde::Serialize;

use crate::element::{Element, ValenceTable};

use super::{Bounds, EdgeClass, TargetSpec};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpecViolation {
    pub rule: &'static str,
    pub message: String,
}

impl fmt::Display for SpecViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.rule, self.message)
    }
}

fn union_find_components(n: usize, edges: impl Iterator<Item = (usize, usize)>) -> Vec<usize> {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for (a, b) in edges {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra.max(rb)] = ra.min(rb);
        }
    }
    (0..n).map(|x| find(&mut parent, x)).collect()
}

/// Every violated invariant; an empty list means the specification is usable.
pub fn validate_specification(spec: &TargetSpec) -> Vec<SpecViolation> {
    let mut out = Vec::new();
    let mut push = |rule: &'static str, message: String| out.push(SpecViolation { rule, message });
    let seed = &spec.seed;
    let n = seed.vertices.len();
    let idx = |v: &str| seed.vertex_index(v).expect("parsed seed edges reference seed vertices");

    let all = union_find_components(n, seed.edges.iter().map(|e| (idx(&e.u), idx(&e.v))));
    if n > 0 && all.iter().any(|&r| r != all[0]) {
        push("seed-connectivity", "the seed graph is disconnected".into());
    } else {
        let kept = union_find_components(
            n,
            seed.edges.iter().filter(|e| e.class != EdgeClass::ZeroOrOne).map(|e| (idx(&e.u), idx(&e.v))),
        );
        for e in seed.edges.iter().filter(|e| e.class == EdgeClass::ZeroOrOne) {
            if kept[idx(&e.u)] != kept[idx(&e.v)] {
                push(
                    "separating-edge",
                    format!("edge {} of class 0/1 is needed for connectivity once 0/1 edges are discarded", e.id),
                );
            }
        }
    }

    let i = &spec.interior;
    let c = &spec.chemical;
    let mut check = |what: String, b: &Bounds| {
        if b.is_inverted() {
            push("inverted-bound", format!("{what}: lower bound exceeds upper bound ({b})"));
        }
    };
    for (name, map) in [
        ("length", &i.length),
        ("bl", &i.edge_leaf_count),
        ("ch", &i.edge_leaf_length),
        ("bl", &i.vertex_leaf_count),
        ("ch", &i.vertex_leaf_length),
        ("bd2", &i.bond2),
        ("bd3", &i.bond3),
    ] {
        for (k, b) in map {
            check(format!("{name} {k}"), b);
        }
    }
    for (name, b) in [("n_int", &i.n_int), ("n", &c.n)] {
        if let Some(b) = b {
            check(name.to_string(), b);
        }
    }
    for (name, t) in [
        ("na", &c.na),
        ("na_int", &c.na_int),
        ("ns_int", &c.ns_int),
        ("ac_int", &c.ac_int),
        ("ec_int", &c.ec_int),
        ("fc", &c.fc),
        ("ac_leaf", &c.ac_leaf),
    ] {
        for (k, b) in &t.entries {
            check(format!("{name} {k}"), b);
        }
        if let Some(b) = &t.default {
            check(format!("{name} *"), b);
        }
    }

    for (v, b) in &i.vertex_leaf_count {
        if b.ub.is_none_or(|u| u > 1) {
            push("vertex-leaf-count", format!("bl {v}: at most one leaf path attaches to a seed vertex, upper bound is {b}"));
        }
    }
    for e in &seed.edges {
        if let Some(b) = i.length.get(&e.id) {
            if b.lb < e.class.min_length() {
                push(
                    "class-length",
                    format!("length {}: lower bound {} below the class {} minimum {}", e.id, b.lb, e.class.token(), e.class.min_length()),
                );
            }
        }
    }

    let n_int_lb = i.n_int.map_or(0, |b| b.lb);
    if let Some(nb) = c.n {
        if n_int_lb > nb.lb {
            push("size-order", format!("n_int lower bound {n_int_lb} exceeds n lower bound {}", nb.lb));
        }
    }

    let table = ValenceTable::default();
    for (v, elems) in &c.seed_elements {
        for e in elems {
            let val = Element::parse(e, &table).ok().and_then(|el| el.valence(&table)).unwrap_or(0);
            if val < 2 {
                push("seed-element-valence", format!("seed_elements {v}: {e} has valence {val}, at least 2 required"));
            }
            if let Some(int) = &c.interior_elements {
                if !int.contains(e) {
                    push("seed-element-set", format!("seed_elements {v}: {e} is not an allowed interior element"));
                }
            }
        }
    }
    out
}
