use hps_chem::graph::{ChemicalGraph, GraphBuilder};
use hps_testkit::graph::Skeleton;

/// Builds the hydrogen-filled graph of `s` with atom `i` stored at position
/// `order[i]`.
pub fn graph_from(s: &Skeleton, order: &[usize]) -> ChemicalGraph {
    let n = s.elements.len();
    let mut at = vec![0; n];
    let mut slots: Vec<usize> = (0..n).collect();
    slots.sort_by_key(|&i| order[i]);
    let mut b = GraphBuilder::new();
    for &i in &slots {
        at[i] = b.atom(&format!("a{i}"), s.elements[i]);
    }
    for &(x, y, m) in &s.bonds {
        b.bond(at[x], at[y], m);
    }
    b.fill_hydrogens().build().expect("skeleton respects valences")
}

pub fn identity(n: usize) -> Vec<usize> {
    (0..n).collect()
}
