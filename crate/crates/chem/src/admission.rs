//! Data-set admission tests applied before descriptor extraction.

use std::fmt;

use serde::Serialize;

use crate::graph::ChemicalGraph;

pub const MIN_CARBONS: usize = 4;
pub const MAX_HEAVY_NEIGHBORS: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "test", rename_all = "kebab-case")]
pub enum Rejection {
    Connectivity { components: usize },
    CarbonCount { found: usize },
    HeavyNeighbors { atom: String, count: usize },
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rejection::Connectivity { components } => write!(f, "connectivity: {components} components"),
            Rejection::CarbonCount { found } => {
                write!(f, "carbon count: {found} carbon atoms, at least {MIN_CARBONS} required")
            }
            Rejection::HeavyNeighbors { atom, count } => write!(
                f,
                "heavy neighbors: atom {atom} has {count} non-hydrogen neighbors, at most {MAX_HEAVY_NEIGHBORS} allowed"
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Rejected {
    pub index: usize,
    pub name: Option<String>,
    pub reasons: Vec<Rejection>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct Admission {
    /// Indices of admitted graphs, in input order.
    pub kept: Vec<usize>,
    pub rejected: Vec<Rejected>,
}

impl Admission {
    pub fn log(&self) -> String {
        let mut s = String::new();
        for r in &self.rejected {
            let who = r.name.clone().unwrap_or_else(|| format!("graph {}", r.index + 1));
            for reason in &r.reasons {
                s.push_str(&format!("rejected {who}: {reason}\n"));
            }
        }
        s
    }
}

/// Every failed test for one graph; empty when the graph is admissible.
pub fn check_admissible(g: &ChemicalGraph) -> Vec<Rejection> {
    let mut out = Vec::new();
    let components = g.components().len();
    if components != 1 {
        out.push(Rejection::Connectivity { components });
    }
    let carbons = g.atoms().iter().filter(|a| a.element.is_carbon()).count();
    if carbons < MIN_CARBONS {
        out.push(Rejection::CarbonCount { found: carbons });
    }
    if let Some(i) = (0..g.len()).find(|&i| g.heavy_degree(i) > MAX_HEAVY_NEIGHBORS) {
        out.push(Rejection::HeavyNeighbors { atom: g.atom(i).id.clone(), count: g.heavy_degree(i) });
    }
    out
}

pub fn filter_admissible(graphs: &[ChemicalGraph]) -> Admission {
    let mut adm = Admission::default();
    for (index, g) in graphs.iter().enumerate() {
        let reasons = check_admissible(g);
        if reasons.is_empty() {
            adm.kept.push(index);
        } else {
            adm.rejected.push(Rejected { index, name: g.name().map(str::to_string), reasons });
        }
    }
    adm
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphBuilder;

    fn alkane(branches: &[(usize, usize)], n: usize) -> ChemicalGraph {
        let mut b = GraphBuilder::new();
        let c: Vec<usize> = (0..n).map(|i| b.atom(&format!("c{i}"), "C")).collect();
        for &(x, y) in branches {
            b.bond(c[x], c[y], 1);
        }
        b.fill_hydrogens().build().unwrap()
    }

    #[test]
    fn propane_fails_carbon_count() {
        let g = alkane(&[(0, 1), (1, 2)], 3);
        assert_eq!(check_admissible(&g), vec![Rejection::CarbonCount { found: 3 }]);
    }

    #[test]
    fn two_components_fail_connectivity() {
        let g = alkane(&[(0, 1), (2, 3)], 4);
        assert_eq!(check_admissible(&g), vec![Rejection::Connectivity { components: 2 }]);
    }

    #[test]
    fn neopentane_is_kept() {
        let g = alkane(&[(0, 1), (0, 2), (0, 3), (0, 4)], 5);
        assert!(check_admissible(&g).is_empty());
        let adm = filter_admissible(&[alkane(&[(0, 1), (1, 2)], 3), g]);
        assert_eq!(adm.kept, vec![1]);
        assert_eq!(adm.rejected.len(), 1);
        assert_eq!(adm.log(), "rejected graph 1: carbon count: 3 carbon atoms, at least 4 required\n");
    }

    #[test]
    fn five_heavy_neighbors_are_rejected() {
        let mut b = GraphBuilder::new();
        let p = b.atom("p", "P_5");
        for i in 0..5 {
            let c = b.atom(&format!("c{i}"), "C");
            b.bond(p, c, 1);
        }
        let g = b.fill_hydrogens().build().unwrap();
        assert_eq!(check_admissible(&g), vec![Rejection::HeavyNeighbors { atom: "p".into(), count: 5 }]);
    }
}
