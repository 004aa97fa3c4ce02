//! Descriptor extraction from decomposed chemical graphs.
//!
//! Columns come in a fixed family order:
//!
//! 1. `n_heavy`: number of non-hydrogen atoms.
//! 2. `n_int`, `m_int`: interior atom and interior bond counts.
//! 3. `na_int:<e>` for every element, then `na_ex:<e>`.
//! 4. `ns:<symbol>`: interior atoms per chemical symbol (element and heavy degree).
//! 5. `ec:<config>`: interior bonds per edge configuration.
//! 6. `fc:<tree>`: interior atoms per fringe-tree class.
//! 7. `lf:<config>`: leaf bonds of the skeleton per adjacency configuration.
//!
//! The alphabets of families 3 to 7 are discovered from a corpus and stored in
//! [`DescriptorConfig`] so unseen graphs map onto the same columns. Symbols,
//! configurations and trees absent from the alphabets are not counted; an
//! element absent from the alphabet is an error.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use hps_core::dataset::DatasetError;
use hps_core::DataSet;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fringe::canonical_fringe;
use crate::graph::ChemicalGraph;
use crate::layers::{adjacency_configuration, chemical_symbol, decompose_two_layer, edge_configuration, leaf_bonds};

pub const DEFAULT_RHO: usize = 2;

#[derive(Debug, Error)]
pub enum FeatureError {
    #[error("graph {graph}: element {element} is not in the descriptor alphabet")]
    UnknownElement { graph: String, element: String },
    #[error("{graphs} graphs but {targets} target values")]
    TargetCount { graphs: usize, targets: usize },
    #[error("unknown descriptor family {0:?}")]
    UnknownFamily(String),
    #[error("{0}")]
    Dataset(#[from] DatasetError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    HeavyAtoms,
    InteriorSize,
    Elements,
    Symbols,
    EdgeConfigs,
    FringeTrees,
    LeafConfigs,
}

impl Family {
    pub const ALL: [Family; 7] = [
        Family::HeavyAtoms,
        Family::InteriorSize,
        Family::Elements,
        Family::Symbols,
        Family::EdgeConfigs,
        Family::FringeTrees,
        Family::LeafConfigs,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::HeavyAtoms => "heavy-atoms",
            Family::InteriorSize => "interior-size",
            Family::Elements => "elements",
            Family::Symbols => "symbols",
            Family::EdgeConfigs => "edge-configs",
            Family::FringeTrees => "fringe-trees",
            Family::LeafConfigs => "leaf-configs",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = FeatureError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Family::ALL.into_iter().find(|f| f.name() == s).ok_or_else(|| FeatureError::UnknownFamily(s.to_string()))
    }
}

/// Enabled families, branch parameter and corpus-derived alphabets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DescriptorConfig {
    pub rho: usize,
    pub families: Vec<Family>,
    pub elements: Vec<String>,
    pub symbols: Vec<String>,
    pub edge_configs: Vec<String>,
    pub fringe_trees: Vec<String>,
    pub leaf_configs: Vec<String>,
}

/// Per-graph counts over every family, keyed by label.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GraphProfile {
    pub heavy: usize,
    pub n_int: usize,
    pub m_int: usize,
    pub interior_elements: BTreeMap<String, usize>,
    pub exterior_elements: BTreeMap<String, usize>,
    pub symbols: BTreeMap<String, usize>,
    pub edge_configs: BTreeMap<String, usize>,
    pub fringe_trees: BTreeMap<String, usize>,
    pub leaf_configs: BTreeMap<String, usize>,
}

pub fn profile(g: &ChemicalGraph, rho: usize) -> GraphProfile {
    let d = decompose_two_layer(g, rho);
    let mut p = GraphProfile { heavy: g.heavy_count(), n_int: d.interior.len(), m_int: d.interior_bonds.len(), ..Default::default() };
    let bump = |m: &mut BTreeMap<String, usize>, k: String| *m.entry(k).or_insert(0) += 1;
    for v in 0..g.len() {
        let map = if d.is_interior(v) { &mut p.interior_elements } else { &mut p.exterior_elements };
        bump(map, g.element(v).label());
    }
    for &v in &d.interior {
        bump(&mut p.symbols, chemical_symbol(g, v));
        bump(&mut p.fringe_trees, canonical_fringe(g, &d, v));
    }
    for &k in &d.interior_bonds {
        bump(&mut p.edge_configs, edge_configuration(g, k));
    }
    for k in leaf_bonds(g) {
        bump(&mut p.leaf_configs, adjacency_configuration(g, k));
    }
    p
}

impl DescriptorConfig {
    /// Discovers every alphabet from `graphs`; alphabets are sorted.
    pub fn discover(graphs: &[ChemicalGraph], rho: usize, families: &[Family]) -> Self {
        let mut elements = BTreeSet::new();
        let mut symbols = BTreeSet::new();
        let mut edge_configs = BTreeSet::new();
        let mut fringe_trees = BTreeSet::new();
        let mut leaf_configs = BTreeSet::new();
        for g in graphs {
            let p = profile(g, rho);
            elements.extend(p.interior_elements.into_keys());
            elements.extend(p.exterior_elements.into_keys());
            symbols.extend(p.symbols.into_keys());
            edge_configs.extend(p.edge_configs.into_keys());
            fringe_trees.extend(p.fringe_trees.into_keys());
            leaf_configs.extend(p.leaf_configs.into_keys());
        }
        let families = Family::ALL.into_iter().filter(|f| families.contains(f)).collect();
        DescriptorConfig {
            rho,
            families,
            elements: elements.into_iter().collect(),
            symbols: symbols.into_iter().collect(),
            edge_configs: edge_configs.into_iter().collect(),
            fringe_trees: fringe_trees.into_iter().collect(),
            leaf_configs: leaf_configs.into_iter().collect(),
        }
    }

    fn has(&self, f: Family) -> bool {
        self.families.contains(&f)
    }

    pub fn column_names(&self) -> Vec<String> {
        let mut names = Vec::new();
        for f in Family::ALL {
            if !self.has(f) {
                continue;
            }
            match f {
                Family::HeavyAtoms => names.push("n_heavy".to_string()),
                Family::InteriorSize => names.extend(["n_int".to_string(), "m_int".to_string()]),
                Family::Elements => {
                    names.extend(self.elements.iter().map(|e| format!("na_int:{e}")));
                    names.extend(self.elements.iter().map(|e| format!("na_ex:{e}")));
                }
                Family::Symbols => names.extend(self.symbols.iter().map(|s| format!("ns:{s}"))),
                Family::EdgeConfigs => names.extend(self.edge_configs.iter().map(|s| format!("ec:{s}"))),
                Family::FringeTrees => names.extend(self.fringe_trees.iter().map(|s| format!("fc:{s}"))),
                Family::LeafConfigs => names.extend(self.leaf_configs.iter().map(|s| format!("lf:{s}"))),
            }
        }
        names
    }

    pub fn num_descriptors(&self) -> usize {
        self.column_names().len()
    }

    /// One feature row for `g` in column order.
    pub fn row(&self, g: &ChemicalGraph, graph_id: &str) -> Result<Vec<f64>, FeatureError> {
        let p = profile(g, self.rho);
        for e in p.interior_elements.keys().chain(p.exterior_elements.keys()) {
            if self.elements.binary_search(e).is_err() {
                return Err(FeatureError::UnknownElement { graph: graph_id.to_string(), element: e.clone() });
            }
        }
        let count = |m: &BTreeMap<String, usize>, k: &String| m.get(k).copied().unwrap_or(0) as f64;
        let mut row = Vec::new();
        for f in Family::ALL {
            if !self.has(f) {
                continue;
            }
            match f {
                Family::HeavyAtoms => row.push(p.heavy as f64),
                Family::InteriorSize => row.extend([p.n_int as f64, p.m_int as f64]),
                Family::Elements => {
                    row.extend(self.elements.iter().map(|e| count(&p.interior_elements, e)));
                    row.extend(self.elements.iter().map(|e| count(&p.exterior_elements, e)));
                }
                Family::Symbols => row.extend(self.symbols.iter().map(|k| count(&p.symbols, k))),
                Family::EdgeConfigs => row.extend(self.edge_configs.iter().map(|k| count(&p.edge_configs, k))),
                Family::FringeTrees => row.extend(self.fringe_trees.iter().map(|k| count(&p.fringe_trees, k))),
                Family::LeafConfigs => row.extend(self.leaf_configs.iter().map(|k| count(&p.leaf_configs, k))),
            }
        }
        Ok(row)
    }
}

/// Row id of graph `i`: its name, or `g<i+1>` when unnamed.
pub fn graph_id(g: &ChemicalGraph, i: usize) -> String {
    g.name().map(str::to_string).unwrap_or_else(|| format!("g{}", i + 1))
}

/// Feature table with one row per graph; targets are taken as given.
pub fn extract_features(
    graphs: &[ChemicalGraph],
    targets: &[f64],
    config: &DescriptorConfig,
) -> Result<DataSet, FeatureError> {
    if graphs.len() != targets.len() {
        return Err(FeatureError::TargetCount { graphs: graphs.len(), targets: targets.len() });
    }
    let ids: Vec<String> = graphs.iter().enumerate().map(|(i, g)| graph_id(g, i)).collect();
    let rows = graphs.iter().zip(&ids).map(|(g, id)| config.row(g, id)).collect::<Result<Vec<_>, _>>()?;
    Ok(DataSet::new(ids, rows, targets.to_vec(), config.column_names())?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphBuilder;

    fn toluene_like() -> ChemicalGraph {
        let mut b = GraphBuilder::new();
        let c: Vec<usize> = (0..6).map(|i| b.atom(&format!("c{i}"), "C")).collect();
        for i in 0..6 {
            b.bond(c[i], c[(i + 1) % 6], if i % 2 == 0 { 2 } else { 1 });
        }
        let m = b.atom("m", "C");
        b.bond(c[0], m, 1);
        let o = b.atom("o", "O");
        b.bond(c[3], o, 1);
        b.fill_hydrogens().build().unwrap()
    }

    #[test]
    fn single_graph_counts() {
        let g = toluene_like();
        let cfg = DescriptorConfig::discover(std::slice::from_ref(&g), 2, &Family::ALL);
        assert_eq!(cfg.elements, vec!["C", "H", "O"]);
        assert_eq!(cfg.symbols, vec!["C:2", "C:3"]);
        assert_eq!(cfg.fringe_trees, vec!["C(1C(1H,1H,1H))", "C(1H)", "C(1O(1H))"]);
        assert_eq!(cfg.leaf_configs, vec!["C C 1", "C O 1"]);
        let ds = extract_features(std::slice::from_ref(&g), &[1.5], &cfg).unwrap();
        let names = cfg.column_names();
        let get = |n: &str| ds.features[0][names.iter().position(|x| x == n).unwrap()];
        assert_eq!(get("n_heavy"), 8.0);
        assert_eq!(get("n_int"), 6.0);
        assert_eq!(get("m_int"), 6.0);
        assert_eq!(get("na_int:C"), 6.0);
        assert_eq!(get("na_ex:C"), 1.0);
        assert_eq!(get("na_ex:H"), 8.0);
        assert_eq!(get("ns:C:3"), 2.0);
        assert_eq!(get("fc:C(1H)"), 4.0);
        assert_eq!(get("ec:C:2 C:3 2"), 2.0);
        assert_eq!(ds.targets, vec![1.5]);
        assert_eq!(names.len(), cfg.num_descriptors());
    }

    #[test]
    fn family_selection_and_names() {
        let g = toluene_like();
        let cfg = DescriptorConfig::discover(&[g], 2, &[Family::InteriorSize, Family::HeavyAtoms]);
        assert_eq!(cfg.families, vec![Family::HeavyAtoms, Family::InteriorSize]);
        assert_eq!(cfg.column_names(), vec!["n_heavy", "n_int", "m_int"]);
        assert_eq!("fringe-trees".parse::<Family>().unwrap(), Family::FringeTrees);
        assert!("nope".parse::<Family>().is_err());
    }

    #[test]
    fn unknown_element_is_an_error() {
        let g = toluene_like();
        let mut cfg = DescriptorConfig::discover(&[g.clone()], 2, &Family::ALL);
        cfg.elements.retain(|e| e != "O");
        let err = extract_features(&[g], &[0.0], &cfg).unwrap_err();
        assert!(matches!(err, FeatureError::UnknownElement { ref element, .. } if element == "O"));
    }
}
