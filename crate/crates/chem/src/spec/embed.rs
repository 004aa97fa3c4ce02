//! Backtracking search for an extension witness.
//!
//! Seed vertices are placed on interior atoms in listed order, then each
//! seed edge is realized as a direct bond, a discarded edge, or a simple path
//! through unused interior atoms. Whatever interior part remains must split
//! into leaf paths hanging from the subdivision. The first witness that passes
//! every rule is returned.

use thiserror::Error;

use crate::graph::ChemicalGraph;
use crate::layers::{decompose_two_layer, TwoLayerDecomposition};

use super::witness::check_with;
use super::{EdgeClass, ExtensionWitness, TargetSpec};

pub const MAX_SEED_VERTICES: usize = 20;
pub const MAX_INTERIOR_VERTICES: usize = 60;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EmbedError {
    #[error("seed graph has {count} vertices, search is capped at {cap}")]
    SeedTooLarge { count: usize, cap: usize },
    #[error("graph has {count} interior atoms, search is capped at {cap}")]
    InteriorTooLarge { count: usize, cap: usize },
}

struct Search<'a> {
    g: &'a ChemicalGraph,
    dec: TwoLayerDecomposition,
    spec: &'a TargetSpec,
    /// Seed vertex index of the two ends of each edge.
    ends: Vec<(usize, usize)>,
    images: Vec<usize>,
    /// 0 free, 1 seed image, 2 inner path atom.
    used: Vec<u8>,
    bond_used: Vec<bool>,
    paths: Vec<Option<Vec<usize>>>,
}

impl Search<'_> {
    fn id(&self, i: usize) -> String {
        self.g.atom(i).id.clone()
    }

    fn place(&mut self, k: usize) -> Option<ExtensionWitness> {
        if k == self.spec.seed.vertices.len() {
            return self.realize(0);
        }
        let name = &self.spec.seed.vertices[k];
        let allowed = self.spec.chemical.seed_elements.get(name);
        let (mut fixed, mut total) = (0, 0);
        for (e, &(a, b)) in self.spec.seed.edges.iter().zip(&self.ends) {
            let incident = (a == k) as usize + (b == k) as usize;
            total += incident;
            if e.class != EdgeClass::ZeroOrOne {
                fixed += incident;
            }
        }
        let candidates = self.dec.interior.clone();
        for v in candidates {
            if self.used[v] != 0 {
                continue;
            }
            if allowed.is_some_and(|a| !a.contains(&self.g.element(v).label())) {
                continue;
            }
            let d = self.dec.interior_degree(self.g, v);
            if d < fixed || d > total + 1 {
                continue;
            }
            let bonded_ok = self.spec.seed.edges.iter().zip(&self.ends).all(|(e, &(a, b))| {
                if e.class != EdgeClass::ExactlyOne {
                    return true;
                }
                let other = if a == k && b < k {
                    b
                } else if b == k && a < k {
                    a
                } else {
                    return true;
                };
                self.g.bond_between(v, self.images[other]).is_some()
            });
            if !bonded_ok {
                continue;
            }
            self.used[v] = 1;
            self.images.push(v);
            if let Some(w) = self.place(k + 1) {
                return Some(w);
            }
            self.images.pop();
            self.used[v] = 0;
        }
        None
    }

    fn realize(&mut self, k: usize) -> Option<ExtensionWitness> {
        if k == self.spec.seed.edges.len() {
            return self.finish();
        }
        let e = &self.spec.seed.edges[k];
        let (a, b) = (self.images[self.ends[k].0], self.images[self.ends[k].1]);
        let direct = self.g.bond_between(a, b).filter(|&x| !self.bond_used[x] && self.dec.interior_bonds.contains(&x));
        match e.class {
            EdgeClass::ExactlyOne | EdgeClass::ZeroOrOne => {
                if let Some(x) = direct {
                    self.bond_used[x] = true;
                    self.paths.push(Some(vec![a, b]));
                    if let Some(w) = self.realize(k + 1) {
                        return Some(w);
                    }
                    self.paths.pop();
                    self.bond_used[x] = false;
                }
                if e.class == EdgeClass::ZeroOrOne {
                    self.paths.push(None);
                    if let Some(w) = self.realize(k + 1) {
                        return Some(w);
                    }
                    self.paths.pop();
                }
                None
            }
            _ => {
                let bounds = self.spec.interior.length_bounds(e);
                let min = bounds.lb.max(e.class.min_length());
                let max = bounds.ub.unwrap_or(usize::MAX).min(self.dec.interior.len());
                let mut path = vec![a];
                self.extend(k, b, min, max, &mut path)
            }
        }
    }

    fn extend(&mut self, k: usize, target: usize, min: usize, max: usize, path: &mut Vec<usize>) -> Option<ExtensionWitness> {
        let last = *path.last().unwrap();
        let len = path.len() - 1;
        if len >= max {
            return None;
        }
        let steps: Vec<(usize, usize)> = self.dec.interior_neighbors(self.g, last).collect();
        for (n, bond) in steps {
            if self.bond_used[bond] {
                continue;
            }
            if n == target {
                if len + 1 < min {
                    continue;
                }
                self.bond_used[bond] = true;
                path.push(n);
                self.paths.push(Some(path.clone()));
                if let Some(w) = self.realize(k + 1) {
                    return Some(w);
                }
                self.paths.pop();
                path.pop();
                self.bond_used[bond] = false;
                continue;
            }
            if self.used[n] != 0 || !(2..=3).contains(&self.dec.interior_degree(self.g, n)) {
                continue;
            }
            self.used[n] = 2;
            self.bond_used[bond] = true;
            path.push(n);
            if let Some(w) = self.extend(k, target, min, max, path) {
                return Some(w);
            }
            path.pop();
            self.bond_used[bond] = false;
            self.used[n] = 0;
        }
        None
    }

    /// Splits the remaining interior into leaf paths and checks the witness.
    fn finish(&mut self) -> Option<ExtensionWitness> {
        let g = self.g;
        let mut leaf_paths = std::collections::BTreeMap::new();
        let mut seen = vec![false; g.len()];
        for &x in &self.dec.interior_bonds {
            let bond = g.bonds()[x];
            if !self.bond_used[x] && self.used[bond.a] != 0 && self.used[bond.b] != 0 {
                return None;
            }
        }
        for &start in &self.dec.interior {
            if self.used[start] != 0 || seen[start] {
                continue;
            }
            // Collect the free component and its bonds to the subdivision.
            let mut comp = vec![start];
            let mut anchors = Vec::new();
            seen[start] = true;
            let mut i = 0;
            while i < comp.len() {
                let v = comp[i];
                i += 1;
                for (n, _) in self.dec.interior_neighbors(g, v) {
                    if self.used[n] != 0 {
                        anchors.push((v, n));
                    } else if !seen[n] {
                        seen[n] = true;
                        comp.push(n);
                    }
                }
            }
            let [(attach, root)] = anchors[..] else { return None };
            let mut seq = vec![root, attach];
            let mut prev = root;
            loop {
                let cur = *seq.last().unwrap();
                let next: Vec<usize> = self.dec.interior_neighbors(g, cur).map(|(n, _)| n).filter(|&n| n != prev).collect();
                match next[..] {
                    [] => break,
                    [n] if self.used[n] == 0 => {
                        prev = cur;
                        seq.push(n);
                    }
                    _ => return None,
                }
            }
            if seq.len() - 1 != comp.len() {
                return None;
            }
            let key = self.id(root);
            if leaf_paths.contains_key(&key) {
                return None;
            }
            leaf_paths.insert(key, seq.iter().map(|&v| self.id(v)).collect());
        }
        let witness = ExtensionWitness {
            vertex_map: self
                .spec
                .seed
                .vertices
                .iter()
                .zip(&self.images)
                .map(|(v, &i)| (v.clone(), self.id(i)))
                .collect(),
            paths: self
                .spec
                .seed
                .edges
                .iter()
                .zip(&self.paths)
                .map(|(e, p)| (e.id.clone(), p.as_ref().map(|p| p.iter().map(|&v| self.id(v)).collect())))
                .collect(),
            leaf_paths,
        };
        match check_with(g, &self.dec, self.spec, &witness) {
            Ok(r) if r.is_confirmed() => Some(witness),
            _ => None,
        }
    }
}

/// Searches for a witness under which `g` satisfies every rule of `spec`.
pub fn find_embedding(g: &ChemicalGraph, spec: &TargetSpec) -> Result<Option<ExtensionWitness>, EmbedError> {
    let seed = &spec.seed;
    if seed.vertices.len() > MAX_SEED_VERTICES {
        return Err(EmbedError::SeedTooLarge { count: seed.vertices.len(), cap: MAX_SEED_VERTICES });
    }
    let dec = decompose_two_layer(g, spec.chemical.rho);
    if dec.interior.len() > MAX_INTERIOR_VERTICES {
        return Err(EmbedError::InteriorTooLarge { count: dec.interior.len(), cap: MAX_INTERIOR_VERTICES });
    }
    if seed.vertices.len() > dec.interior.len() {
        return Ok(None);
    }
    let ends = seed
        .edges
        .iter()
        .map(|e| (seed.vertex_index(&e.u).unwrap(), seed.vertex_index(&e.v).unwrap()))
        .collect();
    let mut s = Search {
        g,
        spec,
        ends,
        images: Vec::new(),
        used: vec![0; g.len()],
        bond_used: vec![false; g.bonds().len()],
        paths: Vec::new(),
        dec,
    };
    Ok(s.place(0))
}
