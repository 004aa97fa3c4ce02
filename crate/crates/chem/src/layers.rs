//! Interior/exterior decomposition at a branch parameter.
//!
//! This is a reconstruction of the two-layered model. Leaves of the
//! hydrogen-suppressed skeleton are peeled in rounds; the round in which an
//! atom is peeled is its height, the height of the pendant subtree it roots.
//! Atoms on cycles or on paths between cycles are never peeled. In a
//! component that is a tree, the one or two center atoms left when only
//! leaves remain are kept. Atoms of height below `rho` are exterior, as are
//! all hydrogens; every exterior atom hangs from exactly one interior atom,
//! its fringe-tree root.
//!
//! A component without heavy atoms is peeled on all of its atoms.

use crate::graph::ChemicalGraph;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoLayerDecomposition {
    pub rho: usize,
    /// Peeling round of each skeleton atom; `None` when never peeled.
    /// Hydrogens outside the skeleton are recorded as `Some(0)`.
    pub height: Vec<Option<usize>>,
    pub interior: Vec<usize>,
    pub exterior: Vec<usize>,
    /// Fringe-tree root of each atom; an interior atom is its own root.
    pub root_of: Vec<usize>,
    /// Bonds with both ends interior.
    pub interior_bonds: Vec<usize>,
    is_interior: Vec<bool>,
}

impl TwoLayerDecomposition {
    pub fn is_interior(&self, i: usize) -> bool {
        self.is_interior[i]
    }

    /// Non-root atoms of the fringe tree rooted at `root`, in index order.
    pub fn fringe_members(&self, root: usize) -> Vec<usize> {
        (0..self.root_of.len()).filter(|&v| v != root && self.root_of[v] == root).collect()
    }

    /// Neighbors of `v` across interior bonds.
    pub fn interior_neighbors<'a>(&'a self, g: &'a ChemicalGraph, v: usize) -> impl Iterator<Item = (usize, usize)> + 'a {
        g.neighbors(v).iter().copied().filter(move |&(n, _)| self.is_interior[v] && self.is_interior[n])
    }

    pub fn interior_degree(&self, g: &ChemicalGraph, v: usize) -> usize {
        self.interior_neighbors(g, v).count()
    }
}

fn skeleton(g: &ChemicalGraph) -> Vec<bool> {
    let mut in_skeleton = vec![false; g.len()];
    for comp in g.components() {
        let heavy = comp.iter().any(|&v| g.is_heavy(v));
        for &v in &comp {
            in_skeleton[v] = !heavy || g.is_heavy(v);
        }
    }
    in_skeleton
}

/// Peeling rounds over the skeleton; `None` for cycle atoms and tree centers.
pub fn peel_heights(g: &ChemicalGraph) -> Vec<Option<usize>> {
    let n = g.len();
    let skel = skeleton(g);
    let comp_of = {
        let mut c = vec![0; n];
        for (k, comp) in g.components().iter().enumerate() {
            for &v in comp {
                c[v] = k;
            }
        }
        c
    };
    let mut alive: Vec<bool> = skel.clone();
    let mut deg: Vec<usize> = (0..n)
        .map(|v| if skel[v] { g.neighbors(v).iter().filter(|&&(u, _)| skel[u]).count() } else { 0 })
        .collect();
    let mut alive_in_comp = vec![0usize; n];
    for v in 0..n {
        if alive[v] {
            alive_in_comp[comp_of[v]] += 1;
        }
    }
    let mut height: Vec<Option<usize>> = (0..n).map(|v| if skel[v] { None } else { Some(0) }).collect();
    let mut round = 0;
    loop {
        let leaves: Vec<usize> = (0..n).filter(|&v| alive[v] && deg[v] <= 1).collect();
        let mut leaves_in_comp = vec![0usize; n];
        for &v in &leaves {
            leaves_in_comp[comp_of[v]] += 1;
        }
        // A component reduced to only leaves keeps them as its center.
        let peel: Vec<usize> =
            leaves.into_iter().filter(|&v| leaves_in_comp[comp_of[v]] < alive_in_comp[comp_of[v]]).collect();
        if peel.is_empty() {
            break;
        }
        for &v in &peel {
            alive[v] = false;
            height[v] = Some(round);
            alive_in_comp[comp_of[v]] -= 1;
        }
        for &v in &peel {
            for &(u, _) in g.neighbors(v) {
                if alive[u] {
                    deg[u] -= 1;
                }
            }
        }
        round += 1;
    }
    height
}

pub fn decompose_two_layer(g: &ChemicalGraph, rho: usize) -> TwoLayerDecomposition {
    let n = g.len();
    let skel = skeleton(g);
    let height = peel_heights(g);
    let is_interior: Vec<bool> = (0..n).map(|v| skel[v] && height[v].is_none_or(|h| h >= rho)).collect();
    let interior: Vec<usize> = (0..n).filter(|&v| is_interior[v]).collect();
    let exterior: Vec<usize> = (0..n).filter(|&v| !is_interior[v]).collect();
    let mut root_of: Vec<usize> = (0..n).collect();
    let mut assigned = is_interior.clone();
    for &r in &interior {
        let mut queue = vec![r];
        let mut head = 0;
        while head < queue.len() {
            let v = queue[head];
            head += 1;
            for &(u, _) in g.neighbors(v) {
                if !assigned[u] {
                    assigned[u] = true;
                    root_of[u] = r;
                    queue.push(u);
                }
            }
        }
    }
    let interior_bonds =
        (0..g.bonds().len()).filter(|&k| is_interior[g.bonds()[k].a] && is_interior[g.bonds()[k].b]).collect();
    TwoLayerDecomposition { rho, height, interior, exterior, root_of, interior_bonds, is_interior }
}

/// A path from `vertices[0]` (the root) to an interior leaf whose inner
/// vertices have interior degree 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeafPath {
    pub vertices: Vec<usize>,
}

impl LeafPath {
    pub fn root(&self) -> usize {
        self.vertices[0]
    }

    pub fn leaf(&self) -> usize {
        *self.vertices.last().unwrap()
    }

    pub fn len(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.len() < 2
    }
}

/// Maximal leaf paths of the interior, ordered by root then leaf.
///
/// When a whole interior component is a path it is reported once, rooted at
/// its lower-index end.
pub fn leaf_paths(g: &ChemicalGraph, dec: &TwoLayerDecomposition) -> Vec<LeafPath> {
    let deg = |v: usize| dec.interior_degree(g, v);
    let mut out = Vec::new();
    for &leaf in &dec.interior {
        if deg(leaf) != 1 {
            continue;
        }
        let mut walk = vec![leaf];
        let mut prev = leaf;
        let mut cur = dec.interior_neighbors(g, leaf).next().unwrap().0;
        while deg(cur) == 2 {
            walk.push(cur);
            let next = dec.interior_neighbors(g, cur).map(|(u, _)| u).find(|&u| u != prev).unwrap();
            prev = cur;
            cur = next;
        }
        walk.push(cur);
        if deg(cur) == 1 && cur < leaf {
            continue;
        }
        if deg(cur) == 1 {
            out.push(LeafPath { vertices: walk });
        } else {
            walk.reverse();
            out.push(LeafPath { vertices: walk });
        }
    }
    out.sort_by_key(|p| (p.root(), p.leaf()));
    out
}

/// Element label and heavy-atom degree, written `C:3`.
pub fn chemical_symbol(g: &ChemicalGraph, v: usize) -> String {
    format!("{}:{}", g.element(v), g.heavy_degree(v))
}

fn pair_key(a: String, b: String, m: u8) -> String {
    if a <= b {
        format!("{a} {b} {m}")
    } else {
        format!("{b} {a} {m}")
    }
}

/// Unordered `(symbol, symbol, multiplicity)` of a bond, written `C:2 C:3 1`.
pub fn edge_configuration(g: &ChemicalGraph, bond: usize) -> String {
    let b = g.bonds()[bond];
    pair_key(chemical_symbol(g, b.a), chemical_symbol(g, b.b), b.multiplicity)
}

/// Unordered `(element, element, multiplicity)` of a bond, written `C O 2`.
pub fn adjacency_configuration(g: &ChemicalGraph, bond: usize) -> String {
    let b = g.bonds()[bond];
    pair_key(g.element(b.a).label(), g.element(b.b).label(), b.multiplicity)
}

/// Normalizes a configuration written in either order.
pub fn config_key(a: &str, b: &str, m: u8) -> String {
    pair_key(a.to_string(), b.to_string(), m)
}

/// Heavy-heavy bonds with an endpoint of heavy degree 1.
pub fn leaf_bonds(g: &ChemicalGraph) -> Vec<usize> {
    (0..g.bonds().len())
        .filter(|&k| {
            let b = g.bonds()[k];
            g.is_heavy(b.a) && g.is_heavy(b.b) && (g.heavy_degree(b.a) == 1 || g.heavy_degree(b.b) == 1)
        })
        .collect()
}
