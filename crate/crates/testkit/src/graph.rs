//! Graph oracles over plain adjacency lists.

use crate::Rng;

/// A hydrogen-free molecular skeleton.
#[derive(Debug, Clone)]
pub struct Skeleton {
    pub elements: Vec<&'static str>,
    /// `(a, b, multiplicity)` with `a < b`.
    pub bonds: Vec<(usize, usize, u8)>,
}

impl Skeleton {
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.elements.len()];
        for &(a, b, _) in &self.bonds {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }
}

fn valence(e: &str) -> u32 {
    match e {
        "C" => 4,
        "N" => 3,
        _ => 2,
    }
}

/// Random connected skeleton with 4 to 25 atoms, at least four carbons and
/// at most four neighbors per atom. Some extra bonds close rings; some bonds
/// are double where both ends have spare valence.
pub fn random_skeleton(rng: &mut Rng) -> Skeleton {
    let n = rng.int(4, 25);
    let mut elements: Vec<&'static str> = (0..n)
        .map(|_| match rng.int(0, 9) {
            0 => "N",
            1 => "O",
            _ => "C",
        })
        .collect();
    for e in elements.iter_mut().take(4) {
        *e = "C";
    }
    let mut used = vec![0u32; n];
    let mut deg = vec![0usize; n];
    let mut bonds: Vec<(usize, usize, u8)> = Vec::new();
    let fits = |used: &[u32], deg: &[usize], v: usize, m: u32| used[v] + m <= valence(elements[v]) && deg[v] < 4;
    for v in 1..n {
        let open: Vec<usize> = (0..v).filter(|&u| fits(&used, &deg, u, 1)).collect();
        // Carbons keep spare valence, so an open parent always exists when
        // the first four atoms are carbon; fall back to chaining otherwise.
        let u = if open.is_empty() { v - 1 } else { open[rng.int(0, open.len() - 1)] };
        bonds.push((u, v, 1));
        used[u] += 1;
        used[v] += 1;
        deg[u] += 1;
        deg[v] += 1;
    }
    let extra = rng.int(0, n / 4 + 1);
    for _ in 0..extra {
        let (a, b) = (rng.int(0, n - 1), rng.int(0, n - 1));
        let (a, b) = (a.min(b), a.max(b));
        if a == b || bonds.iter().any(|&(x, y, _)| x == a && y == b) {
            continue;
        }
        if fits(&used, &deg, a, 1) && fits(&used, &deg, b, 1) {
            bonds.push((a, b, 1));
            used[a] += 1;
            used[b] += 1;
            deg[a] += 1;
            deg[b] += 1;
        }
    }
    for bond in bonds.iter_mut() {
        let (a, b) = (bond.0, bond.1);
        if rng.int(0, 5) == 0 && used[a] < valence(elements[a]) && used[b] < valence(elements[b]) {
            bond.2 = 2;
            used[a] += 1;
            used[b] += 1;
        }
    }
    Skeleton { elements, bonds }
}

fn component(adj: &[Vec<usize>], start: usize, cut: Option<(usize, usize)>) -> Vec<usize> {
    let mut seen = vec![false; adj.len()];
    let mut stack = vec![start];
    seen[start] = true;
    let mut out = Vec::new();
    while let Some(v) = stack.pop() {
        out.push(v);
        for &u in &adj[v] {
            if cut == Some((v, u)) || cut == Some((u, v)) || seen[u] {
                continue;
            }
            seen[u] = true;
            stack.push(u);
        }
    }
    out.sort_unstable();
    out
}

fn edges_within(adj: &[Vec<usize>], vs: &[usize], cut: Option<(usize, usize)>) -> usize {
    let mut twice = 0;
    for &v in vs {
        for &u in &adj[v] {
            if vs.binary_search(&u).is_ok() && cut != Some((v, u)) && cut != Some((u, v)) {
                twice += 1;
            }
        }
    }
    twice / 2
}

fn eccentricity(adj: &[Vec<usize>], v: usize, cut: Option<(usize, usize)>) -> usize {
    let mut dist = vec![usize::MAX; adj.len()];
    dist[v] = 0;
    let mut queue = std::collections::VecDeque::from([v]);
    let mut far = 0;
    while let Some(x) = queue.pop_front() {
        far = far.max(dist[x]);
        for &u in &adj[x] {
            if cut == Some((x, u)) || cut == Some((u, x)) || dist[u] != usize::MAX {
                continue;
            }
            dist[u] = dist[x] + 1;
            queue.push_back(u);
        }
    }
    far
}

/// Height of every vertex by definition rather than by peeling.
///
/// Cutting an edge `uv` whose `v` side is a tree leaves `v` as the root of a
/// pendant tree; the height is the smallest such tree height. In a component
/// that is itself a tree, the vertices of least eccentricity are centers and
/// have no height, as do vertices with no pendant side at all.
pub fn heights_by_definition(adj: &[Vec<usize>]) -> Vec<Option<usize>> {
    let n = adj.len();
    let mut out = vec![None; n];
    for v in 0..n {
        let comp = component(adj, v, None);
        if edges_within(adj, &comp, None) + 1 == comp.len() {
            let ecc: Vec<usize> = comp.iter().map(|&x| eccentricity(adj, x, None)).collect();
            let min = *ecc.iter().min().unwrap();
            if eccentricity(adj, v, None) == min {
                continue;
            }
        }
        for &u in &adj[v] {
            let side = component(adj, v, Some((u, v)));
            if side.contains(&u) {
                continue;
            }
            if edges_within(adj, &side, Some((u, v))) + 1 == side.len() {
                let h = eccentricity(adj, v, Some((u, v)));
                out[v] = Some(out[v].map_or(h, |o: usize| o.min(h)));
            }
        }
    }
    out
}

/// A rooted tree with labeled vertices and multiplicity-labeled edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tree {
    pub label: String,
    pub children: Vec<(u8, Tree)>,
}

impl Tree {
    pub fn size(&self) -> usize {
        1 + self.children.iter().map(|(_, c)| c.size()).sum::<usize>()
    }

    /// Writes the tree with children in stored order, not canonically.
    pub fn write(&self) -> String {
        if self.children.is_empty() {
            return self.label.clone();
        }
        let parts: Vec<String> = self.children.iter().map(|(m, c)| format!("{m}{}", c.write())).collect();
        format!("{}({})", self.label, parts.join(","))
    }
}

/// Isomorphism by backtracking over child matchings.
pub fn isomorphic(a: &Tree, b: &Tree) -> bool {
    if a.label != b.label || a.children.len() != b.children.len() || a.size() != b.size() {
        return false;
    }
    fn assign(a: &Tree, b: &Tree, i: usize, taken: &mut Vec<bool>) -> bool {
        if i == a.children.len() {
            return true;
        }
        let (m, ca) = &a.children[i];
        for j in 0..b.children.len() {
            let (mb, cb) = &b.children[j];
            if taken[j] || m != mb || !isomorphic(ca, cb) {
                continue;
            }
            taken[j] = true;
            if assign(a, b, i + 1, taken) {
                return true;
            }
            taken[j] = false;
        }
        false
    }
    assign(a, b, 0, &mut vec![false; b.children.len()])
}

/// Random tree with up to `max` vertices over a small label alphabet.
pub fn random_tree(rng: &mut Rng, max: usize) -> Tree {
    let n = rng.int(1, max);
    let labels = ["C", "N", "O", "H"];
    let mut parent = vec![usize::MAX; n];
    let mut mult = vec![1u8; n];
    for v in 1..n {
        parent[v] = rng.int(0, v - 1);
        mult[v] = rng.int(1, 2) as u8;
    }
    let label: Vec<&str> = (0..n).map(|_| labels[rng.int(0, 2)]).collect();
    fn build(v: usize, parent: &[usize], mult: &[u8], label: &[&str]) -> Tree {
        let children = (0..parent.len())
            .filter(|&c| parent[c] == v)
            .map(|c| (mult[c], build(c, parent, mult, label)))
            .collect();
        Tree { label: label[v].to_string(), children }
    }
    build(0, &parent, &mult, &label)
}

/// The same tree with children shuffled at every vertex.
pub fn shuffle_tree(rng: &mut Rng, t: &Tree) -> Tree {
    let mut children: Vec<(u8, Tree)> = t.children.iter().map(|(m, c)| (*m, shuffle_tree(rng, c))).collect();
    for i in (1..children.len()).rev() {
        children.swap(i, rng.int(0, i));
    }
    Tree { label: t.label.clone(), children }
}

/// Uniform random permutation of `0..n`.
pub fn permutation(rng: &mut Rng, n: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        p.swap(i, rng.int(0, i));
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> Vec<Vec<usize>> {
        (0..n)
            .map(|i| {
                let mut v = Vec::new();
                if i > 0 {
                    v.push(i - 1);
                }
                if i + 1 < n {
                    v.push(i + 1);
                }
                v
            })
            .collect()
    }

    #[test]
    fn path_heights() {
        let h = heights_by_definition(&path(7));
        assert_eq!(h, vec![Some(0), Some(1), Some(2), None, Some(2), Some(1), Some(0)]);
        assert_eq!(heights_by_definition(&path(4)), vec![Some(0), None, None, Some(0)]);
    }

    #[test]
    fn ring_with_pendant() {
        let mut adj = vec![vec![1, 2, 3], vec![0, 2], vec![0, 1], vec![0, 4], vec![3]];
        adj[0].sort();
        assert_eq!(heights_by_definition(&adj), vec![None, None, None, Some(1), Some(0)]);
    }

    #[test]
    fn tree_isomorphism() {
        let mut rng = Rng::new(3);
        for _ in 0..50 {
            let t = random_tree(&mut rng, 10);
            assert!(isomorphic(&t, &shuffle_tree(&mut rng, &t)));
        }
        let a = Tree { label: "C".into(), children: vec![(1, Tree { label: "O".into(), children: vec![] })] };
        let b = Tree { label: "C".into(), children: vec![(2, Tree { label: "O".into(), children: vec![] })] };
        assert!(!isomorphic(&a, &b));
    }

    #[test]
    fn skeletons_respect_caps() {
        let mut rng = Rng::new(9);
        for _ in 0..100 {
            let s = random_skeleton(&mut rng);
            let adj = s.adjacency();
            assert!(adj.iter().all(|a| a.len() <= 4));
            assert!(s.elements.iter().filter(|e| **e == "C").count() >= 4);
            assert_eq!(component(&adj, 0, None).len(), s.elements.len());
        }
    }
}
