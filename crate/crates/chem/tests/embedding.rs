use hps_chem::graph::GraphBuilder;
use hps_chem::spec::{check_extension, find_embedding, parse_specification};
use hps_testkit::Rng;

/// A triangle seed whose edges are subdivided into random lengths, with
/// propyl chains on some inner atoms; the generator knows a witness exists.
#[test]
fn constructed_extensions_are_found() {
    let mut rng = Rng::new(404);
    for case in 0..25 {
        let lengths: Vec<usize> = (0..3).map(|_| rng.int(1, 3)).collect();
        let mut b = GraphBuilder::new();
        let seeds: Vec<usize> = (0..3).map(|i| b.atom(&format!("s{i}"), "C")).collect();
        let mut k = 0;
        for (e, &len) in lengths.iter().enumerate() {
            let mut prev = seeds[e];
            for _ in 1..len {
                let v = b.atom(&format!("p{k}"), "C");
                k += 1;
                b.bond(prev, v, 1);
                if rng.int(0, 2) == 0 {
                    let mut tail = v;
                    for j in 0..3 {
                        let c = b.atom(&format!("t{k}_{j}"), "C");
                        b.bond(tail, c, 1);
                        tail = c;
                    }
                }
                prev = v;
            }
            b.bond(prev, seeds[(e + 1) % 3], 1);
        }
        let g = b.fill_hydrogens().build().unwrap();
        let spec = parse_specification(
            "[SEED]\nvertex u v w\nedge a u v >=1\nedge b v w >=1\nedge c w u >=1\n[INTERIOR]\nlength a 1 3\nlength b 1 3\nlength c 1 3\n",
        )
        .unwrap();
        let w = find_embedding(&g, &spec).unwrap().unwrap_or_else(|| panic!("case {case}: {lengths:?}"));
        assert!(check_extension(&g, &spec, &w).unwrap().is_confirmed());
    }
}

#[test]
fn cycle_graph_does_not_fit_a_tree_seed() {
    let mut b = GraphBuilder::new();
    let c: Vec<usize> = (0..6).map(|i| b.atom(&format!("c{i}"), "C")).collect();
    for i in 0..6 {
        b.bond(c[i], c[(i + 1) % 6], 1);
    }
    let g = b.fill_hydrogens().build().unwrap();
    let tree = parse_specification("[SEED]\nvertex u v w\nedge a u v >=1\nedge b v w >=1\n[INTERIOR]\nlength a 1 5\nlength b 1 5\n").unwrap();
    assert_eq!(find_embedding(&g, &tree).unwrap(), None);
    let cycle = parse_specification("[SEED]\nvertex u v\nedge a u v >=1\nedge b u v >=1\n[INTERIOR]\nlength a 1 5\nlength b 1 5\n").unwrap();
    assert!(find_embedding(&g, &cycle).unwrap().is_some());
}
