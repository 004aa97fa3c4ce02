mod common;

use common::skeleton::{graph_from, identity};
use hps_chem::graph::{parse_graph, parse_graphs, serialize_graph, serialize_graphs, GraphError};
use hps_testkit::graph::random_skeleton;
use hps_testkit::Rng;

#[test]
fn random_graphs_round_trip_byte_stable() {
    let mut rng = Rng::new(5);
    let graphs: Vec<_> = (0..50)
        .map(|_| {
            let s = random_skeleton(&mut rng);
            graph_from(&s, &identity(s.elements.len()))
        })
        .collect();
    let text = serialize_graphs(&graphs);
    let back = parse_graphs(&text).unwrap();
    assert_eq!(back.len(), graphs.len());
    assert_eq!(serialize_graphs(&back), text);
    for (a, b) in graphs.iter().zip(&back) {
        assert_eq!(serialize_graph(a), serialize_graph(b));
        assert_eq!(a.bonds(), b.bonds());
    }
}

#[test]
fn hand_written_file_parses() {
    let text = "# two molecules\nG ethanol\nV c1 C\nV c2 C\nV o1 O\nE c1 c2 1\nE c2 o1 1\n---\nG water\nV o O\nV h1 H\nV h2 H\nE o h1 1\nE o h2 1\n";
    let graphs = parse_graphs(text).unwrap();
    assert_eq!(graphs.len(), 2);
    assert_eq!(graphs[0].name(), Some("ethanol"));
    assert_eq!(graphs[1].len(), 3);
    assert!(matches!(parse_graph(text), Err(GraphError::Multiple(2))));
}

#[test]
fn errors_carry_line_numbers() {
    let bad = "G x\nV c1 C\nE c1 c9 1\n";
    match parse_graphs(bad) {
        Err(GraphError::Structure { line, .. }) => assert_eq!(line, 3),
        other => panic!("{other:?}"),
    }
    match parse_graphs("V c1 C\nQ\n") {
        Err(GraphError::Syntax { line, .. }) => assert_eq!(line, 2),
        other => panic!("{other:?}"),
    }
}
