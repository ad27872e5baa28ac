use localmds::format::{parse_graph, parse_rational, parse_vertex_set, write_graph, FormatError};
use localmds_core::generators;
use localmds_core::{Graph, Rational, VertexSet};

#[test]
fn generated_graphs_round_trip() {
    for generated in [
        generators::grid(4, 3).unwrap(),
        generators::torus_grid(3, 4).unwrap(),
        generators::random_planar(30, 7).unwrap(),
        generators::star(5).unwrap(),
    ] {
        let meta: Vec<(String, String)> = generated
            .info
            .entries()
            .into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect();
        let text = write_graph(&generated.graph, &meta).unwrap();
        let back = parse_graph(&text).unwrap();
        assert_eq!(back.graph, generated.graph);
        assert_eq!(back.metadata, meta);
        assert_eq!(write_graph(&back.graph, &back.metadata).unwrap(), text);
    }
}

#[test]
fn weights_round_trip() {
    let mut g = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
    g.set_edge_weight(1, 2, Rational::new(3, 2)).unwrap();
    g.set_vertex_weight(0, Rational::new(5, 1)).unwrap();
    let text = write_graph(&g, &[]).unwrap();
    assert_eq!(text, "p 3 2\ne 0 1\ne 1 2\nvw 0 5/1\new 1 2 3/2\n");
    assert_eq!(parse_graph(&text).unwrap().graph, g);
}

#[test]
fn malformed_input() {
    assert!(matches!(parse_graph("e 0 1\n"), Err(FormatError::MissingHeader)));
    assert!(matches!(parse_graph("p 2 2\ne 0 1\n"), Err(FormatError::EdgeCount { expected: 2, found: 1 })));
    assert!(matches!(parse_graph("p 2 1\ne 0 x\n"), Err(FormatError::Syntax { line: 2, .. })));
    assert!(matches!(parse_graph("p 2 1\nq 0 1\n"), Err(FormatError::Syntax { line: 2, .. })));
    assert!(matches!(parse_graph("p 2 1\ne 0 5\n"), Err(FormatError::Graph(_))));
    assert!(matches!(parse_graph("p 2 1\ne 0 1\new 0 1 0/1\n"), Err(FormatError::Graph(_))));
    let mut sparse = Graph::new();
    sparse.add_vertex(4).unwrap();
    assert!(matches!(write_graph(&sparse, &[]), Err(FormatError::NonContiguous(4))));
}

#[test]
fn rationals_and_sets() {
    assert_eq!(parse_rational("3"), Ok(Rational::from(3)));
    assert_eq!(parse_rational("2/4"), Ok(Rational::new(1, 2)));
    assert!(parse_rational("1/0").is_err());
    assert!(parse_rational("a").is_err());
    assert_eq!(parse_vertex_set("0 3\n5 # note\n").unwrap(), VertexSet::from([0, 3, 5]));
    assert!(parse_vertex_set("0 -1").is_err());
}
