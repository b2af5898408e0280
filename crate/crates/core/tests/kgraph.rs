use kgraph_action::fixtures;
use kgraph_action::graph::{rewriting_class, validate};
use kgraph_action::Degree;

#[test]
fn path_counts_single_vertex() {
    let action = fixtures::single_vertex();
    let kg = action.kgraph();
    let v = kg.graph().vertex_by_name("v").unwrap();
    assert_eq!(kg.paths(Some(v), &Degree(vec![1, 0])).len(), 3);
    assert_eq!(kg.paths(Some(v), &Degree(vec![0, 1])).len(), 2);
    assert_eq!(kg.paths(Some(v), &Degree(vec![1, 1])).len(), 6);
    assert_eq!(kg.paths(Some(v), &Degree(vec![2, 2])).len(), 36);
}

#[test]
fn normalize_sorts_colours() {
    let action = fixtures::single_vertex();
    let kg = action.kgraph();
    let lam = kg.normalize_names(&["f1", "e2"]).unwrap();
    let expected = kg.normalize_names(&["e3", "f1"]).unwrap();
    assert_eq!(lam, expected);
    assert_eq!(lam.degree, Degree(vec![1, 1]));
}

#[test]
fn normalize_is_traversal_invariant() {
    let action = fixtures::basilica();
    let kg = action.kgraph();
    let lam = kg.normalize_names(&["e1", "e3", "f1"]).unwrap();
    for w in kg.traversals(&lam) {
        assert_eq!(kg.normalize(&w).unwrap(), lam);
    }
}

#[test]
fn factorize_round_trips() {
    let action = fixtures::basilica();
    let kg = action.kgraph();
    let lam = kg.normalize_names(&["e1", "e3", "f1", "f2"]).unwrap();
    for p in Degree::boxed(&lam.degree) {
        let (head, tail) = kg.factorize(&lam, &p).unwrap();
        assert_eq!(head.degree, p);
        assert_eq!(head.range, lam.range);
        assert_eq!(tail.source, lam.source);
        assert_eq!(kg.compose(&head, &tail).unwrap(), lam);
    }
}

#[test]
fn factorize_agrees_with_rewriting_oracle() {
    let action = fixtures::single_vertex();
    let kg = action.kgraph();
    let lam = kg.normalize_names(&["e2", "f1", "e3", "f2"]).unwrap();
    let p = Degree(vec![1, 1]);
    let (head, _) = kg.factorize(&lam, &p).unwrap();
    // Every word in the rewriting class whose leading segment has
    // degree p must normalize that segment to the factorization head.
    let mut checked = 0;
    for w in rewriting_class(kg, &lam.word) {
        let prefix = &w[..p.total()];
        let d: Degree = {
            let mut d = Degree::zero(2);
            for &e in prefix {
                d.0[kg.graph().colour(e) - 1] += 1;
            }
            d
        };
        if d == p {
            assert_eq!(kg.normalize(prefix).unwrap(), head);
            checked += 1;
        }
    }
    assert!(checked > 0);
}

#[test]
fn lambda_min_of_distinct_colours() {
    let action = fixtures::single_vertex();
    let kg = action.kgraph();
    let mu = kg.normalize_names(&["e1"]).unwrap();
    let nu = kg.normalize_names(&["f1"]).unwrap();
    let pairs = kg.lambda_min(&mu, &nu);
    // The only common extension is e1 f1 = f1 e1.
    assert_eq!(pairs.len(), 1);
    assert_eq!(pairs[0].0, kg.normalize_names(&["f1"]).unwrap());
    assert_eq!(pairs[0].1, kg.normalize_names(&["e1"]).unwrap());
    for (eta, zeta) in &pairs {
        assert_eq!(
            kg.compose(&mu, eta).unwrap(),
            kg.compose(&nu, zeta).unwrap()
        );
    }
}

#[test]
fn lambda_min_same_degree_is_diagonal() {
    let action = fixtures::basilica();
    let kg = action.kgraph();
    let p = Degree(vec![1, 1]);
    let paths = kg.paths(None, &p);
    for lam in &paths {
        for mu in &paths {
            let pairs = kg.lambda_min(lam, mu);
            if lam == mu {
                assert_eq!(pairs.len(), 1);
                assert!(pairs[0].0.is_vertex() && pairs[0].1.is_vertex());
            } else {
                assert!(pairs.is_empty());
            }
        }
    }
}

#[test]
fn segment_matches_factorizations() {
    let action = fixtures::basilica();
    let kg = action.kgraph();
    let lam = kg.normalize_names(&["e3", "e2", "f3", "f4"]).unwrap();
    let seg = kg
        .segment(&lam, &Degree(vec![1, 0]), &Degree(vec![2, 1]))
        .unwrap();
    assert_eq!(seg.degree, Degree(vec![1, 1]));
    let (head, _) = kg.factorize(&lam, &Degree(vec![2, 1])).unwrap();
    let (_, expected) = kg.factorize(&head, &Degree(vec![1, 0])).unwrap();
    assert_eq!(seg, expected);
}

#[test]
fn structural_checks_pass_on_examples() {
    for action in [fixtures::single_vertex(), fixtures::basilica()] {
        let checks = action.kgraph().structural_checks();
        assert!(checks.has_no_sources);
        assert!(checks.strongly_connected);
    }
}

#[test]
fn non_associative_squares_are_rejected() {
    let (graph, squares) = fixtures::three_colour_nonassociative();
    let report = validate(&graph, &squares);
    assert!(!report.ok());
    assert!(report
        .failures
        .iter()
        .any(|f| f.contains("non-associative")));
}

#[test]
fn incomplete_squares_are_rejected() {
    let action = fixtures::single_vertex();
    let graph = action.kgraph().graph().clone();
    let squares = kgraph_action::SquareSet::new(
        &graph,
        &[
            ["e1", "f1", "f1", "e1"],
            ["e1", "f2", "f2", "e1"],
            ["e2", "f1", "f1", "e3"],
            ["e2", "f2", "f2", "e2"],
            ["e3", "f1", "f1", "e2"],
        ],
    )
    .unwrap();
    let report = validate(&graph, &squares);
    assert!(report
        .failures
        .iter()
        .any(|f| f.contains("incomplete")));
}
