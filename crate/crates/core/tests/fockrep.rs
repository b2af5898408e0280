use kgraph_action::fixtures;
use kgraph_action::fockrep::{relation_report, TruncatedRep};
use kgraph_action::groupoid::{Groupoid, GroupoidElement};
use kgraph_action::Degree;

#[test]
fn truncated_basis_counts() {
    let action = fixtures::single_vertex();
    let rep = TruncatedRep::build(&action, 2);
    // Paths of degree <= (2, 2): sum 3^p 2^q over the box.
    let expected: usize = (0..=2)
        .flat_map(|p| (0..=2).map(move |q| 3usize.pow(p) * 2usize.pow(q)))
        .sum();
    assert_eq!(rep.basis.len(), expected);
}

#[test]
fn relations_hold_exactly_single_vertex() {
    let action = fixtures::single_vertex();
    let gp = Groupoid::new(&action);
    let v = action.kgraph().graph().vertex_by_name("v").unwrap();
    let probes = vec![
        GroupoidElement::unit(v),
        gp.generator_by_name("a").unwrap(),
    ];
    let report = relation_report(&action, 2, &probes).unwrap();
    assert!(!report.residuals.is_empty());
    for (label, res) in &report.residuals {
        assert_eq!(*res, 0.0, "{label}: residual {res}");
    }
}

#[test]
fn relations_hold_exactly_basilica() {
    let action = fixtures::basilica();
    let gp = Groupoid::new(&action);
    let mut probes: Vec<GroupoidElement> = action
        .kgraph()
        .graph()
        .vertices()
        .map(GroupoidElement::unit)
        .collect();
    for name in ["av", "aw", "bv", "bw"] {
        let g = gp.generator_by_name(name).unwrap();
        probes.push(g.inverse());
        probes.push(g);
    }
    let report = relation_report(&action, 2, &probes).unwrap();
    assert!(!report.residuals.is_empty());
    for (label, res) in &report.residuals {
        assert_eq!(*res, 0.0, "{label}: residual {res}");
    }
    assert_eq!(report.max_residual(), 0.0);
}

#[test]
fn operator_maps_are_partial_permutations() {
    let action = fixtures::basilica();
    let rep = TruncatedRep::build(&action, 2);
    let kg = action.kgraph();
    let gp = Groupoid::new(&action);
    let mut maps = Vec::new();
    for lam in kg.paths(None, &Degree(vec![1, 1])) {
        maps.push(rep.t_map(&lam));
        maps.push(rep.t_star_map(&lam));
    }
    maps.push(rep.u_map(&gp.generator_by_name("bv").unwrap()).unwrap());
    for m in maps {
        let mut seen = std::collections::HashSet::new();
        for row in m.iter().flatten() {
            assert!(seen.insert(*row), "image index {row} repeated");
        }
    }
}
