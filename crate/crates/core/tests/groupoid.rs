use kgraph_action::fixtures;
use kgraph_action::groupoid::{
    groupoid_closure, restriction_closure, ClosureTable, Groupoid, GroupoidElement,
};
use kgraph_action::{Degree, Error};

#[test]
fn order_two_generator_squares_to_unit() {
    let action = fixtures::single_vertex();
    let gp = Groupoid::new(&action);
    let a = gp.generator_by_name("a").unwrap();
    let aa = gp.compose(&a, &a).unwrap();
    let unit = GroupoidElement::unit(a.dom);
    assert!(gp.equal(&aa, &unit).unwrap());
    assert!(gp.equal(&a.inverse(), &a).unwrap());
    assert!(!gp.equal(&a, &unit).unwrap());
}

#[test]
fn single_vertex_closure_is_two_elements() {
    let action = fixtures::single_vertex();
    let gp = Groupoid::new(&action);
    let mut table = ClosureTable::new();
    let gens = vec![gp.generator_by_name("a").unwrap()];
    let ids = groupoid_closure(&gp, &mut table, &gens, 100).unwrap();
    assert_eq!(ids.len(), 2);
}

#[test]
fn basilica_closure_exceeds_small_bound() {
    let action = fixtures::basilica();
    let gp = Groupoid::new(&action);
    let mut table = ClosureTable::new();
    let gens: Vec<_> = action
        .automaton()
        .states()
        .map(|s| gp.generator(s))
        .collect();
    match groupoid_closure(&gp, &mut table, &gens, 50) {
        Err(Error::NotFinite { bound: 50 }) => {}
        other => panic!("expected NotFinite, got {other:?}"),
    }
}

#[test]
fn basilica_generators_are_finite_state() {
    let action = fixtures::basilica();
    let gp = Groupoid::new(&action);
    let mut table = ClosureTable::new();
    let av = gp.generator_by_name("av").unwrap();
    let ids = restriction_closure(&gp, &mut table, &av, 100).unwrap();
    // av, aw, bv, bw and the two units.
    assert_eq!(ids.len(), 6);
}

#[test]
fn inverse_laws() {
    let action = fixtures::basilica();
    let gp = Groupoid::new(&action);
    for name in ["av", "bv", "aw", "bw"] {
        let g = gp.generator_by_name(name).unwrap();
        let gi = g.inverse();
        let left = gp.compose(&g, &gi).unwrap();
        assert!(gp.equal(&left, &GroupoidElement::unit(g.cod)).unwrap());
        let right = gp.compose(&gi, &g).unwrap();
        assert!(gp.equal(&right, &GroupoidElement::unit(g.dom)).unwrap());
    }
}

#[test]
fn action_preserves_degree_and_range() {
    let action = fixtures::basilica();
    let kg = action.kgraph();
    let gp = Groupoid::new(&action);
    let bv = gp.generator_by_name("bv").unwrap();
    for p in Degree::boxed(&Degree(vec![2, 2])) {
        for lam in kg.paths(Some(bv.dom), &p) {
            let img = gp.act(&bv, &lam).unwrap();
            assert_eq!(img.degree, lam.degree);
            assert_eq!(img.range, bv.cod);
            let rest = gp.restrict(&bv, &lam).unwrap();
            assert_eq!(rest.dom, lam.source);
            assert_eq!(rest.cod, img.source);
        }
    }
}

#[test]
fn cocycle_identity_over_composition() {
    // (g h)|_lam = g|_{h . lam} h|_lam for sampled elements and paths.
    let action = fixtures::basilica();
    let kg = action.kgraph();
    let gp = Groupoid::new(&action);
    let names = ["av", "bv"];
    for gn in names {
        for hn in names {
            let g = gp.generator_by_name(gn).unwrap();
            let h = gp.generator_by_name(hn).unwrap();
            let gh = gp.compose(&g, &h).unwrap();
            for lam in kg.paths(Some(h.dom), &Degree(vec![1, 1])) {
                let lhs = gp.restrict(&gh, &lam).unwrap();
                let hl = gp.act(&h, &lam).unwrap();
                let rhs = gp
                    .compose(&gp.restrict(&g, &hl).unwrap(), &gp.restrict(&h, &lam).unwrap())
                    .unwrap();
                assert!(gp.equal(&lhs, &rhs).unwrap());
            }
        }
    }
}

#[test]
fn inverse_restriction_identity() {
    // g^-1|_lam = (g|_{g^-1 . lam})^-1.
    let action = fixtures::basilica();
    let kg = action.kgraph();
    let gp = Groupoid::new(&action);
    let g = gp.generator_by_name("av").unwrap();
    let gi = g.inverse();
    for lam in kg.paths(Some(gi.dom), &Degree(vec![2, 1])) {
        let lhs = gp.restrict(&gi, &lam).unwrap();
        let pre = gp.act(&gi, &lam).unwrap();
        let rhs = gp.restrict(&g, &pre).unwrap().inverse();
        assert!(gp.equal(&lhs, &rhs).unwrap());
    }
}

#[test]
fn action_respects_composition_of_paths() {
    // g . (lam mu) = (g . lam)(g|_lam . mu).
    let action = fixtures::single_vertex();
    let kg = action.kgraph();
    let gp = Groupoid::new(&action);
    let a = gp.generator_by_name("a").unwrap();
    for lam in kg.paths(Some(a.dom), &Degree(vec![1, 1])) {
        for mu in kg.paths(Some(lam.source), &Degree(vec![1, 0])) {
            let whole = gp.act(&a, &kg.compose(&lam, &mu).unwrap()).unwrap();
            let head = gp.act(&a, &lam).unwrap();
            let tail = gp.act(&gp.restrict(&a, &lam).unwrap(), &mu).unwrap();
            assert_eq!(whole, kg.compose(&head, &tail).unwrap());
        }
    }
}
