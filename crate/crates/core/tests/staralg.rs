use kgraph_action::fixtures;
use kgraph_action::groupoid::GroupoidElement;
use kgraph_action::staralg::{AlgElement, StarAlg};
use kgraph_action::Degree;

fn approx_eq(a: &AlgElement, b: &AlgElement, tol: f64) -> bool {
    let mut keys: Vec<_> = a.terms.keys().chain(b.terms.keys()).collect();
    keys.sort();
    keys.dedup();
    keys.into_iter().all(|k| {
        let x = a.terms.get(k).copied().unwrap_or(0.0);
        let y = b.terms.get(k).copied().unwrap_or(0.0);
        (x - y).abs() < tol
    })
}

#[test]
fn isometry_relation() {
    let action = fixtures::basilica();
    let alg = StarAlg::new(&action);
    let kg = action.kgraph();
    for lam in kg.paths(None, &Degree(vec![1, 1])) {
        let t = alg.t(&lam).unwrap();
        let prod = alg.multiply(&alg.adjoint(&t).unwrap(), &t).unwrap();
        let src = alg.t(&kg.vertex_path(lam.source)).unwrap();
        assert!(approx_eq(&prod, &src, 1e-12));
    }
}

#[test]
fn unitary_relation_for_involution() {
    let action = fixtures::single_vertex();
    let alg = StarAlg::new(&action);
    let gp = alg.groupoid();
    let a = gp.generator_by_name("a").unwrap();
    let ua = alg.u(&a).unwrap();
    let prod = alg.multiply(&ua, &ua).unwrap();
    let one = alg.one().unwrap();
    assert!(approx_eq(&prod, &one, 1e-12));
    // u_a* = u_{a^-1} = u_a here.
    assert!(approx_eq(&alg.adjoint(&ua).unwrap(), &ua, 1e-12));
}

#[test]
fn covariance_relation() {
    // u_g t_lam = t_{g . lam} u_{g|_lam}.
    let action = fixtures::basilica();
    let alg = StarAlg::new(&action);
    let kg = action.kgraph();
    let gp = alg.groupoid();
    for name in ["av", "bv"] {
        let g = gp.generator_by_name(name).unwrap();
        for lam in kg.paths(Some(g.dom), &Degree(vec![1, 1])) {
            let lhs = alg
                .multiply(&alg.u(&g).unwrap(), &alg.t(&lam).unwrap())
                .unwrap();
            let glam = gp.act(&g, &lam).unwrap();
            let grest = gp.restrict(&g, &lam).unwrap();
            let rhs = alg
                .multiply(&alg.t(&glam).unwrap(), &alg.u(&grest).unwrap())
                .unwrap();
            assert!(approx_eq(&lhs, &rhs, 1e-12));
        }
    }
}

#[test]
fn adjoint_is_involutive_and_antimultiplicative() {
    let action = fixtures::basilica();
    let alg = StarAlg::new(&action);
    let kg = action.kgraph();
    let gp = alg.groupoid();
    let g = gp.generator_by_name("bv").unwrap();
    let lam = kg.normalize_names(&["e3", "f1"]).unwrap();
    let mu = kg.normalize_names(&["e3"]).unwrap();
    let b = alg.span(&lam, &g, &mu).unwrap();
    let c = alg.u(&gp.generator_by_name("av").unwrap()).unwrap();
    assert!(approx_eq(&alg.adjoint(&alg.adjoint(&b).unwrap()).unwrap(), &b, 1e-12));
    let lhs = alg.adjoint(&alg.multiply(&b, &c).unwrap()).unwrap();
    let rhs = alg
        .multiply(&alg.adjoint(&c).unwrap(), &alg.adjoint(&b).unwrap())
        .unwrap();
    assert!(approx_eq(&lhs, &rhs, 1e-12));
}

#[test]
fn unit_is_multiplicative_identity() {
    let action = fixtures::basilica();
    let alg = StarAlg::new(&action);
    let kg = action.kgraph();
    let gp = alg.groupoid();
    let g = gp.generator_by_name("aw").unwrap();
    let lam = kg.normalize_names(&["e2", "f3"]).unwrap();
    let b = alg
        .span(&lam, &g, &kg.vertex_path(g.dom))
        .unwrap();
    let one = alg.one().unwrap();
    assert!(approx_eq(&alg.multiply(&one, &b).unwrap(), &b, 1e-12));
    assert!(approx_eq(&alg.multiply(&b, &one).unwrap(), &b, 1e-12));
}

#[test]
fn defect_projection_is_idempotent_and_selfadjoint() {
    let action = fixtures::single_vertex();
    let alg = StarAlg::new(&action);
    let p = alg.defect_projection().unwrap();
    assert!(approx_eq(&alg.adjoint(&p).unwrap(), &p, 1e-12));
    let pp = alg.multiply(&p, &p).unwrap();
    assert!(approx_eq(&pp, &p, 1e-9));
}

#[test]
fn ck_defect_is_selfadjoint() {
    let action = fixtures::basilica();
    let alg = StarAlg::new(&action);
    for v in action.kgraph().graph().vertices() {
        let d = alg.ck_defect(v, &Degree(vec![1, 1])).unwrap();
        assert!(approx_eq(&alg.adjoint(&d).unwrap(), &d, 1e-12));
    }
}

#[test]
fn span_rejects_mismatched_triples() {
    let action = fixtures::basilica();
    let alg = StarAlg::new(&action);
    let kg = action.kgraph();
    let gp = alg.groupoid();
    let g = gp.generator_by_name("av").unwrap();
    let w = kg.graph().vertex_by_name("w").unwrap();
    let lam = kg.vertex_path(w);
    assert!(alg.span(&lam, &g, &lam).is_err());
    let _ = GroupoidElement::unit(w);
}
