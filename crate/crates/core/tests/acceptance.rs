//! End-to-end checks for the two bundled examples, one printed line per
//! criterion. Run with `--nocapture` to see the lines on success.

use std::time::Instant;

use kgraph_action::automaton::validate_automaton;
use kgraph_action::fixtures;
use kgraph_action::fockrep::relation_report;
use kgraph_action::graph::rewriting_class;
use kgraph_action::groupoid::{groupoid_closure, ClosureTable, Groupoid, GroupoidElement};
use kgraph_action::kms::{
    c_rel, check_kms_condition, f_counts, f_counts_enumerate, measure_total, measure_z,
    toeplitz_partition, toeplitz_state, DynamicsSpec, Kms1State, PerStatus, TraceSpec,
};
use kgraph_action::periodicity::per_trivial_certificate;
use kgraph_action::spectral::compute_spectral;
use kgraph_action::staralg::StarAlg;
use kgraph_action::{Action, Degree, Error};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const GOLDEN: f64 = 1.618033988749895;

fn check<F: FnOnce() -> Result<(), String>>(n: usize, f: F) -> bool {
    match f() {
        Ok(()) => {
            println!("criterion {n}: PASS");
            true
        }
        Err(msg) => {
            println!("criterion {n}: FAIL — {msg}");
            false
        }
    }
}

fn ensure(cond: bool, msg: &str) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.to_string())
    }
}

fn near(a: f64, b: f64, tol: f64, what: &str) -> Result<(), String> {
    ensure(
        (a - b).abs() < tol,
        &format!("{what}: {a} vs {b} (tol {tol:e})"),
    )
}

fn criterion_1() -> Result<(), String> {
    let start = Instant::now();
    let action = fixtures::single_vertex();
    let report = validate_automaton(action.kgraph(), action.automaton());
    ensure(report.ok(), "validation failed")?;
    let gp = Groupoid::new(&action);
    let a = gp.generator_by_name("a").map_err(|e| e.to_string())?;
    let mut table = ClosureTable::new();
    let closure =
        groupoid_closure(&gp, &mut table, &[a.clone()], 100).map_err(|e| e.to_string())?;
    ensure(closure.len() == 2, "closure is not {v, a}")?;
    let aa = gp.compose(&a, &a).map_err(|e| e.to_string())?;
    let unit = GroupoidElement::unit(a.dom);
    ensure(
        gp.equal(&aa, &unit).map_err(|e| e.to_string())?,
        "a^2 != v",
    )?;
    let data = compute_spectral(action.kgraph()).map_err(|e| e.to_string())?;
    let c = c_rel(&action, &data, &a, &unit, 1e-12).map_err(|e| e.to_string())?;
    near(c, 1.0 / 3.0, 1e-9, "c_a")?;
    let state = Kms1State::new(&action, data, 1e-12).map_err(|e| e.to_string())?;
    near(
        state.middle_value(&unit).map_err(|e| e.to_string())?,
        1.0,
        1e-9,
        "phi(u_v)",
    )?;
    near(
        state.middle_value(&a).map_err(|e| e.to_string())?,
        1.0 / 3.0,
        1e-9,
        "phi(u_a)",
    )?;
    ensure(start.elapsed().as_secs_f64() < 5.0, "runtime over 5 s")
}

fn criterion_2() -> Result<(), String> {
    let start = Instant::now();
    let action = fixtures::basilica();
    let report = validate_automaton(action.kgraph(), action.automaton());
    ensure(report.ok(), "validation failed")?;
    let data = compute_spectral(action.kgraph()).map_err(|e| e.to_string())?;
    near(data.rho[0], GOLDEN, 1e-9, "rho_1")?;
    near(data.rho[1], 2.0, 1e-9, "rho_2")?;
    near(data.x[0], 1.0 / GOLDEN, 1e-9, "x(v)")?;
    near(data.x[1], 1.0 / (GOLDEN * GOLDEN), 1e-9, "x(w)")?;
    per_trivial_certificate(&action, &data, 10_000, 20)
        .map_err(|e| format!("no triviality certificate: {e}"))?;
    let gp = Groupoid::new(&action);
    let kg = action.kgraph();
    let c = |name: &str| -> Result<f64, String> {
        let g = gp.generator_by_name(name).map_err(|e| e.to_string())?;
        c_rel(&action, &data, &g, &GroupoidElement::unit(g.dom), 1e-12).map_err(|e| e.to_string())
    };
    near(c("av")?, 0.0, 1e-8, "c_av")?;
    near(c("aw")?, 0.0, 1e-8, "c_aw")?;
    near(c("bv")?, 1.0 / (2.0 * GOLDEN), 1e-8, "c_bv")?;
    near(c("bw")?, 1.0 / (2.0 * GOLDEN * GOLDEN), 1e-8, "c_bw")?;
    let state = Kms1State::new(&action, data, 1e-12).map_err(|e| e.to_string())?;
    let phi = |g: &GroupoidElement| state.middle_value(g).map_err(|e| e.to_string());
    let v = kg.graph().vertex_by_name("v").ok_or("no vertex v")?;
    let w = kg.graph().vertex_by_name("w").ok_or("no vertex w")?;
    near(phi(&GroupoidElement::unit(v))?, 1.0 / GOLDEN, 1e-8, "phi(u_v)")?;
    near(
        phi(&GroupoidElement::unit(w))?,
        1.0 / (GOLDEN * GOLDEN),
        1e-8,
        "phi(u_w)",
    )?;
    near(phi(&gp.generator_by_name("av").unwrap())?, 0.0, 1e-8, "phi(u_av)")?;
    near(phi(&gp.generator_by_name("aw").unwrap())?, 0.0, 1e-8, "phi(u_aw)")?;
    near(
        phi(&gp.generator_by_name("bv").unwrap())?,
        1.0 / (2.0 * GOLDEN),
        1e-8,
        "phi(u_bv)",
    )?;
    near(
        phi(&gp.generator_by_name("bw").unwrap())?,
        1.0 / (2.0 * GOLDEN * GOLDEN),
        1e-8,
        "phi(u_bw)",
    )?;
    ensure(start.elapsed().as_secs_f64() < 30.0, "runtime over 30 s")
}

fn criterion_3() -> Result<(), String> {
    let action = fixtures::single_vertex();
    let gp = Groupoid::new(&action);
    let a = gp.generator_by_name("a").map_err(|e| e.to_string())?;
    let unit = GroupoidElement::unit(a.dom);
    let mut expected: u128 = 2;
    for l in 1..=4usize {
        let total: u128 = f_counts(&action, &a, &unit, l)
            .map_err(|e| e.to_string())?
            .iter()
            .sum();
        ensure(
            total == expected,
            &format!("|F^{l}| = {total}, expected {expected}"),
        )?;
        expected *= 6;
    }
    Ok(())
}

fn span_pool(action: &Action) -> Vec<GroupoidElement> {
    let gp = Groupoid::new(action);
    let mut pool: Vec<GroupoidElement> = action
        .kgraph()
        .graph()
        .vertices()
        .map(GroupoidElement::unit)
        .collect();
    for s in action.automaton().states() {
        let g = gp.generator(s);
        pool.push(g.inverse());
        pool.push(g);
    }
    pool
}

fn criterion_4() -> Result<(), String> {
    let degrees = [
        Degree(vec![0, 0]),
        Degree(vec![1, 0]),
        Degree(vec![0, 1]),
        Degree(vec![2, 0]),
        Degree(vec![1, 1]),
        Degree(vec![0, 2]),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(0x6b6d7331);
    for action in [fixtures::single_vertex(), fixtures::basilica()] {
        let kg = action.kgraph();
        let data = compute_spectral(kg).map_err(|e| e.to_string())?;
        let state = Kms1State::new(&action, data, 1e-12).map_err(|e| e.to_string())?;
        let alg = StarAlg::new(&action);
        let pool = span_pool(&action);
        let random_span = |rng: &mut ChaCha8Rng| {
            let g = pool.choose(rng).unwrap();
            let dl = degrees.choose(rng).unwrap();
            let dm = degrees.choose(rng).unwrap();
            let lams: Vec<_> = kg
                .paths(None, dl)
                .into_iter()
                .filter(|l| l.source == g.cod)
                .collect();
            let mus: Vec<_> = kg
                .paths(None, dm)
                .into_iter()
                .filter(|m| m.source == g.dom)
                .collect();
            match (lams.choose(rng), mus.choose(rng)) {
                (Some(l), Some(m)) => Some((l.clone(), g.clone(), m.clone())),
                _ => None,
            }
        };
        let mut checked = 0;
        while checked < 200 {
            let (Some((lam, g, mu)), Some((nu, h, xi))) =
                (random_span(&mut rng), random_span(&mut rng))
            else {
                continue;
            };
            let b = alg.span(&lam, &g, &mu).map_err(|e| e.to_string())?;
            let c = alg.span(&nu, &h, &xi).map_err(|e| e.to_string())?;
            let (lhs, rhs) = check_kms_condition(&alg, &state, &b, (&lam.degree, &mu.degree), &c)
                .map_err(|e| e.to_string())?;
            near(lhs, rhs, 1e-8, &format!("equilibrium pair {checked}"))?;
            checked += 1;
        }
    }
    Ok(())
}

fn criterion_5() -> Result<(), String> {
    let action = fixtures::single_vertex();
    let kg = action.kgraph();
    let dynamics = DynamicsSpec {
        beta: 1.0,
        r: vec![4.0f64.ln(), 6.0f64.ln()],
    };
    let trace = TraceSpec::trivial(1);
    let (z, tail) =
        toeplitz_partition(&action, &dynamics, &trace, 1e-10).map_err(|e| e.to_string())?;
    ensure(tail <= 1e-10, "tail bound above 1e-10")?;
    near(z, 6.0, 1e-10 + 1e-12, "Z")?;
    let mut brute = 0.0;
    for p1 in 0..=40 {
        for p2 in 0..=40 {
            brute += (3.0f64 / 4.0).powi(p1) * (1.0f64 / 3.0).powi(p2);
        }
    }
    near(z, brute, 1e-4, "Z vs brute-force box sum")?;
    // State gates: the quasi-free state vanishes off the diagonal and
    // off isotropy.
    let gp = Groupoid::new(&action);
    let u = GroupoidElement::unit(kg.graph().vertex_by_name("v").unwrap());
    let lam = kg.normalize_names(&["e1"]).map_err(|e| e.to_string())?;
    let mu = kg.normalize_names(&["e2"]).map_err(|e| e.to_string())?;
    let off = toeplitz_state(&action, &dynamics, &trace, &lam, &u, &mu, 1e-11)
        .map_err(|e| e.to_string())?;
    ensure(off == 0.0, "state nonzero off the diagonal")?;
    let a = gp.generator_by_name("a").unwrap();
    let v = kg.vertex_path(a.dom);
    let phi_a = toeplitz_state(&action, &dynamics, &trace, &v, &a, &v, 1e-11)
        .map_err(|e| e.to_string())?;
    near(phi_a, 0.25, 1e-9, "phi_tau(u_a)")?;
    let obstructed = fixtures::invariance_obstruction();
    let gp2 = Groupoid::new(&obstructed);
    let c = gp2.generator_by_name("c").unwrap();
    let d2 = DynamicsSpec {
        beta: 1.0,
        r: vec![4.0f64.ln()],
    };
    let val = toeplitz_state(
        &obstructed,
        &d2,
        &TraceSpec::trivial(2),
        &obstructed.kgraph().vertex_path(c.cod),
        &c,
        &obstructed.kgraph().vertex_path(c.dom),
        1e-10,
    )
    .map_err(|e| e.to_string())?;
    ensure(val == 0.0, "state nonzero off isotropy")
}

fn criterion_6() -> Result<(), String> {
    for action in [fixtures::single_vertex(), fixtures::basilica()] {
        let kg = action.kgraph();
        let data = compute_spectral(kg).map_err(|e| e.to_string())?;
        for p in Degree::boxed(&Degree(vec![3, 3])) {
            near(
                measure_total(&action, &data, &p),
                1.0,
                1e-10,
                &format!("total mass at degree {p}"),
            )?;
        }
        // Three-case agreement with direct computations.
        let gp = Groupoid::new(&action);
        for lam in kg.paths(None, &Degree(vec![1, 1])) {
            let u = GroupoidElement::unit(lam.source);
            let m = measure_z(&action, &data, &lam, &u, &lam, &PerStatus::Trivial)
                .map_err(|e| e.to_string())?;
            near(m, data.measure_cylinder(&lam), 1e-12, "diagonal unit case")?;
            for mu in kg.paths(None, &Degree(vec![1, 0])) {
                if mu.source == lam.source {
                    let m = measure_z(&action, &data, &lam, &u, &mu, &PerStatus::Trivial)
                        .map_err(|e| e.to_string())?;
                    ensure(m == 0.0, "nonzero mass at distinct degrees")?;
                }
            }
        }
        for s in action.automaton().states() {
            let g = gp.generator(s);
            if g.dom != g.cod {
                continue;
            }
            let v = kg.vertex_path(g.dom);
            let m = measure_z(&action, &data, &v, &g, &v, &PerStatus::Trivial)
                .map_err(|e| e.to_string())?;
            let expected = if gp.equal(&g, &GroupoidElement::unit(g.dom)).unwrap_or(false) {
                data.x[g.dom.0]
            } else {
                c_rel(&action, &data, &g, &GroupoidElement::unit(g.dom), 1e-12)
                    .map_err(|e| e.to_string())?
            };
            near(m, expected, 1e-10, "isotropy case vs direct constant")?;
        }
    }
    Ok(())
}

fn criterion_7() -> Result<(), String> {
    for action in [fixtures::single_vertex(), fixtures::basilica()] {
        let probes = span_pool(&action);
        let report = relation_report(&action, 2, &probes).map_err(|e| e.to_string())?;
        for (label, res) in &report.residuals {
            ensure(*res == 0.0, &format!("{label}: residual {res}"))?;
        }
        let data = compute_spectral(action.kgraph()).map_err(|e| e.to_string())?;
        let state = Kms1State::new(&action, data, 1e-12).map_err(|e| e.to_string())?;
        let alg = StarAlg::new(&action);
        for v in action.kgraph().graph().vertices() {
            for p in Degree::boxed(&Degree(vec![2, 2])) {
                let defect = alg.ck_defect(v, &p).map_err(|e| e.to_string())?;
                let val = state.evaluate(&alg, &defect).map_err(|e| e.to_string())?;
                near(val, 0.0, 1e-9, &format!("boundary defect at {v:?}, {p}"))?;
            }
        }
    }
    Ok(())
}

fn criterion_8() -> Result<(), String> {
    for action in [fixtures::single_vertex(), fixtures::basilica()] {
        let pool = span_pool(&action);
        for g in &pool {
            for h in &pool {
                if g.dom != h.dom {
                    continue;
                }
                for l in 0..=2usize {
                    let fast = f_counts(&action, g, h, l).map_err(|e| e.to_string())?;
                    let slow = f_counts_enumerate(&action, g, h, l).map_err(|e| e.to_string())?;
                    ensure(fast == slow, &format!("count mismatch at l = {l}"))?;
                }
            }
        }
        let kg = action.kgraph();
        for total in 0..=4usize {
            for p in Degree::boxed(&Degree(vec![total.min(4), total.min(4)])) {
                if p.total() != total {
                    continue;
                }
                for lam in kg.paths(None, &p) {
                    if !lam.word.is_empty() {
                        for w in rewriting_class(kg, &lam.word) {
                            let renorm = kg.normalize(&w).map_err(|e| e.to_string())?;
                            ensure(renorm == lam, "rewriting class member normalizes elsewhere")?;
                        }
                    }
                    for q in Degree::boxed(&p) {
                        let (head, tail) = kg.factorize(&lam, &q).map_err(|e| e.to_string())?;
                        ensure(
                            kg.compose(&head, &tail).map_err(|e| e.to_string())? == lam,
                            "factorization does not recompose",
                        )?;
                    }
                }
            }
        }
    }
    Ok(())
}

fn criterion_9() -> Result<(), String> {
    let obstructed = fixtures::invariance_obstruction();
    let data = compute_spectral(obstructed.kgraph()).map_err(|e| e.to_string())?;
    match Kms1State::new(&obstructed, data, 1e-12) {
        Err(Error::NoKms1State { .. }) => {}
        other => {
            return Err(format!(
                "non-invariant fixture did not refuse a state: {:?}",
                other.err()
            ))
        }
    }
    let (kg, aut) = fixtures::corrupted_edge_bijection();
    let report = validate_automaton(&kg, &aut);
    ensure(
        report.failures.iter().any(|f| f.starts_with("A1:")),
        "broken bijection not reported as A1",
    )?;
    ensure(
        !report.failures.iter().any(|f| f.starts_with("A6:")),
        "unrelated axiom reported",
    )?;
    let (kg, aut) = fixtures::corrupted_square_restriction();
    let report = validate_automaton(&kg, &aut);
    ensure(
        report.failures.iter().any(|f| f.starts_with("A6:")),
        "broken square restriction not reported as A6",
    )?;
    let action = fixtures::basilica();
    let gp = Groupoid::new(&action);
    let mut table = ClosureTable::new();
    let gens: Vec<_> = action
        .automaton()
        .states()
        .map(|s| gp.generator(s))
        .collect();
    match groupoid_closure(&gp, &mut table, &gens, 50) {
        Err(Error::NotFinite { bound: 50 }) => Ok(()),
        other => Err(format!("expected NotFinite at bound 50, got {other:?}")),
    }
}

#[test]
fn acceptance() {
    let results = [
        check(1, criterion_1),
        check(2, criterion_2),
        check(3, criterion_3),
        check(4, criterion_4),
        check(5, criterion_5),
        check(6, criterion_6),
        check(7, criterion_7),
        check(8, criterion_8),
        check(9, criterion_9),
    ];
    let failed: Vec<usize> = results
        .iter()
        .enumerate()
        .filter(|(_, ok)| !**ok)
        .map(|(i, _)| i + 1)
        .collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
