use std::collections::{HashSet, VecDeque};

use crate::action::Action;
use crate::degree::Degree;
use crate::error::Error;
use crate::graph::{KGraph, Path, VertexId};
use crate::groupoid::{restriction_closure, ClosureTable, Groupoid, GroupoidElement};
use crate::spectral::SpectralData;
use crate::Result;

/// A claim that shifting by p agrees with shifting by q after acting
/// by g, on every infinite path ranged at dom(g).
#[derive(Clone, Debug)]
pub struct PeriodicityWitness {
    pub g: GroupoidElement,
    pub p: Degree,
    pub q: Degree,
}

/// Outcome of probing a witness on finite path prefixes.
#[derive(Clone, Debug)]
pub enum WitnessCheck {
    /// A finite path on which the shifted prefixes already disagree.
    Refuted(Path),
    /// All prefixes agree down to the probed depth.
    ConsistentToDepth(usize),
}

/// A certificate that the periodicity group is trivial.
#[derive(Clone, Debug)]
pub struct PerCertificate {
    /// Number of distinct elements in the generated groupoid.
    pub closure_size: usize,
    /// Exponent box over which radius products were separated from one.
    pub max_exponent: i64,
    /// Smallest |sum n_i ln rho_i| over nonzero exponents in the box.
    pub min_log_defect: f64,
}

/// Probes a witness by comparing, for every path x of degree
/// (p v q) + depth * 1 ranged at dom(g), the segment x(p, p + m)
/// against (g . x)(q, q + m) for m = depth * 1.
pub fn check_witness(
    action: &Action,
    witness: &PeriodicityWitness,
    depth: usize,
) -> Result<WitnessCheck> {
    let kg = action.kgraph();
    let gp = Groupoid::new(action);
    let m = Degree::ones(kg.k()).scale(depth);
    let top = witness.p.join(&witness.q).add(&m);
    for x in kg.paths(Some(witness.g.dom), &top) {
        let gx = gp.act(&witness.g, &x)?;
        let left = kg.segment(&x, &witness.p, &witness.p.add(&m))?;
        let right = kg.segment(&gx, &witness.q, &witness.q.add(&m))?;
        if left != right {
            return Ok(WitnessCheck::Refuted(x));
        }
    }
    Ok(WitnessCheck::ConsistentToDepth(depth))
}

/// A path with range `from` and source `to`, found by breadth-first
/// search; exists whenever the graph is strongly connected.
pub fn connecting_path(kg: &KGraph, from: VertexId, to: VertexId) -> Result<Path> {
    if from == to {
        return Ok(kg.vertex_path(from));
    }
    let g = kg.graph();
    let mut seen = HashSet::from([from]);
    let mut queue = VecDeque::from([(from, Vec::new())]);
    while let Some((v, word)) = queue.pop_front() {
        for &e in g.edges_from(v) {
            let s = g.source(e);
            let mut w = word.clone();
            w.push(e);
            if s == to {
                return kg.normalize(&w);
            }
            if seen.insert(s) {
                queue.push_back((s, w));
            }
        }
    }
    Err(Error::Precondition(format!(
        "no path from {} to {}",
        g.vertex_name(from),
        g.vertex_name(to)
    )))
}

/// Transports a witness to the vertex v: the restriction of g along
/// any path from dom(g) to v satisfies the same shift relation.
pub fn transport_witness(
    action: &Action,
    witness: &PeriodicityWitness,
    v: VertexId,
) -> Result<GroupoidElement> {
    let kg = action.kgraph();
    let gp = Groupoid::new(action);
    let lam = connecting_path(kg, witness.g.dom, v)?;
    gp.restrict(&witness.g, &lam)
}

/// The shift pairing of a degree-p path under a witness: the unique
/// (theta, h) with mu (h . x) = theta x for all infinite x, where
/// d(theta) = q.
pub fn theta_h(
    action: &Action,
    witness: &PeriodicityWitness,
    mu: &Path,
) -> Result<(Path, GroupoidElement)> {
    if mu.degree != witness.p {
        return Err(Error::Precondition(format!(
            "theta_h: path degree {} differs from witness degree {}",
            mu.degree, witness.p
        )));
    }
    let kg = action.kgraph();
    let gp = Groupoid::new(action);
    let eta = kg
        .paths_into(mu.range, &witness.q)
        .into_iter()
        .next()
        .ok_or_else(|| {
            Error::Precondition(format!(
                "no path of degree {} into r(mu)",
                witness.q
            ))
        })?;
    let gv = transport_witness(action, witness, eta.range)?;
    let eta_mu = kg.compose(&eta, mu)?;
    let (_zeta, nu) = kg.factorize(&eta_mu, &witness.p)?;
    let w = gp.restrict(&gv, &eta)?.inverse();
    let theta = gp.act(&w, &nu)?;
    let h = gp.restrict(&w, &nu)?.inverse();
    Ok((theta, h))
}

/// Certifies triviality of the periodicity group: every probed
/// groupoid element must be isotropic, and no nonzero bounded integer
/// combination of the log radii may vanish, so no shift disparity can
/// preserve the path-space measure.
///
/// The probe set is the restriction closure of the generators, their
/// inverses and their pairwise products, which stays finite even when
/// the generated groupoid is infinite.
pub fn per_trivial_certificate(
    action: &Action,
    spectral: &SpectralData,
    closure_bound: usize,
    max_exponent: i64,
) -> Result<PerCertificate> {
    let gp = Groupoid::new(action);
    let mut table = ClosureTable::new();
    let mut seeds: Vec<GroupoidElement> = action
        .automaton()
        .states()
        .map(|a| gp.generator(a))
        .collect();
    let singles = seeds.clone();
    for g in &singles {
        seeds.push(g.inverse());
        for h in &singles {
            if g.dom == h.cod {
                seeds.push(gp.compose(g, h)?);
            }
        }
    }
    let mut closure: Vec<usize> = Vec::new();
    for seed in &seeds {
        for id in restriction_closure(&gp, &mut table, seed, closure_bound)? {
            if !closure.contains(&id) {
                closure.push(id);
            }
        }
    }
    for &id in &closure {
        let rep = table.rep(id);
        if rep.dom != rep.cod {
            return Err(Error::Inconclusive(format!(
                "probe element {} is not isotropic",
                gp.display(rep)
            )));
        }
    }
    let logs: Vec<f64> = spectral.rho.iter().map(|r| r.ln()).collect();
    let mut min_defect = f64::INFINITY;
    let bound = Degree(vec![(2 * max_exponent) as usize; logs.len()]);
    for d in Degree::boxed(&bound) {
        let n: Vec<i64> = d.0.iter().map(|&c| c as i64 - max_exponent).collect();
        if n.iter().all(|&c| c == 0) {
            continue;
        }
        let defect: f64 = logs.iter().zip(&n).map(|(l, &c)| l * c as f64).sum();
        min_defect = min_defect.min(defect.abs());
    }
    if min_defect < 1e-9 {
        return Err(Error::Inconclusive(format!(
            "a nonzero radius product is within {min_defect:.3e} of one"
        )));
    }
    Ok(PerCertificate {
        closure_size: closure.len(),
        max_exponent,
        min_log_defect: min_defect,
    })
}

/// Whether the action is certified aperiodic; errors with
/// [`Error::Inconclusive`] when the certificate cannot be established.
pub fn is_g_aperiodic(action: &Action, spectral: &SpectralData) -> Result<bool> {
    per_trivial_certificate(action, spectral, 10_000, 20).map(|_| true)
}

/// Restriction closures of all generators, used as the probe set for
/// measure-invariance checks.
pub fn collect_probe_elements(action: &Action) -> Result<Vec<GroupoidElement>> {
    let gp = Groupoid::new(action);
    let mut table = ClosureTable::new();
    let mut out = Vec::new();
    for a in action.automaton().states() {
        let g = gp.generator(a);
        for id in restriction_closure(&gp, &mut table, &g, 10_000)? {
            out.push(table.rep(id).clone());
        }
    }
    Ok(out)
}
