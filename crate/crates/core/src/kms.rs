use std::cell::RefCell;
use std::collections::HashMap;

use crate::action::Action;
use crate::degree::Degree;
use crate::error::Error;
use crate::graph::{Path, VertexId};
use crate::groupoid::{ClosureTable, Groupoid, GroupoidElement};
use crate::periodicity::{collect_probe_elements, theta_h, PeriodicityWitness};
use crate::spectral::SpectralData;
use crate::staralg::{AlgElement, StarAlg};
use crate::Result;

/// Inverse temperature and dynamics exponents, one per colour.
#[derive(Clone, Debug)]
pub struct DynamicsSpec {
    pub beta: f64,
    pub r: Vec<f64>,
}

impl DynamicsSpec {
    /// The preferred dynamics: inverse temperature one with exponents
    /// the log spectral radii.
    pub fn preferred(spectral: &SpectralData) -> DynamicsSpec {
        DynamicsSpec {
            beta: 1.0,
            r: spectral.rho.iter().map(|r| r.ln()).collect(),
        }
    }

    /// The products beta * r_i entering every exponential weight.
    pub fn beta_r(&self) -> Vec<f64> {
        self.r.iter().map(|ri| self.beta * ri).collect()
    }
}

/// A tracial weight on the groupoid algebra: masses on the unit
/// elements plus optional values on non-unit isotropy.
#[derive(Clone, Debug)]
pub struct TraceSpec {
    /// tau(u_v) per vertex; nonnegative, summing to one.
    pub vertex_mass: Vec<f64>,
    /// Values on non-unit isotropic elements; implicit zero elsewhere.
    pub isotropy: Vec<(GroupoidElement, f64)>,
}

impl TraceSpec {
    /// The trace supported on the units alone, uniformly.
    pub fn trivial(n: usize) -> TraceSpec {
        TraceSpec {
            vertex_mass: vec![1.0 / n as f64; n],
            isotropy: Vec::new(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.vertex_mass.iter().any(|&m| m < 0.0) {
            return Err(Error::Precondition("trace masses must be nonnegative".into()));
        }
        let total: f64 = self.vertex_mass.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::Precondition(format!(
                "trace masses sum to {total}, not one"
            )));
        }
        Ok(())
    }
}

/// Sum of the cylinder measures over all paths of degree p; equals one
/// for every p when the spectral data is exact.
pub fn measure_total(action: &Action, spectral: &SpectralData, p: &Degree) -> f64 {
    action
        .kgraph()
        .paths(None, p)
        .iter()
        .map(|lam| spectral.measure_cylinder(lam))
        .sum()
}

/// Established periodicity structure, as input to the measure formula.
#[derive(Clone, Debug)]
pub enum PerStatus {
    Trivial,
    Witnesses(Vec<PeriodicityWitness>),
}

/// The Perron-Frobenius measure of the set of infinite paths x with
/// x = lam (g . y) = mu y for some y, by the three-case formula.
///
/// With trivial periodicity the set is null unless lam = mu, in which
/// case the measure is the cylinder mass of mu corrected by the
/// fixed-path constant of g. With a witness whose degrees match
/// (d(lam), d(mu)), mu must be the shift pairing of lam and g is
/// compared against the pairing element.
pub fn measure_z(
    action: &Action,
    spectral: &SpectralData,
    lam: &Path,
    g: &GroupoidElement,
    mu: &Path,
    status: &PerStatus,
) -> Result<f64> {
    if g.dom != mu.source || g.cod != lam.source {
        return Err(Error::Domain(
            "measure_z needs dom(g) = s(mu) and cod(g) = s(lam)".into(),
        ));
    }
    let gp = Groupoid::new(action);
    let neg: Vec<i64> = mu.degree.0.iter().map(|&c| -(c as i64)).collect();
    let cyl = spectral.rho_pow(&neg);
    let compare = |h: &GroupoidElement| -> Result<f64> {
        if gp.equal(g, h)? {
            Ok(cyl * spectral.x[mu.source.0])
        } else {
            Ok(cyl * c_rel(action, spectral, g, h, 1e-12)?)
        }
    };
    if lam.degree == mu.degree {
        if lam != mu {
            return Ok(0.0);
        }
        return compare(&GroupoidElement::unit(mu.source));
    }
    match status {
        PerStatus::Trivial => Ok(0.0),
        PerStatus::Witnesses(ws) => {
            let witness = ws
                .iter()
                .find(|w| w.p == lam.degree && w.q == mu.degree)
                .ok_or_else(|| {
                    Error::Inconclusive(
                        "no periodicity witness matches the degree pair".into(),
                    )
                })?;
            let (theta, h) = theta_h(action, witness, lam)?;
            if &theta != mu {
                return Ok(0.0);
            }
            compare(&h)
        }
    }
}

/// The relative fixed-path constant of a pair (g, h) with common
/// domain: the limit over block length l of
/// rho^{-l(1,..,1)} * sum of x(s(lam)) over lam of degree l(1,..,1)
/// with g . lam = h . lam.
///
/// Driven by a pair machine over canonical restriction pairs: once the
/// two restrictions agree, every extension stays fixed and the
/// eigenvalue identity makes the absorbed mass constant in l.
pub fn c_rel(
    action: &Action,
    spectral: &SpectralData,
    g: &GroupoidElement,
    h: &GroupoidElement,
    tol: f64,
) -> Result<f64> {
    if g.dom != h.dom {
        return Err(Error::Domain("c_rel needs a common domain".into()));
    }
    if g.cod != h.cod {
        return Ok(0.0);
    }
    let kg = action.kgraph();
    let gp = Groupoid::new(action);
    let mut table = ClosureTable::new();
    let block = Degree::ones(kg.k());
    let rho_block: f64 = spectral.rho.iter().product();
    let pair = |table: &mut ClosureTable, a: &GroupoidElement, b: &GroupoidElement| -> Result<Option<(usize, usize)>> {
        let ia = table.intern(&gp, a)?;
        let ib = table.intern(&gp, b)?;
        Ok(if ia == ib { None } else { Some((ia, ib)) })
    };
    let mut absorbed = 0.0f64;
    let mut active: HashMap<(usize, usize), f64> = HashMap::new();
    match pair(&mut table, g, h)? {
        None => {
            return Err(Error::Precondition(
                "c_rel needs semantically distinct elements; the constant for \
                 g = h is the full eigenvector mass"
                    .into(),
            ))
        }
        Some(key) => {
            active.insert(key, 1.0);
        }
    }
    for _ in 0..100_000 {
        let bound: f64 = active
            .iter()
            .map(|(&(ia, _), w)| w * spectral.x[table.rep(ia).dom.0])
            .sum();
        if bound < tol {
            return Ok(absorbed);
        }
        let mut next: HashMap<(usize, usize), f64> = HashMap::new();
        for (&(ia, ib), &w) in &active {
            let a = table.rep(ia).clone();
            let b = table.rep(ib).clone();
            for nu in kg.paths(Some(a.dom), &block) {
                if gp.act(&a, &nu)? != gp.act(&b, &nu)? {
                    continue;
                }
                let ra = gp.restrict(&a, &nu)?;
                let rb = gp.restrict(&b, &nu)?;
                let wn = w / rho_block;
                match pair(&mut table, &ra, &rb)? {
                    None => absorbed += wn * spectral.x[ra.dom.0],
                    Some(key) => *next.entry(key).or_insert(0.0) += wn,
                }
            }
        }
        active = next;
        if active.is_empty() {
            return Ok(absorbed);
        }
    }
    Err(Error::NotConverged(
        "pair machine did not settle within the iteration cap".into(),
    ))
}

/// Exact counts, per source vertex, of the paths of degree l(1,..,1)
/// from dom(g) on which g and h act identically with equal
/// restrictions, by the same pair machine over integers.
pub fn f_counts(
    action: &Action,
    g: &GroupoidElement,
    h: &GroupoidElement,
    l: usize,
) -> Result<Vec<u128>> {
    if g.dom != h.dom {
        return Err(Error::Domain("f_counts needs a common domain".into()));
    }
    let kg = action.kgraph();
    let gp = Groupoid::new(action);
    let mut table = ClosureTable::new();
    let n = kg.graph().vertex_count();
    let block = Degree::ones(kg.k());
    // Block transfer counts: full[v][w] = #(v Lambda^(1,..,1) w).
    let mut full = vec![vec![0u128; n]; n];
    for u in kg.graph().vertices() {
        for nu in kg.paths(Some(u), &block) {
            full[u.0][nu.source.0] += 1;
        }
    }
    let mut absorbed = vec![0u128; n];
    let mut active: HashMap<(usize, usize), u128> = HashMap::new();
    if g.cod == h.cod {
        let ig = table.intern(&gp, g)?;
        let ih = table.intern(&gp, h)?;
        if ig == ih {
            absorbed[g.dom.0] = 1;
        } else {
            active.insert((ig, ih), 1);
        }
    }
    for _ in 0..l {
        let mut next_abs = vec![0u128; n];
        for (u, &cnt) in absorbed.iter().enumerate() {
            if cnt == 0 {
                continue;
            }
            for (w, next) in next_abs.iter_mut().enumerate() {
                *next += cnt * full[u][w];
            }
        }
        let mut next: HashMap<(usize, usize), u128> = HashMap::new();
        for (&(ia, ib), &cnt) in &active {
            let a = table.rep(ia).clone();
            let b = table.rep(ib).clone();
            for nu in kg.paths(Some(a.dom), &block) {
                if gp.act(&a, &nu)? != gp.act(&b, &nu)? {
                    continue;
                }
                let ra = gp.restrict(&a, &nu)?;
                let rb = gp.restrict(&b, &nu)?;
                let ira = table.intern(&gp, &ra)?;
                let irb = table.intern(&gp, &rb)?;
                if ira == irb {
                    next_abs[ra.dom.0] += cnt;
                } else {
                    *next.entry((ira, irb)).or_insert(0) += cnt;
                }
            }
        }
        absorbed = next_abs;
        active = next;
    }
    Ok(absorbed)
}

/// Brute-force reference for [`f_counts`], enumerating every path and
/// comparing both the actions and the restrictions.
pub fn f_counts_enumerate(
    action: &Action,
    g: &GroupoidElement,
    h: &GroupoidElement,
    l: usize,
) -> Result<Vec<u128>> {
    let kg = action.kgraph();
    let gp = Groupoid::new(action);
    let p = Degree::ones(kg.k()).scale(l);
    let mut counts = vec![0u128; kg.graph().vertex_count()];
    if g.cod != h.cod {
        return Ok(counts);
    }
    for lam in kg.paths(Some(g.dom), &p) {
        if gp.act(g, &lam)? != gp.act(h, &lam)? {
            continue;
        }
        let rg = gp.restrict(g, &lam)?;
        let rh = gp.restrict(h, &lam)?;
        if gp.equal(&rg, &rh)? {
            counts[lam.source.0] += 1;
        }
    }
    Ok(counts)
}

fn mat_inf_norm(m: &[Vec<f64>]) -> f64 {
    m.iter()
        .map(|row| row.iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

fn mat_mul(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = a.len();
    let m = b[0].len();
    let inner = b.len();
    let mut out = vec![vec![0.0; m]; n];
    for i in 0..n {
        for t in 0..inner {
            if a[i][t] == 0.0 {
                continue;
            }
            for j in 0..m {
                out[i][j] += a[i][t] * b[t][j];
            }
        }
    }
    out
}

fn identity(n: usize) -> Vec<Vec<f64>> {
    let mut m = vec![vec![0.0; n]; n];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    m
}

/// Submultiplicative decay certificate for one colour: for all j,
/// ||B^j||_inf <= c * b^j with t = e^{-beta r} * b < 1.
struct TailCertificate {
    c: f64,
    t: f64,
}

fn tail_certificate(b: &[Vec<u64>], beta_r: f64, colour: usize) -> Result<TailCertificate> {
    let bf: Vec<Vec<f64>> = b
        .iter()
        .map(|row| row.iter().map(|&v| v as f64).collect())
        .collect();
    let damp = (-beta_r).exp();
    let mut powers = vec![identity(b.len())];
    for m in 1..=64usize {
        let next = mat_mul(powers.last().expect("nonempty"), &bf);
        powers.push(next);
        let rate = mat_inf_norm(&powers[m]).powf(1.0 / m as f64);
        if damp * rate < 1.0 {
            let c = powers
                .iter()
                .enumerate()
                .map(|(j, p)| mat_inf_norm(p) / rate.powi(j as i32))
                .fold(0.0, f64::max);
            return Ok(TailCertificate { c, t: damp * rate });
        }
    }
    let rho_est = mat_inf_norm(&powers[64]).powf(1.0 / 64.0);
    Err(Error::Subcritical {
        colour,
        value: beta_r,
        threshold: rho_est.ln(),
    })
}

/// Geometric bound on the weighted sum over all degrees outside the
/// box [0, cap]^k, given per-colour certificates and a scale w.
fn box_tail(certs: &[TailCertificate], cap: usize, w: f64) -> f64 {
    let mut tail = 0.0;
    for i in 0..certs.len() {
        let mut term = w * certs[i].c * certs[i].t.powi(cap as i32 + 1) / (1.0 - certs[i].t);
        for (j, cj) in certs.iter().enumerate() {
            if j != i {
                term *= cj.c / (1.0 - cj.t);
            }
        }
        tail += term;
    }
    tail
}

/// A weighted sum over all of N^k of per-degree values, truncated to a
/// box grown until the certified tail bound drops below the tolerance.
/// `value(q)` must be bounded by the product of colour matrix norms
/// times `scale`.
fn certified_sum(
    k: usize,
    certs: &[TailCertificate],
    scale: f64,
    tol: f64,
    mut value: impl FnMut(&Degree) -> f64,
) -> Result<(f64, f64)> {
    let mut cap = 4usize;
    loop {
        let tail = box_tail(certs, cap, scale);
        if tail < tol {
            let mut total = 0.0;
            for q in Degree::boxed(&Degree(vec![cap; k])) {
                total += value(&q);
            }
            return Ok((total, tail));
        }
        cap += 4;
        if cap > 400 {
            return Err(Error::NotConverged(
                "tail bound did not reach tolerance within the box cap".into(),
            ));
        }
    }
}

/// The partition function of the quasi-free dynamics at the given
/// inverse temperature: the weighted count of all paths, traced
/// against the vertex masses. Returns the value and the certified
/// truncation bound.
pub fn toeplitz_partition(
    action: &Action,
    dynamics: &DynamicsSpec,
    trace: &TraceSpec,
    tol: f64,
) -> Result<(f64, f64)> {
    trace.validate()?;
    let kg = action.kgraph();
    let k = kg.k();
    let n = kg.graph().vertex_count();
    let beta_r = dynamics.beta_r();
    let b: Vec<Vec<Vec<u64>>> = (1..=k).map(|i| kg.adjacency(i)).collect();
    let certs: Vec<TailCertificate> = (0..k)
        .map(|i| tail_certificate(&b[i], beta_r[i], i + 1))
        .collect::<Result<_>>()?;
    let scale = n as f64 * trace.vertex_mass.iter().fold(0.0f64, |m, &v| m.max(v));
    let bf: Vec<Vec<Vec<f64>>> = b
        .iter()
        .map(|m| {
            m.iter()
                .map(|row| row.iter().map(|&v| v as f64).collect())
                .collect()
        })
        .collect();
    certified_sum(k, &certs, scale, tol, |q| {
        let mut vec = trace.vertex_mass.clone();
        for i in 0..k {
            for _ in 0..q.0[i] {
                vec = bf[i]
                    .iter()
                    .map(|row| row.iter().zip(&vec).map(|(a, v)| a * v).sum())
                    .collect();
            }
        }
        let weight: f64 = (-beta_r
            .iter()
            .zip(&q.0)
            .map(|(br, &c)| br * c as f64)
            .sum::<f64>())
        .exp();
        weight * vec.iter().sum::<f64>()
    })
}

/// The machine of restriction classes reachable from g along fixed
/// edges: class transition counts per colour, and the trace weight of
/// each class.
struct FixedPathMachine {
    start: usize,
    mats: Vec<Vec<Vec<f64>>>,
    tau: Vec<f64>,
}

fn fixed_path_machine(
    action: &Action,
    g: &GroupoidElement,
    trace: &TraceSpec,
) -> Result<FixedPathMachine> {
    let kg = action.kgraph();
    let gp = Groupoid::new(action);
    let mut table = ClosureTable::new();
    let start = table.intern(&gp, g)?;
    let mut frontier = vec![start];
    let mut edges: Vec<(usize, usize, usize)> = Vec::new();
    let mut seen = vec![start];
    while let Some(id) = frontier.pop() {
        let cur = table.rep(id).clone();
        if cur.dom != cur.cod {
            continue;
        }
        for &e in kg.graph().edges_from(cur.dom) {
            let (out, rest) = gp.act_edge(&cur, e)?;
            if out != e {
                continue;
            }
            let rid = table.intern(&gp, &rest)?;
            edges.push((id, kg.graph().colour(e), rid));
            if !seen.contains(&rid) {
                seen.push(rid);
                frontier.push(rid);
            }
        }
    }
    let index: HashMap<usize, usize> = seen.iter().enumerate().map(|(i, &id)| (id, i)).collect();
    let m = seen.len();
    let mut mats = vec![vec![vec![0.0; m]; m]; kg.k()];
    for (from, colour, to) in edges {
        mats[colour - 1][index[&from]][index[&to]] += 1.0;
    }
    let mut tau = vec![0.0; m];
    for (i, &id) in seen.iter().enumerate() {
        let rep = table.rep(id).clone();
        if rep.dom != rep.cod {
            continue;
        }
        if gp.equal(&rep, &GroupoidElement::unit(rep.dom))? {
            tau[i] = trace.vertex_mass[rep.dom.0];
            continue;
        }
        for (el, value) in &trace.isotropy {
            if gp.equal(&rep, el)? {
                tau[i] = *value;
                break;
            }
        }
    }
    Ok(FixedPathMachine {
        start: index[&start],
        mats,
        tau,
    })
}

/// The value of the quasi-free equilibrium state on a spanning triple,
/// via the weighted fixed-path count of the middle element.
pub fn toeplitz_state(
    action: &Action,
    dynamics: &DynamicsSpec,
    trace: &TraceSpec,
    lam: &Path,
    g: &GroupoidElement,
    mu: &Path,
    tol: f64,
) -> Result<f64> {
    trace.validate()?;
    if lam != mu {
        return Ok(0.0);
    }
    let kg = action.kgraph();
    let k = kg.k();
    let beta_r = dynamics.beta_r();
    let (z, _) = toeplitz_partition(action, dynamics, trace, tol)?;
    let machine = fixed_path_machine(action, g, trace)?;
    let b: Vec<Vec<Vec<u64>>> = (1..=k).map(|i| kg.adjacency(i)).collect();
    let certs: Vec<TailCertificate> = (0..k)
        .map(|i| tail_certificate(&b[i], beta_r[i], i + 1))
        .collect::<Result<_>>()?;
    let scale = trace.vertex_mass.iter().fold(0.0f64, |m, &v| m.max(v));
    let (raw, _) = certified_sum(k, &certs, scale, tol, |q| {
        let m = machine.tau.len();
        let mut row = vec![0.0; m];
        row[machine.start] = 1.0;
        for i in 0..k {
            for _ in 0..q.0[i] {
                let mut next = vec![0.0; m];
                for (s, &w) in row.iter().enumerate() {
                    if w == 0.0 {
                        continue;
                    }
                    for t in 0..m {
                        next[t] += w * machine.mats[i][s][t];
                    }
                }
                row = next;
            }
        }
        let weight: f64 = (-beta_r
            .iter()
            .zip(&q.0)
            .map(|(br, &c)| br * c as f64)
            .sum::<f64>())
        .exp();
        weight * row.iter().zip(&machine.tau).map(|(w, t)| w * t).sum::<f64>()
    })?;
    let outer: f64 = (-beta_r
        .iter()
        .zip(&lam.degree.0)
        .map(|(br, &c)| br * c as f64)
        .sum::<f64>())
    .exp();
    Ok(outer * raw / z)
}

/// Evaluates a full algebra element under [`toeplitz_state`].
pub fn toeplitz_state_eval(
    alg: &StarAlg<'_>,
    dynamics: &DynamicsSpec,
    trace: &TraceSpec,
    a: &AlgElement,
    tol: f64,
) -> Result<f64> {
    let mut total = 0.0;
    for ((lam, gid, mu), coef) in &a.terms {
        let g = alg.middle(*gid);
        total += coef * toeplitz_state(alg.action, dynamics, trace, lam, &g, mu, tol)?;
    }
    Ok(total)
}

/// The equilibrium state of the boundary algebra at inverse
/// temperature one under the preferred dynamics, for actions with
/// trivial periodicity. Construction fails with
/// [`Error::NoKms1State`] when the eigenvector is not invariant under
/// the generated groupoid.
pub struct Kms1State<'a> {
    pub action: &'a Action,
    pub spectral: SpectralData,
    tol: f64,
    cache: RefCell<HashMap<(VertexId, VertexId, Vec<crate::groupoid::Letter>), f64>>,
}

impl<'a> Kms1State<'a> {
    pub fn new(action: &'a Action, spectral: SpectralData, tol: f64) -> Result<Kms1State<'a>> {
        let gp = Groupoid::new(action);
        for g in collect_probe_elements(action)? {
            if !spectral.g_invariance(g.dom, g.cod, 1e-9) {
                return Err(Error::NoKms1State {
                    witness: gp.display(&g),
                });
            }
        }
        Ok(Kms1State {
            action,
            spectral,
            tol,
            cache: RefCell::new(HashMap::new()),
        })
    }

    /// Phi(u_g) for an isotropic g: the fixed-path constant of g
    /// against the unit at its domain.
    pub fn middle_value(&self, g: &GroupoidElement) -> Result<f64> {
        if g.dom != g.cod {
            return Ok(0.0);
        }
        let key = (g.dom, g.cod, g.word.clone());
        if let Some(&v) = self.cache.borrow().get(&key) {
            return Ok(v);
        }
        let gp = Groupoid::new(self.action);
        if gp.equal(g, &GroupoidElement::unit(g.dom))? {
            let value = self.spectral.x[g.dom.0];
            self.cache.borrow_mut().insert(key, value);
            return Ok(value);
        }
        let value = c_rel(
            self.action,
            &self.spectral,
            g,
            &GroupoidElement::unit(g.dom),
            self.tol,
        )?;
        self.cache.borrow_mut().insert(key, value);
        Ok(value)
    }

    /// Phi on a spanning triple.
    pub fn triple_value(&self, lam: &Path, g: &GroupoidElement, mu: &Path) -> Result<f64> {
        if lam != mu {
            return Ok(0.0);
        }
        let neg: Vec<i64> = lam.degree.0.iter().map(|&c| -(c as i64)).collect();
        Ok(self.spectral.rho_pow(&neg) * self.middle_value(g)?)
    }

    /// Phi on a full algebra element.
    pub fn evaluate(&self, alg: &StarAlg<'_>, a: &AlgElement) -> Result<f64> {
        let mut total = 0.0;
        for ((lam, gid, mu), coef) in &a.terms {
            let g = alg.middle(*gid);
            total += coef * self.triple_value(lam, &g, mu)?;
        }
        Ok(total)
    }
}

/// The equilibrium condition at inverse temperature one under the
/// preferred dynamics, specialized to a spanning triple b:
/// Phi(b c) = rho^{-(d(lam)-d(mu))} Phi(c b). Returns both sides.
pub fn check_kms_condition(
    alg: &StarAlg<'_>,
    state: &Kms1State<'_>,
    b: &AlgElement,
    b_deg: (&Degree, &Degree),
    c: &AlgElement,
) -> Result<(f64, f64)> {
    let lhs = state.evaluate(alg, &alg.multiply(b, c)?)?;
    let factor = state.spectral.rho_pow(&b_deg.1.signed_sub(b_deg.0));
    let rhs = factor * state.evaluate(alg, &alg.multiply(c, b)?)?;
    Ok((lhs, rhs))
}

/// The central unitary-like element attached to a periodicity witness:
/// the sum over degree-p paths of t_lam u_{h(lam)} t_{theta(lam)}*,
/// which is the unit when p = q.
pub fn central_element_v(
    alg: &StarAlg<'_>,
    witness: &PeriodicityWitness,
) -> Result<AlgElement> {
    if witness.p == witness.q {
        return alg.one();
    }
    let kg = alg.action.kgraph();
    let mut out = AlgElement::zero();
    for lam in kg.paths(None, &witness.p) {
        let (theta, h) = theta_h(alg.action, witness, &lam)?;
        let term = alg.span(&lam, &h, &theta)?;
        out = alg.add(&out, &term);
    }
    Ok(out)
}
