use std::cell::RefCell;
use std::collections::BTreeMap;

use crate::action::Action;
use crate::degree::Degree;
use crate::error::Error;
use crate::graph::{Path, VertexId};
use crate::groupoid::{ClosureTable, Groupoid, GroupoidElement};
use crate::Result;

const PRUNE: f64 = 1e-12;

/// A finite linear combination of spanning triples t_lam u_g t_mu*,
/// keyed by the normal forms of the outer paths and the canonical id
/// of the middle groupoid element.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct AlgElement {
    pub terms: BTreeMap<(Path, usize, Path), f64>,
}

impl AlgElement {
    pub fn zero() -> AlgElement {
        AlgElement::default()
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.terms.values().all(|c| c.abs() <= tol)
    }

    /// Largest coefficient magnitude.
    pub fn sup_coef(&self) -> f64 {
        self.terms.values().fold(0.0, |m, c| m.max(c.abs()))
    }

    fn insert(&mut self, key: (Path, usize, Path), coef: f64) {
        let entry = self.terms.entry(key.clone()).or_insert(0.0);
        *entry += coef;
        if entry.abs() < PRUNE {
            self.terms.remove(&key);
        }
    }
}

/// The spanning *-algebra of an action: arithmetic on linear
/// combinations of triples t_lam u_g t_mu* with dom(g) = s(mu) and
/// cod(g) = s(lam).
pub struct StarAlg<'a> {
    pub action: &'a Action,
    table: RefCell<ClosureTable>,
}

impl<'a> StarAlg<'a> {
    pub fn new(action: &'a Action) -> StarAlg<'a> {
        StarAlg {
            action,
            table: RefCell::new(ClosureTable::new()),
        }
    }

    pub fn groupoid(&self) -> Groupoid<'a> {
        Groupoid::new(self.action)
    }

    /// The canonical representative of the middle element with a given id.
    pub fn middle(&self, gid: usize) -> GroupoidElement {
        self.table.borrow().rep(gid).clone()
    }

    fn intern(&self, g: &GroupoidElement) -> Result<usize> {
        self.table.borrow_mut().intern(&self.groupoid(), g)
    }

    /// A single spanning triple with coefficient one.
    pub fn span(&self, lam: &Path, g: &GroupoidElement, mu: &Path) -> Result<AlgElement> {
        if g.dom != mu.source || g.cod != lam.source {
            return Err(Error::Domain(
                "spanning triple needs dom(g) = s(mu) and cod(g) = s(lam)".into(),
            ));
        }
        let gid = self.intern(g)?;
        let mut out = AlgElement::zero();
        out.insert((lam.clone(), gid, mu.clone()), 1.0);
        Ok(out)
    }

    /// The isometry t_lam.
    pub fn t(&self, lam: &Path) -> Result<AlgElement> {
        let src = self.action.kgraph().vertex_path(lam.source);
        self.span(lam, &GroupoidElement::unit(lam.source), &src)
    }

    /// The partial unitary u_g.
    pub fn u(&self, g: &GroupoidElement) -> Result<AlgElement> {
        let kg = self.action.kgraph();
        self.span(&kg.vertex_path(g.cod), g, &kg.vertex_path(g.dom))
    }

    /// The unit, the sum of all vertex projections.
    pub fn one(&self) -> Result<AlgElement> {
        let kg = self.action.kgraph();
        let mut out = AlgElement::zero();
        for v in kg.graph().vertices() {
            out = self.add(&out, &self.t(&kg.vertex_path(v))?);
        }
        Ok(out)
    }

    pub fn scale(&self, a: &AlgElement, c: f64) -> AlgElement {
        let mut out = AlgElement::zero();
        for (k, coef) in &a.terms {
            let v = coef * c;
            if v.abs() >= PRUNE {
                out.terms.insert(k.clone(), v);
            }
        }
        out
    }

    pub fn add(&self, a: &AlgElement, b: &AlgElement) -> AlgElement {
        let mut out = a.clone();
        for (k, coef) in &b.terms {
            out.insert(k.clone(), *coef);
        }
        out.terms.retain(|_, c| c.abs() >= PRUNE);
        out
    }

    pub fn sub(&self, a: &AlgElement, b: &AlgElement) -> AlgElement {
        self.add(a, &self.scale(b, -1.0))
    }

    /// The adjoint, sending t_lam u_g t_mu* to t_mu u_{g^-1} t_lam*.
    pub fn adjoint(&self, a: &AlgElement) -> Result<AlgElement> {
        let mut out = AlgElement::zero();
        for ((lam, gid, mu), coef) in &a.terms {
            let ginv = self.middle(*gid).inverse();
            let gid2 = self.intern(&ginv)?;
            out.insert((mu.clone(), gid2, lam.clone()), *coef);
        }
        out.terms.retain(|_, c| c.abs() >= PRUNE);
        Ok(out)
    }

    /// The product, expanded over minimal common extensions of the
    /// inner paths.
    pub fn multiply(&self, a: &AlgElement, b: &AlgElement) -> Result<AlgElement> {
        let kg = self.action.kgraph();
        let gp = self.groupoid();
        let mut out = AlgElement::zero();
        for ((lam, gid, mu), ca) in &a.terms {
            let g = self.middle(*gid);
            for ((nu, hid, xi), cb) in &b.terms {
                let h = self.middle(*hid);
                let coef = ca * cb;
                if coef.abs() < PRUNE {
                    continue;
                }
                let hinv = h.inverse();
                for (eta, zeta) in kg.lambda_min(mu, nu) {
                    let g_eta = gp.act(&g, &eta)?;
                    let g_rest = gp.restrict(&g, &eta)?;
                    let h_zeta = gp.act(&hinv, &zeta)?;
                    let h_rest = gp.restrict(&hinv, &zeta)?.inverse();
                    let left = kg.compose(lam, &g_eta)?;
                    let right = kg.compose(xi, &h_zeta)?;
                    let mid = gp.compose(&g_rest, &h_rest)?;
                    let mid_id = self.intern(&mid)?;
                    out.insert((left, mid_id, right), coef);
                }
            }
        }
        out.terms.retain(|_, c| c.abs() >= PRUNE);
        Ok(out)
    }

    /// Sum over paths of a fixed degree ranged at a vertex of
    /// t_lam t_lam*.
    fn range_projection(&self, v: VertexId, p: &Degree) -> Result<AlgElement> {
        let kg = self.action.kgraph();
        let mut out = AlgElement::zero();
        for lam in kg.paths(Some(v), p) {
            let t = self.t(&lam)?;
            out = self.add(&out, &self.multiply(&t, &self.adjoint(&t)?)?);
        }
        Ok(out)
    }

    /// The boundary-quotient defect projection: the alternating sum
    /// over colour subsets of the range projections of single steps.
    pub fn defect_projection(&self) -> Result<AlgElement> {
        let kg = self.action.kgraph();
        let k = kg.k();
        let mut out = AlgElement::zero();
        for v in kg.graph().vertices() {
            for mask in 0u32..(1 << k) {
                let mut p = Degree::zero(k);
                for i in 0..k {
                    if mask & (1 << i) != 0 {
                        p.0[i] = 1;
                    }
                }
                let sign = if mask.count_ones() % 2 == 0 { 1.0 } else { -1.0 };
                let proj = self.range_projection(v, &p)?;
                out = self.add(&out, &self.scale(&proj, sign));
            }
        }
        Ok(out)
    }

    /// t_v minus the degree-p range decomposition of the vertex
    /// projection; zero in the boundary quotient.
    pub fn ck_defect(&self, v: VertexId, p: &Degree) -> Result<AlgElement> {
        let kg = self.action.kgraph();
        let tv = self.t(&kg.vertex_path(v))?;
        let proj = self.range_projection(v, p)?;
        Ok(self.sub(&tv, &proj))
    }
}
