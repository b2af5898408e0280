use std::collections::{BTreeMap, HashMap};

use crate::action::Action;
use crate::degree::Degree;
use crate::graph::Path;
use crate::groupoid::{Groupoid, GroupoidElement};
use crate::Result;

/// The path-space representation truncated at degrees below
/// (level, ..., level): basis vectors are the finite paths of bounded
/// degree, path isometries act by concatenation and partial unitaries
/// by the groupoid action.
pub struct TruncatedRep<'a> {
    pub action: &'a Action,
    pub level: usize,
    pub basis: Vec<Path>,
    index: HashMap<Path, usize>,
}

/// A partial permutation on basis indices: column -> row.
pub type PartialMap = Vec<Option<usize>>;

/// A sparse matrix on basis indices, keyed (row, column).
pub type Sparse = HashMap<(usize, usize), f64>;

pub fn partial_to_sparse(m: &PartialMap) -> Sparse {
    m.iter()
        .enumerate()
        .filter_map(|(col, row)| row.map(|r| ((r, col), 1.0)))
        .collect()
}

pub fn sparse_mul(a: &Sparse, b: &Sparse) -> Sparse {
    let mut by_row: HashMap<usize, Vec<(usize, f64)>> = HashMap::new();
    for (&(r, c), &v) in b {
        by_row.entry(r).or_default().push((c, v));
    }
    let mut out = Sparse::new();
    for (&(r, m), &va) in a {
        if let Some(cols) = by_row.get(&m) {
            for &(c, vb) in cols {
                *out.entry((r, c)).or_insert(0.0) += va * vb;
            }
        }
    }
    out.retain(|_, v| v.abs() > 0.0);
    out
}

pub fn sparse_sub(a: &Sparse, b: &Sparse) -> Sparse {
    let mut out = a.clone();
    for (&k, &v) in b {
        *out.entry(k).or_insert(0.0) -= v;
    }
    out.retain(|_, v| *v != 0.0);
    out
}

pub fn sparse_sup(a: &Sparse) -> f64 {
    a.values().fold(0.0, |m, v| m.max(v.abs()))
}

pub fn sparse_adjoint(a: &Sparse) -> Sparse {
    a.iter().map(|(&(r, c), &v)| ((c, r), v)).collect()
}

impl<'a> TruncatedRep<'a> {
    pub fn build(action: &'a Action, level: usize) -> TruncatedRep<'a> {
        let kg = action.kgraph();
        let bound = Degree::ones(kg.k()).scale(level);
        let mut basis = Vec::new();
        for p in Degree::boxed(&bound) {
            basis.extend(kg.paths(None, &p));
        }
        let index = basis
            .iter()
            .enumerate()
            .map(|(i, lam)| (lam.clone(), i))
            .collect();
        TruncatedRep {
            action,
            level,
            basis,
            index,
        }
    }

    fn bound(&self) -> Degree {
        Degree::ones(self.action.kgraph().k()).scale(self.level)
    }

    /// The truncated concatenation operator of a path.
    pub fn t_map(&self, lam: &Path) -> PartialMap {
        let kg = self.action.kgraph();
        self.basis
            .iter()
            .map(|mu| {
                if mu.range != lam.source {
                    return None;
                }
                let joined = kg.compose(lam, mu).ok()?;
                self.index.get(&joined).copied()
            })
            .collect()
    }

    /// The adjoint of [`TruncatedRep::t_map`]: strips the path prefix.
    pub fn t_star_map(&self, lam: &Path) -> PartialMap {
        let mut out = vec![None; self.basis.len()];
        for (col, row) in self.t_map(lam).iter().enumerate() {
            if let Some(r) = *row {
                out[r] = Some(col);
            }
        }
        out
    }

    /// The partial unitary of a groupoid element.
    pub fn u_map(&self, g: &GroupoidElement) -> Result<PartialMap> {
        let gp = Groupoid::new(self.action);
        let mut out = vec![None; self.basis.len()];
        for (col, mu) in self.basis.iter().enumerate() {
            if mu.range != g.dom {
                continue;
            }
            let image = gp.act(g, mu)?;
            out[col] = self.index.get(&image).copied();
        }
        Ok(out)
    }

    /// Whether a basis column survives truncation after extension by
    /// the given extra degree.
    fn fits(&self, mu: &Path, extra: &Degree) -> bool {
        mu.degree.add(extra).leq(&self.bound())
    }
}

/// Worst residuals of the defining relations in the truncated
/// representation, keyed by relation name. All residuals are exact
/// zeros when the relations hold, because the operators are partial
/// permutations with integer matrix entries.
#[derive(Clone, Debug)]
pub struct RelationReport {
    pub residuals: BTreeMap<String, f64>,
}

impl RelationReport {
    pub fn max_residual(&self) -> f64 {
        self.residuals.values().fold(0.0, |m, v| m.max(*v))
    }
}

/// Checks the generating relations on the truncated representation,
/// comparing only matrix columns unaffected by the truncation.
pub fn relation_report(
    action: &Action,
    level: usize,
    probes: &[GroupoidElement],
) -> Result<RelationReport> {
    let rep = TruncatedRep::build(action, level);
    let kg = action.kgraph();
    let gp = Groupoid::new(action);
    let mut residuals: BTreeMap<String, f64> = BTreeMap::new();
    let mut record = |name: &str, v: f64| {
        let entry = residuals.entry(name.to_string()).or_insert(0.0);
        *entry = entry.max(v);
    };

    // U1: U_g U_h = U_{gh} for composable probes.
    for g in probes {
        for h in probes {
            if g.dom != h.cod {
                continue;
            }
            let gh = gp.compose(g, h)?;
            let lhs = sparse_mul(&partial_to_sparse(&rep.u_map(g)?), &partial_to_sparse(&rep.u_map(h)?));
            let rhs = partial_to_sparse(&rep.u_map(&gh)?);
            record("U1", sparse_sup(&sparse_sub(&lhs, &rhs)));
        }
    }

    // U2: the adjoint of U_g is U_{g^-1}.
    for g in probes {
        let lhs = sparse_adjoint(&partial_to_sparse(&rep.u_map(g)?));
        let rhs = partial_to_sparse(&rep.u_map(&g.inverse())?);
        record("U2", sparse_sup(&sparse_sub(&lhs, &rhs)));
    }

    // U3: the unit partial unitaries sum to the identity.
    {
        let mut total = Sparse::new();
        for v in kg.graph().vertices() {
            let uv = partial_to_sparse(&rep.u_map(&GroupoidElement::unit(v))?);
            for (k, val) in uv {
                *total.entry(k).or_insert(0.0) += val;
            }
        }
        let ident: Sparse = (0..rep.basis.len()).map(|i| ((i, i), 1.0)).collect();
        record("U3", sparse_sup(&sparse_sub(&total, &ident)));
    }

    // TCK1: vertex isometries are the range projections.
    for v in kg.graph().vertices() {
        let tv = partial_to_sparse(&rep.t_map(&kg.vertex_path(v)));
        let expected: Sparse = rep
            .basis
            .iter()
            .enumerate()
            .filter(|(_, mu)| mu.range == v)
            .map(|(i, _)| ((i, i), 1.0))
            .collect();
        record("TCK1", sparse_sup(&sparse_sub(&tv, &expected)));
    }

    // TCK2: concatenation is multiplicative on untruncated columns.
    for lam in &rep.basis {
        for mu in &rep.basis {
            if lam.source != mu.range {
                continue;
            }
            let Ok(joined) = kg.compose(lam, mu) else { continue };
            if !joined.degree.leq(&rep.bound()) {
                continue;
            }
            let lhs_l = rep.t_map(lam);
            let lhs_m = rep.t_map(mu);
            let rhs = rep.t_map(&joined);
            for (col, xi) in rep.basis.iter().enumerate() {
                if !rep.fits(xi, &joined.degree) {
                    continue;
                }
                let lhs = lhs_m[col].and_then(|mid| lhs_l[mid]);
                if lhs != rhs[col] {
                    record("TCK2", 1.0);
                }
            }
        }
    }

    // TCK3: t_lam* t_mu expands over minimal common extensions, on
    // columns short enough that no extension is truncated.
    for lam in &rep.basis {
        for mu in &rep.basis {
            if lam.range != mu.range {
                continue;
            }
            let join = lam.degree.join(&mu.degree);
            let Some(headroom) = rep.bound().checked_sub(&join) else {
                continue;
            };
            let lhs = sparse_mul(
                &partial_to_sparse(&rep.t_star_map(lam)),
                &partial_to_sparse(&rep.t_map(mu)),
            );
            let mut rhs = Sparse::new();
            for (eta, zeta) in kg.lambda_min(lam, mu) {
                let prod = sparse_mul(
                    &partial_to_sparse(&rep.t_map(&eta)),
                    &partial_to_sparse(&rep.t_star_map(&zeta)),
                );
                for (k, v) in prod {
                    *rhs.entry(k).or_insert(0.0) += v;
                }
            }
            let diff = sparse_sub(&lhs, &rhs);
            let mut worst = 0.0f64;
            for (&(_, col), &v) in &diff {
                if rep.basis[col].degree.leq(&headroom) {
                    worst = worst.max(v.abs());
                }
            }
            record("TCK3", worst);
        }
    }

    // UT: U_g T_lam = T_{g . lam} U_{g|_lam} on untruncated columns.
    for g in probes {
        for lam in &rep.basis {
            if lam.range != g.dom {
                continue;
            }
            let glam = gp.act(g, lam)?;
            let grest = gp.restrict(g, lam)?;
            let lhs_t = rep.t_map(lam);
            let lhs_u = rep.u_map(g)?;
            let rhs_u = rep.u_map(&grest)?;
            let rhs_t = rep.t_map(&glam);
            for (col, xi) in rep.basis.iter().enumerate() {
                if !rep.fits(xi, &lam.degree) {
                    continue;
                }
                let lhs = lhs_t[col].and_then(|mid| lhs_u[mid]);
                let rhs = rhs_u[col].and_then(|mid| rhs_t[mid]);
                if lhs != rhs {
                    record("UT", 1.0);
                }
            }
        }
    }

    // CK: the degree-p range decomposition fixes every basis vector
    // that extends past degree p.
    {
        let p = Degree::ones(kg.k());
        for v in kg.graph().vertices() {
            let mut sum = Sparse::new();
            for muu in kg.paths(Some(v), &p) {
                let prod = sparse_mul(
                    &partial_to_sparse(&rep.t_map(&muu)),
                    &partial_to_sparse(&rep.t_star_map(&muu)),
                );
                for (k, val) in prod {
                    *sum.entry(k).or_insert(0.0) += val;
                }
            }
            let mut worst = 0.0f64;
            for (col, xi) in rep.basis.iter().enumerate() {
                if xi.range != v || !p.leq(&xi.degree) {
                    continue;
                }
                for (row, _) in rep.basis.iter().enumerate() {
                    let got = sum.get(&(row, col)).copied().unwrap_or(0.0);
                    let want = if row == col { 1.0 } else { 0.0 };
                    worst = worst.max((got - want).abs());
                }
            }
            record("CK", worst);
        }
    }

    Ok(RelationReport { residuals })
}
