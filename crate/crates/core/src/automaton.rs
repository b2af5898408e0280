use std::collections::HashMap;

use crate::error::Error;
use crate::graph::{EdgeId, KGraph, ValidationReport, VertexId};
use crate::Result;

/// Index of a generating state in an [`Automaton`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct StateId(pub usize);

/// The restriction of a state along an edge: either another state or
/// the unit at the edge's source vertex.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Restriction {
    State(StateId),
    Unit,
}

/// An edge automaton over a coloured graph.
///
/// Each state `a` carries a range and source vertex and acts as a
/// colour-preserving bijection from edges ranged at its source onto
/// edges ranged at its range, with a restriction state recorded per
/// edge. Vertices act as implicit unit states and are not stored.
#[derive(Clone, Debug)]
pub struct Automaton {
    state_names: Vec<String>,
    state_index: HashMap<String, StateId>,
    range: Vec<VertexId>,
    source: Vec<VertexId>,
    /// (state, in_edge) -> (out_edge, restriction).
    trans: HashMap<(StateId, EdgeId), (EdgeId, Restriction)>,
    /// (state, out_edge) -> in_edge, the inverse of the edge bijection.
    inv: HashMap<(StateId, EdgeId), EdgeId>,
}

impl Automaton {
    /// Build from named states `(id, r, s)` and transition rows
    /// `(state, in_edge, out_edge, restriction)`, where the restriction
    /// names either a state or a vertex (meaning the unit there).
    pub fn new(
        kg: &KGraph,
        states: &[(&str, &str, &str)],
        trans: &[(&str, &str, &str, &str)],
    ) -> Result<Automaton> {
        let g = kg.graph();
        let mut state_index = HashMap::new();
        let mut state_names = Vec::new();
        let mut range = Vec::new();
        let mut source = Vec::new();
        for (name, r, s) in states {
            if g.vertex_by_name(name).is_some() {
                return Err(Error::Schema(format!(
                    "state {name} shadows a vertex name"
                )));
            }
            let rid = g
                .vertex_by_name(r)
                .ok_or_else(|| Error::Schema(format!("state {name}: unknown vertex {r}")))?;
            let sid = g
                .vertex_by_name(s)
                .ok_or_else(|| Error::Schema(format!("state {name}: unknown vertex {s}")))?;
            if state_index
                .insert(name.to_string(), StateId(state_names.len()))
                .is_some()
            {
                return Err(Error::Schema(format!("duplicate state id {name}")));
            }
            state_names.push(name.to_string());
            range.push(rid);
            source.push(sid);
        }
        let mut table = HashMap::new();
        let mut inv = HashMap::new();
        for (st, e_in, e_out, rest) in trans {
            let a = *state_index
                .get(*st)
                .ok_or_else(|| Error::Schema(format!("transition row: unknown state {st}")))?;
            let ein = g
                .edge_by_name(e_in)
                .ok_or_else(|| Error::Schema(format!("transition row: unknown edge {e_in}")))?;
            let eout = g
                .edge_by_name(e_out)
                .ok_or_else(|| Error::Schema(format!("transition row: unknown edge {e_out}")))?;
            let restriction = if let Some(b) = state_index.get(*rest) {
                Restriction::State(*b)
            } else if g.vertex_by_name(rest).is_some() {
                Restriction::Unit
            } else {
                return Err(Error::Schema(format!(
                    "transition row: {rest} names no state or vertex"
                )));
            };
            if let Restriction::Unit = restriction {
                let v = g
                    .vertex_by_name(rest)
                    .expect("checked above");
                if v != g.source(eout) {
                    return Err(Error::Schema(format!(
                        "transition row {st}.{e_in}: unit restriction at {rest} \
                         differs from the source of {e_out}"
                    )));
                }
            }
            if table.insert((a, ein), (eout, restriction)).is_some() {
                return Err(Error::Schema(format!(
                    "duplicate transition row for {st}.{e_in}"
                )));
            }
            inv.insert((a, eout), ein);
        }
        Ok(Automaton {
            state_names,
            state_index,
            range,
            source,
            trans: table,
            inv,
        })
    }

    pub fn state_count(&self) -> usize {
        self.state_names.len()
    }

    pub fn states(&self) -> impl Iterator<Item = StateId> {
        (0..self.state_names.len()).map(StateId)
    }

    pub fn state_name(&self, a: StateId) -> &str {
        &self.state_names[a.0]
    }

    pub fn state_by_name(&self, name: &str) -> Option<StateId> {
        self.state_index.get(name).copied()
    }

    /// The codomain vertex r_A(a).
    pub fn range(&self, a: StateId) -> VertexId {
        self.range[a.0]
    }

    /// The domain vertex s_A(a).
    pub fn source(&self, a: StateId) -> VertexId {
        self.source[a.0]
    }

    /// `(a . e, a|_e)`, defined when r(e) = s_A(a).
    pub fn step(&self, a: StateId, e: EdgeId) -> Option<(EdgeId, Restriction)> {
        self.trans.get(&(a, e)).copied()
    }

    /// The edge e with a . e = out, defined when r(out) = r_A(a).
    pub fn step_back(&self, a: StateId, out: EdgeId) -> Option<EdgeId> {
        self.inv.get(&(a, out)).copied()
    }
}

/// Checks the automaton axioms against a k-graph, reporting every
/// violation with the axiom label it breaks.
pub fn validate_automaton(kg: &KGraph, aut: &Automaton) -> ValidationReport {
    let g = kg.graph();
    let mut report = ValidationReport::default();
    for a in aut.states() {
        let name = aut.state_name(a);
        let dom: Vec<EdgeId> = g.edges_from(aut.source(a)).to_vec();
        // A1: the transition table is defined exactly on edges ranged at
        // s_A(a) and the edge map is a bijection onto r_A(a)E^1.
        let mut images = Vec::new();
        for &e in &dom {
            match aut.step(a, e) {
                None => report.push(format!(
                    "A1: {name} has no transition on edge {}",
                    g.edge_name(e)
                )),
                Some((out, _)) => {
                    if g.range(out) != aut.range(a) {
                        report.push(format!(
                            "A1: {name}.{} = {} is not ranged at r_A({name})",
                            g.edge_name(e),
                            g.edge_name(out)
                        ));
                    }
                    images.push(out);
                }
            }
        }
        for ((b, e), _) in aut.trans.iter() {
            if *b == a && g.range(*e) != aut.source(a) {
                report.push(format!(
                    "A1: {name} has a transition on {} outside its domain",
                    g.edge_name(*e)
                ));
            }
        }
        let mut sorted = images.clone();
        sorted.sort();
        sorted.dedup();
        let mut codom: Vec<EdgeId> = g.edges_from(aut.range(a)).to_vec();
        codom.sort();
        if sorted != codom {
            report.push(format!(
                "A1: the edge map of {name} is not a bijection onto r_A({name})E^1"
            ));
        }
        for &e in &dom {
            let Some((out, rest)) = aut.step(a, e) else {
                continue;
            };
            // A2: colours are preserved.
            if g.colour(out) != g.colour(e) {
                report.push(format!(
                    "A2: {name}.{} = {} changes colour",
                    g.edge_name(e),
                    g.edge_name(out)
                ));
            }
            // A3: the restriction runs from s(e) to s(a . e).
            match rest {
                Restriction::Unit => {
                    if g.source(e) != g.source(out) {
                        report.push(format!(
                            "A3: unit restriction of {name} along {} needs s({}) = s({})",
                            g.edge_name(e),
                            g.edge_name(e),
                            g.edge_name(out)
                        ));
                    }
                }
                Restriction::State(b) => {
                    if aut.source(b) != g.source(e) || aut.range(b) != g.source(out) {
                        report.push(format!(
                            "A3: restriction {} of {name} along {} has wrong endpoints",
                            aut.state_name(b),
                            g.edge_name(e)
                        ));
                    }
                }
            }
        }
        // A5/A6: acting on the two traversals of each square in the
        // domain gives square-equivalent words (A5) with equal final
        // restrictions (A6).
        for &e in &dom {
            for &f in g.edges_from(g.source(e)) {
                if g.colour(f) == g.colour(e) {
                    continue;
                }
                let Some((fp, ep)) = kg.squares().swap(e, f) else {
                    continue;
                };
                let Some((oe, re)) = aut.step(a, e) else {
                    continue;
                };
                let Some((of, rf)) = step_restriction(aut, re, f) else {
                    report.push(format!(
                        "A5: {name} cannot act past {} {}",
                        g.edge_name(e),
                        g.edge_name(f)
                    ));
                    continue;
                };
                let Some((ofp, rfp)) = aut.step(a, fp) else {
                    continue;
                };
                let Some((oep, rep)) = step_restriction(aut, rfp, ep) else {
                    report.push(format!(
                        "A5: {name} cannot act past {} {}",
                        g.edge_name(fp),
                        g.edge_name(ep)
                    ));
                    continue;
                };
                if kg.squares().swap(oe, of) != Some((ofp, oep)) {
                    report.push(format!(
                        "A5: {name} maps the square at {} {} off the square set",
                        g.edge_name(e),
                        g.edge_name(f)
                    ));
                }
                if rf != rep {
                    report.push(format!(
                        "A6: restrictions of {name} over the square at {} {} disagree",
                        g.edge_name(e),
                        g.edge_name(f)
                    ));
                }
            }
        }
    }
    report
}

/// One action step by a restriction letter; units act as the identity.
pub fn step_restriction(
    aut: &Automaton,
    r: Restriction,
    e: EdgeId,
) -> Option<(EdgeId, Restriction)> {
    match r {
        Restriction::Unit => Some((e, Restriction::Unit)),
        Restriction::State(a) => aut.step(a, e),
    }
}
