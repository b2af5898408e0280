use crate::automaton::{step_restriction, validate_automaton, Automaton, Restriction, StateId};
use crate::degree::Degree;
use crate::error::Error;
use crate::graph::{EdgeId, KGraph, Path, ValidationReport};
use crate::Result;

/// A k-graph together with a validated edge automaton acting on it.
#[derive(Clone, Debug)]
pub struct Action {
    kgraph: KGraph,
    automaton: Automaton,
}

impl Action {
    /// Bundle a graph and automaton after checking the automaton axioms.
    pub fn new(kgraph: KGraph, automaton: Automaton) -> Result<Action> {
        validate_automaton(&kgraph, &automaton).into_result()?;
        Ok(Action { kgraph, automaton })
    }

    /// Bundle without validation, for negative-control fixtures.
    pub fn new_unchecked(kgraph: KGraph, automaton: Automaton) -> Action {
        Action { kgraph, automaton }
    }

    pub fn kgraph(&self) -> &KGraph {
        &self.kgraph
    }

    pub fn automaton(&self) -> &Automaton {
        &self.automaton
    }

    /// Act on a path with a restriction letter by folding over its
    /// normal-form word; returns the image path and final restriction.
    pub fn act_letter(&self, r: Restriction, lam: &Path) -> Result<(Path, Restriction)> {
        let (range, expected) = match r {
            Restriction::Unit => (lam.range, lam.range),
            Restriction::State(a) => (self.automaton.range(a), self.automaton.source(a)),
        };
        if lam.range != expected {
            return Err(Error::Domain(format!(
                "path ranged at {} is outside the domain of the acting letter",
                self.kgraph.graph().vertex_name(lam.range)
            )));
        }
        let mut cur = r;
        let mut word = Vec::with_capacity(lam.word.len());
        for &e in &lam.word {
            let (out, next) = step_restriction(&self.automaton, cur, e).ok_or_else(|| {
                Error::Validation(format!(
                    "missing transition on edge {}",
                    self.kgraph.graph().edge_name(e)
                ))
            })?;
            word.push(out);
            cur = next;
        }
        let image = if word.is_empty() {
            self.kgraph.vertex_path(range)
        } else {
            self.kgraph.normalize(&word)?
        };
        Ok((image, cur))
    }

    /// The image a . lam of a path under a state.
    pub fn act_path(&self, a: StateId, lam: &Path) -> Result<Path> {
        Ok(self.act_letter(Restriction::State(a), lam)?.0)
    }

    /// The restriction a|_lam of a state along a path.
    pub fn restrict_path(&self, a: StateId, lam: &Path) -> Result<Restriction> {
        Ok(self.act_letter(Restriction::State(a), lam)?.1)
    }

    /// Checks that acting along every traversal of every path of degree
    /// at most `bound` gives the same image path and restriction.
    pub fn traversal_invariance_check(&self, bound: &Degree) -> ValidationReport {
        let mut report = ValidationReport::default();
        let g = self.kgraph.graph();
        for a in self.automaton.states() {
            for p in Degree::boxed(bound) {
                if p.is_zero() {
                    continue;
                }
                for lam in self.kgraph.paths(Some(self.automaton.source(a)), &p) {
                    let mut results: Vec<(Vec<EdgeId>, Restriction)> = Vec::new();
                    for w in self.kgraph.traversals(&lam) {
                        let mut cur = Restriction::State(a);
                        let mut out = Vec::new();
                        let mut ok = true;
                        for &e in &w {
                            match step_restriction(&self.automaton, cur, e) {
                                Some((o, next)) => {
                                    out.push(o);
                                    cur = next;
                                }
                                None => {
                                    report.push(format!(
                                        "traversal of {} hits a missing transition at {}",
                                        self.kgraph.path_display(&lam),
                                        g.edge_name(e)
                                    ));
                                    ok = false;
                                    break;
                                }
                            }
                        }
                        if !ok {
                            continue;
                        }
                        match self.kgraph.normalize(&out) {
                            Ok(img) => results.push((img.word, cur)),
                            Err(e) => report.push(format!(
                                "image of a traversal of {} does not normalize: {e}",
                                self.kgraph.path_display(&lam)
                            )),
                        }
                    }
                    results.sort_by(|x, y| x.0.cmp(&y.0));
                    results.dedup();
                    if results.len() > 1 {
                        report.push(format!(
                            "traversals of {} under {} give {} distinct results",
                            self.kgraph.path_display(&lam),
                            self.automaton.state_name(a),
                            results.len()
                        ));
                    }
                }
            }
        }
        report
    }
}
