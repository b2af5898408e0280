use std::collections::{HashMap, HashSet, VecDeque};

use crate::action::Action;
use crate::automaton::{Restriction, StateId};
use crate::error::Error;
use crate::graph::{EdgeId, Path, VertexId};
use crate::Result;

/// A state or its inverse, as a letter of a groupoid word.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Letter {
    pub state: StateId,
    pub inv: bool,
}

impl Letter {
    pub fn inverse(self) -> Letter {
        Letter {
            state: self.state,
            inv: !self.inv,
        }
    }
}

/// An element of the groupoid generated by the automaton: a reduced
/// word of letters, applied right to left, together with its domain
/// and codomain vertices. The empty word is the unit at `dom = cod`.
///
/// Words are not canonical — distinct reduced words can act
/// identically — so semantic comparison goes through [`equal`].
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct GroupoidElement {
    pub dom: VertexId,
    pub cod: VertexId,
    pub word: Vec<Letter>,
}

impl GroupoidElement {
    pub fn unit(v: VertexId) -> GroupoidElement {
        GroupoidElement {
            dom: v,
            cod: v,
            word: Vec::new(),
        }
    }

    pub fn is_unit_word(&self) -> bool {
        self.word.is_empty()
    }

    pub fn inverse(&self) -> GroupoidElement {
        GroupoidElement {
            dom: self.cod,
            cod: self.dom,
            word: self.word.iter().rev().map(|l| l.inverse()).collect(),
        }
    }
}

fn reduce(mut word: Vec<Letter>) -> Vec<Letter> {
    let mut out: Vec<Letter> = Vec::with_capacity(word.len());
    for l in word.drain(..) {
        if out.last() == Some(&l.inverse()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

/// Groupoid arithmetic and the action on paths, parameterized by the
/// underlying graph action.
pub struct Groupoid<'a> {
    pub action: &'a Action,
}

impl<'a> Groupoid<'a> {
    pub fn new(action: &'a Action) -> Groupoid<'a> {
        Groupoid { action }
    }

    /// The generator corresponding to an automaton state.
    pub fn generator(&self, a: StateId) -> GroupoidElement {
        let aut = self.action.automaton();
        GroupoidElement {
            dom: aut.source(a),
            cod: aut.range(a),
            word: vec![Letter { state: a, inv: false }],
        }
    }

    pub fn generator_by_name(&self, name: &str) -> Result<GroupoidElement> {
        let aut = self.action.automaton();
        if let Some(a) = aut.state_by_name(name) {
            return Ok(self.generator(a));
        }
        if let Some(v) = self.action.kgraph().graph().vertex_by_name(name) {
            return Ok(GroupoidElement::unit(v));
        }
        Err(Error::Schema(format!("{name} names no state or vertex")))
    }

    /// The composite g h, defined when dom(g) = cod(h).
    pub fn compose(&self, g: &GroupoidElement, h: &GroupoidElement) -> Result<GroupoidElement> {
        if g.dom != h.cod {
            return Err(Error::Domain(format!(
                "compose: dom {} differs from cod {}",
                self.vertex_name(g.dom),
                self.vertex_name(h.cod)
            )));
        }
        let mut word = g.word.clone();
        word.extend_from_slice(&h.word);
        Ok(GroupoidElement {
            dom: h.dom,
            cod: g.cod,
            word: reduce(word),
        })
    }

    pub fn inverse(&self, g: &GroupoidElement) -> GroupoidElement {
        g.inverse()
    }

    fn vertex_name(&self, v: VertexId) -> &str {
        self.action.kgraph().graph().vertex_name(v)
    }

    /// Render an element as a word in state names.
    pub fn display(&self, g: &GroupoidElement) -> String {
        if g.word.is_empty() {
            return format!("id_{}", self.vertex_name(g.dom));
        }
        let aut = self.action.automaton();
        g.word
            .iter()
            .map(|l| {
                let mut s = aut.state_name(l.state).to_string();
                if l.inv {
                    s.push_str("^-1");
                }
                s
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    fn letter_step(&self, l: Letter, e: EdgeId) -> Result<(EdgeId, Option<Letter>)> {
        let aut = self.action.automaton();
        let missing = |edge: EdgeId| {
            Error::Validation(format!(
                "state {} has no transition reaching edge {}",
                aut.state_name(l.state),
                self.action.kgraph().graph().edge_name(edge)
            ))
        };
        if !l.inv {
            let (out, r) = aut.step(l.state, e).ok_or_else(|| missing(e))?;
            let rest = match r {
                Restriction::Unit => None,
                Restriction::State(b) => Some(Letter { state: b, inv: false }),
            };
            Ok((out, rest))
        } else {
            let pre = aut.step_back(l.state, e).ok_or_else(|| missing(e))?;
            let (_, r) = aut.step(l.state, pre).ok_or_else(|| missing(pre))?;
            let rest = match r {
                Restriction::Unit => None,
                Restriction::State(b) => Some(Letter { state: b, inv: true }),
            };
            Ok((pre, rest))
        }
    }

    /// One step of the action: the image edge g . e and the restricted
    /// word g|_e, for an edge ranged at dom(g).
    pub fn act_edge(&self, g: &GroupoidElement, e: EdgeId) -> Result<(EdgeId, GroupoidElement)> {
        let graph = self.action.kgraph().graph();
        if graph.range(e) != g.dom {
            return Err(Error::Domain(format!(
                "edge {} is not ranged at dom(g) = {}",
                graph.edge_name(e),
                self.vertex_name(g.dom)
            )));
        }
        let mut cur = e;
        let mut rest = Vec::with_capacity(g.word.len());
        for l in g.word.iter().rev() {
            let (out, r) = self.letter_step(*l, cur)?;
            cur = out;
            if let Some(r) = r {
                rest.push(r);
            }
        }
        rest.reverse();
        Ok((
            cur,
            GroupoidElement {
                dom: graph.source(e),
                cod: graph.source(cur),
                word: reduce(rest),
            },
        ))
    }

    fn act_and_restrict(&self, g: &GroupoidElement, lam: &Path) -> Result<(Path, GroupoidElement)> {
        if lam.range != g.dom {
            return Err(Error::Domain(format!(
                "path ranged at {} is outside dom(g) = {}",
                self.vertex_name(lam.range),
                self.vertex_name(g.dom)
            )));
        }
        let kg = self.action.kgraph();
        let mut cur = g.clone();
        let mut word = Vec::with_capacity(lam.word.len());
        for &e in &lam.word {
            let (out, next) = self.act_edge(&cur, e)?;
            word.push(out);
            cur = next;
        }
        let image = if word.is_empty() {
            kg.vertex_path(g.cod)
        } else {
            kg.normalize(&word)?
        };
        Ok((image, cur))
    }

    /// The image g . lam, defined when r(lam) = dom(g).
    pub fn act(&self, g: &GroupoidElement, lam: &Path) -> Result<Path> {
        Ok(self.act_and_restrict(g, lam)?.0)
    }

    /// The restriction g|_lam, defined when r(lam) = dom(g).
    pub fn restrict(&self, g: &GroupoidElement, lam: &Path) -> Result<GroupoidElement> {
        Ok(self.act_and_restrict(g, lam)?.1)
    }

    /// Semantic equality by bisimulation: two elements are equal when
    /// they share domain and codomain, act identically on every edge,
    /// and all corresponding restrictions are again equal.
    ///
    /// Word restriction never increases word length, so the reachable
    /// pair set is finite and the search terminates; the depth and
    /// budget caps only guard against pathological blowup, reporting
    /// [`Error::Undecided`] when hit.
    pub fn equal(&self, g: &GroupoidElement, h: &GroupoidElement) -> Result<bool> {
        self.equal_bounded(g, h, 32, 20_000)
    }

    pub fn equal_bounded(
        &self,
        g: &GroupoidElement,
        h: &GroupoidElement,
        depth: usize,
        budget: usize,
    ) -> Result<bool> {
        if g.dom != h.dom || g.cod != h.cod {
            return Ok(false);
        }
        let graph = self.action.kgraph().graph();
        let mut seen: HashSet<(Vec<Letter>, Vec<Letter>)> = HashSet::new();
        let mut queue = VecDeque::from([(g.clone(), h.clone(), 0usize)]);
        seen.insert((g.word.clone(), h.word.clone()));
        while let Some((p, q, d)) = queue.pop_front() {
            if d >= depth {
                return Err(Error::Undecided {
                    depth,
                    budget,
                });
            }
            for &e in graph.edges_from(p.dom) {
                let (pe, pr) = self.act_edge(&p, e)?;
                let (qe, qr) = self.act_edge(&q, e)?;
                if pe != qe || pr.cod != qr.cod {
                    return Ok(false);
                }
                if pr.word == qr.word {
                    continue;
                }
                if seen.insert((pr.word.clone(), qr.word.clone())) {
                    if seen.len() > budget {
                        return Err(Error::Undecided { depth, budget });
                    }
                    queue.push_back((pr, qr, d + 1));
                }
            }
        }
        Ok(true)
    }
}

/// An interner assigning canonical ids to groupoid elements up to
/// semantic equality.
pub struct ClosureTable {
    reps: Vec<GroupoidElement>,
    cache: HashMap<(VertexId, VertexId, Vec<Letter>), usize>,
}

impl ClosureTable {
    pub fn new() -> ClosureTable {
        ClosureTable {
            reps: Vec::new(),
            cache: HashMap::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn rep(&self, id: usize) -> &GroupoidElement {
        &self.reps[id]
    }

    pub fn reps(&self) -> &[GroupoidElement] {
        &self.reps
    }

    /// The canonical id of an element, comparing against existing
    /// representatives by bisimulation.
    pub fn intern(&mut self, gp: &Groupoid<'_>, g: &GroupoidElement) -> Result<usize> {
        let key = (g.dom, g.cod, g.word.clone());
        if let Some(&id) = self.cache.get(&key) {
            return Ok(id);
        }
        for (id, rep) in self.reps.iter().enumerate() {
            if rep.dom == g.dom && rep.cod == g.cod && gp.equal(rep, g)? {
                self.cache.insert(key, id);
                return Ok(id);
            }
        }
        let id = self.reps.len();
        self.reps.push(g.clone());
        self.cache.insert(key, id);
        Ok(id)
    }
}

impl Default for ClosureTable {
    fn default() -> Self {
        ClosureTable::new()
    }
}

/// All distinct restrictions of `g` along finite paths, including `g`
/// itself, up to semantic equality. Errors with
/// [`Error::NotFiniteState`] if more than `bound` elements appear.
pub fn restriction_closure(
    gp: &Groupoid<'_>,
    table: &mut ClosureTable,
    g: &GroupoidElement,
    bound: usize,
) -> Result<Vec<usize>> {
    let graph = gp.action.kgraph().graph();
    let mut found = Vec::new();
    let mut seen = HashSet::new();
    let root = table.intern(gp, g)?;
    seen.insert(root);
    found.push(root);
    let mut queue = VecDeque::from([root]);
    while let Some(id) = queue.pop_front() {
        let cur = table.rep(id).clone();
        for &e in graph.edges_from(cur.dom) {
            let (_, rest) = gp.act_edge(&cur, e)?;
            let rid = table.intern(gp, &rest)?;
            if seen.insert(rid) {
                if found.len() >= bound {
                    return Err(Error::NotFiniteState { bound });
                }
                found.push(rid);
                queue.push_back(rid);
            }
        }
    }
    Ok(found)
}

/// The groupoid generated by the given elements and the units: the
/// closure under inversion, composition and restriction along edges.
/// Errors with [`Error::NotFinite`] if more than `bound` distinct
/// elements appear.
pub fn groupoid_closure(
    gp: &Groupoid<'_>,
    table: &mut ClosureTable,
    generators: &[GroupoidElement],
    bound: usize,
) -> Result<Vec<usize>> {
    let graph = gp.action.kgraph().graph();
    let mut found: Vec<usize> = Vec::new();
    let mut seen = HashSet::new();
    let mut queue = VecDeque::new();
    let push = |table: &mut ClosureTable,
                    gp: &Groupoid<'_>,
                    g: &GroupoidElement,
                    found: &mut Vec<usize>,
                    seen: &mut HashSet<usize>,
                    queue: &mut VecDeque<usize>|
     -> Result<()> {
        let id = table.intern(gp, g)?;
        if seen.insert(id) {
            if found.len() >= bound {
                return Err(Error::NotFinite { bound });
            }
            found.push(id);
            queue.push_back(id);
        }
        Ok(())
    };
    for v in graph.vertices() {
        push(
            table,
            gp,
            &GroupoidElement::unit(v),
            &mut found,
            &mut seen,
            &mut queue,
        )?;
    }
    for g in generators {
        push(table, gp, g, &mut found, &mut seen, &mut queue)?;
    }
    while let Some(id) = queue.pop_front() {
        let cur = table.rep(id).clone();
        push(table, gp, &cur.inverse(), &mut found, &mut seen, &mut queue)?;
        for &e in graph.edges_from(cur.dom) {
            let (_, rest) = gp.act_edge(&cur, e)?;
            push(table, gp, &rest, &mut found, &mut seen, &mut queue)?;
        }
        // Compose with everything found so far, in both orders.
        for i in 0..found.len() {
            let other = table.rep(found[i]).clone();
            if cur.dom == other.cod {
                let prod = gp.compose(&cur, &other)?;
                push(table, gp, &prod, &mut found, &mut seen, &mut queue)?;
            }
            if other.dom == cur.cod {
                let prod = gp.compose(&other, &cur)?;
                push(table, gp, &prod, &mut found, &mut seen, &mut queue)?;
            }
        }
    }
    Ok(found)
}
