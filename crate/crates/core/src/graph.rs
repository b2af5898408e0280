use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;

use crate::degree::Degree;
use crate::error::Error;
use crate::Result;

/// Index of a vertex in a [`ColouredGraph`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct VertexId(pub usize);

/// Index of an edge in a [`ColouredGraph`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct EdgeId(pub usize);

/// A finite directed graph with edges coloured 1..=k.
#[derive(Clone, Debug)]
pub struct ColouredGraph {
    k: usize,
    vertex_names: Vec<String>,
    edge_names: Vec<String>,
    range: Vec<VertexId>,
    source: Vec<VertexId>,
    colour: Vec<usize>,
    vertex_index: HashMap<String, VertexId>,
    edge_index: HashMap<String, EdgeId>,
    /// Edges with range v, sorted by (colour, id).
    out_edges: Vec<Vec<EdgeId>>,
}

impl ColouredGraph {
    /// Build a graph from named vertices and edges `(id, r, s, colour)`.
    pub fn new(
        k: usize,
        vertices: &[&str],
        edges: &[(&str, &str, &str, usize)],
    ) -> Result<ColouredGraph> {
        if k == 0 {
            return Err(Error::Schema("k must be at least 1".into()));
        }
        let mut vertex_index = HashMap::new();
        let mut vertex_names = Vec::new();
        for name in vertices {
            if vertex_index
                .insert(name.to_string(), VertexId(vertex_names.len()))
                .is_some()
            {
                return Err(Error::Schema(format!("duplicate vertex id {name}")));
            }
            vertex_names.push(name.to_string());
        }
        let mut edge_index = HashMap::new();
        let mut edge_names = Vec::new();
        let mut range = Vec::new();
        let mut source = Vec::new();
        let mut colour = Vec::new();
        for (name, r, s, c) in edges {
            let rid = *vertex_index
                .get(*r)
                .ok_or_else(|| Error::Schema(format!("edge {name}: unknown range vertex {r}")))?;
            let sid = *vertex_index
                .get(*s)
                .ok_or_else(|| Error::Schema(format!("edge {name}: unknown source vertex {s}")))?;
            if *c < 1 || *c > k {
                return Err(Error::Schema(format!(
                    "edge {name}: colour {c} outside 1..={k}"
                )));
            }
            if edge_index
                .insert(name.to_string(), EdgeId(edge_names.len()))
                .is_some()
            {
                return Err(Error::Schema(format!("duplicate edge id {name}")));
            }
            edge_names.push(name.to_string());
            range.push(rid);
            source.push(sid);
            colour.push(*c);
        }
        let mut out_edges = vec![Vec::new(); vertex_names.len()];
        let mut order: Vec<EdgeId> = (0..edge_names.len()).map(EdgeId).collect();
        order.sort_by_key(|e| (colour[e.0], e.0));
        for e in order {
            out_edges[range[e.0].0].push(e);
        }
        Ok(ColouredGraph {
            k,
            vertex_names,
            edge_names,
            range,
            source,
            colour,
            vertex_index,
            edge_index,
            out_edges,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_names.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        (0..self.vertex_names.len()).map(VertexId)
    }

    pub fn edges(&self) -> impl Iterator<Item = EdgeId> {
        (0..self.edge_names.len()).map(EdgeId)
    }

    pub fn range(&self, e: EdgeId) -> VertexId {
        self.range[e.0]
    }

    pub fn source(&self, e: EdgeId) -> VertexId {
        self.source[e.0]
    }

    pub fn colour(&self, e: EdgeId) -> usize {
        self.colour[e.0]
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertex_names[v.0]
    }

    pub fn edge_name(&self, e: EdgeId) -> &str {
        &self.edge_names[e.0]
    }

    pub fn vertex_by_name(&self, name: &str) -> Option<VertexId> {
        self.vertex_index.get(name).copied()
    }

    pub fn edge_by_name(&self, name: &str) -> Option<EdgeId> {
        self.edge_index.get(name).copied()
    }

    /// Edges with range v, sorted by (colour, id).
    pub fn edges_from(&self, v: VertexId) -> &[EdgeId] {
        &self.out_edges[v.0]
    }

    /// Edges with range v of a fixed colour.
    pub fn edges_from_coloured(&self, v: VertexId, c: usize) -> Vec<EdgeId> {
        self.out_edges[v.0]
            .iter()
            .copied()
            .filter(|&e| self.colour[e.0] == c)
            .collect()
    }
}

/// A complete collection of commuting squares `e f ~ f' e'`.
///
/// Each square relates a 2-coloured path to the unique reversed-colour
/// path. Both orientations are stored in a swap map keyed by the ordered
/// edge pair.
#[derive(Clone, Debug)]
pub struct SquareSet {
    squares: Vec<[EdgeId; 4]>,
    swap: HashMap<(EdgeId, EdgeId), (EdgeId, EdgeId)>,
}

impl SquareSet {
    /// Build from quadruples `(e, f, f', e')` of edge names.
    pub fn new(graph: &ColouredGraph, squares: &[[&str; 4]]) -> Result<SquareSet> {
        let mut list = Vec::new();
        let mut swap = HashMap::new();
        for q in squares {
            let ids: Vec<EdgeId> = q
                .iter()
                .map(|n| {
                    graph
                        .edge_by_name(n)
                        .ok_or_else(|| Error::Schema(format!("square refers to unknown edge {n}")))
                })
                .collect::<Result<_>>()?;
            let (e, f, fp, ep) = (ids[0], ids[1], ids[2], ids[3]);
            let names = || {
                format!(
                    "({}, {}, {}, {})",
                    graph.edge_name(e),
                    graph.edge_name(f),
                    graph.edge_name(fp),
                    graph.edge_name(ep)
                )
            };
            let (ci, cj) = (graph.colour(e), graph.colour(f));
            if ci == cj || graph.colour(ep) != ci || graph.colour(fp) != cj {
                return Err(Error::Schema(format!(
                    "square {} has inconsistent colours",
                    names()
                )));
            }
            let composable = graph.source(e) == graph.range(f)
                && graph.source(fp) == graph.range(ep)
                && graph.range(e) == graph.range(fp)
                && graph.source(f) == graph.source(ep);
            if !composable {
                return Err(Error::Schema(format!(
                    "square {} has mismatched endpoints",
                    names()
                )));
            }
            if swap.insert((e, f), (fp, ep)).is_some() || swap.insert((fp, ep), (e, f)).is_some() {
                return Err(Error::Schema(format!(
                    "square {} overlaps another square on a path",
                    names()
                )));
            }
            list.push([e, f, fp, ep]);
        }
        Ok(SquareSet {
            squares: list,
            swap,
        })
    }

    pub fn squares(&self) -> &[[EdgeId; 4]] {
        &self.squares
    }

    /// The reversed-colour path equivalent to the composable pair `(x, y)`.
    pub fn swap(&self, x: EdgeId, y: EdgeId) -> Option<(EdgeId, EdgeId)> {
        self.swap.get(&(x, y)).copied()
    }
}

/// Result of a structural validation pass.
#[derive(Clone, Debug, Default)]
pub struct ValidationReport {
    pub failures: Vec<String>,
}

impl ValidationReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn push(&mut self, msg: String) {
        self.failures.push(msg);
    }

    pub fn into_result(self) -> Result<()> {
        if self.ok() {
            Ok(())
        } else {
            Err(Error::Validation(self.failures.join("\n")))
        }
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ok() {
            write!(f, "ok")
        } else {
            write!(f, "{}", self.failures.join("\n"))
        }
    }
}

/// A path of the induced higher-rank graph in canonical normal form:
/// the edge word is sorted by colour (all colour-1 edges first).
///
/// Degree-0 paths are vertices and have an empty word.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    pub range: VertexId,
    pub source: VertexId,
    pub degree: Degree,
    pub word: Vec<EdgeId>,
}

impl Path {
    pub fn is_vertex(&self) -> bool {
        self.word.is_empty()
    }
}

impl fmt::Debug for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Path(r={:?}, {:?})", self.range, self.word)
    }
}

/// Checks completeness and associativity of a square collection.
pub fn validate(graph: &ColouredGraph, squares: &SquareSet) -> ValidationReport {
    let mut report = ValidationReport::default();
    // Completeness: every 2-coloured composable pair lies in exactly one
    // square. The swap map construction already rejects duplicates, so
    // only coverage remains to be checked.
    for x in graph.edges() {
        for &y in graph.edges_from(graph.source(x)) {
            if graph.colour(x) != graph.colour(y) && squares.swap(x, y).is_none() {
                report.push(format!(
                    "incomplete: 2-coloured path {} {} lies in no square",
                    graph.edge_name(x),
                    graph.edge_name(y)
                ));
            }
        }
    }
    if !report.ok() {
        return report;
    }
    // Associativity: for every composable triple of distinctly coloured
    // edges the two sort routes must agree. Vacuous for k <= 2.
    if graph.k() >= 3 {
        for x in graph.edges() {
            for &y in graph.edges_from(graph.source(x)) {
                if graph.colour(y) == graph.colour(x) {
                    continue;
                }
                for &z in graph.edges_from(graph.source(y)) {
                    if graph.colour(z) == graph.colour(x) || graph.colour(z) == graph.colour(y) {
                        continue;
                    }
                    let route_a = hexagon_route(squares, [x, y, z], &[0, 1, 0]);
                    let route_b = hexagon_route(squares, [x, y, z], &[1, 0, 1]);
                    if route_a != route_b {
                        report.push(format!(
                            "non-associative triple {} {} {}",
                            graph.edge_name(x),
                            graph.edge_name(y),
                            graph.edge_name(z)
                        ));
                    }
                }
            }
        }
    }
    report
}

fn hexagon_route(
    squares: &SquareSet,
    word: [EdgeId; 3],
    positions: &[usize],
) -> Option<[EdgeId; 3]> {
    let mut w = word;
    for &j in positions {
        let (a, b) = squares.swap(w[j], w[j + 1])?;
        w[j] = a;
        w[j + 1] = b;
    }
    Some(w)
}

/// A validated higher-rank graph: coloured graph plus complete
/// associative squares, with path arithmetic.
#[derive(Clone, Debug)]
pub struct KGraph {
    graph: ColouredGraph,
    squares: SquareSet,
}

impl KGraph {
    pub fn new(graph: ColouredGraph, squares: SquareSet) -> Result<KGraph> {
        validate(&graph, &squares).into_result()?;
        Ok(KGraph { graph, squares })
    }

    pub fn graph(&self) -> &ColouredGraph {
        &self.graph
    }

    pub fn squares(&self) -> &SquareSet {
        &self.squares
    }

    pub fn k(&self) -> usize {
        self.graph.k()
    }

    /// The degree-zero path at a vertex.
    pub fn vertex_path(&self, v: VertexId) -> Path {
        Path {
            range: v,
            source: v,
            degree: Degree::zero(self.k()),
            word: Vec::new(),
        }
    }

    fn word_degree(&self, word: &[EdgeId]) -> Degree {
        let mut d = Degree::zero(self.k());
        for &e in word {
            d.0[self.graph.colour(e) - 1] += 1;
        }
        d
    }

    fn check_composable(&self, word: &[EdgeId]) -> Result<()> {
        for pair in word.windows(2) {
            if self.graph.source(pair[0]) != self.graph.range(pair[1]) {
                return Err(Error::Domain(format!(
                    "edges {} and {} do not compose",
                    self.graph.edge_name(pair[0]),
                    self.graph.edge_name(pair[1])
                )));
            }
        }
        Ok(())
    }

    /// Sort a composable word into colour order using square swaps.
    fn sort_word(&self, word: &mut [EdgeId]) -> Result<()> {
        loop {
            let mut changed = false;
            for j in 0..word.len().saturating_sub(1) {
                if self.graph.colour(word[j]) > self.graph.colour(word[j + 1]) {
                    let (a, b) = self.squares.swap(word[j], word[j + 1]).ok_or_else(|| {
                        Error::Validation(format!(
                            "no square covers {} {}",
                            self.graph.edge_name(word[j]),
                            self.graph.edge_name(word[j + 1])
                        ))
                    })?;
                    word[j] = a;
                    word[j + 1] = b;
                    changed = true;
                }
            }
            if !changed {
                return Ok(());
            }
        }
    }

    fn path_from_sorted(&self, range: VertexId, word: Vec<EdgeId>) -> Path {
        let source = word
            .last()
            .map(|&e| self.graph.source(e))
            .unwrap_or(range);
        Path {
            range,
            source,
            degree: self.word_degree(&word),
            word,
        }
    }

    /// The unique morphism traversed by a composable edge word, in
    /// canonical colour-sorted normal form.
    pub fn normalize(&self, traversal: &[EdgeId]) -> Result<Path> {
        self.check_composable(traversal)?;
        let range = traversal
            .first()
            .map(|&e| self.graph.range(e))
            .ok_or_else(|| Error::Domain("empty traversal has no range; use vertex_path".into()))?;
        let mut word = traversal.to_vec();
        self.sort_word(&mut word)?;
        Ok(self.path_from_sorted(range, word))
    }

    /// Normalize a traversal given by edge names; an empty list is not
    /// allowed (vertices are addressed by name elsewhere).
    pub fn normalize_names(&self, names: &[&str]) -> Result<Path> {
        let word: Vec<EdgeId> = names
            .iter()
            .map(|n| {
                self.graph
                    .edge_by_name(n)
                    .ok_or_else(|| Error::Schema(format!("unknown edge {n}")))
            })
            .collect::<Result<_>>()?;
        self.normalize(&word)
    }

    /// Composition of paths; requires s(lam) = r(mu).
    pub fn compose(&self, lam: &Path, mu: &Path) -> Result<Path> {
        if lam.source != mu.range {
            return Err(Error::Domain(format!(
                "compose: source {} differs from range {}",
                self.graph.vertex_name(lam.source),
                self.graph.vertex_name(mu.range)
            )));
        }
        let mut word = lam.word.clone();
        word.extend_from_slice(&mu.word);
        self.sort_word(&mut word)?;
        Ok(self.path_from_sorted(lam.range, word))
    }

    /// Move the first edge of the given colour to the front of the word
    /// using square swaps, and remove it.
    fn pull_front(&self, word: &mut Vec<EdgeId>, colour: usize) -> Result<EdgeId> {
        let t = word
            .iter()
            .position(|&e| self.graph.colour(e) == colour)
            .ok_or_else(|| Error::Domain(format!("no colour-{colour} edge left to factor")))?;
        for j in (0..t).rev() {
            let (a, b) = self.squares.swap(word[j], word[j + 1]).ok_or_else(|| {
                Error::Validation(format!(
                    "no square covers {} {}",
                    self.graph.edge_name(word[j]),
                    self.graph.edge_name(word[j + 1])
                ))
            })?;
            word[j] = a;
            word[j + 1] = b;
        }
        Ok(word.remove(0))
    }

    /// The unique factorization lam = (head, tail) with d(head) = p.
    pub fn factorize(&self, lam: &Path, p: &Degree) -> Result<(Path, Path)> {
        if !p.leq(&lam.degree) {
            return Err(Error::Precondition(format!(
                "factorize: {p} is not below d = {}",
                lam.degree
            )));
        }
        let mut rest = lam.word.clone();
        let mut head = Vec::new();
        for colour in 1..=self.k() {
            for _ in 0..p.0[colour - 1] {
                head.push(self.pull_front(&mut rest, colour)?);
            }
        }
        self.sort_word(&mut rest)?;
        let head = self.path_from_sorted(lam.range, head);
        let tail = self.path_from_sorted(head.source, rest);
        Ok((head, tail))
    }

    /// The segment lam(p, q) of a path.
    pub fn segment(&self, lam: &Path, p: &Degree, q: &Degree) -> Result<Path> {
        let (_, tail) = self.factorize(lam, p)?;
        let width = q
            .checked_sub(p)
            .ok_or_else(|| Error::Precondition(format!("segment: {p} is not below {q}")))?;
        Ok(self.factorize(&tail, &width)?.0)
    }

    /// All paths of degree p, optionally restricted by range vertex,
    /// in deterministic lexicographic order.
    pub fn paths(&self, from: Option<VertexId>, p: &Degree) -> Vec<Path> {
        let mut partial: Vec<(VertexId, VertexId, Vec<EdgeId>)> = self
            .graph
            .vertices()
            .filter(|v| from.map(|f| f == *v).unwrap_or(true))
            .map(|v| (v, v, Vec::new()))
            .collect();
        for colour in 1..=self.k() {
            for _ in 0..p.0[colour - 1] {
                let mut next = Vec::new();
                for (r, cur, word) in &partial {
                    for e in self.graph.edges_from_coloured(*cur, colour) {
                        let mut w = word.clone();
                        w.push(e);
                        next.push((*r, self.graph.source(e), w));
                    }
                }
                partial = next;
            }
        }
        partial
            .into_iter()
            .map(|(r, _, word)| self.path_from_sorted(r, word))
            .collect()
    }

    /// All paths of degree p with the given source vertex.
    pub fn paths_into(&self, w: VertexId, p: &Degree) -> Vec<Path> {
        self.paths(None, p)
            .into_iter()
            .filter(|lam| lam.source == w)
            .collect()
    }

    /// Minimal common extensions: pairs (eta, zeta) with
    /// lam.eta = mu.zeta of degree d(lam) v d(mu).
    pub fn lambda_min(&self, lam: &Path, mu: &Path) -> Vec<(Path, Path)> {
        if lam.range != mu.range {
            return Vec::new();
        }
        let top = lam.degree.join(&mu.degree);
        let ext = top.checked_sub(&lam.degree).expect("join dominates");
        let mut out = Vec::new();
        for eta in self.paths(Some(lam.source), &ext) {
            let joined = self.compose(lam, &eta).expect("sources match");
            let (head, zeta) = self.factorize(&joined, &mu.degree).expect("degree fits");
            if &head == mu {
                out.push((eta, zeta));
            }
        }
        out
    }

    /// The vertex adjacency matrix of colour i: entry (v, w) counts
    /// edges with range v and source w.
    pub fn adjacency(&self, i: usize) -> Vec<Vec<u64>> {
        let n = self.graph.vertex_count();
        let mut m = vec![vec![0u64; n]; n];
        for e in self.graph.edges() {
            if self.graph.colour(e) == i {
                m[self.graph.range(e).0][self.graph.source(e).0] += 1;
            }
        }
        m
    }

    /// Per-colour no-source check and strong connectivity of the
    /// 1-skeleton.
    pub fn structural_checks(&self) -> StructuralReport {
        let has_no_sources = self.graph.vertices().all(|v| {
            (1..=self.k()).all(|c| !self.graph.edges_from_coloured(v, c).is_empty())
        });
        StructuralReport {
            has_no_sources,
            strongly_connected: self.strongly_connected(),
        }
    }

    fn strongly_connected(&self) -> bool {
        let n = self.graph.vertex_count();
        if n == 0 {
            return false;
        }
        let reach = |forward: bool| -> usize {
            let mut seen = vec![false; n];
            let mut queue = VecDeque::from([VertexId(0)]);
            seen[0] = true;
            let mut count = 1;
            while let Some(v) = queue.pop_front() {
                for e in self.graph.edges() {
                    let (a, b) = if forward {
                        (self.graph.range(e), self.graph.source(e))
                    } else {
                        (self.graph.source(e), self.graph.range(e))
                    };
                    if a == v && !seen[b.0] {
                        seen[b.0] = true;
                        count += 1;
                        queue.push_back(b);
                    }
                }
            }
            count
        };
        reach(true) == n && reach(false) == n
    }

    /// Every edge word traversing the morphism, found by closing the
    /// normal form under adjacent square swaps.
    pub fn traversals(&self, lam: &Path) -> Vec<Vec<EdgeId>> {
        let mut seen: BTreeSet<Vec<EdgeId>> = BTreeSet::new();
        let mut queue = VecDeque::from([lam.word.clone()]);
        seen.insert(lam.word.clone());
        while let Some(w) = queue.pop_front() {
            for j in 0..w.len().saturating_sub(1) {
                if let Some((a, b)) = self.squares.swap(w[j], w[j + 1]) {
                    let mut next = w.clone();
                    next[j] = a;
                    next[j + 1] = b;
                    if seen.insert(next.clone()) {
                        queue.push_back(next);
                    }
                }
            }
        }
        seen.into_iter().collect()
    }

    /// Render a path as comma-separated edge names, or the vertex name.
    pub fn path_display(&self, lam: &Path) -> String {
        if lam.is_vertex() {
            self.graph.vertex_name(lam.range).to_string()
        } else {
            lam.word
                .iter()
                .map(|&e| self.graph.edge_name(e))
                .collect::<Vec<_>>()
                .join(",")
        }
    }
}

/// Output of [`KGraph::structural_checks`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StructuralReport {
    pub has_no_sources: bool,
    pub strongly_connected: bool,
}

/// Exhaustive-rewriting reference: all words equivalent to a traversal,
/// used by tests as the independent oracle for normalize/factorize.
pub fn rewriting_class(kg: &KGraph, traversal: &[EdgeId]) -> HashSet<Vec<EdgeId>> {
    let mut seen: HashSet<Vec<EdgeId>> = HashSet::new();
    let mut queue = VecDeque::from([traversal.to_vec()]);
    seen.insert(traversal.to_vec());
    while let Some(w) = queue.pop_front() {
        for j in 0..w.len().saturating_sub(1) {
            if let Some((a, b)) = kg.squares().swap(w[j], w[j + 1]) {
                let mut next = w.clone();
                next[j] = a;
                next[j + 1] = b;
                if seen.insert(next.clone()) {
                    queue.push_back(next);
                }
            }
        }
    }
    seen
}
