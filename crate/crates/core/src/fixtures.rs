//! Bundled example actions and negative-control fixtures.
//!
//! `single_vertex` and `basilica` are the two worked examples exposed by
//! the command-line tool; the remaining constructors deliberately break
//! one axiom each and are used as negative controls by the test suites.

use crate::action::Action;
use crate::automaton::Automaton;
use crate::graph::{ColouredGraph, KGraph, SquareSet};

fn build_kgraph(
    k: usize,
    vertices: &[&str],
    edges: &[(&str, &str, &str, usize)],
    squares: &[[&str; 4]],
) -> KGraph {
    let graph = ColouredGraph::new(k, vertices, edges).expect("fixture graph data");
    let squares = SquareSet::new(&graph, squares).expect("fixture square data");
    KGraph::new(graph, squares).expect("fixture squares validate")
}

const SINGLE_VERTEX_EDGES: &[(&str, &str, &str, usize)] = &[
    ("e1", "v", "v", 1),
    ("e2", "v", "v", 1),
    ("e3", "v", "v", 1),
    ("f1", "v", "v", 2),
    ("f2", "v", "v", 2),
];

const SINGLE_VERTEX_SQUARES: &[[&str; 4]] = &[
    ["e1", "f1", "f1", "e1"],
    ["e1", "f2", "f2", "e1"],
    ["e2", "f1", "f1", "e3"],
    ["e2", "f2", "f2", "e2"],
    ["e3", "f1", "f1", "e2"],
    ["e3", "f2", "f2", "e3"],
];

/// One vertex, three edges of the first colour, two of the second, and
/// a single order-two generator that swaps two of the first-colour
/// edges and fixes the second colour with full recursion.
pub fn single_vertex() -> Action {
    let kg = build_kgraph(2, &["v"], SINGLE_VERTEX_EDGES, SINGLE_VERTEX_SQUARES);
    let aut = Automaton::new(
        &kg,
        &[("a", "v", "v")],
        &[
            ("a", "e1", "e1", "v"),
            ("a", "e2", "e3", "v"),
            ("a", "e3", "e2", "v"),
            ("a", "f1", "f1", "a"),
            ("a", "f2", "f2", "a"),
        ],
    )
    .expect("fixture automaton data");
    Action::new(kg, aut).expect("fixture automaton validates")
}

/// Same graph as [`single_vertex`] but with the edge map of the
/// generator made non-injective; fails the bijection axiom (A1).
pub fn corrupted_edge_bijection() -> (KGraph, Automaton) {
    let kg = build_kgraph(2, &["v"], SINGLE_VERTEX_EDGES, SINGLE_VERTEX_SQUARES);
    let aut = Automaton::new(
        &kg,
        &[("a", "v", "v")],
        &[
            ("a", "e1", "e1", "v"),
            ("a", "e2", "e1", "v"),
            ("a", "e3", "e2", "v"),
            ("a", "f1", "f1", "a"),
            ("a", "f2", "f2", "a"),
        ],
    )
    .expect("fixture automaton data");
    (kg, aut)
}

/// Same graph as [`single_vertex`] but one restriction replaced so
/// that the two traversals of a square restrict differently; fails the
/// square-compatibility axiom (A6).
pub fn corrupted_square_restriction() -> (KGraph, Automaton) {
    let kg = build_kgraph(2, &["v"], SINGLE_VERTEX_EDGES, SINGLE_VERTEX_SQUARES);
    let aut = Automaton::new(
        &kg,
        &[("a", "v", "v")],
        &[
            ("a", "e1", "e1", "v"),
            ("a", "e2", "e3", "a"),
            ("a", "e3", "e2", "v"),
            ("a", "f1", "f1", "a"),
            ("a", "f2", "f2", "a"),
        ],
    )
    .expect("fixture automaton data");
    (kg, aut)
}

/// Two vertices with a recursion pattern mirroring the basilica group:
/// the groupoid generated by the `a` and `b` states is infinite.
pub fn basilica() -> Action {
    let kg = build_kgraph(
        2,
        &["v", "w"],
        &[
            ("e1", "w", "v", 1),
            ("e2", "v", "w", 1),
            ("e3", "v", "v", 1),
            ("f1", "v", "v", 2),
            ("f2", "v", "v", 2),
            ("f3", "w", "w", 2),
            ("f4", "w", "w", 2),
        ],
        &[
            ["e1", "f1", "f3", "e1"],
            ["e1", "f2", "f4", "e1"],
            ["e2", "f3", "f1", "e2"],
            ["e2", "f4", "f2", "e2"],
            ["e3", "f1", "f1", "e3"],
            ["e3", "f2", "f2", "e3"],
        ],
    );
    let aut = Automaton::new(
        &kg,
        &[
            ("av", "v", "v"),
            ("aw", "w", "w"),
            ("bv", "v", "v"),
            ("bw", "w", "w"),
        ],
        &[
            ("av", "e2", "e2", "aw"),
            ("av", "e3", "e3", "av"),
            ("av", "f1", "f2", "bv"),
            ("av", "f2", "f1", "v"),
            ("aw", "e1", "e1", "av"),
            ("aw", "f3", "f4", "bw"),
            ("aw", "f4", "f3", "w"),
            ("bv", "e2", "e2", "bw"),
            ("bv", "e3", "e3", "bv"),
            ("bv", "f1", "f1", "av"),
            ("bv", "f2", "f2", "v"),
            ("bw", "e1", "e1", "bv"),
            ("bw", "f3", "f3", "aw"),
            ("bw", "f4", "f4", "w"),
        ],
    )
    .expect("fixture automaton data");
    Action::new(kg, aut).expect("fixture automaton validates")
}

/// A rank-1 graph on two vertices whose unnormalized equilibrium
/// vector separates the vertices, together with a single unvalidated
/// partial isomorphism between them. The vector cannot be invariant
/// under that element, so no equilibrium state at inverse temperature
/// one exists.
pub fn invariance_obstruction() -> Action {
    let graph = ColouredGraph::new(
        1,
        &["v", "w"],
        &[
            ("p", "v", "v", 1),
            ("q1", "v", "w", 1),
            ("q2", "v", "w", 1),
            ("t", "w", "v", 1),
        ],
    )
    .expect("fixture graph data");
    let squares = SquareSet::new(&graph, &[]).expect("empty square data");
    let kg = KGraph::new(graph, squares).expect("rank-1 graph validates");
    let aut = Automaton::new(
        &kg,
        &[("c", "v", "w")],
        &[("c", "t", "p", "v")],
    )
    .expect("fixture automaton data");
    Action::new_unchecked(kg, aut)
}

/// A rank-1 two-cycle with no generators; every vertex supports a
/// shift-periodicity witness with period two.
pub fn two_cycle() -> Action {
    let graph = ColouredGraph::new(
        1,
        &["u1", "u2"],
        &[("c1", "u1", "u2", 1), ("c2", "u2", "u1", 1)],
    )
    .expect("fixture graph data");
    let squares = SquareSet::new(&graph, &[]).expect("empty square data");
    let kg = KGraph::new(graph, squares).expect("rank-1 graph validates");
    let aut = Automaton::new(&kg, &[], &[]).expect("empty automaton");
    Action::new(kg, aut).expect("empty automaton validates")
}

/// Three colours on one vertex with square permutations chosen not to
/// commute, so the two sort routes through a tri-coloured word
/// disagree and validation must fail.
pub fn three_colour_nonassociative() -> (ColouredGraph, SquareSet) {
    let graph = ColouredGraph::new(
        3,
        &["v"],
        &[
            ("a1", "v", "v", 1),
            ("a2", "v", "v", 1),
            ("a3", "v", "v", 1),
            ("b", "v", "v", 2),
            ("c", "v", "v", 3),
        ],
    )
    .expect("fixture graph data");
    let squares = SquareSet::new(
        &graph,
        &[
            ["a1", "b", "b", "a2"],
            ["a2", "b", "b", "a1"],
            ["a3", "b", "b", "a3"],
            ["a1", "c", "c", "a3"],
            ["a2", "c", "c", "a2"],
            ["a3", "c", "c", "a1"],
            ["b", "c", "c", "b"],
        ],
    )
    .expect("fixture square data");
    (graph, squares)
}
