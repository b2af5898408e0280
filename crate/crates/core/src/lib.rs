//! Self-similar groupoid actions on finite higher-rank graphs.
//!
//! The library builds a k-graph from a coloured graph with a complete
//! associative collection of commuting squares, attaches an edge automaton
//! that generates a groupoid of partial isomorphisms, and computes the
//! equilibrium-state data of the associated operator algebras: spectral
//! radii and the Perron-Frobenius vector, cylinder measures, periodicity
//! certificates, c_g correction constants, Toeplitz partition functions
//! and the unique KMS state at inverse temperature one under the
//! preferred dynamics.
//!
//! Modules are layered bottom-up:
//!
//! - [`degree`], [`graph`]: multidegrees, coloured graphs, square
//!   rewriting, path normal forms and factorization.
//! - [`automaton`], [`action`]: validated edge automata and the bundle
//!   of a graph plus automaton.
//! - [`groupoid`]: words over automaton states, restriction cocycles,
//!   bisimulation equality and closures.
//! - [`staralg`]: the spanning *-algebra of triples t_lam u_g t_mu*.
//! - [`spectral`], [`periodicity`]: Perron-Frobenius data and
//!   periodicity-group certificates.
//! - [`kms`]: c_g limits, partition functions and state evaluators.
//! - [`fockrep`]: truncated path-space representations for relation
//!   checking.
//! - [`fixtures`]: the two bundled worked examples plus negative-control
//!   fixtures used by the test suites.

pub mod action;
pub mod automaton;
pub mod degree;
pub mod error;
pub mod fixtures;
pub mod fockrep;
pub mod graph;
pub mod groupoid;
pub mod kms;
pub mod periodicity;
pub mod spectral;
pub mod staralg;

pub use action::Action;
pub use degree::Degree;
pub use error::Error;
pub use graph::{ColouredGraph, KGraph, Path, SquareSet, ValidationReport};

/// Convenience result alias used across the crate.
pub type Result<T> = std::result::Result<T, Error>;
