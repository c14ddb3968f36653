//! Two-dimensional tropical complexes.
//!
//! A weak tropical surface is a finite, connected, regular Δ-complex of
//! dimension at most two together with an integer structure constant
//! `α(v, e)` for every endpoint `v` of every edge `e`, subject to
//! `α(v, e) + α(w, e) = deg(e)`. It is a tropical surface when every local
//! intersection matrix has exactly one positive eigenvalue.
//!
//! The crate validates complexes, classifies structure constants by exact
//! inertia, attaches triangles to repair semidefinite vertices, computes
//! linear functions and sections of the quotient sheaf, recognizes
//! manifold-with-fins-and-ornaments decompositions, and searches bounded
//! windows of structure constants exhaustively.

pub mod blowup;
pub mod cli;
pub mod complex;
pub mod inertia;
pub mod linalg;
pub mod recognizer;
pub mod search;
pub mod sheaf;
pub mod topology;
pub mod tropical;

pub use complex::{build_complex, ComplexError, DeltaComplex2, EdgeId, FacetId, Fixture, VertexId};
pub use inertia::{inertia, Inertia, SymmetricRationalMatrix};
